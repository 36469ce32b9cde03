"""Command line front end: ``galeroot <command> --k K --r r12,r13,...``.

Exit codes: 0 ok, 2 bad input, 3 enumeration budget exceeded, 4 theta not
generic, 5 methods disagree or a certificate fails.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from pathlib import Path

from . import __version__
from .betti import g_poly, g_poly_recursive, h_poly, h_poly_recursive
from .graphs import DEFAULT_BUDGET, BudgetExceeded, InstanceError, MultMatrix
from .lattice import (
    NonGenericTheta,
    certify_small,
    default_theta,
    enumerate_faces,
    face_from_id,
    fiber_poincare,
    is_generic,
    stanley_g_poly,
    stanley_h_poly,
    top_components,
)
from .poly import ONE, g_from_h

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_THETA, EXIT_CHECK = 0, 2, 3, 4, 5


class CrossCheckFailure(RuntimeError):
    def __init__(self, msg, payload=None):
        super().__init__(msg)
        self.payload = payload


def parse_ints(text: str | None, what: str) -> list[int] | None:
    if text is None:
        return None
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError:
        raise InstanceError(f"{what} must be a comma separated list of integers") from None


def instance_from_args(args) -> MultMatrix:
    if args.k is None:
        raise InstanceError("--k is required")
    r = parse_ints(args.r, "--r")
    if r is None:
        r = [1] * (args.k * (args.k - 1) // 2)
    return MultMatrix.from_flat(args.k, r)


def theta_from_args(args, R: MultMatrix):
    th = parse_ints(args.theta, "--theta")
    if th is None:
        th = list(default_theta(R.k))
    p = is_generic(R, th)
    if not p.generic:
        raise NonGenericTheta(f"theta={th} is not generic")
    return p


def _instance_json(R: MultMatrix) -> dict:
    return {"k": R.k, "r": R.flat()}


# -- commands -----------------------------------------------------------------

def cmd_compute(R: MultMatrix, what: str, method: str, *, budget=DEFAULT_BUDGET,
                jobs=1, verify=False) -> dict:
    methods = ["graph", "recursion", "stanley"] if method == "all" else [method]
    results = {}
    for m in methods:
        res = {}
        if R.k == 1:
            g = h = ONE
        elif m == "graph":
            g = g_poly(R, budget=budget, jobs=jobs) if what in ("g", "both") else None
            h = h_poly(R, budget=budget, jobs=jobs) if what in ("h", "both") else None
        elif m == "recursion":
            g = g_poly_recursive(R) if what in ("g", "both") else None
            h = h_poly_recursive(R) if what in ("h", "both") else None
        elif m == "stanley":
            g = stanley_g_poly(R) if what in ("g", "both") else None
            h = stanley_h_poly(R) if what in ("h", "both") else None
        else:
            raise InstanceError(f"unknown method {m!r}")
        if what in ("g", "both"):
            res["g"] = g
        if what in ("h", "both"):
            res["h"] = h
        results[m] = res
    out = {"instance": _instance_json(R), "n": R.n, "D": R.D}
    first = results[methods[0]]
    for name in ("g", "h"):
        if name in first:
            out[name] = first[name].to_json()
    if method == "all":
        out["methods"] = {m: {name: p.to_json() for name, p in res.items()}
                          for m, res in results.items()}
        agree = all(res == first for res in results.values())
        if agree and "h" in first and "g" in first and R.k > 1:
            agree = g_from_h(first["h"], R.D) == first["g"]
        out["agree"] = agree
        if not agree:
            raise CrossCheckFailure("methods disagree", out)
    if verify and R.k > 1:
        out["verification"] = _geometry_block(R, faces=False)
    return out


def _geometry_block(R: MultMatrix, faces: bool, lattice=None) -> dict:
    from .geometry import build_gale, verify_faces, verify_gale, verify_unimodular
    gd = build_gale(R)
    block = {"gale": verify_gale(gd, 100), "unimodular": verify_unimodular(gd)}
    if faces:
        block["faces"] = verify_faces(gd, lattice).to_json()
    ok = block["gale"] and block["unimodular"] and (not faces or block["faces"]["ok"])
    block["ok"] = ok
    return block


def cmd_faces(R: MultMatrix, *, budget=DEFAULT_BUDGET, verify=False, summary=False) -> dict:
    L = enumerate_faces(R, budget=budget)
    out = {"instance": _instance_json(R), "D": R.D, "classes": len(L.faces)}
    if not summary:
        out["faces"] = [F.to_json() for F in L.faces]
        out["order"] = [list(pair) for pair in L.order()]
    out["f_vector"] = L.f_vector()
    out["euler"] = L.euler_sum()
    if verify:
        out["verification"] = _geometry_block(R, faces=True, lattice=L)
        if not out["verification"]["ok"]:
            raise CrossCheckFailure("geometry oracle rejected the face lattice", out)
    return out


def cmd_fiber(R: MultMatrix, th, face_id: str) -> dict:
    F = face_from_id(R, face_id)
    rep = fiber_poincare(F, th)
    return {"instance": _instance_json(R), "theta": list(th.theta), "face": F.to_json(),
            "report": rep.to_json()}


def cmd_certify(R: MultMatrix, th, *, budget=DEFAULT_BUDGET) -> dict:
    cert = certify_small(R, th, budget=budget)
    out = {"instance": _instance_json(R)}
    out.update(cert.to_json())
    if not cert.small:
        raise CrossCheckFailure("smallness inequality fails", out)
    return out


def cmd_components(R: MultMatrix, th) -> dict:
    rep = top_components(R, th)
    out = {"instance": _instance_json(R)}
    out.update(rep.to_json())
    out["count"] = len(rep.components)
    return out


def cmd_ring(R: MultMatrix) -> dict:
    from .ringstr import compare_to_g
    cmp = compare_to_g(R)
    out = {"instance": _instance_json(R)}
    out.update(cmp.to_json())
    if not cmp.matches:
        raise CrossCheckFailure("Hilbert function differs from g", out)
    return out


# -- output -------------------------------------------------------------------

def _coeff_row(name, poly_json) -> list:
    return [name] + list(poly_json["coeffs"])


def to_csv(command: str, payload: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if command == "compute":
        if "methods" in payload:
            for m, res in payload["methods"].items():
                for name, pj in res.items():
                    w.writerow(_coeff_row(f"{name}:{m}", pj))
        else:
            for name in ("g", "h"):
                if name in payload:
                    w.writerow(_coeff_row(name, payload[name]))
    elif command == "faces":
        w.writerow(["f_vector"] + payload["f_vector"])
        for F in payload.get("faces", []):
            w.writerow(["face", F["id"], F["dim"], F["multiplicity"]])
    elif command == "fiber":
        w.writerow(_coeff_row("poincare", payload["report"]["poincare"]))
    elif command == "certify":
        w.writerow(["face", "dim", "multiplicity", "fiber_dim", "stratum_codim", "small_ok",
                    "poincare"])
        for r in payload["reports"]:
            w.writerow([r["face"], r["dim"], r["multiplicity"], r["fiber_dim"],
                        r["stratum_codim"], r["small_ok"], " ".join(r["poincare"]["coeffs"])])
    elif command == "components":
        for i, c in enumerate(payload["components"]):
            w.writerow(_coeff_row(f"component{i}", c["poincare"]))
    elif command == "ring":
        w.writerow(_coeff_row("hilbert", payload["hilbert"]))
        w.writerow(_coeff_row("g", payload["g"]))
    return buf.getvalue()


def render(command: str, payload: dict, fmt: str) -> str:
    if fmt == "csv":
        return to_csv(command, payload)
    return json.dumps(payload, indent=2) + "\n"


# -- cache --------------------------------------------------------------------

def cache_dir(args) -> Path | None:
    if args.no_cache:
        return None
    d = args.cache_dir or os.environ.get("GALE_CACHE_DIR")
    if not d:
        d = Path.home() / ".cache" / "galeroot"
    return Path(d)


def cache_key(command: str, request: dict) -> str:
    blob = json.dumps({"command": command, "request": request, "version": __version__},
                      sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def _cache_load(directory: Path | None, key: str):
    if directory is None:
        return None
    path = directory / f"{key}.json"
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, ValueError):
        return None


def _cache_store(directory: Path | None, key: str, payload: dict):
    if directory is None:
        return
    try:
        directory.mkdir(parents=True, exist_ok=True)
        tmp = directory / f".{key}.{os.getpid()}.tmp"
        with open(tmp, "w") as fh:
            json.dump(payload, fh)
        os.replace(tmp, directory / f"{key}.json")
    except OSError:
        pass


# -- main ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--k", type=int, help="number of vertices")
    common.add_argument("--r", help="r_12,r_13,...,r_{k-1,k} (default: all ones)")
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="maximum supports enumerated per count (default 2^30)")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--cache-dir", help="result cache (default $GALE_CACHE_DIR or ~/.cache/galeroot)")
    common.add_argument("--no-cache", action="store_true")
    common.add_argument("--verify", action="store_true", help="run the geometry oracle too")

    theta = argparse.ArgumentParser(add_help=False)
    theta.add_argument("--theta", help="generic parameter, e.g. --theta=2,-3,2,-1 "
                       "(default (k-1,-1,...,-1))")

    p = argparse.ArgumentParser(prog="galeroot", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("compute", parents=[common], help="g and h polynomials")
    c.add_argument("--what", choices=["g", "h", "both"], default="both")
    c.add_argument("--method", choices=["graph", "recursion", "stanley", "all"], default="graph")
    f = sub.add_parser("faces", parents=[common], help="face lattice and f-vector")
    f.add_argument("--summary", action="store_true", help="omit the face list and order")
    fb = sub.add_parser("fiber", parents=[common, theta], help="fiber over one face")
    fb.add_argument("--face", default="Pi", help="face id (dot separated core counts), "
                    "'Pi' or 'empty'")
    sub.add_parser("certify", parents=[common, theta], help="smallness certificate")
    sub.add_parser("components", parents=[common, theta], help="central fiber components")
    sub.add_parser("ring", parents=[common], help="Hilbert function of the relation ring")
    return p


def _request(args, R, th) -> dict:
    req = {"k": R.k, "r": R.flat(), "verify": bool(args.verify)}
    for name in ("what", "method", "face", "summary"):
        if hasattr(args, name):
            req[name] = getattr(args, name)
    if th is not None:
        req["theta"] = list(th.theta)
    return req


def run(args) -> dict:
    R = instance_from_args(args)
    th = None
    if args.command in ("fiber", "certify", "components"):
        if R.k < 2:
            raise InstanceError(f"{args.command} needs k >= 2")
        th = theta_from_args(args, R)
    if args.command in ("faces", "ring") and R.k < 2:
        raise InstanceError(f"{args.command} needs k >= 2")
    if args.budget < 1 or args.jobs < 1:
        raise InstanceError("--budget and --jobs must be positive")
    directory = cache_dir(args)
    key = cache_key(args.command, _request(args, R, th))
    hit = _cache_load(directory, key)
    if hit is not None:
        return hit
    if args.command == "compute":
        out = cmd_compute(R, args.what, args.method, budget=args.budget, jobs=args.jobs,
                          verify=args.verify)
    elif args.command == "faces":
        out = cmd_faces(R, budget=args.budget, verify=args.verify, summary=args.summary)
    elif args.command == "fiber":
        out = cmd_fiber(R, th, args.face)
    elif args.command == "certify":
        out = cmd_certify(R, th, budget=args.budget)
    elif args.command == "components":
        out = cmd_components(R, th)
    else:
        out = cmd_ring(R)
    _cache_store(directory, key, out)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        payload = run(args)
    except NonGenericTheta as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_THETA
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except CrossCheckFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.payload is not None:
            sys.stdout.write(render(args.command, exc.payload, "json"))
        return EXIT_CHECK
    except (InstanceError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(render(args.command, payload, args.format))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
