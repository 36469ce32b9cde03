"""Hilbert function of Q[x_1..x_{k-1}] / (p_D), one relation per 2-block partition.

With x_i = eps_i - eps_k (x_k = 0), eps_i - eps_j = x_i - x_j and

    p_D = prod_{i in D1, j in D2} (x_i - x_j)^{r_ij},   1 in D1.

The quotient's dimension in degree m is the number of degree-m monomials
minus the rank of the multiples u * p_D of that degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .betti import g_poly, g_poly_recursive
from .counting import MAX_VECTOR_K
from .graphs import BudgetExceeded, InstanceError, MultMatrix
from .linalg import bareiss_rank, rank_mod_p
from .poly import IntPoly

MAX_MATRIX_ENTRIES = 4_000_000


# sparse multivariate polynomials: {exponent tuple: int}

def _mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


def _linear(nvars: int, i: int, j: int) -> dict:
    """x_i - x_j with 0-based vertex indices, x_{nvars} = 0."""
    out = {}
    if i < nvars:
        e = [0] * nvars
        e[i] = 1
        out[tuple(e)] = 1
    if j < nvars:
        e = [0] * nvars
        e[j] = 1
        out[tuple(e)] = out.get(tuple(e), 0) - 1
    return out


@dataclass(frozen=True)
class Relation:
    block1: tuple  # 0-based, contains vertex 0
    block2: tuple
    degree: int
    poly: tuple    # sorted (exponent, coefficient) pairs

    def to_json(self) -> dict:
        return {"partition": [[v + 1 for v in self.block1], [v + 1 for v in self.block2]],
                "degree": self.degree}


@dataclass(frozen=True)
class GradedPresentation:
    R: MultMatrix
    num_vars: int
    relations: tuple


def build_relations(R: MultMatrix) -> GradedPresentation:
    k = R.k
    if k < 2:
        raise InstanceError("relations need k >= 2")
    nv = k - 1
    rels = []
    rest = list(range(1, k))
    for size in range(0, k - 1):
        for extra in combinations(rest, size):
            D1 = (0,) + extra
            D2 = tuple(v for v in rest if v not in extra)
            p = {(0,) * nv: 1}
            deg = 0
            for i in D1:
                for j in D2:
                    lin = _linear(nv, i, j)
                    for _ in range(R.r[i][j]):
                        p = _mul(p, lin)
                    deg += R.r[i][j]
            rels.append(Relation(D1, D2, deg, tuple(sorted(p.items()))))
    rels.sort(key=lambda r: (r.degree, r.block1))
    return GradedPresentation(R, nv, tuple(rels))


def monomials(nvars: int, deg: int) -> list[tuple]:
    if nvars == 0:
        return [()] if deg == 0 else []
    if nvars == 1:
        return [(deg,)]
    out = []
    for first in range(deg, -1, -1):
        for rest in monomials(nvars - 1, deg - first):
            out.append((first,) + rest)
    return out


def degree_matrix(gp: GradedPresentation, m: int) -> tuple[list, int]:
    """Rows u * p_D of degree m in the monomial basis; (rows, basis size)."""
    basis = monomials(gp.num_vars, m)
    index = {e: i for i, e in enumerate(basis)}
    rows = []
    for rel in gp.relations:
        if rel.degree > m:
            continue
        mults = monomials(gp.num_vars, m - rel.degree)
        if len(mults) * len(basis) > MAX_MATRIX_ENTRIES:
            raise BudgetExceeded(f"degree {m} relation matrix too large")
        for u in mults:
            row = [0] * len(basis)
            for e, c in rel.poly:
                row[index[tuple(a + b for a, b in zip(u, e))]] += c
            rows.append(row)
    return rows, len(basis)


def hilbert_function(gp: GradedPresentation, max_deg: int, *, check_primes=(2_147_483_647, 1_000_000_007)) -> IntPoly:
    """Exact ranks by Bareiss; ranks mod ``check_primes`` must agree."""
    dims = []
    for m in range(max_deg + 1):
        rows, size = degree_matrix(gp, m)
        rk = bareiss_rank(rows) if rows else 0
        for p in check_primes:
            if rows and rank_mod_p(rows, p) != rk:
                raise ArithmeticError(f"rank mismatch mod {p} in degree {m}")
        dims.append(size - rk)
    return IntPoly(dims)


@dataclass
class RingComparison:
    matches: bool
    hilbert: IntPoly
    g: IntPoly
    presentation: GradedPresentation

    def to_json(self) -> dict:
        return {"relations": [r.to_json() for r in self.presentation.relations],
                "hilbert": self.hilbert.to_json(), "g": self.g.to_json(),
                "matches_g": self.matches}


def compare_to_g(R: MultMatrix) -> RingComparison:
    """Hilbert function up to deg g + 1 against g; the extra degree must vanish."""
    if R.k == 1:
        return RingComparison(True, IntPoly((1,)), IntPoly((1,)),
                              GradedPresentation(R, 0, ()))
    g = g_poly(R) if R.k <= MAX_VECTOR_K else g_poly_recursive(R)
    gp = build_relations(R)
    top = g.degree + 1
    hf = hilbert_function(gp, top)
    return RingComparison(hf == g and hf[top] == 0, hf, g, gp)
