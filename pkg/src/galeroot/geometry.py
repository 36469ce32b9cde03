"""Explicit Gale dual configuration and exact certificates.

Deliberately slow and literal: this is the oracle the graph-theoretic code is
checked against.  Roots are ordered alpha_12, alpha_21, alpha_13, alpha_31, ...
with alpha_ij = e_i - e_j repeated r_ij times; alpha_ij is the edge j -> i.
The betas are the columns of an integer basis K of the kernel of
x -> sum_i x_i alpha_i.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, permutations
from math import gcd, lcm, prod
from typing import Sequence

from .graphs import (
    InstanceError,
    MultMatrix,
    all_pairs,
    mask_pairs,
    pair_bit,
    weak_components_mask,
)
from .linalg import (PRIME, as_int_vector, bareiss_det, echelon_mod_p, nullspace, rank_mod_p,
                     reduce_mod_p, rref, solve)


class UnimodularityError(ArithmeticError):
    pass


@dataclass
class GaleData:
    alphas: list          # n integer k-vectors
    edges: list           # 0-based (u, v) per alpha (alpha = e_v - e_u), or None
    K: list               # (n-k+1) x n integer kernel basis
    R: MultMatrix | None = None

    @property
    def n(self) -> int:
        return len(self.alphas)

    @property
    def k(self) -> int:
        return len(self.alphas[0])

    @cached_property
    def betas(self) -> list[tuple]:
        return [tuple(row[i] for row in self.K) for i in range(self.n)]

    @cached_property
    def _copies(self) -> dict:
        out: dict = {}
        for i, e in enumerate(self.edges):
            out.setdefault(e, []).append(i)
        return out

    def copies(self) -> dict:
        return self._copies

    def eval_alpha(self, m: Sequence) -> list:
        return [sum(m[i] * self.alphas[i][c] for i in range(self.n)) for c in range(self.k)]


def root(k: int, i: int, j: int) -> tuple:
    v = [0] * k
    v[i] += 1
    v[j] -= 1
    return tuple(v)


def _kernel(alphas: list, k: int) -> list:
    n = len(alphas)
    rows = [[alphas[i][c] for i in range(n)] for c in range(k)]
    K = []
    for v in nullspace(rows, n):
        den = lcm(*(x.denominator for x in v))
        K.append([int(x * den) for x in v])
    return K


def gale_from_vectors(alphas: Sequence[Sequence[int]], edges=None) -> GaleData:
    alphas = [tuple(int(x) for x in a) for a in alphas]
    k = len(alphas[0])
    if edges is None:
        edges = [None] * len(alphas)
    return GaleData(alphas, list(edges), _kernel(alphas, k))


def build_gale(R: MultMatrix) -> GaleData:
    if R.k < 2:
        raise InstanceError("Gale data needs k >= 2")
    k = R.k
    alphas, edges = [], []
    for j in range(1, k):
        for i in range(j):
            for (a, b) in ((i, j), (j, i)):
                for _ in range(R.r[a][b]):
                    alphas.append(root(k, a, b))
                    edges.append((b, a))
    gd = gale_from_vectors(alphas, edges)
    gd.R = R
    return gd


# -- Gale duality ------------------------------------------------------------

def solve_functional(gd: GaleData, m: Sequence[int]):
    """l with l . beta_i = m_i for all i, or None."""
    return solve([list(b) for b in gd.betas], list(m))


def _random_relation(gd: GaleData, rng: random.Random) -> list[int]:
    m = [0] * gd.n
    if any(e is None for e in gd.edges):
        for row in gd.K:
            c = rng.randint(-3, 3)
            m = [a + c * b for a, b in zip(m, row)]
        return m
    copies = gd.copies()
    k = gd.k
    for _ in range(rng.randint(1, 3)):
        length = rng.randint(2, k)
        cyc = rng.sample(range(k), length)
        c = rng.choice([x for x in range(-3, 4) if x])
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            m[rng.choice(copies[(a, b)])] += c
    return m


def verify_gale(gd: GaleData, trials: int = 100, seed: int = 0) -> bool:
    """Relations among the alphas are exactly the values of functionals on
    the betas: random relations must solve, random non-relations must not."""
    rng = random.Random(seed)
    for _ in range(trials):
        m = _random_relation(gd, rng)
        if any(gd.eval_alpha(m)):
            return False
        sol = solve_functional(gd, m)
        if sol is None:
            return False
        if any(sum(l * b for l, b in zip(sol, beta)) != mi for beta, mi in zip(gd.betas, m)):
            return False
        while True:
            bad = [rng.randint(-2, 2) for _ in range(gd.n)]
            if any(gd.eval_alpha(bad)):
                break
        if solve_functional(gd, bad) is not None:
            return False
    return True


# -- unimodularity ------------------------------------------------------------

def maximal_minors(gd: GaleData) -> list[int]:
    """Determinants of all (k-1)-subsets of distinct alphas, in the
    coordinates x_1..x_{k-1} of the sum-zero lattice."""
    k = gd.k
    distinct = sorted(set(gd.alphas))
    vecs = [a[:k - 1] for a in distinct]
    return [bareiss_det([list(v) for v in sub]) for sub in combinations(vecs, k - 1)]


def verify_unimodular(gd: GaleData) -> bool:
    """Every nonzero maximal minor equals +-(gcd of all of them), i.e. every
    basis has determinant +-1 in the lattice the vectors generate."""
    dets = maximal_minors(gd)
    g = 0
    for d in dets:
        g = gcd(g, d)
    if g == 0:
        return False
    return all(d == 0 or abs(d) == g for d in dets)


def theta_coords(gd: GaleData, tree, theta: Sequence[int]) -> list[int]:
    """Coordinates of theta in the basis of roots of a spanning tree given as
    1-based (from, to) edges; edge a -> b is the root e_b - e_a."""
    k = gd.k
    cols = [root(k, b - 1, a - 1) for (a, b) in tree]
    if len(cols) != k - 1:
        raise InstanceError("a spanning tree has k-1 edges")
    A = [[cols[j][i] for j in range(len(cols))] for i in range(k)]
    M, piv = rref(A)
    if len(piv) != k - 1:
        raise InstanceError("tree roots are linearly dependent")
    x = solve(A, list(theta))
    if x is None:
        raise InstanceError("theta is outside the span of the roots")
    iv = as_int_vector(x)
    if iv is None:
        raise UnimodularityError(f"non-integral coordinates {x}")
    return iv


# -- faces --------------------------------------------------------------------

@dataclass
class FaceCheck:
    ok: bool
    feasible_supports: int = 0
    infeasible_supports: int = 0
    rank_checks: int = 0
    failures: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"ok": self.ok, "feasible_supports": self.feasible_supports,
                "infeasible_supports": self.infeasible_supports,
                "rank_checks": self.rank_checks, "failures": self.failures[:20]}


def _path(k: int, support: int, src: int, dst: int) -> list[int] | None:
    prev = {src: None}
    queue = [src]
    for x in queue:
        if x == dst:
            break
        for y in range(k):
            if support & pair_bit(k, x, y) and y not in prev:
                prev[y] = x
                queue.append(y)
    if dst not in prev:
        return None
    out = [dst]
    while prev[out[-1]] is not None:
        out.append(prev[out[-1]])
    return out[::-1]


def cycle_cover(gd: GaleData, support: int) -> list[int] | None:
    """Integer m >= 1 on the first copy of every pair of ``support`` (zero
    elsewhere) with sum m_i alpha_i = 0, built from one cycle per pair."""
    k = gd.k
    first = {e: idx[0] for e, idx in gd.copies().items()}
    m = [0] * gd.n
    for (u, v) in mask_pairs(k, support):
        back = _path(k, support, v, u)
        if back is None:
            return None
        cyc = [u] + back
        for a, b in zip(cyc, cyc[1:]):
            m[first[(a, b)]] += 1
    return m


def farkas(gd: GaleData, support: int):
    """y with y . alpha >= 0 on every copy of ``support`` and > 0 on some,
    proving 0 is not a positive combination; None if the support is naked."""
    k = gd.k
    for (u, v) in mask_pairs(k, support):
        reach = 0
        frontier = 1 << v
        while frontier:
            reach |= frontier
            nxt = 0
            for x in range(k):
                if frontier >> x & 1:
                    nxt |= (support >> (x * k)) & ((1 << k) - 1)
            frontier = nxt & ~reach
        if not reach >> u & 1:
            return [1 if reach >> x & 1 else 0 for x in range(k)], (u, v)
    return None


def _check_farkas(gd: GaleData, support: int, y, strict_pair) -> bool:
    copies = gd.copies()
    strict = False
    for p in mask_pairs(gd.k, support):
        for i in copies[p]:
            val = sum(a * b for a, b in zip(y, gd.alphas[i]))
            if val < 0:
                return False
            if val > 0:
                strict = True
    return strict


def _symmetries(R: MultMatrix):
    k = R.k
    out = []
    for sigma in permutations(range(k)):
        if all(R.r[sigma[i]][sigma[j]] == R.r[i][j] for i in range(k) for j in range(k)):
            out.append((sigma, False))
            out.append((sigma, True))
    return out


def _image(k: int, support: int, sym) -> int:
    sigma, rev = sym
    m = 0
    for (u, v) in mask_pairs(k, support):
        a, b = sigma[u], sigma[v]
        m |= pair_bit(k, b, a) if rev else pair_bit(k, a, b)
    return m


def _image_counts(counts: tuple, sym) -> tuple:
    sigma, rev = sym
    out = []
    for (u, v), c in counts:
        a, b = sigma[u], sigma[v]
        out.append(((b, a) if rev else (a, b), c))
    return tuple(sorted(out))


def _component_relations(gd: GaleData, support: int):
    """One relation among the betas outside the core per weak component of
    the core but the first: x_i = y . alpha_i with y the component's
    indicator.  Returns None if a relation fails to check exactly."""
    k = gd.k
    copies = gd.copies()
    core_copies = [i for p in mask_pairs(k, support) for i in copies[p]]
    rels = []
    for comp in weak_components_mask(k, support)[1:]:
        y = [1 if x in comp else 0 for x in range(k)]
        x = [sum(a * b for a, b in zip(y, alpha)) for alpha in gd.alphas]
        if any(x[i] for i in core_copies):
            return None
        if any(sum(row[i] * x[i] for i in range(gd.n)) for row in gd.K):
            return None
        rels.append(x)
    if rels and rank_mod_p(rels) != len(rels):
        return None
    return rels


class _SupportRanks:
    """Mod-p ranks of {beta_i : i outside the core} for the cores on one
    support: the betas of pairs outside the support are echelonized once,
    the copies of support pairs are reduced against them once, and each
    count vector only eliminates its few remaining copies."""

    def __init__(self, gd: GaleData, support: int):
        copies = gd.copies()
        k = gd.k
        inside = set(mask_pairs(k, support))
        outside = [i for p, idx in copies.items() if p not in inside for i in idx]
        self.base, self.pivots = echelon_mod_p([gd.betas[i] for i in outside])
        self.reduced = {i: reduce_mod_p([x % PRIME for x in gd.betas[i]], self.base, self.pivots)
                        for p in inside for i in copies[p]}
        self.copies = copies

    def rank_outside(self, core_counts: dict) -> int:
        extra = [self.reduced[i] for p, c in core_counts.items() for i in self.copies[p][c:]]
        return len(self.base) + len(echelon_mod_p(extra)[0])


def verify_faces(gd: GaleData, lattice, *, exhaustive_limit: int = 1 << 16,
                 seed: int = 0, samples: int = 4096) -> FaceCheck:
    """Check the claimed face classes against the configuration.

    Every claimed support gets a cycle-cover certificate (0 is a positive
    combination of its roots); every other support (all of them up to
    ``exhaustive_limit``, else a seeded sample) gets a Farkas certificate.
    Dimensions are checked for every class on one support per orbit of the
    symmetries of R (vertex automorphisms and reversing all edges), which act
    linearly on the betas.
    """
    R = lattice.R
    k = R.k
    res = FaceCheck(True)
    claimed = {}
    for F in lattice.faces:
        claimed.setdefault(F.core.support, []).append(F)
    for S in claimed:
        m = cycle_cover(gd, S)
        if m is None or any(gd.eval_alpha(m)) or any(
                m[gd.copies()[p][0]] < 1 for p in mask_pairs(k, S)):
            res.failures.append(("no positive relation", S))
        else:
            res.feasible_supports += 1
    total = 1 << (k * (k - 1))
    pairs = all_pairs(k)
    if total <= exhaustive_limit:
        others = range(total)
    else:
        rng = random.Random(seed)
        others = [rng.randrange(total) for _ in range(samples)]
    for idx in others:
        S = 0
        for i, p in enumerate(pairs):
            if idx >> i & 1:
                S |= pair_bit(k, *p)
        if S in claimed:
            continue
        cert = farkas(gd, S)
        if cert is None or not _check_farkas(gd, S, *cert):
            res.failures.append(("missing face", S))
        else:
            res.infeasible_supports += 1
    syms = _symmetries(R)
    dims = {}
    for S, faces in claimed.items():
        if len(faces) != prod(R.r[u][v] for (u, v) in mask_pairs(k, S)):
            res.failures.append(("count classes", S))
        for F in faces:
            dims[tuple(sorted(F.core.counts))] = F.dim
    for S, faces in claimed.items():
        g = min(syms, key=lambda g: _image(k, S, g))
        if _image(k, S, g) != S:
            # claimed dimensions must be invariant; the image support is checked
            for F in faces:
                if dims.get(_image_counts(F.core.counts, g)) != F.dim:
                    res.failures.append(("symmetry", F.id))
            continue
        rels = _component_relations(gd, S)
        ranks = _SupportRanks(gd, S)
        for F in faces:
            res.rank_checks += 1
            want = F.dim + 1
            counts = F.core.as_dict()
            outside = gd.n - F.core.num_edges
            # rank over Q >= rank mod p; rank <= outside - (independent relations)
            if rels is None or ranks.rank_outside(counts) < want \
                    or outside - len(rels) > want:
                res.failures.append(("dimension", F.id))
    res.ok = not res.failures
    return res


def hull_faces(gd: GaleData) -> dict:
    """Faces of conv(betas) by brute-force facet search (tiny inputs only):
    vertex index set -> dimension.  Includes the polytope and the empty face."""
    betas = [list(b) for b in gd.betas]
    n = len(betas)
    dim_space = len(betas[0])
    D = dim_space - 1
    facets = set()
    for sub in combinations(range(n), D):
        ns = nullspace([betas[i] for i in sub], dim_space)
        if len(ns) != 1:
            continue
        w = ns[0]
        vals = [sum(a * b for a, b in zip(w, beta)) for beta in betas]
        if all(v >= 0 for v in vals) or all(v <= 0 for v in vals):
            facets.add(frozenset(i for i in range(n) if vals[i] == 0))
    faces = set(facets)
    faces.add(frozenset(range(n)))
    frontier = set(faces)
    while frontier:
        new = set()
        for a in frontier:
            for f in facets:
                c = a & f
                if c not in faces:
                    new.add(c)
        faces |= new
        frontier = new
    out = {}
    for f in faces:
        rk = len(rref([betas[i] for i in f])[1]) if f else 0
        out[f] = rk - 1
    return out
