"""Faces of Pi(R), Stanley's g/h recursion, resolution fibers and smallness.

A face is stored through its naked core: the sub-multigraph of edge copies
that do *not* span the face.  The empty core is Pi itself, the full K_k(R) is
the empty face, and dim F = n - e(core) - s(core).

Below a face F whose core has strongly connected blocks B_1..B_s, the face
lattice splits as  L(Pi(R / blocks)) x Boolean(m),  where R / blocks merges
each block into one vertex (summing multiplicities) and m counts the copies
inside blocks that the core does not use.  So F is an m-fold pyramid over
Pi(R / blocks), and every g/h question reduces to quotient instances.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations, permutations, product
from math import comb

from .betti import restricted_growth_strings
from .counting import (
    ContainsTree,
    Naked,
    SameComponents,
    StronglyConnected,
    RootedAt,
    count_supports,
    pair_weights,
    select_indices,
    select_supports,
    weigh_indices,
)
from .graphs import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    InstanceError,
    MultMatrix,
    SubMultigraph,
    all_pairs,
    mask_pairs,
    pair_bit,
    pairs_mask,
    scc_of_mask,
    weak_components_mask,
)
from .poly import ONE, IntPoly, binomial_row, g_from_h, shift


class NonGenericTheta(ValueError):
    pass


# -- faces --------------------------------------------------------------------

@dataclass(frozen=True)
class Face:
    core: SubMultigraph
    dim: int

    @cached_property
    def id(self) -> str:
        return self.core.key()

    @property
    def R(self) -> MultMatrix:
        return self.core.parent

    @property
    def blocks(self) -> list[list[int]]:
        return scc_of_mask(self.core.k, self.core.support)

    @property
    def multiplicity(self) -> int:
        """Labelled faces represented by this count vector."""
        m = 1
        for (u, v), c in self.core.counts:
            m *= comb(self.R.r[u][v], c)
        return m

    def is_polytope(self) -> bool:
        return not self.core.counts

    def is_empty_face(self) -> bool:
        return self.dim == -1

    def to_json(self) -> dict:
        return {"id": self.id, "dim": self.dim, "multiplicity": self.multiplicity,
                "core": self.core.to_json()}


def face_dim(core: SubMultigraph) -> int:
    s = len(weak_components_mask(core.k, core.support))
    return core.parent.n - core.num_edges - s


def make_face(core: SubMultigraph) -> Face:
    if naked_mask_of(core) != core.support:
        raise InstanceError(f"core {core} is not naked")
    return Face(core, face_dim(core))


def naked_mask_of(core: SubMultigraph) -> int:
    from .graphs import naked_mask
    return naked_mask(core.k, core.support)


def face_from_id(R: MultMatrix, fid: str) -> Face:
    if fid in ("Pi", "P", "top"):
        return make_face(SubMultigraph.empty(R))
    if fid in ("empty", "bottom"):
        return make_face(SubMultigraph.complete(R))
    return make_face(SubMultigraph.from_key(R, fid))


def polytope_face(R: MultMatrix) -> Face:
    return make_face(SubMultigraph.empty(R))


@lru_cache(maxsize=64)
def naked_supports(k: int, method: str = "fast", budget: int = DEFAULT_BUDGET) -> tuple:
    return tuple(select_supports(k, all_pairs(k), Naked(), method=method, budget=budget))


@dataclass
class FaceLattice:
    R: MultMatrix
    faces: list  # Face classes, by decreasing dim then id

    @cached_property
    def by_id(self) -> dict:
        return {F.id: F for F in self.faces}

    @property
    def D(self) -> int:
        return self.R.D

    def f_vector(self) -> list[int]:
        """Labelled proper nonempty faces per dimension 0..D-1."""
        f = [0] * max(self.D, 0)
        for F in self.faces:
            if 0 <= F.dim < self.D:
                f[F.dim] += F.multiplicity
        return f

    def euler_sum(self) -> int:
        """sum of (-1)^dim over all faces, the empty face and Pi included;
        zero for every polytope."""
        return sum((-1) ** (F.dim % 2) * F.multiplicity for F in self.faces)

    def upper_covers(self, F: Face) -> list[Face]:
        """Faces covering F: drop one copy, then keep the naked core."""
        out = {}
        R = self.R
        counts = F.core.as_dict()
        for p, c in F.core.counts:
            smaller = dict(counts)
            if c > 1:
                smaller[p] = c - 1
            else:
                del smaller[p]
            G = SubMultigraph.from_counts(R, smaller)
            keep = naked_mask_of(G)
            G = SubMultigraph.from_counts(
                R, {q: cq for q, cq in smaller.items() if keep & pair_bit(R.k, *q)})
            H = self.by_id[G.key()]
            if H.dim == F.dim + 1:
                out[H.id] = H
        return [out[i] for i in sorted(out)]

    def order(self) -> list[tuple[str, str]]:
        """Cover relations (lower id, upper id) among face classes."""
        rel = []
        for F in self.faces:
            for H in self.upper_covers(F):
                rel.append((F.id, H.id))
        return rel


def enumerate_faces(R: MultMatrix, *, method: str = "fast",
                    budget: int = DEFAULT_BUDGET) -> FaceLattice:
    if R.k < 2:
        raise InstanceError("face lattice needs k >= 2")
    supports = naked_supports(R.k, method, budget)
    total = 0
    for S in supports:
        size = 1
        for (u, v) in mask_pairs(R.k, S):
            size *= R.r[u][v]
        total += size
    if total > budget:
        raise BudgetExceeded(f"{total} face classes exceed the budget of {budget}")
    faces = []
    for S in supports:
        pairs = mask_pairs(R.k, S)  # sorted, as SubMultigraph expects
        base = R.n - len(weak_components_mask(R.k, S))
        for cs in product(*[range(1, R.r[u][v] + 1) for (u, v) in pairs]):
            core = SubMultigraph.trusted(R, tuple(zip(pairs, cs)))
            faces.append(Face(core, base - sum(cs)))
    faces.sort(key=lambda F: (-F.dim, F.id))
    return FaceLattice(R, faces)


# -- Stanley g/h via the quotient / pyramid decomposition ---------------------

def face_type(F: Face) -> tuple[MultMatrix, int]:
    blocks = F.blocks
    R = F.R
    m = 0
    for b in blocks:
        for u in b:
            for v in b:
                if u != v:
                    m += R.r[u][v] - F.core.count(u, v)
    return R.quotient(blocks), m


@lru_cache(maxsize=None)
def _sc_count(k: int, flat: tuple) -> IntPoly:
    """Labelled strongly connected spanning sub-multigraphs by edge count."""
    if k == 1:
        return ONE
    R = MultMatrix.from_flat(k, list(flat))
    pairs = all_pairs(k)
    return count_supports(k, pairs, pair_weights(R, pairs, 1), StronglyConnected())


def _induced_flat(R: MultMatrix, verts) -> tuple:
    return tuple(R.r[a][b] for i, a in enumerate(verts) for b in verts[i + 1:])


@lru_cache(maxsize=None)
def _stanley_h(k: int, flat: tuple, m: int) -> IntPoly:
    R = MultMatrix.from_flat(k, list(flat))
    n = R.n
    dimF = n - k + m
    t_minus_1 = IntPoly((-1, 1))
    total = IntPoly()
    for blocks in restricted_growth_strings(k):
        W = ONE
        for b in blocks:
            W = W * _sc_count(len(b), _induced_flat(R, b))
        s = len(blocks)
        if s == k:
            if m == 0:
                continue
            gq = _stanley_g(k, flat)
        else:
            Q = R.quotient(blocks)
            gq = _stanley_g(Q.k, tuple(Q.flat()))
        for e, cnt in enumerate(W.coeffs):
            if not cnt:
                continue
            for j in range(m + 1):
                dimG = n - e - s + m - j
                if dimG >= dimF:
                    continue
                total = total + gq * t_minus_1 ** (dimF - 1 - dimG) * (cnt * comb(m, j))
    return total


@lru_cache(maxsize=None)
def _stanley_g(k: int, flat: tuple) -> IntPoly:
    if k == 1:
        return ONE
    D = 2 * sum(flat) - k
    return g_from_h(_stanley_h(k, flat, 0), D)


def stanley_h(F: Face) -> IntPoly:
    if F.is_empty_face():
        return ONE
    Q, m = face_type(F)
    return _stanley_h(Q.k, tuple(Q.flat()), m)


def stanley_g(F: Face) -> IntPoly:
    if F.is_empty_face():
        return ONE
    Q, _ = face_type(F)
    return _stanley_g(Q.k, tuple(Q.flat()))


def stanley_h_poly(R: MultMatrix) -> IntPoly:
    return stanley_h(polytope_face(R)) if R.k > 1 else ONE


def stanley_g_poly(R: MultMatrix) -> IntPoly:
    return stanley_g(polytope_face(R)) if R.k > 1 else ONE


def f_polynomial(R: MultMatrix) -> IntPoly:
    """sum over all faces (incl. empty and Pi) of x^(dim+1), from block partitions."""
    total = IntPoly()
    for blocks in restricted_growth_strings(R.k):
        W = ONE
        for b in blocks:
            W = W * _sc_count(len(b), _induced_flat(R, b))
        for e, cnt in enumerate(W.coeffs):
            if cnt:
                total = total + IntPoly.monomial(R.n - e - len(blocks) + 1, cnt)
    return total


# -- graphical g and fibers ---------------------------------------------------

def _cross_pairs(k: int, blocks) -> list[tuple[int, int]]:
    where = {v: i for i, b in enumerate(blocks) for v in b}
    return [(u, v) for (u, v) in all_pairs(k) if where[u] != where[v]]


def _block_tuple(blocks) -> tuple:
    return tuple(tuple(b) for b in blocks)


def face_g_graphical(F: Face, *, method: str = "fast", budget: int = DEFAULT_BUDGET) -> IntPoly:
    """Rooted spanning graphs whose naked core is exactly core(F), counted by
    the copies added between blocks."""
    R, blocks = F.R, F.blocks
    s = len(blocks)
    pairs = _cross_pairs(R.k, blocks)
    raw = count_supports(R.k, pairs, pair_weights(R, pairs, 1),
                         SameComponents(_block_tuple(blocks)) & RootedAt(1),
                         base_mask=F.core.support, method=method, budget=budget)
    return shift(raw.divide_by_t(s - 1), -1)


@dataclass(frozen=True)
class ThetaParam:
    theta: tuple
    generic: bool
    trees: tuple  # tuple of trees; a tree is a sorted tuple of 0-based pairs (u, v)

    @property
    def k(self) -> int:
        return len(self.theta)

    def tree_masks(self) -> tuple:
        return tuple(sorted(pairs_mask(self.k, t) for t in self.trees))

    def trees_1based(self) -> list:
        return [[(u + 1, v + 1) for (u, v) in t] for t in self.trees]

    def to_json(self) -> dict:
        return {"theta": list(self.theta), "generic": self.generic,
                "trees": [[[a, b] for a, b in t] for t in self.trees_1based()]}


def default_theta(k: int) -> tuple:
    return (k - 1,) + (-1,) * (k - 1)


def undirected_spanning_trees(k: int):
    """All labelled trees on range(k) (Pruefer decoding), as edge lists."""
    if k == 1:
        yield []
        return
    if k == 2:
        yield [(0, 1)]
        return
    for seq in product(range(k), repeat=k - 2):
        degree = [1] * k
        for x in seq:
            degree[x] += 1
        edges = []
        for x in seq:
            leaf = min(i for i in range(k) if degree[i] == 1)
            edges.append((min(leaf, x), max(leaf, x)))
            degree[leaf] -= 1
            degree[x] -= 1
        u, v = [i for i in range(k) if degree[i] == 1]
        edges.append((u, v))
        yield edges


def _side(k: int, edges, a: int, b: int) -> set:
    """Vertices on b's side after removing edge {a, b}."""
    adj = {i: [] for i in range(k)}
    for x, y in edges:
        if {x, y} != {a, b}:
            adj[x].append(y)
            adj[y].append(x)
    seen, stack = {b}, [b]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def is_generic(R: MultMatrix | None, theta) -> ThetaParam:
    """Tree coordinates: the edge u->v (root e_v - e_u) has coordinate equal
    to the sum of theta over v's side of the tree.  theta is generic iff no
    coordinate vanishes; Trees(theta) keeps the orientation making all
    coordinates positive."""
    theta = tuple(int(x) for x in theta)
    k = len(theta)
    if R is not None and R.k != k:
        raise InstanceError(f"theta has length {k}, instance has k={R.k}")
    if sum(theta) != 0:
        raise InstanceError("theta must sum to zero")
    if k < 2:
        return ThetaParam(theta, k == 1, ((),) if k == 1 else ())
    trees = []
    for edges in undirected_spanning_trees(k):
        directed = []
        for a, b in edges:
            c = sum(theta[i] for i in _side(k, edges, a, b))
            if c == 0:
                return ThetaParam(theta, False, ())
            directed.append((a, b) if c > 0 else (b, a))
        trees.append(tuple(sorted(directed)))
    return ThetaParam(theta, True, tuple(sorted(trees)))


def _require_generic(th: ThetaParam):
    if not th.generic:
        raise NonGenericTheta(f"theta={list(th.theta)} is not generic")


@dataclass(frozen=True)
class FiberReport:
    face_id: str
    poincare: IntPoly
    fiber_dim: int
    stratum_codim: int
    small_ok: bool
    multiplicity: int = 1
    dim: int = 0

    def to_json(self) -> dict:
        return {"face": self.face_id, "dim": self.dim, "multiplicity": self.multiplicity,
                "poincare": self.poincare.to_json(), "fiber_dim": self.fiber_dim,
                "stratum_codim": self.stratum_codim, "small_ok": self.small_ok}


@lru_cache(maxsize=None)
def _support_info(k: int, support: int):
    """(pairs of the support, blocks, block count, cross pairs)."""
    blocks = scc_of_mask(k, support)
    return mask_pairs(k, support), blocks, len(blocks), _cross_pairs(k, blocks)


@lru_cache(maxsize=None)
def _fiber_accepted(k: int, support: int, trees: tuple, method: str):
    """Cross-pair subsets keeping the blocks of ``support`` and containing a
    tree; independent of the multiplicities, so shared across instances."""
    _, blocks, _, pairs = _support_info(k, support)
    pred = SameComponents(_block_tuple(blocks)) & ContainsTree(trees)
    if method == "brute":
        return select_supports(k, pairs, pred, base_mask=support, method="brute")
    return select_indices(k, pairs, pred, base_mask=support)


@lru_cache(maxsize=4096)
def _row(r: int) -> IntPoly:
    return binomial_row(r, 1)


def _fiber_d(R: MultMatrix, support: int, trees: tuple, method: str) -> IntPoly:
    k = R.k
    _, _, s, pairs = _support_info(k, support)
    acc = _fiber_accepted(k, support, trees, method)
    weights = [_row(R.r[u][v]) for (u, v) in pairs]
    if method == "brute":
        raw = IntPoly()
        for mask in acc:
            term = ONE
            for (u, v), w in zip(pairs, weights):
                if mask & pair_bit(k, u, v):
                    term = term * w
            raw = raw + term
    else:
        raw = weigh_indices(acc, weights)
    return raw.divide_by_t(s - 1)


def fiber_d(F: Face, th: ThetaParam, method: str = "fast") -> IntPoly:
    """d_l(F): graphs with naked core core(F) containing a theta-tree,
    indexed by l = (added copies) - (s - 1)."""
    _require_generic(th)
    R = F.R
    return _fiber_d(R, F.core.support, th.tree_masks(), method)


def _report(face_id, d: IntPoly, dim: int, mult: int, dense: bool,
            poincare: IntPoly | None = None) -> FiberReport:
    if poincare is None:
        poincare = shift(d, -1).substitute_square()
    fdim = d.degree
    codim = dim + 1
    return FiberReport(face_id, poincare, fdim, codim, dense or codim > 2 * fdim, mult, dim)


def fiber_poincare(F: Face, th: ThetaParam, method: str = "fast") -> FiberReport:
    d = fiber_d(F, th, method)
    return _report(F.id, d, F.dim, F.multiplicity, F.is_empty_face())


@dataclass
class SmallCertificate:
    theta: ThetaParam
    reports: list
    small: bool

    def to_json(self) -> dict:
        return {"theta": list(self.theta.theta), "generic": self.theta.generic,
                "reports": [r.to_json() for r in self.reports], "small": self.small}


def _representative_key(R: MultMatrix, pairs, e: int) -> str:
    """Face id of one count vector on ``pairs`` with e copies in total."""
    counts = {p: 1 for p in pairs}
    extra = e - len(pairs)
    for p in pairs:
        add = min(extra, R.r[p[0]][p[1]] - 1)
        counts[p] += add
        extra -= add
    return ".".join(str(counts.get(p, 0)) for p in all_pairs(R.k))


def certify_small(R: MultMatrix, th: ThetaParam, *, method: str = "fast",
                  budget: int = DEFAULT_BUDGET) -> SmallCertificate:
    """Fibers depend only on the core's support, and the stratum dimension
    only on (support, edge count); one report per such class, carrying the
    number of labelled faces it stands for.  The dense stratum (empty face)
    is skipped."""
    _require_generic(th)
    if R.k < 2:
        return SmallCertificate(th, [], True)
    reports = []
    k = R.k
    full = pairs_mask(k, all_pairs(k))
    trees = th.tree_masks()
    for S in naked_supports(k, method, budget):
        pairs, _, s, _ = _support_info(k, S)
        W = ONE
        for (u, v) in pairs:
            W = W * _row(R.r[u][v])
        d = _fiber_d(R, S, trees, method)
        poincare = shift(d, -1).substitute_square()
        for e, mult in enumerate(W.coeffs):
            if not mult or (S == full and e == R.n):
                continue
            reports.append(_report(_representative_key(R, pairs, e), d, R.n - e - s,
                                   mult, False, poincare))
    reports.sort(key=lambda r: (-r.dim, r.face_id))
    return SmallCertificate(th, reports, all(r.small_ok for r in reports))


# -- central fiber components -------------------------------------------------

@dataclass(frozen=True)
class Component:
    graph: SubMultigraph
    dim: int
    poincare: IntPoly

    def to_json(self) -> dict:
        return {"graph": self.graph.to_json(), "dim": self.dim,
                "poincare": self.poincare.to_json()}


@dataclass
class ComponentReport:
    theta: ThetaParam
    components: list
    intersections: list  # (i, j, SubMultigraph, meets)

    def to_json(self) -> dict:
        return {"theta": list(self.theta.theta),
                "components": [c.to_json() for c in self.components],
                "intersections": [{"pair": [i, j], "graph": g.to_json(), "nonempty": meets}
                                  for i, j, g, meets in self.intersections]}


def top_components(R: MultMatrix, th: ThetaParam, *, method: str = "fast") -> ComponentReport:
    _require_generic(th)
    k = R.k
    trees = th.tree_masks()
    masks = set()
    for order in permutations(range(k)):
        pos = {v: i for i, v in enumerate(order)}
        mask = pairs_mask(k, [(u, v) for (u, v) in all_pairs(k) if pos[u] > pos[v]])
        if any(mask & t == t for t in trees):
            masks.add(mask)
    comps = []
    for mask in sorted(masks):
        G = SubMultigraph.from_mask(R, mask)
        pairs = mask_pairs(k, mask)
        W = count_supports(k, pairs, pair_weights(R, pairs, 1), ContainsTree(trees),
                           method=method)
        poincare = shift(W.divide_by_t(k - 1), -1).substitute_square()
        comps.append(Component(G, G.num_edges - k + 1, poincare))
    comps.sort(key=lambda c: c.graph.key())
    inter = []
    for i, j in combinations(range(len(comps)), 2):
        common = comps[i].graph.support & comps[j].graph.support
        G = SubMultigraph.from_mask(R, common)
        inter.append((i, j, G, any(common & t == t for t in trees)))
    return ComponentReport(th, comps, inter)


def random_generic_theta(k: int, rng: random.Random, spread: int = 6) -> ThetaParam:
    while True:
        th = [rng.randint(-spread, spread) for _ in range(k - 1)]
        th.append(-sum(th))
        p = is_generic(None, th)
        if p.generic:
            return p
