"""Weighted enumeration of supports of K_k(R).

Every graph count in the package has the form

    base_weight * sum_{S subset of free pairs, pred(base | S)} prod_{p in S} w_p(t)

where ``w_p`` is the labelled edge-count series of one ordered pair, e.g.
``(1+t)^r - 1`` when at least one of the r parallel copies is used.

Two independent evaluators exist.  ``method="brute"`` walks the supports one
at a time and evaluates predicates with the scalar graph algorithms in
:mod:`galeroot.graphs` (Tarjan, BFS).  ``method="fast"`` evaluates whole
chunks of supports as numpy uint64 bitmasks with bit-parallel peeling and
closure loops.  The two must agree exactly.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graphs import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    InstanceError,
    MultMatrix,
    all_pairs,
    is_acyclic_mask,
    is_naked_mask,
    is_rooted_mask,
    out_rows,
    pair_bit,
    scc_of_mask,
)
from .poly import ONE, IntPoly, binomial_row

CHUNK = 1 << 16
MAX_VECTOR_K = 8  # k*k bits must fit in uint64


class Batch:
    """A chunk of supports in uint64 bit layout, with lazily built rows."""

    def __init__(self, k: int, masks: np.ndarray):
        self.k = k
        self.masks = masks
        self._rows = None
        self.full = np.uint64((1 << k) - 1)

    @property
    def rows(self) -> list:
        if self._rows is None:
            self._rows = [(self.masks >> np.uint64(u * self.k)) & self.full
                          for u in range(self.k)]
        return self._rows


def _bit(x, i):
    return (x >> np.uint64(i)) & np.uint64(1)


def _acyclic_rows(rows: list, full: np.uint64, n: int) -> np.ndarray:
    """Peel sinks until nothing changes; acyclic iff everything is peeled."""
    alive = np.full(rows[0].shape, full, dtype=np.uint64)
    for _ in range(len(rows)):
        before = alive.copy()
        for u, row in enumerate(rows):
            sink = _bit(alive, u) & ((row & alive) == 0).astype(np.uint64)
            alive &= ~(sink << np.uint64(u))
        if np.array_equal(before, alive):
            break
    return alive == 0


def _reach_to(rows: list, v: int) -> np.ndarray:
    reach = np.full(rows[0].shape, np.uint64(1 << v), dtype=np.uint64)
    for _ in range(len(rows)):
        before = reach.copy()
        for u, row in enumerate(rows):
            reach |= ((row & reach) != 0).astype(np.uint64) << np.uint64(u)
        if np.array_equal(before, reach):
            break
    return reach


class Predicate:
    def test(self, k: int, mask: int) -> bool:
        raise NotImplementedError

    def vector(self, batch: Batch) -> np.ndarray:
        raise NotImplementedError

    def __and__(self, other: "Predicate") -> "Predicate":
        return And((self, other))

    def __invert__(self) -> "Predicate":
        return Not(self)


@dataclass(frozen=True)
class Const(Predicate):
    value: bool

    def test(self, k, mask):
        return self.value

    def vector(self, batch):
        return np.full(batch.masks.shape, self.value, dtype=bool)


@dataclass(frozen=True)
class And(Predicate):
    parts: tuple

    def test(self, k, mask):
        return all(p.test(k, mask) for p in self.parts)

    def vector(self, batch):
        out = self.parts[0].vector(batch)
        for p in self.parts[1:]:
            out = out & p.vector(batch)
        return out


@dataclass(frozen=True)
class Not(Predicate):
    inner: Predicate

    def test(self, k, mask):
        return not self.inner.test(k, mask)

    def vector(self, batch):
        return ~self.inner.vector(batch)


@dataclass(frozen=True)
class Acyclic(Predicate):
    def test(self, k, mask):
        return is_acyclic_mask(k, mask)

    def vector(self, batch):
        return _acyclic_rows(batch.rows, batch.full, batch.k)


@dataclass(frozen=True)
class RootedAt(Predicate):
    vertex: int  # 1-based

    def test(self, k, mask):
        return is_rooted_mask(k, mask, self.vertex - 1)

    def vector(self, batch):
        return _reach_to(batch.rows, self.vertex - 1) == batch.full


@dataclass(frozen=True)
class NoOutEdges(Predicate):
    vertex: int  # 1-based

    def test(self, k, mask):
        return out_rows(k, mask)[self.vertex - 1] == 0

    def vector(self, batch):
        return batch.rows[self.vertex - 1] == 0


@dataclass(frozen=True)
class Naked(Predicate):
    """Every edge lies on a directed cycle."""

    def test(self, k, mask):
        return is_naked_mask(k, mask)

    def vector(self, batch):
        k, rows = batch.k, batch.rows
        # reach[u]: vertices reachable from u (Warshall on bitsets)
        reach = [rows[u] | np.uint64(1 << u) for u in range(k)]
        for w in range(k):
            for u in range(k):
                has = _bit(reach[u], w).astype(bool)
                reach[u] = np.where(has, reach[u] | reach[w], reach[u])
        ok = np.ones(batch.masks.shape, dtype=bool)
        for u in range(k):
            for v in range(k):
                if u != v:
                    edge = _bit(rows[u], v).astype(bool)
                    back = _bit(reach[v], u).astype(bool)
                    ok &= ~edge | back
        return ok


@dataclass(frozen=True)
class StronglyConnected(Predicate):
    """One strongly connected component spanning all k vertices."""

    def test(self, k, mask):
        return len(scc_of_mask(k, mask)) == 1

    def vector(self, batch):
        k, rows = batch.k, batch.rows
        cols = []
        for v in range(k):
            c = np.zeros(batch.masks.shape, dtype=np.uint64)
            for u in range(k):
                c |= _bit(rows[u], v) << np.uint64(u)
            cols.append(c)
        return (_reach_to(rows, 0) == batch.full) & (_reach_to(cols, 0) == batch.full)


@dataclass(frozen=True)
class ContainsTree(Predicate):
    """Support contains at least one of the given spanning-tree masks."""

    trees: tuple

    def test(self, k, mask):
        return any(mask & t == t for t in self.trees)

    def vector(self, batch):
        out = np.zeros(batch.masks.shape, dtype=bool)
        for t in self.trees:
            tt = np.uint64(t)
            out |= (batch.masks & tt) == tt
        return out


@dataclass(frozen=True)
class SameComponents(Predicate):
    """The strongly connected components are exactly ``blocks``.

    Used with a base support in which every block is already strongly
    connected, so the condition reduces to: no cycle through the condensation.
    """

    blocks: tuple  # tuple of sorted tuples of 0-based vertices

    def test(self, k, mask):
        return tuple(tuple(c) for c in scc_of_mask(k, mask)) == self.blocks

    def vector(self, batch):
        k, rows = batch.k, batch.rows
        bmask = [sum(1 << v for v in b) for b in self.blocks]
        s = len(self.blocks)
        qrows = []
        for a, block in enumerate(self.blocks):
            out_a = np.zeros(batch.masks.shape, dtype=np.uint64)
            for u in block:
                out_a |= rows[u]
            out_a &= np.uint64(~bmask[a] & ((1 << k) - 1))
            q = np.zeros(batch.masks.shape, dtype=np.uint64)
            for b in range(s):
                if b != a:
                    q |= ((out_a & np.uint64(bmask[b])) != 0).astype(np.uint64) << np.uint64(b)
            qrows.append(q)
        return _acyclic_rows(qrows, np.uint64((1 << s) - 1), s)


# -- the engine ---------------------------------------------------------------

def _weight_classes(weights: Sequence[IntPoly]):
    """Group free pairs by identical weight polynomial."""
    polys: list[IntPoly] = []
    members: list[list[int]] = []
    for i, w in enumerate(weights):
        for c, p in enumerate(polys):
            if p == w:
                members[c].append(i)
                break
        else:
            polys.append(w)
            members.append([i])
    strides, size = [], 1
    for m in members:
        strides.append(size)
        size *= len(m) + 1
    return polys, members, strides, size


def _deposit(idx, positions, base):
    masks = np.full(idx.shape, np.uint64(base), dtype=np.uint64)
    for i, pos in enumerate(positions):
        masks |= ((idx >> np.uint64(i)) & np.uint64(1)) << np.uint64(pos)
    return masks


def _histogram(sel, members, strides, size):
    keys = np.zeros(sel.shape, dtype=np.int64)
    for mem, stride in zip(members, strides):
        cm = np.uint64(sum(1 << i for i in mem))
        keys += np.bitwise_count(sel & cm).astype(np.int64) * stride
    return np.bincount(keys, minlength=size)


def _fast_chunk(args):
    k, positions, base, pred, members, strides, size, start, stop = args
    idx = np.arange(start, stop, dtype=np.uint64)
    ok = pred.vector(Batch(k, _deposit(idx, positions, base)))
    return _histogram(idx[ok], members, strides, size)


def _histogram_to_poly(hist, polys, members, strides) -> IntPoly:
    total = IntPoly()
    powers: dict = {}
    for key in np.nonzero(hist)[0]:
        count = int(hist[key])
        term = ONE
        rem = int(key)
        for c in range(len(polys) - 1, -1, -1):
            n_c, rem = divmod(rem, strides[c])
            if n_c:
                if (c, n_c) not in powers:
                    powers[(c, n_c)] = polys[c] ** n_c
                term = term * powers[(c, n_c)]
        total = total + term * count
    return total


def count_supports(k: int, free_pairs: Sequence[tuple[int, int]],
                   weights: Sequence[IntPoly], pred: Predicate, *,
                   base_mask: int = 0, method: str = "fast",
                   budget: int = DEFAULT_BUDGET, jobs: int = 1) -> IntPoly:
    """Sum over subsets S of ``free_pairs`` (0-based) with pred(base | S)."""
    f = len(free_pairs)
    if len(weights) != f:
        raise ValueError("one weight per free pair")
    if (1 << f) > budget:
        raise BudgetExceeded(f"2^{f} supports exceed the budget of {budget}")
    positions = [u * k + v for (u, v) in free_pairs]
    if method == "brute":
        total = IntPoly()
        for idx in range(1 << f):
            mask = base_mask
            term = ONE
            for i in range(f):
                if idx >> i & 1:
                    mask |= 1 << positions[i]
                    term = term * weights[i]
            if pred.test(k, mask):
                total = total + term
        return total
    if method != "fast":
        raise ValueError(f"unknown method {method!r}")
    if k > MAX_VECTOR_K:
        raise InstanceError(f"vectorized path supports k <= {MAX_VECTOR_K}")
    polys, members, strides, size = _weight_classes(weights)
    n = 1 << f
    tasks = [(k, positions, base_mask, pred, members, strides, size, s, min(s + CHUNK, n))
             for s in range(0, n, CHUNK)]
    hist = np.zeros(size, dtype=np.int64)
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            for part in ex.map(_fast_chunk, tasks):
                hist += part
    else:
        for t in tasks:
            hist += _fast_chunk(t)
    return _histogram_to_poly(hist, polys, members, strides)


def select_supports(k: int, free_pairs: Sequence[tuple[int, int]], pred: Predicate, *,
                    base_mask: int = 0, method: str = "fast",
                    budget: int = DEFAULT_BUDGET) -> list[int]:
    """All supports base | S (S over free pairs) satisfying ``pred``, sorted."""
    f = len(free_pairs)
    if (1 << f) > budget:
        raise BudgetExceeded(f"2^{f} supports exceed the budget of {budget}")
    positions = [u * k + v for (u, v) in free_pairs]
    if method == "brute":
        out = []
        for idx in range(1 << f):
            mask = base_mask
            for i in range(f):
                if idx >> i & 1:
                    mask |= 1 << positions[i]
            if pred.test(k, mask):
                out.append(mask)
        return sorted(out)
    idx = select_indices(k, free_pairs, pred, base_mask=base_mask, budget=budget)
    return sorted(int(x) for x in _deposit(idx, positions, base_mask))


def select_indices(k: int, free_pairs: Sequence[tuple[int, int]], pred: Predicate, *,
                   base_mask: int = 0, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """Accepted subsets, as bit vectors over ``free_pairs`` (fast path only)."""
    f = len(free_pairs)
    if (1 << f) > budget:
        raise BudgetExceeded(f"2^{f} supports exceed the budget of {budget}")
    if k > MAX_VECTOR_K:
        raise InstanceError(f"vectorized path supports k <= {MAX_VECTOR_K}")
    positions = [u * k + v for (u, v) in free_pairs]
    found = []
    n = 1 << f
    for s in range(0, n, CHUNK):
        idx = np.arange(s, min(s + CHUNK, n), dtype=np.uint64)
        found.append(idx[pred.vector(Batch(k, _deposit(idx, positions, base_mask)))])
    return np.concatenate(found)


def weigh_indices(idx: np.ndarray, weights: Sequence[IntPoly]) -> IntPoly:
    """sum over accepted subsets of the product of their pair weights."""
    polys, members, strides, size = _weight_classes(weights)
    return _histogram_to_poly(_histogram(idx, members, strides, size),
                              polys, members, strides)


def pair_weights(R: MultMatrix, pairs, floor=1) -> list[IntPoly]:
    """Labelled weight per pair: sum_{c >= floor} C(r, c) t^c."""
    out = []
    for (u, v) in pairs:
        fl = floor.get((u + 1, v + 1), 1) if isinstance(floor, dict) else floor
        if fl not in (0, 1):
            raise ValueError("edge floor must be 0 or 1")
        out.append(binomial_row(R.r[u][v], fl))
    return out


def count_weighted(R: MultMatrix, pred: Predicate, edge_floor=1, *,
                   method: str = "fast", budget: int = DEFAULT_BUDGET,
                   jobs: int = 1) -> IntPoly:
    """Edge-count generating polynomial of labelled sub-multigraphs of K_k(R)
    whose support satisfies ``pred``.

    ``edge_floor`` (int, or dict keyed by 1-based pairs) is the minimum number
    of copies a chosen support pair contributes.
    """
    pairs = all_pairs(R.k)
    return count_supports(R.k, pairs, pair_weights(R, pairs, edge_floor), pred,
                          method=method, budget=budget, jobs=jobs)


def tree_masks(k: int, trees) -> tuple:
    """Trees given as iterables of 0-based pairs -> sorted tuple of masks."""
    return tuple(sorted(sum(pair_bit(k, u, v) for u, v in t) for t in trees))
