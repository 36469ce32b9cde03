"""g- and h-polynomials of the polytope Pi(R) by graph counting and by recursion."""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from math import comb, factorial
from collections import Counter

from .counting import Acyclic, RootedAt, count_supports, pair_weights
from .graphs import DEFAULT_BUDGET, InstanceError, MultMatrix, all_pairs
from .poly import ONE, IntPoly, T, p_poly, shift


def g_hat(R: MultMatrix, *, method: str = "fast", budget: int = DEFAULT_BUDGET,
          jobs: int = 1) -> IntPoly:
    """Acyclic spanning sub-multigraphs rooted at 1 that avoid the out-edges
    of vertex 1; coefficient i counts those with k-1+i edge copies."""
    k = R.k
    pairs = [(u, v) for (u, v) in all_pairs(k) if u != 0]
    raw = count_supports(k, pairs, pair_weights(R, pairs, 1), Acyclic() & RootedAt(1),
                         method=method, budget=budget, jobs=jobs)
    return raw.divide_by_t(k - 1)


def h_hat(R: MultMatrix, *, method: str = "fast", budget: int = DEFAULT_BUDGET,
          jobs: int = 1) -> IntPoly:
    """Spanning sub-multigraphs of K_k(R) rooted at 1 with at least one
    directed cycle; coefficient i counts those with k+i edge copies."""
    k = R.k
    if k < 2:
        raise InstanceError("h_hat needs k >= 2")
    pairs = all_pairs(k)
    raw = count_supports(k, pairs, pair_weights(R, pairs, 1), ~Acyclic() & RootedAt(1),
                         method=method, budget=budget, jobs=jobs)
    return raw.divide_by_t(k)


def g_poly(R: MultMatrix, **kw) -> IntPoly:
    return shift(g_hat(R, **kw), -1)


def h_poly(R: MultMatrix, **kw) -> IntPoly:
    if R.k == 1:
        return ONE
    return shift(h_hat(R, **kw), -1)


# -- recursions ---------------------------------------------------------------

def _block_key(R: MultMatrix, verts: tuple) -> tuple:
    # induced sub-instance; identical keys give identical polynomials
    return tuple(R.r[a][b] for i, a in enumerate(verts) for b in verts[i + 1:]), len(verts)


@lru_cache(maxsize=None)
def _g_rec(k: int, flat: tuple) -> IntPoly:
    if k == 1:
        return ONE
    R = MultMatrix.from_flat(k, list(flat))
    others = range(1, k)
    total = IntPoly()
    for size in range(1, k):
        sign = 1 if size % 2 else -1
        for J in combinations(others, size):
            rest = tuple(v for v in range(k) if v not in J)
            term = _g_rec(len(rest), _block_key(R, rest)[0])
            for j in J:
                term = term * p_poly(sum(R.r[i][j] for i in rest))
            total = total + term * sign
    return total


def g_poly_recursive(R: MultMatrix) -> IntPoly:
    """Inclusion-exclusion over the set J of vertices with no in-edges from
    the rest; vertex 1 is never in J."""
    return _g_rec(R.k, tuple(R.flat()))


def restricted_growth_strings(n: int, min_block: int = 1, min_blocks: int = 1):
    """Set partitions of range(n) as lists of blocks, via restricted growth
    strings, pruning branches that cannot reach ``min_block`` per block."""
    a = [0] * n
    sizes: list[int] = []

    def rec(i):
        if i == n:
            if len(sizes) >= min_blocks and all(s >= min_block for s in sizes):
                blocks = [[] for _ in sizes]
                for v, b in enumerate(a):
                    blocks[b].append(v)
                yield blocks
            return
        remaining = n - i
        deficit = sum(max(0, min_block - s) for s in sizes)
        if deficit > remaining:
            return
        for b in range(len(sizes)):
            a[i] = b
            sizes[b] += 1
            yield from rec(i + 1)
            sizes[b] -= 1
        if deficit + min_block <= remaining:
            a[i] = len(sizes)
            sizes.append(1)
            yield from rec(i + 1)
            sizes.pop()

    yield from rec(0)


@lru_cache(maxsize=None)
def _h_rec(k: int, flat: tuple) -> IntPoly:
    if k == 1:
        return ONE
    R = MultMatrix.from_flat(k, list(flat))
    total = ONE
    for i in range(k):
        total = total * p_poly(R.degree(i))
    for blocks in restricted_growth_strings(k, min_block=2, min_blocks=2):
        where = {v: b for b, blk in enumerate(blocks) for v in blk}
        cross = sum(R.r[i][j] for i in range(k) for j in range(i + 1, k) if where[i] != where[j])
        term = IntPoly.monomial(cross)
        for blk in blocks:
            term = term * _h_rec(len(blk), _block_key(R, tuple(blk))[0])
        total = total - term
    return total


def h_poly_recursive(R: MultMatrix) -> IntPoly:
    if R.k < 1:
        raise InstanceError("k must be >= 1")
    return _h_rec(R.k, tuple(R.flat()))


# -- r = 1 specializations -----------------------------------------------------

@lru_cache(maxsize=None)
def intro_g(k: int) -> IntPoly:
    if k < 1:
        raise InstanceError("k must be >= 1")
    if k == 1:
        return ONE
    total = IntPoly()
    for j in range(1, k):
        sign = 1 if j % 2 else -1
        total = total + p_poly(k - j) ** j * intro_g(k - j) * (comb(k - 1, j) * sign)
    return total


def _integer_partitions(n: int, smallest: int):
    if n == 0:
        yield ()
        return
    for first in range(smallest, n + 1):
        for rest in _integer_partitions(n - first, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def intro_h(k: int) -> IntPoly:
    """Groups the set partitions by block-size shape lambda; a shape occurs
    k! / (prod lambda_i! prod m_j!) times."""
    if k < 1:
        raise InstanceError("k must be >= 1")
    if k == 1:
        return ONE
    total = p_poly(k - 1) ** k
    for lam in _integer_partitions(k, 2):
        if len(lam) < 2:
            continue
        mult = factorial(k)
        for part in lam:
            mult //= factorial(part)
        for m in Counter(lam).values():
            mult //= factorial(m)
        cross = (k * k - sum(x * x for x in lam)) // 2
        term = T ** cross * mult
        for part in lam:
            term = term * intro_h(part)
        total = total - term
    return total
