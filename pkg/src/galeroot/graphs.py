"""Directed sub-multigraphs of the complete multigraph K_k(R).

An instance is a symmetric table of positive multiplicities r_ij on k
vertices: there are r_ij parallel copies of the edge i->j and r_ij copies of
j->i.  A sub-multigraph records how many copies of each ordered pair it uses.
Parallel copies are interchangeable, so labelled counts are recovered from
binomial weights and only the *support* (the underlying simple digraph) is
ever enumerated.

Vertices are 1-based in every public signature and serialized form.
Internally vertex ``v`` is ``v - 1`` and a support is an int bitmask with bit
``u * k + w`` standing for the ordered pair u->w (0-based).
"""

from __future__ import annotations

from functools import lru_cache
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Sequence

MAX_K = 16


class InstanceError(ValueError):
    """Malformed multiplicity data or graph."""


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed the configured iteration budget."""


DEFAULT_BUDGET = 2 ** 30


def pair_bit(k: int, u: int, v: int) -> int:
    return 1 << (u * k + v)


@lru_cache(maxsize=None)
def _all_pairs(k: int) -> tuple:
    out = []
    for j in range(1, k):
        for i in range(j):
            out.append((i, j))
            out.append((j, i))
    return tuple(out)


def all_pairs(k: int) -> list[tuple[int, int]]:
    """Ordered pairs (0-based) in the canonical order (1,2),(2,1),(1,3),(3,1),..."""
    return list(_all_pairs(k))


@dataclass(frozen=True)
class MultMatrix:
    k: int
    r: tuple  # k x k tuple of tuples, symmetric, zero diagonal

    def __post_init__(self):
        k = self.k
        if not 1 <= k <= MAX_K:
            raise InstanceError(f"k must be in 1..{MAX_K}, got {k}")
        if len(self.r) != k or any(len(row) != k for row in self.r):
            raise InstanceError("multiplicity table has the wrong shape")
        for i in range(k):
            if self.r[i][i] != 0:
                raise InstanceError("diagonal multiplicities must be 0")
            for j in range(i + 1, k):
                a, b = self.r[i][j], self.r[j][i]
                if a != b:
                    raise InstanceError(f"r is not symmetric at ({i + 1},{j + 1})")
                if not isinstance(a, int) or a < 1:
                    raise InstanceError(f"r_{i + 1}{j + 1} must be a positive integer")

    @classmethod
    def from_flat(cls, k: int, flat: Sequence[int]) -> "MultMatrix":
        """Build from r_12, r_13, ..., r_1k, r_23, ..., r_{k-1,k}."""
        if k < 1:
            raise InstanceError("k must be >= 1")
        need = k * (k - 1) // 2
        flat = list(flat)
        if len(flat) != need:
            raise InstanceError(f"k={k} needs {need} multiplicities, got {len(flat)}")
        rows = [[0] * k for _ in range(k)]
        it = iter(flat)
        for i in range(k):
            for j in range(i + 1, k):
                v = next(it)
                if isinstance(v, bool) or not isinstance(v, int):
                    raise InstanceError("multiplicities must be integers")
                rows[i][j] = rows[j][i] = v
        return cls(k, tuple(tuple(row) for row in rows))

    @classmethod
    def ones(cls, k: int) -> "MultMatrix":
        return cls.from_flat(k, [1] * (k * (k - 1) // 2))

    def flat(self) -> list[int]:
        return [self.r[i][j] for i in range(self.k) for j in range(i + 1, self.k)]

    @property
    def n(self) -> int:
        """Total number of edge copies of K_k(R), i.e. 2 * sum_{i<j} r_ij."""
        return 2 * sum(self.flat())

    @property
    def D(self) -> int:
        """Dimension of the polytope: n - k."""
        return self.n - self.k

    @property
    def half(self) -> int:
        return sum(self.flat())

    def mult(self, u: int, v: int) -> int:
        return self.r[u][v]

    def restrict(self, vertices: Sequence[int]) -> "MultMatrix":
        """Induced instance on the given 0-based vertices (in the given order)."""
        vs = list(vertices)
        return MultMatrix(len(vs), tuple(tuple(self.r[a][b] for b in vs) for a in vs))

    def quotient(self, blocks: Sequence[Sequence[int]]) -> "MultMatrix":
        """Contract each block of 0-based vertices; r'_AB = sum of r_ij across."""
        m = len(blocks)
        rows = [[0] * m for _ in range(m)]
        for a in range(m):
            for b in range(a + 1, m):
                s = sum(self.r[i][j] for i in blocks[a] for j in blocks[b])
                rows[a][b] = rows[b][a] = s
        return MultMatrix(m, tuple(tuple(row) for row in rows))

    def degree(self, i: int) -> int:
        """r_i = sum_j r_ij (0-based vertex)."""
        return sum(self.r[i])

    def __str__(self):
        return f"R(k={self.k}; {','.join(map(str, self.flat()))})"


# -- support-level scalar graph algorithms (Python ints, any k <= 16) --------

def out_rows(k: int, mask: int) -> list[int]:
    full = (1 << k) - 1
    return [(mask >> (u * k)) & full for u in range(k)]


def in_rows(k: int, mask: int) -> list[int]:
    rows = out_rows(k, mask)
    ins = [0] * k
    for u, row in enumerate(rows):
        v = 0
        while row:
            if row & 1:
                ins[v] |= 1 << u
            row >>= 1
            v += 1
    return ins


def _bits(x: int) -> Iterator[int]:
    i = 0
    while x:
        if x & 1:
            yield i
        x >>= 1
        i += 1


def scc_of_mask(k: int, mask: int) -> list[list[int]]:
    """Strongly connected components (0-based) by an iterative Tarjan."""
    adj = [list(_bits(row)) for row in out_rows(k, mask)]
    index = [-1] * k
    low = [0] * k
    on_stack = [False] * k
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(k):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            if i < len(adj[v]):
                work[-1] = (v, i + 1)
                w = adj[v][i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
            else:
                work.pop()
                if work:
                    parent = work[-1][0]
                    low[parent] = min(low[parent], low[v])
                if low[v] == index[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on_stack[w] = False
                        comp.append(w)
                        if w == v:
                            break
                    comps.append(sorted(comp))
    comps.sort()
    return comps


def naked_mask(k: int, mask: int) -> int:
    """Pairs of ``mask`` whose endpoints share a strongly connected component."""
    comp_of = [0] * k
    for c, comp in enumerate(scc_of_mask(k, mask)):
        for v in comp:
            comp_of[v] = c
    out = 0
    for u in range(k):
        for v in range(k):
            b = pair_bit(k, u, v)
            if mask & b and comp_of[u] == comp_of[v]:
                out |= b
    return out


def is_naked_mask(k: int, mask: int) -> bool:
    return naked_mask(k, mask) == mask


def is_acyclic_mask(k: int, mask: int) -> bool:
    return all(len(c) == 1 for c in scc_of_mask(k, mask))


def reaches_mask(k: int, mask: int, v: int) -> int:
    """Vertex bitmask of everything with a directed path to ``v`` (0-based)."""
    ins = in_rows(k, mask)
    seen = 1 << v
    frontier = [v]
    while frontier:
        w = frontier.pop()
        for u in _bits(ins[w]):
            if not seen >> u & 1:
                seen |= 1 << u
                frontier.append(u)
    return seen


def is_rooted_mask(k: int, mask: int, v: int) -> bool:
    return reaches_mask(k, mask, v) == (1 << k) - 1


def weak_components_mask(k: int, mask: int) -> list[list[int]]:
    parent = list(range(k))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, row in enumerate(out_rows(k, mask)):
        for v in _bits(row):
            a, b = find(u), find(v)
            if a != b:
                parent[a] = b
    groups: dict[int, list[int]] = {}
    for v in range(k):
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values())


def mask_pairs(k: int, mask: int) -> list[tuple[int, int]]:
    return [(u, v) for (u, v) in all_pairs(k) if mask & pair_bit(k, u, v)]


def pairs_mask(k: int, pairs: Iterable[tuple[int, int]]) -> int:
    m = 0
    for u, v in pairs:
        m |= pair_bit(k, u, v)
    return m


# -- SubMultigraph ------------------------------------------------------------

@dataclass(frozen=True)
class SubMultigraph:
    """Edge-copy counts c_ij (0 <= c_ij <= r_ij) on the ordered pairs of R."""

    parent: MultMatrix
    counts: tuple = field(default=())  # sorted ((u, v), c) with c > 0, 0-based

    def __post_init__(self):
        k = self.parent.k
        seen = set()
        for (u, v), c in self.counts:
            if not (0 <= u < k and 0 <= v < k) or u == v:
                raise InstanceError(f"bad pair ({u + 1},{v + 1})")
            if (u, v) in seen:
                raise InstanceError("duplicate pair")
            seen.add((u, v))
            if not 1 <= c <= self.parent.r[u][v]:
                raise InstanceError(
                    f"count {c} on {u + 1}->{v + 1} outside 1..{self.parent.r[u][v]}")

    @classmethod
    def from_counts(cls, R: MultMatrix, counts: dict) -> "SubMultigraph":
        """``counts`` maps 0-based ordered pairs to copy numbers."""
        items = tuple(sorted((p, c) for p, c in counts.items() if c))
        return cls(R, items)

    @classmethod
    def from_edges(cls, R: MultMatrix, edges: Iterable) -> "SubMultigraph":
        """Edges as 1-based ``(from, to)`` or ``(from, to, copies)`` tuples;
        repeated pairs accumulate copies."""
        acc: dict = {}
        for e in edges:
            u, v = e[0] - 1, e[1] - 1
            c = e[2] if len(e) > 2 else 1
            acc[(u, v)] = acc.get((u, v), 0) + c
        return cls.from_counts(R, acc)

    @classmethod
    def from_mask(cls, R: MultMatrix, mask: int, full: bool = True) -> "SubMultigraph":
        """Support ``mask`` with all copies (``full``) or one copy per pair."""
        return cls.from_counts(R, {(u, v): (R.r[u][v] if full else 1)
                                   for (u, v) in mask_pairs(R.k, mask)})

    @classmethod
    def trusted(cls, R: MultMatrix, counts: tuple) -> "SubMultigraph":
        """Skip validation; ``counts`` must already be sorted and in range."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "parent", R)
        object.__setattr__(obj, "counts", counts)
        return obj

    @classmethod
    def empty(cls, R: MultMatrix) -> "SubMultigraph":
        return cls(R, ())

    @classmethod
    def complete(cls, R: MultMatrix) -> "SubMultigraph":
        return cls.from_mask(R, pairs_mask(R.k, all_pairs(R.k)))

    @property
    def k(self) -> int:
        return self.parent.k

    def count(self, u: int, v: int) -> int:
        """Copies on the 0-based pair u->v."""
        for p, c in self.counts:
            if p == (u, v):
                return c
        return 0

    def as_dict(self) -> dict:
        return dict(self.counts)

    @property
    def support(self) -> int:
        return pairs_mask(self.k, (p for p, _ in self.counts))

    @property
    def num_edges(self) -> int:
        return sum(c for _, c in self.counts)

    def contains(self, other: "SubMultigraph") -> bool:
        mine = self.as_dict()
        return all(mine.get(p, 0) >= c for p, c in other.counts)

    def key(self) -> str:
        """Copy counts along the canonical pair order, dot separated."""
        d = self.as_dict()
        return ".".join(str(d.get(p, 0)) for p in _all_pairs(self.k))

    @classmethod
    def from_key(cls, R: MultMatrix, key: str) -> "SubMultigraph":
        parts = key.split(".") if key else []
        pairs = all_pairs(R.k)
        if len(parts) != len(pairs):
            raise InstanceError(f"face key needs {len(pairs)} entries, got {len(parts)}")
        try:
            vals = [int(x) for x in parts]
        except ValueError:
            raise InstanceError(f"malformed face key {key!r}") from None
        return cls.from_counts(R, dict(zip(pairs, vals)))

    def to_json(self) -> dict:
        return {"k": self.k,
                "edges": [{"from": u + 1, "to": v + 1, "copies": c}
                          for (u, v), c in sorted(self.counts, key=lambda pc: (pc[0][0], pc[0][1]))]}

    def __str__(self):
        body = ", ".join(f"{u + 1}->{v + 1}" + (f"x{c}" if c > 1 else "")
                         for (u, v), c in self.counts)
        return "{" + body + "}"


def support_scc(G: SubMultigraph) -> list[frozenset]:
    """Strongly connected components of support(G), 1-based."""
    return [frozenset(v + 1 for v in comp) for comp in scc_of_mask(G.k, G.support)]


def naked_core(G: SubMultigraph) -> SubMultigraph:
    """Maximal naked sub-multigraph: keep pairs inside one SCC, with full counts."""
    keep = naked_mask(G.k, G.support)
    return SubMultigraph.from_counts(
        G.parent, {p: c for p, c in G.counts if keep & pair_bit(G.k, *p)})


def is_acyclic(G: SubMultigraph) -> bool:
    return is_acyclic_mask(G.k, G.support)


def is_rooted_at(G: SubMultigraph, v: int) -> bool:
    if not 1 <= v <= G.k:
        raise InstanceError(f"vertex {v} outside 1..{G.k}")
    return is_rooted_mask(G.k, G.support, v - 1)


def component_count(G: SubMultigraph) -> int:
    """Weakly connected components on the full vertex set, isolated ones included."""
    return len(weak_components_mask(G.k, G.support))


def subsets(items: Sequence, min_size: int = 0) -> Iterator[tuple]:
    for size in range(min_size, len(items) + 1):
        yield from combinations(items, size)
