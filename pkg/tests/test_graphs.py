import json
from itertools import product

import pytest
from hypothesis import given, strategies as st

from galeroot.graphs import (InstanceError, MultMatrix, SubMultigraph, all_pairs,
                             component_count, is_acyclic, is_rooted_at, mask_pairs,
                             naked_core, pair_bit, pairs_mask, scc_of_mask, support_scc)


def ones(k):
    return MultMatrix.ones(k)


def G(R, *edges):
    return SubMultigraph.from_edges(R, edges)


def test_multmatrix_basics():
    R = MultMatrix.from_flat(3, [1, 2, 3])
    assert R.n == 12 and R.D == 9
    assert R.r[0][1] == R.r[1][0] == 1 and R.r[1][2] == 3
    assert R.flat() == [1, 2, 3]
    assert MultMatrix.ones(4).D == 4 * 2
    for bad in ([1, 1], [1, 0, 1], [1, -1, 1]):
        with pytest.raises(InstanceError):
            MultMatrix.from_flat(3, bad)
    with pytest.raises(InstanceError):
        MultMatrix.from_flat(0, [])


def test_quotient_and_restrict():
    R = MultMatrix.from_flat(4, [1, 2, 3, 4, 5, 6])
    Q = R.quotient([[0, 1], [2], [3]])
    assert Q.flat() == [2 + 4, 3 + 5, 6]
    assert R.restrict([1, 3]).flat() == [5]


def test_support_scc_examples():
    R = ones(3)
    assert support_scc(G(R, (1, 2), (2, 1), (2, 3))) == [frozenset({1, 2}), frozenset({3})]
    assert support_scc(SubMultigraph.empty(R)) == [frozenset({1}), frozenset({2}), frozenset({3})]
    assert support_scc(SubMultigraph.complete(R)) == [frozenset({1, 2, 3})]


def test_naked_core_examples():
    R = ones(3)
    assert naked_core(G(R, (2, 1), (3, 1))) == SubMultigraph.empty(R)
    assert naked_core(G(R, (1, 2), (2, 1), (2, 3))) == G(R, (1, 2), (2, 1))
    full = SubMultigraph.complete(R)
    assert naked_core(full) == full


def test_naked_core_keeps_counts():
    R = MultMatrix.from_flat(3, [3, 1, 1])
    g = G(R, (1, 2, 2), (2, 1, 3), (2, 3))
    assert naked_core(g) == G(R, (1, 2, 2), (2, 1, 3))


def test_is_acyclic_examples():
    R = MultMatrix.from_flat(2, [2])
    assert is_acyclic(G(R, (1, 2, 2)))
    assert not is_acyclic(G(R, (1, 2), (2, 1)))
    assert is_acyclic(SubMultigraph.empty(R))


def test_is_rooted_examples():
    R = ones(3)
    assert is_rooted_at(G(R, (2, 1), (3, 1)), 1)
    assert not is_rooted_at(G(R, (2, 1)), 1)
    assert is_rooted_at(SubMultigraph.empty(ones(1)), 1)
    with pytest.raises(InstanceError):
        is_rooted_at(G(R, (2, 1)), 4)


def test_component_count_examples():
    R = ones(3)
    assert component_count(SubMultigraph.empty(R)) == 3
    assert component_count(G(R, (1, 2), (2, 1))) == 2
    assert component_count(SubMultigraph.complete(R)) == 1


def test_validation():
    R = MultMatrix.from_flat(2, [2])
    with pytest.raises(InstanceError):
        G(R, (1, 2, 3))
    with pytest.raises(InstanceError):
        G(R, (1, 1))


def test_json_dump():
    R = ones(3)
    g = G(R, (2, 1), (3, 1))
    assert g.to_json() == {"k": 3, "edges": [{"from": 2, "to": 1, "copies": 1},
                                             {"from": 3, "to": 1, "copies": 1}]}
    json.dumps(g.to_json())


def test_key_roundtrip():
    R = MultMatrix.from_flat(3, [2, 1, 2])
    g = G(R, (1, 2, 2), (3, 2), (2, 3, 2))
    assert SubMultigraph.from_key(R, g.key()) == g
    assert g.key() == "2.0.0.0.2.1"
    with pytest.raises(InstanceError):
        SubMultigraph.from_key(R, "1.2")


def test_canonical_pair_order():
    assert all_pairs(3) == [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)]


# -- independent oracles ---------------------------------------------------

def closure(k, mask):
    reach = [[u == v or bool(mask & pair_bit(k, u, v)) for v in range(k)] for u in range(k)]
    for w in range(k):
        for u in range(k):
            for v in range(k):
                reach[u][v] = reach[u][v] or (reach[u][w] and reach[w][v])
    return reach


def every_edge_on_cycle(k, mask):
    """Explicit search: for each edge u->v find a directed walk v ~> u."""
    adj = {u: [v for v in range(k) if mask & pair_bit(k, u, v)] for u in range(k)}
    for (u, v) in mask_pairs(k, mask):
        seen, stack = {v}, [v]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if u not in seen:
            return False
    return True


@st.composite
def submultigraphs(draw, kmax=5, rmax=3):
    k = draw(st.integers(1, kmax))
    flat = draw(st.lists(st.integers(1, rmax), min_size=k * (k - 1) // 2,
                         max_size=k * (k - 1) // 2))
    R = MultMatrix.from_flat(k, flat)
    counts = {}
    for (u, v) in all_pairs(k):
        c = draw(st.integers(0, R.r[u][v]))
        if c:
            counts[(u, v)] = c
    return SubMultigraph.from_counts(R, counts)


@given(submultigraphs())
def test_naked_core_idempotent(g):
    core = naked_core(g)
    assert naked_core(core) == core
    assert g.contains(core)


@given(submultigraphs())
def test_naked_iff_cycle_cover(g):
    assert (naked_core(g) == g) == every_edge_on_cycle(g.k, g.support)


@given(submultigraphs())
def test_scc_matches_transitive_closure(g):
    k = g.k
    reach = closure(k, g.support)
    comps = scc_of_mask(k, g.support)
    where = {v: i for i, c in enumerate(comps) for v in c}
    for u, v in product(range(k), repeat=2):
        assert (where[u] == where[v]) == (reach[u][v] and reach[v][u])


@given(submultigraphs())
def test_acyclic_iff_all_sccs_trivial(g):
    assert is_acyclic(g) == all(len(c) == 1 for c in support_scc(g))


@pytest.mark.parametrize("k", [3, 4])
def test_rooted_implies_connected_exhaustive(k):
    R = ones(k)
    pairs = all_pairs(k)
    for bits in range(1 << len(pairs)):
        g = SubMultigraph.from_mask(R, pairs_mask(k, [p for i, p in enumerate(pairs) if bits >> i & 1]))
        if is_rooted_at(g, 1):
            assert component_count(g) == 1
