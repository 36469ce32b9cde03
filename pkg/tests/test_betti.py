from itertools import product
from math import comb

import pytest
from hypothesis import given, strategies as st

from conftest import small_instances
from galeroot.betti import (
    g_hat, g_poly, g_poly_recursive, h_hat, h_poly, h_poly_recursive, intro_g, intro_h,
    restricted_growth_strings,
)
from galeroot.graphs import MultMatrix
from galeroot.linalg import bareiss_det
from galeroot.poly import IntPoly, g_from_h, is_palindromic, p_poly, shift

ONES3 = MultMatrix.from_flat(3, [1, 1, 1])
ONES4 = MultMatrix.ones(4)
ONES5 = MultMatrix.ones(5)


def product_of_p(R):
    out = IntPoly((1,))
    for i in range(R.k):
        out = out * p_poly(sum(R.r[i][j] for j in range(R.k) if j != i))
    return out


def rooted_tree_count(R):
    """Arborescences into vertex 1, parallel copies distinct (matrix-tree)."""
    k = R.k
    L = [[0] * k for _ in range(k)]
    for u in range(k):
        for v in range(k):
            if u != v:
                L[u][u] += R.r[u][v]
                L[u][v] -= R.r[u][v]
    return bareiss_det([row[1:] for row in L[1:]])


# -- examples -----------------------------------------------------------------

def test_prism_values():
    assert g_hat(ONES3) == IntPoly((3, 2))
    assert g_poly(ONES3) == IntPoly((1, 2))
    assert shift(h_hat(ONES3), -1) == IntPoly((1, 3, 3, 1))
    assert h_poly(ONES3) == IntPoly((1, 3, 3, 1))


def test_k2():
    R = MultMatrix.from_flat(2, [1])
    assert h_hat(R) == IntPoly((1,))
    for r in range(1, 6):
        R = MultMatrix.from_flat(2, [r])
        assert h_poly(R) == p_poly(r) * p_poly(r)
        assert g_poly(R) == p_poly(r)


def test_k1_convention():
    R = MultMatrix.from_flat(1, [])
    assert g_poly(R) == h_poly(R) == IntPoly((1,))
    assert intro_g(1) == IntPoly((1,))


@pytest.mark.parametrize("flat", list(product(range(1, 4), repeat=3)))
def test_k3_product_formula(flat):
    R = MultMatrix.from_flat(3, list(flat))
    assert h_poly(R) == product_of_p(R)


def test_frozen_k4_k5():
    assert h_poly(ONES4) == IntPoly((1, 4, 10, 16, 16, 16, 10, 4, 1))
    assert g_poly(ONES4) == IntPoly((1, 3, 6, 6))
    assert g_poly_recursive(ONES5) == IntPoly((1, 4, 10, 20, 30, 36, 24))


def test_intro_formulas():
    assert intro_h(3) == IntPoly((1, 3, 3, 1))
    assert intro_g(3) == IntPoly((1, 2))
    for k in range(2, 8):
        R = MultMatrix.ones(k)
        assert intro_g(k) == g_poly_recursive(R)
        assert intro_h(k) == h_poly_recursive(R)


# -- cross-method agreement ---------------------------------------------------

@pytest.mark.parametrize("R", small_instances(4, 2) + [ONES5], ids=lambda R: f"k{R.k}-{R.flat()}")
def test_methods_agree(R):
    g, h = g_poly(R), h_poly(R)
    assert g == g_poly_recursive(R)
    assert h == h_poly_recursive(R)
    assert g == g_from_h(h, R.D)
    assert is_palindromic(h) and h.degree == R.D
    assert g[0] == h[0] == 1
    assert all(c >= 0 for c in g.coeffs) and all(c >= 0 for c in h.coeffs)
    assert 2 * g.degree <= R.D
    gh, hh = g_hat(R), h_hat(R)
    assert all(c >= 0 for c in gh.coeffs) and all(c >= 0 for c in hh.coeffs)
    assert gh[0] == rooted_tree_count(R)


def test_brute_matches_fast():
    for R in small_instances(3, 2):
        assert g_hat(R, method="brute") == g_hat(R)
        assert h_hat(R, method="brute") == h_hat(R)


@given(st.integers(3, 4).flatmap(
    lambda k: st.lists(st.integers(1, 3), min_size=k * (k - 1) // 2, max_size=k * (k - 1) // 2)
    .map(lambda flat: MultMatrix.from_flat(k, flat))))
def test_recursions_agree(R):
    g, h = g_poly_recursive(R), h_poly_recursive(R)
    assert is_palindromic(h) and h.degree == R.D
    assert g == g_from_h(h, R.D)
    assert all(c >= 0 for c in g.coeffs)


def test_recursion_k8_fast():
    R = MultMatrix.ones(8)
    h = h_poly_recursive(R)
    assert h.degree == R.D and is_palindromic(h)
    assert g_poly_recursive(R) == g_from_h(h, R.D)


# -- set partitions -----------------------------------------------------------

BELL = [1, 1, 2, 5, 15, 52, 203, 877]
NO_SINGLETONS = [1, 0, 1, 1, 4, 11, 41, 162]


@pytest.mark.parametrize("n", range(1, 8))
def test_restricted_growth_counts(n):
    parts = list(restricted_growth_strings(n))
    assert len(parts) == BELL[n]
    assert len({tuple(map(tuple, p)) for p in parts}) == BELL[n]
    for p in parts:
        assert sorted(v for b in p for v in b) == list(range(n))
    assert len(list(restricted_growth_strings(n, min_block=2))) == NO_SINGLETONS[n]
    two = list(restricted_growth_strings(n, min_blocks=2))
    assert len(two) == BELL[n] - 1


def test_two_block_partitions():
    # Stirling number S(n, 2) = 2^(n-1) - 1
    for n in range(2, 8):
        parts = [p for p in restricted_growth_strings(n) if len(p) == 2]
        assert len(parts) == 2 ** (n - 1) - 1
        assert sum(comb(n, j) for j in range(1, n)) == 2 * len(parts)
