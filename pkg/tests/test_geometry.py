from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import small_instances
from galeroot.geometry import (
    _check_farkas, build_gale, cycle_cover, farkas, gale_from_vectors, hull_faces, root,
    solve_functional, theta_coords, verify_faces, verify_gale, verify_unimodular,
)
from galeroot.graphs import MultMatrix, pairs_mask
from galeroot.lattice import enumerate_faces
from galeroot.linalg import bareiss_det, bareiss_rank, nullspace, rank_mod_p, rref, solve

ONES3 = MultMatrix.from_flat(3, [1, 1, 1])


def affine_rank(vectors):
    if not vectors:
        return -1
    return len(rref(vectors)[1]) - 1


def test_build_gale_k2():
    gd = build_gale(MultMatrix.from_flat(2, [1]))
    assert sorted(gd.alphas) == [(-1, 1), (1, -1)]
    assert len(rref(gd.betas)[1]) == 1
    assert verify_gale(gd)


@pytest.mark.parametrize("flat, f", [((1, 1, 1), [6, 9, 5]), ((2,), [4, 4])])
def test_hull_f_vector(flat, f):
    R = MultMatrix.from_flat(2 if len(flat) == 1 else 3, list(flat))
    hull = hull_faces(build_gale(R))
    counts = [sum(1 for d in hull.values() if d == i) for i in range(R.D)]
    assert counts == f == enumerate_faces(R).f_vector()


def test_functional_examples():
    gd = build_gale(ONES3)
    assert solve_functional(gd, [0] * 6) is not None
    cyc = [0] * 6
    for (u, v) in [(0, 1), (1, 2), (2, 0)]:
        cyc[gd.copies()[(u, v)][0]] = 1
    assert not any(gd.eval_alpha(cyc))
    assert solve_functional(gd, cyc) is not None
    single = [0] * 6
    single[0] = 1
    assert solve_functional(gd, single) is None


def test_unimodular():
    assert verify_unimodular(build_gale(ONES3))
    assert verify_unimodular(build_gale(MultMatrix.ones(4)))
    alphas = [root(3, i, j) for i in range(3) for j in range(3) if i != j]
    alphas[0] = tuple(2 * x for x in alphas[0])
    assert not verify_unimodular(gale_from_vectors(alphas))


def test_face_examples():
    gd = build_gale(ONES3)
    two_cycle = pairs_mask(3, [(0, 1), (1, 0)])
    m = cycle_cover(gd, two_cycle)
    assert m is not None and not any(gd.eval_alpha(m))
    outside = [gd.betas[i] for p, idx in gd.copies().items() if p not in ((0, 1), (1, 0)) for i in idx]
    assert affine_rank(outside) == 2
    single = pairs_mask(3, [(0, 1)])
    cert = farkas(gd, single)
    assert cert is not None and _check_farkas(gd, single, *cert)
    assert affine_rank(gd.betas) == ONES3.D


def test_theta_coords_examples():
    gd = build_gale(ONES3)
    assert theta_coords(gd, [(2, 1), (3, 1)], (2, -1, -1)) == [1, 1]
    assert min(theta_coords(gd, [(2, 1), (2, 3)], (2, -1, -1))) <= 0
    assert theta_coords(build_gale(MultMatrix.from_flat(2, [1])), [(2, 1)], (1, -1)) == [1]


@pytest.mark.parametrize("R", small_instances(3, 2), ids=lambda R: f"k{R.k}-{R.flat()}")
def test_oracles_small(R):
    gd = build_gale(R)
    assert verify_gale(gd, trials=100)
    assert verify_unimodular(gd)
    L = enumerate_faces(R)
    assert verify_faces(gd, L).ok
    # combinatorial dims against exact affine ranks of the vertex sets
    copies = gd.copies()
    for F in L.faces:
        counts = F.core.as_dict()
        outside = [gd.betas[i] for p, idx in copies.items() for i in idx[counts.get(p, 0):]]
        assert affine_rank(outside) == F.dim, F.id


@pytest.mark.parametrize("flat", [(1, 1, 1, 1, 1, 1, 1, 1, 1, 1), (2, 1, 1, 1, 1, 1, 1, 1, 1, 2)])
def test_gale_k5(flat):
    assert verify_gale(build_gale(MultMatrix.from_flat(5, list(flat))), trials=100)


def test_verify_faces_detects_wrong_dimension():
    R = ONES3
    L = enumerate_faces(R)
    F = L.faces[1]
    object.__setattr__(F, "dim", F.dim - 1)
    try:
        assert not verify_faces(build_gale(R), L).ok
    finally:
        object.__setattr__(F, "dim", F.dim + 1)


# -- exact linear algebra ----------------------------------------------------------

matrices = st.integers(1, 5).flatmap(lambda c: st.lists(
    st.lists(st.integers(-4, 4), min_size=c, max_size=c), min_size=1, max_size=5))


@given(matrices)
def test_bareiss_rank_matches_rref(M):
    assert bareiss_rank(M) == len(rref(M)[1])
    assert rank_mod_p(M) <= bareiss_rank(M)


@given(st.integers(1, 4).flatmap(lambda n: st.lists(
    st.lists(st.integers(-5, 5), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_bareiss_det_matches_fraction(M):
    n = len(M)
    A = [[Fraction(x) for x in row] for row in M]
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c]), None)
        if piv is None:
            det = Fraction(0)
            break
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det *= A[c][c]
        for i in range(c + 1, n):
            f = A[i][c] / A[c][c]
            A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    assert bareiss_det(M) == det


@given(matrices)
def test_nullspace_and_solve(M):
    ncols = len(M[0])
    for v in nullspace(M, ncols):
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in M)
    assert len(nullspace(M, ncols)) == ncols - bareiss_rank(M)
    b = [sum(row) for row in M]
    x = solve(M, b)
    assert x is not None and [sum(a * c for a, c in zip(row, x)) for row in M] == b
