"""Exact linear algebra over Q and Z (Fraction RREF, Bareiss) plus a mod-p rank."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

PRIME = 2_147_483_647  # 2^31 - 1; products of residues fit in int64


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (matrix, pivot columns)."""
    M = [[Fraction(x) for x in row] for row in rows]
    if not M:
        return M, []
    ncols = len(M[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M, pivots


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of {x : rows . x = 0}, one vector per free column."""
    M, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -M[i][f]
        basis.append(v)
    return basis


def solve(A: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """Some x with A x = b over Q, or None when inconsistent."""
    if not A:
        return [] if all(x == 0 for x in b) else None
    ncols = len(A[0])
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    M, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for i, p in enumerate(pivots):
        x[p] = M[i][ncols]
    return x


def bareiss_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over Q by fraction-free elimination on integer rows."""
    M = [list(map(int, row)) for row in rows]
    if not M:
        return 0
    nrows, ncols = len(M), len(M[0])
    prev = 1
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                M[i][j] = (M[i][j] * M[r][c] - M[i][c] * M[r][j]) // prev
            M[i][c] = 0
        prev = M[r][c]
        r += 1
        if r == nrows:
            break
    return r


def bareiss_det(rows: Sequence[Sequence[int]]) -> int:
    M = [list(map(int, row)) for row in rows]
    n = len(M)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for c in range(n - 1):
        if M[c][c] == 0:
            piv = next((i for i in range(c + 1, n) if M[i][c] != 0), None)
            if piv is None:
                return 0
            M[c], M[piv] = M[piv], M[c]
            sign = -sign
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                M[i][j] = (M[i][j] * M[c][c] - M[i][c] * M[c][j]) // prev
        prev = M[c][c]
    return sign * M[n - 1][n - 1]


def rank_mod_p(rows, p: int = PRIME) -> int:
    """Rank over GF(p); a lower bound for the rank over Q."""
    M = np.array(rows, dtype=np.int64) % p
    if M.size == 0:
        return 0
    nrows, ncols = M.shape
    r = 0
    for c in range(ncols):
        nz = np.nonzero(M[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        inv = pow(int(M[r, c]), p - 2, p)
        M[r] = (M[r] * inv) % p
        below = M[r + 1:, c].copy()
        M[r + 1:] = (M[r + 1:] - (below[:, None] * M[r]) % p) % p
        r += 1
        if r == nrows:
            break
    return r


def as_int_vector(v: Sequence[Fraction]) -> list[int] | None:
    if any(x.denominator != 1 for x in v):
        return None
    return [int(x) for x in v]


def echelon_mod_p(rows, p: int = PRIME) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon basis over GF(p) (pure Python, small inputs)."""
    basis: list[list[int]] = []
    pivots: list[int] = []
    for row in rows:
        v = reduce_mod_p([x % p for x in row], basis, pivots, p)
        c = next((i for i, x in enumerate(v) if x), None)
        if c is None:
            continue
        inv = pow(v[c], p - 2, p)
        v = [x * inv % p for x in v]
        for b in basis:
            if b[c]:
                f = b[c]
                for i in range(len(b)):
                    b[i] = (b[i] - f * v[i]) % p
        basis.append(v)
        pivots.append(c)
    return basis, pivots


def reduce_mod_p(v: list[int], basis, pivots, p: int = PRIME) -> list[int]:
    v = list(v)
    for b, c in zip(basis, pivots):
        if v[c]:
            f = v[c]
            v = [(x - f * y) % p for x, y in zip(v, b)]
    return v
