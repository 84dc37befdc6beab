"""Smith normal form over the integers, with unimodular certificates."""
from __future__ import annotations

from typing import List, Sequence, Tuple

Matrix = List[List[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Matrix:
    if not A:
        return []
    cols = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(cols)] for i in range(len(A))]


def transpose(A: Sequence[Sequence[int]]) -> Matrix:
    return [list(r) for r in zip(*A)] if A else []


def smith_normal_form(A: Sequence[Sequence[int]]) -> Tuple[Matrix, Matrix, Matrix]:
    """Return ``(U, D, V)`` with ``U A V = D``.

    ``U`` (m x m) and ``V`` (n x n) are unimodular, ``D`` is diagonal with
    non-negative entries ``d_1 | d_2 | ...``.
    """
    D = [list(map(int, r)) for r in A]
    m = len(D)
    n = len(D[0]) if m else 0
    U, V = identity(m), identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (D, V):
            for r in M:
                r[i], r[j] = r[j], r[i]

    def add_row(src, dst, q):  # row dst += q * row src
        D[dst] = [a + q * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, q):
        for M in (D, V):
            for r in M:
                r[dst] += q * r[src]

    t = 0
    while t < min(m, n):
        nz = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = D[t][t]
            done = True
            for i in range(t + 1, m):
                q = D[i][t] // p
                if q:
                    add_row(t, i, -q)
                if D[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = D[t][j] // p
                if q:
                    add_col(t, j, -q)
                if D[t][j]:
                    done = False
            if not done:
                # move the smallest remaining entry of row/column t to the pivot
                cands = [(abs(D[i][t]), i, t) for i in range(t, m) if D[i][t]] + \
                        [(abs(D[t][j]), t, j) for j in range(t, n) if D[t][j]]
                _, i, j = min(cands)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            # divisibility: pivot must divide everything below-right
            bad = [(i, j) for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p]
            if bad:
                add_row(bad[0][0], t, 1)
                continue
            break
        if D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    return U, D, V


def invariant_factors(A: Sequence[Sequence[int]]) -> List[int]:
    """Nonzero diagonal entries of the Smith form."""
    _, D, _ = smith_normal_form(A)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0)) if D[i][i]]


def det(M: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free elimination (Bareiss)."""
    A = [list(r) for r in M]
    n = len(A)
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[-1][-1] if n else 1
