"""Small exact integer linear algebra: Hermite and Smith forms, kernels, saturation.

Matrices are lists of rows of Python ints.  Lattices are row spans.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[int]]


def _copy(M: Sequence[Sequence[int]]) -> Matrix:
    return [list(map(int, r)) for r in M]


def hnf(M: Sequence[Sequence[int]]) -> Matrix:
    """Row Hermite normal form of the row lattice; zero rows dropped.

    Pivots are positive and entries above a pivot lie in [0, pivot).
    """
    A = _copy(M)
    if not A:
        return []
    ncols = len(A[0])
    r = 0
    for col in range(ncols):
        # Euclid on column `col` among rows r..end
        while True:
            nz = [i for i in range(r, len(A)) if A[i][col]]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(A[i][col]))
            A[r], A[piv] = A[piv], A[r]
            done = True
            for i in range(r + 1, len(A)):
                if A[i][col]:
                    f = A[i][col] // A[r][col]
                    if f:
                        A[i] = [x - f * y for x, y in zip(A[i], A[r])]
                    if A[i][col]:
                        done = False
            if done:
                break
        if r < len(A) and A[r][col]:
            if A[r][col] < 0:
                A[r] = [-x for x in A[r]]
            for i in range(r):
                f = A[i][col] // A[r][col]
                if f:
                    A[i] = [x - f * y for x, y in zip(A[i], A[r])]
            r += 1
            if r == len(A):
                break
    return [row for row in A[:r] if any(row)]


def rank(M: Sequence[Sequence[int]]) -> int:
    return len(hnf(M))


def kernel(M: Sequence[Sequence[int]]) -> Matrix:
    """Z-basis (as rows) of {x in Z^n : M x = 0}."""
    A = _copy(M)
    if not A:
        return []
    n = len(A[0])
    m = len(A)
    # rows of [M^T | I_n]; integer row ops keep the right block unimodular
    aug = [[A[i][j] for i in range(m)] + [1 if k == j else 0 for k in range(n)] for j in range(n)]
    H = _echelon_full(aug, m)
    return [row[m:] for row in H if not any(row[:m])]


def _echelon_full(A: Matrix, ncols: int) -> Matrix:
    """Row echelon form on the first `ncols` columns, keeping all rows."""
    r = 0
    for col in range(ncols):
        while True:
            nz = [i for i in range(r, len(A)) if A[i][col]]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(A[i][col]))
            A[r], A[piv] = A[piv], A[r]
            done = True
            for i in range(r + 1, len(A)):
                if A[i][col]:
                    f = A[i][col] // A[r][col]
                    A[i] = [x - f * y for x, y in zip(A[i], A[r])]
                    if A[i][col]:
                        done = False
            if done:
                break
        if r < len(A) and A[r][col]:
            r += 1
    return A


def saturate(M: Sequence[Sequence[int]]) -> Matrix:
    """HNF basis of (span_Q M) intersected with Z^n."""
    A = _copy(M)
    if not A or not any(any(r) for r in A):
        return []
    K = kernel(A)  # x with A x = 0
    if not K:
        n = len(A[0])
        return [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    return hnf(kernel(K))


def in_lattice(v: Sequence[int], basis_hnf: Sequence[Sequence[int]]) -> bool:
    """Is v in the row span of an HNF basis?"""
    return hnf(list(basis_hnf) + [list(v)]) == [list(r) for r in basis_hnf]


def solve_in_lattice(v: Sequence[int], basis: Sequence[Sequence[int]]) -> list[int] | None:
    """Integer coefficients c with sum c_i basis_i = v, or None."""
    B = _copy(basis)
    k = len(B)
    if k == 0:
        return [] if not any(v) else None
    n = len(B[0])
    # work with rows [b_i | e_i]; reduce v against the echelon form
    aug = [B[i] + [1 if j == i else 0 for j in range(k)] for i in range(k)]
    E = _echelon_full(aug, n)
    target = list(v) + [0] * k
    for row in E:
        piv = next((j for j in range(n) if row[j]), None)
        if piv is None:
            continue
        if target[piv] % row[piv]:
            return None
        f = target[piv] // row[piv]
        target = [x - f * y for x, y in zip(target, row)]
    if any(target[:n]):
        return None
    return [-x for x in target[n:]]


def smith_diagonal(M: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero invariant factors d_1 | d_2 | ... of M."""
    A = _copy(M)
    if not A or not A[0]:
        return []
    rows, cols = len(A), len(A[0])
    diag = []
    t = 0
    while t < min(rows, cols):
        nz = [(abs(A[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if A[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        A[t], A[pi] = A[pi], A[t]
        for row in A:
            row[t], row[pj] = row[pj], row[t]
        while True:
            changed = False
            p = A[t][t]
            for i in range(t + 1, rows):
                if A[i][t]:
                    f = A[i][t] // p
                    A[i] = [x - f * y for x, y in zip(A[i], A[t])]
                    if A[i][t]:
                        changed = True
            for j in range(t + 1, cols):
                if A[t][j]:
                    f = A[t][j] // p
                    for row in A:
                        row[j] -= f * row[t]
                    if A[t][j]:
                        changed = True
            if changed:
                nz = [(abs(A[i][j]), i, j) for i in range(t, rows) for j in range(t, cols)
                      if A[i][j] and (i == t or j == t)]
                _, pi, pj = min(nz)
                A[t], A[pi] = A[pi], A[t]
                for row in A:
                    row[t], row[pj] = row[pj], row[t]
                continue
            # divisibility: pivot must divide the rest
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if A[i][j] % p), None)
            if bad is None:
                break
            A[t] = [x + y for x, y in zip(A[t], A[bad[0]])]
        diag.append(abs(A[t][t]))
        t += 1
    return diag


def mat_mul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Matrix:
    Bt = list(zip(*B))
    return [[sum(x * y for x, y in zip(row, col)) for col in Bt] for row in A]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def flatten(M: Sequence[Sequence[int]]) -> list[int]:
    return [x for row in M for x in row]


def unflatten(v: Sequence[int], n: int) -> Matrix:
    return [list(v[i * n:(i + 1) * n]) for i in range(n)]


def rational_solve(A: Sequence[Sequence[int]], b: Sequence[int]) -> list[Fraction] | None:
    """Solve A x = b over Q (A square, nonsingular) by Gaussian elimination."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(A, b)]
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c]), None)
        if p is None:
            return None
        M[c], M[p] = M[p], M[c]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c] / M[c][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [M[i][n] / M[i][i] for i in range(n)]
