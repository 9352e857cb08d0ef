"""Dense linear algebra over prime fields Z_p, sized for desk-scale attacks."""

from __future__ import annotations

import numpy as np

from ..errors import ParamError


def require_prime(p: int) -> None:
    if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
        raise ParamError(f"unsupported modulus {p}: elimination needs a prime")


def rank_mod(matrix: np.ndarray, p: int) -> int:
    """Rank over Z_p by forward elimination (no back-substitution)."""
    require_prime(p)
    A = np.array(matrix, dtype=np.int64) % p
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if A[i, c]:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = pow(int(A[r, c]), -1, p)
        A[r] = (A[r] * inv) % p
        below = A[r + 1:, c] != 0
        if below.any():
            A[r + 1:][below] = (A[r + 1:][below] - np.outer(A[r + 1:, c][below], A[r])) % p
        r += 1
        if r == rows:
            break
    return r


def rref_mod(matrix: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over Z_p; returns (R, pivot column indices)."""
    require_prime(p)
    A = np.array(matrix, dtype=np.int64) % p
    rows, cols = A.shape
    r = 0
    pivots: list[int] = []
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if A[i, c]:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        A[r] = (A[r] * pow(int(A[r, c]), -1, p)) % p
        other = A[:, c] != 0
        other[r] = False
        if other.any():
            A[other] = (A[other] - np.outer(A[other, c], A[r])) % p
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return A, pivots


def nullspace_mod(matrix: np.ndarray, p: int) -> list[np.ndarray]:
    """Basis of the right nullspace over Z_p (one vector per free column)."""
    R, pivots = rref_mod(matrix, p)
    cols = matrix.shape[1]
    pivot_set = set(pivots)
    basis = []
    for free in range(cols):
        if free in pivot_set:
            continue
        v = np.zeros(cols, dtype=np.int64)
        v[free] = 1
        for row, pc in enumerate(pivots):
            v[pc] = (-R[row, free]) % p
        basis.append(v % p)
    return basis


def solve_affine_mod(matrix: np.ndarray, rhs: np.ndarray, p: int
                     ) -> tuple[np.ndarray | None, list[np.ndarray]]:
    """Solve A x = b over Z_p.

    Returns (particular solution, nullspace basis); the particular solution
    is None when the system is inconsistent.
    """
    A = np.array(matrix, dtype=np.int64) % p
    b = np.array(rhs, dtype=np.int64).reshape(-1, 1) % p
    aug, pivots = rref_mod(np.hstack([A, b]), p)
    cols = A.shape[1]
    if cols in pivots:  # a pivot in the rhs column means 0 = nonzero
        return None, nullspace_mod(A, p)
    particular = np.zeros(cols, dtype=np.int64)
    for row, pc in enumerate(pivots):
        particular[pc] = aug[row, cols]
    return particular, nullspace_mod(A, p)
