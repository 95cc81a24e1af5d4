"""Exact row reduction over F_p and over table-driven Galois fields."""

from __future__ import annotations

import numpy as np

from .galois import Field


# ---------------------------------------------------------------------------
# modular (prime field) routines on numpy arrays
# ---------------------------------------------------------------------------

def rref_modp(matrix, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over F_p; returns (rref, pivot columns)."""
    A = np.array(matrix, dtype=np.int64) % p
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        hit = np.nonzero(A[r:, c])[0]
        if hit.size == 0:
            continue
        i = r + int(hit[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        A[r] = (A[r] * pow(int(A[r, c]), -1, p)) % p
        other = np.nonzero(A[:, c])[0]
        other = other[other != r]
        if other.size:
            A[other] = (A[other] - np.outer(A[other, c], A[r])) % p
        pivots.append(c)
        r += 1
    return A, pivots


def rank_modp(matrix, p: int) -> int:
    return len(rref_modp(matrix, p)[1])


def nullspace_modp(matrix, p: int) -> np.ndarray:
    """Basis of the right nullspace over F_p, one vector per row."""
    A, pivots = rref_modp(matrix, p)
    cols = A.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, fc in enumerate(free):
        basis[k, fc] = 1
        for r, pc in enumerate(pivots):
            basis[k, pc] = (-A[r, fc]) % p
    return basis


# ---------------------------------------------------------------------------
# the same routines with entries in an arbitrary small Galois field
# ---------------------------------------------------------------------------

def field_rref(field: Field, matrix) -> tuple[np.ndarray, list[int]]:
    A = np.array(matrix, dtype=np.int64)
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        hit = np.nonzero(A[r:, c])[0]
        if hit.size == 0:
            continue
        i = r + int(hit[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        A[r] = field.mul_vec(A[r], field.inv(int(A[r, c])))
        for i in range(rows):
            if i != r and A[i, c]:
                A[i] = field.sub_vec(A[i], field.mul_vec(int(A[i, c]), A[r]))
        pivots.append(c)
        r += 1
    return A, pivots


def field_rank(field: Field, matrix) -> int:
    return len(field_rref(field, matrix)[1])


def field_nullspace(field: Field, matrix) -> np.ndarray:
    A, pivots = field_rref(field, matrix)
    cols = A.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, fc in enumerate(free):
        basis[k, fc] = 1
        for r, pc in enumerate(pivots):
            basis[k, pc] = field.neg(int(A[r, fc]))
    return basis
