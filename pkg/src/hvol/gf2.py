"""Dense linear algebra over GF(2).

Matrices are numpy uint8 arrays of 0/1 at the interface; elimination works
on rows packed eight columns per byte.
"""

from __future__ import annotations

from typing import Optional

import numpy as np


def as_gf2(m) -> np.ndarray:
    return (np.asarray(m) % 2).astype(np.uint8)


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # float64 products are exact far beyond the dimensions used here
    return (np.asarray(a, dtype=np.float64) @ np.asarray(b, dtype=np.float64) % 2).astype(np.uint8)


def eye(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.uint8)


def kron3(m: np.ndarray) -> np.ndarray:
    return np.kron(np.kron(m, m), m).astype(np.uint8) % 2


def _column_bits(packed: np.ndarray, col: int) -> np.ndarray:
    return (packed[:, col >> 3] >> (7 - (col & 7))) & 1


def rref(m: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form (nonzero rows only) and pivot columns."""
    m = as_gf2(m)
    rows, cols = m.shape
    if rows == 0 or cols == 0:
        return np.zeros((0, cols), dtype=np.uint8), []
    packed = np.packbits(m, axis=1)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        bits = _column_bits(packed[r:], c)
        nz = np.flatnonzero(bits)
        if nz.size == 0:
            continue
        p = r + nz[0]
        if p != r:
            packed[[r, p]] = packed[[p, r]]
        hits = np.flatnonzero(_column_bits(packed, c))
        hits = hits[hits != r]
        if hits.size:
            packed[hits] ^= packed[r]
        pivots.append(c)
        r += 1
    return np.unpackbits(packed[:r], axis=1, count=cols), pivots


def rank(m: np.ndarray) -> int:
    return len(rref(m)[1])


def nullspace(m: np.ndarray) -> np.ndarray:
    """Rows spanning {v : m v = 0}, one per free column, in RREF-derived order."""
    m = as_gf2(m)
    n = m.shape[1]
    r, pivots = rref(m)
    free = [c for c in range(n) if c not in set(pivots)]
    out = np.zeros((len(free), n), dtype=np.uint8)
    for row, f in enumerate(free):
        out[row, f] = 1
        for prow, p in zip(r, pivots):
            out[row, p] = prow[f]
    return out


def solve(a: np.ndarray, b: np.ndarray) -> Optional[np.ndarray]:
    """One x with a x = b, or None when the system is inconsistent."""
    a = as_gf2(a)
    b = as_gf2(b).reshape(-1)
    n = a.shape[1]
    r, pivots = rref(np.concatenate([a, b[:, None]], axis=1))
    if n in pivots:
        return None
    x = np.zeros(n, dtype=np.uint8)
    for prow, p in zip(r, pivots):
        x[p] = prow[n]
    return x


def inverse(a: np.ndarray) -> np.ndarray:
    a = as_gf2(a)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inverse needs a square matrix")
    r, pivots = rref(np.concatenate([a, eye(n)], axis=1))
    if pivots[:n] != list(range(n)) or len(r) < n:
        raise np.linalg.LinAlgError("matrix is singular over GF(2)")
    return r[:n, n:]


def in_row_space(basis: np.ndarray, v: np.ndarray) -> bool:
    return solve(as_gf2(basis).T, v) is not None


def same_row_space(a: np.ndarray, b: np.ndarray) -> bool:
    ra, rb = rref(a)[0], rref(b)[0]
    return ra.shape == rb.shape and bool(np.array_equal(ra, rb))
