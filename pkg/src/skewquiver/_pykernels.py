"""Pure-Python (numpy) prime-field kernels; reference for the Cython build."""

from __future__ import annotations

from typing import List, Tuple

import numpy as np

_I63 = (1 << 63) - 1


def rref_prime(a: np.ndarray, p: int) -> Tuple[np.ndarray, List[int]]:
    """Reduced row-echelon form of ``a`` over F_p; pivots in column order."""
    m = np.array(a, dtype=np.int64, copy=True) % p
    rows, cols = m.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
        inv = pow(int(m[r, c]), -1, p)
        m[r] = (m[r] * inv) % p
        col = m[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            m[hit] = (m[hit] - np.outer(col[hit], m[r])) % p
        pivots.append(c)
        r += 1
    return m, pivots


def matmul_prime(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    k = a.shape[1]
    step = max(1, _I63 // max(1, (p - 1) ** 2))
    if k <= step:
        return (a @ b) % p
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for s in range(0, k, step):
        out = (out + (a[:, s:s + step] @ b[s:s + step]) % p) % p
    return out
