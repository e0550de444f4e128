# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled prime-field kernels (same contract as ``_pykernels``)."""

import numpy as np

ctypedef long long i64

cdef i64 _THRESH = (<i64>1) << 62


cdef inline i64 _inv(i64 a, i64 p) noexcept:
    cdef i64 t = 0, nt = 1, r = p, nr = a, q, tmp
    while nr != 0:
        q = r // nr
        tmp = t - q * nt
        t = nt
        nt = tmp
        tmp = r - q * nr
        r = nr
        nr = tmp
    if t < 0:
        t += p
    return t


def rref_prime(a, i64 p):
    arr = np.array(a, dtype=np.int64, copy=True) % p
    arr = np.ascontiguousarray(arr)
    cdef i64[:, ::1] m = arr
    cdef Py_ssize_t rows = m.shape[0], cols = m.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, k
    cdef i64 inv, f, v, tmp
    pivots = []
    for c in range(cols):
        if r == rows:
            break
        k = -1
        for i in range(r, rows):
            if m[i, c] != 0:
                k = i
                break
        if k < 0:
            continue
        if k != r:
            for j in range(cols):
                tmp = m[r, j]
                m[r, j] = m[k, j]
                m[k, j] = tmp
        inv = _inv(m[r, c], p)
        for j in range(c, cols):
            m[r, j] = (m[r, j] * inv) % p
        for i in range(rows):
            if i == r:
                continue
            f = m[i, c]
            if f == 0:
                continue
            for j in range(c, cols):
                if m[r, j] != 0:
                    v = m[i, j] - (f * m[r, j]) % p
                    if v < 0:
                        v += p
                    m[i, j] = v
        pivots.append(c)
        r += 1
    return arr, pivots


def matmul_prime(a, b, i64 p):
    A = np.ascontiguousarray(a, dtype=np.int64)
    B = np.ascontiguousarray(b, dtype=np.int64)
    cdef const i64[:, ::1] x = A
    cdef const i64[:, ::1] y = B
    cdef Py_ssize_t n = x.shape[0], kk = x.shape[1], mm = y.shape[1]
    out = np.zeros((n, mm), dtype=np.int64)
    cdef i64[:, ::1] z = out
    cdef Py_ssize_t i, j, k
    cdef i64 xv
    # number of (p-1)^2 terms that fit below 2^63 before a reduction
    cdef i64 budget = max(1, _THRESH // ((p - 1) * (p - 1) + 1))
    cdef i64 pending
    for i in range(n):
        pending = 0
        for k in range(kk):
            xv = x[i, k]
            if xv == 0:
                continue
            if pending == budget:
                for j in range(mm):
                    z[i, j] %= p
                pending = 0
            for j in range(mm):
                z[i, j] += xv * y[k, j]
            pending += 1
        for j in range(mm):
            z[i, j] %= p
    return out
