# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled packed GF(2) / Pauli-table kernels.

Same calling conventions as ``_kernels_py``; arrays are modified in place.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, uint8_t, int64_t

cnp.import_array()

GATE_CODES = {"H": 0, "S": 1, "SDG": 2, "X": 3, "Y": 4, "Z": 5, "CX": 6, "CZ": 7, "SWAP": 8}


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


cdef inline int _pc(uint64_t v) noexcept nogil:
    return __builtin_popcountll(v)


cdef inline int _get(uint64_t[:, ::1] a, Py_ssize_t r, int q) noexcept nogil:
    return <int>((a[r, q >> 6] >> (q & 63)) & 1)


cdef inline void _xor(uint64_t[:, ::1] a, Py_ssize_t r, int q, int v) noexcept nogil:
    if v:
        a[r, q >> 6] ^= (<uint64_t>1) << (q & 63)


def apply_gate(uint64_t[:, ::1] x, uint64_t[:, ::1] z, uint8_t[::1] ph, int code, int a, int b):
    cdef Py_ssize_t r, nrows = x.shape[0]
    cdef int xa, za, xb, zb
    if code < 0 or code > 8:
        raise ValueError(f"unknown gate code {code}")
    with nogil:
        for r in range(nrows):
            xa = _get(x, r, a)
            za = _get(z, r, a)
            if code == 0:
                ph[r] = (ph[r] + 2 * (xa & za)) & 3
                if xa != za:
                    _xor(x, r, a, 1)
                    _xor(z, r, a, 1)
            elif code == 1:
                ph[r] = (ph[r] + xa) & 3
                _xor(z, r, a, xa)
            elif code == 2:
                ph[r] = (ph[r] + 3 * xa) & 3
                _xor(z, r, a, xa)
            elif code == 3:
                ph[r] = (ph[r] + 2 * za) & 3
            elif code == 4:
                ph[r] = (ph[r] + 2 * (xa ^ za)) & 3
            elif code == 5:
                ph[r] = (ph[r] + 2 * xa) & 3
            elif code == 6:
                zb = _get(z, r, b)
                _xor(x, r, b, xa)
                _xor(z, r, a, zb)
            elif code == 7:
                xb = _get(x, r, b)
                ph[r] = (ph[r] + 2 * (xa & xb)) & 3
                _xor(z, r, a, xb)
                _xor(z, r, b, xa)
            else:
                xb = _get(x, r, b)
                zb = _get(z, r, b)
                _xor(x, r, a, xa ^ xb)
                _xor(x, r, b, xa ^ xb)
                _xor(z, r, a, za ^ zb)
                _xor(z, r, b, za ^ zb)


def rowmul(uint64_t[:, ::1] x, uint64_t[:, ::1] z, uint8_t[::1] ph, Py_ssize_t t, Py_ssize_t s):
    cdef Py_ssize_t w, words = x.shape[1]
    cdef int k = ph[t] + ph[s]
    for w in range(words):
        k += 2 * _pc(z[t, w] & x[s, w])
        x[t, w] ^= x[s, w]
        z[t, w] ^= z[s, w]
    ph[t] = k & 3


def symp_row(uint64_t[:, ::1] x, uint64_t[:, ::1] z, uint64_t[::1] px, uint64_t[::1] pz):
    cdef Py_ssize_t r, w, nrows = x.shape[0], words = x.shape[1]
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] out = np.zeros(nrows, dtype=np.uint8)
    cdef uint8_t[::1] o = out
    cdef int c
    with nogil:
        for r in range(nrows):
            c = 0
            for w in range(words):
                c += _pc((x[r, w] & pz[w]) ^ (z[r, w] & px[w]))
            o[r] = c & 1
    return out


def product_rows(uint64_t[:, ::1] x, uint64_t[:, ::1] z, uint8_t[::1] ph, idx):
    cdef Py_ssize_t w, words = x.shape[1]
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] ax = np.zeros(words, dtype=np.uint64)
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] az = np.zeros(words, dtype=np.uint64)
    cdef uint64_t[::1] px = ax
    cdef uint64_t[::1] pz = az
    cdef int64_t[::1] rows = np.ascontiguousarray(idx, dtype=np.int64)
    cdef Py_ssize_t i, r
    cdef long k = 0
    with nogil:
        for i in range(rows.shape[0]):
            r = rows[i]
            k += ph[r]
            for w in range(words):
                k += 2 * _pc(pz[w] & x[r, w])
                px[w] ^= x[r, w]
                pz[w] ^= z[r, w]
    return ax, az, int(k & 3)


def gf2_rref(uint64_t[:, ::1] m, cols):
    cdef int64_t[::1] order = np.ascontiguousarray(cols, dtype=np.int64)
    cdef Py_ssize_t nrows = m.shape[0], words = m.shape[1]
    cdef Py_ssize_t r = 0, i, j, p, w
    cdef int64_t c
    cdef int sh
    cdef uint64_t tmp
    pivots = []
    for i in range(order.shape[0]):
        if r == nrows:
            break
        c = order[i]
        w = c >> 6
        sh = c & 63
        p = -1
        for j in range(r, nrows):
            if (m[j, w] >> sh) & 1:
                p = j
                break
        if p < 0:
            continue
        if p != r:
            for j in range(words):
                tmp = m[r, j]
                m[r, j] = m[p, j]
                m[p, j] = tmp
        with nogil:
            for j in range(nrows):
                if j != r and (m[j, w] >> sh) & 1:
                    for p in range(words):
                        m[j, p] ^= m[r, p]
        pivots.append(c)
        r += 1
    return pivots


def phased_rref(uint64_t[:, ::1] x, uint64_t[:, ::1] z, uint8_t[::1] ph, cols, int n):
    cdef int64_t[::1] order = np.ascontiguousarray(cols, dtype=np.int64)
    cdef Py_ssize_t nrows = x.shape[0], words = x.shape[1]
    cdef Py_ssize_t r = 0, i, j, p, w
    cdef int64_t c, q
    cdef int sh, k
    cdef uint64_t tmp
    cdef uint8_t tp
    cdef uint64_t[:, ::1] arr
    pivots = []
    for i in range(order.shape[0]):
        if r == nrows:
            break
        c = order[i]
        if c < n:
            arr = x
            q = c
        else:
            arr = z
            q = c - n
        w = q >> 6
        sh = q & 63
        p = -1
        for j in range(r, nrows):
            if (arr[j, w] >> sh) & 1:
                p = j
                break
        if p < 0:
            continue
        if p != r:
            for j in range(words):
                tmp = x[r, j]
                x[r, j] = x[p, j]
                x[p, j] = tmp
                tmp = z[r, j]
                z[r, j] = z[p, j]
                z[p, j] = tmp
            tp = ph[r]
            ph[r] = ph[p]
            ph[p] = tp
        with nogil:
            for j in range(nrows):
                if j != r and (arr[j, w] >> sh) & 1:
                    k = ph[j] + ph[r]
                    for p in range(words):
                        k += 2 * _pc(z[j, p] & x[r, p])
                        x[j, p] ^= x[r, p]
                        z[j, p] ^= z[r, p]
                    ph[j] = k & 3
        pivots.append(c)
        r += 1
    return pivots
