"""Pure numpy implementations of the packed GF(2) / Pauli-table kernels.

A Pauli table is three arrays: ``x`` and ``z`` of shape (rows, words) with
dtype uint64 (bit ``q`` of the row lives in word ``q >> 6``), and ``ph`` of
shape (rows,) holding the exponent of ``i`` mod 4.  Row ``r`` is the operator
``i^ph[r] X^x[r] Z^z[r]``.
"""

import numpy as np

GATE_CODES = {"H": 0, "S": 1, "SDG": 2, "X": 3, "Y": 4, "Z": 5, "CX": 6, "CZ": 7, "SWAP": 8}

_ONE = np.uint64(1)


def _popcount_rows(a):
    return np.bitwise_count(a).sum(axis=-1, dtype=np.int64)


def _bit(arr, q):
    return ((arr[:, q >> 6] >> np.uint64(q & 63)) & _ONE).astype(np.uint8)


def _flip(arr, q, mask):
    arr[:, q >> 6] ^= mask.astype(np.uint64) << np.uint64(q & 63)


def apply_gate(x, z, ph, code, a, b):
    """Conjugate every row by a Clifford gate in place."""
    if code == 0:
        xa, za = _bit(x, a), _bit(z, a)
        ph[:] = (ph + 2 * (xa & za)) & 3
        d = xa ^ za
        _flip(x, a, d)
        _flip(z, a, d)
    elif code == 1:
        xa = _bit(x, a)
        ph[:] = (ph + xa) & 3
        _flip(z, a, xa)
    elif code == 2:
        xa = _bit(x, a)
        ph[:] = (ph + 3 * xa) & 3
        _flip(z, a, xa)
    elif code == 3:
        ph[:] = (ph + 2 * _bit(z, a)) & 3
    elif code == 4:
        ph[:] = (ph + 2 * (_bit(x, a) ^ _bit(z, a))) & 3
    elif code == 5:
        ph[:] = (ph + 2 * _bit(x, a)) & 3
    elif code == 6:
        _flip(x, b, _bit(x, a))
        _flip(z, a, _bit(z, b))
    elif code == 7:
        xa, xb = _bit(x, a), _bit(x, b)
        ph[:] = (ph + 2 * (xa & xb)) & 3
        _flip(z, a, xb)
        _flip(z, b, xa)
    elif code == 8:
        for arr in (x, z):
            d = _bit(arr, a) ^ _bit(arr, b)
            _flip(arr, a, d)
            _flip(arr, b, d)
    else:
        raise ValueError(f"unknown gate code {code}")


def rowmul(x, z, ph, t, s):
    """Row t <- row t * row s (phase exact)."""
    ph[t] = (int(ph[t]) + int(ph[s]) + 2 * int(np.bitwise_count(z[t] & x[s]).sum())) & 3
    x[t] ^= x[s]
    z[t] ^= z[s]


def symp_row(x, z, px, pz):
    """Symplectic product of every row with the Pauli (px, pz); uint8 array."""
    return (_popcount_rows((x & pz) ^ (z & px)) & 1).astype(np.uint8)


def product_rows(x, z, ph, idx):
    """Ordered product of the rows listed in idx; returns (x, z, phase)."""
    words = x.shape[1]
    px = np.zeros(words, dtype=np.uint64)
    pz = np.zeros(words, dtype=np.uint64)
    k = 0
    for r in idx:
        k += int(ph[r]) + 2 * int(np.bitwise_count(pz & x[r]).sum())
        px ^= x[r]
        pz ^= z[r]
    return px, pz, k & 3


def gf2_rref(m, cols):
    """Reduced row echelon form in place, pivoting over columns in the given order.

    Returns the list of pivot columns; pivot i sits in row i.
    """
    nrows = m.shape[0]
    pivots = []
    r = 0
    for c in cols:
        if r == nrows:
            break
        w, sh = c >> 6, np.uint64(c & 63)
        colbits = (m[r:, w] >> sh) & _ONE
        hits = np.flatnonzero(colbits)
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            m[[r, p]] = m[[p, r]]
        mask = ((m[:, w] >> sh) & _ONE).astype(bool)
        mask[r] = False
        if mask.any():
            m[mask] ^= m[r]
        pivots.append(int(c))
        r += 1
    return pivots


def phased_rref(x, z, ph, cols, n):
    """Row reduce a Pauli table over 2n columns (x block then z block) with phases.

    Column c < n addresses x bit c, column c >= n addresses z bit c - n.  Rows
    are multiplied on the right by the pivot row, which is exact for mutually
    commuting rows.
    """
    nrows = x.shape[0]
    half = n
    pivots = []
    r = 0
    for c in cols:
        if r == nrows:
            break
        arr = x if c < half else z
        q = c if c < half else c - half
        w, sh = q >> 6, np.uint64(q & 63)
        hits = np.flatnonzero((arr[r:, w] >> sh) & _ONE)
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            x[[r, p]] = x[[p, r]]
            z[[r, p]] = z[[p, r]]
            ph[[r, p]] = ph[[p, r]]
        mask = ((arr[:, w] >> sh) & _ONE).astype(bool)
        mask[r] = False
        if mask.any():
            extra = _popcount_rows(z[mask] & x[r])
            ph[mask] = (ph[mask].astype(np.int64) + int(ph[r]) + 2 * extra) & 3
            x[mask] ^= x[r]
            z[mask] ^= z[r]
        pivots.append(int(c))
        r += 1
    return pivots
