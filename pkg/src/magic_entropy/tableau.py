"""Stabilizer tableaus with destabilizers, exact amplitudes and exact overlaps.

Rows ``0..n-1`` of the packed table are destabilizers, rows ``n..2n-1`` the
stabilizer generators.  Every row is ``i^ph X^x Z^z`` with exact phase.

Vectors attached to a tableau follow one convention: the first nonzero
amplitude, in computational-basis order with qubit 0 most significant, is
real and positive.  Such a state is written

    |s> = 2^{-d/2} sum_u i^{a.u + 2 sum_{j<l} B_jl u_j u_l} |b0 + sum_j u_j x_j>

where the x_j are the X-parts of a reduced generating set and b0 is the
smallest string of the support.  Overlaps are exponential sums of such
quadratic forms and come out as exact values ``2^{-d/2} e^{i pi m / 4}``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .symplectic import (
    PauliOp,
    gf2_rank,
    n_words,
    null_space,
    rref_ints,
    symp_vec,
    word_to_int,
    ints_to_words,
)

__all__ = [
    "StabTableau",
    "ExactOverlap",
    "ZeroProbabilityError",
    "apply_gate",
    "expectation",
    "measure_pauli",
    "canonical_form",
    "inner_product",
    "expectation_cross",
    "subsystem_entropy_bits",
    "GATE_ARITY",
    "normalize_gate_name",
]


class ZeroProbabilityError(ValueError):
    """Postselection on an outcome that has probability zero."""


GATE_ARITY = {"H": 1, "S": 1, "SDG": 1, "X": 1, "Y": 1, "Z": 1, "CX": 2, "CZ": 2, "SWAP": 2}
_ALIASES = {"S†": "SDG", "SDAG": "SDG", "SDAGGER": "SDG", "CNOT": "CX", "I": "I"}


def normalize_gate_name(name: str) -> str:
    key = name.strip().upper()
    key = _ALIASES.get(key, key)
    if key not in GATE_ARITY:
        raise ValueError(f"unknown Clifford gate {name!r}")
    return key


# ---------------------------------------------------------------------------
# Exact values 2^{-d/2} e^{i pi m / 4}
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExactOverlap:
    """Exact complex number 0 or ``2^{-d/2} e^{i pi m/4}`` (d may be negative)."""

    is_zero: bool
    d: int = 0
    m: int = 0

    def __post_init__(self):
        object.__setattr__(self, "m", 0 if self.is_zero else self.m % 8)
        if self.is_zero:
            object.__setattr__(self, "d", 0)

    @classmethod
    def zero(cls) -> "ExactOverlap":
        return cls(True)

    @classmethod
    def one(cls) -> "ExactOverlap":
        return cls(False, 0, 0)

    @classmethod
    def phase(cls, m: int) -> "ExactOverlap":
        return cls(False, 0, m)

    def to_complex(self) -> complex:
        if self.is_zero:
            return 0j
        return 2.0 ** (-self.d / 2) * cmath.exp(1j * math.pi * self.m / 4)

    def __complex__(self) -> complex:
        return self.to_complex()

    def __abs__(self) -> float:
        return 0.0 if self.is_zero else 2.0 ** (-self.d / 2)

    def conjugate(self) -> "ExactOverlap":
        return self if self.is_zero else ExactOverlap(False, self.d, -self.m)

    def __mul__(self, other: "ExactOverlap") -> "ExactOverlap":
        if self.is_zero or other.is_zero:
            return ExactOverlap.zero()
        return ExactOverlap(False, self.d + other.d, self.m + other.m)

    def __add__(self, other: "ExactOverlap") -> "ExactOverlap":
        """Sum of two values of equal magnitude whose phases differ by a multiple of pi/2."""
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.d != other.d:
            raise ValueError("exact sum needs equal magnitudes")
        diff = (other.m - self.m) % 8
        if diff == 0:
            return ExactOverlap(False, self.d - 2, self.m)
        if diff == 4:
            return ExactOverlap.zero()
        if diff == 2:
            return ExactOverlap(False, self.d - 1, self.m + 1)
        if diff == 6:
            return ExactOverlap(False, self.d - 1, self.m - 1)
        raise ValueError("sum is not of the form 2^{-d/2} e^{i pi m/4}")

    def scaled_sqrt2(self, k: int) -> "ExactOverlap":
        """Multiply by 2^{-k/2}."""
        return self if self.is_zero else ExactOverlap(False, self.d + k, self.m)


# ---------------------------------------------------------------------------
# Quadratic forms over Z4 and their exponential sums
# ---------------------------------------------------------------------------


def compose_affine(c: int, a: np.ndarray, Bup: np.ndarray, u0: np.ndarray, M: np.ndarray):
    """Substitute u = u0 + M v (over GF(2)) into c + a.u + 2 u^T Bup u (mod 4).

    Bup is strictly upper triangular.  Returns (c', L', Q') with Q' symmetric,
    zero diagonal, describing c' + L'.v + 2 sum_{i<k} Q'_ik v_i v_k.
    """
    a = np.asarray(a, dtype=np.int64) & 3
    u0 = np.asarray(u0, dtype=np.int64) & 1
    M = np.asarray(M, dtype=np.int64) & 1
    Bup = np.asarray(Bup, dtype=np.int64) & 1
    Bs = Bup + Bup.T
    c2 = (c + int(a @ u0) + 2 * int(u0 @ Bup @ u0)) & 3
    sgn = 1 - 2 * u0
    MtBM = M.T @ Bup @ M
    L = (M.T @ (a * sgn)) + 2 * ((u0 @ Bs @ M) + np.diagonal(MtBM))
    Q = (M.T @ ((a & 1)[:, None] * M) + M.T @ Bs @ M) & 1
    np.fill_diagonal(Q, 0)
    return c2, L & 3, Q.astype(np.uint8)


def exponential_sum(c: int, L: np.ndarray, Q: np.ndarray):
    """Evaluate sum_v i^{c + L.v + 2 sum_{i<k} Q_ik v_i v_k} exactly.

    Returns None for zero, else (h, m) with value 2^{h/2} e^{i pi m/4}.
    Variables are removed one at a time, so the cost is cubic.
    """
    L = np.array(L, dtype=np.int64) & 3
    Q = np.array(Q, dtype=np.uint8) & 1
    m8 = 2 * c
    h = 0
    while L.size:
        i = L.size - 1
        nb = np.flatnonzero(Q[i])
        Li = int(L[i])
        if Li & 1:
            h += 1
            if Li == 1:
                m8 += 1
                L[nb] -= 1
            else:
                m8 -= 1
                L[nb] += 1
            if nb.size > 1:
                Q[np.ix_(nb, nb)] ^= 1
                Q[nb, nb] = 0
            L = np.delete(L, i)
            Q = np.delete(np.delete(Q, i, 0), i, 1)
        elif nb.size == 0:
            if Li == 2:
                return None
            h += 2
            L = np.delete(L, i)
            Q = np.delete(np.delete(Q, i, 0), i, 1)
        else:
            h += 2
            alpha = Li >> 1
            k = int(nb[0])
            R = nb[1:]
            Q[i, :] = 0
            Q[:, i] = 0
            Lk = int(L[k])
            qk = Q[k].copy()
            qk[k] = 0
            m8 += 2 * Lk * alpha
            L[R] += Lk * (1 - 2 * alpha)
            if Lk & 1 and R.size > 1:
                Q[np.ix_(R, R)] ^= 1
                Q[R, R] = 0
            ls = np.flatnonzero(qk)
            L[ls] += 2 * alpha
            if R.size and ls.size:
                rin = np.zeros(L.size, dtype=np.uint8)
                lin = np.zeros(L.size, dtype=np.uint8)
                rin[R] = 1
                lin[ls] = 1
                T = np.outer(rin, lin)
                L += 2 * np.diagonal(T).astype(np.int64)
                S = (T + T.T) & 1
                np.fill_diagonal(S, 0)
                Q ^= S.astype(np.uint8)
            keep = [j for j in range(L.size) if j != i and j != k]
            L = L[keep]
            Q = Q[np.ix_(keep, keep)]
        L &= 3
    return h, m8 % 8


@dataclass
class QuadForm:
    """Affine support and quadratic phase of a tableau's canonical vector."""

    n: int
    pivots: list  # qubit of each X-row pivot
    xrows: list  # X-parts (int bitsets)
    b0: int
    a: np.ndarray  # Z4 linear coefficients
    B: np.ndarray  # strictly upper triangular GF(2)
    zrows: list  # Z-only generators: (z bitset, rhs bit)

    @property
    def d(self) -> int:
        return len(self.pivots)

    def coords(self, b: int):
        """Coordinates u with b = b0 + sum u_j x_j, or None if b is off-support."""
        u = [(b >> p) & 1 for p in self.pivots]
        acc = self.b0
        for uj, xj in zip(u, self.xrows):
            if uj:
                acc ^= xj
        return u if acc == b else None

    def exponent(self, u: Sequence[int]) -> int:
        uu = np.asarray(u, dtype=np.int64)
        if uu.size == 0:
            return 0
        return (int(self.a @ uu) + 2 * int(uu @ self.B.astype(np.int64) @ uu)) & 3

    def amplitude(self, b: int) -> ExactOverlap:
        u = self.coords(b)
        if u is None:
            return ExactOverlap.zero()
        return ExactOverlap(False, self.d, 2 * self.exponent(u))


# ---------------------------------------------------------------------------
# Tableau
# ---------------------------------------------------------------------------


def _hermitian_phase(x: np.ndarray, z: np.ndarray) -> np.ndarray:
    return (np.bitwise_count(x & z).sum(axis=-1) & 3).astype(np.uint8)


class StabTableau:
    """Pure stabilizer state on n qubits with destabilizers."""

    __slots__ = ("n", "x", "z", "ph", "_canon", "_qform")

    def __init__(self, n: int, x: np.ndarray, z: np.ndarray, ph: np.ndarray):
        if n <= 0:
            raise ValueError("a stabilizer state needs at least one qubit")
        self.n = n
        self.x = np.ascontiguousarray(x, dtype=np.uint64)
        self.z = np.ascontiguousarray(z, dtype=np.uint64)
        self.ph = np.ascontiguousarray(ph, dtype=np.uint8)
        if self.x.shape != (2 * n, n_words(n)) or self.z.shape != self.x.shape or self.ph.shape != (2 * n,):
            raise ValueError("tableau arrays have the wrong shape")
        self._canon = None
        self._qform = None

    # -- construction ------------------------------------------------------
    @classmethod
    def zero_state(cls, n: int) -> "StabTableau":
        if n <= 0:
            raise ValueError("a stabilizer state needs at least one qubit")
        w = n_words(n)
        x = np.zeros((2 * n, w), dtype=np.uint64)
        z = np.zeros((2 * n, w), dtype=np.uint64)
        for q in range(n):
            x[q, q >> 6] |= np.uint64(1) << np.uint64(q & 63)
            z[n + q, q >> 6] |= np.uint64(1) << np.uint64(q & 63)
        return cls(n, x, z, np.zeros(2 * n, dtype=np.uint8))

    @classmethod
    def basis_state(cls, n: int, bits: int) -> "StabTableau":
        t = cls.zero_state(n)
        for q in range(n):
            if (bits >> q) & 1:
                t.apply_gate("X", q)
        return t

    @classmethod
    def from_generators(cls, gens: Sequence[PauliOp]) -> "StabTableau":
        """Tableau for n independent commuting Hermitian generators (signs kept)."""
        gens = list(gens)
        if not gens:
            raise ValueError("no generators")
        n = gens[0].n
        if len(gens) != n:
            raise ValueError(f"need exactly n={n} generators, got {len(gens)}")
        for g in gens:
            if g.n != n:
                raise ValueError("generator length mismatch")
            if not g.is_hermitian:
                raise ValueError(f"generator {g} is not Hermitian")
        for i in range(n):
            for j in range(i + 1, n):
                if symp_vec(gens[i].vec, gens[j].vec, n):
                    raise ValueError(f"generators {gens[i]} and {gens[j]} anticommute")
        sx = ints_to_words([g.x for g in gens], n)
        sz = ints_to_words([g.z for g in gens], n)
        sph = np.array([g.phase for g in gens], dtype=np.uint8)
        return cls._complete(n, sx, sz, sph)

    @classmethod
    def from_ordered_generators(cls, gens: Sequence[PauliOp]) -> "StabTableau":
        """Like from_generators but keeps the rows exactly as given (order and form)."""
        gens = list(gens)
        n = gens[0].n if gens else 0
        if len(gens) != n or n == 0:
            raise ValueError("need exactly n generators")
        for g in gens:
            if not g.is_hermitian:
                raise ValueError(f"generator {g} is not Hermitian")
        vecs = [g.vec for g in gens]
        for i in range(n):
            for j in range(i + 1, n):
                if symp_vec(vecs[i], vecs[j], n):
                    raise ValueError("generators do not commute")
        mask = (1 << n) - 1
        aug = [((v >> n) | ((v & mask) << n)) | (1 << (2 * n + b)) for b, v in enumerate(vecs)]
        red, piv = rref_ints(aug, 3 * n, list(range(2 * n)))
        if len(piv) != n or any(p >= 2 * n for p in piv):
            raise ValueError("generators are not independent")
        dest = [0] * n
        for r, p in zip(red, piv):
            t = r >> (2 * n)
            for a in range(n):
                if (t >> a) & 1:
                    dest[a] |= 1 << p
        for b in range(n):
            for a in range(b):
                if symp_vec(dest[a], dest[b], n):
                    dest[b] ^= vecs[a]
        dops = [PauliOp.from_vec(v, n) for v in dest]
        rows = dops + gens
        x = ints_to_words([r.x for r in rows], n)
        z = ints_to_words([r.z for r in rows], n)
        ph = np.array([r.phase for r in rows], dtype=np.uint8)
        return cls(n, x, z, ph)

    @classmethod
    def from_strings(cls, strings: Iterable[str]) -> "StabTableau":
        return cls.from_generators([PauliOp.from_string(s) for s in strings])

    @classmethod
    def _complete(cls, n, sx, sz, sph) -> "StabTableau":
        """Row reduce the stabilizer rows and attach matching destabilizers."""
        sx, sz, sph = sx.copy(), sz.copy(), sph.copy()
        pivots = kernels.phased_rref(sx, sz, sph, np.arange(2 * n, dtype=np.int64), n)
        if len(pivots) != n:
            raise ValueError("generators are not independent")
        w = n_words(n)
        dx = np.zeros((n, w), dtype=np.uint64)
        dz = np.zeros((n, w), dtype=np.uint64)
        for a, p in enumerate(pivots):
            q = p if p < n else p - n
            target = dz if p < n else dx
            target[a, q >> 6] |= np.uint64(1) << np.uint64(q & 63)
        # make destabilizers mutually commute
        for b in range(n):
            for a in range(b):
                c = int(np.bitwise_count((dx[a] & dz[b]) ^ (dz[a] & dx[b])).sum()) & 1
                if c:
                    dx[b] ^= sx[a]
                    dz[b] ^= sz[a]
        dph = _hermitian_phase(dx, dz)
        return cls(n, np.vstack([dx, sx]), np.vstack([dz, sz]), np.concatenate([dph, sph]))

    def copy(self) -> "StabTableau":
        t = StabTableau(self.n, self.x.copy(), self.z.copy(), self.ph.copy())
        t._canon = self._canon
        t._qform = self._qform
        return t

    def _touch(self):
        self._canon = None
        self._qform = None

    # -- row access --------------------------------------------------------
    def row(self, r: int) -> PauliOp:
        return PauliOp(self.n, word_to_int(self.x[r]), word_to_int(self.z[r]), int(self.ph[r]))

    @property
    def generators(self) -> list[PauliOp]:
        return [self.row(self.n + a) for a in range(self.n)]

    @property
    def destabilizers(self) -> list[PauliOp]:
        return [self.row(a) for a in range(self.n)]

    def _words(self, P: PauliOp):
        w = n_words(self.n)
        return ints_to_words([P.x], self.n).reshape(w), ints_to_words([P.z], self.n).reshape(w)

    # -- gates ---------------------------------------------------------------
    def apply_gate(self, name: str, *qubits: int) -> "StabTableau":
        """Conjugate by a Clifford gate in place; returns self."""
        g = normalize_gate_name(name)
        if len(qubits) != GATE_ARITY[g]:
            raise ValueError(f"{g} takes {GATE_ARITY[g]} qubit(s)")
        for q in qubits:
            if not 0 <= q < self.n:
                raise IndexError(f"qubit {q} out of range for n={self.n}")
        if len(qubits) == 2 and qubits[0] == qubits[1]:
            raise ValueError("two-qubit gate needs distinct qubits")
        a = qubits[0]
        b = qubits[1] if len(qubits) == 2 else 0
        kernels.apply_gate(self.x, self.z, self.ph, kernels.GATE_CODES[g], a, b)
        self._touch()
        return self

    def apply_pauli(self, P: PauliOp) -> "StabTableau":
        """Replace |s> by P|s> (sign flips on anticommuting rows); in place."""
        px, pz = self._words(P)
        flips = kernels.symp_row(self.x, self.z, px, pz)
        self.ph = ((self.ph + 2 * flips) & 3).astype(np.uint8)
        self._touch()
        return self

    # -- Pauli decomposition -------------------------------------------------
    def anticommutation(self, P: PauliOp) -> tuple[np.ndarray, np.ndarray]:
        """(beta, alpha): symplectic products of P with stabilizers and destabilizers."""
        px, pz = self._words(P)
        s = kernels.symp_row(self.x, self.z, px, pz)
        return s[self.n:], s[: self.n]

    def decompose(self, P: PauliOp) -> tuple[int, int]:
        """Write P|s> = i^w D_beta |s>; returns (beta bitset, w).

        D_beta is the product of destabilizer rows a with beta bit a set.
        """
        beta, alpha = self.anticommutation(P)
        idx = np.concatenate([np.flatnonzero(beta), self.n + np.flatnonzero(alpha)]).astype(np.int64)
        px, pz, k = kernels.product_rows(self.x, self.z, self.ph, idx)
        if word_to_int(px) != P.x or word_to_int(pz) != P.z:
            raise AssertionError("tableau rows do not form a symplectic basis")
        bits = 0
        for a in np.flatnonzero(beta):
            bits |= 1 << int(a)
        return bits, (P.phase - k) & 3

    def destab_product(self, beta: int) -> PauliOp:
        idx = np.array([a for a in range(self.n) if (beta >> a) & 1], dtype=np.int64)
        px, pz, k = kernels.product_rows(self.x, self.z, self.ph, idx)
        return PauliOp(self.n, word_to_int(px), word_to_int(pz), k)

    def stab_product(self, alpha: int) -> PauliOp:
        idx = np.array([self.n + a for a in range(self.n) if (alpha >> a) & 1], dtype=np.int64)
        px, pz, k = kernels.product_rows(self.x, self.z, self.ph, idx)
        return PauliOp(self.n, word_to_int(px), word_to_int(pz), k)

    def expectation(self, P: PauliOp) -> int:
        if P.n != self.n:
            raise ValueError("length mismatch")
        if not P.is_hermitian:
            raise ValueError("expectation needs a Hermitian operator")
        beta, w = self.decompose(P)
        if beta:
            return 0
        return 1 if w == 0 else -1

    # -- measurement ---------------------------------------------------------
    def project(self, P: PauliOp, sign: int):
        """Apply (1 + sign P)/2 in place and renormalize.

        Returns ("det", ok) when ±P is a stabilizer (ok says whether the
        outcome is the requested one; the tableau is untouched), or
        ("rand", p, g) when the outcome is random, with p the index of the
        replaced stabilizer row and g that row's operator before the update.
        """
        if not P.is_hermitian:
            raise ValueError("measured operator must be Hermitian")
        n = self.n
        px, pz = self._words(P)
        s = kernels.symp_row(self.x, self.z, px, pz)
        anti = np.flatnonzero(s[n:])
        if anti.size == 0:
            beta, w = self.decompose(P)
            value = 1 if w == 0 else -1
            return ("det", value == sign)
        p = int(anti[0])
        g = self.row(n + p)
        for r in np.flatnonzero(s):
            r = int(r)
            if r != n + p:
                kernels.rowmul(self.x, self.z, self.ph, r, n + p)
        self.x[p] = self.x[n + p]
        self.z[p] = self.z[n + p]
        self.ph[p] = self.ph[n + p]
        Ps = P if sign > 0 else P.negate()
        self.x[n + p] = px
        self.z[n + p] = pz
        self.ph[n + p] = Ps.phase
        self._touch()
        return ("rand", p, g)

    # -- canonical data ------------------------------------------------------
    def canonical(self) -> "StabTableau":
        if self._canon is None:
            n = self.n
            c = StabTableau._complete(n, self.x[n:], self.z[n:], self.ph[n:])
            c._canon = c
            self._canon = c
        return self._canon

    def key(self) -> bytes:
        """Hashable identifier of the physical state."""
        c = self.canonical()
        n = self.n
        return c.x[n:].tobytes() + c.z[n:].tobytes() + c.ph[n:].tobytes()

    def quad_form(self) -> QuadForm:
        if self._qform is None:
            self._qform = _quad_form(self.canonical())
        return self._qform

    def amplitude(self, b: int) -> ExactOverlap:
        """Exact amplitude <b|s> of the canonical vector."""
        return self.quad_form().amplitude(b)

    def to_vector(self) -> np.ndarray:
        """Dense canonical vector; index bit (n-1-q) is qubit q."""
        qf = self.quad_form()
        n = self.n
        vec = np.zeros(2 ** n, dtype=complex)
        for u_int in range(2 ** qf.d):
            u = [(u_int >> j) & 1 for j in range(qf.d)]
            b = qf.b0
            for uj, xj in zip(u, qf.xrows):
                if uj:
                    b ^= xj
            vec[_big_endian_index(b, n)] = ExactOverlap(False, qf.d, 2 * qf.exponent(u)).to_complex()
        return vec

    def __eq__(self, other) -> bool:
        return isinstance(other, StabTableau) and self.n == other.n and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return "StabTableau<" + ", ".join(g.to_string() for g in self.generators) + ">"


def _big_endian_index(b: int, n: int) -> int:
    out = 0
    for q in range(n):
        if (b >> q) & 1:
            out |= 1 << (n - 1 - q)
    return out


def _quad_form(canon: StabTableau) -> QuadForm:
    n = canon.n
    rows = canon.generators
    xr = [r for r in rows if r.x]
    zr = [r for r in rows if not r.x]
    pivots = [(r.x & -r.x).bit_length() - 1 for r in xr]
    b0 = 0
    zinfo = []
    for r in zr:
        rhs = ((r.phase - 0) & 3) >> 1  # Z-only rows carry phase 0 or 2
        zinfo.append((r.z, rhs))
        if rhs:
            b0 |= r.z & -r.z
    for r, p in zip(xr, pivots):
        if (b0 >> p) & 1:
            b0 ^= r.x
    d = len(xr)
    a = np.array([(r.phase + 2 * ((r.z & b0).bit_count() & 1)) & 3 for r in xr], dtype=np.int64)
    B = np.zeros((d, d), dtype=np.uint8)
    for j in range(d):
        for l in range(j + 1, d):
            B[j, l] = (xr[j].z & xr[l].x).bit_count() & 1
    return QuadForm(n, pivots, [r.x for r in xr], b0, a, B, zinfo)


# ---------------------------------------------------------------------------
# Functional API
# ---------------------------------------------------------------------------


def apply_gate(state: StabTableau, gate: str, *qubits: int) -> StabTableau:
    return state.copy().apply_gate(gate, *qubits)


def expectation(state: StabTableau, P: PauliOp) -> int:
    return state.expectation(P)


def measure_pauli(state: StabTableau, P: PauliOp, postselect: int = 1, rng=None):
    """Measure P; returns (post-measurement state, probability of the outcome).

    With ``rng`` the outcome is sampled, otherwise ``postselect`` is used.
    """
    t = state.copy()
    px, pz = t._words(P)
    random_outcome = bool(kernels.symp_row(t.x[t.n:], t.z[t.n:], px, pz).any())
    if rng is not None:
        if random_outcome:
            sign = 1 if rng.random() < 0.5 else -1
        else:
            sign = t.expectation(P)
    else:
        sign = 1 if postselect >= 0 else -1
    res = t.project(P, sign)
    if res[0] == "det":
        if not res[1]:
            raise ZeroProbabilityError(f"outcome {sign:+d} of {P.to_string()} has probability 0")
        return t, 1.0
    return t, 0.5


def canonical_form(state: StabTableau) -> StabTableau:
    return state.canonical()


def _solve_affine(A_rows: list[int], rhs: list[int], nvars: int):
    """Solve A u = rhs over GF(2); rows as bitsets over nvars columns.

    Returns (particular solution bitset, null-space basis) or None.
    """
    aug = [r | (b << nvars) for r, b in zip(A_rows, rhs)]
    red, piv = rref_ints(aug, nvars + 1)
    if nvars in piv:
        return None
    u0 = 0
    for r, p in zip(red, piv):
        if (r >> nvars) & 1:
            u0 |= 1 << p
    mask = (1 << nvars) - 1
    basis = null_space([r & mask for r in red], nvars)
    return u0, basis


def _bits_array(v: int, length: int) -> np.ndarray:
    return np.array([(v >> j) & 1 for j in range(length)], dtype=np.int64)


def inner_product(s1: StabTableau, s2: StabTableau) -> ExactOverlap:
    """Exact <s1|s2> between canonical vectors."""
    if s1.n != s2.n:
        raise ValueError("qubit count mismatch")
    f1, f2 = s1.quad_form(), s2.quad_form()
    d1, d2 = f1.d, f2.d
    # support of s1 parameterized by u; impose s2's Z constraints
    A_rows, rhs = [], []
    for zr, c in f2.zrows:
        row = 0
        for j, xj in enumerate(f1.xrows):
            if (zr & xj).bit_count() & 1:
                row |= 1 << j
        A_rows.append(row)
        rhs.append(c ^ ((zr & f1.b0).bit_count() & 1))
    if d1 == 0:
        ok = all(c == 0 for r, c in zip(A_rows, rhs))
        if not ok:
            return ExactOverlap.zero()
        u0, basis = 0, []
    else:
        sol = _solve_affine(A_rows, rhs, d1) if A_rows else (0, [1 << j for j in range(d1)])
        if sol is None:
            return ExactOverlap.zero()
        u0, basis = sol
    e = len(basis)
    u0v = _bits_array(u0, d1)
    M = np.zeros((d1, e), dtype=np.int64)
    for i, v in enumerate(basis):
        M[:, i] = _bits_array(v, d1)
    # coordinates of the same string in s2
    P = np.zeros((d2, d1), dtype=np.int64)
    for l, p in enumerate(f2.pivots):
        for j, xj in enumerate(f1.xrows):
            P[l, j] = (xj >> p) & 1
    base_w = np.array([(f1.b0 >> p) & 1 for p in f2.pivots], dtype=np.int64)
    w0 = (base_w + P @ u0v) & 1
    W = (P @ M) & 1
    c1, L1, Q1 = compose_affine(0, f1.a, f1.B, u0v, M)
    c2, L2, Q2 = compose_affine(0, f2.a, f2.B, w0, W)
    c = (c2 - c1) & 3
    L = (L2 - L1) & 3
    Q = (Q1 ^ Q2)
    res = exponential_sum(c, L, Q)
    if res is None:
        return ExactOverlap.zero()
    h, m = res
    return ExactOverlap(False, d1 + d2 - h, m)


def pauli_phase_on(state: StabTableau, P: PauliOp) -> tuple[StabTableau, ExactOverlap]:
    """Return (t, w) with P|state> = w |t> for canonical vectors (w exact, unit)."""
    t = state.canonical().copy().apply_pauli(P)
    t = t.canonical()
    f_old, f_new = state.quad_form(), t.quad_form()
    b = f_new.b0
    # <b|P|s> = i^k (-1)^{z.(b+x)} <b+x|s>
    src = b ^ P.x
    amp = f_old.amplitude(src)
    if amp.is_zero:
        raise AssertionError("Pauli image lost its support point")
    sign = 2 * ((P.z & src).bit_count() & 1)
    w = amp * ExactOverlap.phase(2 * (P.phase + sign))
    # canonical amplitude at b0 is 2^{-d/2}
    return t, ExactOverlap(False, 0, w.m)


def expectation_cross(s1: StabTableau, P: PauliOp, s2: StabTableau) -> complex:
    return expectation_cross_exact(s1, P, s2).to_complex()


def expectation_cross_exact(s1: StabTableau, P: PauliOp, s2: StabTableau) -> ExactOverlap:
    t, w = pauli_phase_on(s2, P)
    return inner_product(s1, t) * w


def subsystem_entropy_bits(state: StabTableau, A: Iterable[int]) -> int:
    """Entanglement entropy of a pure stabilizer state across A, in bits."""
    n = state.n
    A = sorted(set(A))
    if any(not 0 <= q < n for q in A):
        raise ValueError("region index out of range")
    comp = [q for q in range(n) if q not in set(A)]
    if not A or not comp:
        return 0
    # rank of the stabilizers restricted to the complement
    cmask = 0
    for q in comp:
        cmask |= 1 << q
    rows = [(g.x & cmask) | ((g.z & cmask) << n) for g in state.generators]
    return len(A) - n + gf2_rank(rows, 2 * n)
