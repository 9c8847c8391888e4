"""Bit vectors, GF(2) matrices and phase-exact Pauli algebra.

Bit ``q`` of an integer is qubit (or column) ``q``.  A Pauli operator is
``i^phase X^x Z^z`` with X to the left of Z on every qubit; qubit 0 is printed
leftmost.  The binary symplectic vector of an n-qubit Pauli is the 2n-bit
integer ``x | (z << n)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels

__all__ = [
    "BitVec",
    "BinMatrix",
    "PauliOp",
    "symplectic_product",
    "pauli_mul",
    "rref",
    "gf2_rank",
    "null_space",
    "kernel_symplectic",
    "symplectic_gram_schmidt",
    "quotient_basis",
    "gf2_inverse",
    "ints_to_words",
    "words_to_ints",
]


def _popcount(v: int) -> int:
    return v.bit_count()


def n_words(nbits: int) -> int:
    return max(1, (nbits + 63) >> 6)


def ints_to_words(values: Sequence[int], nbits: int) -> np.ndarray:
    """Pack integers into a (len, words) uint64 array."""
    w = n_words(nbits)
    out = np.zeros((len(values), w), dtype=np.uint64)
    nb = 8 * w
    for i, v in enumerate(values):
        out[i] = np.frombuffer(int(v).to_bytes(nb, "little"), dtype="<u8")
    return out


def words_to_ints(arr: np.ndarray) -> list[int]:
    arr = np.ascontiguousarray(arr, dtype="<u8")
    if arr.ndim == 1:
        return [int.from_bytes(arr.tobytes(), "little")]
    return [int.from_bytes(row.tobytes(), "little") for row in arr]


def word_to_int(row: np.ndarray) -> int:
    return int.from_bytes(np.ascontiguousarray(row, dtype="<u8").tobytes(), "little")


# ---------------------------------------------------------------------------
# Bit vectors and matrices
# ---------------------------------------------------------------------------


class BitVec:
    """Fixed-length immutable bit vector backed by a Python integer."""

    __slots__ = ("_bits", "_length")

    def __init__(self, bits: int, length: int):
        if length < 0:
            raise ValueError("negative length")
        if bits < 0 or bits >> length:
            raise ValueError("bits exceed length")
        self._bits = int(bits)
        self._length = int(length)

    @classmethod
    def from_list(cls, values: Iterable[int]) -> "BitVec":
        values = list(values)
        bits = 0
        for i, b in enumerate(values):
            if b not in (0, 1):
                raise ValueError("bit values must be 0 or 1")
            bits |= b << i
        return cls(bits, len(values))

    @property
    def bits(self) -> int:
        return self._bits

    def __len__(self) -> int:
        return self._length

    def __getitem__(self, i: int) -> int:
        if not -self._length <= i < self._length:
            raise IndexError(i)
        return (self._bits >> (i % self._length)) & 1

    def _check(self, other: "BitVec") -> None:
        if self._length != other._length:
            raise ValueError(f"length mismatch: {self._length} vs {other._length}")

    def __xor__(self, other: "BitVec") -> "BitVec":
        self._check(other)
        return BitVec(self._bits ^ other._bits, self._length)

    def __and__(self, other: "BitVec") -> "BitVec":
        self._check(other)
        return BitVec(self._bits & other._bits, self._length)

    def dot(self, other: "BitVec") -> int:
        self._check(other)
        return _popcount(self._bits & other._bits) & 1

    def popcount(self) -> int:
        return _popcount(self._bits)

    def to_list(self) -> list[int]:
        return [(self._bits >> i) & 1 for i in range(self._length)]

    def __eq__(self, other) -> bool:
        return isinstance(other, BitVec) and self._length == other._length and self._bits == other._bits

    def __hash__(self) -> int:
        return hash((self._bits, self._length))

    def __repr__(self) -> str:
        return f"BitVec({''.join(map(str, self.to_list()))})"


class BinMatrix:
    """Dense GF(2) matrix with rows packed into 64-bit words."""

    __slots__ = ("words", "n_cols")

    def __init__(self, words: np.ndarray, n_cols: int):
        words = np.ascontiguousarray(words, dtype=np.uint64)
        if words.ndim != 2 or words.shape[1] != n_words(n_cols):
            raise ValueError("packed shape does not match column count")
        self.words = words
        self.n_cols = int(n_cols)

    @classmethod
    def from_ints(cls, rows: Sequence[int], n_cols: int) -> "BinMatrix":
        for r in rows:
            if r < 0 or r >> n_cols:
                raise ValueError("row exceeds column count")
        return cls(ints_to_words(list(rows), n_cols), n_cols)

    @classmethod
    def from_rows(cls, rows: Sequence[BitVec], n_cols: int | None = None) -> "BinMatrix":
        if n_cols is None:
            if not rows:
                raise ValueError("column count required for an empty matrix")
            n_cols = len(rows[0])
        if any(len(r) != n_cols for r in rows):
            raise ValueError("all rows must have the same length")
        return cls.from_ints([r.bits for r in rows], n_cols)

    @classmethod
    def from_array(cls, a) -> "BinMatrix":
        a = np.asarray(a, dtype=np.uint8) & 1
        rows = [sum(int(b) << j for j, b in enumerate(row)) for row in a]
        return cls.from_ints(rows, a.shape[1])

    @property
    def n_rows(self) -> int:
        return self.words.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_rows, self.n_cols)

    def to_ints(self) -> list[int]:
        return words_to_ints(self.words) if self.n_rows else []

    def rows(self) -> list[BitVec]:
        return [BitVec(v, self.n_cols) for v in self.to_ints()]

    def to_array(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=np.uint8)
        for i, v in enumerate(self.to_ints()):
            for j in range(self.n_cols):
                out[i, j] = (v >> j) & 1
        return out

    def copy(self) -> "BinMatrix":
        return BinMatrix(self.words.copy(), self.n_cols)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BinMatrix)
            and self.n_cols == other.n_cols
            and np.array_equal(self.words, other.words)
        )

    def __repr__(self) -> str:
        body = "\n".join("".join(map(str, r.to_list())) for r in self.rows())
        return f"BinMatrix({self.n_rows}x{self.n_cols})\n{body}"


def rref(M: BinMatrix, col_order: Sequence[int] | None = None) -> tuple[BinMatrix, int, list[int]]:
    """Reduced row echelon form over GF(2).

    Pivots are taken in ``col_order`` (default: ascending columns), each on the
    lowest-index available row.  Returns (reduced matrix, rank, pivot columns).
    """
    R = M.copy()
    cols = range(M.n_cols) if col_order is None else col_order
    if R.n_rows == 0:
        return R, 0, []
    pivots = kernels.gf2_rref(R.words, np.asarray(list(cols), dtype=np.int64))
    pivots = [int(p) for p in pivots]
    return R, len(pivots), pivots


def rref_ints(rows: Sequence[int], n_cols: int, col_order: Sequence[int] | None = None) -> tuple[list[int], list[int]]:
    """rref on integer rows; returns (nonzero reduced rows, pivots)."""
    if not rows:
        return [], []
    R, rank, piv = rref(BinMatrix.from_ints(rows, n_cols), col_order)
    return words_to_ints(R.words[:rank]) if rank else [], piv


def gf2_rank(rows: Sequence[int], n_cols: int) -> int:
    return len(rref_ints(rows, n_cols)[1])


def null_space(rows: Sequence[int], n_cols: int) -> list[int]:
    """Basis of {v : popcount(row & v) even for every row}."""
    red, piv = rref_ints(rows, n_cols)
    pivset = set(piv)
    basis = []
    for f in range(n_cols):
        if f in pivset:
            continue
        v = 1 << f
        for r, p in zip(red, piv):
            if (r >> f) & 1:
                v |= 1 << p
        basis.append(v)
    return basis


def reduce_against(v: int, reduced: Sequence[int], pivots: Sequence[int]) -> int:
    """Reduce v by an rref basis (clears the pivot columns)."""
    for r, p in zip(reduced, pivots):
        if (v >> p) & 1:
            v ^= r
    return v


def in_span(v: int, reduced: Sequence[int], pivots: Sequence[int]) -> bool:
    return reduce_against(v, reduced, pivots) == 0


# ---------------------------------------------------------------------------
# Pauli operators
# ---------------------------------------------------------------------------

_LETTERS = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}


@dataclass(frozen=True, slots=True)
class PauliOp:
    """``i^phase X^x Z^z`` on n qubits; x and z are integer bitsets."""

    n: int
    x: int = 0
    z: int = 0
    phase: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("negative qubit count")
        mask = (1 << self.n) - 1
        if self.x & ~mask or self.z & ~mask or self.x < 0 or self.z < 0:
            raise ValueError("x/z bits exceed qubit count")
        object.__setattr__(self, "phase", self.phase & 3)

    # -- construction ------------------------------------------------------
    @classmethod
    def identity(cls, n: int) -> "PauliOp":
        return cls(n)

    @classmethod
    def hermitian(cls, n: int, x: int, z: int, sign: int = 1) -> "PauliOp":
        """The Hermitian operator ``sign * (tensor product of I/X/Y/Z)``."""
        ph = _popcount(x & z) + (2 if sign < 0 else 0)
        return cls(n, x, z, ph)

    @classmethod
    def from_vec(cls, vec: int, n: int, sign: int = 1) -> "PauliOp":
        mask = (1 << n) - 1
        return cls.hermitian(n, vec & mask, vec >> n, sign)

    @classmethod
    def single(cls, n: int, q: int, letter: str) -> "PauliOp":
        return cls.from_string("I" * q + letter + "I" * (n - q - 1))

    @classmethod
    def from_string(cls, text: str) -> "PauliOp":
        """Parse strings such as ``XZZXI``, ``-IZZI``, ``+iXY``."""
        s = text.strip()
        sign = 1
        extra = 0
        if s.startswith(("+", "-")):
            sign = -1 if s[0] == "-" else 1
            s = s[1:]
        if s.startswith("i"):
            extra = 1
            s = s[1:]
        x = z = 0
        for q, ch in enumerate(s.upper()):
            if ch == "X":
                x |= 1 << q
            elif ch == "Z":
                z |= 1 << q
            elif ch == "Y":
                x |= 1 << q
                z |= 1 << q
            elif ch not in "I_":
                raise ValueError(f"bad Pauli letter {ch!r} in {text!r}")
        op = cls.hermitian(len(s), x, z, sign)
        return op.times_phase(extra) if extra else op

    @classmethod
    def from_sparse(cls, n: int, terms: Sequence[tuple[str, int]], sign: int = 1) -> "PauliOp":
        """Build from (letter, qubit) pairs, e.g. [("X", 0), ("Z", 2)]."""
        x = z = 0
        for letter, q in terms:
            if not 0 <= q < n:
                raise ValueError(f"qubit {q} out of range for n={n}")
            bit = 1 << q
            if (x | z) & bit:
                raise ValueError(f"qubit {q} repeated")
            letter = letter.upper()
            if letter in ("X", "Y"):
                x |= bit
            if letter in ("Z", "Y"):
                z |= bit
            if letter not in ("X", "Y", "Z"):
                raise ValueError(f"bad Pauli letter {letter!r}")
        return cls.hermitian(n, x, z, sign)

    # -- properties --------------------------------------------------------
    @property
    def xv(self) -> BitVec:
        return BitVec(self.x, self.n)

    @property
    def zv(self) -> BitVec:
        return BitVec(self.z, self.n)

    @property
    def phase_exp(self) -> int:
        return self.phase

    @property
    def vec(self) -> int:
        return self.x | (self.z << self.n)

    @property
    def support(self) -> int:
        return self.x | self.z

    @property
    def weight(self) -> int:
        return _popcount(self.x | self.z)

    @property
    def is_hermitian(self) -> bool:
        return (self.phase + _popcount(self.x & self.z)) % 2 == 0

    @property
    def sign(self) -> int:
        """+1 or -1 for Hermitian operators relative to the I/X/Y/Z string."""
        k = (self.phase - _popcount(self.x & self.z)) & 3
        if k == 0:
            return 1
        if k == 2:
            return -1
        raise ValueError("operator is not Hermitian")

    def is_identity_up_to_phase(self) -> bool:
        return self.x == 0 and self.z == 0

    def times_phase(self, k: int) -> "PauliOp":
        return PauliOp(self.n, self.x, self.z, self.phase + k)

    def negate(self) -> "PauliOp":
        return self.times_phase(2)

    def unsigned(self) -> "PauliOp":
        return PauliOp.hermitian(self.n, self.x, self.z)

    def adjoint(self) -> "PauliOp":
        # (X^x Z^z)^dagger = Z^z X^x = (-1)^{x.z} X^x Z^z
        return PauliOp(self.n, self.x, self.z, -self.phase + 2 * _popcount(self.x & self.z))

    def letters(self) -> str:
        return "".join(_LETTERS[((self.x >> q) & 1, (self.z >> q) & 1)] for q in range(self.n))

    def to_string(self) -> str:
        k = (self.phase - _popcount(self.x & self.z)) & 3
        prefix = {0: "+", 1: "+i", 2: "-", 3: "-i"}[k]
        return prefix + self.letters()

    def restricted(self, qubits: Sequence[int]) -> "PauliOp":
        """Tensor factor on the listed qubits (phase of the I/X/Y/Z string kept)."""
        x = z = 0
        for j, q in enumerate(qubits):
            x |= ((self.x >> q) & 1) << j
            z |= ((self.z >> q) & 1) << j
        k = (self.phase - _popcount(self.x & self.z)) & 3
        return PauliOp(len(qubits), x, z, k + _popcount(x & z))

    def to_matrix(self) -> np.ndarray:
        """Dense matrix (qubit 0 most significant); for tests and small n."""
        X = np.array([[0, 1], [1, 0]], dtype=complex)
        Z = np.array([[1, 0], [0, -1]], dtype=complex)
        out = np.array([[1.0 + 0j]])
        for q in range(self.n):
            m = np.eye(2, dtype=complex)
            if (self.x >> q) & 1:
                m = m @ X
            if (self.z >> q) & 1:
                m = m @ Z
            out = np.kron(out, m)
        return (1j ** self.phase) * out

    def __mul__(self, other: "PauliOp") -> "PauliOp":
        return pauli_mul(self, other)

    def __repr__(self) -> str:
        return f"PauliOp({self.to_string()})"


def _check_n(p: PauliOp, q: PauliOp) -> None:
    if p.n != q.n:
        raise ValueError(f"length mismatch: {p.n} vs {q.n}")


def symplectic_product(u: PauliOp, v: PauliOp) -> int:
    """0 if the operators commute, 1 if they anticommute."""
    _check_n(u, v)
    return _popcount((u.x & v.z) ^ (u.z & v.x)) & 1


def symp_vec(u: int, v: int, n: int) -> int:
    """Symplectic product of two 2n-bit vectors."""
    mask = (1 << n) - 1
    return _popcount(((u & mask) & (v >> n)) ^ ((u >> n) & (v & mask))) & 1


def pauli_mul(p: PauliOp, q: PauliOp) -> PauliOp:
    """Exact product p·q."""
    _check_n(p, q)
    return PauliOp(p.n, p.x ^ q.x, p.z ^ q.z, p.phase + q.phase + 2 * _popcount(p.z & q.x))


def pauli_product(ops: Iterable[PauliOp], n: int) -> PauliOp:
    out = PauliOp(n)
    for op in ops:
        out = pauli_mul(out, op)
    return out


# ---------------------------------------------------------------------------
# Symplectic linear algebra
# ---------------------------------------------------------------------------


def _as_vecs(H, n: int | None) -> tuple[list[int], int]:
    if isinstance(H, BinMatrix):
        if H.n_cols % 2:
            raise ValueError("symplectic matrices need an even column count")
        return H.to_ints(), H.n_cols // 2
    ops = list(H)
    if ops and isinstance(ops[0], PauliOp):
        return [p.vec for p in ops], ops[0].n
    if n is None:
        raise ValueError("qubit count required for integer vectors")
    return [int(v) for v in ops], n


def swap_halves(v: int, n: int) -> int:
    mask = (1 << n) - 1
    return (v >> n) | ((v & mask) << n)


def kernel_symplectic(H, n: int | None = None) -> list[int]:
    """Basis of all 2n-bit vectors symplectically orthogonal to the rows of H.

    H may be a BinMatrix with 2n columns, a list of PauliOp, or a list of
    integer vectors (then n is required).  Rows must pairwise commute.
    """
    rows, n = _as_vecs(H, n)
    for i in range(len(rows)):
        for j in range(i + 1, len(rows)):
            if symp_vec(rows[i], rows[j], n):
                raise ValueError(f"non-abelian input: rows {i} and {j} anticommute")
    return null_space([swap_halves(r, n) for r in rows], 2 * n)


def symplectic_gram_schmidt(vectors, n: int | None = None):
    """Split a span into symplectic pairs plus a commuting center.

    Accepts PauliOp or integer vectors; returns the same kind.  Dependent
    inputs are dropped first, so the output is a basis of the input span.
    """
    vecs, n = _as_vecs(vectors, n)
    as_ops = bool(vectors) and isinstance(list(vectors)[0], PauliOp)
    basis, _ = rref_ints(vecs, 2 * n)
    pool = list(basis)
    pairs: list[tuple[int, int]] = []
    center: list[int] = []
    while pool:
        v = pool.pop(0)
        partner = next((i for i, w in enumerate(pool) if symp_vec(v, w, n)), None)
        if partner is None:
            center.append(v)
            continue
        w = pool.pop(partner)
        rest = []
        for u in pool:
            if symp_vec(u, w, n):
                u ^= v
            if symp_vec(u, v, n):
                u ^= w
            rest.append(u)
        pool = rest
        pairs.append((v, w))
    if as_ops:
        return (
            [(PauliOp.from_vec(a, n), PauliOp.from_vec(b, n)) for a, b in pairs],
            [PauliOp.from_vec(c, n) for c in center],
        )
    return pairs, center


def quotient_basis(sub: Sequence[int], full: Sequence[int], n_cols: int,
                   col_order: Sequence[int] | None = None) -> list[int]:
    """Vectors from span(full) forming a basis modulo span(sub).

    The result is row reduced (after clearing the pivots of ``sub``), so it is
    deterministic for a given pair of spans.
    """
    if not full:
        return []
    sub_red, sub_piv = rref_ints(list(sub), n_cols)
    F = ints_to_words(list(full), n_cols)
    if sub_red:
        S = ints_to_words(sub_red, n_cols)
        one = np.uint64(1)
        for i, p in enumerate(sub_piv):
            hit = ((F[:, p >> 6] >> np.uint64(p & 63)) & one).astype(bool)
            if hit.any():
                F[hit] ^= S[i]
    taken = set(sub_piv)
    order = [c for c in (range(n_cols) if col_order is None else col_order) if c not in taken]
    pivots = kernels.gf2_rref(F, np.asarray(order, dtype=np.int64))
    return words_to_ints(F[: len(pivots)]) if pivots else []


def span_equal(a: Sequence[int], b: Sequence[int], n_cols: int) -> bool:
    ra, _ = rref_ints(list(a), n_cols)
    rb, _ = rref_ints(list(b), n_cols)
    return ra == rb


def gf2_inverse(rows: Sequence[int], n: int) -> list[int]:
    """Inverse of an invertible n x n GF(2) matrix given as row bitsets."""
    aug = [r | (1 << (n + i)) for i, r in enumerate(rows)]
    red, piv = rref_ints(aug, 2 * n)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ValueError("matrix is singular")
    return [r >> n for r in red[:n]]
