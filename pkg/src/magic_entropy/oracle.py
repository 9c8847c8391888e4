"""Dense statevector reference used as ground truth in tests and `verify`.

Nothing here calls the tableau simulator: gates act on a 2^n array, Pauli
operators are applied bit by bit, and stabilizer tableaus are expanded by
projecting a random vector with (I + g)/2.  Basis order is big-endian
(qubit 0 is the most significant bit of the index).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .groups import StabGroup
from .symplectic import PauliOp

__all__ = [
    "DenseState",
    "OracleInfeasibleError",
    "from_superposition",
    "from_tableau",
    "simulate_program",
    "reduced_spectrum",
    "entropy_from_spectrum",
    "pauli_scan",
    "stab_from_scan",
    "dense_of",
    "MAX_QUBITS",
    "MAX_SCAN_QUBITS",
    "MAX_REGION",
]

MAX_QUBITS = 14
MAX_SCAN_QUBITS = 10
MAX_REGION = 12

_SQ2 = 1 / math.sqrt(2)
_ONE_QUBIT = {
    "H": np.array([[1, 1], [1, -1]], dtype=complex) * _SQ2,
    "S": np.diag([1, 1j]),
    "SDG": np.diag([1, -1j]),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.diag([1, -1]).astype(complex),
    "T": np.diag([1, np.exp(1j * math.pi / 4)]),
    "TDG": np.diag([1, np.exp(-1j * math.pi / 4)]),
    "I": np.eye(2, dtype=complex),
}
_CX = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
_CZ = np.diag([1, 1, 1, -1]).astype(complex)
_SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)
_TWO_QUBIT = {"CX": _CX, "CNOT": _CX, "CZ": _CZ, "SWAP": _SWAP}


class OracleInfeasibleError(ValueError):
    """Instance too large for dense simulation."""


def _fix_phase(v: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(np.abs(v) > 1e-12)
    if nz.size:
        a = v[nz[0]]
        v = v * (abs(a) / a)
    return v


@dataclass
class DenseState:
    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.n > MAX_QUBITS:
            raise OracleInfeasibleError(f"dense oracle supports at most {MAX_QUBITS} qubits, got {self.n}")
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex).reshape(2 ** self.n)

    @classmethod
    def zero_state(cls, n: int) -> "DenseState":
        if n > MAX_QUBITS:
            raise OracleInfeasibleError(f"dense oracle supports at most {MAX_QUBITS} qubits, got {n}")
        v = np.zeros(2 ** n, dtype=complex)
        v[0] = 1
        return cls(n, v)

    def copy(self) -> "DenseState":
        return DenseState(self.n, self.amplitudes.copy())

    def normalized(self) -> "DenseState":
        v = self.amplitudes / np.linalg.norm(self.amplitudes)
        return DenseState(self.n, _fix_phase(v))

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    # -- dense operations -------------------------------------------------------------
    def apply_matrix(self, U: np.ndarray, qubits) -> "DenseState":
        k = len(qubits)
        t = self.amplitudes.reshape([2] * self.n)
        t = np.moveaxis(t, list(qubits), list(range(k)))
        shape = t.shape
        t = (U @ t.reshape(2 ** k, -1)).reshape(shape)
        t = np.moveaxis(t, list(range(k)), list(qubits))
        self.amplitudes = t.reshape(-1)
        return self

    def apply_gate(self, name: str, *qubits: int, angle: float | None = None) -> "DenseState":
        name = name.upper()
        if name == "PHASE":
            return self.apply_matrix(np.diag([1, np.exp(1j * angle)]), qubits)
        if name in _ONE_QUBIT:
            return self.apply_matrix(_ONE_QUBIT[name], qubits)
        if name in _TWO_QUBIT:
            return self.apply_matrix(_TWO_QUBIT[name], qubits)
        raise ValueError(f"unknown gate {name}")

    def _masks(self, P: PauliOp) -> tuple[int, int]:
        n = self.n
        bx = bz = 0
        for q in range(n):
            if (P.x >> q) & 1:
                bx |= 1 << (n - 1 - q)
            if (P.z >> q) & 1:
                bz |= 1 << (n - 1 - q)
        return bx, bz

    def pauli_apply(self, P: PauliOp) -> np.ndarray:
        """P|psi> with P = i^k X^x Z^z."""
        bx, bz = self._masks(P)
        idx = np.arange(2 ** self.n)
        signs = 1 - 2 * (np.bitwise_count(idx & bz) & 1).astype(np.int64)
        out = np.empty_like(self.amplitudes)
        out[idx ^ bx] = signs * self.amplitudes
        return out * (1j ** P.phase)

    def expectation(self, P: PauliOp) -> complex:
        return complex(np.vdot(self.amplitudes, self.pauli_apply(P)))

    def project(self, P: PauliOp, sign: int) -> float:
        """Apply (I + sign P)/2, renormalize, return the outcome probability."""
        before = np.vdot(self.amplitudes, self.amplitudes).real
        v = 0.5 * (self.amplitudes + sign * self.pauli_apply(P))
        prob = float(np.vdot(v, v).real / before)
        if prob < 1e-12:
            raise ValueError(f"outcome {sign:+d} has probability {prob:.3g}")
        self.amplitudes = v / math.sqrt(np.vdot(v, v).real)
        return prob

    def fidelity(self, other: "DenseState") -> float:
        a = self.amplitudes / np.linalg.norm(self.amplitudes)
        b = other.amplitudes / np.linalg.norm(other.amplitudes)
        return float(abs(np.vdot(a, b)) ** 2)


def from_tableau(tab, seed: int = 0) -> DenseState:
    """Dense vector of a stabilizer tableau by projecting a random vector."""
    gens = tab.generators
    n = tab.n
    if n > MAX_QUBITS:
        raise OracleInfeasibleError(f"dense oracle supports at most {MAX_QUBITS} qubits, got {n}")
    rng = np.random.default_rng(seed)
    st = DenseState(n, rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n))
    for g in gens:
        st.amplitudes = 0.5 * (st.amplitudes + st.pauli_apply(g))
    return st.normalized()


def from_superposition(psi, seed: int = 0) -> DenseState:
    """Sum of branch vectors, each with first nonzero amplitude real positive."""
    branches = psi.branches
    n = psi.n
    if n > MAX_QUBITS:
        raise OracleInfeasibleError(f"dense oracle supports at most {MAX_QUBITS} qubits, got {n}")
    total = np.zeros(2 ** n, dtype=complex)
    for c, tab in branches:
        total += c * from_tableau(tab, seed).amplitudes
    return DenseState(n, total).normalized()


def simulate_program(program, outcomes=None, seed: int | None = None) -> DenseState:
    """Gate-by-gate dense run of a circuit program.

    Measurements use their postselect sign, else entry i of ``outcomes``
    (one entry per measurement, as recorded by circuit.execute), else a
    sample drawn with ``seed``.
    """
    st = DenseState.zero_state(program.n)
    rng = np.random.default_rng(seed)
    outcomes = list(outcomes or [])
    m = 0
    for ins in program.instructions:
        if ins.is_measurement:
            P = ins.pauli(program.n)
            if ins.sign is not None:
                sign = ins.sign
            elif m < len(outcomes):
                sign = outcomes[m]
            else:
                p_plus = 0.5 * (1 + st.expectation(P).real / np.vdot(st.amplitudes, st.amplitudes).real)
                sign = 1 if rng.random() < p_plus else -1
            m += 1
            st.project(P, sign)
        else:
            st.apply_gate(ins.name, *ins.qubits, angle=ins.angle)
    return st.normalized()


def reduced_spectrum(state: DenseState, A) -> np.ndarray:
    """Eigenvalues of the reduced density matrix on A, descending, length 2^|A|."""
    A = sorted(set(A))
    if len(A) > MAX_REGION:
        raise OracleInfeasibleError(f"region of {len(A)} qubits exceeds {MAX_REGION}")
    n = state.n
    rest = [q for q in range(n) if q not in A]
    t = state.amplitudes.reshape([2] * n).transpose(A + rest)
    M = t.reshape(2 ** len(A), -1) / np.linalg.norm(state.amplitudes)
    sv = np.linalg.svd(M, compute_uv=False)
    vals = np.zeros(2 ** len(A))
    vals[: sv.size] = sv ** 2
    return np.sort(vals)[::-1]


def entropy_from_spectrum(vals, alpha: float = 1.0) -> float:
    vals = np.asarray(vals, dtype=float)
    pos = vals[vals > 1e-13]
    if alpha == 1:
        return float(-np.sum(pos * np.log2(pos))) + 0.0
    if alpha == 0:
        return float(np.log2(np.count_nonzero(vals > 1e-13)))
    if math.isinf(alpha):
        return float(-np.log2(pos.max()))
    return float(np.log2(np.sum(pos ** alpha)) / (1 - alpha)) + 0.0


def _wht_rows(a: np.ndarray) -> np.ndarray:
    a = a.copy()
    N = a.shape[1]
    h = 1
    while h < N:
        v = a.reshape(a.shape[0], N // (2 * h), 2, h)
        top = v[:, :, 0, :].copy()
        v[:, :, 0, :] = top + v[:, :, 1, :]
        v[:, :, 1, :] = top - v[:, :, 1, :]
        h *= 2
    return a


def pauli_scan(state: DenseState) -> np.ndarray:
    """E[x, z] = <psi| i^{|x&z|} X^x Z^z |psi> with x, z little-endian qubit masks."""
    n = state.n
    if n > MAX_SCAN_QUBITS:
        raise OracleInfeasibleError(f"Pauli scan supports at most {MAX_SCAN_QUBITS} qubits, got {n}")
    N = 2 ** n
    psi = state.amplitudes.reshape([2] * n).transpose(list(range(n))[::-1]).reshape(-1) if n else state.amplitudes
    psi = psi / np.linalg.norm(psi)
    b = np.arange(N)
    f = np.conj(psi[b[None, :] ^ b[:, None]]) * psi[None, :]
    F = _wht_rows(f)
    herm = np.array([1, 1j, -1, -1j])[np.bitwise_count(b[:, None] & b[None, :]).astype(np.int64) % 4]
    return (herm * F).real


def stab_from_scan(scan: np.ndarray, tol: float = 1e-9) -> StabGroup:
    """Group of all Paulis with expectation +-1 in a scan."""
    N = scan.shape[0]
    n = N.bit_length() - 1
    xs, zs = np.nonzero(np.abs(scan) >= 1 - tol)
    elems = [PauliOp.hermitian(n, int(x), int(z), 1 if scan[x, z] > 0 else -1) for x, z in zip(xs, zs)]
    G = StabGroup.from_elements(n, elems)
    if len(elems) != 2 ** G.rank:
        raise AssertionError("unit-expectation Paulis do not close into a group")
    return G


def dense_of(psi, seed: int = 0) -> DenseState:
    """Dense vector of a DenseState, SuperposedState, FrameState or StabTableau."""
    if isinstance(psi, DenseState):
        return psi
    if hasattr(psi, "to_superposed"):
        psi = psi.to_superposed()
    if hasattr(psi, "branches"):
        return from_superposition(psi, seed)
    return from_tableau(psi, seed)
