"""Superpositions of stabilizer states, sum_j c_j |s_j>.

Each branch amplitude multiplies the canonical vector of its tableau, so
every gate or projection that changes a tableau also reports the exact phase
picked up by the canonical vector.
"""

from __future__ import annotations

import cmath
import math
from typing import Iterable, Sequence

import numpy as np

from .errors import BudgetExceededError, ZeroProbabilityError
from .parallel import pmap
from .symplectic import PauliOp
from .tableau import (
    GATE_ARITY,
    ExactOverlap,
    StabTableau,
    inner_product,
    normalize_gate_name,
    pauli_phase_on,
)

__all__ = [
    "SuperposedState",
    "DEFAULT_BRANCH_BUDGET",
    "clifford_phase",
    "projection_phase",
    "norm_squared",
    "expectation",
    "apply_clifford",
    "apply_phase_gate",
    "measure_pauli",
    "dedup",
]

DEFAULT_BRANCH_BUDGET = 2 ** 14
ZERO_AMP = 1e-13


def _unit_from(value: ExactOverlap, t: StabTableau, scale: int = 0) -> ExactOverlap:
    """Factor w with value = w * 2^{-scale/2} * <b0|t>, for b0 the first support point of t."""
    if value.is_zero:
        raise AssertionError("reference amplitude vanished")
    w = ExactOverlap(False, value.d - t.quad_form().d - scale, value.m)
    if w.d != 0:
        raise AssertionError("phase bookkeeping lost track of the norm")
    return w


def clifford_phase(s: StabTableau, gate: str, *qubits: int) -> tuple[StabTableau, ExactOverlap]:
    """Return (t, w) with U|s> = w|t> for canonical vectors; w is an exact unit."""
    g = normalize_gate_name(gate)
    t = s.canonical().copy().apply_gate(g, *qubits).canonical()
    b = t.quad_form().b0
    q = qubits[0]
    bq = (b >> q) & 1
    if g == "H":
        val = s.amplitude(b & ~(1 << q)) + s.amplitude(b | (1 << q)) * ExactOverlap.phase(4 * bq)
        val = val.scaled_sqrt2(1)
    elif g == "X":
        val = s.amplitude(b ^ (1 << q))
    elif g == "Y":
        val = s.amplitude(b ^ (1 << q)) * ExactOverlap.phase(2 if bq else 6)
    elif g == "Z":
        val = s.amplitude(b) * ExactOverlap.phase(4 * bq)
    elif g == "S":
        val = s.amplitude(b) * ExactOverlap.phase(2 * bq)
    elif g == "SDG":
        val = s.amplitude(b) * ExactOverlap.phase(6 * bq)
    elif g == "CX":
        c, tq = qubits
        val = s.amplitude(b ^ (((b >> c) & 1) << tq))
    elif g == "CZ":
        a, c = qubits
        val = s.amplitude(b) * ExactOverlap.phase(4 * (((b >> a) & (b >> c)) & 1))
    elif g == "SWAP":
        a, c = qubits
        ba, bc = (b >> a) & 1, (b >> c) & 1
        src = b & ~((1 << a) | (1 << c)) | (bc << a) | (ba << c)
        val = s.amplitude(src)
    else:  # pragma: no cover - GATE_ARITY lists every case above
        raise ValueError(g)
    return t, _unit_from(val, t)


def projection_phase(s: StabTableau, P: PauliOp, sign: int):
    """Apply (1 + sign P)/2 to the canonical vector of s.

    Returns None when the result vanishes, otherwise (t, w, halved) with
    (1 + sign P)/2 |s> = w 2^{-halved/2} |t>.
    """
    t = s.canonical().copy()
    res = t.project(P, sign)
    if res[0] == "det":
        return (s.canonical(), ExactOverlap.one(), 0) if res[1] else None
    t = t.canonical()
    b = t.quad_form().b0
    src = b ^ P.x
    # <b|P|s> = i^k (-1)^{z.src} <src|s>
    pv = s.amplitude(src) * ExactOverlap.phase(2 * P.phase + 4 * ((P.z & src).bit_count() & 1))
    if sign < 0:
        pv = pv * ExactOverlap.phase(4)
    val = (s.amplitude(b) + pv).scaled_sqrt2(2)
    return t, _unit_from(val, t, scale=1), 1


class SuperposedState:
    """Branches (amplitude, tableau) with a branch budget."""

    __slots__ = ("n", "branches", "branch_budget")

    def __init__(self, branches: Iterable[tuple[complex, StabTableau]], branch_budget: int = DEFAULT_BRANCH_BUDGET):
        self.branches = [(complex(c), s) for c, s in branches]
        if not self.branches:
            raise ValueError("a superposition needs at least one branch")
        self.n = self.branches[0][1].n
        if any(s.n != self.n for _, s in self.branches):
            raise ValueError("branches disagree on the qubit count")
        self.branch_budget = branch_budget
        if len(self.branches) > branch_budget:
            raise BudgetExceededError(f"{len(self.branches)} branches exceed the budget {branch_budget}")

    # -- constructors -------------------------------------------------------
    @classmethod
    def from_stabilizer(cls, s: StabTableau, amp: complex = 1.0) -> "SuperposedState":
        return cls([(amp, s)])

    @classmethod
    def zero_state(cls, n: int) -> "SuperposedState":
        return cls.from_stabilizer(StabTableau.zero_state(n))

    @classmethod
    def from_strings(cls, spec: Sequence[tuple[complex, Sequence[str]]]) -> "SuperposedState":
        """Branches from (amplitude, generator strings) pairs."""
        return cls([(c, StabTableau.from_strings(g)) for c, g in spec])

    def _new(self, branches) -> "SuperposedState":
        return SuperposedState(branches, self.branch_budget)

    @property
    def K(self) -> int:
        return len(self.branches)

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([c for c, _ in self.branches], dtype=complex)

    @property
    def states(self) -> list[StabTableau]:
        return [s for _, s in self.branches]

    # -- Gram sums ------------------------------------------------------------
    def gram(self) -> np.ndarray:
        K = self.K
        G = np.eye(K, dtype=complex)
        states = self.states
        for i in range(K):
            for j in range(i + 1, K):
                v = inner_product(states[i], states[j]).to_complex()
                G[i, j] = v
                G[j, i] = v.conjugate()
        return G

    def norm_squared(self) -> float:
        c = self.amplitudes
        val = complex(np.conj(c) @ self.gram() @ c)
        if abs(val.imag) > 1e-12 * max(1.0, abs(val.real)):
            raise AssertionError(f"norm has imaginary part {val.imag}")
        return val.real

    def normalize(self) -> "SuperposedState":
        nrm = self.norm_squared()
        if nrm <= 0:
            raise ZeroProbabilityError("state has zero norm")
        f = 1.0 / math.sqrt(nrm)
        return self._new([(c * f, s) for c, s in self.branches])

    def expectation(self, P: PauliOp) -> float:
        """<Psi|P|Psi> for Hermitian P, as an O(K^2) sum of exact cross terms."""
        if P.n != self.n:
            raise ValueError("length mismatch")
        if not P.is_hermitian:
            raise ValueError("expectation needs a Hermitian operator")
        imgs = [pauli_phase_on(s, P) for s in self.states]
        states = self.states
        amps = self.amplitudes

        def row(i: int) -> complex:
            acc = 0j
            ci = amps[i].conjugate()
            for j, (t, w) in enumerate(imgs):
                if j < i:
                    continue
                ov = (inner_product(states[i], t) * w).to_complex()
                term = ci * amps[j] * ov
                acc += term if j == i else 2 * term.real
            return acc

        total = sum(pmap(row, range(self.K)))
        if abs(total.imag) > 1e-10:
            raise AssertionError(f"expectation has imaginary residue {total.imag}")
        return float(total.real)

    # -- gates ------------------------------------------------------------------
    def apply_clifford(self, gate: str, *qubits: int) -> "SuperposedState":
        g = normalize_gate_name(gate)
        if len(qubits) != GATE_ARITY[g]:
            raise ValueError(f"{g} takes {GATE_ARITY[g]} qubit(s)")
        for q in qubits:
            if not 0 <= q < self.n:
                raise IndexError(f"qubit {q} out of range for n={self.n}")
        out = []
        for c, s in self.branches:
            t, w = clifford_phase(s, g, *qubits)
            out.append((c * w.to_complex(), t))
        return self._new(out)

    def apply_phase_gate(self, theta: float, q: int) -> "SuperposedState":
        """diag(1, e^{i theta}) on qubit q, branching on I and Z_q."""
        if not 0 <= q < self.n:
            raise IndexError(f"qubit {q} out of range for n={self.n}")
        quarter = theta / (math.pi / 2)
        if abs(quarter - round(quarter)) < 1e-12:
            gate = {0: None, 1: "S", 2: "Z", 3: "SDG"}[int(round(quarter)) % 4]
            return self if gate is None else self.apply_clifford(gate, q)
        glob = cmath.exp(0.5j * theta)
        a = glob * math.cos(theta / 2)
        b = -1j * glob * math.sin(theta / 2)
        Zq = PauliOp.single(self.n, q, "Z")
        out = []
        for c, s in self.branches:
            t, w = pauli_phase_on(s, Zq)
            out.append((c * a, s))
            out.append((c * b * w.to_complex(), t))
        merged = SuperposedState(out, branch_budget=max(self.branch_budget, len(out))).dedup(len(out))
        return merged._recombine(q).dedup(self.branch_budget)

    def _recombine(self, q: int) -> "SuperposedState":
        """Fold pairs c(|s> + i^k Z_q|s>) into one stabilizer branch.

        (1 +- Z_q)|s> is a projection and (1 +- iZ_q)|s> = sqrt2 e^{+-i pi/4} S^-+|s>,
        so such pairs are single stabilizer states that dedup cannot see.
        """
        if self.K < 2:
            return self
        Zq = PauliOp.single(self.n, q, "Z")
        index = {s.key(): i for i, (_, s) in enumerate(self.branches)}
        used: set[int] = set()
        out = []
        for i, (ci, si) in enumerate(self.branches):
            if i in used:
                continue
            t, w = pauli_phase_on(si, Zq)
            j = index.get(t.key())
            if j is None or j == i or j in used:
                out.append((ci, si))
                continue
            r = self.branches[j][0] / (w.to_complex() * ci)
            k = next((k for k in range(4) if abs(r - 1j ** k) < 1e-12), None)
            if k is None:
                out.append((ci, si))
                continue
            used.update((i, j))
            if k % 2 == 0:
                u, wp, halved = projection_phase(si, Zq, 1 if k == 0 else -1)
                out.append((2 * ci * wp.to_complex() * 2.0 ** (-halved / 2), u))
            else:
                u, wp = clifford_phase(si, "SDG" if k == 1 else "S", q)
                glob = cmath.exp(0.25j * math.pi * (1 if k == 1 else -1))
                out.append((ci * math.sqrt(2) * glob * wp.to_complex(), u))
        if not used:
            return self
        return SuperposedState(out, self.branch_budget)

    def apply_t(self, q: int) -> "SuperposedState":
        return self.apply_phase_gate(math.pi / 4, q)

    def apply_tdg(self, q: int) -> "SuperposedState":
        return self.apply_phase_gate(-math.pi / 4, q)

    # -- measurement --------------------------------------------------------------
    def measure_pauli(self, P: PauliOp, postselect: int = 1) -> tuple["SuperposedState", float]:
        """Project with (1 + sign P)/2, renormalize; returns (state, probability)."""
        if not P.is_hermitian:
            raise ValueError("measured operator must be Hermitian")
        sign = 1 if postselect >= 0 else -1
        before = self.norm_squared()
        out = []
        for c, s in self.branches:
            res = projection_phase(s, P, sign)
            if res is None:
                continue
            t, w, halved = res
            out.append((c * w.to_complex() * 2.0 ** (-halved / 2), t))
        if not out:
            raise ZeroProbabilityError(f"outcome {sign:+d} of {P.to_string()} has probability 0")
        try:
            projected = self._new(out).dedup()
        except ZeroProbabilityError:
            raise ZeroProbabilityError(f"outcome {sign:+d} of {P.to_string()} has probability 0") from None
        after = projected.norm_squared()
        prob = after / before
        if prob < 1e-12:
            raise ZeroProbabilityError(f"outcome {sign:+d} of {P.to_string()} has probability {prob:.3g}")
        return projected.normalize(), prob

    # -- bookkeeping ----------------------------------------------------------------
    def dedup(self, budget: int | None = None) -> "SuperposedState":
        """Merge branches whose tableaus describe the same state."""
        merged: dict[bytes, list] = {}
        for c, s in self.branches:
            key = s.key()
            if key in merged:
                merged[key][0] += c
            else:
                merged[key] = [c, s.canonical()]
        out = [(c, s) for c, s in merged.values() if abs(c) >= ZERO_AMP]
        if not out:
            raise ZeroProbabilityError("all branches cancelled")
        budget = self.branch_budget if budget is None else budget
        if len(out) > budget:
            raise BudgetExceededError(f"{len(out)} branches exceed the budget {budget}")
        return SuperposedState(out, budget)

    def to_vector(self) -> np.ndarray:
        """Dense vector (qubit 0 most significant); meant for small n."""
        if self.n > 16:
            raise ValueError("dense expansion limited to n <= 16")
        vec = np.zeros(2 ** self.n, dtype=complex)
        for c, s in self.branches:
            vec += c * s.to_vector()
        return vec

    def logical_view(self, max_qubits: int | None = None):
        from .logical import LogicalView

        return LogicalView.from_superposed(self, max_qubits=max_qubits)

    def __repr__(self) -> str:
        return f"SuperposedState(n={self.n}, K={self.K})"


# functional spellings ------------------------------------------------------------


def norm_squared(psi: SuperposedState) -> float:
    return psi.norm_squared()


def expectation(psi: SuperposedState, P: PauliOp) -> float:
    return psi.expectation(P)


def apply_clifford(psi: SuperposedState, gate: str, *qubits: int) -> SuperposedState:
    return psi.apply_clifford(gate, *qubits)


def apply_phase_gate(psi: SuperposedState, theta: float, q: int) -> SuperposedState:
    return psi.apply_phase_gate(theta, q)


def measure_pauli(psi: SuperposedState, P: PauliOp, postselect: int = 1):
    return psi.measure_pauli(P, postselect)


def dedup(psi: SuperposedState) -> SuperposedState:
    return psi.dedup()
