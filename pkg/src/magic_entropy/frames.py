"""Single-tableau representation used for circuit execution.

A state is kept as sum_beta c_beta D_beta |phi>, where |phi> is the state of
one tableau and D_beta is the product of the destabilizer rows named by the
bitset beta.  These vectors are orthonormal, so norms and probabilities are
plain sums of |c|^2, Clifford gates cost one tableau update, and equal
branches merge automatically by key.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import BudgetExceededError, ZeroProbabilityError
from .superposition import DEFAULT_BRANCH_BUDGET, SuperposedState
from .symplectic import PauliOp, pauli_mul
from .tableau import StabTableau, pauli_phase_on

__all__ = ["FrameState"]

_I_POW = (1, 1j, -1, -1j)
ZERO_AMP = 1e-13


class FrameState:
    __slots__ = ("tab", "coeffs", "branch_budget")

    def __init__(self, tab: StabTableau, coeffs: dict[int, complex] | None = None,
                 branch_budget: int = DEFAULT_BRANCH_BUDGET):
        self.tab = tab
        self.coeffs = {0: 1.0 + 0j} if coeffs is None else dict(coeffs)
        self.branch_budget = branch_budget

    @classmethod
    def zero_state(cls, n: int, branch_budget: int = DEFAULT_BRANCH_BUDGET) -> "FrameState":
        return cls(StabTableau.zero_state(n), None, branch_budget)

    @property
    def n(self) -> int:
        return self.tab.n

    @property
    def K(self) -> int:
        return len(self.coeffs)

    def copy(self) -> "FrameState":
        return FrameState(self.tab.copy(), self.coeffs, self.branch_budget)

    def norm_squared(self) -> float:
        return float(sum(abs(c) ** 2 for c in self.coeffs.values()))

    def _normalize(self):
        nrm = math.sqrt(self.norm_squared())
        for b in self.coeffs:
            self.coeffs[b] /= nrm

    # -- gates (in place) -------------------------------------------------------
    def apply_clifford(self, gate: str, *qubits: int) -> "FrameState":
        self.tab.apply_gate(gate, *qubits)
        return self

    def apply_phase_gate(self, theta: float, q: int) -> "FrameState":
        quarter = theta / (math.pi / 2)
        if abs(quarter - round(quarter)) < 1e-12:
            gate = {0: None, 1: "S", 2: "Z", 3: "SDG"}[int(round(quarter)) % 4]
            return self if gate is None else self.apply_clifford(gate, q)
        n = self.n
        Zq = PauliOp.single(n, q, "Z")
        lam, w = self.tab.decompose(Zq)
        # Z_q D_beta = (-1)^{<Z_q, D_beta>} D_beta Z_q
        anti = 0
        for a in range(n):
            if (int(self.tab.x[a, q >> 6]) >> (q & 63)) & 1:
                anti |= 1 << a
        glob = cmath.exp(0.5j * theta)
        ca = glob * math.cos(theta / 2)
        cb = -1j * glob * math.sin(theta / 2) * _I_POW[w]
        out: dict[int, complex] = {}
        for beta, c in self.coeffs.items():
            out[beta] = out.get(beta, 0j) + c * ca
            sgn = -1 if (beta & anti).bit_count() & 1 else 1
            key = beta ^ lam
            out[key] = out.get(key, 0j) + c * cb * sgn
        self.coeffs = {b: c for b, c in out.items() if abs(c) >= ZERO_AMP}
        if len(self.coeffs) > self.branch_budget:
            raise BudgetExceededError(f"{len(self.coeffs)} branches exceed the budget {self.branch_budget}")
        return self

    # -- measurement -----------------------------------------------------------------
    def outcome_probability(self, P: PauliOp, sign: int) -> float:
        trial = self.copy()
        try:
            return trial.measure_pauli(P, sign)
        except ZeroProbabilityError:
            return 0.0

    def measure_pauli(self, P: PauliOp, sign: int = 1) -> float:
        """Project onto the sign eigenspace of P in place; returns the probability."""
        if not P.is_hermitian:
            raise ValueError("measured operator must be Hermitian")
        sign = 1 if sign >= 0 else -1
        tab = self.tab
        n = self.n
        beta_p, alpha_p = tab.anticommutation(P)
        comm = 0  # destabilizers anticommuting with P
        for a in np.flatnonzero(alpha_p):
            comm |= 1 << int(a)
        if not beta_p.any():
            _, w = tab.decompose(P)
            mu = 1 if w == 0 else -1
            kept = {b: c for b, c in self.coeffs.items()
                    if (mu * (-1 if (b & comm).bit_count() & 1 else 1)) == sign}
            prob = sum(abs(c) ** 2 for c in kept.values()) / self.norm_squared()
            if prob < 1e-12 or not kept:
                raise ZeroProbabilityError(f"outcome {sign:+d} of {P.to_string()} has probability 0")
            self.coeffs = kept
            self._normalize()
            return prob
        old_ops = {b: tab.destab_product(b) for b in self.coeffs}
        before = self.norm_squared()
        _, _, g = tab.project(P, sign)
        out: dict[int, complex] = {}
        r2 = 1 / math.sqrt(2)
        for b, c in self.coeffs.items():
            op = old_ops[b]
            if (b & comm).bit_count() & 1:
                op = pauli_mul(op, g)
            nb, w = tab.decompose(op)
            out[nb] = out.get(nb, 0j) + c * r2 * _I_POW[w]
        out = {b: c for b, c in out.items() if abs(c) >= ZERO_AMP}
        prob = sum(abs(c) ** 2 for c in out.values()) / before
        if prob < 1e-12:
            raise ZeroProbabilityError(f"outcome {sign:+d} of {P.to_string()} has probability {prob:.3g}")
        self.coeffs = out
        self._normalize()
        return prob

    def measure_sampled(self, P: PauliOp, rng) -> tuple[int, float]:
        p_plus = self.outcome_probability(P, 1)
        sign = 1 if rng.random() < p_plus else -1
        return sign, self.measure_pauli(P, sign)

    # -- conversions -------------------------------------------------------------------
    def expectation(self, P: PauliOp) -> float:
        beta, alpha = self.tab.anticommutation(P)
        bits = 0
        for a in np.flatnonzero(beta):
            bits |= 1 << int(a)
        comm = 0
        for a in np.flatnonzero(alpha):
            comm |= 1 << int(a)
        _, w = self.tab.decompose(P)
        total = 0j
        for b, c in self.coeffs.items():
            c2 = self.coeffs.get(b ^ bits)
            if c2 is None:
                continue
            sgn = -1 if (b & comm).bit_count() & 1 else 1
            total += c2.conjugate() * c * sgn
        total *= _I_POW[w]
        return float(total.real)

    def to_superposed(self) -> SuperposedState:
        """Branches D_beta|phi> written as canonical tableaus with exact phases."""
        phi = self.tab.canonical()
        out = []
        for b, c in sorted(self.coeffs.items()):
            t, w = pauli_phase_on(phi, self.tab.destab_product(b))
            out.append((c * w.to_complex(), t))
        return SuperposedState(out, max(self.branch_budget, len(out)))

    def logical_view(self, max_qubits: int | None = None):
        from .logical import LogicalView

        return LogicalView.from_frame(self, max_qubits=max_qubits)

    def __repr__(self) -> str:
        return f"FrameState(n={self.n}, K={self.K})"
