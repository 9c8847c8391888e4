"""Compression of a state onto the code space of some of its stabilizers.

A view holds a tableau whose stabilizer rows ``k..n-1`` stabilize the state
and a vector ``psi`` of length 2^k with

    |Psi> = sum_x psi[x] D_x |tab>,   x a k-bit string (bit j = logical qubit j).

Destabilizer row j acts as logical X_j and stabilizer row j as logical Z_j,
so any operator commuting with rows ``k..n-1`` becomes a k-qubit Pauli.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceededError
from .groups import StabGroup, common_subgroup
from .symplectic import (
    PauliOp,
    gf2_inverse,
    ints_to_words,
    pauli_mul,
    rref_ints,
    reduce_against,
)
from .tableau import ExactOverlap, StabTableau, inner_product, pauli_phase_on

__all__ = ["LogicalView", "walsh_hadamard", "DEFAULT_MAX_LOGICAL_QUBITS"]

DEFAULT_MAX_LOGICAL_QUBITS = 16
UNIT_TOL = 1e-8
_I_POW = np.array([1, 1j, -1, -1j])


def walsh_hadamard(a: np.ndarray) -> np.ndarray:
    """Unnormalized transform along the last axis: out[s] = sum_x (-1)^{s.x} a[x]."""
    a = np.array(a, dtype=np.result_type(a.dtype, np.float64), copy=True)
    N = a.shape[-1]
    h = 1
    lead = a.shape[:-1]
    while h < N:
        v = a.reshape(*lead, N // (2 * h), 2, h)
        x = v[..., 0, :].copy()
        y = v[..., 1, :]
        v[..., 0, :] = x + y
        v[..., 1, :] = x - y
        h *= 2
    return a


def _little_from_big(vec: np.ndarray, k: int) -> np.ndarray:
    """Reindex a big-endian vector (qubit 0 most significant) to bit j = qubit j."""
    if k == 0:
        return vec.copy()
    return vec.reshape([2] * k).transpose(list(range(k))[::-1]).reshape(-1)


@dataclass
class LogicalAction:
    """P acts on the view as i^w X^y Z^zmask on the k logical qubits."""

    y: int
    zmask: int
    w: int


class LogicalView:
    __slots__ = ("tab", "k", "psi")

    def __init__(self, tab: StabTableau, k: int, psi: np.ndarray):
        psi = np.asarray(psi, dtype=complex)
        if psi.shape != (2 ** k,):
            raise ValueError("logical vector has the wrong length")
        self.tab = tab
        self.k = k
        self.psi = psi

    @property
    def n(self) -> int:
        return self.tab.n

    # -- constructors ----------------------------------------------------------------
    @classmethod
    def from_stabilizer(cls, s: StabTableau) -> "LogicalView":
        return cls(s.copy(), 0, np.ones(1, dtype=complex))

    @classmethod
    def from_frame(cls, frame, max_qubits: int | None = None) -> "LogicalView":
        """Change the destabilizer basis so the occupied frames span the low bits."""
        cap = DEFAULT_MAX_LOGICAL_QUBITS if max_qubits is None else max_qubits
        tab = frame.tab
        n = tab.n
        betas = sorted(frame.coeffs)
        ref = betas[0]
        diffs = [b ^ ref for b in betas[1:]]
        basis, piv = rref_ints(diffs, n) if diffs else ([], [])
        k = len(basis)
        if k > cap:
            raise BudgetExceededError(f"{k} logical qubits exceed the cap {cap}")
        pivset = set(piv)
        Bd = list(basis) + [1 << a for a in range(n) if a not in pivset]
        inv = gf2_inverse(Bd, n)
        # Ba = (Bd^{-1})^T, so Bd_r . Ba_s = delta_rs
        Ba = [0] * n
        for i, row in enumerate(inv):
            for j in range(n):
                if (row >> j) & 1:
                    Ba[j] |= 1 << i
        dests = [tab.destab_product(v) for v in Bd]
        stabs = [tab.stab_product(v) for v in Ba]
        # the common high part of every frame becomes a sign flip of code rows
        for r in range(k, n):
            if (ref & Ba[r]).bit_count() & 1:
                stabs[r] = stabs[r].negate()
        rows = dests + stabs
        x = ints_to_words([p.x for p in rows], n)
        z = ints_to_words([p.z for p in rows], n)
        ph = np.array([p.phase for p in rows], dtype=np.uint8)
        new_tab = StabTableau(n, x, z, ph)
        psi = np.zeros(2 ** k, dtype=complex)
        for b, c in frame.coeffs.items():
            low = 0
            for r in range(k):
                if (b & Ba[r]).bit_count() & 1:
                    low |= 1 << r
            psi[low] += c
        return cls(new_tab, k, psi)

    @classmethod
    def from_superposed(cls, state, max_qubits: int | None = None, group: StabGroup | None = None) -> "LogicalView":
        """Compress branches onto the sign-matched common subgroup (or a given one)."""
        cap = DEFAULT_MAX_LOGICAL_QUBITS if max_qubits is None else max_qubits
        n = state.n
        states = state.states
        G0 = common_subgroup(states)[0] if group is None else group
        k = n - G0.rank
        if k > cap:
            raise BudgetExceededError(f"{k} logical qubits exceed the cap {cap}")
        # extend G0 by rows of the first branch to a full stabilizer group
        red, piv = rref_ints(G0.vecs, 2 * n)
        extra = []
        for g in states[0].generators:
            if reduce_against(g.vec, red, piv):
                extra.append(g)
                red, piv = rref_ints(G0.vecs + [e.vec for e in extra], 2 * n)
        tab = StabTableau.from_ordered_generators(extra + list(G0.generators))
        view = cls(tab, k, np.zeros(2 ** k, dtype=complex))
        tab_c = tab.canonical()
        psi = np.zeros(2 ** k, dtype=complex)
        for c, s in state.branches:
            vec, omega = view._branch_vector(s, tab_c)
            psi += c * omega * vec
        view.psi = psi
        return view

    def _branch_vector(self, s: StabTableau, tab_c: StabTableau):
        """Logical vector of a stabilizer branch and its exact phase against the view."""
        k = self.k
        if k == 0:
            ov = inner_product(tab_c, s)
            if ov.is_zero or ov.d != 0:
                raise ValueError("branch differs from the fully stabilized view state")
            return np.ones(1, dtype=complex), ov.to_complex()
        ops = []
        for g in s.generators:
            act = self.logical_action(g)
            if act is None:
                raise ValueError("branch is not in the code space of the chosen group")
            if act.y == 0 and act.zmask == 0:
                if act.w != 0:
                    raise ValueError("branch has the wrong sign on a code stabilizer")
                continue
            ops.append(PauliOp(k, act.y, act.zmask, act.w))
        lg = StabGroup.from_elements(k, ops)
        ltab = StabTableau.from_generators(list(lg.generators))
        vec = _little_from_big(ltab.to_vector(), k)
        xstar = ltab.quad_form().b0
        # <tab| D_x* |s> = omega * vec[x*]
        t, w = pauli_phase_on(tab_c, self.tab.destab_product(xstar))
        ov = inner_product(t, s) * w.conjugate()
        if ov.is_zero:
            raise AssertionError("branch has no overlap with its own logical image")
        omega = ExactOverlap(False, ov.d - ltab.quad_form().d, ov.m)
        if omega.d != 0:
            raise AssertionError("logical image has the wrong norm")
        return vec, omega.to_complex()

    # -- operators ------------------------------------------------------------------------
    def logical_action(self, P: PauliOp) -> LogicalAction | None:
        """Logical image of P, or None if P moves the state out of the code space."""
        beta, alpha = self.tab.anticommutation(P)
        k = self.k
        if beta[k:].any():
            return None
        y = 0
        for a in np.flatnonzero(beta):
            y |= 1 << int(a)
        zm = 0
        for a in np.flatnonzero(alpha[:k]):
            zm |= 1 << int(a)
        _, w = self.tab.decompose(P)
        return LogicalAction(y, zm, w)

    def lift(self, y: int, zmask: int, sign: int = 1) -> PauliOp:
        """Physical Hermitian operator acting as sign * i^{|y&z|} X^y Z^z on the logical qubits."""
        op = pauli_mul(self.tab.destab_product(y), self.tab.stab_product(zmask))
        k = (y & zmask).bit_count() + (0 if sign > 0 else 2)
        return op.times_phase(k)

    def logical_expectation(self, y: int, zmask: int, w: int) -> complex:
        """<psi| i^w X^y Z^z |psi>."""
        idx = np.arange(2 ** self.k)
        signs = 1 - 2 * (np.bitwise_count(idx & zmask) & 1).astype(np.int64)
        val = np.vdot(self.psi[idx ^ y], signs * self.psi)
        return complex(_I_POW[w & 3] * val)

    def expectation(self, P: PauliOp) -> float:
        act = self.logical_action(P)
        if act is None:
            return 0.0
        return float(self.logical_expectation(act.y, act.zmask, act.w).real)

    def norm_squared(self) -> float:
        return float(np.vdot(self.psi, self.psi).real)

    # -- stabilizers --------------------------------------------------------------------------
    def logical_stabilizers(self, tol: float = UNIT_TOL) -> list[tuple[int, int, int]]:
        """All (y, z, sign) with <sign * i^{|y&z|} X^y Z^z> = 1 on the logical vector."""
        k = self.k
        N = 2 ** k
        amp = np.abs(self.psi)
        spec = walsh_hadamard(amp)
        auto = walsh_hadamard(spec * spec) / N
        found = []
        idx = np.arange(N)
        for y in np.flatnonzero(auto >= 1 - tol):
            y = int(y)
            f = np.conj(self.psi[idx ^ y]) * self.psi
            F = walsh_hadamard(f)
            # F is indexed by the Z-mask; the Hermitian phase is i^{|y & z|}
            herm = _I_POW[np.bitwise_count(y & idx).astype(np.int64) % 4]
            vals = (herm * F).real
            for zm in np.flatnonzero(np.abs(vals) >= 1 - tol):
                found.append((y, int(zm), 1 if vals[zm] > 0 else -1))
        return found

    def stabilizer_group(self, tol: float = UNIT_TOL) -> StabGroup:
        """STAB of the viewed state: code stabilizers plus lifted logical ones."""
        n, k = self.n, self.k
        code = [self.tab.row(n + r) for r in range(k, n)]
        lifted = [self.lift(y, z, s) for y, z, s in self.logical_stabilizers(tol) if y or z]
        return StabGroup.from_elements(n, code + lifted)

    def __repr__(self) -> str:
        return f"LogicalView(n={self.n}, k={self.k})"
