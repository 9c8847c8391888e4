"""Maximal stabilizer group STAB(Psi) and stabilizer nullity.

Two procedures are provided.  ``logical`` compresses the state onto the code
space of its sign-matched common stabilizers and reads the remaining
stabilizers from the Pauli spectrum of the small logical vector.
``truth_vector`` classifies candidate Pauli vectors by their membership
pattern in the branch groups (and error-shifted pair sums), evaluates one
representative per class and enumerates only classes that can reach unit
expectation.
"""

from __future__ import annotations

import warnings
from typing import Sequence

from .errors import BudgetExceededError, TruthVectorBoundWarning
from .frames import FrameState
from .groups import StabGroup, common_subgroup
from .logical import UNIT_TOL, LogicalView
from .superposition import SuperposedState
from .symplectic import (
    PauliOp,
    null_space,
    pauli_mul,
    quotient_basis,
    reduce_against,
    rref_ints,
    swap_halves,
    symp_vec,
)
from .tableau import StabTableau, expectation_cross_exact, inner_product

__all__ = [
    "choose_error_operator",
    "maximal_stabilizer_group",
    "nullity",
    "PairExpansion",
    "DEFAULT_CANDIDATE_BUDGET",
]

DEFAULT_CANDIDATE_BUDGET = 2 ** 20


def _min_solution(rows: list[int], rhs: list[int], nvars: int) -> int | None:
    """Smallest integer u with popcount(row & u) = rhs (mod 2) for all rows."""
    aug = [r | (b << nvars) for r, b in zip(rows, rhs)]
    red, piv = rref_ints(aug, nvars + 1) if aug else ([], [])
    if nvars in piv:
        return None
    u = 0
    for r, p in zip(red, piv):
        if (r >> nvars) & 1:
            u |= 1 << p
    mask = (1 << nvars) - 1
    free = null_space([r & mask for r in red], nvars)
    if free:
        # pivots on the highest bits, so clearing them top-down minimizes u
        fr, fp = rref_ints(free, nvars, list(range(nvars - 1, -1, -1)))
        for r, p in sorted(zip(fr, fp), key=lambda t: -t[1]):
            if (u >> p) & 1:
                u ^= r
    return u


def choose_error_operator(s_i: StabTableau, s_j: StabTableau, S0_primed: Sequence[PauliOp] | None = None) -> PauliOp:
    """Pauli E with <s_i|E|s_j> != 0; identity when the states already overlap.

    E anticommutes exactly with the intersection elements whose signs differ
    and commutes with the rest of both groups; among all such E the one with
    the smallest symplectic integer (x | z << n) is returned.
    """
    n = s_i.n
    if not inner_product(s_i, s_j).is_zero:
        return PauliOp(n)
    gi, gj = StabGroup.of_state(s_i), StabGroup.of_state(s_j)
    Vi, Vj = gi.vecs, gj.vecs
    inter = null_space(null_space(Vi, 2 * n) + null_space(Vj, 2 * n), 2 * n)
    inter, _ = rref_ints(inter, 2 * n)
    rows, rhs = [], []
    for u in inter:
        p = PauliOp.from_vec(u, n)
        rows.append(swap_halves(u, n))
        rhs.append(int(gi.sign_of(p) != gj.sign_of(p)))
    for extra in (quotient_basis(inter, Vi, 2 * n), quotient_basis(inter, Vj, 2 * n)):
        for u in extra:
            rows.append(swap_halves(u, n))
            rhs.append(0)
    sol = _min_solution(rows, rhs, 2 * n)
    if sol is None:
        raise AssertionError("no error operator satisfies the constraints")
    E = PauliOp.from_vec(sol, n)
    if S0_primed is not None:
        for g in S0_primed:
            if symp_vec(g.vec, E.vec, n) == 0:
                raise AssertionError(f"error operator commutes with mismatched {g}")
    if inner_product(s_i, s_j.copy().apply_pauli(E)).is_zero:
        raise AssertionError("error operator failed to create overlap")
    return E


# ---------------------------------------------------------------------------
# Two-branch closed forms
# ---------------------------------------------------------------------------


class PairExpansion:
    """Expectations of a|s1> + b|s2> from the two-branch density expansion.

    Every Pauli with a cross term is written P = eps * g1 E g2 with signed
    g1 in S1, g2 in S2; then <s1|P|s2> = eps <s1|E|s2> and no further
    overlaps are needed.
    """

    def __init__(self, psi: SuperposedState):
        if psi.K != 2:
            raise ValueError("closed forms need exactly two branches")
        (self.a, self.s1), (self.b, self.s2) = psi.branches
        n = self.n = psi.n
        self.E = choose_error_operator(self.s1, self.s2)
        self.ovE = expectation_cross_exact(self.s1, self.E, self.s2).to_complex()
        self.g1 = self.s1.generators
        self.g2 = self.s2.generators
        tagged = [g.vec | (1 << (2 * n + i)) for i, g in enumerate(self.g1 + self.g2)]
        self._red, self._piv = rref_ints(tagged, 4 * n, list(range(2 * n)))

    def cross(self, P: PauliOp) -> complex:
        """<s1|P|s2>."""
        n = self.n
        target = P.vec ^ self.E.vec
        r = reduce_against(target, self._red, self._piv)
        if r & ((1 << (2 * n)) - 1):
            return 0j
        tags = r >> (2 * n)
        g1 = PauliOp(n)
        g2 = PauliOp(n)
        for i in range(n):
            if (tags >> i) & 1:
                g1 = pauli_mul(g1, self.g1[i])
            if (tags >> (n + i)) & 1:
                g2 = pauli_mul(g2, self.g2[i])
        Q = pauli_mul(pauli_mul(g1, self.E), g2)
        eps = (1, 1j, -1, -1j)[(P.phase - Q.phase) & 3]
        return eps * self.ovE

    def expectation(self, P: PauliOp) -> float:
        d1 = self.s1.expectation(P)
        d2 = self.s2.expectation(P)
        val = abs(self.a) ** 2 * d1 + abs(self.b) ** 2 * d2
        val += 2 * (self.a.conjugate() * self.b * self.cross(P)).real
        return float(val)

    def class_values(self) -> dict[str, float]:
        """Named coefficient values of the expansion classes."""
        a2, b2 = abs(self.a) ** 2, abs(self.b) ** 2
        z = self.a.conjugate() * self.b * self.ovE
        if self.E.x == 0 and self.E.z == 0:
            return {
                "S1": a2 + 2 * z.real,
                "S2": b2 + 2 * z.real,
                "cross_commuting": 2 * z.real,
                "cross_anticommuting": -2 * z.imag,
            }
        return {
            "S0_matched": a2 + b2,
            "S0_mismatched": a2 - b2,
            "S1": a2,
            "S2": b2,
            "cross_commuting": 2 * z.real,
            "cross_anticommuting": -2 * z.imag,
        }


# ---------------------------------------------------------------------------
# Truth-vector procedure
# ---------------------------------------------------------------------------


def _truth_vector_group(psi: SuperposedState, budget: int, tol: float) -> StabGroup:
    n, K = psi.n, psi.K
    states = psi.states
    amps = [abs(c) for c, _ in psi.branches]
    V = [rref_ints([g.vec for g in s.generators], 2 * n) for s in states]
    pair_keys = [(i, j) for i in range(K) for j in range(i, K)]
    W, E, mag = {}, {}, {}
    for i, j in pair_keys:
        if i == j:
            W[i, j] = V[i]
            E[i, j] = 0
            mag[i, j] = 1.0
            continue
        W[i, j] = rref_ints(V[i][0] + V[j][0], 2 * n)
        E[i, j] = choose_error_operator(states[i], states[j]).vec
        mag[i, j] = 2.0 ** (-(len(W[i, j][0]) - n) / 2)
    span = [r for Vi in V for r in Vi[0]] + [e for e in E.values() if e]
    basis, _ = rref_ints(span, 2 * n)
    D = len(basis)
    if 2 ** D > budget:
        raise BudgetExceededError(
            f"candidate space has 2^{D} vectors, above the budget {budget}; use the oracle scan for small n"
        )
    classes: dict[int, list[int]] = {}
    v = 0
    for step in range(2 ** D):
        if step:
            v ^= basis[(step & -step).bit_length() - 1]
        tv = 0
        for bit, key in enumerate(pair_keys):
            red, piv = W[key]
            if reduce_against(v ^ E[key], red, piv) == 0:
                tv |= 1 << bit
        classes.setdefault(tv, []).append(v)
    if len(classes) > 2 ** (K * K / 2):
        warnings.warn(f"{len(classes)} truth-vector classes exceed 2^(K^2/2)", TruthVectorBoundWarning)
    pair = PairExpansion(psi) if K == 2 else None

    def value(vec: int) -> float:
        P = PauliOp.from_vec(vec, n)
        return pair.expectation(P) if pair is not None else psi.expectation(P)

    found = []
    for tv, members in classes.items():
        if tv == 0:
            continue
        bound = 0.0
        for bit, (i, j) in enumerate(pair_keys):
            if (tv >> bit) & 1:
                bound += (1 if i == j else 2) * amps[i] * amps[j] * mag[i, j]
        rep = value(members[0])
        if abs(rep) < 1 - tol and bound < 1 - tol:
            continue
        for vec in members:
            val = rep if vec == members[0] else value(vec)
            if abs(abs(val) - 1) <= tol:
                found.append(PauliOp.from_vec(vec, n, 1 if val > 0 else -1))
    G = StabGroup.from_elements(n, found)
    if len(found) != 2 ** G.rank:
        raise AssertionError("unit-expectation operators do not form a group")
    for g in G.generators:
        if abs(value(g.vec) * (1 if g.sign > 0 else -1) - 1) > tol:
            raise AssertionError(f"generator {g} failed verification")
    return G


# ---------------------------------------------------------------------------
# Entry points
# ---------------------------------------------------------------------------


def _as_view(psi, max_qubits: int | None) -> LogicalView:
    if isinstance(psi, LogicalView):
        return psi
    if isinstance(psi, StabTableau):
        return LogicalView.from_stabilizer(psi)
    return psi.logical_view(max_qubits=max_qubits)


def maximal_stabilizer_group(psi, method: str = "auto", budget: int = DEFAULT_CANDIDATE_BUDGET,
                             tol: float = UNIT_TOL, max_logical_qubits: int | None = None) -> tuple[StabGroup, int]:
    """Return (STAB(psi), nullity).

    ``psi`` may be a SuperposedState, FrameState, LogicalView or StabTableau.
    ``method`` is ``logical``, ``truth_vector`` or ``auto`` (logical first,
    truth vectors when the logical vector would exceed its qubit cap).
    """
    if method not in ("auto", "logical", "truth_vector"):
        raise ValueError(f"unknown method {method!r}")
    if isinstance(psi, SuperposedState):
        nrm = psi.norm_squared()
        if abs(nrm - 1) > 1e-8:
            raise ValueError(f"state is not normalized (norm^2 = {nrm})")
    if method == "truth_vector":
        if isinstance(psi, FrameState):
            psi = psi.to_superposed()
        if isinstance(psi, StabTableau):
            psi = SuperposedState.from_stabilizer(psi)
        if not isinstance(psi, SuperposedState):
            raise TypeError("truth vectors need a branch decomposition")
        G = _truth_vector_group(psi, budget, tol)
        return G, G.nullity
    try:
        view = _as_view(psi, max_logical_qubits)
    except BudgetExceededError:
        if method == "logical" or not isinstance(psi, SuperposedState):
            raise
        G = _truth_vector_group(psi, budget, tol)
        return G, G.nullity
    G = view.stabilizer_group(tol)
    return G, G.nullity


def nullity(psi, **kw) -> int:
    return maximal_stabilizer_group(psi, **kw)[1]


def sign_matched_common_group(psi: SuperposedState) -> StabGroup:
    return common_subgroup(psi.states)[0]
