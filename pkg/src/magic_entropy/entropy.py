"""Entanglement entropy and spectrum from the logical algebra of a region.

The state's stabilizer group S defines a code.  Logical operators with a
representative supported on the region A generate an algebra, split into
symplectic pairs and a center.  The state restricted to that algebra is a
small density matrix; the remaining entropy is an integer number of bits
that only depends on S and A, read from a stabilizer reference state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import BudgetExceededError
from .groups import StabGroup
from .logical import LogicalView, walsh_hadamard
from .symplectic import (
    PauliOp,
    kernel_symplectic,
    pauli_mul,
    quotient_basis,
    rref_ints,
    symplectic_gram_schmidt,
)
from .tableau import StabTableau, subsystem_entropy_bits

__all__ = [
    "LogicalAlgebra",
    "AlgebraicState",
    "EntropyReport",
    "logical_generators",
    "logical_algebra_on_region",
    "reconstruct_logical_state",
    "algebraic_spectrum",
    "algebraic_entropy",
    "renyi_from_spectrum",
    "jacobi_eigvalsh",
    "area_term",
    "entanglement_report",
    "as_view",
    "MAX_ALGEBRA_QUBITS",
]

MAX_ALGEBRA_QUBITS = 12
NEG_EIG_TOL = 1e-9
ZERO_EIG = 1e-13  # roundoff floor; sqrt(1e-16) would already move S_1/2 by 1e-8
LN2 = math.log(2.0)
_I_POW = np.array([1, 1j, -1, -1j])


@dataclass
class LogicalAlgebra:
    """Pairs and center generating the logical operators supported on a region."""

    n: int
    region: tuple
    pairs: list
    center: list

    @property
    def p(self) -> int:
        return len(self.pairs)

    @property
    def c(self) -> int:
        return len(self.center)

    @property
    def m(self) -> int:
        return self.p + self.c

    def generators(self) -> list[PauliOp]:
        out = []
        for P, Q in self.pairs:
            out += [P, Q]
        return out + list(self.center)


@dataclass
class AlgebraicState:
    """Density matrix on p + c representation qubits (pairs first, center as Z slots)."""

    p: int
    c: int
    rho: np.ndarray

    @property
    def m(self) -> int:
        return self.p + self.c


@dataclass
class EntropyReport:
    n: int
    region: tuple
    nullity: int
    area_bits: int
    logical_entropy_bits: float
    von_neumann_bits: float
    renyi_bits: dict
    spectrum: list
    branch_count: int
    diagnostics: dict = field(default_factory=dict)

    def entropy(self, alpha: float = 1.0) -> float:
        if alpha == 1:
            return self.von_neumann_bits
        return self.renyi_bits[alpha]


# ---------------------------------------------------------------------------
# Algebra construction
# ---------------------------------------------------------------------------


def logical_generators(S: StabGroup) -> list[tuple[PauliOp, PauliOp]]:
    """nu symplectic pairs (X_i, Z_i) of logical operators for the code S."""
    n = S.n
    if S.rank == n:
        return []
    normalizer = kernel_symplectic(S.vecs, n) if S.rank else [1 << i for i in range(2 * n)]
    quotient = quotient_basis(S.vecs, normalizer, 2 * n)
    pairs, center = symplectic_gram_schmidt(quotient, n)
    if center or len(pairs) != S.nullity:
        raise AssertionError("logical operators do not pair up")
    return [(PauliOp.from_vec(a, n), PauliOp.from_vec(b, n)) for a, b in pairs]


def _region_columns(n: int, A: Sequence[int]) -> tuple[list[int], list[int]]:
    inside = sorted(set(A))
    outside = [q for q in range(n) if q not in set(inside)]
    return outside + [n + q for q in outside], inside + [n + q for q in inside]


def _supported_part(vecs: list[int], n: int, A: Sequence[int]) -> list[int]:
    """Basis of the elements of span(vecs) supported on A."""
    if not vecs:
        return []
    out_cols, in_cols = _region_columns(n, A)
    red, piv = rref_ints(vecs, 2 * n, out_cols + in_cols)
    inside = set(in_cols)
    return [r for r, p in zip(red, piv) if p in inside]


def logical_algebra_on_region(S: StabGroup, logicals, A: Iterable[int]) -> LogicalAlgebra:
    n = S.n
    A = tuple(sorted(set(A)))
    if any(not 0 <= q < n for q in A):
        raise ValueError("region index out of range")
    flat = []
    for item in logicals:
        flat += list(item) if isinstance(item, tuple) else [item]
    full = S.vecs + [p.vec for p in flat]
    in_A = _supported_part(full, n, A)
    stab_A = _supported_part(S.vecs, n, A)
    _, in_cols = _region_columns(n, A)
    quotient = quotient_basis(stab_A, in_A, 2 * n, in_cols)
    pairs, center = symplectic_gram_schmidt(quotient, n) if quotient else ([], [])
    return LogicalAlgebra(
        n,
        A,
        [(PauliOp.from_vec(a, n), PauliOp.from_vec(b, n)) for a, b in pairs],
        [PauliOp.from_vec(c, n) for c in center],
    )


# ---------------------------------------------------------------------------
# Reconstruction of the algebraic state
# ---------------------------------------------------------------------------


def as_view(psi, max_qubits: int | None = None) -> LogicalView:
    if isinstance(psi, LogicalView):
        return psi
    if isinstance(psi, StabTableau):
        return LogicalView.from_stabilizer(psi)
    return psi.logical_view(max_qubits=max_qubits)


def _tableau_image(view: LogicalView, P: PauliOp) -> PauliOp:
    """P written as i^w X^beta Z^alpha with X_a = destabilizer a, Z_a = stabilizer a."""
    beta, alpha = view.tab.anticommutation(P)
    b = 0
    for a in np.flatnonzero(beta):
        b |= 1 << int(a)
    al = 0
    for a in np.flatnonzero(alpha):
        al |= 1 << int(a)
    _, w = view.tab.decompose(P)
    return PauliOp(view.n, b, al, w)


def reconstruct_logical_state(psi, alg: LogicalAlgebra, max_qubits: int | None = None) -> AlgebraicState:
    """rho = 2^{-m} sum_g <Psi|g|Psi> rep(g) over the group generated by the algebra."""
    view = as_view(psi, max_qubits)
    p, c = alg.p, alg.c
    m = p + c
    if m > MAX_ALGEBRA_QUBITS:
        raise BudgetExceededError(f"algebra needs {m} representation qubits (cap {MAX_ALGEBRA_QUBITS})")
    gens = alg.generators()
    reps = []
    for i in range(p):
        reps += [PauliOp(m, 1 << i, 0, 0), PauliOp(m, 0, 1 << i, 0)]
    reps += [PauliOp(m, 0, 1 << (p + j), 0) for j in range(c)]
    phys = [_tableau_image(view, g) for g in gens]
    # build every element by doubling, same order on both sides
    el_phys = [PauliOp(view.n)]
    el_rep = [PauliOp(m)]
    for gp, gr in zip(phys, reps):
        el_phys = el_phys + [pauli_mul(e, gp) for e in el_phys]
        el_rep = el_rep + [pauli_mul(e, gr) for e in el_rep]
    k = view.k
    kmask = (1 << k) - 1
    N = 2 ** k
    idx = np.arange(N)
    spectra: dict[int, np.ndarray] = {}
    dim = 2 ** m
    rho = np.zeros((dim, dim), dtype=complex)
    b = np.arange(dim)
    for ep, er in zip(el_phys, el_rep):
        if ep.x >> k:
            continue  # leaves the code space of the view: expectation 0
        y = ep.x
        if y not in spectra:
            spectra[y] = walsh_hadamard(np.conj(view.psi[idx ^ y]) * view.psi)
        expval = _I_POW[ep.phase] * spectra[y][ep.z & kmask]
        if abs(expval) < 1e-15:
            continue
        # rho = 2^{-m} sum <g> rep(g)^dagger, rep(g)^dagger = conj(i^r) (-1)^{|x&z|} X^x Z^z
        coef = expval * np.conj(_I_POW[er.phase]) / dim
        if (er.x & er.z).bit_count() & 1:
            coef = -coef
        signs = 1 - 2 * (np.bitwise_count(b & er.z) & 1).astype(np.int64)
        rho[b ^ er.x, b] += coef * signs
    herm_err = np.max(np.abs(rho - rho.conj().T)) if dim else 0.0
    if herm_err > 1e-10:
        raise AssertionError(f"reconstructed state is not Hermitian ({herm_err:.2e})")
    tr = np.trace(rho).real
    if abs(tr - 1) > 1e-10:
        raise AssertionError(f"reconstructed state has trace {tr}")
    return AlgebraicState(p, c, 0.5 * (rho + rho.conj().T))


# ---------------------------------------------------------------------------
# Spectra and entropies
# ---------------------------------------------------------------------------


def jacobi_eigvalsh(H: np.ndarray, tol: float = 1e-13, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations (ascending)."""
    A = np.array(H, dtype=complex, copy=True)
    d = A.shape[0]
    if d <= 1:
        return np.real(np.diag(A)).copy()
    scale = max(np.linalg.norm(A), 1e-300)
    for _ in range(max_sweeps):
        off = math.sqrt(float(np.sum(np.abs(A) ** 2) - np.sum(np.abs(np.diag(A)) ** 2)))
        if off < tol * scale:
            break
        for pi in range(d - 1):
            for qi in range(pi + 1, d):
                apq = A[pi, qi]
                mag = abs(apq)
                if mag < 1e-300:
                    continue
                phase = apq / mag
                app, aqq = A[pi, pi].real, A[qi, qi].real
                tau = (aqq - app) / (2 * mag)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.sqrt(1 + tau * tau))
                cs = 1 / math.sqrt(1 + t * t)
                sn = t * cs
                # G acts on columns pi, qi; A <- G^H A G zeroes A[pi, qi]
                colp = A[:, pi].copy()
                colq = A[:, qi].copy()
                A[:, pi] = cs * colp - sn * np.conj(phase) * colq
                A[:, qi] = sn * phase * colp + cs * colq
                rowp = A[pi, :].copy()
                rowq = A[qi, :].copy()
                A[pi, :] = cs * rowp - sn * phase * rowq
                A[qi, :] = sn * np.conj(phase) * rowp + cs * rowq
                A[pi, qi] = 0
                A[qi, pi] = 0
    return np.sort(np.real(np.diag(A)))


def _clip_probabilities(vals: np.ndarray) -> np.ndarray:
    if vals.size and vals.min() < -NEG_EIG_TOL:
        raise ValueError(f"eigenvalue {vals.min():.3e} below the tolerance; state is not positive")
    vals = np.clip(vals, 0.0, 1.0)
    vals[vals < ZERO_EIG] = 0.0
    s = vals.sum()
    return vals / s if s > 0 else vals


def algebraic_spectrum(state: AlgebraicState, solver: str = "lapack") -> np.ndarray:
    """All 2^m eigenvalues (descending), block by block over the center slots."""
    p, c = state.p, state.c
    dim_p = 2 ** p
    vals = []
    for cbits in range(2 ** c):
        block_idx = np.arange(dim_p) | (cbits << p)
        block = state.rho[np.ix_(block_idx, block_idx)]
        if solver == "jacobi":
            vals.append(jacobi_eigvalsh(block))
        else:
            vals.append(np.linalg.eigvalsh(block))
    allv = np.concatenate(vals) if vals else np.ones(1)
    return np.sort(_clip_probabilities(allv))[::-1]


def renyi_from_spectrum(vals: np.ndarray, alpha: float) -> float:
    """Renyi entropy in bits; alpha = 1 is von Neumann, 0 Hartley, inf min-entropy."""
    if alpha < 0:
        raise ValueError("Renyi index must be nonnegative")
    vals = np.asarray(vals, dtype=float)
    pos = vals[vals > 0]
    if alpha == 1:
        return float(-np.sum(pos * np.log2(pos))) + 0.0
    if alpha == 0:
        return float(np.log2(np.count_nonzero(vals > 1e-12)))
    if math.isinf(alpha):
        return float(-np.log2(pos.max()))
    return float(np.log2(np.sum(pos ** alpha)) / (1 - alpha)) + 0.0


def algebraic_entropy(state: AlgebraicState, alpha: float = 1.0) -> float:
    if alpha < 0:
        raise ValueError("Renyi index must be nonnegative")
    return renyi_from_spectrum(algebraic_spectrum(state), alpha)


# ---------------------------------------------------------------------------
# Area term and reports
# ---------------------------------------------------------------------------


def _reference_state(S: StabGroup, logicals, reference) -> StabTableau:
    if isinstance(reference, StabTableau):
        for g in S.generators:
            if reference.expectation(g) != 1:
                raise ValueError("reference state is not stabilized by the code")
        return reference
    if reference not in ("Z", "X"):
        raise ValueError("reference must be 'Z', 'X' or a StabTableau")
    pick = 1 if reference == "Z" else 0
    extra = [pair[pick] for pair in logicals]
    return StabTableau.from_generators(list(S.generators) + extra)


def area_term(S: StabGroup, logicals, A: Iterable[int], reference="Z", alg: LogicalAlgebra | None = None) -> int:
    """S_A(phi) - S(rho_a(phi)) in bits for a stabilizer reference phi in the code."""
    A = tuple(sorted(set(A)))
    phi = _reference_state(S, logicals, reference)
    if alg is None:
        alg = logical_algebra_on_region(S, logicals, A)
    s_phi = subsystem_entropy_bits(phi, A)
    s_log = algebraic_entropy(reconstruct_logical_state(LogicalView.from_stabilizer(phi), alg))
    area = s_phi - s_log
    rounded = round(area)
    if abs(area - rounded) > 1e-9 or rounded < 0:
        raise AssertionError(f"area term {area} is not a nonnegative integer")
    return int(rounded)


def _group_spectrum(vals: np.ndarray, d_chi: int, total_dim: int) -> list[tuple[float, int]]:
    merged: list[list] = []
    zero_mult = 0
    for v in sorted((float(x) for x in vals), reverse=True):
        if v <= 1e-14:
            zero_mult += d_chi
            continue
        lam = v / d_chi
        if merged and abs(merged[-1][0] - lam) <= 1e-12 * max(1.0, lam) + 1e-15:
            merged[-1][1] += d_chi
        else:
            merged.append([lam, d_chi])
    zero_mult += total_dim - d_chi * len(vals)
    out = [(lam, mult) for lam, mult in merged]
    if zero_mult > 0:
        out.append((0.0, zero_mult))
    return out


def entanglement_report(psi, A: Iterable[int], renyi: Sequence[float] = (0.5, 2.0, 3.0),
                        group: StabGroup | None = None, max_logical_qubits: int | None = None,
                        reference="Z") -> EntropyReport:
    """Entropies and spectrum of region A for a state with low nullity."""
    view = as_view(psi, max_logical_qubits)
    n = view.n
    A = tuple(sorted(set(A)))
    if any(not 0 <= q < n for q in A):
        raise ValueError("region index out of range")
    if group is None:
        S = view.stabilizer_group()
    else:
        S = group
        for g in S.generators:
            if abs(view.expectation(g) - 1) > 1e-8:
                raise ValueError(f"{g.to_string()} does not stabilize the state")
    logicals = logical_generators(S)
    alg = logical_algebra_on_region(S, logicals, A)
    rho = reconstruct_logical_state(view, alg)
    vals = algebraic_spectrum(rho)
    area = area_term(S, logicals, A, reference=reference, alg=alg)
    s_log = renyi_from_spectrum(vals, 1.0)
    renyi_out = {}
    for a in renyi:
        a = float(a)
        renyi_out[a] = renyi_from_spectrum(vals, a) + area
    branch_count = len(getattr(psi, "branches", getattr(psi, "coeffs", [0])))
    return EntropyReport(
        n=n,
        region=A,
        nullity=S.nullity,
        area_bits=area,
        logical_entropy_bits=s_log,
        von_neumann_bits=s_log + area,
        renyi_bits=renyi_out,
        spectrum=_group_spectrum(vals, 2 ** area, 2 ** len(A)),
        branch_count=branch_count,
        diagnostics={
            "algebra_pairs": alg.p,
            "algebra_center": alg.c,
            "representation_qubits": alg.m,
            "logical_qubits": view.k,
            "stabilizer_rank": S.rank,
        },
    )
