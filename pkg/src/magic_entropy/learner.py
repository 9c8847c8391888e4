"""Stabilizer-group learning from simulated Bell difference samples.

Bell sampling on two copies returns r with probability
|<psi| sigma_r |psi*>|^2 / 2^n.  Differences of samples lie in the
normalizer of STAB(psi); the symplectic complement of their span therefore
contains STAB(psi) and equals it once enough samples are drawn.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .entropy import EntropyReport, as_view, entanglement_report
from .groups import StabGroup
from .oracle import MAX_SCAN_QUBITS, DenseState, OracleInfeasibleError, dense_of
from .symplectic import PauliOp, null_space, rref_ints, swap_halves

__all__ = [
    "SampleSet",
    "GroupRecovery",
    "bell_distribution",
    "bell_difference_sample",
    "recover_group",
    "learn_entropy",
]

VERIFY_TOL = 1e-6


@dataclass
class SampleSet:
    """Differences r_i ^ r_0 as 2n-bit integers (x bits low, z bits high)."""

    n: int
    shots: int
    records: list
    seed: int | None = None

    def as_strings(self) -> list[str]:
        return [format(r, f"0{2 * self.n}b")[::-1] for r in self.records]


@dataclass
class GroupRecovery:
    group: StabGroup
    candidate_rank: int
    failed: list = field(default_factory=list)

    @property
    def verified(self) -> bool:
        return not self.failed


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


def bell_distribution(psi) -> np.ndarray:
    """p[x, z] = |<psi| X^x Z^z |psi*>|^2 / 2^n over little-endian qubit masks."""
    st = dense_of(psi)
    n = st.n
    if n > MAX_SCAN_QUBITS:
        raise OracleInfeasibleError(f"Bell sampling simulation supports at most {MAX_SCAN_QUBITS} qubits")
    N = 2 ** n
    v = st.amplitudes / np.linalg.norm(st.amplitudes)
    v = v.reshape([2] * n).transpose(list(range(n))[::-1]).reshape(-1) if n else v
    b = np.arange(N)
    # <psi| X^x Z^z |psi*> = sum_b conj(psi[b ^ x]) (-1)^{z.b} conj(psi[b])
    f = np.conj(v[b[None, :] ^ b[:, None]]) * np.conj(v)[None, :]
    p = np.abs(_wht_rows(f)) ** 2 / N
    total = p.sum()
    if abs(total - 1) > 1e-10:
        raise AssertionError(f"Bell distribution sums to {total}")
    return p


def bell_difference_sample(psi, shots: int, seed: int | None = None) -> SampleSet:
    """Draw shots + 1 Bell samples and return the shots differences with the first."""
    if shots < 0:
        raise ValueError("shots must be nonnegative")
    p = bell_distribution(psi)
    N = p.shape[0]
    n = N.bit_length() - 1
    rng = np.random.default_rng(seed)
    flat = p.reshape(-1)
    draws = rng.choice(flat.size, size=shots + 1, p=flat / flat.sum())
    # flat index = x * N + z
    vecs = [(int(d) // N) | ((int(d) % N) << n) for d in draws]
    r0 = vecs[0]
    return SampleSet(n, shots, [r ^ r0 for r in vecs[1:]], seed)


def _expectation(psi, P: PauliOp) -> float:
    if isinstance(psi, DenseState):
        return float(psi.expectation(P).real / np.vdot(psi.amplitudes, psi.amplitudes).real)
    return as_view(psi).expectation(P)


def recover_group(samples: SampleSet, psi, tol: float = VERIFY_TOL) -> GroupRecovery:
    """Symplectic complement of the sampled span, pruned to verified generators."""
    n = samples.n
    span, _ = rref_ints([r for r in samples.records if r], 2 * n)
    if span:
        candidates = null_space([swap_halves(r, n) for r in span], 2 * n)
    else:
        candidates = [1 << i for i in range(2 * n)]
    candidates, _ = rref_ints(candidates, 2 * n)
    kept, failed = [], []
    for vec in candidates:
        P = PauliOp.from_vec(vec, n)
        val = _expectation(psi, P)
        if abs(val) >= 1 - tol:
            kept.append(P if val > 0 else P.negate())
        else:
            failed.append(P)
    return GroupRecovery(StabGroup.from_elements(n, kept), len(candidates), failed)


def learn_entropy(psi, A, shots: int, seed: int | None = None, renyi=(0.5, 2.0, 3.0)) -> EntropyReport:
    """Entropy report computed with a group learned from Bell difference samples."""
    samples = bell_difference_sample(psi, shots, seed)
    rec = recover_group(samples, psi)
    rep = entanglement_report(psi, A, renyi=renyi, group=rec.group)
    rep.diagnostics.update(
        shots=shots,
        seed=seed,
        learned_rank=rec.group.rank,
        candidate_rank=rec.candidate_rank,
        verified=rec.verified,
        failed_generators=[p.to_string() for p in rec.failed],
    )
    return rep
