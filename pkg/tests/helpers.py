"""Shared builders for tests."""

import math

import numpy as np

from magic_entropy import oracle
from magic_entropy.frames import FrameState
from magic_entropy.superposition import SuperposedState
from magic_entropy.symplectic import PauliOp
from magic_entropy.tableau import StabTableau

ONE_QUBIT = ["H", "S", "SDG", "X", "Y", "Z"]
TWO_QUBIT = ["CX", "CZ", "SWAP"]

CODE412 = ["XXXX", "ZIZI", "IZIZ"]

ACCEPTANCE_LINES: list[str] = []


def report_criterion(number, title, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number} ({title}): {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok
CODE52 = ["XZZXI", "IXZZX", "XIXZZ"]


def random_gates(rng, n, depth):
    out = []
    for _ in range(depth):
        if n > 1 and rng.random() < 0.4:
            a, b = rng.choice(n, 2, replace=False)
            out.append((str(rng.choice(TWO_QUBIT)), (int(a), int(b))))
        else:
            out.append((str(rng.choice(ONE_QUBIT)), (int(rng.integers(n)),)))
    return out


def random_tableau(rng, n, depth=None):
    tab = StabTableau.zero_state(n)
    dense = oracle.DenseState.zero_state(n)
    for g, qs in random_gates(rng, n, depth or 6 * n + 4):
        tab.apply_gate(g, *qs)
        dense.apply_gate(g, *qs)
    return tab, dense.normalized()


def random_frame(rng, n, t, depth=25, measure=0.0):
    """Frame state and matching dense state after a random Clifford+T(+measurement) run."""
    fr = FrameState.zero_state(n)
    dense = oracle.DenseState.zero_state(n)
    gates = random_gates(rng, n, depth)
    slots = set(rng.choice(len(gates) + t, t, replace=False).tolist()) if t else set()
    it = iter(gates)
    for step in range(len(gates) + t):
        if step in slots:
            q = int(rng.integers(n))
            fr.apply_phase_gate(math.pi / 4, q)
            dense.apply_gate("T", q)
            continue
        g, qs = next(it)
        fr.apply_clifford(g, *qs)
        dense.apply_gate(g, *qs)
        if measure and rng.random() < measure:
            x, z = int(rng.integers(2 ** n)), int(rng.integers(2 ** n))
            if x or z:
                P = PauliOp.hermitian(n, x, z)
                s = 1 if rng.random() < 0.5 else -1
                if fr.outcome_probability(P, s) > 1e-9:
                    fr.measure_pauli(P, s)
                    dense.project(P, s)
    return fr, dense.normalized()


def code412_state(c1, c2):
    br = []
    if abs(c1) > 0:
        br.append((c1, CODE412 + ["ZZII"]))
    if abs(c2) > 0:
        br.append((c2, CODE412 + ["-ZZII"]))
    return SuperposedState.from_strings(br)


def dense_expectation(vec, P):
    return float(np.vdot(vec, P.to_matrix() @ vec).real)


def oracle_group(state):
    return oracle.stab_from_scan(oracle.pauli_scan(oracle.dense_of(state)))
