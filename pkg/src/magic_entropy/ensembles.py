"""Random instances used by tests, the acceptance suite and benchmarks."""

from __future__ import annotations

import math

import numpy as np

from .circuit import CircuitProgram, Instruction
from .frames import FrameState
from .groups import StabGroup
from .symplectic import PauliOp
from .tableau import StabTableau

__all__ = [
    "random_clifford_t_program",
    "random_measurement_program",
    "layered_doped_program",
    "random_stabilizer_code",
    "random_codeword",
    "contiguous_half",
]

_ONE = ("H", "S", "SDG", "X", "Y", "Z")
_TWO = ("CX", "CZ", "SWAP")


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def _random_clifford(rng, n: int) -> Instruction:
    if n > 1 and rng.random() < 0.4:
        a, b = rng.choice(n, 2, replace=False)
        return Instruction(str(rng.choice(_TWO)), (int(a), int(b)))
    return Instruction(str(rng.choice(_ONE)), (int(rng.integers(n)),))


def random_clifford_t_program(n: int, t: int, depth: int = 30, seed=None) -> CircuitProgram:
    """depth random Clifford gates with t T/TDG gates at random positions."""
    rng = _rng(seed)
    body = [_random_clifford(rng, n) for _ in range(depth)]
    for _ in range(t):
        name = "T" if rng.random() < 0.75 else "TDG"
        body.insert(int(rng.integers(len(body) + 1)), Instruction(name, (int(rng.integers(n)),)))
    return CircuitProgram(n, body)


def random_measurement_program(n: int, t: int, depth: int = 30, measurements: int = 3, seed=None) -> CircuitProgram:
    """Clifford+T program with postselected product measurements of nonzero probability."""
    rng = _rng(seed)
    prog = random_clifford_t_program(n, t, depth, rng)
    for _ in range(measurements):
        prog.instructions.insert(int(rng.integers(len(prog.instructions) + 1)), None)
    frame = FrameState.zero_state(n)
    out = []
    for ins in prog.instructions:
        if ins is None:
            k = int(rng.integers(1, min(n, 3) + 1))
            qs = [int(q) for q in rng.choice(n, k, replace=False)]
            terms = tuple((str(rng.choice(["X", "Y", "Z"])), q) for q in qs)
            op_sign = 1 if rng.random() < 0.5 else -1
            P = PauliOp.from_sparse(n, terms, op_sign)
            p_plus = frame.outcome_probability(P, 1)
            if p_plus < 1e-9:
                sign = -1
            elif p_plus > 1 - 1e-9:
                sign = 1
            else:
                sign = 1 if rng.random() < 0.5 else -1
            frame.measure_pauli(P, sign)
            ins = Instruction("MPP", tuple(qs), sign=sign, terms=terms, op_sign=op_sign)
        elif ins.name in ("T", "TDG"):
            frame.apply_phase_gate(math.pi / 4 if ins.name == "T" else -math.pi / 4, ins.qubits[0])
        else:
            frame.apply_clifford(ins.name, *ins.qubits)
        out.append(ins)
    return CircuitProgram(n, out)


def layered_doped_program(n: int, t: int, layers: int = 8, seed=None) -> CircuitProgram:
    """Layers of random H/S on every qubit then CX/CZ on a random perfect matching; t T gates."""
    rng = _rng(seed)
    body: list[Instruction] = []
    for _ in range(layers):
        for q in range(n):
            body.append(Instruction(str(rng.choice(["H", "S"])), (q,)))
        perm = rng.permutation(n)
        for i in range(0, n - 1, 2):
            body.append(Instruction(str(rng.choice(["CX", "CZ"])), (int(perm[i]), int(perm[i + 1]))))
    for _ in range(t):
        body.insert(int(rng.integers(len(body) + 1)), Instruction("T", (int(rng.integers(n)),)))
    return CircuitProgram(n, body)


def _random_tableau(n: int, rng) -> StabTableau:
    tab = StabTableau.zero_state(n)
    for _ in range(4 * n * n + 8):
        ins = _random_clifford(rng, n)
        tab.apply_gate(ins.name, *ins.qubits)
    return tab


def random_stabilizer_code(n: int, nu: int, seed=None) -> tuple[StabGroup, StabTableau]:
    """Random code of rank n - nu; returns (group, tableau whose first nu rows are logical)."""
    rng = _rng(seed)
    tab = _random_tableau(n, rng)
    gens = tab.generators[nu:]
    return StabGroup(n, gens), tab


def random_codeword(tab: StabTableau, nu: int, seed=None) -> FrameState:
    """sum_x c_x D_x |tab> with random complex c over the first nu destabilizers."""
    rng = _rng(seed)
    c = rng.normal(size=2 ** nu) + 1j * rng.normal(size=2 ** nu)
    c /= np.linalg.norm(c)
    return FrameState(tab.copy(), {x: complex(c[x]) for x in range(2 ** nu)})


def contiguous_half(n: int, seed=None) -> tuple[int, ...]:
    rng = _rng(seed)
    start = int(rng.integers(n))
    return tuple(sorted((start + i) % n for i in range(n // 2)))
