"""Line-oriented circuit programs: parsing, rendering and execution.

Format::

    # comment
    qubits 3
    H 0
    CX 0 1
    T 1
    PHASE 0.3 2
    MZ 2 +            # postselect outcome +1
    MPP -X0*Z2 -      # measure -X0 Z2, postselect -1; no sign = sample

Mnemonics are case-insensitive and qubits are 0-based.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .frames import FrameState
from .superposition import DEFAULT_BRANCH_BUDGET, SuperposedState
from .symplectic import PauliOp
from .tableau import GATE_ARITY, normalize_gate_name

__all__ = [
    "CircuitParseError",
    "Instruction",
    "CircuitProgram",
    "ExecutionResult",
    "parse",
    "render",
    "execute",
    "run",
    "NON_CLIFFORD",
]

NON_CLIFFORD = {"T": math.pi / 4, "TDG": -math.pi / 4}
_MPP_TERM = re.compile(r"([XYZxyz])(\d+)$")


class CircuitParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class Instruction:
    name: str
    qubits: tuple = ()
    angle: float | None = None
    sign: int | None = None  # postselected outcome for measurements
    terms: tuple = ()  # MPP factors as (letter, qubit)
    op_sign: int = 1  # leading sign of an MPP product

    @property
    def is_measurement(self) -> bool:
        return self.name in ("MZ", "MPP")

    @property
    def is_non_clifford(self) -> bool:
        if self.name in NON_CLIFFORD:
            return True
        if self.name == "PHASE":
            quarter = self.angle / (math.pi / 2)
            return abs(quarter - round(quarter)) >= 1e-12
        return False

    def pauli(self, n: int) -> PauliOp:
        if self.name == "MZ":
            return PauliOp.single(n, self.qubits[0], "Z")
        if self.name == "MPP":
            return PauliOp.from_sparse(n, self.terms, self.op_sign)
        raise ValueError(f"{self.name} is not a measurement")


@dataclass
class CircuitProgram:
    n: int
    instructions: list = field(default_factory=list)

    @property
    def t_count(self) -> int:
        return sum(ins.is_non_clifford for ins in self.instructions)

    def __len__(self) -> int:
        return len(self.instructions)


def _qubit(tok: str, n: int, line: int) -> int:
    try:
        q = int(tok)
    except ValueError:
        raise CircuitParseError(line, f"bad qubit index {tok!r}") from None
    if not 0 <= q < n:
        raise CircuitParseError(line, f"qubit {q} out of range for {n} qubits")
    return q


def _outcome(tokens: list[str], line: int) -> int | None:
    if not tokens:
        return None
    if len(tokens) > 1 or tokens[0] not in ("+", "-"):
        raise CircuitParseError(line, f"expected '+' or '-' after the measurement, got {' '.join(tokens)!r}")
    return 1 if tokens[0] == "+" else -1


def _parse_mpp(token: str, n: int, line: int) -> tuple[int, tuple]:
    sign = 1
    if token[:1] in "+-":
        sign = -1 if token[0] == "-" else 1
        token = token[1:]
    terms = []
    seen = set()
    for part in token.split("*"):
        m = _MPP_TERM.match(part)
        if not m:
            raise CircuitParseError(line, f"bad Pauli factor {part!r}")
        q = _qubit(m.group(2), n, line)
        if q in seen:
            raise CircuitParseError(line, f"qubit {q} repeated in product")
        seen.add(q)
        terms.append((m.group(1).upper(), q))
    return sign, tuple(terms)


def parse(text: str) -> CircuitProgram:
    prog: CircuitProgram | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        tokens = body.split()
        head = tokens[0].upper()
        if prog is None:
            if head != "QUBITS" or len(tokens) != 2:
                raise CircuitParseError(lineno, "first instruction must be 'qubits N'")
            try:
                n = int(tokens[1])
            except ValueError:
                raise CircuitParseError(lineno, f"bad qubit count {tokens[1]!r}") from None
            if n <= 0:
                raise CircuitParseError(lineno, "qubit count must be positive")
            prog = CircuitProgram(n)
            continue
        n = prog.n
        args = tokens[1:]
        if head == "QUBITS":
            raise CircuitParseError(lineno, "duplicate 'qubits' header")
        if head in NON_CLIFFORD:
            if len(args) != 1:
                raise CircuitParseError(lineno, f"{head} takes one qubit")
            ins = Instruction(head, (_qubit(args[0], n, lineno),))
        elif head == "PHASE":
            if len(args) != 2:
                raise CircuitParseError(lineno, "PHASE takes an angle and a qubit")
            try:
                theta = float(args[0])
            except ValueError:
                raise CircuitParseError(lineno, f"malformed angle {args[0]!r}") from None
            if not math.isfinite(theta):
                raise CircuitParseError(lineno, "angle must be finite")
            ins = Instruction("PHASE", (_qubit(args[1], n, lineno),), angle=theta)
        elif head == "MZ":
            if not args:
                raise CircuitParseError(lineno, "MZ needs a qubit")
            ins = Instruction("MZ", (_qubit(args[0], n, lineno),), sign=_outcome(args[1:], lineno))
        elif head == "MPP":
            if not args:
                raise CircuitParseError(lineno, "MPP needs a Pauli product")
            op_sign, terms = _parse_mpp(args[0], n, lineno)
            ins = Instruction("MPP", tuple(q for _, q in terms), sign=_outcome(args[1:], lineno),
                              terms=terms, op_sign=op_sign)
        else:
            try:
                name = normalize_gate_name(head)
            except ValueError:
                raise CircuitParseError(lineno, f"unknown mnemonic {tokens[0]!r}") from None
            arity = GATE_ARITY[name]
            if len(args) != arity:
                raise CircuitParseError(lineno, f"{name} takes {arity} qubit(s)")
            qs = tuple(_qubit(a, n, lineno) for a in args)
            if len(set(qs)) != len(qs):
                raise CircuitParseError(lineno, f"{name} operands must be distinct")
            ins = Instruction(name, qs)
        prog.instructions.append(ins)
    if prog is None:
        raise CircuitParseError(0, "missing 'qubits N' header")
    return prog


def render(program: CircuitProgram) -> str:
    lines = [f"qubits {program.n}"]
    for ins in program.instructions:
        if ins.name == "PHASE":
            lines.append(f"PHASE {ins.angle!r} {ins.qubits[0]}")
            continue
        if ins.name == "MPP":
            prod = "*".join(f"{l}{q}" for l, q in ins.terms)
            text = f"MPP {'-' if ins.op_sign < 0 else '+'}{prod}"
        else:
            text = " ".join([ins.name] + [str(q) for q in ins.qubits])
        if ins.sign is not None:
            text += " +" if ins.sign > 0 else " -"
        lines.append(text)
    return "\n".join(lines) + "\n"


@dataclass
class ExecutionResult:
    frame: FrameState
    outcomes: list  # one sign per measurement, in program order
    probabilities: list


def execute(program: CircuitProgram, branch_budget: int = DEFAULT_BRANCH_BUDGET, seed: int | None = None,
            on_step: Callable[[int, Instruction, FrameState], None] | None = None) -> ExecutionResult:
    """Run from |0...0> in the frame representation; sampled outcomes use ``seed``."""
    frame = FrameState.zero_state(program.n, branch_budget)
    rng = np.random.default_rng(seed)
    outcomes, probs = [], []
    for i, ins in enumerate(program.instructions):
        if ins.is_measurement:
            P = ins.pauli(program.n)
            if ins.sign is None:
                sign, prob = frame.measure_sampled(P, rng)
            else:
                sign, prob = ins.sign, frame.measure_pauli(P, ins.sign)
            outcomes.append(sign)
            probs.append(prob)
        elif ins.name in NON_CLIFFORD:
            frame.apply_phase_gate(NON_CLIFFORD[ins.name], ins.qubits[0])
        elif ins.name == "PHASE":
            frame.apply_phase_gate(ins.angle, ins.qubits[0])
        else:
            frame.apply_clifford(ins.name, *ins.qubits)
        if on_step is not None:
            on_step(i, ins, frame)
    return ExecutionResult(frame, outcomes, probs)


def run(program: CircuitProgram, branch_budget: int = DEFAULT_BRANCH_BUDGET, seed: int | None = None,
        check: bool = False) -> SuperposedState:
    """Execute and return the final state as a stabilizer superposition.

    With ``check`` the nullity of the output is compared with twice the
    number of non-Clifford gates.
    """
    res = execute(program, branch_budget, seed)
    if check:
        from .extract import nullity

        nu = nullity(res.frame)
        if nu > 2 * program.t_count:
            raise AssertionError(f"nullity {nu} exceeds 2t = {2 * program.t_count}")
    return res.frame.to_superposed()
