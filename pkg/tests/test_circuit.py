import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from magic_entropy import oracle
from magic_entropy.circuit import CircuitParseError, CircuitProgram, Instruction, execute, parse, render, run
from magic_entropy.ensembles import random_clifford_t_program, random_measurement_program
from magic_entropy.extract import nullity
from magic_entropy.groups import StabGroup
from magic_entropy.symplectic import PauliOp
from magic_entropy.tableau import ZeroProbabilityError


def test_parse_examples():
    prog = parse("qubits 2\nH 0\nCX 0 1")
    assert prog.n == 2 and [i.name for i in prog.instructions] == ["H", "CX"]
    prog = parse("qubits 1\nH 0\nT 0")
    assert prog.t_count == 1
    with pytest.raises(CircuitParseError) as e:
        parse("qubits 2\nH 5")
    assert e.value.line == 2


def test_parse_grammar_details():
    text = """
    # comment line
    QUBITS 4   # header
    h 0
    phase 0.785398163 3
    Mpp +X0*Z2*Y3 -
    mz 1
    tdg 2
    """
    prog = parse(text)
    names = [i.name for i in prog.instructions]
    assert names == ["H", "PHASE", "MPP", "MZ", "TDG"]
    mpp = prog.instructions[2]
    assert mpp.terms == (("X", 0), ("Z", 2), ("Y", 3)) and mpp.sign == -1 and mpp.op_sign == 1
    assert prog.instructions[3].sign is None
    assert prog.instructions[1].angle == 0.785398163
    assert prog.t_count == 2
    assert mpp.pauli(4) == PauliOp.from_string("XIZY")


@pytest.mark.parametrize("text,line", [
    ("H 0", 1),
    ("qubits 2\nFOO 1", 2),
    ("qubits 2\nPHASE abc 0", 2),
    ("qubits 2\nPHASE inf 0", 2),
    ("qubits 2\nCX 1 1", 2),
    ("qubits 2\n\nMPP +X0*Z0", 3),
    ("qubits 2\nMZ 0 ?", 2),
    ("qubits 0", 1),
    ("# nothing", 0),
])
def test_parse_errors_carry_line(text, line):
    with pytest.raises(CircuitParseError) as e:
        parse(text)
    assert e.value.line == line


_single = st.sampled_from(["H", "S", "SDG", "X", "Y", "Z", "T", "TDG"])


@st.composite
def programs(draw):
    n = draw(st.integers(1, 6))
    body = []
    for _ in range(draw(st.integers(0, 15))):
        kind = draw(st.integers(0, 4))
        if kind == 0 and n > 1:
            a, b = draw(st.lists(st.integers(0, n - 1), min_size=2, max_size=2, unique=True))
            body.append(Instruction(draw(st.sampled_from(["CX", "CZ", "SWAP"])), (a, b)))
        elif kind == 1:
            body.append(Instruction("PHASE", (draw(st.integers(0, n - 1)),),
                                    angle=draw(st.floats(-10, 10, allow_nan=False))))
        elif kind == 2:
            body.append(Instruction("MZ", (draw(st.integers(0, n - 1)),), sign=draw(st.sampled_from([None, 1, -1]))))
        elif kind == 3:
            qs = draw(st.lists(st.integers(0, n - 1), min_size=1, max_size=n, unique=True))
            terms = tuple((draw(st.sampled_from("XYZ")), q) for q in qs)
            body.append(Instruction("MPP", tuple(qs), sign=draw(st.sampled_from([None, 1, -1])), terms=terms,
                                    op_sign=draw(st.sampled_from([1, -1]))))
        else:
            body.append(Instruction(draw(_single), (draw(st.integers(0, n - 1)),)))
    return CircuitProgram(n, body)


@settings(max_examples=150, deadline=None)
@given(programs())
def test_render_round_trip(prog):
    text = render(prog)
    again = parse(text)
    assert again == prog
    assert render(again) == text


def test_run_examples():
    bell = run(parse("qubits 2\nH 0\nCX 0 1"))
    assert bell.K == 1
    assert StabGroup.of_state(bell.states[0]) == StabGroup.from_strings(["XX", "ZZ"])
    tp = run(parse("qubits 1\nH 0\nT 0"))
    ref = np.array([1, np.exp(1j * math.pi / 4)]) / math.sqrt(2)
    assert abs(abs(np.vdot(tp.to_vector(), ref)) - 1) < 1e-12
    prog = parse("qubits 4\nH 0\nCX 0 1\nCX 1 2\nCX 2 3\nT 0\nT 1\nMZ 2 +")
    psi = run(prog, check=True)
    assert psi.K <= 4
    dense = oracle.simulate_program(prog)
    assert abs(abs(np.vdot(psi.to_vector(), dense.amplitudes)) - 1) < 1e-12


def test_zero_probability_postselection():
    with pytest.raises(ZeroProbabilityError):
        execute(parse("qubits 1\nMZ 0 -"))


def test_seeded_sampling_is_reproducible():
    prog = parse("qubits 3\nH 0\nH 1\nT 1\nH 2\nMZ 0\nMPP X1*Z2\nMZ 2")
    a = execute(prog, seed=5)
    b = execute(prog, seed=5)
    assert a.outcomes == b.outcomes
    assert a.frame.coeffs == b.frame.coeffs and a.frame.tab.key() == b.frame.tab.key()
    outs = {tuple(execute(prog, seed=s).outcomes) for s in range(20)}
    assert len(outs) > 1


def test_random_runs_match_dense_and_nullity_bound():
    rng = np.random.default_rng(31)
    for i in range(40):
        n = int(rng.integers(1, 8))
        t = int(rng.integers(0, 4))
        if i % 2:
            prog = random_measurement_program(n, t, 25, 2, rng)
        else:
            prog = random_clifford_t_program(n, t, 25, rng)
        res = execute(prog, seed=i)
        dense = oracle.simulate_program(prog, outcomes=res.outcomes)
        psi = res.frame.to_superposed()
        assert abs(abs(np.vdot(psi.to_vector(), dense.amplitudes)) - 1) < 1e-10
        assert nullity(res.frame) <= 2 * prog.t_count
