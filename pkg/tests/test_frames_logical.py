import math

import numpy as np
import pytest

from helpers import code412_state, oracle_group, random_frame
from magic_entropy import oracle
from magic_entropy.errors import BudgetExceededError
from magic_entropy.frames import FrameState
from magic_entropy.logical import LogicalView, walsh_hadamard
from magic_entropy.symplectic import PauliOp
from magic_entropy.tableau import StabTableau, ZeroProbabilityError


def test_walsh_hadamard_matches_matrix():
    rng = np.random.default_rng(0)
    for k in range(0, 5):
        a = rng.normal(size=2 ** k) + 1j * rng.normal(size=2 ** k)
        H = np.array([[(-1) ** (bin(i & j).count("1")) for j in range(2 ** k)] for i in range(2 ** k)])
        assert np.allclose(walsh_hadamard(a), H @ a)


def test_frame_t_on_plus():
    fr = FrameState.zero_state(1).apply_clifford("H", 0).apply_phase_gate(math.pi / 4, 0)
    assert fr.K == 2
    assert abs(fr.expectation(PauliOp.from_string("X")) - math.cos(math.pi / 4)) < 1e-14
    assert abs(fr.expectation(PauliOp.from_string("Y")) - math.sin(math.pi / 4)) < 1e-14
    assert abs(fr.expectation(PauliOp.from_string("Z"))) < 1e-14


def test_frame_postselection_errors():
    fr = FrameState.zero_state(2)
    assert fr.outcome_probability(PauliOp.from_string("ZI"), -1) == 0.0
    with pytest.raises(ZeroProbabilityError):
        fr.measure_pauli(PauliOp.from_string("ZI"), -1)
    with pytest.raises(ValueError):
        fr.measure_pauli(PauliOp(2, 1, 1, 0), 1)


def test_frame_budget():
    fr = FrameState.zero_state(3, branch_budget=2)
    for q in range(3):
        fr.apply_clifford("H", q)
    fr.apply_phase_gate(math.pi / 4, 0)
    with pytest.raises(BudgetExceededError):
        fr.apply_phase_gate(math.pi / 4, 1)


def test_frames_and_views_match_dense():
    rng = np.random.default_rng(21)
    for _ in range(50):
        n = int(rng.integers(1, 7))
        t = int(rng.integers(0, 4))
        fr, dense = random_frame(rng, n, t, depth=20, measure=0.15)
        sup = fr.to_superposed()
        assert abs(abs(np.vdot(sup.to_vector(), dense.amplitudes)) - 1) < 1e-10
        lv1, lv2 = fr.logical_view(), sup.logical_view()
        assert lv1.k <= t and abs(lv1.norm_squared() - 1) < 1e-10
        for _ in range(8):
            P = PauliOp.hermitian(n, int(rng.integers(2 ** n)), int(rng.integers(2 ** n)))
            ref = dense.expectation(P).real
            for v in (fr.expectation(P), lv1.expectation(P), lv2.expectation(P), sup.expectation(P)):
                assert abs(v - ref) < 1e-10
        G = oracle_group(sup)
        assert lv1.stabilizer_group() == G and lv2.stabilizer_group() == G


def test_view_of_stabilizer_state():
    tab = StabTableau.from_strings(["XX", "ZZ"])
    lv = LogicalView.from_stabilizer(tab)
    assert lv.k == 0
    assert lv.stabilizer_group().rank == 2


def test_view_of_code412_superposition():
    psi = code412_state(math.cos(0.3), math.sin(0.3))
    lv = psi.logical_view()
    assert lv.k == 1
    G = lv.stabilizer_group()
    assert G.rank == 3
    assert G == oracle_group(psi)


def test_view_cap():
    fr = FrameState.zero_state(4)
    for q in range(4):
        fr.apply_clifford("H", q).apply_phase_gate(math.pi / 4, q)
    assert fr.logical_view().k == 4
    with pytest.raises(BudgetExceededError):
        fr.logical_view(max_qubits=3)
