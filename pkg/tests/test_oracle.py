import math

import numpy as np
import pytest

from helpers import code412_state, random_tableau
from magic_entropy import oracle
from magic_entropy.circuit import parse, run
from magic_entropy.ensembles import random_clifford_t_program
from magic_entropy.superposition import SuperposedState
from magic_entropy.symplectic import PauliOp, symp_vec
from magic_entropy.tableau import StabTableau


def test_from_superposition_examples():
    d = oracle.from_superposition(SuperposedState.zero_state(1))
    assert np.allclose(d.amplitudes, [1, 0])
    d = oracle.from_superposition(SuperposedState.from_strings([(1, ["XX", "ZZ"])]))
    assert np.allclose(d.amplitudes, np.array([1, 0, 0, 1]) / math.sqrt(2))
    d = oracle.from_superposition(code412_state(1 / math.sqrt(2), 1 / math.sqrt(2)))
    amps = d.amplitudes
    assert np.count_nonzero(np.abs(amps) > 1e-12) == 4
    assert np.allclose(np.abs(amps[np.abs(amps) > 1e-12]) ** 2, 0.25)


def test_reduced_spectrum_examples():
    bell = oracle.from_superposition(SuperposedState.from_strings([(1, ["XX", "ZZ"])]))
    assert np.allclose(oracle.reduced_spectrum(bell, [0]), [0.5, 0.5])
    ghz = oracle.simulate_program(parse("qubits 4\nH 0\nCX 0 1\nCX 1 2\nCX 2 3"))
    assert np.allclose(oracle.reduced_spectrum(ghz, [0, 1]), [0.5, 0.5, 0, 0])
    prod = oracle.simulate_program(parse("qubits 3\nH 0\nS 1\nH 2"))
    assert np.allclose(oracle.reduced_spectrum(prod, [0, 2]), [1, 0, 0, 0])


def test_pauli_scan_examples():
    E = oracle.pauli_scan(oracle.DenseState.zero_state(1))
    assert np.allclose(E, [[1, 1], [0, 0]])
    assert oracle.stab_from_scan(E).to_strings() == ["+Z"]
    tp = oracle.simulate_program(parse("qubits 1\nH 0\nT 0"))
    E = oracle.pauli_scan(tp)
    assert abs(E[1, 0] - math.cos(math.pi / 4)) < 1e-12
    assert abs(E[1, 1] - math.sin(math.pi / 4)) < 1e-12
    assert abs(E[0, 1]) < 1e-12
    assert oracle.stab_from_scan(E).rank == 0
    psi = code412_state(math.cos(0.3), math.sin(0.3))
    G = oracle.stab_from_scan(oracle.pauli_scan(oracle.from_superposition(psi)))
    assert G.rank == 3
    assert all(G.contains(PauliOp.from_string(s)) for s in ["XXXX", "IZIZ", "ZIZI"])


def test_scan_matches_direct_expectations():
    rng = np.random.default_rng(2)
    for n in (1, 2, 3):
        v = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
        d = oracle.DenseState(n, v).normalized()
        E = oracle.pauli_scan(d)
        for x in range(2 ** n):
            for z in range(2 ** n):
                P = PauliOp.hermitian(n, x, z)
                assert abs(E[x, z] - d.expectation(P).real) < 1e-12


def test_scan_groups_are_abelian():
    rng = np.random.default_rng(3)
    for _ in range(20):
        n = int(rng.integers(1, 6))
        tab, d = random_tableau(rng, n)
        G = oracle.stab_from_scan(oracle.pauli_scan(d))
        assert G.rank == n
        for a in G.vecs:
            for b in G.vecs:
                assert symp_vec(a, b, n) == 0
        assert not G.contains(PauliOp(n, 0, 0, 2))


def test_two_dense_paths_agree():
    rng = np.random.default_rng(4)
    for _ in range(20):
        n = int(rng.integers(1, 7))
        prog = random_clifford_t_program(n, int(rng.integers(0, 4)), 25, rng)
        a = oracle.from_superposition(run(prog))
        b = oracle.simulate_program(prog)
        assert abs(abs(np.vdot(a.amplitudes, b.amplitudes)) - 1) < 1e-12


def test_permutation_covariance():
    rng = np.random.default_rng(5)
    n = 5
    prog = random_clifford_t_program(n, 2, 30, rng)
    d = oracle.simulate_program(prog)
    perm = list(rng.permutation(n))
    permuted = oracle.DenseState(n, d.amplitudes.reshape([2] * n).transpose(perm).reshape(-1))
    A = [0, 2]
    image = [perm.index(q) for q in A]
    assert np.allclose(oracle.reduced_spectrum(d, A), oracle.reduced_spectrum(permuted, image), atol=1e-12)


def test_limits():
    with pytest.raises(oracle.OracleInfeasibleError):
        oracle.from_tableau(StabTableau.zero_state(oracle.MAX_QUBITS + 1))
    with pytest.raises(oracle.OracleInfeasibleError):
        oracle.pauli_scan(oracle.DenseState.zero_state(oracle.MAX_SCAN_QUBITS + 1))
    with pytest.raises(oracle.OracleInfeasibleError):
        oracle.reduced_spectrum(oracle.DenseState.zero_state(13), range(13))
