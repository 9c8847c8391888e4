import math

import numpy as np
import pytest

from helpers import random_gates, random_tableau
from magic_entropy import oracle
from magic_entropy.symplectic import PauliOp
from magic_entropy.tableau import (
    ExactOverlap,
    StabTableau,
    ZeroProbabilityError,
    canonical_form,
    expectation_cross,
    inner_product,
    measure_pauli,
    subsystem_entropy_bits,
)

T = StabTableau.from_strings
P = PauliOp.from_string


def ghz4():
    t = StabTableau.zero_state(4)
    t.apply_gate("H", 0)
    for q in range(3):
        t.apply_gate("CX", q, q + 1)
    return t


def group_strings(t):
    return {g.to_string() for g in t.generators}


def test_hadamard_on_zero():
    t = StabTableau.zero_state(1).apply_gate("H", 0)
    assert t.expectation(P("X")) == 1


def test_bell_stabilizers():
    t = StabTableau.zero_state(2).apply_gate("H", 0).apply_gate("CX", 0, 1)
    assert t.expectation(P("XX")) == 1 and t.expectation(P("ZZ")) == 1
    assert t.expectation(P("YY")) == -1


def test_ghz_expectations():
    t = ghz4()
    assert t.expectation(P("XXXX")) == 1
    assert t.expectation(P("ZZII")) == 1
    assert t.expectation(P("ZIII")) == 0


def test_simple_expectations():
    z = StabTableau.zero_state(1)
    assert z.expectation(P("Z")) == 1 and z.expectation(P("X")) == 0
    with pytest.raises(ValueError):
        z.expectation(PauliOp(1, 1, 1, 0))
    with pytest.raises(IndexError):
        StabTableau.zero_state(2).apply_gate("H", 2)
    with pytest.raises(ValueError):
        StabTableau.zero_state(2).apply_gate("CX", 1, 1)


def test_measurement_examples():
    plus = T(["X"])
    s, p = measure_pauli(plus, P("Z"), 1)
    assert p == 0.5 and s.expectation(P("Z")) == 1
    s, p = measure_pauli(StabTableau.zero_state(1), P("Z"), rng=np.random.default_rng(0))
    assert p == 1.0 and s.expectation(P("Z")) == 1
    bell = T(["XX", "ZZ"])
    s, p = measure_pauli(bell, P("ZI"), -1)
    assert p == 0.5 and s.canonical() == StabTableau.basis_state(2, 0b11).canonical()
    with pytest.raises(ZeroProbabilityError):
        measure_pauli(StabTableau.zero_state(1), P("Z"), -1)


def test_canonical_form_examples():
    a = StabTableau.zero_state(1).apply_gate("H", 0).apply_gate("H", 0)
    assert canonical_form(a).key() == canonical_form(StabTableau.zero_state(1)).key()
    assert T(["ZZ", "IZ"]).key() == T(["ZI", "IZ"]).key()
    x = StabTableau.zero_state(3)
    y = StabTableau.zero_state(3)
    for g, qs in [("H", (0,)), ("H", (1,)), ("S", (2,)), ("CZ", (0, 1))]:
        x.apply_gate(g, *qs)
    for g, qs in [("S", (2,)), ("H", (1,)), ("H", (0,)), ("CZ", (0, 1))]:
        y.apply_gate(g, *qs)
    assert x.key() == y.key()
    c = canonical_form(x)
    assert canonical_form(c).key() == c.key()


def test_inner_product_examples():
    ov = inner_product(StabTableau.zero_state(1), T(["X"]))
    assert (ov.is_zero, ov.d, ov.m) == (False, 1, 0)
    t = ghz4()
    ov = inner_product(t, t)
    assert (ov.d, ov.m) == (0, 0)
    a = T(["XXXX", "ZIZI", "IZIZ", "ZZII"])
    b = T(["XXXX", "ZIZI", "IZIZ", "-ZZII"])
    assert inner_product(a, b).is_zero


def test_cross_expectation_examples():
    zero, one = StabTableau.zero_state(1), StabTableau.basis_state(1, 1)
    assert expectation_cross(zero, P("X"), zero) == 0
    assert abs(expectation_cross(zero, P("X"), one) - 1) < 1e-15
    a = T(["XXXX", "ZIZI", "IZIZ", "ZZII"])
    b = T(["XXXX", "ZIZI", "IZIZ", "-ZZII"])
    assert expectation_cross(a, P("ZZII"), b) == 0


def test_subsystem_entropy_examples():
    phi = T(["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ", "ZZZZZ"])
    assert subsystem_entropy_bits(phi, [0, 1, 2]) == 2
    assert subsystem_entropy_bits(ghz4(), [0, 1]) == 1
    prod = StabTableau.zero_state(4).apply_gate("H", 1)
    assert all(subsystem_entropy_bits(prod, A) == 0 for A in ([0], [1, 2], [0, 1, 3]))


def test_exact_overlap_value():
    assert abs(ExactOverlap(False, 1, 2).to_complex() - 1j / math.sqrt(2)) < 1e-15
    assert ExactOverlap(False, 3, 9).m == 1
    assert ExactOverlap.zero().to_complex() == 0


def test_all_pauli_expectations_match_dense():
    rng = np.random.default_rng(11)
    for n in range(1, 5):
        for _ in range(6):
            tab, dense = random_tableau(rng, n)
            E = oracle.pauli_scan(dense)
            for x in range(2 ** n):
                for z in range(2 ** n):
                    Pxz = PauliOp.hermitian(n, x, z)
                    ref = dense.expectation(Pxz).real
                    assert tab.expectation(Pxz) == round(ref)
                    assert abs(ref - round(ref)) < 1e-12
                    assert abs(E[x, z] - ref) < 1e-12


def test_vector_and_overlap_match_dense():
    rng = np.random.default_rng(3)
    for _ in range(80):
        n = int(rng.integers(1, 9))
        t1, d1 = random_tableau(rng, n)
        t2, d2 = random_tableau(rng, n)
        assert np.allclose(t1.to_vector(), d1.amplitudes, atol=1e-12)
        ov = inner_product(t1, t2)
        ref = np.vdot(d1.amplitudes, d2.amplitudes)
        assert abs(ov.to_complex() - ref) < 1e-12
        mag = abs(ov.to_complex())
        assert ov.is_zero or abs(mag - 2 ** (-ov.d / 2)) < 1e-12
        assert inner_product(t2, t1) == ov.conjugate()
        Pr = PauliOp.hermitian(n, int(rng.integers(2 ** n)), int(rng.integers(2 ** n)))
        ref = np.vdot(d1.amplitudes, d2.pauli_apply(Pr))
        assert abs(expectation_cross(t1, Pr, t2) - ref) < 1e-12


def test_measurement_probabilities_and_entropy_symmetry():
    rng = np.random.default_rng(5)
    for _ in range(60):
        n = int(rng.integers(1, 7))
        tab, dense = random_tableau(rng, n)
        Pr = PauliOp.hermitian(n, int(rng.integers(2 ** n)), int(rng.integers(2 ** n)))
        total = 0.0
        for s in (1, -1):
            try:
                post, p = measure_pauli(tab, Pr, s)
            except ZeroProbabilityError:
                continue
            total += p
            assert post.expectation(Pr) == s
            d = dense.copy()
            assert abs(d.project(Pr, s) - p) < 1e-12
            assert abs(abs(np.vdot(post.to_vector(), d.normalized().amplitudes)) - 1) < 1e-10
        assert abs(total - 1) < 1e-12
        A = [q for q in range(n) if rng.random() < 0.5]
        Ac = [q for q in range(n) if q not in A]
        s = subsystem_entropy_bits(tab, A)
        assert s == subsystem_entropy_bits(tab, Ac)
        assert abs(s - oracle.entropy_from_spectrum(oracle.reduced_spectrum(dense, A))) < 1e-9


def test_ordered_generators_keep_order_and_destabilizers():
    rng = np.random.default_rng(8)
    for _ in range(30):
        n = int(rng.integers(1, 7))
        tab, _ = random_tableau(rng, n)
        gens = tab.generators
        order = rng.permutation(n)
        gens = [gens[i] for i in order]
        u = StabTableau.from_ordered_generators(gens)
        assert u.generators == gens
        D = u.destabilizers
        from magic_entropy.symplectic import symp_vec
        for a in range(n):
            for b in range(n):
                assert symp_vec(D[a].vec, gens[b].vec, n) == int(a == b)
                assert symp_vec(D[a].vec, D[b].vec, n) == 0
        assert u.key() == tab.key()
