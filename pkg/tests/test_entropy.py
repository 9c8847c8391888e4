import math

import numpy as np
import pytest

from helpers import CODE412, CODE52, code412_state, random_frame
from magic_entropy import oracle
from magic_entropy.ensembles import random_codeword, random_stabilizer_code
from magic_entropy.entropy import (
    AlgebraicState,
    algebraic_entropy,
    algebraic_spectrum,
    area_term,
    entanglement_report,
    jacobi_eigvalsh,
    logical_algebra_on_region,
    logical_generators,
    reconstruct_logical_state,
    renyi_from_spectrum,
)
from magic_entropy.groups import StabGroup
from magic_entropy.logical import LogicalView
from magic_entropy.superposition import SuperposedState
from magic_entropy.symplectic import PauliOp, gf2_rank, span_equal, symp_vec
from magic_entropy.tableau import StabTableau

P = PauliOp.from_string
S412 = StabGroup.from_strings(CODE412)
S52 = StabGroup.from_strings(CODE52)


def binary_entropy(p):
    return -sum(x * math.log2(x) for x in (p, 1 - p) if x > 0)


def spectrum_array(rep):
    out = []
    for lam, mult in rep.spectrum:
        out += [lam] * mult
    return np.sort(np.array(out))[::-1]


def check_against_oracle(psi, A, dense, tol=1e-8, renyi=(0.5, 2.0, 3.0)):
    rep = entanglement_report(psi, A, renyi=renyi)
    vals = oracle.reduced_spectrum(dense, A)
    ev = spectrum_array(rep)
    assert ev.size == vals.size
    assert np.max(np.abs(ev - vals)) < tol
    assert abs(rep.von_neumann_bits - oracle.entropy_from_spectrum(vals)) < tol
    for a, v in rep.renyi_bits.items():
        assert abs(v - oracle.entropy_from_spectrum(vals, a)) < tol
    return rep


def test_logical_generators_examples():
    L = logical_generators(S412)
    assert len(L) == 1
    span = [v for pair in L for v in (pair[0].vec, pair[1].vec)] + S412.vecs
    assert gf2_rank(span + [P("ZZII").vec], 8) == gf2_rank(span, 8)
    L52 = logical_generators(S52)
    assert len(L52) == 2
    for i, (X, Z) in enumerate(L52):
        assert symp_vec(X.vec, Z.vec, 5) == 1
        assert all(S52.commutes_with(op) and not S52.contains(op) for op in (X, Z))
        for j, (X2, Z2) in enumerate(L52):
            if i != j:
                assert symp_vec(X.vec, X2.vec, 5) == symp_vec(X.vec, Z2.vec, 5) == 0
    H_L = [P(s).vec for s in ["IZZXI", "IIZIX", "ZIZZI", "IZIIZ"]]
    assert span_equal([o.vec for p in L52 for o in p] + S52.vecs, H_L + S52.vecs, 10)
    assert logical_generators(StabGroup.of_state(StabTableau.zero_state(3))) == []


def test_algebra_examples():
    alg = logical_algebra_on_region(S412, logical_generators(S412), [0, 1])
    assert alg.p == 0 and alg.c == 1
    assert span_equal([alg.center[0].vec] + [v for v in S412.vecs], [P("ZZII").vec] + S412.vecs, 8)
    L52 = logical_generators(S52)
    alg = logical_algebra_on_region(S52, L52, [0, 1, 2])
    assert alg.p == 1 and alg.c == 1
    ref = [P(s).vec for s in ["XIIII", "ZXZII", "YZYII"]]
    assert span_equal([g.vec for g in alg.generators()], ref, 10)
    full = logical_algebra_on_region(S52, L52, range(5))
    assert full.p == 2 and full.c == 0


def test_reconstruction_of_code412():
    c1, c2 = math.cos(0.35), math.sin(0.35)
    psi = code412_state(c1, c2)
    L = logical_generators(S412)
    alg = logical_algebra_on_region(S412, L, [0, 1])
    st = reconstruct_logical_state(psi.logical_view(), alg)
    assert st.m == 1
    d = c1 ** 2 - c2 ** 2
    sign = 1 if abs(psi.expectation(alg.center[0]) - d) < 1e-12 else -1
    assert np.allclose(st.rho, 0.5 * np.array([[1 + sign * d, 0], [0, 1 - sign * d]]), atol=1e-12)


def test_reconstruction_of_reference_is_diagonal_projector():
    L = logical_generators(S52)
    alg = logical_algebra_on_region(S52, L, range(5))
    phi = StabTableau.from_generators(list(S52.generators) + [z for _, z in L])
    st = reconstruct_logical_state(LogicalView.from_stabilizer(phi), alg)
    assert np.allclose(st.rho, np.diag(np.diag(st.rho)), atol=1e-12)
    assert sorted(np.round(np.diag(st.rho).real, 12)) == [0, 0, 0, 1]


def test_algebraic_entropy_examples():
    pure = AlgebraicState(1, 0, np.diag([1.0, 0.0]).astype(complex))
    mixed = AlgebraicState(2, 1, np.eye(8, dtype=complex) / 8)
    for a in (0.0, 0.5, 1.0, 2.0, 3.0, math.inf):
        assert abs(algebraic_entropy(pure, a)) < 1e-12
        assert abs(algebraic_entropy(mixed, a) - 3) < 1e-12
    with pytest.raises(ValueError):
        algebraic_entropy(pure, -1)
    bad = AlgebraicState(1, 0, np.diag([1.1, -0.1]).astype(complex))
    with pytest.raises(ValueError):
        algebraic_spectrum(bad)


def test_renyi_from_spectrum_values():
    v = np.array([0.5, 0.25, 0.25])
    assert abs(renyi_from_spectrum(v, 1) - 1.5) < 1e-15
    assert abs(renyi_from_spectrum(v, 0) - math.log2(3)) < 1e-15
    assert abs(renyi_from_spectrum(v, 2) + math.log2(0.375)) < 1e-15
    assert abs(renyi_from_spectrum(v, math.inf) - 1) < 1e-15


def test_jacobi_matches_lapack():
    rng = np.random.default_rng(1)
    for m in range(1, 6):
        A = rng.normal(size=(2 ** m, 2 ** m)) + 1j * rng.normal(size=(2 ** m, 2 ** m))
        H = A @ A.conj().T
        H /= np.trace(H).real
        st = AlgebraicState(m, 0, H)
        assert np.allclose(algebraic_spectrum(st, "jacobi"), algebraic_spectrum(st, "lapack"), atol=1e-12)
        assert np.allclose(np.sort(jacobi_eigvalsh(H)), np.linalg.eigvalsh(H), atol=1e-12)


def test_area_examples():
    assert area_term(S412, logical_generators(S412), [0, 1]) == 1
    L52 = logical_generators(S52)
    assert area_term(S52, L52, [0, 1, 2]) == 1
    assert area_term(S52, L52, []) == 0
    assert area_term(S52, L52, [0, 1, 2], reference="X") == 1


def test_code412_worked_example():
    for th in (0, math.pi / 8, math.pi / 4, 3 * math.pi / 8, math.pi / 2):
        c1, c2 = math.cos(th), math.sin(th)
        psi = code412_state(c1, c2)
        rep = check_against_oracle(psi, [0, 1], oracle.from_superposition(psi), tol=1e-9)
        assert abs(rep.von_neumann_bits - (binary_entropy(c1 ** 2) + 1)) < 1e-9
        fixed = entanglement_report(psi, [0, 1], group=S412)
        assert fixed.area_bits == 1
        assert abs(fixed.logical_entropy_bits - binary_entropy(c1 ** 2)) < 1e-9
    rep = entanglement_report(code412_state(1 / math.sqrt(2), 1 / math.sqrt(2)), [0, 1])
    assert abs(rep.von_neumann_bits - 2) < 1e-12
    assert len(rep.spectrum) == 1 and abs(rep.spectrum[0][0] - 0.25) < 1e-12 and rep.spectrum[0][1] == 4


def test_five_qubit_codewords():
    rng = np.random.default_rng(1)
    L = logical_generators(S52)
    zs = [z for _, z in L]
    for _ in range(20):
        c = rng.normal(size=4) + 1j * rng.normal(size=4)
        c /= np.linalg.norm(c)
        br = []
        for i in range(4):
            gens = list(S52.generators) + [zs[0] if not i & 1 else zs[0].negate(),
                                            zs[1] if not i & 2 else zs[1].negate()]
            br.append((c[i], StabTableau.from_generators(gens)))
        psi = SuperposedState(br)
        rep = check_against_oracle(psi, [0, 1, 2], oracle.from_superposition(psi), tol=1e-9)
        assert rep.area_bits == 1


def test_pure_stabilizer_input():
    rng = np.random.default_rng(6)
    for _ in range(10):
        S, tab = random_stabilizer_code(6, 0, rng)
        A = [q for q in range(6) if rng.random() < 0.5]
        rep = entanglement_report(SuperposedState.from_stabilizer(tab), A)
        from magic_entropy.tableau import subsystem_entropy_bits
        assert rep.logical_entropy_bits == 0
        assert rep.von_neumann_bits == subsystem_entropy_bits(tab, A)
        nonzero = [lam for lam, _ in rep.spectrum if lam > 0]
        assert len(nonzero) == 1


def test_doped_circuits_match_oracle_and_invariants():
    rng = np.random.default_rng(7)
    for trial in range(40):
        n = int(rng.integers(3, 9))
        t = int(rng.integers(0, 4))
        fr, dense = random_frame(rng, n, t, depth=25, measure=0.05 if trial % 2 else 0.0)
        A = sorted(rng.choice(n, int(rng.integers(1, n)), replace=False).tolist())
        Ac = [q for q in range(n) if q not in A]
        rep = check_against_oracle(fr, A, dense)
        assert rep.von_neumann_bits == rep.logical_entropy_bits + rep.area_bits
        assert rep.nullity <= 2 * t
        ev = spectrum_array(rep)
        assert abs(ev.sum() - 1) < 1e-9
        assert all(m % (2 ** rep.area_bits) == 0 for _, m in rep.spectrum if _ > 0)
        assert -1e-9 <= rep.von_neumann_bits <= min(len(A), len(Ac)) + 1e-9
        comp = entanglement_report(fr, Ac)
        assert abs(comp.von_neumann_bits - rep.von_neumann_bits) < 1e-9
        seq = [rep.renyi_bits[0.5], rep.von_neumann_bits, rep.renyi_bits[2.0], rep.renyi_bits[3.0]]
        assert all(a >= b - 1e-9 for a, b in zip(seq, seq[1:]))


def test_area_is_codeword_and_reference_independent():
    rng = np.random.default_rng(12)
    for _ in range(10):
        n = int(rng.integers(3, 8))
        nu = int(rng.integers(1, 3))
        S, tab = random_stabilizer_code(n, nu, rng)
        A = sorted(rng.choice(n, int(rng.integers(1, n)), replace=False).tolist())
        L = logical_generators(S)
        areas = {area_term(S, L, A, reference=r) for r in ("Z", "X", tab)}
        for _ in range(5):
            rep = entanglement_report(random_codeword(tab, nu, rng), A, group=S)
            areas.add(rep.area_bits)
            assert rep.von_neumann_bits == rep.logical_entropy_bits + rep.area_bits
        assert len(areas) == 1


def test_report_rejects_bad_inputs():
    psi = code412_state(0.6, 0.8)
    with pytest.raises(ValueError):
        entanglement_report(psi, [7])
    with pytest.raises(ValueError):
        entanglement_report(psi, [0, 1], group=StabGroup.from_strings(["ZZII"]))
