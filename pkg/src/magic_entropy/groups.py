"""Signed abelian Pauli groups and common subgroups of stabilizer states."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .symplectic import (
    PauliOp,
    ints_to_words,
    null_space,
    pauli_mul,
    reduce_against,
    rref_ints,
    symp_vec,
    word_to_int,
)
from .tableau import StabTableau

__all__ = ["StabGroup", "common_subgroup"]


class StabGroup:
    """Independent, commuting, Hermitian generators of a signed Pauli group."""

    __slots__ = ("n", "generators", "_canon")

    def __init__(self, n: int, generators: Iterable[PauliOp] = (), check: bool = True):
        self.n = n
        self.generators = tuple(generators)
        self._canon = None
        if check:
            self._validate()

    def _validate(self):
        n = self.n
        vecs = []
        for g in self.generators:
            if g.n != n:
                raise ValueError("generator length mismatch")
            if not g.is_hermitian:
                raise ValueError(f"generator {g} is not Hermitian")
            if g.x == 0 and g.z == 0:
                raise ValueError("identity is not an allowed generator")
            vecs.append(g.vec)
        for i in range(len(vecs)):
            for j in range(i + 1, len(vecs)):
                if symp_vec(vecs[i], vecs[j], n):
                    raise ValueError(f"{self.generators[i]} and {self.generators[j]} anticommute")
        if len(rref_ints(vecs, 2 * n)[1]) != len(vecs):
            raise ValueError("generators are not independent")

    # -- constructors --------------------------------------------------------
    @classmethod
    def from_strings(cls, strings: Sequence[str]) -> "StabGroup":
        ops = [PauliOp.from_string(s) for s in strings]
        return cls(ops[0].n, ops)

    @classmethod
    def trivial(cls, n: int) -> "StabGroup":
        return cls(n, ())

    @classmethod
    def of_state(cls, t: StabTableau) -> "StabGroup":
        return cls(t.n, t.generators, check=False)

    @classmethod
    def from_elements(cls, n: int, elements: Iterable[PauliOp]) -> "StabGroup":
        """Independent generators for a (possibly redundant) set of signed elements."""
        elements = [e for e in elements if e.x or e.z]
        chosen: list[PauliOp] = []
        red: list[int] = []
        piv: list[int] = []
        for e in elements:
            v = reduce_against(e.vec, red, piv)
            if v:
                chosen.append(e)
                red, piv = rref_ints([c.vec for c in chosen], 2 * n)
        return cls(n, chosen)

    # -- properties ------------------------------------------------------------
    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def nullity(self) -> int:
        return self.n - self.rank

    @property
    def vecs(self) -> list[int]:
        return [g.vec for g in self.generators]

    def canonical(self) -> tuple[PauliOp, ...]:
        """Row-reduced signed generators; equal groups give equal tuples."""
        if self._canon is None:
            if not self.generators:
                self._canon = ()
            else:
                n = self.n
                x = ints_to_words([g.x for g in self.generators], n)
                z = ints_to_words([g.z for g in self.generators], n)
                ph = np.array([g.phase for g in self.generators], dtype=np.uint8)
                piv = kernels.phased_rref(x, z, ph, np.arange(2 * n, dtype=np.int64), n)
                self._canon = tuple(
                    PauliOp(n, word_to_int(x[i]), word_to_int(z[i]), int(ph[i])) for i in range(len(piv))
                )
        return self._canon

    def __eq__(self, other) -> bool:
        return isinstance(other, StabGroup) and self.n == other.n and self.canonical() == other.canonical()

    def __hash__(self) -> int:
        return hash(self.canonical())

    def sign_of(self, P: PauliOp) -> int:
        """+1 or -1 if ±P (as Hermitian operator) is in the group, else 0."""
        canon = self.canonical()
        if not canon:
            return 0
        n = self.n
        acc = PauliOp(n)
        v = P.vec
        for g in canon:
            lead = (g.vec & -g.vec).bit_length() - 1
            if (v >> lead) & 1:
                v ^= g.vec
                acc = pauli_mul(acc, g)
        if v:
            return 0
        k = (P.phase - acc.phase) & 3
        if k == 0:
            return 1
        if k == 2:
            return -1
        raise ValueError("operator is not Hermitian")

    def contains(self, P: PauliOp) -> bool:
        return self.sign_of(P) == 1

    def elements(self) -> list[PauliOp]:
        if self.rank > 20:
            raise ValueError("group too large to enumerate")
        out = [PauliOp(self.n)]
        for g in self.generators:
            out = out + [pauli_mul(e, g) for e in out]
        return out

    def commutes_with(self, P: PauliOp) -> bool:
        return all(symp_vec(g.vec, P.vec, self.n) == 0 for g in self.generators)

    def to_strings(self) -> list[str]:
        return [g.to_string() for g in self.generators]

    def __repr__(self) -> str:
        return f"StabGroup(n={self.n}, <{', '.join(self.to_strings())}>)"


def _intersect(a: list[int], b: list[int], ncols: int) -> list[int]:
    if not a or not b:
        return []
    return null_space(null_space(a, ncols) + null_space(b, ncols), ncols)


def common_subgroup(tableaus: Sequence[StabTableau]) -> tuple[StabGroup, list[PauliOp]]:
    """Sign-matched common stabilizers, plus the sign-mismatched remainder.

    Returns (G0, mismatched): G0 holds the elements present with the same
    sign in every input; ``mismatched`` lists unsigned operators completing a
    basis of the sign-stripped intersection.
    """
    tableaus = list(tableaus)
    if not tableaus:
        raise ValueError("need at least one tableau")
    n = tableaus[0].n
    if any(t.n != n for t in tableaus):
        raise ValueError("qubit count mismatch")
    groups = [StabGroup.of_state(t) for t in tableaus]
    inter = groups[0].vecs
    for g in groups[1:]:
        inter = _intersect(inter, g.vecs, 2 * n)
        if not inter:
            break
    inter, _ = rref_ints(inter, 2 * n)
    if not inter:
        return StabGroup.trivial(n), []
    ops = [PauliOp.from_vec(v, n) for v in inter]
    ref = [groups[0].sign_of(p) for p in ops]
    # mismatch bits are a linear functional on the intersection
    mism = []
    for p, s0 in zip(ops, ref):
        bits = 0
        for t, g in enumerate(groups[1:]):
            if g.sign_of(p) != s0:
                bits |= 1 << t
        mism.append(bits)
    r = len(ops)
    rows = []
    for t in range(len(groups) - 1):
        row = 0
        for i, m in enumerate(mism):
            if (m >> t) & 1:
                row |= 1 << i
        if row:
            rows.append(row)
    combos = null_space(rows, r) if rows else [1 << i for i in range(r)]
    matched = []
    for cvec in combos:
        acc = PauliOp(n)
        for i in range(r):
            if (cvec >> i) & 1:
                acc = pauli_mul(acc, ops[i].times_phase(0 if ref[i] > 0 else 2))
        matched.append(acc)
    G0 = StabGroup(n, matched)
    canon_vecs = [g.vec for g in G0.canonical()]
    from .symplectic import quotient_basis

    rest = quotient_basis(canon_vecs, inter, 2 * n)
    return G0, [PauliOp.from_vec(v, n) for v in rest]
