"""Input files: circuit programs and `.stabsum` superpositions.

A `.stabsum` file lists stabilizer branches directly::

    qubits 4
    # amplitude, then the n signed generators (may continue on later lines)
    branch 0.7071067811865476
      XXXX ZIZI IZIZ ZZII
    branch 0.7071067811865476+0i
      XXXX ZIZI IZIZ -ZZII

Amplitudes are ``a+bi`` decimals.  The state is normalized on load.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from pathlib import Path

from . import circuit
from .superposition import DEFAULT_BRANCH_BUDGET, SuperposedState
from .symplectic import PauliOp
from .tableau import StabTableau

__all__ = ["StabsumParseError", "LoadedInput", "parse_stabsum", "parse_amplitude", "load_input", "parse_region"]

_AMP = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?([+-](\d+\.?\d*|\.\d+)([eE][+-]?\d+)?[ij])?$|^[+-]?(\d+\.?\d*|\.\d+)?([eE][+-]?\d+)?[ij]$")


class StabsumParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def parse_amplitude(text: str) -> complex:
    t = text.strip().replace(" ", "")
    if not _AMP.match(t):
        raise ValueError(f"bad amplitude {text!r}")
    t = t.replace("i", "j")
    if t in ("j", "+j", "-j"):
        t = t.replace("j", "1j")
    return complex(t)


def parse_stabsum(text: str, branch_budget: int = DEFAULT_BRANCH_BUDGET) -> SuperposedState:
    n = None
    branches: list[tuple[complex, list[str], int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        tokens = body.split()
        head = tokens[0].lower()
        if n is None:
            if head != "qubits" or len(tokens) != 2 or not tokens[1].isdigit() or int(tokens[1]) <= 0:
                raise StabsumParseError(lineno, "first line must be 'qubits N'")
            n = int(tokens[1])
            continue
        if head == "branch":
            if len(tokens) < 2:
                raise StabsumParseError(lineno, "branch needs an amplitude")
            try:
                amp = parse_amplitude(tokens[1])
            except ValueError as e:
                raise StabsumParseError(lineno, str(e)) from None
            branches.append((amp, tokens[2:], lineno))
            continue
        if not branches:
            raise StabsumParseError(lineno, "generators before the first 'branch'")
        branches[-1][1].extend(tokens)
    if n is None:
        raise StabsumParseError(0, "missing 'qubits N' header")
    if not branches:
        raise StabsumParseError(0, "no branches")
    out = []
    for amp, gens, lineno in branches:
        if len(gens) != n:
            raise StabsumParseError(lineno, f"branch has {len(gens)} generators, expected {n}")
        try:
            ops = [PauliOp.from_string(g) for g in gens]
            if any(op.n != n for op in ops):
                raise ValueError(f"generator length differs from {n}")
            tab = StabTableau.from_generators(ops)
        except ValueError as e:
            raise StabsumParseError(lineno, str(e)) from None
        out.append((amp, tab))
    state = SuperposedState(out, max(branch_budget, len(out)))
    nrm = state.norm_squared()
    if nrm < 1e-12:
        raise StabsumParseError(0, "branches cancel to the zero vector")
    return state.normalize()


def parse_region(text: str, n: int | None = None) -> tuple[int, ...]:
    """'0,2-4' -> (0, 2, 3, 4)."""
    qs: set[int] = set()
    text = text.strip()
    if not text:
        return ()
    for part in text.split(","):
        part = part.strip()
        m = re.fullmatch(r"(\d+)(?:-(\d+))?", part)
        if not m:
            raise ValueError(f"bad region item {part!r}")
        lo = int(m.group(1))
        hi = int(m.group(2)) if m.group(2) else lo
        if hi < lo:
            raise ValueError(f"empty range {part!r}")
        qs.update(range(lo, hi + 1))
    if n is not None and any(q >= n for q in qs):
        raise ValueError(f"region index out of range for {n} qubits")
    return tuple(sorted(qs))


@dataclass
class LoadedInput:
    kind: str  # "circuit" or "stabsum"
    n: int
    state: object  # FrameState for circuits, SuperposedState for .stabsum
    program: object | None
    outcomes: list
    sha256: str


def _looks_like_stabsum(text: str) -> bool:
    for raw in text.splitlines():
        body = raw.split("#", 1)[0].strip().lower()
        if body and not body.startswith("qubits"):
            return body.startswith("branch")
    return False


def load_input(path, branch_budget: int = DEFAULT_BRANCH_BUDGET, seed: int | None = None) -> LoadedInput:
    raw = Path(path).read_bytes()
    digest = hashlib.sha256(raw).hexdigest()
    text = raw.decode("utf-8")
    if str(path).endswith(".stabsum") or _looks_like_stabsum(text):
        state = parse_stabsum(text, branch_budget)
        return LoadedInput("stabsum", state.n, state, None, [], digest)
    prog = circuit.parse(text)
    res = circuit.execute(prog, branch_budget, seed)
    return LoadedInput("circuit", prog.n, res.frame, prog, res.outcomes, digest)
