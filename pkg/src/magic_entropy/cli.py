"""Command line entry point ``magic-entropy``.

Exit codes: 0 success, 1 verification mismatch, 2 input error or oracle
infeasible, 3 budget exceeded or method infeasible.
"""

from __future__ import annotations

import json
import os
import sys

import click
import numpy as np

from . import oracle
from .circuit import CircuitParseError
from .entropy import entanglement_report
from .errors import BudgetExceededError, InfeasibleError, ZeroProbabilityError
from .extract import DEFAULT_CANDIDATE_BUDGET, maximal_stabilizer_group
from .inputs import StabsumParseError, load_input, parse_region
from .learner import learn_entropy
from .report import dumps, report_to_document
from .superposition import DEFAULT_BRANCH_BUDGET

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _guarded(fn):
    """Map library exceptions to exit codes with a message on stderr."""

    def wrapper(*args, **kw):
        try:
            return fn(*args, **kw)
        except _Fail as e:
            click.echo(f"error: {e}", err=True)
            sys.exit(e.code)
        except (BudgetExceededError, InfeasibleError) as e:
            click.echo(f"budget exceeded: {e}", err=True)
            sys.exit(EXIT_BUDGET)
        except oracle.OracleInfeasibleError as e:
            click.echo(f"oracle infeasible: {e}", err=True)
            sys.exit(EXIT_INPUT)
        except (CircuitParseError, StabsumParseError) as e:
            click.echo(f"parse error: {e}", err=True)
            sys.exit(EXIT_INPUT)
        except ZeroProbabilityError as e:
            click.echo(f"postselection failed: {e}", err=True)
            sys.exit(EXIT_INPUT)
        except (OSError, UnicodeDecodeError) as e:
            click.echo(f"cannot read input: {e}", err=True)
            sys.exit(EXIT_INPUT)
        except ValueError as e:
            click.echo(f"invalid input: {e}", err=True)
            sys.exit(EXIT_INPUT)

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _load(path, budget, seed):
    return load_input(path, branch_budget=budget, seed=seed)


def _region(text, n):
    try:
        return parse_region(text, n)
    except ValueError as e:
        raise _Fail(EXIT_INPUT, str(e)) from None


def _renyi(text):
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            a = float(part)
        except ValueError:
            raise _Fail(EXIT_INPUT, f"bad Renyi index {part!r}") from None
        if a < 0:
            raise _Fail(EXIT_INPUT, "Renyi indices must be nonnegative")
        out.append(a)
    return out


def _set_threads(threads):
    if threads is not None:
        os.environ["MAGIC_ENTROPY_THREADS"] = str(threads)


def _table(doc) -> str:
    u = doc["units"]
    lines = [
        f"qubits            {doc['n']}",
        f"region            {','.join(map(str, doc['region'])) or '-'}",
        f"nullity           {doc['nullity']}",
        f"branches          {doc['branch_count']}",
        f"area term         {doc['area']:.12g} {u}",
        f"logical entropy   {doc['logical_entropy']:.12g} {u}",
        f"von Neumann       {doc['von_neumann']:.12g} {u}",
    ]
    for a, v in doc["renyi"].items():
        lines.append(f"Renyi {a:<11} {v:.12g} {u}")
    lines.append("spectrum (eigenvalue x multiplicity)")
    for lam, mult in doc["spectrum"]:
        lines.append(f"  {lam:.15g} x {mult}")
    return "\n".join(lines)


def _emit(doc, fmt):
    click.echo(dumps(doc) if fmt == "json" else _table(doc), nl=fmt != "json")


_common = [
    click.argument("path", type=click.Path(dir_okay=False)),
    click.option("--budget", type=int, default=DEFAULT_BRANCH_BUDGET, show_default=True,
                 help="Maximum number of stabilizer branches."),
    click.option("--seed", type=int, default=None, help="Seed for sampled measurement outcomes."),
    click.option("--threads", type=int, default=None, help="Worker threads (sets MAGIC_ENTROPY_THREADS)."),
]


def _with_common(fn):
    for deco in reversed(_common):
        fn = deco(fn)
    return fn


@click.group()
@click.version_option(package_name="artifact")
def main():
    """Entanglement entropy of low-nullity stabilizer superpositions."""


@main.command()
@_with_common
@click.option("--region", required=True, help="Qubits of A, e.g. 0,2-4.")
@click.option("--renyi", default="0.5,2,3", show_default=True, help="Comma-separated Renyi indices.")
@click.option("--units", type=click.Choice(["bits", "nats"]), default="bits", show_default=True)
@click.option("--max-logical-qubits", type=int, default=None, help="Cap on the compressed logical register.")
@click.option("--format", "fmt", type=click.Choice(["json", "table"]), default="json", show_default=True)
@_guarded
def entropy(path, budget, seed, threads, region, renyi, units, max_logical_qubits, fmt):
    """Entropies and spectrum of REGION for the state in PATH."""
    _set_threads(threads)
    inp = _load(path, budget, seed)
    A = _region(region, inp.n)
    rep = entanglement_report(inp.state, A, renyi=_renyi(renyi), max_logical_qubits=max_logical_qubits)
    opts = {"region": region, "renyi": renyi, "units": units, "budget": budget, "input_kind": inp.kind}
    if inp.outcomes:
        rep.diagnostics["measurement_outcomes"] = list(inp.outcomes)
    _emit(report_to_document(rep, units, inp.sha256, seed, opts), fmt)


@main.command()
@_with_common
@click.option("--method", type=click.Choice(["auto", "logical", "truth_vector"]), default="auto", show_default=True)
@click.option("--candidates", type=int, default=DEFAULT_CANDIDATE_BUDGET, show_default=True,
              help="Candidate budget of the truth-vector method.")
@click.option("--oracle", "use_oracle", is_flag=True, help="Exhaustive dense Pauli scan (small n only).")
@click.option("--json", "as_json", is_flag=True, help="Print JSON instead of text.")
@_guarded
def stabilizers(path, budget, seed, threads, method, candidates, use_oracle, as_json):
    """Maximal stabilizer group of the state in PATH and its nullity."""
    _set_threads(threads)
    inp = _load(path, budget, seed)
    if use_oracle:
        G = oracle.stab_from_scan(oracle.pauli_scan(oracle.dense_of(inp.state)))
    else:
        try:
            G, _ = maximal_stabilizer_group(inp.state, method=method, budget=candidates)
        except BudgetExceededError as e:
            raise BudgetExceededError(f"{e}; for n <= {oracle.MAX_SCAN_QUBITS} try --oracle") from None
    gens = [g.to_string() for g in G.canonical()]
    if as_json:
        click.echo(json.dumps({"n": G.n, "nullity": G.nullity, "generators": gens}, indent=2))
        return
    for g in gens:
        click.echo(g)
    click.echo(f"nullity {G.nullity}")


@main.command()
@_with_common
@click.option("--region", required=True, help="Qubits of A, e.g. 0,2-4.")
@click.option("--renyi", default="0.5,2,3", show_default=True)
@click.option("--tol", type=float, default=1e-8, show_default=True)
@_guarded
def verify(path, budget, seed, threads, region, renyi, tol):
    """Compare the engine with the dense oracle; exit 0 iff all values agree within TOL."""
    _set_threads(threads)
    inp = _load(path, budget, seed)
    A = _region(region, inp.n)
    if inp.n > oracle.MAX_QUBITS:
        raise oracle.OracleInfeasibleError(f"{inp.n} qubits exceed the dense oracle limit {oracle.MAX_QUBITS}")
    if inp.program is not None:
        dense = oracle.simulate_program(inp.program, outcomes=inp.outcomes)
    else:
        dense = oracle.dense_of(inp.state)
    alphas = _renyi(renyi)
    rep = entanglement_report(inp.state, A, renyi=alphas)
    vals = oracle.reduced_spectrum(dense, A)
    rows = [("von_neumann", rep.von_neumann_bits, oracle.entropy_from_spectrum(vals, 1.0))]
    for a in alphas:
        rows.append((f"renyi_{a:g}", rep.renyi_bits[a], oracle.entropy_from_spectrum(vals, a)))
    eng = []
    for lam, mult in rep.spectrum:
        eng.extend([lam] * mult)
    eng = np.sort(np.array(eng))[::-1]
    spec_err = float(np.max(np.abs(eng - vals))) if eng.size == vals.size else float("inf")
    ok = spec_err <= tol
    click.echo(f"{'quantity':<14}{'engine':>22}{'oracle':>22}{'|diff|':>12}")
    for name, e, o in rows:
        d = abs(e - o)
        ok &= d <= tol
        click.echo(f"{name:<14}{e:>22.15g}{o:>22.15g}{d:>12.2e}")
    click.echo(f"{'spectrum':<14}{'':>22}{'':>22}{spec_err:>12.2e}")
    click.echo("PASS" if ok else "FAIL")
    sys.exit(EXIT_OK if ok else EXIT_MISMATCH)


@main.command()
@_with_common
@click.option("--region", required=True, help="Qubits of A, e.g. 0,2-4.")
@click.option("--shots", type=int, default=10000, show_default=True)
@click.option("--renyi", default="0.5,2,3", show_default=True)
@click.option("--units", type=click.Choice(["bits", "nats"]), default="bits", show_default=True)
@_guarded
def learn(path, budget, seed, threads, region, shots, renyi, units):
    """Entropy report with the stabilizer group learned from Bell difference samples."""
    _set_threads(threads)
    inp = _load(path, budget, seed)
    A = _region(region, inp.n)
    if shots < 0:
        raise _Fail(EXIT_INPUT, "shots must be nonnegative")
    rep = learn_entropy(inp.state, A, shots, seed, renyi=_renyi(renyi))
    exact, _ = maximal_stabilizer_group(inp.state)
    learned = rep.diagnostics["learned_rank"]
    # verified generators are stabilizers, so equal rank means equal groups
    rep.diagnostics["exact_group_match"] = learned == exact.rank
    opts = {"region": region, "shots": shots, "renyi": renyi, "units": units, "input_kind": inp.kind}
    click.echo(dumps(report_to_document(rep, units, inp.sha256, seed, opts)), nl=False)


if __name__ == "__main__":
    main()
