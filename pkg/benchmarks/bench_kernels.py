"""Compare the compiled kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--sizes 64,256,1024] [--repeat 5]

Each kernel runs on identical random inputs under both backends; outputs are
checked for equality before timings are reported.
"""

import argparse
import time

import numpy as np

from magic_entropy import _kernels_py

try:
    from magic_entropy import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def random_table(rng, rows, n):
    words = (n + 63) // 64
    x = rng.integers(0, 2 ** 63, size=(rows, words), dtype=np.uint64)
    z = rng.integers(0, 2 ** 63, size=(rows, words), dtype=np.uint64)
    if n % 64:
        mask = np.uint64((1 << (n % 64)) - 1)
        x[:, -1] &= mask
        z[:, -1] &= mask
    ph = rng.integers(0, 4, size=rows).astype(np.uint8)
    return x, z, ph


def gate_sweep(mod, x, z, ph, gates):
    for code, a, b in gates:
        mod.apply_gate(x, z, ph, code, a, b)
    return x, z, ph


def rref_task(mod, m, cols):
    piv = mod.gf2_rref(m, cols)
    return m, piv


def phased_task(mod, n):
    x, z, ph = commuting_table(n)
    piv = mod.phased_rref(x, z, ph, np.arange(2 * n, dtype=np.int64), n)
    return piv, x, z, ph


def timed(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def same(a, b):
    if isinstance(a, tuple):
        return all(same(u, v) for u, v in zip(a, b))
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    return a == b


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="64,256,1024")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if _ckernels is None:
        print("compiled extension not available; build with `pip install -e . --no-build-isolation`")
        return
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<14}{'n':>6}{'python [s]':>14}{'cython [s]':>14}{'speedup':>10}")
    for n in (int(s) for s in args.sizes.split(",")):
        x, z, ph = random_table(rng, 2 * n, n)
        gates = []
        for _ in range(4 * n):
            code = int(rng.integers(0, 9))
            a, b = (int(v) for v in rng.choice(n, 2, replace=False))
            gates.append((code, a, b))
        m = np.concatenate([x, z], axis=1)
        cases = {
            "apply_gate": lambda mod: gate_sweep(mod, x.copy(), z.copy(), ph.copy(), gates),
            "gf2_rref": lambda mod: rref_task(mod, m[:n].copy(), np.arange(n, dtype=np.int64)),
            "phased_rref": lambda mod: phased_task(mod, n),
        }
        for name, task in cases.items():
            tp, op = timed(lambda: task(_kernels_py), args.repeat)
            tc, oc = timed(lambda: task(_ckernels), args.repeat)
            if not same(op, oc):
                raise SystemExit(f"backends disagree on {name} at n={n}")
            print(f"{name:<14}{n:>6}{tp:>14.5f}{tc:>14.5f}{tp / tc:>10.1f}")


_COMMUTING = {}


def commuting_table(n):
    """Stabilizer rows of a random Clifford state (pairwise commuting), cached per n."""
    if n not in _COMMUTING:
        from magic_entropy.ensembles import layered_doped_program
        from magic_entropy.tableau import StabTableau

        tab = StabTableau.zero_state(n)
        for ins in layered_doped_program(n, 0, layers=4, seed=n).instructions:
            tab.apply_gate(ins.name, *ins.qubits)
        _COMMUTING[n] = (tab.x[n:].copy(), tab.z[n:].copy(), tab.ph[n:].copy())
    x, z, ph = _COMMUTING[n]
    return x.copy(), z.copy(), ph.copy()


if __name__ == "__main__":
    main()
