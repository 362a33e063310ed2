#!/usr/bin/env python3
"""Time the numba kernels against the pure-numpy fallback.

Measures statevector application of random circuits across register
widths, and dense unitary builds where those stay cheap.  Run directly:

    python benchmarks/bench_kernels.py [--widths 6,8,10,12,14] [--gates 40]
"""

import argparse
import random
import sys
import time
from pathlib import Path

import numpy as np

from gmsforge import kernels, sim
from gmsforge.sim import max_dense_qubits

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))
from conftest import random_circuit, random_state  # noqa: E402

UNITARY_WIDTH_CAP = 9  # dense builds scale as 4^n; keep the benchmark quick


def time_call(fn, budget_s=0.5, max_repeats=20):
    best = float("inf")
    spent = 0.0
    for _ in range(max_repeats):
        start = time.perf_counter()
        fn()
        took = time.perf_counter() - start
        best = min(best, took)
        spent += took
        if spent > budget_s:
            break
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--widths", default="6,8,10,12,14")
    ap.add_argument("--gates", type=int, default=40)
    args = ap.parse_args()
    widths = [int(w) for w in args.widths.split(",")]

    backends = [kernels.get_backend(name) for name in kernels.available_backends()]
    if len(backends) == 1:
        print("numba unavailable; timing the numpy path only")

    rng = random.Random(0)
    nrng = np.random.default_rng(0)
    header = f"{'width':>5}  {'op':<8}" + "".join(f"{b.name:>12}" for b in backends)
    print(header + ("   numpy/numba" if len(backends) > 1 else ""))
    for n in widths:
        circ = random_circuit(rng, n, args.gates)
        psi = random_state(nrng, n)
        for be in backends:  # jit warm-up outside the timed region
            sim.apply(circ, psi, backend=be)

        rows = [("apply", lambda be: sim.apply(circ, psi, backend=be))]
        if n <= min(UNITARY_WIDTH_CAP, max_dense_qubits()):
            rows.append(("unitary", lambda be: sim.unitary_of(circ, backend=be)))
        for label, op in rows:
            times = [time_call(lambda be=be: op(be)) for be in backends]
            ratio = f"{times[0] / times[-1]:>12.1f}x" \
                if len(times) > 1 and times[-1] > 0 else ""
            print(f"{n:>5}  {label:<8}"
                  + "".join(f"{t * 1e3:>10.2f}ms" for t in times) + ratio)


if __name__ == "__main__":
    main()
