"""Compare the compiled and numpy kernel backends on the walk step.

    python3 benchmarks/bench_kernels.py --n 32,64,128,256 --steps 200
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from stagsearch import kernels
from stagsearch.lattice import LatticeSpec
from stagsearch.walk import Walk, WalkConfig, initial_state


def time_backend(name: str, n: int, steps: int, repeats: int) -> tuple[float, np.ndarray]:
    lattice = LatticeSpec(n)
    walk = Walk(lattice, WalkConfig(), backend=kernels.load(name))
    best = float("inf")
    probs = None
    for _ in range(repeats):
        psi = initial_state(lattice).amplitudes.copy()
        t0 = time.perf_counter()
        probs = walk.run(psi, steps, 0)
        best = min(best, time.perf_counter() - t0)
    return best, probs


def main(argv=None) -> None:
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--n", default="16,32,64,128,256")
    p.add_argument("--steps", type=int, default=200)
    p.add_argument("--repeats", type=int, default=3)
    args = p.parse_args(argv)

    names = kernels.available()
    print(f"backends: {', '.join(names)}")
    header = f"{'n':>5} {'N':>8} " + " ".join(f"{nm + ' ms/step':>16}" for nm in names)
    if len(names) > 1:
        header += f" {'speedup':>8} {'max |dp|':>10}"
    print(header)
    for n in (int(s) for s in args.n.split(",")):
        results = {nm: time_backend(nm, n, args.steps, args.repeats) for nm in names}
        line = f"{n:>5} {4 * n * n:>8} " + " ".join(
            f"{1e3 * results[nm][0] / args.steps:>16.4f}" for nm in names
        )
        if len(names) > 1:
            fast, slow = results["cython"], results["python"]
            line += f" {slow[0] / fast[0]:>8.1f} {np.abs(fast[1] - slow[1]).max():>10.2e}"
        print(line)


if __name__ == "__main__":
    main()
