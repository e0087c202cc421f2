#!/usr/bin/env python3
"""Compare the compiled and pure-Python scan kernels on the hot loop.

Usage: python benchmarks/bench_scan.py [--rungs N] [--iters N]
"""

import argparse
import random
import time

from wplcsim import _scan_py
from wplcsim.ladder import parse_program

try:
    from wplcsim import _scan_cy
except ImportError:
    _scan_cy = None


def build_program(rungs: int, seed: int = 1) -> str:
    rng = random.Random(seed)
    lines = []
    for _ in range(rungs):
        lines.append(f"{rng.choice(['LD', 'LDI'])} X{rng.randrange(8)}")
        for _ in range(rng.randrange(4)):
            lines.append(
                f"{rng.choice(['AND', 'ANI', 'OR', 'ORI'])} "
                f"{rng.choice('XM')}{rng.randrange(8)}"
            )
        lines.append(f"OUT {rng.choice('YM')}{rng.randrange(6)}")
    return "\n".join(lines)


def bench(kernel, prog, iters: int) -> float:
    rng = random.Random(2)
    inputs = [rng.randrange(256) for _ in range(256)]
    start = time.perf_counter()
    m = 0
    for i in range(iters):
        _, m = kernel.eval_scan(prog._ops, prog._banks, prog._idxs,
                                inputs[i & 0xFF], m)
    return time.perf_counter() - start


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--rungs", type=int, default=20)
    parser.add_argument("--iters", type=int, default=200_000)
    args = parser.parse_args()

    prog = parse_program(build_program(args.rungs))
    print(f"program: {args.rungs} rungs, {len(prog._ops)} instructions, "
          f"{args.iters} scans")
    py_s = bench(_scan_py, prog, args.iters)
    print(f"python kernel: {py_s:8.3f} s  ({args.iters / py_s:12.0f} scans/s)")
    if _scan_cy is None:
        print("cython kernel: not built (pip install -e . rebuilds it)")
        return
    cy_s = bench(_scan_cy, prog, args.iters)
    print(f"cython kernel: {cy_s:8.3f} s  ({args.iters / cy_s:12.0f} scans/s)")
    print(f"speedup: {py_s / cy_s:.1f}x")


if __name__ == "__main__":
    main()
