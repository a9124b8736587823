"""Compiled vs numpy kernels on the workloads the acceptance suite leans on.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import time

import numpy as np

from isopoint import kernels
from isopoint.atlas import NamedSubgroupKind, build_named
from isopoint.gl2_core import Mat2, full_preimage
from isopoint.lattice import CayleyTable


def closure_case(kind, ell, n=1):
    g = build_named(NamedSubgroupKind(kind, ell, n=n))
    codes = np.array([m.code for m in g.generators], dtype=np.int64)
    return f"closure {g.label} ({g.order})", lambda: kernels.closure_codes(codes, g.n, 1 << 24)


def orbit_case(ell):
    g = full_preimage(build_named(NamedSubgroupKind("NonsplitCartanNormalizer", ell)), ell * ell)
    gens = g.generator_array
    return f"orbit labels cns+@{ell} at {ell * ell}", lambda: kernels.orbit_labels(gens, g.n)


def table_case(ell):
    ct = CayleyTable.of(build_named(NamedSubgroupKind("Borel", ell)))
    start = np.zeros(ct.size, dtype=np.uint8)
    start[ct.identity] = 1
    gens = np.arange(0, ct.size, max(1, ct.size // 8), dtype=np.int32)
    return f"table closure borel@{ell} ({ct.size})", lambda: kernels.closure_in_table(ct.table, start, gens)


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()
    cases = [closure_case("NonsplitCartanNormalizer", 41), closure_case("Borel", 37),
             closure_case("FullGL2", 23), closure_case("NonsplitCartanNormalizer", 11, n=2),
             orbit_case(11), orbit_case(13), table_case(7)]
    names = sorted(kernels.BACKENDS)
    print(f"{'case':<40}" + "".join(f"{b:>12}" for b in names) + f"{'speedup':>10}")
    for label, fn in cases:
        times = {}
        for b in names:
            kernels.use(b)
            fn()
            best = float("inf")
            for _ in range(args.repeat):
                t = time.perf_counter()
                fn()
                best = min(best, time.perf_counter() - t)
            times[b] = best
        speed = times["python"] / times["compiled"] if "compiled" in times else float("nan")
        print(f"{label:<40}" + "".join(f"{times[b] * 1e3:>10.1f}ms" for b in names) + f"{speed:>9.1f}x")


if __name__ == "__main__":
    main()
