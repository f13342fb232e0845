"""Compare the compiled and numpy kernel backends on the hot counting paths.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--q 31]

Prints one line per (workload, backend) with the best wall time and the
speedup of the compiled kernels; results are checked for equality first.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from bspec import BilinearForm, Field, PointSet, partition_by_directions
from bspec.engine import backend, counting


def _best(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return best, result


def _no_hit_partition(q: int):
    """Two halves of the projective line ``x0 = 0`` against every point off it.

    No triple is dependent, so the search scans all of ``E1 x E2 x E3``.
    """
    pts = PointSet.nonzero_space(Field(q), 3).coords
    on_line = pts[pts[:, 0] == 0]
    # split the line by slope class: (0, 1, t) with t < q/2 versus the rest
    slope = np.array([(c * pow(int(b), -1, q)) % q if b else q for _, b, c in on_line])
    half = slope < (q + 1) // 2
    return (np.ascontiguousarray(on_line[half]), np.ascontiguousarray(on_line[~half]),
            np.ascontiguousarray(pts[pts[:, 0] != 0]))


def workloads(q: int):
    fld = Field(q)
    form = BilinearForm.identity(fld, 2)
    parts = partition_by_directions(PointSet.nonzero_space(fld, 2)).parts
    full = PointSet.full_space(fld, 2)
    table = counting.dot_table(full, full, form)
    x, y, z = _no_hit_partition(7)
    yield (f"spectrum q={q} |E|={q * q - 1}",
           lambda k: counting.spectrum(*parts, form, threads=1, kernel=k).dense)
    yield (f"pair_histogram q={q} |E|={q * q}",
           lambda k: backend.kernels(k).pair_histogram(table, q))
    yield (f"zero_degree q={q} |E|={q * q}",
           lambda k: backend.kernels(k).row_value_counts(table, q))
    yield (f"independence q=7 {len(x)}x{len(y)}x{len(z)} no hit",
           lambda k: backend.kernels(k).first_dependent(x, y, z, 7))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--q", type=int, default=31)
    args = parser.parse_args(argv)
    names = sorted(backend.BACKENDS)
    if "cython" not in names:
        print("compiled kernels not built; only the numpy backend is available")
    for label, run in workloads(args.q):
        times, results = {}, {}
        for name in names:
            times[name], results[name] = _best(lambda: run(name), args.repeat)
        values = list(results.values())
        agree = all(np.array_equal(np.asarray(v), np.asarray(values[0])) for v in values[1:])
        line = "  ".join(f"{n}={times[n] * 1e3:9.2f} ms" for n in names)
        speed = f"  speedup x{times['python'] / times['cython']:.1f}" if "cython" in times else ""
        print(f"{label:42s} {line}{speed}  agree={agree}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
