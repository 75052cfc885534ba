"""Time the numba kernels against the numpy fallback on realistic workloads.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--quick] [--json out.json]

Each workload runs once per backend to warm up (JIT compile, stream memo),
then ``--repeat`` times; the best time is reported.  Results are also
checked to agree between backends.
"""
from __future__ import annotations

import argparse
import json
import time

import numpy as np

from cssets import _accel, kernels, syndetic
from cssets.constructions import R_closed
from cssets.setcore import Construction42, CorollaryB
from cssets.uss import empirical_L, longest_subAP


def _hitting_set_random(seed=0, rows=600, cols=200, size=40, n=4):
    # every set has ``size`` random columns; no 4-element hitting set exists
    rng = np.random.default_rng(seed)
    bad = np.zeros((rows, cols), dtype=bool)
    for i in range(rows):
        bad[i, rng.choice(cols, size, replace=False)] = True
    order = np.arange(cols)
    return lambda: kernels.find_hitting_set(bad, order, n)


def workloads(quick: bool):
    h = 2000 if quick else 10**4
    A = Construction42(1, 2)
    F2 = range(-42, 43)
    F3 = syndetic.synthesize_witnesses(syndetic.construction42_certificate(1, 2), 3)[2]
    B = CorollaryB("B")
    win = B.window(0, 2 ** (18 if quick else 22))
    stream = A.stream
    prefix = 2 * R_closed(12 if quick else 16, 2)
    stream.ensure(prefix)
    return {
        "hitting set, 600 sets of 40 in 200, n=4": _hitting_set_random(),
        f"check_witness n=2, F=[-42,42], W=+-{h}":
            lambda: syndetic.check_witness(A, 2, F2, (-h, h)).status,
        f"check_witness n=3, analytic F_3 (patterns), W=+-{h}":
            lambda: syndetic.check_witness(A, 3, F3, (-h, h)).status,
        f"longest_subAP D=2 on B, {win.bits.size} positions":
            lambda: len(longest_subAP(win, 2)),
        f"empirical_L D=6, prefix {prefix}":
            lambda: empirical_L(stream, 6, prefix),
        f"longest_run on {win.bits.size} bits":
            lambda: kernels.longest_run(win.bits, True),
    }


def best_time(fn, repeat):
    result = fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times), result


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller sizes")
    ap.add_argument("--json", help="write the timings here")
    args = ap.parse_args(argv)

    backends = _accel.available_backends()
    rows = []
    for name, fn in workloads(args.quick).items():
        row = {"workload": name}
        results = {}
        for b in backends:
            with _accel.use_backend(b):
                row[b], results[b] = best_time(fn, args.repeat)
        vals = list(results.values())
        row["agree"] = all(_same(v, vals[0]) for v in vals)
        rows.append(row)

    width = max(len(r["workload"]) for r in rows)
    head = f"{'workload':<{width}}  " + "  ".join(f"{b:>10}" for b in backends)
    if "numba" in backends:
        head += f"  {'speedup':>8}"
    print(head)
    for r in rows:
        line = f"{r['workload']:<{width}}  " + "  ".join(f"{r[b]:>9.4f}s" for b in backends)
        if "numba" in backends:
            line += f"  {r['numpy'] / r['numba']:>7.1f}x"
        if not r["agree"]:
            line += "  BACKENDS DISAGREE"
        print(line)
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)
    return 0 if all(r["agree"] for r in rows) else 1


def _same(a, b):
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        return np.array_equal(a, b)
    return a == b


if __name__ == "__main__":
    raise SystemExit(main())
