"""Benchmark: compiled row-reduction core versus the pure-Python fallback.

Three workloads, chosen to show honestly where the compiled core matters:

  micro     pure elimination on banded small-entry rows (width 1024); the
            int64 fast path applies throughout, so this isolates the
            kernel itself
  quotient  the largest real elimination in the package: the relative
            tensor square of the level-4 extension (ambient dimension
            1024), repeated
  tower     end-to-end pipeline (tower to M5 plus a full depth-2
            derivation); dominated by exact scalar arithmetic in the
            verification loops, so the kernel's share is small here

Run:  python benchmarks/bench_rowred.py [--repeat N]

The backend is chosen per subprocess through WEAKHOPF_PURE, so both
implementations run identical code paths and produce identical data.
"""

import argparse
import json
import os
import subprocess
import sys
import time


def workload_micro(width=448):
    from weakhopf._backend import insert_row
    t0 = time.time()
    rows, pivots = [], []
    for i in range(width - 1):
        row = [0] * width
        row[i] = 1
        row[i + 1] = -1
        if i + 2 < width:
            row[i + 2] = 2
        insert_row(rows, pivots, row, width)
    for i in range(0, width - 4, 3):
        row = [0] * width
        row[i] = 2
        row[i + 3] = 1
        row[i + 4] = -2
        insert_row(rows, pivots, row, width)
    return time.time() - t0, len(pivots)


def workload_quotient():
    from weakhopf import algebra, corpus, tower
    t = tower.build_tower(corpus.ext_q_q2(), 4)
    cert4 = t.levels[3].cert
    t0 = time.time()
    dim = 0
    for _ in range(3):
        dim = algebra.relative_tensor_square(cert4).dim
    return time.time() - t0, dim


def workload_tower():
    from weakhopf import corpus, tower
    t0 = time.time()
    t = tower.build_tower(corpus.ext_q_q2(), 5)
    tower.derive(tower.build_tower(corpus.ext_q_m2(), 2))
    return time.time() - t0, t.alg(5).dim


WORKLOADS = {"micro": workload_micro, "quotient": workload_quotient,
             "tower": workload_tower}


def run_child(workload, pure):
    env = dict(os.environ)
    if pure:
        env["WEAKHOPF_PURE"] = "1"
    else:
        env.pop("WEAKHOPF_PURE", None)
    out = subprocess.run(
        [sys.executable, os.path.abspath(__file__), "--child", workload],
        env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--child", help=argparse.SUPPRESS)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    if args.child:
        from weakhopf._backend import BACKEND
        took, sink = WORKLOADS[args.child]()
        print(json.dumps({"backend": BACKEND, "seconds": took,
                          "sink": sink}))
        return

    print("%-9s %-10s %-10s %s" % ("load", "compiled", "pure", "speedup"))
    for workload in WORKLOADS:
        cs = min(run_child(workload, pure=False)["seconds"]
                 for _ in range(args.repeat))
        ps = min(run_child(workload, pure=True)["seconds"]
                 for _ in range(args.repeat))
        print("%-9s %-10s %-10s %.2fx" % (workload, "%.3fs" % cs,
                                          "%.3fs" % ps, ps / cs))


if __name__ == "__main__":
    main()
