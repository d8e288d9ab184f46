"""Time the product kernels under the numba and pure-numpy backends.

The backend is fixed at import time, so each backend runs in its own
interpreter; the parent collects the timings and prints a table.

    python benchmarks/bench_kernels.py [--repeat 5] [--points 200]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np


def _inputs(n, seed=0):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        tau, sigma = (complex(rng.uniform(-0.5, 0.5), rng.uniform(0.4, 1.5)) for _ in range(2))
        z = complex(rng.uniform(-0.5, 0.5), rng.uniform(0, 1) * (tau + sigma).imag)
        out.append((z, tau, sigma))
    return out


def worker(points: int, repeat: int) -> dict:
    from gammagerbe import _kernels as K
    from gammagerbe.family import gamma_ab_cone

    pts = _inputs(points)
    cases = {
        "theta": lambda: [K.theta_logsum(z, t, 1e-14, 10**6) for z, t, _ in pts],
        "gamma": lambda: [K.gamma_logsum(z, t, s, 1e-14, 10**6) for z, t, s in pts],
        "cone": lambda: [
            gamma_ab_cone((1, 0, 0), (0, 1, 0), 0.1, (-t, s, 1)) for _, t, s in pts[: max(1, points // 10)]
        ],
    }
    timings = {}
    for name, fn in cases.items():
        t = time.perf_counter()
        fn()  # warm-up, includes JIT compilation on the numba path
        first = time.perf_counter() - t
        best = min(_timed(fn) for _ in range(repeat))
        timings[name] = {"first": first, "best": best}
    return {"backend": K.BACKEND, "timings": timings}


def _timed(fn) -> float:
    t = time.perf_counter()
    fn()
    return time.perf_counter() - t


def _run_child(disable: bool, points: int, repeat: int) -> dict:
    env = dict(os.environ)
    env["GGL_DISABLE_NUMBA"] = "1" if disable else "0"
    cmd = [sys.executable, __file__, "--child", "--points", str(points), "--repeat", str(repeat)]
    out = subprocess.run(cmd, env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=200)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()
    if args.child:
        print(json.dumps(worker(args.points, args.repeat)))
        return 0

    fast = _run_child(False, args.points, args.repeat)
    slow = _run_child(True, args.points, args.repeat)
    print(f"{'kernel':<8} {fast['backend']:>12} {slow['backend']:>12} {'speedup':>8}   (best of {args.repeat}, s)")
    for name in fast["timings"]:
        a = fast["timings"][name]["best"]
        b = slow["timings"][name]["best"]
        print(f"{name:<8} {a:12.4f} {b:12.4f} {b / a:8.1f}x")
    first = sum(t["first"] - t["best"] for t in fast["timings"].values())
    print(f"one-off numba overhead (compile or cache load): {first:.2f}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
