#!/usr/bin/env python3
"""Grid checks of the orbit potential at x_c for several fixtures, with timings."""

import argparse
import time
from pathlib import Path

from sasakit import build_potential, build_sigma, build_volume_model, load_cone, minimize, potential_checks

DATA = Path(__file__).resolve().parent.parent / "data"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("fixtures", nargs="*", default=["c3", "conifold", "dp2"])
    ap.add_argument("--radius", type=float, default=10.0)
    ap.add_argument("--samples", type=int, default=21)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    print(f"{'fixture':10s} {'asym sup':>10s} {'ratio':>7s} {'MA sup':>10s} {'ratio':>7s} {'skip':>5s} {'time':>7s}")
    for name in args.fixtures:
        cone = load_cone(DATA / f"{name}.json")
        xc = minimize(build_volume_model(cone)).x_c
        t0 = time.perf_counter()
        rep = potential_checks(
            build_potential(cone, xc), build_sigma(cone, xc), args.radius, args.samples, threads=args.threads
        )
        dt = time.perf_counter() - t0
        print(
            f"{name:10s} {rep.asym_sup:10.4f} {rep.asym_ratio:7.3f} {rep.ma_sup:10.4f} {rep.ma_ratio:7.3f}"
            f" {rep.skipped:5d} {dt:6.1f}s"
        )


if __name__ == "__main__":
    main()
