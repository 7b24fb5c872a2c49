#!/usr/bin/env python3
"""Futaki data and soliton vector along the segment from a Reeb vector to x_c.

Both the projected gradient and the Sigma barycenter shrink to zero at the
minimizer; the printed ratio between them stays negative along the way.
"""

import argparse

import numpy as np

from sasakit import build_sigma, build_volume_model, futaki_report, load_cone, minimize, soliton_vector


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("diagram", help="toric diagram JSON")
    ap.add_argument("--reeb", type=float, nargs="+", required=True)
    ap.add_argument("--steps", type=int, default=8)
    args = ap.parse_args()

    cone = load_cone(args.diagram)
    vm = build_volume_model(cone)
    xc = minimize(vm).x_c
    a = np.asarray(args.reeb, dtype=float)
    print(" s      |B^T grad V|   |bary|        ratio        |c|")
    for s in np.linspace(0.0, 1.0, args.steps + 1):
        xi = (1 - s) * a + s * xc
        sigma = build_sigma(cone, xi)
        rep = futaki_report(vm, sigma)
        sol = soliton_vector(sigma)
        ratio = f"{rep.fitted_constant:12.5f}" if rep.fitted_constant is not None else "         n/a"
        print(f"{s:4.2f}  {rep.norm:12.4e}  {rep.barycenter_norm:12.4e}  {ratio}  {np.linalg.norm(sol.c):.4e}")


if __name__ == "__main__":
    main()
