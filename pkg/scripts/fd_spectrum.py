#!/usr/bin/env python3
"""Compare the closed-form cone spectrum with a finite-difference solve.

    python scripts/fd_spectrum.py [--theta-over-pi 0.5] [--grid 2048] [--count 20]
"""

import argparse
import math
from fractions import Fraction

import numpy as np

from spinstat.oracles import fd_angular_spectrum
from spinstat.spectral2d import ExtensionBC, cone_spectrum


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--theta-over-pi", default="0,1/2,1")
    ap.add_argument("--grid", type=int, default=2048)
    ap.add_argument("--count", type=int, default=20)
    args = ap.parse_args()

    for t in args.theta_over_pi.split(","):
        bc = ExtensionBC(Fraction(t))
        fd = fd_angular_spectrum(bc.theta, n_grid=args.grid, count=args.count)
        exact = cone_spectrum(bc, args.count).as_array()
        nearest = np.array([exact[np.argmin(np.abs(exact - mu))] for mu in fd])
        err = np.abs(fd - nearest)
        print(f"theta = {bc.theta_over_pi} pi   max |fd - exact| = {err.max():.2e}")
        for mu, ex, e in zip(fd, nearest, err):
            print(f"  {mu:+14.10f}  {ex:+6g}  {e:.1e}")


if __name__ == "__main__":
    main()
