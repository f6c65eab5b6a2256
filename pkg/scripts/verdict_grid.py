#!/usr/bin/env python3
"""Print the 2D and 3D verdict grids as compact text tables.

Each cell shows the statistics verdict and the spectral verdict; they
agree everywhere on the grid.  In 3D the spectral column names the parity
sector in which the doubling relation holds.

    python scripts/verdict_grid.py
"""

from fractions import Fraction as F

from spinstat.intertwine import theorem1_verdict
from spinstat.spectral2d import ExtensionBC
from spinstat.spectral3d import theorem4_verdict

SIGMAS = [F(j, 2) for j in range(0, 5)]


def yn(b):
    return "y" if b else "."


def main():
    print("2D: ssc/equiv, rows lambda, columns (sigma, R)")
    head = "".join(f" sig={str(s):>3} R={R:+d}" for s in SIGMAS for R in (1, -1))
    print(f"{'lambda':>7}{head}")
    for k in range(0, 9):
        lam = F(k, 2)
        cells = []
        for s in SIGMAS:
            for R in (1, -1):
                v = theorem1_verdict(s, lam, ExtensionBC.from_sign(R), M=8, witness=False).verdicts
                cells.append(f"{yn(v['ssc']):>10}/{yn(v['equiv'])}")
        print(f"{str(lam):>7}" + "".join(cells))

    print("\n3D: ssc/sector, rows lambda, columns (sigma, s)")
    head = "".join(f" sig={str(s):>3} s={sg:+d}" for s in SIGMAS for sg in (1, -1))
    print(f"{'lambda':>7}{head}")
    for lam in range(-2, 3):
        cells = []
        for s in SIGMAS:
            for sg in (1, -1):
                v = theorem4_verdict(s, lam, sg, M=8, witness=False).verdicts
                sector = "+" if v["equiv_plus"] else "-"
                cells.append(f"{yn(v['ssc']):>10}/{sector}")
        print(f"{lam:>7}" + "".join(cells))


if __name__ == "__main__":
    main()
