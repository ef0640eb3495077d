#!/usr/bin/env python3
"""Sweep delta and L around the reference set to map the equilibrium regimes.

Large delta drags eps*beta_c toward 1 (no equilibrium weight on [1] at the
transition); a large one-family alphabet pushes the transition up until
eps*beta_c crosses 2 (two coexisting equilibria).  The crossing needs
L of a few hundred at the reference values of the other parameters.
"""

import os
import sys

from butterflyshift.cli import main

HERE = os.path.dirname(os.path.abspath(__file__))
CFG = os.path.join(HERE, "..", "configs", "reference.cfg")
OUT = os.path.join(HERE, "..", "out")


def run() -> int:
    os.makedirs(OUT, exist_ok=True)
    rc = main(["sweep", "--config", CFG, "--param", "delta",
               "--values", "1,2,5,10,20",
               "--out", os.path.join(OUT, "delta_sweep.csv")])
    if rc:
        return rc
    rc = main(["sweep", "--config", CFG, "--param", "L",
               "--values", "1,5,20,50,100,175,250",
               "--out", os.path.join(OUT, "L_sweep.csv")])
    if rc:
        return rc
    for L in ("1", "250"):
        print(f"--- equilibria at L={L} ---")
        rc = main(["equilibria", "--config", CFG, "--L", L])
        if rc:
            return rc
    return 0


if __name__ == "__main__":
    sys.exit(run())
