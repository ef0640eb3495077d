#!/usr/bin/env python3
"""Reproduce the headline numbers for the reference configuration.

Writes out/reference_curves.csv (+ .svg) and prints the transition
parameters, then runs the full oracle table.
"""

import os
import sys

from butterflyshift.cli import main

HERE = os.path.dirname(os.path.abspath(__file__))
CFG = os.path.join(HERE, "..", "configs", "reference.cfg")
OUT = os.path.join(HERE, "..", "out")


def run() -> int:
    os.makedirs(OUT, exist_ok=True)
    rc = main(["critical", "--config", CFG])
    if rc:
        return rc
    rc = main(["curves", "--config", CFG,
               "--out", os.path.join(OUT, "reference_curves.csv"), "--svg"])
    if rc:
        return rc
    return main(["oracle", "--config", CFG])


if __name__ == "__main__":
    sys.exit(run())
