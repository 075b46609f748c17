#!/usr/bin/env python3
"""Convergence table for the synchronized-time limit.

Prints t - tau(p, line(t)) along the geometric horizon ladder for a few probe
points of the segment product, together with the extrapolated value and its
error bound: the bound halves with every doubling of the horizon.
"""

from lorentz_lab.models import EuclideanSegment, ProductSpace
from lorentz_lab.asymptotics import busemann_value, vertical_line

HORIZONS = [2 ** k for k in range(1, 9)]


def main():
    space = ProductSpace(EuclideanSegment(0.0, 1.0, 21), -2.0, 2.0, 0.05)
    gamma = vertical_line(space, 0.5, range(-260, 261))
    probes = [(-1.0, 0.0), (0.25, 0.0), (0.0, 0.45), (0.75, 0.5)]
    header = "probe            " + "".join(f"{t:>10d}" for t in HORIZONS)
    print(header)
    for p in probes:
        estimate = busemann_value(space, gamma, p, HORIZONS)
        row = "".join(f"{a:10.5f}" for _, a in estimate.samples)
        print(f"{str(p):16s} {row}")
        print(f"{'':16s} -> value {estimate.value:.6f}  "
              f"error bound {estimate.error_bound:.2e}  "
              f"transverse {estimate.transverse:.4f}")


if __name__ == "__main__":
    main()
