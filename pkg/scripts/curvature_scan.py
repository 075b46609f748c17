#!/usr/bin/env python3
"""Curvature-bound scan over sampled triangles and hinges.

Runs the triangle comparison in both directions and the monotonicity form on
the flat strip and on the segment product, printing worst defects.
"""

import argparse

from lorentz_lab.models import EuclideanSegment, ProductSpace, minkowski_space
from lorentz_lab.comparison import (test_curvature_lower0,
                                    test_monotonicity_comparison)
from lorentz_lab.sampling import minkowski_triangles, product_hinges


def scan(space, name, samples, seed):
    triangles = minkowski_triangles(space, samples, seed)
    for mode in ("lower", "upper"):
        report = test_curvature_lower0(space, triangles, mode=mode, tol=1e-9,
                                       seed=seed)
        print(f"{name:18s} {mode:5s}  passed={report.passed!s:5s}  "
              f"worst defect {report.worst_defect:+.3e}")
    worst = 0.0
    ok = True
    for leg_a, leg_b in product_hinges(space, max(4, samples // 10), seed):
        rep = test_monotonicity_comparison(space, leg_a, leg_b, "lower",
                                           tol=1e-9)
        worst = max(worst, rep.max_violation)
        ok &= rep.passed
    print(f"{name:18s} mono   passed={ok!s:5s}  worst violation {worst:.3e}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=100)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    scan(minkowski_space(-6, 6, -6, 6, 0.25), "flat strip",
         args.samples, args.seed)
    scan(ProductSpace(EuclideanSegment(0.0, 1.0, 21), -2, 2, 0.05),
         "segment product", args.samples, args.seed)


if __name__ == "__main__":
    main()
