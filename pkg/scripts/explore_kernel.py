#!/usr/bin/env python3
"""Sweep eigenvalue pairs and print the box kernel dimension for each.

The solver looks for vectors killed by the raising modes and scaled by
e(0) and f(1).  Away from the module's own (lam, mu) the dimension should
drop to zero; at the critical level the center contributes extra
dimensions that the sweep makes visible.

Example:
    python3 scripts/explore_kernel.py --lam 2 --mu 3 --kappa 1 --box 3,3 --range 3
"""

import argparse
import sys

from affsl2.exact import Q, format_rational
from affsl2.whittaker import TruncationBox, UniversalWhittaker, whittaker_vector_solver


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--lam", default="2")
    parser.add_argument("--mu", default="3")
    parser.add_argument("--kappa", default="1")
    parser.add_argument("--box", default="3,3")
    parser.add_argument("--range", type=int, default=2, dest="span",
                        help="sweep lam', mu' over [-range, range]")
    args = parser.parse_args()

    lam, mu, kappa = (Q(v) for v in (args.lam, args.mu, args.kappa))
    w, l = (int(part) for part in args.box.split(","))
    box = TruncationBox(w, l)
    handle = UniversalWhittaker(lam, mu, kappa)

    print(
        f"module V({format_rational(lam)},{format_rational(mu)},"
        f"{format_rational(kappa)}), box({w},{l})"
    )
    hits = []
    for lam2 in range(-args.span, args.span + 1):
        row = []
        for mu2 in range(-args.span, args.span + 1):
            dim = len(whittaker_vector_solver(handle, Q(lam2), Q(mu2), box))
            row.append(str(dim))
            if dim:
                hits.append((lam2, mu2, dim))
        print("  " + " ".join(row))
    if hits:
        for lam2, mu2, dim in hits:
            print(f"kernel dimension {dim} at (lam', mu') = ({lam2}, {mu2})")
    else:
        print("no eigenvectors anywhere in the sweep")
    return 0


if __name__ == "__main__":
    sys.exit(main())
