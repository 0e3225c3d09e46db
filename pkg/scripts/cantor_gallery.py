#!/usr/bin/env python3
"""Geometry gallery: dimensions, removed length, box counts, staircases.

For a few contraction ratios, prints the similarity dimension next to a
dyadic box-counting estimate, checks the removed-length bookkeeping, and
writes level/staircase CSVs under out/cantor_gallery/.
"""

import argparse

from scalefree import cantor, reportio
from scalefree.staircase import Staircase, sample_csv_rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--depth", type=int, default=18, help="depth for box counting")
    ap.add_argument("--out", default="out/cantor_gallery")
    args = ap.parse_args()

    print(f"{'beta':>8} {'dimension':>12} {'box estimate':>14} {'residual':>10} {'removed(12)':>12}")
    for beta in (0.25, 0.3, 1.0 / 3.0, 0.4, 0.45):
        spec = cantor.CantorSpec(beta=beta, depth=args.depth)
        fit = cantor.box_count_estimate(spec, list(range(3, 15)))
        removed = cantor.removed_length(cantor.CantorSpec(beta=beta, depth=12), 12)
        print(f"{beta:>8.4f} {cantor.dimension(spec):>12.6f} {fit.estimate:>14.6f} "
              f"{fit.residual:>10.4f} {removed:>12.8f}")

    shallow = cantor.CantorSpec(beta=1.0 / 3.0, depth=8)
    reportio.write_csv(
        f"{args.out}/levels_third.csv",
        ["level", "index", "kind", "lo", "hi"],
        cantor.level_csv_rows(cantor.build_levels(shallow)),
    )
    st = Staircase(cantor.CantorSpec(beta=1.0 / 3.0))
    reportio.write_csv(f"{args.out}/staircase_third.csv", ["x", "phi(x)"], sample_csv_rows(st, 2048))
    print(f"artifacts written under {args.out}/")


if __name__ == "__main__":
    main()
