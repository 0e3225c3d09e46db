#!/usr/bin/env python3
"""Full desk-scale confrontation of exact prime counts with their models.

Builds the sieve once, prints the per-decade table (ratio, band check,
correction model, emergent exponent, sigma fixed point), fits the error
exponents of the three comparators, and writes the CSV/JSON artifacts under
out/pnt_confrontation/.  Adjust the bound with --nmax (default 1e8).
"""

import argparse
import math
import time

from scalefree import pnt, primes, reportio


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nmax", type=float, default=1e8, help="sieve bound (default 1e8)")
    ap.add_argument("--threads", type=int, default=4)
    ap.add_argument("--out", default="out/pnt_confrontation")
    args = ap.parse_args()

    nmax = int(args.nmax)
    decades = list(range(3, int(math.log10(nmax)) + 1))
    ns = [10**k for k in decades]

    t0 = time.perf_counter()
    pt = primes.build_table(nmax, threads=args.threads)
    print(f"sieve to {nmax:.0e}: {time.perf_counter() - t0:.2f} s "
          f"({pt.pi(nmax)} primes)")

    print(f"{'N':>12} {'pi(N)':>10} {'ratio':>10} {'exponent':>10} "
          f"{'model':>12} {'err/band':>10} {'sigma(1/N)':>12}")
    for s in pnt.ratio_table(pt, ns):
        band = math.sqrt(s.n) * math.log(s.n)
        sigma = pnt.sigma_fixed_point(1.0 / s.n)
        print(f"{s.n:>12} {s.pi_n:>10} {s.ratio:>10.6f} {s.exponent:>10.6f} "
              f"{s.model_ratio:>12.8f} {abs(s.li_err) / band:>10.2e} {sigma:>12.4e}")

    summary = pnt.fit_summary(pt, ns)
    for model, fit in summary["fits"].items():
        print(f"fit {model:>12}: slope {fit['slope']:+.4f}  r2 {fit['r2']:.5f}")
    print(f"band: all inside = {summary['band']['all_inside']} "
          f"(max err/band {summary['band']['max_err_over_band']:.3e})")

    reportio.write_csv(
        f"{args.out}/pnt_table.csv",
        ["N", "pi", "ratio", "li", "li_err", "band", "inside", "model_ratio", "exponent", "sigma"],
        pnt.sample_csv_rows(pt, ns),
    )
    reportio.write_json(f"{args.out}/fits.json", summary)
    print(f"artifacts written under {args.out}/")


if __name__ == "__main__":
    main()
