"""Run the duality check over every corpus entry and both fields.

    python scripts/duality_sweep.py [--size N]

Prints one line per (entry, field) with the verdict and the window used.
Infinite entries are outside the finiteness hypothesis and are listed
without running the check (the dual of poly:2 alone has 2^12 words at the
window edge).
"""

import argparse
import time

from koszulthh.corpus import CATALOG, build_algebra
from koszulthh.duality import verify_thh_duality
from koszulthh.exact_linear import F2, QQ


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--size", type=int, default=None, help="use |m| <= SIZE instead of the corpus default")
    args = ap.parse_args(argv)
    bad = 0
    for name, default in CATALOG.items():
        n = args.size or default
        for f in (QQ, F2):
            a = build_algebra(name, f)
            if not a.is_finite:
                print(f"{name:<16} {str(f):<5} skipped: infinite total dimension")
                continue
            t0 = time.perf_counter()
            r = verify_thh_duality(a, (-n, n))
            dt = time.perf_counter() - t0
            status = str(r.verdict)
            bad += not r.passed
            print(f"{name:<16} {str(f):<5} [{-n:>3},{n:>3}]  {status:<24} {dt:6.2f}s")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
