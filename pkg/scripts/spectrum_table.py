#!/usr/bin/env python3
"""Print the eigenvalue table of the order-2n connectivity matrix.

For each partition of n: the eigenvalue, its predicted multiplicity (squared
tableau count of the doubled shape), the measured eigenspace dimension, and
the sphere size of the class indexed by the same partition.

    python scripts/spectrum_table.py 4
    python scripts/spectrum_table.py 5 --skip-measure
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from matchconn.scheme import (
    certify_spectrum,
    eigenvalue_eta,
    sphere_size,
    spectrum_primes,
)
from matchconn.tableaux import f_lambda, partitions


@dataclass
class TableConfig:
    n: int
    measure: bool = True


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("n", type=int, help="half order (matrix acts on matchings of 2n points)")
    ap.add_argument("--skip-measure", dest="measure", action="store_false",
                    help="print predictions only, no eigenspace measurement")
    ns = ap.parse_args(argv)
    cfg = TableConfig(n=ns.n, measure=ns.measure)

    if cfg.measure:
        lines, all_ok = certify_spectrum(cfg.n)
        print(f"{'partition':>12} {'eta':>8} {'mult':>6} {'measured':>9} {'sphere':>7}")
        for line in lines:
            print(
                f"{line.lam.text():>12} {line.eta:>8} {line.multiplicity:>6}"
                f" {line.nullity_measured:>9} {sphere_size(cfg.n, line.lam):>7}"
            )
        if cfg.n == 5:
            print(f"measured over primes {spectrum_primes(5)}")
        print("certified" if all_ok else "MISMATCH")
        return 0 if all_ok else 1

    print(f"{'partition':>12} {'eta':>8} {'mult':>6} {'sphere':>7}")
    for lam in partitions(cfg.n):
        eta = eigenvalue_eta(cfg.n, lam)
        mult = f_lambda(lam.double())
        print(f"{lam.text():>12} {eta:>8} {mult:>6} {sphere_size(cfg.n, lam):>7}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
