"""Largest sum set and longest common subsequence over all pairs of digit-flip permutations.

    python3 scripts/sum_set_table.py --p 4 --m 2 3 4 5 6
    python3 scripts/sum_set_table.py --p 8 --m 2 --lcs
"""

from __future__ import annotations

import argparse
import csv
import itertools
import sys
from dataclasses import dataclass, field

from stacklab import hadamard


@dataclass
class SumSetConfig:
    p: int = 4
    ms: list[int] = field(default_factory=lambda: [2, 3, 4, 5, 6])
    # LCS is quadratic in p^m, keep it for small families
    lcs: bool = False


def matrix_for(p: int) -> hadamard.HadamardMatrix:
    if p == 4:
        return hadamard.ORDER4_EXAMPLE
    return hadamard.normalize_last_column(hadamard.sylvester(p))


def run(cfg: SumSetConfig) -> list[dict]:
    h = matrix_for(cfg.p)
    rows = []
    for m in cfg.ms:
        family = hadamard.permutation_family(h, m)
        pairs = list(itertools.combinations(range(1, cfg.p + 1), 2))
        row = {
            "p": cfg.p, "m": m, "n": family.n,
            "max_sum_set": max(hadamard.sum_set(family, k, l).size for k, l in pairs),
            "bound": hadamard.sum_set_bound(cfg.p, m),
        }
        if cfg.lcs:
            row["max_lcs"] = max(hadamard.lcs(family, k, l) for k, l in pairs)
        rows.append(row)
    return rows


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, default=4)
    ap.add_argument("--m", type=int, nargs="+", default=SumSetConfig().ms)
    ap.add_argument("--lcs", action="store_true")
    args = ap.parse_args(argv)
    rows = run(SumSetConfig(p=args.p, ms=args.m, lcs=args.lcs))
    writer = csv.DictWriter(sys.stdout, fieldnames=list(rows[0]))
    writer.writeheader()
    writer.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
