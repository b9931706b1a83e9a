"""Stacks used by the triple-path layout of P_n ⊠ P_n ⊠ P_n against its bound.

    python3 scripts/triple_path_sweep.py --n 5 8 27 64 --out sweep.csv
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from dataclasses import dataclass, field

from stacklab import graphs, layouts
from stacklab import product_layouts as pl


@dataclass
class SweepConfig:
    sizes: list[int] = field(default_factory=lambda: list(range(5, 51)))
    validate: bool = True
    out: str | None = None


def run(cfg: SweepConfig) -> list[dict]:
    rows = []
    for n in cfg.sizes:
        start = time.perf_counter()
        layout = pl.triple_path_layout(n)
        valid = None
        if cfg.validate:
            p = graphs.path(n)
            valid = layouts.validate_stack_layout(graphs.strong_product(p, p, p), layout).valid
        bound = pl.triple_path_bound(n)
        used = layout.pages_used()
        rows.append({
            "n": n, "stacks_used": used, "bound": round(bound, 3), "margin": round(bound - used, 3),
            "valid": "" if valid is None else int(valid), "seconds": round(time.perf_counter() - start, 3),
        })
    return rows


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=SweepConfig().sizes)
    ap.add_argument("--no-validate", action="store_true", help="skip building the host graph")
    ap.add_argument("--out", help="CSV file (default: stdout)")
    args = ap.parse_args(argv)
    cfg = SweepConfig(sizes=args.n, validate=not args.no_validate, out=args.out)
    rows = run(cfg)
    handle = open(cfg.out, "w", newline="") if cfg.out else sys.stdout
    writer = csv.DictWriter(handle, fieldnames=list(rows[0]))
    writer.writeheader()
    writer.writerows(rows)
    if cfg.out:
        handle.close()
    return 0 if all(r["valid"] != 0 for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
