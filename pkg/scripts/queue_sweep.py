"""Queues used by the lexicographic queue layout of the triangulated cube grid.

    python3 scripts/queue_sweep.py --n 2 10 50 100
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from dataclasses import dataclass, field

from stacklab import layouts
from stacklab import product_layouts as pl


@dataclass
class QueueSweepConfig:
    sizes: list[int] = field(default_factory=lambda: list(range(2, 101)))
    out: str | None = None


def run(cfg: QueueSweepConfig) -> list[dict]:
    rows = []
    for n in cfg.sizes:
        start = time.perf_counter()
        g, layout = pl.queue_layout_triple_path(n)
        report = layouts.validate_queue_layout(g, layout)
        rows.append({
            "n": n, "edges": g.edge_count, "queues_used": report.pages_used,
            "valid": int(report.valid), "seconds": round(time.perf_counter() - start, 3),
        })
    return rows


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=QueueSweepConfig().sizes)
    ap.add_argument("--out", help="CSV file (default: stdout)")
    args = ap.parse_args(argv)
    cfg = QueueSweepConfig(sizes=args.n, out=args.out)
    rows = run(cfg)
    handle = open(cfg.out, "w", newline="") if cfg.out else sys.stdout
    writer = csv.DictWriter(handle, fieldnames=list(rows[0]))
    writer.writeheader()
    writer.writerows(rows)
    if cfg.out:
        handle.close()
    return 0 if all(r["valid"] for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
