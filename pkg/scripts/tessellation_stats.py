"""Size and degree statistics of the subdivided truncated-octahedron graphs G_n.

    python3 scripts/tessellation_stats.py --n 1 2 3 --export-dir out/
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass, field
from pathlib import Path

from stacklab import tessellation


@dataclass
class TessConfig:
    sizes: list[int] = field(default_factory=lambda: [1, 2, 3])
    export_dir: str | None = None


def run(cfg: TessConfig) -> list[dict]:
    rows = []
    previous = None
    for n in cfg.sizes:
        tg = tessellation.build_Gn(n)
        row = tessellation.tess_stats(tg)
        row["growth"] = "" if previous is None else round(row["vertices"] / previous, 3)
        previous = row["vertices"]
        rows.append(row)
        if cfg.export_dir:
            folder = Path(cfg.export_dir)
            folder.mkdir(parents=True, exist_ok=True)
            (folder / f"G{n}.txt").write_bytes(tessellation.format_tess_graph(tg))
    return rows


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=TessConfig().sizes)
    ap.add_argument("--export-dir", help="also write each G_n as a graph file")
    args = ap.parse_args(argv)
    rows = run(TessConfig(sizes=args.n, export_dir=args.export_dir))
    writer = csv.DictWriter(sys.stdout, fieldnames=list(rows[0]))
    writer.writeheader()
    writer.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
