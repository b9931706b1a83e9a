"""Regenerate tests/fixtures/derived.json from the naive oracles in tests/oracles.py.

Only input data (matrix entries, edge lists) is taken from the package; every
recorded value is computed by the oracles.

    python scripts/make_fixtures.py
"""

from __future__ import annotations

import itertools
import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

import oracles  # noqa: E402

# Matrix data (the order-4 example matrix and the order-2 Sylvester matrix).
ORDER4 = [[1, 1, 1, 1], [-1, -1, 1, 1], [-1, 1, -1, 1], [1, -1, -1, 1]]
SYLVESTER2 = [[1, 1], [1, -1]]


def complete_edges(t):
    return [(a, b) for a in range(1, t + 1) for b in range(a + 1, t + 1)]


def cycle_edges(n):
    return [(i, i + 1) for i in range(1, n)] + [(1, n)]


def grid_strong_edges(rows, cols):
    vid = lambda r, c: r * cols + c + 1  # noqa: E731
    out = set()
    for r, c in itertools.product(range(rows), range(cols)):
        for dr, dc in ((0, 1), (1, 0), (1, 1), (1, -1)):
            r2, c2 = r + dr, c + dc
            if 0 <= r2 < rows and 0 <= c2 < cols:
                a, b = vid(r, c), vid(r2, c2)
                out.add((min(a, b), max(a, b)))
    return sorted(out)


def small_graphs():
    cases = {}
    for t in (3, 4, 5, 6):
        cases[f"K{t}"] = (t, complete_edges(t))
    for n in (3, 5, 8):
        cases[f"C{n}"] = (n, cycle_edges(n))
    cases["path8"] = (8, [(i, i + 1) for i in range(1, 8)])
    cases["star8"] = (8, [(1, i) for i in range(2, 9)])
    cases["caterpillar8"] = (8, [(1, 2), (2, 3), (3, 4), (1, 5), (2, 6), (3, 7), (4, 8)])
    cases["binary7"] = (7, [(1, 2), (1, 3), (2, 4), (2, 5), (3, 6), (3, 7)])
    cases["P3xP3"] = (9, grid_strong_edges(3, 3))
    cases["K2xP3"] = (6, grid_strong_edges(3, 2))
    return cases


def main() -> None:
    out = {"exact_stack_number": {}, "graph_edges": {}}
    for name, (n, edges) in small_graphs().items():
        out["exact_stack_number"][name] = oracles.brute_stack_number(n, edges)
        out["graph_edges"][name] = [n, edges]
        print(name, out["exact_stack_number"][name], flush=True)

    out["square_faces"] = {}
    out["hexagon_faces"] = {}
    for n in (1, 2, 3, 4):
        sq, hx = oracles.face_counts_by_residue(n)
        out["square_faces"][str(n)] = sq
        out["hexagon_faces"][str(n)] = hx

    out["normalize_flip_rows"] = [k + 1 for k, row in enumerate(SYLVESTER2) if row[-1] == -1]
    out["order4_perms"] = {}
    out["order4_lcs"] = {}
    out["order4_sum_set_sizes"] = {}
    for m in range(2, 7):
        perms = [oracles.digit_flip_permutation(row, m) for row in ORDER4]
        n = len(perms[0])
        if m <= 3:
            out["order4_perms"][str(m)] = perms
            out["order4_lcs"][str(m)] = {
                f"{k + 1},{l + 1}": oracles.lcs_python(perms[k], perms[l])
                for k, l in itertools.combinations(range(4), 2)
            }
        sizes = {}
        for k, l in itertools.combinations(range(4), 2):
            sums = {perms[k][i] + perms[l][j] for i in range(n) for j in (i - 1, i, i + 1) if 0 <= j < n}
            sizes[f"{k + 1},{l + 1}"] = len(sums)
        out["order4_sum_set_sizes"][str(m)] = sizes

    target = ROOT / "tests" / "fixtures" / "derived.json"
    target.parent.mkdir(exist_ok=True)
    target.write_text(json.dumps(out, indent=1, sort_keys=True) + "\n")
    print("wrote", target)


if __name__ == "__main__":
    main()
