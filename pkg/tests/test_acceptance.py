"""Acceptance criteria 1-9, each with its time budget.

Every test records a one-line PASS/FAIL verdict; ``conftest.py`` prints the
lines at the end of the pytest run.  ``python tests/test_acceptance.py``
runs the criteria directly and prints the same lines.
"""

from __future__ import annotations

import math
import tempfile
import time
from pathlib import Path

import numpy as np

from stacklab import graphs, hadamard, layouts, tessellation, triangles
from stacklab import product_layouts as pl
from stacklab.hadamard import ORDER4_EXAMPLE

RESULTS: dict[int, str] = {}

BUDGET = {1: 60, 2: 120, 3: 30, 4: 20, 5: 60, 6: 300, 7: 30, 8: 20, 9: 60}


class Criterion:
    """Collects failures and timing for one criterion, then records a verdict."""

    def __init__(self, number: int, title: str):
        self.number, self.title = number, title
        self.failures: list[str] = []
        self.notes: list[str] = []

    def check(self, ok: bool, what: str) -> None:
        if not ok and len(self.failures) < 5:
            self.failures.append(what)

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        if exc is not None:
            self.failures.append(f"{exc_type.__name__}: {exc}")
        budget = BUDGET[self.number]
        if elapsed > budget:
            self.failures.append(f"took {elapsed:.1f}s, budget {budget}s")
        verdict = "PASS" if not self.failures else "FAIL"
        detail = "; ".join(self.failures or self.notes)
        RESULTS[self.number] = (
            f"criterion {self.number} [{verdict}] {self.title} ({elapsed:.1f}s / {budget}s)"
            + (f": {detail}" if detail else "")
        )
        assert not self.failures, RESULTS[self.number]
        return False


def strong_cube(n):
    p = graphs.path(n)
    return graphs.strong_product(p, p, p)


def strong_grid(n):
    return graphs.strong_product(graphs.path(n), graphs.path(n))


def outerplanar_cases(count=20, seed=2024):
    rng = np.random.default_rng(seed)
    sizes = rng.integers(3, 51, size=count)
    return [pl.random_maximal_outerplanar(int(n), rng) for n in sizes]


def test_criterion_1_triple_path_cubes():
    with Criterion(1, "triple path m=2,3,4 within 56m+5") as c:
        for m in (2, 3, 4):
            n = m**3
            report = layouts.validate_stack_layout(strong_cube(n), pl.triple_path_layout(n))
            c.check(report.valid, f"n={n}: {report.violation_count} crossings")
            c.check(report.pages_used <= 56 * m + 5, f"n={n}: {report.pages_used} > {56 * m + 5}")
            c.notes.append(f"n={n}: {report.pages_used}/{56 * m + 5}")


def test_criterion_2_triple_path_general_n():
    with Criterion(2, "triple path n=5..50 within 112 n^(1/3) + 5") as c:
        worst = math.inf
        for n in range(5, 51):
            report = layouts.validate_stack_layout(strong_cube(n), pl.triple_path_layout(n))
            bound = pl.triple_path_bound(n)
            c.check(report.valid, f"n={n}: invalid")
            c.check(report.pages_used <= bound, f"n={n}: {report.pages_used} > {bound:.2f}")
            worst = min(worst, bound - report.pages_used)
        c.notes.append(f"smallest margin {worst:.1f}")


def test_criterion_3_grids():
    with Criterion(3, "grid layouts n=2..300: 4 stacks / 8 matchings") as c:
        for n in range(2, 301):
            g = strong_grid(n)
            plain = layouts.validate_stack_layout(g, pl.grid_stack_layout(n))
            c.check(plain.valid and plain.pages_used == 4, f"n={n}: plain {plain.pages_used} stacks")
            disp = layouts.validate_stack_layout(g, pl.grid_stack_layout(n, dispersable=True))
            c.check(disp.valid and disp.pages_used <= 8, f"n={n}: dispersable {disp.pages_used} stacks")
            c.check(all(disp.per_page_is_matching.values()), f"n={n}: a stack is not a matching")


def test_criterion_4_hadamard_family():
    with Criterion(4, "order-4 permutation family m=2..6") as c:
        pairs = [(k, l) for k in range(1, 5) for l in range(k + 1, 5)]
        for m in range(2, 7):
            family = hadamard.permutation_family(ORDER4_EXAMPLE, m)
            n = family.n
            for k in range(1, 5):
                c.check(np.array_equal(np.sort(family.perm(k)), np.arange(1, n + 1)), f"m={m}: pi_{k} not bijective")
                report = layouts.validate_stack_layout(graphs.path(n), hadamard.path_layout_under_permutation(family, k))
                c.check(report.valid and report.pages_used <= 5, f"m={m}, k={k}: path layout {report.pages_used}")
            worst = max(hadamard.sum_set(family, k, l).size for k, l in pairs)
            c.check(worst <= 7 * m, f"m={m}: sum set {worst} > {7 * m}")
            c.notes.append(f"m={m}: max sum set {worst}/{7 * m}")
        family = hadamard.permutation_family(ORDER4_EXAMPLE, 2)
        longest = max(hadamard.lcs(family, k, l) for k, l in pairs)
        c.check(longest <= 2, f"m=2: LCS {longest}")


def test_criterion_5_queue_layouts():
    with Criterion(5, "4-queue layouts n=2..100") as c:
        for n in range(2, 101):
            g, layout = pl.queue_layout_triple_path(n)
            report = layouts.validate_queue_layout(g, layout)
            c.check(report.valid and report.pages_used == 4, f"n={n}: {report.pages_used} queues, valid={report.valid}")


def test_criterion_6_triangle_families():
    with Criterion(6, "triangle families l=0,1,2 and cube-bound oracle") as c:
        for level in (0, 1, 2):
            family = triangles.build_triangle_family(level)
            k = family.total_colors()
            report = triangles.verify_family(family)
            c.check(len(family) == 8**level == (k // 3) ** 3, f"l={level}: {len(family)} triangles, k={k}")
            c.check(k == 3 * 2**level, f"l={level}: {k} colours")
            c.check(report.ok, f"l={level}: {report.problems[:1]}")
        oracle = triangles.cube_bound_oracle(max_m=3, max_points=12)
        c.check(oracle.injective, f"collisions {oracle.collisions[:1]}")
        c.check(oracle.complete, oracle.limit_hit)
        c.notes.append(f"families {oracle.families}, colourings {oracle.colorings_checked}")


def test_criterion_7_clique_products():
    with Criterion(7, "outerplanar x K_t within 3t, star forests, K_t in ceil(t/2)") as c:
        for g, layout in outerplanar_cases():
            part = pl.star_forest_partition(g, layout)
            c.check(pl.check_star_forest_partition(g, part) == [], f"|V|={g.vertex_count}: checker failed")
            for t in range(2, 7):
                product = pl.product_with_complete(g, layout, t)
                report = layouts.validate_stack_layout(graphs.strong_product(g, graphs.complete(t)), product)
                c.check(report.valid and report.pages_used <= 3 * t,
                        f"|V|={g.vertex_count}, t={t}: {report.pages_used} stacks, valid={report.valid}")
        for t in range(1, 11):
            report = layouts.validate_stack_layout(graphs.complete(t), pl.complete_graph_layout(t))
            want = (t + 1) // 2 if t > 1 else 0
            c.check(report.valid and report.pages_used == want, f"K_{t}: {report.pages_used} stacks")


def test_criterion_8_tessellation():
    with Criterion(8, "tessellation graphs n=1,2,3") as c:
        sizes = {}
        for n in (1, 2, 3):
            tg = tessellation.build_Gn(n)
            deg = tg.graph.degrees()
            corners = tg.interior_corners()
            c.check(int(deg.max()) == 7, f"n={n}: max degree {deg.max()}")
            c.check(bool(np.all(deg[corners - 1] == 6)), f"n={n}: interior corner degree != 6")
            c.check(len(tg.window.hexagons) == (2 * n - 1) ** 3, f"n={n}: {len(tg.window.hexagons)} hexagons")
            sizes[n] = tg.graph.vertex_count
        ratio = sizes[3] / sizes[2]
        c.check(sizes[1] < sizes[2] < sizes[3], f"sizes {sizes}")
        c.check(1.7 <= ratio <= 6.8, f"ratio {ratio:.2f}")
        c.notes.append(f"|V| {sizes}, ratio {ratio:.2f}")


def random_tree(n, rng):
    edges = [(int(rng.integers(1, v)), v) for v in range(2, n + 1)]
    return graphs.Graph.from_edges(n, edges)


def round_trip(c, label, g, layout, folder: Path):
    gpath, lpath = folder / "g.txt", folder / "l.txt"
    graphs.save_graph(g, gpath)
    layouts.save_layout(layout, lpath)
    back_g, back_l = graphs.load_graph(gpath), layouts.load_layout(lpath)
    ok = (
        type(back_l) is type(layout)
        and np.array_equal(back_l.assignment, layout.assignment)
        and layouts.validate_layout(back_g, back_l).valid
    )
    c.check(ok, f"{label}: round trip failed")


def test_criterion_9_oracles_and_round_trips():
    with Criterion(9, "exact stack numbers and file round trips") as c:
        expected = {"K4": (graphs.complete(4), 2), "K5": (graphs.complete(5), 3), "K6": (graphs.complete(6), 3)}
        for n in range(3, 9):
            expected[f"C{n}"] = (graphs.cycle(n), 1)
        rng = np.random.default_rng(9)
        for n in range(2, 9):
            expected[f"tree{n}"] = (random_tree(n, rng), 1)
        for name, (g, want) in expected.items():
            got = layouts.exact_stack_number(g)
            c.check(got == want, f"{name}: {got} != {want}")
        with tempfile.TemporaryDirectory() as tmp:
            folder = Path(tmp)
            # every layout of criteria 1, 4, 6 (families), 7 and 8 (graphs);
            # a fixed spread of sizes from the long sweeps of criteria 2, 3 and 5
            for n in (8, 27, 64):
                round_trip(c, f"triple n={n}", strong_cube(n), pl.triple_path_layout(n), folder)
            for n in (5, 11, 17, 23, 29, 35, 41, 50):
                round_trip(c, f"triple n={n}", strong_cube(n), pl.triple_path_layout(n), folder)
            for n in (2, 3, 4, 5, 10, 50, 100, 300):
                for disp in (False, True):
                    round_trip(c, f"grid n={n}", strong_grid(n), pl.grid_stack_layout(n, disp), folder)
            for m in range(2, 7):
                family = hadamard.permutation_family(ORDER4_EXAMPLE, m)
                for k in range(1, 5):
                    round_trip(c, f"path m={m} k={k}", graphs.path(family.n),
                               hadamard.path_layout_under_permutation(family, k), folder)
            for n in (2, 3, 10, 25, 50, 100):
                g, layout = pl.queue_layout_triple_path(n)
                round_trip(c, f"queue n={n}", g, layout, folder)
            for g, layout in outerplanar_cases():
                for t in range(2, 7):
                    round_trip(c, f"K_t product t={t}", graphs.strong_product(g, graphs.complete(t)),
                               pl.product_with_complete(g, layout, t), folder)
            for t in range(1, 11):
                round_trip(c, f"K_{t}", graphs.complete(t), pl.complete_graph_layout(t), folder)
            for level in (0, 1, 2):
                family = triangles.build_triangle_family(level)
                back = triangles.parse_family(triangles.format_family(family))
                c.check(np.array_equal(back.colors, family.colors), f"family l={level}: round trip failed")
            for n in (1, 2, 3):
                tg = tessellation.build_Gn(n)
                back = graphs.parse_graph(tessellation.format_tess_graph(tg))
                c.check(np.array_equal(back.edges, tg.graph.edges), f"G_{n}: round trip failed")


if __name__ == "__main__":
    import sys

    failed = 0
    for name, fn in list(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    for number in sorted(RESULTS):
        print(RESULTS[number])
    sys.exit(1 if failed else 0)
