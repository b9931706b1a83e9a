"""Command-line front end: ``python -m stacklab <command> ...``.

Exit codes: 0 success, 1 validation failure (including malformed input
files), 2 usage error.
"""

from __future__ import annotations

import argparse
import itertools
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from stacklab import graphs, hadamard, layouts, product_layouts, tessellation, triangles
from stacklab._text import FormatError

DEFAULT_MAX_EDGES = 50_000_000
LAYOUT_CSV_HEADER = "n,m,p,d,stacks_used,bound,valid"


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    action: Optional[str] = None
    sizes: list[int] = field(default_factory=list)
    inputs: list[Path] = field(default_factory=list)
    out: Optional[Path] = None
    exact_threshold: int = 64
    seed: int = 0
    jobs: int = 1
    emit_csv: bool = True


def max_edges() -> int:
    raw = os.environ.get("STACKLAB_MAX_EDGES", str(DEFAULT_MAX_EDGES))
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"STACKLAB_MAX_EDGES must be an integer, got {raw!r}") from None


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _read(path: Path) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _need(value, flag: str):
    if value is None:
        raise UsageError(f"{flag} is required")
    return value


def _one_size(args, flag: str = "--n") -> int:
    sizes = args.n if flag == "--n" else args.m
    if not sizes:
        raise UsageError(f"{flag} is required")
    if len(sizes) != 1:
        raise UsageError(f"{flag} takes a single value here")
    return sizes[0]


# ---------------------------------------------------------------- generate

def cmd_generate(args) -> int:
    kind = args.kind
    out = _need(args.out, "--out")
    if kind == "triangles":
        family = triangles.build_triangle_family(_need(args.level, "--level"))
        triangles.save_family(family, out)
        return 0
    if kind == "gn":
        tg = tessellation.build_Gn(_one_size(args))
        Path(out).write_bytes(tessellation.format_tess_graph(tg))
        return 0
    n = _one_size(args)
    simple = {"path": graphs.path, "cycle": graphs.cycle, "complete": graphs.complete, "star": graphs.star}
    if kind in simple:
        g = simple[kind](n)
    else:
        k = args.factors
        if k not in (2, 3):
            raise UsageError("--factors must be 2 or 3")
        if kind == "triangulated":
            d = graphs.directed_path(n)
            g = graphs.triangulated_product(*([d] * k))
        elif kind == "strong":
            g = graphs.strong_product(*([graphs.path(n)] * k))
        else:
            g = graphs.path(n)
            for _ in range(k - 1):
                g = graphs.cartesian_product(g, graphs.path(n))
    graphs.save_graph(g, out)
    return 0


# ------------------------------------------------------------------ layout

def _write_layout(layout, graph, out: Path, graph_out: Optional[Path], row: dict) -> int:
    layouts.save_layout(layout, out)
    graphs.save_graph(graph, graph_out or Path(str(out) + ".graph"))
    report = layouts.validate_layout(graph, layout)
    row["stacks_used"] = report.pages_used
    row["valid"] = int(report.valid)
    _emit(LAYOUT_CSV_HEADER)
    _emit(",".join(str(row[k]) for k in LAYOUT_CSV_HEADER.split(",")))
    return 0 if report.valid else 1


def cmd_layout(args) -> int:
    out = Path(_need(args.out, "--out"))
    kind = args.kind
    if kind == "snake":
        n = _one_size(args)
        layout = product_layouts.grid_stack_layout(n, args.dispersable)
        g = graphs.strong_product(graphs.path(n), graphs.path(n))
        d = 8 if args.dispersable else 4
        row = dict(n=n, m="", p=4, d=d, bound=d)
    elif kind == "triple-path":
        n = _one_size(args)
        layout = product_layouts.triple_path_layout(n)
        g = graphs.strong_product(graphs.path(n), graphs.path(n), graphs.path(n))
        m = product_layouts.cube_root_ceil(n)
        bound = 56 * m + 5 if m**3 == n else f"{product_layouts.triple_path_bound(n):.3f}"
        row = dict(n=n, m=m, p=4, d=8, bound=bound)
    elif kind == "queue":
        n = _one_size(args)
        g, layout = product_layouts.queue_layout_triple_path(n)
        row = dict(n=n, m="", p="", d="", bound=4)
    elif kind == "kt-product":
        t = _need(args.t, "--t")
        if args.graph:
            base = graphs.parse_graph(_read(args.graph))
            base_layout = layouts.parse_layout(_read(_need(args.base_layout, "--base-layout")))
        else:
            rng = np.random.default_rng(args.seed)
            base, base_layout = product_layouts.random_maximal_outerplanar(_one_size(args), rng)
        layout = product_layouts.product_with_complete(base, base_layout, t)
        g = graphs.strong_product(base, graphs.complete(t))
        s = base_layout.pages_used()
        row = dict(n=base.vertex_count, m=t, p="", d=s, bound=max(3 * t * s, (t + 1) // 2))
    elif kind == "path-perm":
        m = _one_size(args, "--m")
        h = hadamard.parse_hadamard(_read(args.hadamard).decode()) if args.hadamard else hadamard.ORDER4_EXAMPLE
        family = hadamard.permutation_family(h, m)
        layout = hadamard.path_layout_under_permutation(family, args.k)
        g = graphs.path(family.n)
        row = dict(n=family.n, m=m, p=h.order, d="", bound=max(0, 2 * h.order - 3))
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(kind)
    return _write_layout(layout, g, out, args.graph_out, row)


# ---------------------------------------------------------------- validate

def _validate_one(mode: str, graph_path: str, layout_path: str, cap: int) -> tuple[int, str]:
    try:
        g = graphs.parse_graph(Path(graph_path).read_bytes())
        if g.edge_count > cap:
            return 2, f"{layout_path}: graph has {g.edge_count} edges, above STACKLAB_MAX_EDGES={cap}"
        layout = layouts.parse_layout(Path(layout_path).read_bytes())
        if mode == "queue" and layout.kind != "queue":
            return 1, f"{layout_path}: not a queue layout"
        if mode != "queue" and layout.kind != "stack":
            return 1, f"{layout_path}: not a stack layout"
        report = layouts.validate_layout(g, layout)
    except (FormatError, layouts.CoverageError) as exc:
        return 1, f"{layout_path}: invalid: {exc}"
    except OSError as exc:
        return 2, f"{layout_path}: cannot read input: {exc.strerror}"
    word = "crossing" if mode != "queue" else "nesting"
    lines = [f"{layout_path}: valid={int(report.valid)} violations={report.violation_count} pages_used={report.pages_used}"]
    for e, f in report.first_violations:
        lines.append(f"  {word} pair: {e[0]} {e[1]} / {f[0]} {f[1]}")
    code = 0 if report.valid else 1
    if mode == "dispersable" and report.valid:
        matching = all(report.per_page_is_matching.values())
        lines.append(f"  dispersable={int(matching)}")
        if not matching:
            code = 1
    lines.append(report.to_csv().rstrip("\n"))
    return code, "\n".join(lines)


def cmd_validate(args) -> int:
    graph_path = str(_need(args.graph, "--graph"))
    layout_paths = [str(p) for p in _need(args.layout, "--layout")]
    cap = max_edges()
    jobs = [(args.mode, graph_path, p, cap) for p in layout_paths]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_validate_one, *zip(*jobs)))
    else:
        results = [_validate_one(*j) for j in jobs]
    for _, text in results:
        _emit(text)
    return max(code for code, _ in results)


# ------------------------------------------------------------------ oracle

def cmd_oracle(args) -> int:
    if args.kind == "exact-sn":
        g = graphs.parse_graph(_read(_need(args.graph, "--graph")))
        try:
            _emit(str(layouts.exact_stack_number(g, max_n=args.max_n)))
        except layouts.TooLargeError as exc:
            raise UsageError(str(exc)) from None
        return 0
    if args.kind == "cube-bound":
        rep = triangles.cube_bound_oracle(args.max_m, args.max_points)
        _emit("m,families,structural_ok,colorings_checked,multiplicity")
        for m in sorted(rep.families):
            _emit(f"{m},{rep.families[m]},{int(rep.structural_ok[m])},{rep.colorings_checked[m]},{rep.multiplicity[m]}")
        _emit(f"# injective={int(rep.injective)} complete={int(rep.complete)} {rep.limit_hit}".rstrip())
        return 0 if rep.injective else 1
    # lcs
    m = _one_size(args, "--m")
    h = hadamard.parse_hadamard(_read(args.hadamard).decode()) if args.hadamard else hadamard.ORDER4_EXAMPLE
    family = hadamard.permutation_family(h, m)
    _emit("k,l,lcs,sum_set,sum_set_bound")
    for k, l in itertools.combinations(range(1, h.order + 1), 2):
        size = hadamard.sum_set(family, k, l).size
        _emit(f"{k},{l},{hadamard.lcs(family, k, l)},{size},{hadamard.sum_set_bound(h.order, m)}")
    return 0


# ---------------------------------------------------------------- hadamard

def cmd_hadamard(args) -> int:
    action = args.action
    if action == "sylvester":
        h = hadamard.sylvester(_need(args.p, "--p"))
    elif action == "paley":
        h = hadamard.paley(_need(args.q, "--q"))
    else:
        h = hadamard.parse_hadamard(_read(_need(args.file, "--file")).decode())
        if action == "validate":
            ok = hadamard.validate_hadamard(h)
            _emit(f"valid={int(ok)}")
            return 0 if ok else 1
        if action == "normalize":
            h = hadamard.normalize_last_column(h)
        elif action == "perms":
            family = hadamard.permutation_family(h, _one_size(args, "--m"))
            text = "".join(hadamard.format_permutation(family.perm(k)) for k in range(1, h.order + 1))
            _write_text(text, args.out)
            return 0
    _write_text(hadamard.format_hadamard(h), args.out)
    return 0


def _write_text(text: str, out: Optional[Path]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# ------------------------------------------------------------ report, tess

def cmd_report(args) -> int:
    sizes = args.n or [8, 27, 64]
    lines = ["# n stacks_used bound margin (gnuplot: plot 'file' using 1:2, '' using 1:3)",
             "n,stacks_used,bound,margin"]
    code = 0
    for n in sizes:
        layout = product_layouts.triple_path_layout(n)
        g = graphs.strong_product(graphs.path(n), graphs.path(n), graphs.path(n))
        report = layouts.validate_stack_layout(g, layout)
        if not report.valid:
            code = 1
        bound = product_layouts.triple_path_bound(n)
        lines.append(f"{n},{report.pages_used},{bound:.6f},{bound - report.pages_used:.6f}")
    _write_text("\n".join(lines) + "\n", args.out)
    return code


def cmd_tess(args) -> int:
    sizes = args.n or [1, 2, 3]
    lines = ["n,vertices,edges,max_degree,corner6_count,hexagons"]
    for n in sizes:
        st = tessellation.tess_stats(tessellation.build_Gn(n))
        lines.append(",".join(str(st[k]) for k in lines[0].split(",")))
    _write_text("\n".join(lines) + "\n", args.out)
    return 0


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, nargs="+", help="size(s) n")
    common.add_argument("--m", type=int, nargs="+", help="base m for permutation families")
    common.add_argument("--level", type=int, help="triangle family level")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for batch validation")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized inputs")
    common.add_argument("--exact-threshold", type=int, default=64)
    common.add_argument("--out", type=Path, help="output file")

    parser = argparse.ArgumentParser(prog="stacklab", description="Stack and queue layouts of graph products.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", parents=[common], help="write a graph or triangle family")
    p.add_argument("kind", choices=["path", "cycle", "complete", "star", "strong", "cartesian", "triangulated", "gn", "triangles"])
    p.add_argument("--factors", type=int, default=2)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("layout", parents=[common], help="build a layout, its graph and a CSV summary row")
    p.add_argument("kind", choices=["snake", "triple-path", "queue", "kt-product", "path-perm"])
    p.add_argument("--dispersable", action="store_true")
    p.add_argument("--t", type=int, help="clique size for kt-product")
    p.add_argument("--k", type=int, default=1, help="permutation index for path-perm")
    p.add_argument("--graph", type=Path, help="base graph for kt-product")
    p.add_argument("--base-layout", type=Path, help="stack layout of the base graph")
    p.add_argument("--hadamard", type=Path, help="Hadamard matrix file (default: the order-4 example)")
    p.add_argument("--graph-out", type=Path)
    p.set_defaults(func=cmd_layout)

    p = sub.add_parser("validate", parents=[common], help="validate layout files against a graph")
    p.add_argument("mode", choices=["stack", "queue", "dispersable"])
    p.add_argument("--graph", type=Path)
    p.add_argument("--layout", type=Path, action="append")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("oracle", parents=[common], help="exact small-instance oracles")
    p.add_argument("kind", choices=["exact-sn", "cube-bound", "lcs"])
    p.add_argument("--graph", type=Path)
    p.add_argument("--max-n", type=int, default=9)
    p.add_argument("--max-m", type=int, default=3)
    p.add_argument("--max-points", type=int, default=12)
    p.add_argument("--hadamard", type=Path)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("hadamard", parents=[common], help="build, check and use Hadamard matrices")
    p.add_argument("action", choices=["sylvester", "paley", "validate", "normalize", "perms"])
    p.add_argument("--p", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--file", type=Path)
    p.set_defaults(func=cmd_hadamard)

    p = sub.add_parser("report", parents=[common], help="CSV of triple-path stack counts against the bound")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("tess", parents=[common], help="tessellation graph statistics")
    p.add_argument("action", choices=["stats"])
    p.set_defaults(func=cmd_tess)
    return parser


def config_from_args(args) -> RunConfig:
    return RunConfig(
        command=args.command,
        action=getattr(args, "kind", None) or getattr(args, "action", None) or getattr(args, "mode", None),
        sizes=list(args.n or args.m or ([args.level] if args.level is not None else [])),
        out=args.out,
        exact_threshold=args.exact_threshold,
        seed=args.seed,
        jobs=args.jobs,
    )


def run(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    config_from_args(args)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"stacklab: error: {exc}", file=sys.stderr)
        return 2
    except (FormatError, layouts.CoverageError, layouts.PreconditionError) as exc:
        print(f"stacklab: invalid input: {exc}", file=sys.stderr)
        return 1
    except (ValueError, graphs.InvalidSizeError) as exc:
        print(f"stacklab: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())
