"""Pairwise intersecting triangles inscribed in a circle, with edge colourings.

Points are the integers ``1..N`` in clockwise order.  Everything is
combinatorial: chords ``pq`` and ``rs`` cross iff their endpoints
interleave, and two vertex-disjoint inscribed triangles are disjoint iff
one of them has all three vertices inside a single open arc cut out by the
other.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from stacklab._text import FormatError, format_header, format_records, parse_text

__all__ = [
    "PALETTES",
    "CircleConfig",
    "FamilyReport",
    "OracleReport",
    "TriangleFamily",
    "build_triangle_family",
    "chords_cross",
    "cube_bound_oracle",
    "format_family",
    "load_family",
    "parse_family",
    "save_family",
    "triangles_intersect",
    "verify_family",
]

PALETTES = ("AB", "BC", "CA")

# (u, v, w) slots of the eight triangles replacing one triangle
_REPLACEMENT = np.array(
    [(1, 4, 6), (2, 3, 5), (3, 2, 8), (4, 1, 7), (5, 8, 2), (6, 7, 1), (7, 6, 4), (8, 5, 3)]
)
# which copy (0 = primed, 1 = double-primed) of the parent colour each new edge gets
_AB_COPY = (_REPLACEMENT[:, 0] > 4).astype(np.int64)
_BC_COPY = (_REPLACEMENT[:, 1] % 2 == 0).astype(np.int64)
_CA_COPY = (~np.isin(_REPLACEMENT[:, 0], (1, 2, 5, 6))).astype(np.int64)


@dataclass(frozen=True)
class CircleConfig:
    """``point_count`` points on a circle split into clockwise arcs A, B, C."""

    point_count: int
    arc_size: int

    def arc_of(self, point: int) -> str:
        return "ABC"[(point - 1) // self.arc_size]


@dataclass(frozen=True, eq=False)
class TriangleFamily:
    """Triangles ``(a, b, c)`` with ``a < b < c`` and a colour per edge.

    ``colors[i] = (colour of ab, colour of bc, colour of ca)``, each 1-based
    within its palette ``AB``, ``BC``, ``CA``.  Colours in different
    palettes are different colours.
    """

    point_count: int
    triangles: np.ndarray
    colors: np.ndarray

    def __post_init__(self):
        tri = np.sort(np.asarray(self.triangles, dtype=np.int64).reshape(-1, 3), axis=1)
        col = np.asarray(self.colors, dtype=np.int64).reshape(-1, 3)
        if col.shape != tri.shape:
            raise ValueError("one colour per triangle edge is required")
        object.__setattr__(self, "triangles", tri)
        object.__setattr__(self, "colors", col)

    def __len__(self) -> int:
        return int(self.triangles.shape[0])

    def palette_sizes(self) -> tuple[int, int, int]:
        return tuple(int(np.unique(self.colors[:, p]).size) for p in range(3))

    def total_colors(self) -> int:
        return sum(self.palette_sizes())

    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        """All edges as ``(endpoints (3m, 2), global colour id (3m,))``."""
        t = self.triangles
        ends = np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [0, 2]]])
        offset = np.concatenate([[0], np.cumsum(self.colors.max(axis=0))[:2]]) if len(self) else np.zeros(3, np.int64)
        gid = np.concatenate([self.colors[:, p] + offset[p] for p in range(3)])
        return ends, gid


def build_triangle_family(level: int) -> TriangleFamily:
    """``8^level`` triangles on ``3 * 8^level`` points, ``2^level`` colours per palette.

    Each level replaces every point by eight consecutive points and every
    triangle by eight triangles whose edges get one of two copies of the
    parent edge's colour.
    """
    if level < 0:
        raise ValueError("level must be non-negative")
    uvw = np.zeros((1, 3), dtype=np.int64)  # 0-based positions inside A, B, C
    col = np.zeros((1, 3), dtype=np.int64)  # 0-based colours of AB, BC, CA
    for _ in range(level):
        uvw = (uvw[:, None, :] * 8 + (_REPLACEMENT - 1)[None, :, :]).reshape(-1, 3)
        copies = np.stack([_AB_COPY, _BC_COPY, _CA_COPY], axis=1)
        col = (col[:, None, :] * 2 + copies[None, :, :]).reshape(-1, 3)
    size = 8**level
    tri = uvw + 1 + np.array([0, size, 2 * size])
    return TriangleFamily(3 * size, tri, col + 1)


def chords_cross(p, q, r, s):
    """Vectorized: do chords ``pq`` and ``rs`` (``p < q``, ``r < s``) cross?"""
    return ((p < r) & (r < q) & (q < s)) | ((r < p) & (p < s) & (s < q))


def _arc_index(tri: np.ndarray, x: np.ndarray) -> np.ndarray:
    a, b, c = tri[..., 0:1], tri[..., 1:2], tri[..., 2:3]
    return np.where((a < x) & (x < b), 0, np.where((b < x) & (x < c), 1, 2))


def triangles_intersect(t1, t2) -> np.ndarray:
    """Vectorized over leading axes; triangles must be vertex-disjoint and sorted."""
    t1 = np.asarray(t1)
    t2 = np.asarray(t2)
    arcs = _arc_index(t1, t2)
    return ~np.all(arcs == arcs[..., :1], axis=-1)


@dataclass
class FamilyReport:
    vertex_disjoint: bool
    pairwise_intersecting: bool
    coloring_proper: bool
    one_vertex_per_arc: bool
    palette_sizes: tuple[int, int, int]
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.vertex_disjoint and self.pairwise_intersecting and self.coloring_proper


def verify_family(family: TriangleFamily, max_problems: int = 10) -> FamilyReport:
    tri = family.triangles
    m = len(family)
    problems: list[str] = []
    pts = tri.ravel()
    disjoint = np.unique(pts).size == pts.size
    if not disjoint:
        problems.append("two triangles share a vertex")
    i, j = np.triu_indices(m, 1)
    meet = triangles_intersect(tri[i], tri[j]) if m > 1 else np.ones(0, bool)
    for a, b in zip(i[~meet][:max_problems], j[~meet][:max_problems]):
        problems.append(f"triangles {tuple(tri[a])} and {tuple(tri[b])} are disjoint")
    ends, gid = family.edges()
    e, f = np.triu_indices(len(gid), 1)
    crossing = chords_cross(ends[e, 0], ends[e, 1], ends[f, 0], ends[f, 1])
    clash = crossing & (gid[e] == gid[f])
    for a, b in zip(e[clash][:max_problems], f[clash][:max_problems]):
        problems.append(f"crossing edges {tuple(ends[a])} and {tuple(ends[b])} share a colour")
    n = family.point_count
    per_arc = False
    if n % 3 == 0 and m:
        arc = (tri - 1) // (n // 3)
        per_arc = bool(np.all(arc == np.arange(3)))
    return FamilyReport(
        vertex_disjoint=bool(disjoint),
        pairwise_intersecting=bool(meet.all()),
        coloring_proper=not bool(clash.any()),
        one_vertex_per_arc=per_arc,
        palette_sizes=family.palette_sizes(),
        problems=problems,
    )


# ------------------------------------------------------------------ oracle

@dataclass
class OracleReport:
    max_m: int
    max_points: int
    # per triangle count m: number of families on 3m points that are pairwise intersecting
    families: dict[int, int]
    # every pair of triangles has a crossing pair among (ab, ab'), (ac, ac'), (bc, bc')
    structural_ok: dict[int, bool]
    colorings_checked: dict[int, int]
    collisions: list[tuple]
    # each family on 3m points appears C(max_points, 3m) times on max_points points
    multiplicity: dict[int, int]
    complete: bool
    limit_hit: str = ""

    @property
    def injective(self) -> bool:
        return not self.collisions and all(self.structural_ok.values())


def _intersecting_families(m: int):
    """Partitions of ``1..3m`` into ``m`` pairwise intersecting triples."""
    points = list(range(1, 3 * m + 1))

    def extend(remaining, chosen):
        if not remaining:
            yield list(chosen)
            return
        first = remaining[0]
        rest = remaining[1:]
        for b, c in itertools.combinations(rest, 2):
            t = (first, b, c)
            arr = np.array(t)
            if all(triangles_intersect(np.array(s), arr) for s in chosen):
                chosen.append(t)
                yield from extend([x for x in rest if x != b and x != c], chosen)
                chosen.pop()

    yield from extend(points, [])


def _edge_list(family: list[tuple[int, int, int]]):
    # per triangle: ab, ac, bc in that order, matching f(i)
    return [((a, b), (a, c), (b, c)) for a, b, c in family]


def _cross(e1, e2) -> bool:
    (p, q), (r, s) = e1, e2
    return (p < r < q < s) or (r < p < s < q)


def _colorings(edges, budget):
    """Yield every colouring of ``edges`` into non-crossing classes, up to renaming."""
    k = len(edges)
    conflict = [[_cross(edges[x], edges[y]) for y in range(k)] for x in range(k)]
    colour = [0] * k

    def place(t, used):
        if t == k:
            yield colour
            return
        budget[0] -= 1
        if budget[0] < 0:
            raise _Budget
        for c in range(used + 1):
            if c < used and any(colour[y] == c and conflict[t][y] for y in range(t)):
                continue
            colour[t] = c
            yield from place(t + 1, max(used, c + 1))

    yield from place(0, 0)


class _Budget(Exception):
    pass


def cube_bound_oracle(
    max_m: int = 3,
    max_points: int = 12,
    explicit_edge_limit: int = 9,
    node_limit: int = 20_000_000,
) -> OracleReport:
    """Exhaustively test that ``i -> (colour(ab), colour(ac), colour(bc))`` is injective.

    For every ``m <= max_m`` with ``3m <= max_points`` all families of ``m``
    pairwise vertex-disjoint, pairwise intersecting triangles on ``3m``
    points are enumerated (unused points change nothing, so larger point
    sets only repeat these families).  Each family gets

    * a structural check that any two triangles have a crossing pair among
      their corresponding edges, which forces injectivity for every proper
      colouring and every ``k``;
    * when ``3m <= explicit_edge_limit``, an explicit walk over every proper
      colouring (up to renaming colours, so all ``k`` at once).
    """
    if max_m > 5 or max_points > 15:
        raise ValueError("exhaustive regime is limited to max_m <= 5 and max_points <= 15")
    report = OracleReport(max_m, max_points, {}, {}, {}, [], {}, True)
    budget = [node_limit]
    for m in range(1, max_m + 1):
        if 3 * m > max_points:
            break
        report.multiplicity[m] = math.comb(max_points, 3 * m)
        count = 0
        structural = True
        checked = 0
        for fam in _intersecting_families(m):
            count += 1
            tri_edges = _edge_list(fam)
            for i, j in itertools.combinations(range(m), 2):
                if not any(_cross(tri_edges[i][s], tri_edges[j][s]) for s in range(3)):
                    structural = False
                    report.collisions.append(("structural", fam[i], fam[j]))
            if 3 * m > explicit_edge_limit or not report.complete:
                continue
            flat = [e for trio in tri_edges for e in trio]
            try:
                for colour in _colorings(flat, budget):
                    checked += 1
                    images = {tuple(colour[3 * i:3 * i + 3]) for i in range(m)}
                    k = max(colour) + 1
                    if len(images) < m or m > k**3:
                        report.collisions.append(("colouring", tuple(fam), tuple(colour)))
            except _Budget:
                report.complete = False
                report.limit_hit = f"colouring walk stopped after {node_limit} nodes at m={m}"
        report.families[m] = count
        report.structural_ok[m] = structural
        report.colorings_checked[m] = checked
    return report


# ------------------------------------------------------------- text format

def format_family(family: TriangleFamily) -> bytes:
    ends, _ = family.edges()
    m = len(family)
    palette = np.repeat(np.arange(1, 4), m)
    colour = np.concatenate([family.colors[:, p] for p in range(3)])
    ca = ends[2 * m:]
    rows = np.column_stack((ends, palette, colour))
    # CA edges are written from their C endpoint, i.e. as (c, a)
    rows[2 * m:, 0], rows[2 * m:, 1] = ca[:, 1], ca[:, 0]
    return (
        format_header("triangles", family.point_count, m)
        + format_records("t", family.triangles)
        + format_records("c", rows)
    )


def parse_family(data: bytes | str) -> TriangleFamily:
    parsed = parse_text(data)
    head = parsed.header("triangles")
    if len(head) != 1 or len(head[0]) != 3:
        raise FormatError("expected one 'triangles <points> <count>' header")
    points, count = int(head[0][1]), int(head[0][2])
    tri = parsed.records("t", 3)
    if len(tri) != count:
        raise FormatError(f"header declares {count} triangles, found {len(tri)}")
    if tri.size and (tri.min() < 1 or tri.max() > points):
        raise FormatError("triangle vertex outside 1..points")
    tri = np.sort(tri, axis=1)
    rows = parsed.records("c", 4)
    index = {}
    for i, (a, b, c) in enumerate(tri.tolist()):
        index[(1, a, b)] = (i, 0)
        index[(2, b, c)] = (i, 1)
        index[(3, a, c)] = (i, 2)
    colors = np.zeros((count, 3), dtype=np.int64)
    for u, v, pal, col in rows.tolist():
        key = (pal, min(u, v), max(u, v))
        if key not in index:
            raise FormatError(f"colour row for {u} {v} (palette {pal}) matches no triangle edge")
        colors[index[key]] = col
    if np.any(colors == 0):
        raise FormatError("every triangle edge needs a colour row")
    return TriangleFamily(points, tri, colors)


def save_family(family: TriangleFamily, target: str | Path) -> None:
    Path(target).write_bytes(format_family(family))


def load_family(source: str | Path) -> TriangleFamily:
    return parse_family(Path(source).read_bytes())
