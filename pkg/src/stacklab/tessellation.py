"""Graphs drawn on the faces of the truncated-octahedron tessellation.

Cells are translates of the truncated octahedron with corners at the
permutations of ``(0, +-1, +-2)``, centred on ``4Z^3`` and on
``4Z^3 + (2, 2, 2)``.  Every face gets a copy of a fixed triangulated
template whose boundary puts 10 subdivision vertices on each face edge;
copies on neighbouring faces share their corner and edge vertices.

Coordinates stay integral: square faces have centres with all coordinates
even, hexagonal faces all odd.  Subdivision vertices are keyed by their
tessellation edge and an index, never by floating point position.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import networkx as nx
import numpy as np

from stacklab.graphs import Graph, format_graph

__all__ = [
    "SUBDIVISIONS",
    "Face",
    "FaceTemplate",
    "TemplateError",
    "TessGraph",
    "TessWindow",
    "build_Gn",
    "enumerate_faces",
    "face_templates",
    "format_tess_graph",
    "tess_stats",
    "validate_template",
]

SUBDIVISIONS = 10
SIDE = SUBDIVISIONS + 1

SQUARE_SIDE_DEGREES = (3, 3, 5, 5, 3, 3, 5, 5, 3, 3)
HEX_SIDE_DEGREES = (4, 4, 3, 3, 4, 4, 3, 3, 4, 4)
SQUARE_CORNER_DEGREE = 3
HEX_CORNER_DEGREE = 2

CORNER, EDGE, FACE = 0, 1, 2
ROLE_NAMES = ("corner", "edge", "face")


class TemplateError(ValueError):
    pass


# ------------------------------------------------------------------ faces

@dataclass(frozen=True)
class Face:
    kind: str  # "square" or "hexagon"
    centre: tuple[int, int, int]
    corners: tuple[tuple[int, int, int], ...]  # cyclic order


def _square_corners(centre, axis: int) -> tuple:
    others = [a for a in range(3) if a != axis]
    out = []
    for d0, d1 in ((1, 0), (0, 1), (-1, 0), (0, -1)):
        p = list(centre)
        p[others[0]] += d0
        p[others[1]] += d1
        out.append(tuple(p))
    return tuple(out)


_HEX_CYCLE = ((0, 1, 2), (1, 0, 2), (2, 0, 1), (2, 1, 0), (1, 2, 0), (0, 2, 1))


def _hex_corners(cell, signs) -> tuple:
    return tuple(tuple(c + s * d for c, s, d in zip(cell, signs, p)) for p in _HEX_CYCLE)


def _cell_faces(cell) -> list[Face]:
    faces = []
    for axis in range(3):
        for sign in (2, -2):
            centre = list(cell)
            centre[axis] += sign
            centre = tuple(centre)
            faces.append(Face("square", centre, _square_corners(centre, axis)))
    for signs in itertools.product((1, -1), repeat=3):
        centre = tuple(c + s for c, s in zip(cell, signs))
        faces.append(Face("hexagon", centre, _hex_corners(cell, signs)))
    return faces


@dataclass
class TessWindow:
    """Faces lying in ``[4, 4n + 2]^3`` plus the cells they come from."""

    n: int
    cells: list[tuple[int, int, int]]
    faces: list[Face]
    # faces touching the window without lying in it (needed for induced edges)
    rim: list[Face] = field(default_factory=list)

    @property
    def hexagons(self) -> list[Face]:
        return [f for f in self.faces if f.kind == "hexagon"]

    @property
    def squares(self) -> list[Face]:
        return [f for f in self.faces if f.kind == "square"]


def enumerate_faces(n: int) -> TessWindow:
    if n < 1:
        raise ValueError("n must be positive")
    lo, hi = 4, 4 * n + 2
    cells = []
    for base in ((0, 0, 0), (2, 2, 2)):
        rng = range((lo - 4 - base[0]) // 4, (hi + 4 - base[0]) // 4 + 1)
        for x, y, z in itertools.product(rng, repeat=3):
            cells.append((4 * x + base[0], 4 * y + base[1], 4 * z + base[2]))
    inside: dict = {}
    rim: dict = {}
    used_cells = set()
    for cell in cells:
        for face in _cell_faces(cell):
            pts = np.array(face.corners)
            if np.all((pts >= lo) & (pts <= hi)):
                inside[face.centre] = face
                used_cells.add(cell)
            elif np.any(np.all((pts >= lo) & (pts <= hi), axis=1)):
                rim[face.centre] = face
    return TessWindow(
        n,
        sorted(used_cells),
        [inside[c] for c in sorted(inside)],
        [rim[c] for c in sorted(rim)],
    )


# -------------------------------------------------------------- templates

@dataclass(frozen=True)
class FaceTemplate:
    """Triangulated polygon with ``SIDE * corners`` boundary vertices.

    Local ids ``0 .. boundary_count - 1`` run around the boundary: corner
    ``i`` is ``SIDE * i`` and side ``i`` holds ``SIDE * i + 1 .. SIDE * i + 10``
    from corner ``i`` towards corner ``i + 1``.  Higher ids are interior.
    """

    kind: str
    corners: int
    vertex_count: int
    edges: tuple[tuple[int, int], ...]

    @property
    def boundary_count(self) -> int:
        return SIDE * self.corners

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.vertex_count, dtype=np.int64)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg


class _Builder:
    def __init__(self, corners: int):
        self.corners = corners
        self.count = SIDE * corners
        self.edges: set[tuple[int, int]] = set()
        b = self.count
        for i in range(b):
            self.add(i, (i + 1) % b)

    def add(self, u: int, v: int) -> None:
        if u == v:
            raise TemplateError("loop in template")
        self.edges.add((min(u, v), max(u, v)))

    def new(self) -> int:
        self.count += 1
        return self.count - 1

    def side(self, i: int, t: int) -> int:
        """Vertex ``t`` (1..10) on side ``i`` (taken cyclically)."""
        return SIDE * (i % self.corners) + t

    def zipper(self, outer: list[int], inner_degree: list[int]) -> list[int]:
        """Triangulate the annulus between ``outer`` and a new inner cycle.

        Outer vertex ``o`` gets ``inner_degree[o]`` consecutive inner
        neighbours; consecutive outer vertices share their last/first one.
        """
        size = sum(r - 1 for r in inner_degree)
        ring = [self.new() for _ in range(size)]
        for k in range(size):
            self.add(ring[k], ring[(k + 1) % size])
        p = 0
        for o, r in zip(outer, inner_degree):
            for t in range(r):
                self.add(o, ring[(p + t) % size])
            p += r - 1
        return ring

    def outer_counts(self, ring: list[int], outer: set[int]) -> list[int]:
        adj = {v: set() for v in ring}
        for u, v in self.edges:
            if u in adj and v in outer:
                adj[u].add(v)
            if v in adj and u in outer:
                adj[v].add(u)
        return [len(adj[v]) for v in ring]

    def build(self, kind: str) -> FaceTemplate:
        return FaceTemplate(kind, self.corners, self.count, tuple(sorted(self.edges)))


def _square_template() -> FaceTemplate:
    b = _Builder(4)
    for i in range(4):
        # corner fan: one face vertex sees the corner, three side vertices on
        # each side, and closes with a chord cutting the corner off
        x = b.new()
        fan = [b.side(i - 1, 8), b.side(i - 1, 9), b.side(i - 1, 10), SIDE * i,
               b.side(i, 1), b.side(i, 2), b.side(i, 3)]
        for v in fan:
            b.add(x, v)
        b.add(fan[0], fan[-1])
    outer = [b.side(i, t) for i in range(4) for t in range(3, 9)]
    ring1 = b.zipper(outer, [1, 3, 1, 1, 3, 1] * 4)
    s1 = b.outer_counts(ring1, set(outer))
    ring2 = b.zipper(ring1, [2 if s == 1 else 1 for s in s1])
    # zigzag triangulation of the inner octagon
    for u, v in ((1, 7), (7, 2), (2, 6), (6, 3), (3, 5)):
        b.add(ring2[u], ring2[v])
    return b.build("square")


def _hex_template() -> FaceTemplate:
    b = _Builder(6)
    for i in range(6):
        # ear at every corner: the corner sees only its two boundary neighbours
        b.add(b.side(i - 1, 10), b.side(i, 1))
    outer = [b.side(i, t) for i in range(6) for t in range(1, 11)]
    ring1 = b.zipper(outer, [1, 2, 1, 1, 2, 2, 1, 1, 2, 1] * 6)
    s1 = b.outer_counts(ring1, set(outer))
    ring2 = b.zipper(ring1, [3 if s == 2 else 1 for s in s1])
    s2 = b.outer_counts(ring2, set(ring1))
    low = [k for k, s in enumerate(s2) if s == 1]
    for k, s in enumerate(s2):
        if s != 1:
            b.add(ring2[k - 1], ring2[(k + 1) % len(ring2)])
    hexagon = [ring2[k] for k in low]
    for u, v in ((0, 2), (2, 4), (4, 0)):
        b.add(hexagon[u], hexagon[v])
    return b.build("hexagon")


def validate_template(t: FaceTemplate) -> list[str]:
    """Check triangulated-disc structure, degrees and boundary symmetry."""
    problems = []
    g = nx.Graph()
    g.add_nodes_from(range(t.vertex_count))
    g.add_edges_from(t.edges)
    v, b, e = t.vertex_count, t.boundary_count, len(t.edges)
    if e != 3 * v - 3 - b:
        problems.append(f"{e} edges, a triangulated {b}-gon on {v} vertices needs {3 * v - 3 - b}")
    triangles = [c for c in nx.enumerate_all_cliques(g) if len(c) == 3]
    if len(triangles) != 2 * v - 2 - b:
        problems.append(f"{len(triangles)} triangles, expected {2 * v - 2 - b}")
    on_boundary = {(min(i, (i + 1) % b), max(i, (i + 1) % b)) for i in range(b)}
    count = {edge: 0 for edge in t.edges}
    for a, c, d in triangles:
        for edge in ((a, c), (a, d), (c, d)):
            count[(min(edge), max(edge))] += 1
    for edge, k in count.items():
        want = 1 if edge in on_boundary else 2
        if k != want:
            problems.append(f"edge {edge} lies in {k} triangles, expected {want}")
            break
    for x in range(v):
        link = g.subgraph(g[x])
        degs = sorted(d for _, d in link.degree())
        cyclic = x >= b
        ok = nx.is_connected(link) if len(link) else False
        ok = ok and (all(d == 2 for d in degs) if cyclic else degs.count(1) == 2 and all(d <= 2 for d in degs))
        if not ok:
            problems.append(f"link of vertex {x} is not a {'cycle' if cyclic else 'path'}")
            break
    if not nx.check_planarity(g)[0]:
        problems.append("template is not planar")
    deg = t.degrees()
    if deg.max() > 7:
        problems.append(f"maximum degree {deg.max()} exceeds 7")
    side = SQUARE_SIDE_DEGREES if t.kind == "square" else HEX_SIDE_DEGREES
    corner = SQUARE_CORNER_DEGREE if t.kind == "square" else HEX_CORNER_DEGREE
    expected = np.array(([corner] + list(side)) * t.corners)
    if not np.array_equal(deg[:b], expected):
        problems.append("boundary degree sequence differs from the required one")
    # every rotation and reflection of the polygon must preserve it
    for r in range(t.corners):
        for flip in (False, True):
            idx = (np.arange(b) + SIDE * r) % b
            if flip:
                idx = (-idx) % b
            if not np.array_equal(deg[:b][idx], expected):
                problems.append(f"boundary degrees not invariant under symmetry (r={r}, flip={flip})")
    return problems


@lru_cache(maxsize=1)
def face_templates() -> tuple[FaceTemplate, FaceTemplate]:
    """The square and hexagon templates, validated on first use."""
    square, hexagon = _square_template(), _hex_template()
    for t in (square, hexagon):
        problems = validate_template(t)
        if problems:
            raise TemplateError(f"{t.kind} template: " + "; ".join(problems))
    return square, hexagon


# ----------------------------------------------------------------- gluing

def _local_keys(face: Face, template: FaceTemplate) -> list[tuple]:
    """Global key of each template vertex placed on ``face``."""
    k = template.corners
    keys = []
    for i in range(k):
        p, q = face.corners[i], face.corners[(i + 1) % k]
        keys.append((CORNER, *p, 0, 0, 0, 0))
        for t in range(1, SIDE):
            if p < q:
                keys.append((EDGE, *p, *q, t))
            else:
                keys.append((EDGE, *q, *p, SIDE - t))
    for local in range(template.boundary_count, template.vertex_count):
        keys.append((FACE, *face.centre, 0, 0, 0, local))
    return keys


@dataclass
class TessGraph:
    n: int
    graph: Graph
    role: np.ndarray  # CORNER / EDGE / FACE per vertex (index id - 1)
    keys: list[tuple]
    window: TessWindow

    def provenance(self, v: int) -> str:
        key = self.keys[v - 1]
        if key[0] == CORNER:
            return f"corner {key[1:4]}"
        if key[0] == EDGE:
            return f"edge {key[1:4]}-{key[4:7]} #{key[7]}"
        return f"face {key[1:4]} local {key[7]}"

    def point(self, v: int) -> tuple[Fraction, Fraction, Fraction]:
        """Exact position; face vertices sit at their face centre."""
        key = self.keys[v - 1]
        if key[0] == EDGE:
            t = Fraction(key[7], SIDE)
            return tuple(Fraction(p) + t * (q - p) for p, q in zip(key[1:4], key[4:7]))
        return tuple(Fraction(c) for c in key[1:4])

    def interior_corners(self) -> np.ndarray:
        """Ids of corner vertices all six of whose faces lie in the window."""
        inside = {f.centre for f in self.window.faces}
        count: dict = {}
        for face in itertools.chain(self.window.faces, self.window.rim):
            for c in face.corners:
                count.setdefault(c, [0, 0])
                count[c][0 if face.centre in inside else 1] += 1
        ids = []
        for v in np.flatnonzero(self.role == CORNER) + 1:
            c = tuple(self.keys[v - 1][1:4])
            if count.get(c, [0, 1]) == [6, 0]:
                ids.append(v)
        return np.array(ids, dtype=np.int64)


def build_Gn(n: int) -> TessGraph:
    """Graph induced by the template vertices on faces inside ``[4, 4n + 2]^3``."""
    window = enumerate_faces(n)
    square, hexagon = face_templates()
    templates = {"square": square, "hexagon": hexagon}
    placed = [(f, _local_keys(f, templates[f.kind])) for f in window.faces]
    keys = sorted({k for _, ks in placed for k in ks})
    index = {k: i + 1 for i, k in enumerate(keys)}
    edges = set()
    # rim faces contribute template edges whose endpoints are both present
    for face, ks in placed + [(f, _local_keys(f, templates[f.kind])) for f in window.rim]:
        for u, v in templates[face.kind].edges:
            a, b = index.get(ks[u]), index.get(ks[v])
            if a is not None and b is not None:
                edges.add((min(a, b), max(a, b)))
    graph = Graph.from_edges(len(keys), np.array(sorted(edges), dtype=np.int64).reshape(-1, 2))
    role = np.array([k[0] for k in keys], dtype=np.int64)
    return TessGraph(n, graph, role, keys, window)


def tess_stats(tg: TessGraph) -> dict:
    deg = tg.graph.degrees()
    corners = tg.interior_corners()
    return {
        "n": tg.n,
        "vertices": tg.graph.vertex_count,
        "edges": tg.graph.edge_count,
        "max_degree": int(deg.max()) if deg.size else 0,
        "corner6_count": int(np.sum(deg[corners - 1] == 6)) if corners.size else 0,
        "hexagons": len(tg.window.hexagons),
    }


def format_tess_graph(tg: TessGraph) -> bytes:
    comments = [f"G_n window n={tg.n}: faces inside [4, {4 * tg.n + 2}]^3"]
    comments += [f"{v} {ROLE_NAMES[tg.role[v - 1]]} {tg.provenance(v)}" for v in range(1, tg.graph.vertex_count + 1)]
    return format_graph(tg.graph, comments)
