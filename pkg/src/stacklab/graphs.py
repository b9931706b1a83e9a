"""Base graphs, graph products and the graph text format.

Vertices are numbered ``1..n``.  Product vertices are numbered
lexicographically in their factor coordinates, so ``(x, y)`` in
``G1 x G2`` gets id ``(x - 1) * |V(G2)| + y`` and the coordinate tuple is
kept as the vertex label.  Edge arrays always hold ``u < v`` rows sorted
lexicographically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from stacklab._text import FormatError, format_header, format_records, parse_text

__all__ = [
    "DirectedGraph",
    "FormatError",
    "Graph",
    "InvalidSizeError",
    "cartesian_product",
    "complete",
    "cycle",
    "difference_vectors",
    "directed_path",
    "format_graph",
    "load_graph",
    "parse_graph",
    "path",
    "save_graph",
    "star",
    "strong_product",
    "triangulated_product",
]


class InvalidSizeError(ValueError):
    """A generator was asked for a graph with no vertices."""


def _edge_codes(edges: np.ndarray, n: int) -> np.ndarray:
    return edges[:, 0] * (n + 1) + edges[:, 1]


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Graph:
    """A simple undirected graph on vertices ``1..vertex_count``.

    ``edges`` must already be canonical (``u < v``, sorted, no repeats); use
    :meth:`from_edges` to canonicalize arbitrary input.
    """

    vertex_count: int
    edges: np.ndarray
    labels: Optional[np.ndarray] = None
    _codes: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        n = int(self.vertex_count)
        edges = np.ascontiguousarray(self.edges, dtype=np.int64).reshape(-1, 2)
        object.__setattr__(self, "vertex_count", n)
        if n < 0:
            raise InvalidSizeError("vertex count must be non-negative")
        if edges.size:
            if edges.min() < 1 or edges.max() > n:
                raise ValueError("edge endpoint outside 1..vertex_count")
            if np.any(edges[:, 0] == edges[:, 1]):
                raise ValueError("self-loops are not allowed")
            if np.any(edges[:, 0] > edges[:, 1]):
                raise ValueError("edges must be stored with u < v")
        codes = _edge_codes(edges, n)
        if codes.size > 1 and not np.all(codes[1:] > codes[:-1]):
            raise ValueError("edges must be sorted and free of duplicates")
        object.__setattr__(self, "edges", _readonly(edges))
        object.__setattr__(self, "_codes", _readonly(codes))
        if self.labels is not None:
            labels = np.ascontiguousarray(self.labels, dtype=np.int64)
            if labels.ndim == 1:
                labels = labels[:, None]
            if labels.shape[0] != n:
                raise ValueError("one label per vertex is required")
            if not _labels_unique(labels):
                raise ValueError("vertex labels must be unique")
            object.__setattr__(self, "labels", _readonly(labels))

    @classmethod
    def from_edges(cls, vertex_count: int, edges, labels=None) -> "Graph":
        """Canonicalize an edge list (any orientation or order) into a Graph."""
        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if e.size:
            n = int(vertex_count)
            lo, hi = np.minimum(e[:, 0], e[:, 1]), np.maximum(e[:, 0], e[:, 1])
            if lo.min() < 1 or hi.max() > n:
                raise ValueError("edge endpoint outside 1..vertex_count")
            codes = np.sort(lo * (n + 1) + hi)
            dup = np.flatnonzero(codes[1:] == codes[:-1])
            if dup.size:
                c = int(codes[dup[0]])
                raise ValueError(f"duplicate edge {c // (n + 1)} {c % (n + 1)}")
            e = np.column_stack((codes // (n + 1), codes % (n + 1)))
        return cls(vertex_count, e, labels)

    @property
    def edge_count(self) -> int:
        return int(self.edges.shape[0])

    @property
    def dim(self) -> int:
        return 0 if self.labels is None else int(self.labels.shape[1])

    def degrees(self) -> np.ndarray:
        """Degree of each vertex, indexed by ``id - 1``."""
        return np.bincount(self.edges.ravel() - 1, minlength=self.vertex_count)

    def max_degree(self) -> int:
        return int(self.degrees().max()) if self.vertex_count else 0

    @cached_property
    def _edge_set(self) -> frozenset:
        return frozenset(self._codes.tolist())

    def has_edge(self, u: int, v: int) -> bool:
        if u == v:
            return False
        u, v = min(u, v), max(u, v)
        return u * (self.vertex_count + 1) + v in self._edge_set

    @cached_property
    def _csr(self) -> tuple[np.ndarray, np.ndarray]:
        both = np.concatenate((self.edges, self.edges[:, ::-1]))
        order = np.lexsort((both[:, 1], both[:, 0]))
        both = both[order]
        indptr = np.searchsorted(both[:, 0], np.arange(1, self.vertex_count + 2))
        return indptr, both[:, 1]

    def neighbors(self, v: int) -> np.ndarray:
        """Sorted neighbours of vertex ``v``."""
        indptr, nbrs = self._csr
        return nbrs[indptr[v - 1]:indptr[v]]

    def edge_index(self, edges) -> np.ndarray:
        """Row index in ``self.edges`` of each given edge, or -1 if absent."""
        e = np.sort(np.asarray(edges, dtype=np.int64).reshape(-1, 2), axis=1)
        codes = _edge_codes(e, self.vertex_count)
        idx = np.searchsorted(self._codes, codes)
        idx = np.minimum(idx, max(self.edge_count - 1, 0))
        found = self.edge_count > 0
        hit = found & (self._codes[idx] == codes) if found else np.zeros(len(codes), bool)
        return np.where(hit, idx, -1)

    def induced_subgraph(self, keep) -> "Graph":
        """Subgraph induced by a boolean mask over vertices, ids compacted in order."""
        keep = np.asarray(keep, dtype=bool)
        new_id = np.cumsum(keep)
        sel = keep[self.edges[:, 0] - 1] & keep[self.edges[:, 1] - 1]
        edges = new_id[self.edges[sel] - 1]
        labels = None if self.labels is None else self.labels[keep]
        return Graph(int(keep.sum()), edges, labels)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        same_labels = (self.labels is None and other.labels is None) or (
            self.labels is not None
            and other.labels is not None
            and np.array_equal(self.labels, other.labels)
        )
        return (
            self.vertex_count == other.vertex_count
            and np.array_equal(self.edges, other.edges)
            and same_labels
        )

    __hash__ = None


def _labels_unique(labels: np.ndarray) -> bool:
    if labels.shape[0] < 2:
        return True
    lo = labels.min(axis=0)
    span = labels.max(axis=0) - lo + 1
    if np.prod(span.astype(float)) < 2**62:
        code = np.zeros(labels.shape[0], dtype=np.int64)
        for c in range(labels.shape[1]):
            code = code * span[c] + (labels[:, c] - lo[c])
        if np.all(code[1:] > code[:-1]):
            return True
        return np.unique(code).size == code.size
    return np.unique(labels, axis=0).shape[0] == labels.shape[0]


@dataclass(frozen=True, eq=False)
class DirectedGraph:
    """A loopless digraph on ``1..vertex_count`` (arcs are ordered pairs)."""

    vertex_count: int
    arcs: np.ndarray

    def __post_init__(self):
        arcs = np.ascontiguousarray(self.arcs, dtype=np.int64).reshape(-1, 2)
        if arcs.size:
            if arcs.min() < 1 or arcs.max() > self.vertex_count:
                raise ValueError("arc endpoint outside 1..vertex_count")
            if np.any(arcs[:, 0] == arcs[:, 1]):
                raise ValueError("self-loops are not allowed")
            both = np.sort(arcs, axis=1)
            if np.unique(_edge_codes(both, self.vertex_count)).size != len(arcs):
                raise ValueError("antiparallel or repeated arcs are not allowed")
        object.__setattr__(self, "arcs", _readonly(arcs))

    def underlying(self) -> Graph:
        return Graph.from_edges(self.vertex_count, self.arcs)


def _check_size(n: int, what: str) -> int:
    n = int(n)
    if n < 1:
        raise InvalidSizeError(f"{what} needs at least one vertex, got {n}")
    return n


def path(n: int) -> Graph:
    """The path ``1 - 2 - ... - n``."""
    n = _check_size(n, "path")
    i = np.arange(1, n, dtype=np.int64)
    return Graph(n, np.column_stack((i, i + 1)))


def directed_path(n: int) -> DirectedGraph:
    n = _check_size(n, "path")
    i = np.arange(1, n, dtype=np.int64)
    return DirectedGraph(n, np.column_stack((i, i + 1)))


def cycle(n: int) -> Graph:
    n = int(n)
    if n < 3:
        raise InvalidSizeError(f"cycle needs at least three vertices, got {n}")
    i = np.arange(1, n, dtype=np.int64)
    return Graph.from_edges(n, np.vstack((np.column_stack((i, i + 1)), [[1, n]])))


def complete(t: int) -> Graph:
    t = _check_size(t, "complete graph")
    u, v = np.triu_indices(t, k=1)
    return Graph(t, np.column_stack((u + 1, v + 1)))


def star(n: int) -> Graph:
    """The star with ``n`` leaves; vertex 1 is the centre."""
    n = _check_size(n, "star")
    leaves = np.arange(2, n + 2, dtype=np.int64)
    return Graph(n + 1, np.column_stack((np.ones(n, dtype=np.int64), leaves)))


def _coords(g: Graph) -> np.ndarray:
    if g.labels is not None:
        return g.labels
    return np.arange(1, g.vertex_count + 1, dtype=np.int64)[:, None]


def _product_labels(g1: Graph, g2: Graph) -> np.ndarray:
    c1, c2 = _coords(g1), _coords(g2)
    n1, n2 = g1.vertex_count, g2.vertex_count
    return np.hstack((np.repeat(c1, n2, axis=0), np.tile(c2, (n1, 1))))


def _cartesian_edges(g1: Graph, g2: Graph) -> list[np.ndarray]:
    n2 = g2.vertex_count
    xs = np.arange(g1.vertex_count, dtype=np.int64)
    along2 = (xs[:, None, None] * n2 + g2.edges[None, :, :]).reshape(-1, 2)
    ys = np.arange(1, n2 + 1, dtype=np.int64)
    along1 = ((g1.edges[:, None, :] - 1) * n2 + ys[None, :, None]).reshape(-1, 2)
    return [along2, along1]


def _cross(g1: Graph, g2: Graph, anti: bool) -> np.ndarray:
    n2 = g2.vertex_count
    x = g1.edges - 1
    y = g2.edges[:, ::-1] if anti else g2.edges
    a = x[:, None, 0] * n2 + y[None, :, 0]
    b = x[:, None, 1] * n2 + y[None, :, 1]
    return np.column_stack((a.ravel(), b.ravel()))


def _assemble(n: int, parts: list[np.ndarray], labels) -> Graph:
    edges = np.vstack([p for p in parts if p.size] or [np.zeros((0, 2), np.int64)])
    return Graph.from_edges(n, edges, labels)


def cartesian_product(g1: Graph, g2: Graph) -> Graph:
    """``G1 □ G2``: move along exactly one coordinate."""
    n = g1.vertex_count * g2.vertex_count
    return _assemble(n, _cartesian_edges(g1, g2), _product_labels(g1, g2))


def strong_product(g1: Graph, g2: Graph, *more: Graph) -> Graph:
    """``G1 ⊠ G2 [⊠ G3 ...]``: Cartesian product plus both diagonals per edge pair."""
    if more:
        return strong_product(strong_product(g1, g2), *more)
    n = g1.vertex_count * g2.vertex_count
    parts = _cartesian_edges(g1, g2)
    parts += [_cross(g1, g2, anti=False), _cross(g1, g2, anti=True)]
    return _assemble(n, parts, _product_labels(g1, g2))


def triangulated_product(
    *factors: DirectedGraph,
    diagonal: Optional[Callable[[tuple, tuple], bool]] = None,
) -> Graph:
    """Triangulated product of two or three directed factors.

    For every arc ``x -> x'`` of one factor and ``y -> y'`` of another, the
    layer cell gets the diagonal ``(x, y)(x', y')``.  With three factors each
    axis-aligned 2D layer is triangulated this way (no body diagonals).

    ``diagonal(arc1, arc2)`` may override the choice per cell of a
    two-factor product: True keeps ``(x, y)(x', y')``, False uses
    ``(x, y')(x', y)``.
    """
    if len(factors) not in (2, 3):
        raise ValueError("triangulated products take two or three factors")
    if diagonal is not None and len(factors) != 2:
        raise ValueError("per-cell diagonal choice is only supported for two factors")
    under = [f.underlying() for f in factors]
    sizes = [f.vertex_count for f in factors]
    g = under[0]
    for h in under[1:]:
        g = cartesian_product(g, h)
    total = g.vertex_count
    stride = [int(np.prod(sizes[i + 1:], dtype=np.int64)) for i in range(len(sizes))]
    parts = [g.edges]
    for a in range(len(factors)):
        for b in range(a + 1, len(factors)):
            arcs_a = factors[a].arcs - 1
            arcs_b = factors[b].arcs - 1
            if diagonal is not None:
                flip = np.array(
                    [[not diagonal(tuple(p + 1), tuple(q + 1)) for q in arcs_b] for p in arcs_a],
                    dtype=bool,
                ).reshape(len(arcs_a), len(arcs_b))
            else:
                flip = np.zeros((len(arcs_a), len(arcs_b)), dtype=bool)
            ya0 = np.where(flip, arcs_b[None, :, 1], arcs_b[None, :, 0])
            ya1 = np.where(flip, arcs_b[None, :, 0], arcs_b[None, :, 1])
            s = arcs_a[:, None, 0] * stride[a] + ya0 * stride[b]
            t = arcs_a[:, None, 1] * stride[a] + ya1 * stride[b]
            base = _other_offsets(sizes, stride, (a, b))
            src = (s.ravel()[:, None] + base[None, :]).ravel()
            dst = (t.ravel()[:, None] + base[None, :]).ravel()
            parts.append(np.column_stack((src + 1, dst + 1)))
    return _assemble(total, parts, g.labels)


def _other_offsets(sizes, stride, axes) -> np.ndarray:
    base = np.zeros(1, dtype=np.int64)
    for c in range(len(sizes)):
        if c in axes:
            continue
        base = (base[:, None] + np.arange(sizes[c], dtype=np.int64)[None, :] * stride[c]).ravel()
    return base


def difference_vectors(g: Graph) -> np.ndarray:
    """Coordinate-difference vector of every edge, sign-normalized.

    The first non-zero entry is made positive, so an edge and its reversal
    map to the same class.
    """
    if g.labels is None:
        raise ValueError("graph has no coordinate labels")
    d = g.labels[g.edges[:, 1] - 1] - g.labels[g.edges[:, 0] - 1]
    nz = d != 0
    first = np.argmax(nz, axis=1)
    sign = np.sign(d[np.arange(len(d)), first])
    sign[sign == 0] = 1
    return d * sign[:, None]


# ---------------------------------------------------------------- text format

def format_graph(g: Graph, comments: Optional[list[str]] = None) -> bytes:
    """``graph <n> <m> [dim]``, then ``v`` label lines, then ``e u v`` lines."""
    head = [format_header("graph", g.vertex_count, g.edge_count, *([g.dim] if g.dim else []))]
    for c in comments or []:
        head.append(("# " + c + "\n").encode("ascii"))
    parts = head
    if g.labels is not None:
        ids = np.arange(1, g.vertex_count + 1, dtype=np.int64)[:, None]
        parts.append(format_records("v", np.hstack((ids, g.labels))))
    parts.append(format_records("e", g.edges))
    return b"".join(parts)


def parse_graph(data: bytes | str) -> Graph:
    parsed = parse_text(data)
    heads = parsed.header("graph")
    if len(heads) != 1 or len(heads[0]) not in (3, 4):
        raise FormatError("expected one 'graph <n> <m> [dim]' header line")
    n, m = int(heads[0][1]), int(heads[0][2])
    dim = int(heads[0][3]) if len(heads[0]) == 4 else 0
    edges = parsed.records("e", 2)
    if len(edges) != m:
        raise FormatError(f"header declares {m} edges, found {len(edges)}")
    if np.any(edges[:, 0] >= edges[:, 1]):
        raise FormatError("edge lines must list u < v")
    labels = None
    if dim:
        rows = parsed.records("v", dim + 1)
        if len(rows) != n or not np.array_equal(np.sort(rows[:, 0]), np.arange(1, n + 1)):
            raise FormatError("every vertex needs exactly one label line")
        labels = np.empty((n, dim), dtype=np.int64)
        labels[rows[:, 0] - 1] = rows[:, 1:]
    elif "v" in parsed.values:
        raise FormatError("label lines present but header declares no dimension")
    return Graph.from_edges(n, edges, labels)


def save_graph(g: Graph, target: str | Path, comments: Optional[list[str]] = None) -> None:
    Path(target).write_bytes(format_graph(g, comments))


def load_graph(source: str | Path) -> Graph:
    return parse_graph(Path(source).read_bytes())
