"""Stack and queue layouts: data types, validators and small exact solvers.

Positions are 0-based internally; vertex ids stay 1-based.  Validators
count *every* conflicting pair exactly with a Fenwick-tree sweep over
left endpoints, page by page, and keep at most ten witness pairs.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import ClassVar, Optional

import numba
import numpy as np

from stacklab._text import FormatError, format_header, format_records, parse_text
from stacklab.graphs import Graph

__all__ = [
    "BoundedSearchError",
    "CoverageError",
    "LayoutReport",
    "PreconditionError",
    "QueueLayout",
    "StackLayout",
    "TooLargeError",
    "VertexOrder",
    "crossing_matrix",
    "exact_stack_number",
    "format_layout",
    "is_dispersable",
    "load_layout",
    "min_stacks_for_order",
    "parse_layout",
    "save_layout",
    "validate_layout",
    "validate_queue_layout",
    "validate_stack_layout",
]

MAX_WITNESSES = 10


class CoverageError(ValueError):
    """The layout's edges are not exactly the host graph's edges."""


class PreconditionError(ValueError):
    pass


class TooLargeError(ValueError):
    pass


class BoundedSearchError(RuntimeError):
    """Exact search hit its node limit; ``best`` holds the best layout found."""

    def __init__(self, message: str, best_s: int, best: "StackLayout"):
        super().__init__(message)
        self.best_s = best_s
        self.best = best


@dataclass(frozen=True, eq=False)
class VertexOrder:
    """A total order of vertices ``1..n`` and its inverse."""

    order: np.ndarray
    position: np.ndarray = field(default=None)

    def __post_init__(self):
        order = np.ascontiguousarray(self.order, dtype=np.int64)
        n = order.size
        position = np.full(n, -1, dtype=np.int64)
        if n:
            if order.min() < 1 or order.max() > n:
                raise ValueError("order must be a permutation of 1..n")
            position[order - 1] = np.arange(n)
            if np.any(position < 0):
                raise ValueError("order must be a permutation of 1..n")
        order.setflags(write=False)
        position.setflags(write=False)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "position", position)

    @classmethod
    def identity(cls, n: int) -> "VertexOrder":
        return cls(np.arange(1, n + 1, dtype=np.int64))

    @classmethod
    def from_positions(cls, position) -> "VertexOrder":
        """Build from 0-based positions indexed by ``id - 1``."""
        position = np.asarray(position, dtype=np.int64)
        order = np.empty_like(position)
        order[position] = np.arange(1, position.size + 1)
        return cls(order)

    @property
    def inverse(self) -> np.ndarray:
        return self.position

    def __len__(self) -> int:
        return int(self.order.size)

    def __eq__(self, other):
        return isinstance(other, VertexOrder) and np.array_equal(self.order, other.order)

    __hash__ = None


@dataclass(frozen=True, eq=False)
class _Layout:
    order: VertexOrder
    edges: np.ndarray
    assignment: np.ndarray
    page_count: int

    kind: ClassVar[str] = ""

    def __post_init__(self):
        raw = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if raw.size and np.any(raw[:, 0] > raw[:, 1]):
            raw = np.column_stack((raw.min(axis=1), raw.max(axis=1)))
        # read-only inputs (e.g. a graph's edge array) are shared, not copied
        edges = raw.copy() if raw.flags.writeable else raw
        assignment = np.ascontiguousarray(self.assignment, dtype=np.int64).ravel()
        if assignment.size != edges.shape[0]:
            raise ValueError("one page id per edge is required")
        page_count = int(self.page_count)
        if assignment.size and (assignment.min() < 1 or assignment.max() > page_count):
            raise ValueError(f"page ids must lie in 1..{page_count}")
        n = len(self.order)
        if edges.size and (edges.min() < 1 or edges.max() > n):
            raise ValueError("edge endpoint outside the vertex order")
        edges.setflags(write=False)
        assignment.setflags(write=False)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "assignment", assignment)
        object.__setattr__(self, "page_count", page_count)

    @property
    def vertex_count(self) -> int:
        return len(self.order)

    def pages_used(self) -> int:
        return int(np.unique(self.assignment).size)

    def page(self, k: int) -> np.ndarray:
        return self.edges[self.assignment == k]

    def compressed(self):
        """Same layout with page ids renumbered ``1..pages_used`` (order kept)."""
        used, inverse = np.unique(self.assignment, return_inverse=True)
        return type(self)(self.order, self.edges, inverse + 1, used.size)

    def restrict(self, keep):
        """Layout induced on a vertex mask; ids are compacted in increasing order."""
        keep = np.asarray(keep, dtype=bool)
        new_id = np.cumsum(keep)
        sel = keep[self.edges[:, 0] - 1] & keep[self.edges[:, 1] - 1]
        order = new_id[self.order.order[keep[self.order.order - 1]] - 1]
        return type(self)(
            VertexOrder(order), new_id[self.edges[sel] - 1], self.assignment[sel], self.page_count
        )

    def without_edges(self, drop):
        drop = np.asarray(drop, dtype=bool)
        return type(self)(self.order, self.edges[~drop], self.assignment[~drop], self.page_count)

    def graph(self) -> Graph:
        return Graph.from_edges(self.vertex_count, self.edges)


@dataclass(frozen=True, eq=False)
class StackLayout(_Layout):
    """Vertex order plus edge-to-stack assignment; valid iff no stack has a crossing."""

    kind: ClassVar[str] = "stack"

    @property
    def s(self) -> int:
        return self.page_count


@dataclass(frozen=True, eq=False)
class QueueLayout(_Layout):
    """Vertex order plus edge-to-queue assignment; valid iff no queue has a nesting."""

    kind: ClassVar[str] = "queue"

    @property
    def q(self) -> int:
        return self.page_count


@dataclass
class LayoutReport:
    valid: bool
    violation_count: int
    first_violations: list[tuple[tuple[int, int], tuple[int, int]]]
    pages_used: int
    per_page_is_matching: dict[int, bool]
    per_page_edges: dict[int, int]
    per_page_violations: dict[int, int]

    def to_csv(self) -> str:
        rows = ["page,edges,violations,is_matching"]
        for k in sorted(self.per_page_edges):
            rows.append(
                f"{k},{self.per_page_edges[k]},{self.per_page_violations[k]},"
                f"{int(self.per_page_is_matching[k])}"
            )
        return "\n".join(rows) + "\n"


# ------------------------------------------------------------------ kernels

@numba.njit(cache=True)
def _conflicts_per_edge(left, right, page_start, n, nesting):
    """For each edge (sorted by page, left) count earlier-left partners.

    Crossing partner of (k, l): inserted (i, j) with i < k < j < l.
    Nesting partner of (k, l): inserted (i, j) with i < k and j > l.
    """
    m = left.size
    tree = np.zeros(n + 1, np.int64)
    out = np.zeros(m, np.int64)
    for p in range(page_start.size - 1):
        a = page_start[p]
        b = page_start[p + 1]
        inserted = 0
        i = a
        while i < b:
            j = i
            while j < b and left[j] == left[i]:
                j += 1
            for e in range(i, j):
                if nesting:
                    idx = right[e] + 1
                    s = 0
                    while idx > 0:
                        s += tree[idx]
                        idx -= idx & -idx
                    out[e] = inserted - s
                else:
                    hi = right[e]
                    s = 0
                    while hi > 0:
                        s += tree[hi]
                        hi -= hi & -hi
                    lo = left[e] + 1
                    t = 0
                    while lo > 0:
                        t += tree[lo]
                        lo -= lo & -lo
                    out[e] = s - t
            for e in range(i, j):
                idx = right[e] + 1
                while idx <= n:
                    tree[idx] += 1
                    idx += idx & -idx
                inserted += 1
            i = j
        for e in range(a, b):
            idx = right[e] + 1
            while idx <= n:
                tree[idx] -= 1
                idx += idx & -idx
    return out


@numba.njit(cache=True)
def _page_left_order(page, left, n, page_count):
    """Stable counting sort of edges by (page, left endpoint)."""
    m = page.size
    count = np.zeros(n + 1, np.int64)
    for e in range(m):
        count[left[e] + 1] += 1
    for i in range(n):
        count[i + 1] += count[i]
    by_left = np.empty(m, np.int64)
    for e in range(m):
        by_left[count[left[e]]] = e
        count[left[e]] += 1
    pcount = np.zeros(page_count + 2, np.int64)
    for e in range(m):
        pcount[page[e] + 1] += 1
    for k in range(page_count + 1):
        pcount[k + 1] += pcount[k]
    out = np.empty(m, np.int64)
    for t in range(m):
        e = by_left[t]
        out[pcount[page[e]]] = e
        pcount[page[e]] += 1
    return out


@numba.njit(cache=True)
def _pages_with_shared_endpoint(u, v, page_start, n):
    """Flag each page (in sorted order) on which two edges share a vertex."""
    stamp = np.full(n + 1, -1, np.int64)
    out = np.zeros(page_start.size - 1, np.bool_)
    for p in range(page_start.size - 1):
        for e in range(page_start[p], page_start[p + 1]):
            for x in (u[e], v[e]):
                if stamp[x] == p:
                    out[p] = True
                stamp[x] = p
    return out


@numba.njit(cache=True)
def _find_partners(left, right, page_start, page_of, hits, nesting, limit):
    found = np.empty((limit, 2), np.int64)
    c = 0
    for h in range(hits.size):
        e = hits[h]
        p = page_of[e]
        for f in range(page_start[p], e):
            if left[f] >= left[e]:
                break
            if nesting:
                ok = right[f] > right[e]
            else:
                ok = left[e] < right[f] and right[f] < right[e]
            if ok:
                found[c, 0] = f
                found[c, 1] = e
                c += 1
                if c == limit:
                    return found
    return found[:c]


# --------------------------------------------------------------- validators

def _check_coverage(g: Graph, layout: _Layout) -> None:
    if layout.vertex_count != g.vertex_count:
        raise CoverageError(
            f"layout orders {layout.vertex_count} vertices, graph has {g.vertex_count}"
        )
    n = g.vertex_count
    if np.array_equal(layout.edges, g.edges):
        return
    codes = np.sort(layout.edges[:, 0] * (n + 1) + layout.edges[:, 1])
    if codes.size == g.edge_count and np.array_equal(codes, g._codes):
        return
    dup = np.flatnonzero(codes[1:] == codes[:-1])
    extra = np.setdiff1d(codes, g._codes, assume_unique=False)
    missing = np.setdiff1d(g._codes, codes, assume_unique=True)

    def name(code):
        return f"{int(code) // (n + 1)} {int(code) % (n + 1)}"

    if extra.size:
        raise CoverageError(f"edge {name(extra[0])} is not in the graph")
    if dup.size:
        raise CoverageError(f"edge {name(codes[dup[0]])} is assigned more than once")
    raise CoverageError(f"edge {name(missing[0])} is not assigned to any page")


def validate_layout(g: Graph, layout: _Layout) -> LayoutReport:
    """Validate a stack or queue layout against its host graph."""
    _check_coverage(g, layout)
    nesting = layout.kind == "queue"
    pos = layout.order.position
    a = pos[layout.edges[:, 0] - 1]
    b = pos[layout.edges[:, 1] - 1]
    left = np.minimum(a, b)
    right = np.maximum(a, b)
    perm = _page_left_order(layout.assignment, left, layout.vertex_count, layout.page_count)
    left, right, pages = left[perm], right[perm], layout.assignment[perm]
    page_start = np.flatnonzero(np.diff(pages, prepend=-1))
    used = pages[page_start]
    page_start = np.append(page_start, pages.size).astype(np.int64)
    counts = _conflicts_per_edge(left, right, page_start, layout.vertex_count, nesting)

    page_of = np.repeat(np.arange(used.size), np.diff(page_start))
    per_page_viol = np.bincount(page_of, weights=counts, minlength=used.size).astype(np.int64)
    total = int(counts.sum())
    edges_sorted = layout.edges[perm]
    witnesses = []
    if total:
        hits = np.flatnonzero(counts)
        pairs = _find_partners(left, right, page_start, page_of, hits, nesting, MAX_WITNESSES)
        for f, e in pairs:
            witnesses.append((tuple(map(int, edges_sorted[f])), tuple(map(int, edges_sorted[e]))))

    matching = ~_pages_with_shared_endpoint(
        edges_sorted[:, 0], edges_sorted[:, 1], page_start, layout.vertex_count
    )
    return LayoutReport(
        valid=total == 0,
        violation_count=total,
        first_violations=witnesses,
        pages_used=int(used.size),
        per_page_is_matching={int(k): bool(v) for k, v in zip(used, matching)},
        per_page_edges={int(k): int(v) for k, v in zip(used, np.diff(page_start))},
        per_page_violations={int(k): int(v) for k, v in zip(used, per_page_viol)},
    )


def validate_stack_layout(g: Graph, layout: StackLayout) -> LayoutReport:
    """Report every pair of same-stack edges that cross."""
    if layout.kind != "stack":
        raise TypeError("expected a StackLayout")
    return validate_layout(g, layout)


def validate_queue_layout(g: Graph, layout: QueueLayout) -> LayoutReport:
    """Report every pair of same-queue edges that nest."""
    if layout.kind != "queue":
        raise TypeError("expected a QueueLayout")
    return validate_layout(g, layout)


def is_dispersable(g: Graph, layout: StackLayout) -> bool:
    """True iff the (valid) stack layout puts a matching on every stack."""
    report = validate_stack_layout(g, layout)
    if not report.valid:
        raise PreconditionError(
            f"layout has {report.violation_count} crossing pairs; dispersability needs a valid layout"
        )
    return all(report.per_page_is_matching.values())


# ----------------------------------------------------------- exact solvers

def crossing_matrix(g: Graph, order: VertexOrder) -> np.ndarray:
    """Boolean matrix of crossing edge pairs (rows follow ``g.edges``)."""
    pos = order.position
    a = pos[g.edges[:, 0] - 1]
    b = pos[g.edges[:, 1] - 1]
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    l1, r1 = lo[:, None], hi[:, None]
    l2, r2 = lo[None, :], hi[None, :]
    return ((l1 < l2) & (l2 < r1) & (r1 < r2)) | ((l2 < l1) & (l1 < r2) & (r2 < r1))


def _greedy_pages(g: Graph, order: VertexOrder) -> np.ndarray:
    pos = order.position
    a = pos[g.edges[:, 0] - 1]
    b = pos[g.edges[:, 1] - 1]
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    assignment = np.zeros(g.edge_count, dtype=np.int64)
    stacks: list[list[int]] = []
    for e in np.lexsort((-hi, lo)):
        l, r = int(lo[e]), int(hi[e])
        for k, st in enumerate(stacks):
            while st and st[-1] <= l:
                st.pop()
            if not st or st[-1] >= r:
                st.append(r)
                assignment[e] = k + 1
                break
        else:
            stacks.append([r])
            assignment[e] = len(stacks)
    return assignment


class _NodeLimit(Exception):
    pass


def _k_coloring(adj: list[list[int]], order: list[int], k: int, budget: list[int]):
    """Backtracking k-colouring in a fixed fail-first order; None if impossible."""
    colour = [-1] * len(adj)

    def place(t: int, used: int) -> bool:
        if t == len(order):
            return True
        budget[0] -= 1
        if budget[0] < 0:
            raise _NodeLimit
        e = order[t]
        taken = {colour[f] for f in adj[e] if colour[f] >= 0}
        for c in range(min(used + 1, k)):
            if c not in taken:
                colour[e] = c
                if place(t + 1, max(used, c + 1)):
                    return True
        colour[e] = -1
        return False

    return colour if place(0, 0) else None


def _clique_lower_bound(adj: list[list[int]], order: list[int]) -> int:
    best = 1 if adj else 0
    neigh = [set(a) for a in adj]
    for start in order:
        clique = [start]
        cand = set(neigh[start])
        while cand:
            v = max(cand, key=lambda x: len(neigh[x] & cand))
            clique.append(v)
            cand &= neigh[v]
        best = max(best, len(clique))
    return best


def _exact_pages(cross: np.ndarray, upper: np.ndarray, node_limit: int, target: Optional[int] = None):
    """Minimum colouring of the crossing graph, or the first colouring below ``target``."""
    m = cross.shape[0]
    adj = [list(np.flatnonzero(cross[e])) for e in range(m)]
    order = sorted(range(m), key=lambda e: (-len(adj[e]), e))
    ub = int(upper.max()) if m else 0
    best = upper - 1
    lb = _clique_lower_bound(adj, order)
    stop = ub if target is None else min(ub, target)
    budget = [node_limit]
    for k in range(lb, stop):
        colour = _k_coloring(adj, order, k, budget)
        if colour is not None:
            return k, np.asarray(colour, dtype=np.int64)
    return ub, best


def min_stacks_for_order(
    g: Graph,
    order: VertexOrder,
    exact_threshold: int = 64,
    node_limit: int = 2_000_000,
) -> tuple[int, StackLayout]:
    """Fewest stacks for a fixed vertex order (colours the crossing graph).

    Exact backtracking when ``|E| <= exact_threshold``; otherwise first-fit
    over edges sorted by (left endpoint, right endpoint descending).
    """
    if g.edge_count > 10**6:
        raise TooLargeError(f"{g.edge_count} edges exceeds the 10^6 limit")
    if len(order) != g.vertex_count:
        raise ValueError("order does not match the graph")
    greedy = _greedy_pages(g, order)
    s = int(greedy.max()) if g.edge_count else 0
    assignment = greedy
    if 0 < g.edge_count <= exact_threshold:
        cross = crossing_matrix(g, order)
        try:
            s, colour = _exact_pages(cross, greedy, node_limit)
            assignment = colour + 1
        except _NodeLimit:
            best = StackLayout(order, g.edges, greedy, s)
            raise BoundedSearchError(
                f"exact search exceeded {node_limit} nodes; best found uses {s} stacks", s, best
            ) from None
    layout = StackLayout(order, g.edges, assignment, s)
    if not validate_stack_layout(g, layout).valid:
        raise AssertionError("fixed-order colouring produced a crossing")
    return s, layout


def _stack_lower_bound(g: Graph) -> int:
    n, m = g.vertex_count, g.edge_count
    if m == 0:
        return 0
    if n <= 3:
        return 1
    # every page is outerplanar on the same spine: m <= n + s (n - 3)
    return max(1, math.ceil((m - n) / (n - 3)))


def exact_stack_number(g: Graph, max_n: int = 9, node_limit: int = 2_000_000) -> int:
    """Stack number by brute force over vertex orders.

    Vertex 1 is fixed first and of each reflected pair only the order whose
    second vertex is smaller than its last is tried; stops early once the
    edge-count lower bound is met.
    """
    n = g.vertex_count
    if n > max_n:
        raise TooLargeError(f"exact_stack_number refuses {n} vertices (limit {max_n})")
    lb = _stack_lower_bound(g)
    if lb == 0:
        return 0
    best = None
    for rest in itertools.permutations(range(2, n + 1)):
        if len(rest) > 1 and rest[0] > rest[-1]:
            continue
        order = VertexOrder(np.array((1,) + rest, dtype=np.int64))
        greedy = _greedy_pages(g, order)
        target = best if best is not None else None
        if target is not None and target <= lb:
            break
        ub = int(greedy.max())
        if g.edge_count <= 1:
            s = ub
        else:
            cross = crossing_matrix(g, order)
            try:
                s, _ = _exact_pages(cross, greedy, node_limit, target)
            except _NodeLimit:
                raise BoundedSearchError(
                    f"exact search exceeded {node_limit} nodes", best or ub,
                    StackLayout(order, g.edges, greedy, ub),
                ) from None
        if best is None or s < best:
            best = s
        if best <= lb:
            break
    return int(best)


# ------------------------------------------------------------- text format

def format_layout(layout: _Layout) -> bytes:
    head = format_header(
        f"{layout.kind}layout", layout.vertex_count, len(layout.edges), layout.page_count
    )
    order = format_records("order", layout.order.order[None, :]) if len(layout.order) else b"order\n"
    rows = np.column_stack((layout.edges, layout.assignment))
    return head + order + format_records("e", rows)


def parse_layout(data: bytes | str):
    parsed = parse_text(data)
    heads = [h for _, h in parsed.headers if h[0] in ("stacklayout", "queuelayout")]
    if len(heads) != 1 or len(heads[0]) != 4:
        raise FormatError("expected one 'stacklayout|queuelayout <n> <m> <pages>' header")
    kind, n, m, pages = heads[0][0], int(heads[0][1]), int(heads[0][2]), int(heads[0][3])
    orders = parsed.header("order")
    if len(orders) != 1:
        raise FormatError("expected exactly one 'order' line")
    order = np.array(orders[0][1:], dtype=np.int64)
    if order.size != n:
        raise FormatError(f"order lists {order.size} vertices, header says {n}")
    rows = parsed.records("e", 3)
    if len(rows) != m:
        raise FormatError(f"header declares {m} edges, found {len(rows)}")
    cls = StackLayout if kind == "stacklayout" else QueueLayout
    try:
        return cls(VertexOrder(order), rows[:, :2], rows[:, 2], pages)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def save_layout(layout: _Layout, target: str | Path) -> None:
    Path(target).write_bytes(format_layout(layout))


def load_layout(source: str | Path):
    return parse_layout(Path(source).read_bytes())
