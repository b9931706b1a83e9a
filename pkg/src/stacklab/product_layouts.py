"""Constructive stack and queue layouts of strong products.

Vertex ids follow ``graphs``: the product vertex ``(x, y)`` of ``G1 x G2``
has id ``(x - 1) * |V(G2)| + y``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from stacklab.graphs import (
    Graph,
    complete,
    directed_path,
    path,
    strong_product,
    triangulated_product,
)
from stacklab.hadamard import (
    ORDER4_EXAMPLE,
    HadamardMatrix,
    path_stack_assignment,
    permutation_family,
    sum_set_bound,
)
from stacklab.layouts import (
    PreconditionError,
    QueueLayout,
    StackLayout,
    VertexOrder,
    is_dispersable,
    validate_stack_layout,
)

__all__ = [
    "DispersableLayout",
    "PathProductBuild",
    "ProperColoring",
    "StarForestPartition",
    "check_star_forest_partition",
    "complete_graph_layout",
    "cube_root_ceil",
    "grid_coloring",
    "grid_stack_layout",
    "path_product_bound",
    "product_with_complete",
    "product_with_path",
    "product_with_path_build",
    "queue_layout_triple_path",
    "random_maximal_outerplanar",
    "snake_order",
    "star_forest_partition",
    "triple_path_bound",
    "triple_path_layout",
]


@dataclass(frozen=True, eq=False)
class ProperColoring:
    """``color[v - 1]`` in ``1..p`` for every vertex ``v``."""

    color: np.ndarray

    def __post_init__(self):
        color = np.ascontiguousarray(self.color, dtype=np.int64)
        if color.size and color.min() < 1:
            raise ValueError("colours start at 1")
        color.setflags(write=False)
        object.__setattr__(self, "color", color)

    @property
    def colors_used(self) -> int:
        return int(self.color.max()) if self.color.size else 0

    def is_proper(self, g: Graph) -> bool:
        if self.color.size != g.vertex_count:
            return False
        return not np.any(self.color[g.edges[:, 0] - 1] == self.color[g.edges[:, 1] - 1])


@dataclass(frozen=True, eq=False)
class DispersableLayout:
    """A stack layout already checked to have a matching on every stack."""

    layout: StackLayout

    @property
    def d(self) -> int:
        return self.layout.page_count

    @classmethod
    def certify(cls, g: Graph, layout: StackLayout) -> "DispersableLayout":
        if not is_dispersable(g, layout):
            raise PreconditionError("some stack is not a matching")
        return cls(layout)


# ------------------------------------------------------------------ grids

def _grid_rows_cols(n: int, ids: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """0-based row and 1-based column of grid vertex ids."""
    return (ids - 1) // n, (ids - 1) % n + 1


def snake_order(n: int) -> VertexOrder:
    """Boustrophedon order of ``P_n x P_n``: even rows left to right, odd rows reversed."""
    if n < 1:
        raise ValueError("n must be positive")
    ids = np.arange(1, n * n + 1, dtype=np.int64)
    r, j = _grid_rows_cols(n, ids)
    pos = np.where(r % 2 == 0, r * n + j - 1, r * n + n - j)
    return VertexOrder.from_positions(pos)


def grid_stack_layout(n: int, dispersable: bool = False) -> StackLayout:
    """Stack layout of ``P_n x P_n`` on the snake order.

    Edges between rows ``r`` and ``r + 1`` have position sums ``S``,
    ``S + 1`` or ``S + 2`` (vertical edges ``S + 1``).  Same-sum edges nest
    and sums one apart cannot cross, so the low pair ``{S, S + 1}`` and the
    high sum each form a stack per row-pair parity.  Horizontal edges join
    consecutive positions and can go anywhere; they go to the odd-parity
    stacks so that all four stacks are used even for ``n = 2``.

    In dispersable mode the eight stacks are vertical / low diagonal / high
    diagonal per row-pair parity, plus horizontal edges split by column
    parity; every stack is then a matching.
    """
    if n < 2:
        raise ValueError("grid layouts need n >= 2")
    g = strong_product(path(n), path(n))
    order = snake_order(n)
    u, v = g.edges[:, 0], g.edges[:, 1]
    ru, ju = _grid_rows_cols(n, u)
    rv, jv = _grid_rows_cols(n, v)
    horizontal = ru == rv
    parity = ru % 2
    pos_sum = order.position[u - 1] + order.position[v - 1]
    base = 2 * (ru + 1) * n - 2  # S with 0-based positions
    offset = pos_sum - base
    if np.any(~horizontal & ((offset < 0) | (offset > 2))):
        raise AssertionError("inter-row position sums out of range")
    if dispersable:
        family = np.where(jv == ju, 0, np.where(offset == 0, 1, 2))
        assignment = 1 + 2 * family + parity
        assignment = np.where(horizontal, 7 + (ju + 1) % 2, assignment)
        pages = 8
    else:
        high = offset == 2
        assignment = 1 + high + 2 * parity
        assignment = np.where(horizontal, 3 + ru % 2, assignment)
        pages = 4
    return StackLayout(order, g.edges, assignment, pages)


def grid_coloring(n: int) -> ProperColoring:
    """Proper 4-colouring of ``P_n x P_n`` by row and column parity."""
    ids = np.arange(1, n * n + 1, dtype=np.int64)
    r, j = _grid_rows_cols(n, ids)
    return ProperColoring(2 * (r % 2) + (j - 1) % 2 + 1)


# ------------------------------------------------------ products with paths

def path_product_bound(d: int, p: int, m: int) -> int:
    """``d (2p - 1) m^(p/2 - 1) + 2p - 3`` stacks for ``G x P_(m^(p-1))``."""
    return d * sum_set_bound(p, m) + max(0, 2 * p - 3)


@dataclass
class PathProductBuild:
    host: Graph
    layout: StackLayout
    path_length: int
    # stack label before compression and the per-edge sum (0 on path edges)
    raw_stack: np.ndarray
    phi: np.ndarray
    bound: int


def product_with_path_build(
    g: Graph,
    dispersable: DispersableLayout | StackLayout,
    coloring: ProperColoring,
    hadamard: HadamardMatrix,
    m: int,
) -> PathProductBuild:
    """Layout of ``G x P_n`` (``n = m^(p-1)``) together with its intermediate labels."""
    if isinstance(dispersable, StackLayout):
        dispersable = DispersableLayout.certify(g, dispersable)
    base = dispersable.layout
    p = hadamard.order
    if not coloring.is_proper(g):
        raise ValueError("colouring is not proper for the base graph")
    if coloring.colors_used > p:
        raise ValueError(f"colouring uses {coloring.colors_used} colours but the matrix has order {p}")
    family = permutation_family(hadamard, m)
    n = family.n
    host = strong_product(g, path(n))

    rho = coloring.color
    blocks = base.order.order
    inv = family.inverses[rho[blocks - 1] - 1]  # per block, path indices in order
    order = VertexOrder((((blocks - 1) * n)[:, None] + inv).ravel())

    a, b = host.edges[:, 0], host.edges[:, 1]
    ua, ia = (a - 1) // n + 1, (a - 1) % n + 1
    ub, ib = (b - 1) // n + 1, (b - 1) % n + 1
    intra = ua == ub
    shared = max(0, 2 * p - 3)
    raw = np.zeros(host.edge_count, dtype=np.int64)
    phi = np.zeros(host.edge_count, dtype=np.int64)
    if n > 1:
        raw[intra] = path_stack_assignment(n, m, p)[np.minimum(ia, ib)[intra] - 1]
    cross = ~intra
    if np.any(cross):
        psi = base.assignment[g.edge_index(np.column_stack((ua[cross], ub[cross])))]
        phi_c = (
            family.perms[rho[ua[cross] - 1] - 1, ia[cross] - 1]
            + family.perms[rho[ub[cross] - 1] - 1, ib[cross] - 1]
        )
        phi[cross] = phi_c
        raw[cross] = shared + (psi - 1) * (2 * n - 1) + (phi_c - 1)
    used, compressed = np.unique(raw, return_inverse=True)
    bound = path_product_bound(dispersable.d, p, m)
    if used.size > bound:
        raise AssertionError(f"{used.size} stacks exceed the bound {bound}")
    layout = StackLayout(order, host.edges, compressed + 1, used.size)
    return PathProductBuild(host, layout, n, raw, phi, bound)


def product_with_path(g, dispersable, coloring, hadamard, m) -> StackLayout:
    """Stack layout of ``G x P_(m^(p-1))`` from a dispersable layout of ``G``.

    Each path block is ordered by the inverse of the permutation picked by
    the block's colour.  Path edges share ``2p - 3`` stacks; an edge between
    blocks ``u`` and ``v`` goes to the stack named by the stack of ``uv``
    and the sum of the two permutation values.
    """
    return product_with_path_build(g, dispersable, coloring, hadamard, m).layout


def cube_root_ceil(n: int) -> int:
    m = max(1, round(n ** (1 / 3)))
    while m**3 < n:
        m += 1
    while m > 1 and (m - 1) ** 3 >= n:
        m -= 1
    return m


def triple_path_bound(n: int) -> float:
    return 112 * n ** (1 / 3) + 5


def triple_path_layout(n: int, with_build: bool = False):
    """Stack layout of ``P_n x P_n x P_n`` with at most ``112 n^(1/3) + 5`` stacks.

    Builds the layout for path length ``m^3 >= n`` and restricts it.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    m = cube_root_ceil(n)
    grid = grid_stack_layout(n, dispersable=True)
    build = product_with_path_build(
        strong_product(path(n), path(n)), grid, grid_coloring(n), ORDER4_EXAMPLE, m
    )
    layout = build.layout
    if build.path_length != n:
        keep = (np.arange(build.host.vertex_count) % build.path_length) < n
        layout = layout.restrict(keep).compressed()
    return (layout, build) if with_build else layout


def queue_layout_triple_path(n: int) -> tuple[Graph, QueueLayout]:
    """4-queue layout of the triangulated product of three directed ``n``-paths.

    Lexicographic order; the queue is chosen by the id difference, which is
    one of ``1``, ``n``, ``n + 1``, ``n^2``, ``n^2 + 1``, ``n^2 + n``.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    d = directed_path(n)
    g = triangulated_product(d, d, d)
    diff = g.edges[:, 1] - g.edges[:, 0]
    queue = np.select(
        [diff == 1, (diff == n) | (diff == n + 1), (diff == n * n) | (diff == n * n + 1), diff == n * n + n],
        [1, 2, 3, 4],
        0,
    )
    if np.any(queue == 0):
        raise AssertionError("edge difference outside the four classes")
    return g, QueueLayout(VertexOrder.identity(g.vertex_count), g.edges, queue, 4)


# --------------------------------------------------- products with cliques

@dataclass
class StarForestPartition:
    """Edge partition into three star forests.

    ``forest[e]`` is in ``1..3`` and ``centre[e]`` is the endpoint of edge
    ``e`` at the centre of its star.  ``centre_forest[v - 1]`` names a forest
    in which ``v`` is a star centre (possibly of a one-vertex star).
    """

    edges: np.ndarray
    forest: np.ndarray
    centre: np.ndarray
    centre_forest: np.ndarray

    def forests(self) -> list[np.ndarray]:
        return [self.edges[self.forest == a] for a in (1, 2, 3)]


def _elimination_colouring(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    """Peel vertices of degree <= 2 (joining their two neighbours) and 3-colour.

    Returns the elimination rank of each vertex and a colouring in which the
    later-eliminated neighbours of every vertex have pairwise distinct colours
    different from its own.
    """
    n = g.vertex_count
    adj = [set() for _ in range(n)]
    for u, v in g.edges - 1:
        adj[u].add(v)
        adj[v].add(u)
    rank = np.full(n, -1, dtype=np.int64)
    later: list[tuple[int, ...]] = [()] * n
    low = [v for v in range(n) if len(adj[v]) <= 2]
    step = 0
    while low:
        v = low.pop()
        if rank[v] >= 0 or len(adj[v]) > 2:
            continue
        rank[v] = step
        step += 1
        nbrs = tuple(adj[v])
        later[v] = nbrs
        for w in nbrs:
            adj[w].discard(v)
        if len(nbrs) == 2:
            a, b = nbrs
            adj[a].add(b)
            adj[b].add(a)
        low.extend(w for w in nbrs if len(adj[w]) <= 2)
        adj[v] = set()
    if step < n:
        raise PreconditionError("graph is not a partial 2-tree (peeling got stuck)")
    colour = np.zeros(n, dtype=np.int64)
    for v in np.argsort(rank)[::-1]:
        taken = {colour[w] for w in later[v]}
        colour[v] = min({1, 2, 3} - taken)
    return rank, colour


def star_forest_partition(g: Graph, layout: StackLayout) -> StarForestPartition:
    """Split an outerplanar graph (given with a 1-stack layout) into 3 star forests."""
    report = validate_stack_layout(g, layout)
    if not report.valid or report.pages_used > 1:
        raise PreconditionError("a valid layout with at most one stack is required")
    rank, colour = _elimination_colouring(g)
    u, v = g.edges[:, 0], g.edges[:, 1]
    centre = np.where(rank[u - 1] > rank[v - 1], u, v)
    partition = StarForestPartition(g.edges, colour[centre - 1], centre, colour)
    problems = check_star_forest_partition(g, partition)
    if problems:
        raise AssertionError("star forest partition failed its check: " + problems[0])
    return partition


def check_star_forest_partition(g: Graph, part: StarForestPartition) -> list[str]:
    """Check a partition from its edge sets alone; returns problems (empty when valid).

    Every component of every forest must be a star (a tree with a vertex
    adjacent to all others) and ``centre_forest`` must name, for each vertex,
    a forest in which it is such a vertex.
    """
    problems = []
    n = g.vertex_count
    codes = np.sort(part.edges.min(axis=1) * (n + 1) + part.edges.max(axis=1))
    if codes.size != g.edge_count or not np.array_equal(codes, g._codes):
        problems.append("forests do not partition the edge set")
    if part.forest.size and (part.forest.min() < 1 or part.forest.max() > 3):
        problems.append("forest ids must be 1..3")
    is_centre = np.zeros((3, n), dtype=bool)
    for a in (1, 2, 3):
        e = part.edges[part.forest == a] - 1
        mat = coo_matrix((np.ones(len(e)), (e[:, 0], e[:, 1])), shape=(n, n))
        _, comp = connected_components(mat, directed=False)
        size = np.bincount(comp, minlength=n)
        edge_count = np.bincount(comp[e[:, 0]], minlength=n) if len(e) else np.zeros(n, np.int64)
        deg = np.bincount(e.ravel(), minlength=n)
        roots = np.unique(comp)
        if np.any(edge_count[roots] != size[roots] - 1):
            problems.append(f"forest {a} has a cycle")
        is_centre[a - 1] = deg == size[comp] - 1
        has_centre = np.zeros(n, dtype=bool)
        has_centre[comp[is_centre[a - 1]]] = True
        if not has_centre[roots].all():
            problems.append(f"forest {a} has a component that is not a star")
    w = np.asarray(part.centre_forest)
    if w.size != n or w.min() < 1 or w.max() > 3:
        problems.append("centre witness must name a forest 1..3 for every vertex")
    else:
        bad = np.flatnonzero(~is_centre[w - 1, np.arange(n)])
        if bad.size:
            problems.append(f"vertex {bad[0] + 1} is not a centre in its witness forest")
    return problems


def complete_graph_layout(t: int) -> StackLayout:
    """``ceil(t/2)``-stack layout of ``K_t`` from zigzag Hamiltonian paths."""
    if t < 1:
        raise ValueError("t must be positive")
    g = complete(t)
    size = t + t % 2
    stack = {}
    for r in range(size // 2):
        seq = [r]
        for step in range(1, size):
            delta = (step + 1) // 2 if step % 2 else -(step // 2)
            seq.append((r + delta) % size)
        for x, y in zip(seq, seq[1:]):
            if x < t and y < t:
                stack[(min(x, y) + 1, max(x, y) + 1)] = r + 1
    assignment = np.array([stack[(int(a), int(b))] for a, b in g.edges], dtype=np.int64)
    return StackLayout(VertexOrder.identity(t), g.edges, assignment, (t + 1) // 2 if t > 1 else 0)


def product_with_complete(g: Graph, layout: StackLayout, t: int) -> StackLayout:
    """Stack layout of ``G x K_t`` with at most ``max(3 s t, ceil(t/2))`` stacks.

    Each stack of ``layout`` is split into three star forests.  An edge of
    the product is labelled by the stack and forest of its base edge and by
    the clique coordinate of the endpoint lying over the star centre; edges
    inside one clique block use the forest where that vertex is a centre.
    """
    if t < 1:
        raise ValueError("t must be positive")
    n = g.vertex_count
    if n == 1:
        return complete_graph_layout(t)
    report = validate_stack_layout(g, layout)
    if not report.valid:
        raise PreconditionError("base layout has crossings")
    host = strong_product(g, complete(t))
    blocks = layout.order.order
    order = VertexOrder((((blocks - 1) * t)[:, None] + np.arange(1, t + 1)).ravel())
    a, b = host.edges[:, 0], host.edges[:, 1]
    ua, ia = (a - 1) // t + 1, (a - 1) % t + 1
    ub, ib = (b - 1) // t + 1, (b - 1) % t + 1
    intra = ua == ub

    if g.edge_count == 0:
        kt = complete_graph_layout(t)
        pos = kt.edges[:, 0] * (t + 1) + kt.edges[:, 1]
        lookup = dict(zip(pos.tolist(), kt.assignment.tolist()))
        assignment = np.array(
            [lookup[int(x) * (t + 1) + int(y)] for x, y in zip(ia, ib)], dtype=np.int64
        )
        return StackLayout(order, host.edges, assignment, max(1, (t + 1) // 2) if t > 1 else 0)

    s = layout.page_count
    forest = np.zeros(g.edge_count, dtype=np.int64)
    centre = np.zeros(g.edge_count, dtype=np.int64)
    witness = None
    for k in range(1, s + 1):
        sel = layout.assignment == k
        page = Graph.from_edges(n, g.edges[sel])
        part = star_forest_partition(
            page, StackLayout(layout.order, page.edges, np.ones(page.edge_count, np.int64), 1)
        )
        idx = np.flatnonzero(sel)[g.edge_index(page.edges)] if page.edge_count else np.zeros(0, np.int64)
        forest[idx] = part.forest
        centre[idx] = part.centre
        if witness is None:
            witness = part.centre_forest

    raw = np.zeros(host.edge_count, dtype=np.int64)
    # intra-block edges: stack 1, the forest where u is a centre, lower clique coordinate
    raw[intra] = ((witness[ua[intra] - 1] - 1) * t) + np.minimum(ia, ib)[intra]
    cross = ~intra
    e = g.edge_index(np.column_stack((ua[cross], ub[cross])))
    k = layout.assignment[e]
    c = centre[e]
    i_centre = np.where(c == ua[cross], ia[cross], ib[cross])
    raw[cross] = ((k - 1) * 3 + forest[e] - 1) * t + i_centre
    used, compressed = np.unique(raw, return_inverse=True)
    return StackLayout(order, host.edges, compressed + 1, used.size)


def random_maximal_outerplanar(n: int, rng: np.random.Generator) -> tuple[Graph, StackLayout]:
    """Random triangulated ``n``-gon with shuffled ids, plus its 1-stack layout."""
    if n < 3:
        raise ValueError("need at least 3 vertices")
    edges = [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)]
    pending = [(0, n - 1)]
    while pending:
        lo, hi = pending.pop()
        if hi - lo < 2:
            continue
        mid = int(rng.integers(lo + 1, hi))
        for x, y in ((lo, mid), (mid, hi)):
            if y - x >= 2:
                edges.append((x, y))
                pending.append((x, y))
    labels = rng.permutation(n) + 1
    e = labels[np.array(edges, dtype=np.int64)]
    g = Graph.from_edges(n, e)
    return g, StackLayout(VertexOrder(labels), g.edges, np.ones(g.edge_count, np.int64), 1)
