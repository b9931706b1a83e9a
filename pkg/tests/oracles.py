"""Independent reference implementations used only by the tests.

These are deliberately naive (pure Python, quadratic or exponential) and
share no code with the package beyond plain data.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction


def naive_conflicts(position, edges, assignment, kind="stack"):
    """All same-page conflicting edge pairs, as sorted index pairs.

    ``position[v - 1]`` is the 0-based position of vertex ``v``.
    """
    spans = []
    for u, v in edges:
        a, b = position[u - 1], position[v - 1]
        spans.append((min(a, b), max(a, b)))
    out = []
    for x in range(len(spans)):
        for y in range(x + 1, len(spans)):
            if assignment[x] != assignment[y]:
                continue
            (i, j), (k, l) = sorted([spans[x], spans[y]])
            if kind == "stack":
                bad = i < k < j < l
            else:
                bad = (i < k and l < j) or (k < i and j < l)
            if bad:
                out.append((x, y))
    return out


def naive_is_matching(edges, assignment):
    seen = {}
    for (u, v), page in zip(edges, assignment):
        for w in (u, v):
            if (page, w) in seen:
                return False
            seen[(page, w)] = True
    return True


def colourable(conflict, k):
    count = len(conflict)
    colour = [-1] * count

    def place(t):
        if t == count:
            return True
        for c in range(k):
            if all(colour[y] != c for y in conflict[t] if y < t):
                colour[t] = c
                if place(t + 1):
                    return True
        colour[t] = -1
        return False

    return place(0)


def brute_stack_number(vertex_count, edges):
    """Minimum pages over every vertex order (pure Python; keep it tiny)."""
    if not edges:
        return 0
    best = len(edges)
    for perm in itertools.permutations(range(1, vertex_count)):
        order = (0,) + perm
        pos = {v: i for i, v in enumerate(order)}
        spans = [tuple(sorted((pos[u - 1], pos[v - 1]))) for u, v in edges]
        conflict = [[] for _ in spans]
        for x, y in itertools.combinations(range(len(spans)), 2):
            (i, j), (k, l) = sorted([spans[x], spans[y]])
            if i < k < j < l:
                conflict[x].append(y)
                conflict[y].append(x)
        k = 1
        while k < best and not colourable(conflict, k):
            k += 1
        best = min(best, k)
        if best == 1:
            break
    return best


def lcs_python(a, b):
    table = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for x in range(1, len(a) + 1):
        for y in range(1, len(b) + 1):
            if a[x - 1] == b[y - 1]:
                table[x][y] = table[x - 1][y - 1] + 1
            else:
                table[x][y] = max(table[x - 1][y], table[x][y - 1])
    return table[-1][-1]


def digit_flip_permutation(row, m):
    """``pi`` from a matrix row by writing ``i - 1`` in base ``m`` digit by digit."""
    width = len(row) - 1
    out = []
    for i in range(m**width):
        digits = [(i // m**a) % m for a in range(width)]
        flipped = [m - 1 - d if row[a] == -1 else d for a, d in enumerate(digits)]
        out.append(1 + sum(d * m**a for a, d in enumerate(flipped)))
    return out


def rows_pairwise_half_different(rows):
    p = len(rows)
    return all(
        sum(x != y for x, y in zip(rows[a], rows[b])) * 2 == p
        for a, b in itertools.combinations(range(p), 2)
    )


# ------------------------------------------------------------- geometry

def circle_point(i, count):
    """Exact rational point on the unit circle near angle ``2 pi (i - 1/2) / count``.

    ``t = tan(theta / 2)`` is rounded to a float and then used exactly in
    ``((1 - t^2) / (1 + t^2), 2t / (1 + t^2))``, so the point is exactly on
    the circle and the cyclic order of points 1..count is preserved.
    """
    t = Fraction(math.tan(math.pi * (i - 0.5) / count - math.pi / 2))
    d = 1 + t * t
    return ((1 - t * t) / d, 2 * t / d)


def _orient(a, b, c):
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (v > 0) - (v < 0)


def _segments_meet(p, q, r, s):
    o1, o2, o3, o4 = _orient(p, q, r), _orient(p, q, s), _orient(r, s, p), _orient(r, s, q)
    return o1 * o2 < 0 and o3 * o4 < 0


def _inside(tri, x):
    signs = {_orient(tri[0], tri[1], x), _orient(tri[1], tri[2], x), _orient(tri[2], tri[0], x)}
    return signs in ({1}, {-1})


def triangles_meet_geometric(t1, t2, count):
    """Do two vertex-disjoint inscribed triangles share a point (closed regions)?"""
    a = [circle_point(i, count) for i in t1]
    b = [circle_point(i, count) for i in t2]
    for x, y in itertools.combinations(range(3), 2):
        for z, w in itertools.combinations(range(3), 2):
            if _segments_meet(a[x], a[y], b[z], b[w]):
                return True
    return _inside(a, b[0]) or _inside(b, a[0])


# --------------------------------------------------------- tessellation

def face_counts_by_residue(n):
    """Squares and hexagons inside ``[4, 4n + 2]^3`` from face-centre arithmetic.

    Hexagon centres are exactly the points with all coordinates odd; square
    centres are even points where one coordinate (the normal axis) has a
    residue mod 4 different from the other two, which agree.  A face lies in
    the box iff its corner bounding box does.
    """
    lo, hi = 4, 4 * n + 2
    hexagons = sum(1 for c in itertools.product(range(lo, hi + 1), repeat=3)
                   if all(x % 2 for x in c) and all(lo <= x - 1 and x + 1 <= hi for x in c))
    squares = 0
    for c in itertools.product(range(lo, hi + 1, 2), repeat=3):
        res = [x % 4 for x in c]
        for axis in range(3):
            others = [res[a] for a in range(3) if a != axis]
            if others[0] == others[1] != res[axis]:
                box_ok = all(lo <= c[a] - 1 and c[a] + 1 <= hi for a in range(3) if a != axis)
                if box_ok:
                    squares += 1
    return squares, hexagons
