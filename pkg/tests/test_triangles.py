import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import triangles_meet_geometric
from stacklab import triangles
from stacklab._text import FormatError


@pytest.mark.parametrize("level", range(4))
def test_family_sizes(level):
    family = triangles.build_triangle_family(level)
    k = family.total_colors()
    assert len(family) == 8**level
    assert family.palette_sizes() == (2**level,) * 3
    assert k == 3 * 2**level
    assert len(family) == (k // 3) ** 3 <= k**3
    assert family.point_count == 3 * 8**level


@pytest.mark.parametrize("level", range(4))
def test_family_verifies(level):
    report = triangles.verify_family(triangles.build_triangle_family(level))
    assert report.ok and report.one_vertex_per_arc and not report.problems


def test_level_one_triangles():
    family = triangles.build_triangle_family(1)
    assert family.triangles.tolist() == [
        [1, 12, 22], [2, 11, 21], [3, 10, 24], [4, 9, 23],
        [5, 16, 18], [6, 15, 17], [7, 14, 20], [8, 13, 19],
    ]


def test_level_two_colouring_by_brute_force():
    family = triangles.build_triangle_family(2)
    ends, gid = family.edges()
    ends, gid = ends.tolist(), gid.tolist()
    for x, y in itertools.combinations(range(len(gid)), 2):
        (p, q), (r, s) = ends[x], ends[y]
        if p < r < q < s or r < p < s < q:
            assert gid[x] != gid[y]


def test_verify_detects_problems():
    apart = triangles.TriangleFamily(6, [[1, 2, 3], [4, 5, 6]], [[1, 1, 1], [1, 1, 1]])
    report = triangles.verify_family(apart)
    assert not report.pairwise_intersecting and not report.ok
    clash = triangles.TriangleFamily(6, [[1, 3, 5], [2, 4, 6]], [[1, 1, 1], [1, 1, 1]])
    report = triangles.verify_family(clash)
    assert report.pairwise_intersecting and not report.coloring_proper


@st.composite
def triangle_pairs(draw):
    n = draw(st.integers(6, 40))
    pts = draw(st.lists(st.integers(1, n), min_size=6, max_size=6, unique=True))
    return n, tuple(sorted(pts[:3])), tuple(sorted(pts[3:]))


@settings(max_examples=1000, deadline=None)
@given(triangle_pairs())
def test_intersection_predicate_matches_geometry(case):
    n, t1, t2 = case
    expected = triangles_meet_geometric(t1, t2, n)
    assert bool(triangles.triangles_intersect(np.array(t1), np.array(t2))) == expected
    assert bool(triangles.triangles_intersect(np.array(t2), np.array(t1))) == expected


@settings(max_examples=300, deadline=None)
@given(st.lists(st.integers(1, 30), min_size=4, max_size=4, unique=True))
def test_chords_cross_matches_interleaving(points):
    p, q = sorted(points[:2])
    r, s = sorted(points[2:])
    inside = sum(p < x < q for x in (r, s))
    assert bool(triangles.chords_cross(p, q, r, s)) == (inside == 1)


def test_circle_arcs():
    cfg = triangles.CircleConfig(24, 8)
    assert [cfg.arc_of(i) for i in (1, 8, 9, 16, 17, 24)] == list("AABBCC")


def test_oracle_small_instances():
    report = triangles.cube_bound_oracle(max_m=3, max_points=9)
    assert report.injective and report.complete
    assert report.families[1] == 1
    assert report.colorings_checked[3] > 0


def test_oracle_family_count_matches_geometry():
    report = triangles.cube_bound_oracle(max_m=2, max_points=6)
    assert report.injective
    expected = sum(
        triangles_meet_geometric(first, tuple(x for x in range(1, 7) if x not in first), 6)
        for first in itertools.combinations(range(1, 7), 3)
        if 1 in first
    )
    assert report.families[2] == expected == 7


def test_oracle_regime_limits():
    with pytest.raises(ValueError):
        triangles.cube_bound_oracle(max_m=6)
    with pytest.raises(ValueError):
        triangles.cube_bound_oracle(max_points=16)


def test_oracle_budget_reports_incomplete():
    report = triangles.cube_bound_oracle(max_m=3, max_points=9, node_limit=10)
    assert not report.complete and report.limit_hit


@pytest.mark.parametrize("level", range(3))
def test_family_text_round_trip(level):
    family = triangles.build_triangle_family(level)
    back = triangles.parse_family(triangles.format_family(family))
    assert back.point_count == family.point_count
    assert np.array_equal(back.triangles, family.triangles)
    assert np.array_equal(back.colors, family.colors)


def test_ca_rows_written_from_c():
    text = triangles.format_family(triangles.build_triangle_family(0)).decode()
    assert "c 3 1 3 1" in text.splitlines()


def test_parse_family_errors():
    with pytest.raises(FormatError):
        triangles.parse_family("triangles 6 1\nt 1 2 3\nc 1 2 1 1\n")
    with pytest.raises(FormatError):
        triangles.parse_family("triangles 6 1\nt 1 2 9\n")
    with pytest.raises(FormatError):
        triangles.parse_family("triangles 3 1\nt 1 2 3\nc 1 2 1 1\nc 2 3 2 1\nc 1 2 3 1\n")
