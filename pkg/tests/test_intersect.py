import itertools

import pytest
from hypothesis import given, strategies as st

from arccurve.complex import build_ball
from arccurve.coords import ArcClass, CurveClass, class_from_json, edge_arc
from arccurve.errors import ResourceLimit
from arccurve.intersect import IntersectionEngine, linked_pair_count, overlay_oracle
from arccurve.quasi import slopes_up_to, torus_arc, torus_curve
from arccurve.registry import flip_ball
from arccurve.surface import Surface
from arccurve.triangulation import base_triangulation

# [DERIVED] values produced once by the exhaustive overlay oracle and frozen here
FROZEN = {
    (1, 1): [
        ({"kind": "curve", "coords": [1, 3, 2]}, {"kind": "arc", "coords": [1, 0, 2], "endpoints": [1, 1]}, 7),
        ({"kind": "curve", "coords": [3, 2, 1]}, {"kind": "arc", "coords": [2, 1, 0], "endpoints": [1, 1]}, 0),
        ({"kind": "curve", "coords": [3, 1, 2]}, {"kind": "curve", "coords": [3, 2, 1]}, 3),
        ({"kind": "curve", "coords": [2, 1, 3]}, {"kind": "curve", "coords": [1, 2, 1]}, 5),
        ({"kind": "arc", "coords": [-1, 0, 0], "endpoints": [1, 1]}, {"kind": "curve", "coords": [1, 1, 0]}, 1),
    ],
    (0, 4): [
        ({"kind": "arc", "coords": [1, 0, 0, 0, 1, 0], "endpoints": [3, 3]},
         {"kind": "arc", "coords": [0, 1, 0, 0, 0, 0], "endpoints": [1, 4]}, 2),
        ({"kind": "arc", "coords": [1, 1, 0, 0, 0, 0], "endpoints": [4, 4]},
         {"kind": "arc", "coords": [1, 0, 0, 0, 0, 0], "endpoints": [3, 4]}, 0),
        ({"kind": "curve", "coords": [1, 0, 1, 0, 1, 1]},
         {"kind": "arc", "coords": [1, 0, 1, 0, 0, 0], "endpoints": [4, 4]}, 0),
        ({"kind": "arc", "coords": [1, 0, 0, 1, 0, 0], "endpoints": [3, 3]},
         {"kind": "arc", "coords": [0, 0, 1, 0, 0, 1], "endpoints": [2, 2]}, 2),
        ({"kind": "arc", "coords": [-1, 0, 0, 0, 0, 0], "endpoints": [1, 2]},
         {"kind": "curve", "coords": [1, 1, 0, 1, 0, 1]}, 1),
    ],
    (0, 5): [
        ({"kind": "curve", "coords": [1, 0, 1, 0, 1, 1, 0, 1, 0]},
         {"kind": "arc", "coords": [0, 0, 0, 0, 0, 0, 1, 0, 0], "endpoints": [3, 4]}, 1),
        ({"kind": "curve", "coords": [1, 1, 0, 1, 0, 0, 0, 1, 1]},
         {"kind": "arc", "coords": [1, 0, 1, 0, 0, 0, 0, 0, 0], "endpoints": [4, 4]}, 2),
        ({"kind": "arc", "coords": [0, 0, -1, 0, 0, 0, 0, 0, 0], "endpoints": [1, 3]},
         {"kind": "arc", "coords": [1, 0, 0, 1, 0, 0, 0, 0, 0], "endpoints": [3, 3]}, 0),
        ({"kind": "arc", "coords": [0, 0, 1, 0, 0, 0, 0, 0, 0], "endpoints": [2, 4]},
         {"kind": "curve", "coords": [1, 1, 0, 1, 0, 0, 0, 1, 1]}, 2),
    ],
}


def _cls(data):
    return class_from_json({"endpoints": None, **data})


def _engine(g, n, radius=2):
    return IntersectionEngine(flip_ball(base_triangulation(Surface(g, n)), radius))


@pytest.mark.parametrize("gn", sorted(FROZEN))
def test_frozen_values(gn):
    eng = _engine(*gn)
    for xa, ya, want in FROZEN[gn]:
        x, y = _cls(xa), _cls(ya)
        assert overlay_oracle(x, y, eng.base) == want
        assert eng.intersection_number(x, y) == want
        assert eng.intersection_number(y, x) == want


def test_square_diagonals_meet_once():
    t = base_triangulation(Surface(1, 1))
    reg = flip_ball(t, 1)
    eng = IntersectionEngine(reg)
    for e, child in reg.children(0):
        diag = reg.arcs[reg.nodes[child].arc_keys[e]]
        assert eng.intersection_number(edge_arc(t, e), diag) == 1
        assert not eng.disjoint(edge_arc(t, e), diag)


def test_edges_of_one_triangulation_are_disjoint():
    reg = flip_ball(base_triangulation(Surface(0, 5)), 2)
    eng = IntersectionEngine(reg)
    for node in reg.nodes[:20]:
        arcs = [reg.arcs[k] for k in node.arc_keys]
        for a, b in itertools.combinations(arcs, 2):
            assert eng.co_occur(a, b)
            assert eng.disjoint(a, b)


def test_arcs_sharing_a_puncture_can_be_disjoint():
    t = base_triangulation(Surface(0, 4))
    eng = _engine(0, 4, 1)
    pairs = [(e, f) for e, f in itertools.combinations(range(6), 2)
             if set(t.endpoints(e)) & set(t.endpoints(f))]
    assert pairs
    for e, f in pairs:
        assert eng.intersection_number(edge_arc(t, e), edge_arc(t, f)) == 0


def test_torus_slopes_meet_by_determinant():
    """Independent oracle: curves of slopes s, t on the torus meet |det(s, t)| times."""
    slopes = slopes_up_to(3)
    eng = _engine(1, 1, 3)
    base = eng.base
    for s, t in itertools.combinations(slopes, 2):
        want = abs(s.det(t))
        x, y = torus_curve(s), torus_curve(t)
        assert linked_pair_count(x, y, base) == want
        assert eng.intersection_number(x, y) == want
        # arcs of slope s: a curve of slope t crosses it |det| times as well
        assert eng.intersection_number(torus_arc(s), y) == want


def test_s04_arc_curve_exhaustive():
    b = build_ball(Surface(0, 4), "AC", 3, 8, arc_boundaries=False)
    eng = IntersectionEngine(b.registry)
    arcs = [v for v in b.vertices if isinstance(v, ArcClass)]
    curves = [v for v in b.vertices if isinstance(v, CurveClass)]
    for a in arcs:
        for c in curves:
            assert eng.intersection_number(c, a) == overlay_oracle(c, a, b.registry.base)


def test_oracle_budget():
    t = base_triangulation(Surface(1, 1))
    x, y = CurveClass((8, 5, 3)), CurveClass((7, 2, 5))
    with pytest.raises(ResourceLimit):
        overlay_oracle(x, y, t, budget=10)


BALLS = {gn: build_ball(Surface(*gn), "AC", 3, 8, arc_boundaries=False)
         for gn in [(0, 4), (1, 1), (0, 5)]}


@given(st.sampled_from(sorted(BALLS)), st.integers(0, 10**6), st.integers(0, 10**6))
def test_symmetry_and_oracle_agreement(gn, i, j):
    b = BALLS[gn]
    x, y = b.vertices[i % len(b)], b.vertices[j % len(b)]
    eng = IntersectionEngine(b.registry)
    v = eng.intersection_number(x, y)
    assert v == IntersectionEngine(b.registry).intersection_number(y, x)
    try:
        assert v == overlay_oracle(x, y, b.registry.base)
    except ResourceLimit:
        pass


@given(st.sampled_from(sorted(BALLS)), st.integers(0, 10**6), st.integers(0, 10**6))
def test_ball_edges_are_disjoint_pairs(gn, i, j):
    b = BALLS[gn]
    i, j = i % len(b), j % len(b)
    if i != j:
        eng = IntersectionEngine(b.registry)
        assert (j in b.adj[i]) == eng.disjoint(b.vertices[i], b.vertices[j])
