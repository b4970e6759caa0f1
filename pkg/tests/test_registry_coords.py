import numpy as np
import pytest
from hypothesis import given, strategies as st

from arccurve import kernels
from arccurve.coords import (ArcClass, CurveClass, arc_base_vector, class_equal, class_from_json,
                             edge_arc, enumerate_curves, transport)
from arccurve.errors import InvalidCoordinates, RegistryMiss
from arccurve.intersect import overlay_oracle
from arccurve.normal import is_essential_curve
from arccurve.registry import flip_ball
from arccurve.surface import Surface
from arccurve.triangulation import base_triangulation

SURFACES = [(0, 4), (0, 5), (1, 1), (1, 2)]


def test_radius_zero_and_monotone():
    t = base_triangulation(Surface(0, 5))
    sizes = [len(flip_ball(t, r)) for r in range(4)]
    assert sizes[0] == 1
    assert sizes == sorted(sizes)


def test_torus_radius_one():
    reg = flip_ball(base_triangulation(Surface(1, 1)), 1)
    assert len(reg) == 4
    assert sorted(e for e, _ in reg.children(0)) == [0, 1, 2]


def test_closed_registry_s03():
    reg = flip_ball(base_triangulation(Surface(0, 3)), 5)
    assert reg.closed and len(reg) == 4 and len(reg.arcs) == 6


def test_base_edge_vectors():
    reg = flip_ball(base_triangulation(Surface(0, 4)), 1)
    for e in range(6):
        a = reg.arcs[("arc", reg.base.endpoints(e), tuple(-1 if k == e else 0 for k in range(6)))]
        assert list(arc_base_vector(a, reg)) == [-1 if k == e else 0 for k in range(6)]


@pytest.mark.parametrize("g,n", SURFACES)
def test_new_diagonal_vector(g, n):
    reg = flip_ball(base_triangulation(Surface(g, n)), 1)
    for e, child in reg.children(0):
        v = reg.nodes[child].arc_vector(e)
        assert list(v) == [1 if k == e else 0 for k in range(reg.base.num_edges)]


def test_unknown_anchor():
    reg = flip_ball(base_triangulation(Surface(0, 4)), 1)
    with pytest.raises(RegistryMiss):
        arc_base_vector(ArcClass((1, 2), (1, 0, 0, 0, 0, 0), (999, 0)), reg)
    with pytest.raises(RegistryMiss):
        arc_base_vector(ArcClass((1, 2), (1, 0, 0, 0, 0, 0)), reg)


@pytest.mark.parametrize("g,n", SURFACES)
def test_arc_vectors_symmetric(g, n):
    """i(b, base edge e) read from b's base vector equals i(e, b) read at b's anchor."""
    reg = flip_ball(base_triangulation(Surface(g, n)), 3)
    base_arcs = [edge_arc(reg.base, e) for e in range(reg.base.num_edges)]
    for b in reg.arc_list()[:150]:
        node, f = b.anchor
        at = reg.arcs_at(node, base_arcs)
        for e in range(reg.base.num_edges):
            want = b.coords[e]
            got = at[e][f]
            if want == -1:
                assert got == -1
            else:
                assert max(got, 0) == want


@pytest.mark.parametrize("g,n", [(0, 5), (0, 6), (1, 2), (1, 3)])
def test_commuting_flip_paths_agree(g, n):
    """Two flip orders reaching the same triangulation carry every arc identically."""
    t = base_triangulation(Surface(g, n))
    E = t.num_edges
    xs0 = -np.eye(E, dtype=np.int64)
    st0 = np.full((E, 2), -1, dtype=np.int64)
    checked = 0
    for e1 in t.flippable_edges():
        for e2 in t.flip(e1).flippable_edges():
            # flips in disjoint quadrilaterals commute
            if e2 in t.quad(e1) or e2 not in t.flippable_edges():
                continue
            u, v = t.flip(e1), t.flip(e2)
            assert u.flip(e2) == v.flip(e1)
            m1 = [t.move(e1), u.move(e2)]
            m2 = [t.move(e2), v.move(e1)]
            a = kernels.flip_arcs(xs0, st0, m1)[0]
            b = kernels.flip_arcs(xs0, st0, m2)[0]
            assert (a == b).all()
            checked += 1
    assert checked


def test_class_equal():
    t = base_triangulation(Surface(0, 4))
    a, b = edge_arc(t, 0), edge_arc(t, 1)
    assert class_equal(a, a) and not class_equal(a, b)
    c = CurveClass((1, 1, 0, 0, 1, 1))
    assert class_equal(c, class_from_json(c.to_json()))
    assert class_equal(a, class_from_json(a.to_json()))


def test_zero_vector_rejected():
    with pytest.raises(InvalidCoordinates):
        CurveClass((0, 0, 0))
    with pytest.raises(InvalidCoordinates):
        ArcClass((1, 1), (-1, -1, 0))


@pytest.mark.parametrize("g,n", SURFACES)
def test_transport_involution_and_links(g, n):
    t = base_triangulation(Surface(g, n))
    curves = enumerate_curves(t, 8)
    for e in t.flippable_edges():
        u = t.flip(e)
        for c in curves[:40]:
            w = transport(c.coords, t, e)
            assert list(transport(w, u, e)) == list(c.coords)
        for p in range(1, n + 1):
            assert list(transport(t.link_vector(p), t, e)) == list(u.link_vector(p))


def test_torus_max_rule_example():
    t = base_triangulation(Surface(1, 1))
    c = next(c for c in enumerate_curves(t, 2) if sorted(c.coords) == [0, 1, 1])
    e = c.coords.index(0)
    w = transport(c.coords, t, e)
    assert w[e] == 2
    u = t.flip(e)
    assert overlay_oracle(CurveClass(tuple(int(x) for x in w)), edge_arc(u, e), u) == 2


@given(st.sampled_from(SURFACES), st.integers(0, 10_000), st.lists(st.integers(0, 99), max_size=6))
def test_transport_keeps_triangle_conditions(gn, pick, flips):
    t = base_triangulation(Surface(*gn))
    curves = enumerate_curves(t, 8)
    v = np.asarray(curves[pick % len(curves)].coords)
    for k in flips:
        edges = t.flippable_edges()
        e = edges[k % len(edges)]
        v = transport(v, t, e)
        t = t.flip(e)
        assert is_essential_curve(t, v)


@pytest.mark.parametrize("g,n", SURFACES)
def test_enumeration_monotone_and_essential(g, n):
    t = base_triangulation(Surface(g, n))
    small, big = enumerate_curves(t, 6), enumerate_curves(t, 8)
    assert {c.key() for c in small} <= {c.key() for c in big}
    assert all(is_essential_curve(t, c.coords) for c in big)
    assert all(c.weight <= 8 for c in big)


@pytest.mark.parametrize("g,n", [(0, 4), (1, 2), (0, 5)])
def test_short_curves_are_short_somewhere(g, n):
    reg = flip_ball(base_triangulation(Surface(g, n)), 4)
    short = reg.short_curves()
    assert short
    for key, depth in list(short.items())[:30]:
        assert is_essential_curve(reg.base, key)
        assert any(reg.curves_at(nd.id, [key])[0].sum() == 2 for nd in reg.nodes if nd.depth == depth)
