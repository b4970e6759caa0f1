import itertools

import networkx as nx
import pytest

from arccurve.classify import max_dim_through
from arccurve.complex import (SimplicialBall, automorphisms, build_ball, certified_maximal,
                              dual_link, link, maximal_cliques, star)
from arccurve.coords import ArcClass, CurveClass
from arccurve.errors import IncompleteBall, UnknownVertex
from arccurve.intersect import IntersectionEngine
from arccurve.surface import Surface


@pytest.fixture(scope="module")
def s03():
    return build_ball(Surface(0, 3), "AC", 3, 4)


@pytest.fixture(scope="module")
def s04():
    return build_ball(Surface(0, 4), "AC", 5, 14)


def test_degenerate_balls():
    assert len(build_ball(Surface(0, 1), "AC", 2, 4)) == 0
    b = build_ball(Surface(0, 2), "AC", 2, 4)
    assert len(b) == 1 and b.num_edges == 0 and b.complete == [True]
    assert automorphisms(b).order == 1


def test_s03_complex(s03):
    assert len(s03) == 6 and s03.num_edges == 9
    assert s03.f_vector() == [6, 9, 4]
    assert all(s03.complete)
    assert all(isinstance(v, ArcClass) for v in s03.vertices)
    cliques = maximal_cliques(s03)
    assert [c.size for c in cliques] == [3, 3, 3, 3]
    assert all(c.certified and c.confident for c in cliques)


def test_s03_links(s03):
    for i, v in enumerate(s03.vertices):
        lk = link(s03, i)
        dl = dual_link(s03, i)
        if v.is_loop:
            # two arcs from the other punctures, crossing each other
            assert len(lk) == 2 and not nx.is_connected(dl)
        else:
            assert len(lk) == 4 and nx.is_connected(dl)
        assert len(star(s03, i)) == len(lk) + 1


def test_unknown_vertex(s03):
    with pytest.raises(UnknownVertex):
        link(s03, 99)
    with pytest.raises(UnknownVertex):
        star(s03, CurveClass((1, 1, 0)))


def test_monotone_in_bounds():
    s = Surface(0, 5)
    sizes = [(len(b), b.num_edges) for b in
             (build_ball(s, "AC", r, w, arc_boundaries=False) for r, w in [(1, 4), (2, 4), (2, 8), (3, 8)])]
    assert sizes == sorted(sizes)
    assert all(a[0] <= b[0] and a[1] <= b[1] for a, b in zip(sizes, sizes[1:]))


def test_edges_are_disjoint_pairs(s04):
    eng = IntersectionEngine(s04.registry)
    for i, j in itertools.combinations(range(0, len(s04), 3), 2):
        assert (j in s04.adj[i]) == eng.disjoint(s04.vertices[i], s04.vertices[j])


def test_vertices_distinct(s04):
    assert len({v.key() for v in s04.vertices}) == len(s04)


def test_clique_bounds(s04):
    s = s04.surface
    for c in maximal_cliques(s04):
        assert c.size <= s.num_edges
        assert s04.num_curves_in(c.members) <= s.max_curves
        if c.certified:
            assert c.size == s.num_edges - s04.num_curves_in(c.members)
    sizes = {c.size for c in maximal_cliques(s04) if c.confident}
    assert sizes == {5, 6}


def test_triangulations_are_top_cliques(s04):
    reg = s04.registry
    for node in reg.nodes[:60]:
        ids = [s04.index_of(reg.arcs[k]) for k in node.arc_keys]
        assert all(j in s04.adj[i] for i, j in itertools.combinations(ids, 2))
        assert certified_maximal(s04, tuple(ids))


def test_top_arc_cliques_are_triangulations(s03):
    keys = {frozenset(nd.arc_keys) for nd in s03.registry.nodes}
    for c in maximal_cliques(s03):
        assert frozenset(s03.vertices[i].key() for i in c.members) in keys


def test_max_dim_through(s03, s04):
    assert all(max_dim_through(s03, i) == (2, True) for i in range(6))
    for i in range(len(s04)):
        if s04.complete[i]:
            assert max_dim_through(s04, i) == ((5, True) if s04.is_arc(i) else (4, True))


def test_separating_curve_dual_link(s04):
    curves = [i for i in range(len(s04)) if s04.complete[i] and not s04.is_arc(i)]
    assert curves
    for i in curves:
        assert not nx.is_connected(dual_link(s04, i))


def test_automorphisms_s03_arc_complex():
    b = build_ball(Surface(0, 3), "A", 3, 0)
    grp = automorphisms(b)
    assert grp.order == 6
    assert len(grp.elements) == 6 and grp.generators
    # conjugation by a relabelling keeps the order
    perm = [3, 5, 0, 4, 1, 2]
    inv = {p: k for k, p in enumerate(perm)}
    moved = SimplicialBall(b.surface, b.kind, [b.vertices[p] for p in perm],
                           [{inv[j] for j in b.adj[p]} for p in perm], b.bounds, list(b.complete))
    assert automorphisms(moved).order == 6


def test_automorphisms_need_complete_ball(s04):
    with pytest.raises(IncompleteBall):
        automorphisms(s04)


def test_json_round_trip(s04):
    again = SimplicialBall.from_json(s04.to_json())
    assert [v.key() for v in again.vertices] == [v.key() for v in s04.vertices]
    assert again.adj == s04.adj and again.complete == s04.complete
    assert again.to_json() == s04.to_json()


def test_dot_export(s03):
    dot = s03.to_dot()
    assert dot.startswith("graph") and dot.count("--") == 9


def test_every_arc_has_curve_neighbour():
    for gn, r, w in [((1, 1), 3, 6), ((0, 4), 3, 8), ((1, 2), 2, 8), ((0, 5), 2, 8)]:
        b = build_ball(Surface(*gn), "AC", r, w)
        for i in range(len(b)):
            if b.is_arc(i):
                assert any(not b.is_arc(j) for j in b.adj[i]), (gn, i)
