import numpy as np
import pytest
from hypothesis import given, strategies as st

from arccurve.errors import SelfFoldedEdge, UnsupportedSurface
from arccurve.registry import flip_ball
from arccurve.surface import Surface
from arccurve.triangulation import IdealTriangulation, base_triangulation, sig

SURFACES = [(0, 3), (0, 4), (0, 5), (1, 1), (1, 2), (2, 1), (0, 6), (1, 3)]


def relabel(t, perm, rot):
    """Same map with triangles renumbered by ``perm`` and rotated by ``rot``."""
    def m(c):
        tr, k = divmod(c, 3)
        return 3 * perm[tr] + (k + rot[tr]) % 3
    n = t.num_corners
    io, pu, eo = np.empty(n, int), np.empty(n, int), np.empty(n, int)
    for c in range(n):
        io[m(c)] = m(int(t.iota[c]))
        pu[m(c)] = t.punct[c]
        eo[m(c)] = t.edge_of[c]
    return IdealTriangulation(io, pu, eo)


def isomorphic(t1, t2, labeled=True):
    """Independent check: grow a corner bijection from each possible image of corner 0."""
    if t1.num_corners != t2.num_corners:
        return False
    for start in range(t2.num_corners):
        f = {0: start}
        todo = [0]
        ok = True
        while todo and ok:
            c = todo.pop()
            d = f[c]
            if labeled and t1.punct[c] != t2.punct[d]:
                ok = False
                break
            for c2, d2 in ((sig(c), sig(d)), (int(t1.iota[c]), int(t2.iota[d]))):
                if c2 in f:
                    ok = f[c2] == d2
                    if not ok:
                        break
                else:
                    f[c2] = d2
                    todo.append(c2)
        if ok and len(set(f.values())) == t1.num_corners:
            return True
    return False


@pytest.mark.parametrize("g,n,v,e,f", [(0, 4, 4, 6, 4), (1, 1, 1, 3, 2), (0, 3, 3, 3, 2)])
def test_base_counts(g, n, v, e, f):
    t = base_triangulation(Surface(g, n))
    assert (len(t.vertex_orbits()), t.num_edges, t.num_triangles) == (v, e, f)


@pytest.mark.parametrize("g,n", SURFACES)
def test_base_is_valid_and_deterministic(g, n):
    s = Surface(g, n)
    t = base_triangulation(s)
    t.validate()
    assert t.surface() == s
    assert t.num_edges == s.num_edges
    assert t.canonical_code() == base_triangulation(s).canonical_code()


@pytest.mark.parametrize("g,n", [(0, 2), (1, 0), (0, 1)])
def test_base_rejects(g, n):
    with pytest.raises(UnsupportedSurface):
        base_triangulation(Surface(g, n))


def test_single_flips_on_torus():
    t = base_triangulation(Surface(1, 1))
    for e in range(3):
        u = t.flip(e)
        u.validate()
        assert u.num_edges == 3 and len(u.vertex_orbits()) == 1


def test_self_folded_flip_raises():
    t = base_triangulation(Surface(0, 3))
    folded = None
    for e in t.flippable_edges():
        u = t.flip(e)
        bad = [f for f in range(u.num_edges) if u.is_self_folded(f)]
        if bad:
            folded = (u, bad[0])
            break
    assert folded is not None
    with pytest.raises(SelfFoldedEdge):
        folded[0].flip(folded[1])


def test_code_relabel_invariance():
    t = base_triangulation(Surface(1, 2)).flip(0).flip(3)
    rng = np.random.default_rng(1)
    for _ in range(5):
        perm = rng.permutation(t.num_triangles)
        rot = rng.integers(0, 3, t.num_triangles)
        u = relabel(t, perm, rot)
        assert u.canonical_code() == t.canonical_code()
        assert u.labeled_key() == t.labeled_key()


def test_code_torus_flip_matches_backtracker():
    t = base_triangulation(Surface(1, 1))
    u = t.flip(0)
    assert (t.canonical_code() == u.canonical_code()) == isomorphic(t, u)


def test_code_agrees_with_backtracker_on_registry():
    reg = flip_ball(base_triangulation(Surface(0, 5)), 2)
    tris = [nd.tri for nd in reg.nodes][:25]
    for a in tris:
        for b in tris:
            assert (a.canonical_code() == b.canonical_code()) == isomorphic(a, b)


def test_codes_differ_across_surfaces():
    codes = {base_triangulation(Surface(g, n)).canonical_code() for g, n in SURFACES}
    assert len(codes) == len(SURFACES)


def test_json_round_trip():
    t = base_triangulation(Surface(1, 2)).flip(2)
    assert IdealTriangulation.from_json(t.to_json()) == t


@given(st.sampled_from(SURFACES), st.lists(st.integers(0, 50), min_size=1, max_size=12))
def test_random_flip_sequences(gn, picks):
    t = base_triangulation(Surface(*gn))
    n = gn[1]
    for p in picks:
        edges = t.flippable_edges()
        e = edges[p % len(edges)]
        u = t.flip(e)
        u.validate()
        assert u.num_edges == t.num_edges and len(u.vertex_orbits()) == n
        assert u.flip(e) == t
        t = u
