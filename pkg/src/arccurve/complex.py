"""Finite balls of the arc, curve and arc-and-curve complexes.

A ball stores only its 1-skeleton: simplices are the cliques (flag
semantics).  Vertices are registry arcs (flip radius ``r``) and essential
curves of base weight at most ``W``.
"""
from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from .boundary import neighborhood_boundary
from .coords import ArcClass, VertexClass, class_from_json, enumerate_curves
from .errors import IncompleteBall, ResourceLimit, UnknownVertex, UnsupportedSurface
from .intersect import IntersectionEngine, count_linked, track_of
from .registry import FlipRegistry, flip_ball
from .surface import SpecialCase, Surface
from .triangulation import base_triangulation

log = logging.getLogger(__name__)

KINDS = ("A", "C", "AC")
ARC_DEPTH_MARGIN = 1
CURVE_WEIGHT_MARGIN = 2
CURVE_DEPTH_MARGIN = 2
CLIQUE_LIMIT = 2_000_000
AUTOMORPHISM_LIMIT = 100_000


@dataclass
class SimplicialBall:
    surface: Surface
    kind: str
    vertices: list
    adj: list                      # adj[i] = set of neighbour ids
    bounds: dict
    complete: list
    registry: FlipRegistry | None = None
    labels: dict = field(default_factory=dict)

    def __post_init__(self):
        self._index = {v.key(): i for i, v in enumerate(self.vertices)}

    # -- basic queries -------------------------------------------------------
    def __len__(self):
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(len(self.adj)) for j in sorted(self.adj[i]) if i < j]

    def index_of(self, v) -> int:
        if isinstance(v, (int, np.integer)):
            if 0 <= v < len(self.vertices):
                return int(v)
            raise UnknownVertex(f"vertex id {v} out of range")
        i = self._index.get(v.key())
        if i is None:
            raise UnknownVertex(f"class {v.to_json()} is not a vertex of this ball")
        return i

    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(len(self.vertices)))
        g.add_edges_from(self.edges())
        return g

    def is_arc(self, i: int) -> bool:
        return isinstance(self.vertices[i], ArcClass)

    def num_curves_in(self, ids) -> int:
        return sum(1 for i in ids if not self.is_arc(i))

    def f_vector(self) -> list[int]:
        counts: dict[int, int] = {}
        for clique in nx.enumerate_all_cliques(self.graph()):
            counts[len(clique)] = counts.get(len(clique), 0) + 1
        return [counts[k] for k in sorted(counts)]

    # -- export ----------------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "surface": [self.surface.genus, self.surface.punctures],
            "kind": self.kind,
            "vertices": [v.to_json() for v in self.vertices],
            "edges": [list(e) for e in self.edges()],
            "bounds": dict(self.bounds),
            "complete": list(self.complete),
        }

    @classmethod
    def from_json(cls, data) -> "SimplicialBall":
        if isinstance(data, str):
            data = json.loads(data)
        vertices = [class_from_json(v) for v in data["vertices"]]
        adj = [set() for _ in vertices]
        for i, j in data["edges"]:
            adj[i].add(j)
            adj[j].add(i)
        g, n = data["surface"]
        return cls(Surface(g, n), data["kind"], vertices, adj, dict(data["bounds"]),
                   [bool(c) for c in data["complete"]])

    def to_dot(self) -> str:
        lines = ["graph ball {"]
        for i, v in enumerate(self.vertices):
            shape = "box" if isinstance(v, ArcClass) else "ellipse"
            label = self.labels.get(i)
            color = _DOT_COLORS.get(label, "black")
            lines.append(f'  {i} [shape={shape}, color="{color}", label="{i}"];')
        for i, j in self.edges():
            lines.append(f"  {i} -- {j};")
        lines.append("}")
        return "\n".join(lines) + "\n"


_DOT_COLORS = {
    "SepCurve": "red", "SepLoopArc": "orange", "NonsepCurve": "blue",
    "NonsepLoopArc": "green", "InterPunctureArc": "purple",
}


# -- construction ------------------------------------------------------------------

def build_ball(s: Surface, kind: str = "AC", radius: int = 2, weight: int = 6,
               jobs: int = 1, registry: FlipRegistry | None = None,
               max_nodes: int | None = None, arc_boundaries: bool = True) -> SimplicialBall:
    """Arcs within ``radius`` flips of the base and curves of weight <= ``weight``.

    With ``arc_boundaries`` (and both kinds present) the boundary curves of
    each arc's neighbourhood join the ball whatever their weight, so every
    arc that has a disjoint curve shows one.
    """
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}")
    if radius < 0 or weight < 0:
        raise ValueError("bounds must be non-negative")
    bounds = {"radius": radius, "weight": weight}
    case = s.special_case
    if case is SpecialCase.EMPTY:
        return SimplicialBall(s, kind, [], [], bounds, [])
    if case is SpecialCase.SINGLE_POINT:
        # the only essential arc joins the two punctures; there are no curves
        if kind == "C":
            return SimplicialBall(s, kind, [], [], bounds, [])
        return SimplicialBall(s, kind, [ArcClass((1, 2), ())], [set()], bounds, [True])
    if not s.is_triangulable:
        raise UnsupportedSurface(f"S_({s.g},{s.n}) is outside the supported range")
    if registry is None:
        kwargs = {} if max_nodes is None else {"max_nodes": max_nodes}
        registry = flip_ball(base_triangulation(s), radius, **kwargs)
    base = registry.base
    arcs = registry.arc_list() if "A" in kind else []
    curves = enumerate_curves(base, weight) if "C" in kind else []
    bounds_of = {a.key(): neighborhood_boundary(a, base) for a in arcs} if "C" in kind else {}
    if arc_boundaries and bounds_of:
        have = {c.key() for c in curves}
        extra = {c.key(): c for cs in bounds_of.values() for c in cs if c.key() not in have}
        if extra:
            curves = sorted(curves + list(extra.values()), key=lambda c: (c.weight, c.coords))
        bounds["arc_boundaries"] = True
    vertices: list[VertexClass] = list(arcs) + list(curves)
    na = len(arcs)
    adj = [set() for _ in vertices]
    engine = IntersectionEngine(registry)
    if arcs:
        ic, ia = engine.against_arcs(curves, arcs, arcs)
        for i in range(na):
            for j in range(i + 1, na):
                if ia[i, j] == 0:
                    adj[i].add(j)
                    adj[j].add(i)
        for k in range(len(curves)):
            for j in np.flatnonzero(ic[k] == 0):
                adj[na + k].add(int(j))
                adj[int(j)].add(na + k)
    if len(curves) > 1:
        tracks = [track_of(c, base) for c in curves]

        def row(i):
            return [j for j in range(i + 1, len(curves)) if count_linked(tracks[i], tracks[j]) == 0]

        with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
            rows = list(pool.map(row, range(len(curves))))
        for i, js in enumerate(rows):
            for j in js:
                adj[na + i].add(na + j)
                adj[na + j].add(na + i)
    complete = _completeness(s, kind, registry, arcs, curves, radius, weight, bounds_of)
    ball = SimplicialBall(s, kind, vertices, adj, bounds, complete, registry)
    _saturate(ball)
    log.info("ball S_(%d,%d) %s r=%d W=%d: %d vertices, %d edges", s.g, s.n, kind, radius,
             weight, len(vertices), sum(len(a) for a in adj) // 2)
    return ball


def _saturate(b: SimplicialBall) -> None:
    """Clear the flag on every flagged maximal clique that is not certified.

    Only cliques made entirely of flagged vertices are examined.  Such a
    clique that falls short of the certified size can be enlarged in the full
    complex by a class the bounds left out, so its members do not see their
    whole neighbourhood.  One pass suffices: clearing flags never creates a
    new all-flagged clique.
    """
    flagged = {i for i, c in enumerate(b.complete) if c}
    if not flagged:
        return
    cleared = set()
    for c in nx.find_cliques(b.graph()):
        if flagged.issuperset(c) and not certified_maximal(b, c):
            cleared.update(c)
    for i in cleared:
        b.complete[i] = False


def _completeness(s, kind, registry, arcs, curves, radius, weight, bounds_of) -> list[bool]:
    """Per-vertex flag, first part: the vertex sits well inside both bounds.

    Links are infinite in general, so no finite ball contains one; the flag
    marks vertices whose small neighbours are all present.  ``_saturate``
    then clears vertices whose maximal cliques in the ball are visibly
    truncated.  Margins:

    * an arc sits at flip depth at most ``radius - ARC_DEPTH_MARGIN``, and
      when curves are in play the boundary curves of its neighbourhood have
      weight at most ``weight - CURVE_WEIGHT_MARGIN``;
    * a curve has weight at most ``weight - CURVE_WEIGHT_MARGIN``, and when
      arcs are in play it crosses only two edges of some triangulation at
      depth at most ``radius - CURVE_DEPTH_MARGIN`` (the arcs around it are
      then a few flips from there).
    """
    no_curves = (s.g, s.n) == (0, 3)
    if registry.closed and (kind == "A" or no_curves):
        return [True] * (len(arcs) + len(curves))
    out = []
    for a in arcs:
        ok = registry.arc_depth[a.key()] <= radius - ARC_DEPTH_MARGIN or registry.closed
        if ok and "C" in kind and not no_curves:
            ok = max((c.weight for c in bounds_of[a.key()]), default=0) <= weight - CURVE_WEIGHT_MARGIN
        out.append(ok)
    short = registry.short_curves() if "A" in kind else {}
    for c in curves:
        ok = c.weight <= weight - CURVE_WEIGHT_MARGIN
        if ok and "A" in kind:
            d = short.get(c.coords)
            ok = d is not None and d <= radius - CURVE_DEPTH_MARGIN
        out.append(ok)
    return out


def boundary_weight(a: ArcClass, base) -> int:
    """Largest base weight among the essential boundary curves of a
    neighbourhood of ``a`` and its ends (0 if there are none)."""
    return max((c.weight for c in neighborhood_boundary(a, base)), default=0)


def boundary_closed_weight(registry: FlipRegistry) -> int:
    """Smallest weight bound that puts every boundary curve of every registry arc in a ball."""
    return max((boundary_weight(a, registry.base) for a in registry.arc_list()), default=0)


# -- stars, links, dual links --------------------------------------------------

def _sub(b: SimplicialBall, ids) -> SimplicialBall:
    ids = sorted(ids)
    pos = {v: k for k, v in enumerate(ids)}
    adj = [{pos[j] for j in b.adj[i] if j in pos} for i in ids]
    sub = SimplicialBall(b.surface, b.kind, [b.vertices[i] for i in ids], adj, dict(b.bounds),
                         [b.complete[i] for i in ids], b.registry)
    sub.parent_ids = ids
    return sub


def star(b: SimplicialBall, v) -> SimplicialBall:
    i = b.index_of(v)
    return _sub(b, b.adj[i] | {i})


def link(b: SimplicialBall, v) -> SimplicialBall:
    i = b.index_of(v)
    return _sub(b, b.adj[i])


def dual_link(b: SimplicialBall, v) -> nx.Graph:
    """Complement of the link's 1-skeleton, on the ball's vertex ids."""
    i = b.index_of(v)
    nb = sorted(b.adj[i])
    g = nx.Graph()
    g.add_nodes_from(nb)
    for k, x in enumerate(nb):
        for y in nb[k + 1:]:
            if y not in b.adj[x]:
                g.add_edge(x, y)
    return g


# -- cliques -----------------------------------------------------------------------

@dataclass(frozen=True)
class Clique:
    members: tuple
    certified: bool    # maximal in the whole complex, by the size count
    confident: bool

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def dim(self) -> int:
        return len(self.members) - 1


def certified_maximal(b: SimplicialBall, members) -> bool:
    """A simplex with ``c`` curves is maximal once it has ``6g+3n-6-c`` vertices.

    Cutting along a maximal simplex leaves triangles and once-punctured
    annuli only; counting Euler characteristic shows every maximal simplex
    with ``c`` curves has exactly that many vertices, so nothing can be added.
    """
    if not b.surface.is_triangulable:
        return b.surface.special_case is SpecialCase.SINGLE_POINT and len(members) == 1
    return len(members) == b.surface.num_edges - b.num_curves_in(members)


def maximal_cliques(b: SimplicialBall, limit: int = CLIQUE_LIMIT) -> list[Clique]:
    out = []
    for k, c in enumerate(nx.find_cliques(b.graph())):
        if k >= limit:
            raise ResourceLimit(f"more than {limit} maximal cliques")
        members = tuple(sorted(c))
        cert = certified_maximal(b, members)
        out.append(Clique(members, cert, cert or all(b.complete[i] for i in members)))
    out.sort(key=lambda c: (-c.size, c.members))
    return out


def has_clique_through(b: SimplicialBall, v: int, size: int) -> bool:
    """Whether vertex ``v`` lies in some clique with ``size`` vertices."""
    nb = sorted(b.adj[v])
    if size <= 1:
        return True
    bit = {x: 1 << k for k, x in enumerate(nb)}
    masks = []
    for x in nb:
        m = 0
        for y in b.adj[x]:
            if y in bit:
                m |= bit[y]
        masks.append(m)
    need = size - 1

    def grow(cand: int, depth: int) -> bool:
        if depth == need:
            return True
        if bin(cand).count("1") < need - depth:
            return False
        while cand:
            low = cand & -cand
            k = low.bit_length() - 1
            cand ^= low
            if grow(cand & masks[k], depth + 1):
                return True
            if bin(cand).count("1") < need - depth:
                return False
        return False

    return grow((1 << len(nb)) - 1, 0)


def max_clique_size_through(b: SimplicialBall, v: int) -> int:
    size = 1
    top = b.surface.num_edges if b.surface.is_triangulable else 1
    while size < top and has_clique_through(b, v, size + 1):
        size += 1
    return size


# -- automorphisms ----------------------------------------------------------------

@dataclass
class AutomorphismGroup:
    order: int
    generators: list
    elements: list


def automorphisms(b: SimplicialBall, limit: int = AUTOMORPHISM_LIMIT) -> AutomorphismGroup:
    """Graph automorphisms that keep arcs and curves apart, by backtracking.

    Candidates are pruned by (kind, degree, label); labels are invariant under
    automorphisms of the complex, so the pruning loses nothing.
    """
    if not all(b.complete):
        raise IncompleteBall("automorphisms need every completeness flag set")
    n = len(b.vertices)
    sig = [(b.is_arc(i), len(b.adj[i]), b.labels.get(i)) for i in range(n)]
    order_ = sorted(range(n), key=lambda i: (-len(b.adj[i]), i))
    found = []
    image = [-1] * n
    used = [False] * n

    def extend(k):
        if len(found) > limit:
            raise ResourceLimit(f"more than {limit} automorphisms")
        if k == n:
            found.append(tuple(image))
            return
        v = order_[k]
        for w in range(n):
            if used[w] or sig[w] != sig[v]:
                continue
            ok = True
            for u in order_[:k]:
                if (u in b.adj[v]) != (image[u] in b.adj[w]):
                    ok = False
                    break
            if ok:
                image[v] = w
                used[w] = True
                extend(k + 1)
                used[w] = False
                image[v] = -1

    extend(0)
    found.sort()
    return AutomorphismGroup(len(found), _generators(found, n), found)


def _generators(elements, n) -> list:
    """A small generating set, chosen greedily in sorted order."""
    ident = tuple(range(n))
    gens: list = []
    group = {ident}
    for el in elements:
        if el in group:
            continue
        gens.append(el)
        frontier = list(group)
        group = set(group)
        while frontier:
            nxt = []
            for h in frontier:
                for gg in gens:
                    p = tuple(gg[h[i]] for i in range(n))
                    if p not in group:
                        group.add(p)
                        nxt.append(p)
            frontier = nxt
    return gens
