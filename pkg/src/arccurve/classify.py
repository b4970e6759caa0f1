"""Vertex types: read off the class itself, or recovered from ball combinatorics."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import networkx as nx

from .complex import SimplicialBall, dual_link, has_clique_through, maximal_cliques
from .coords import CurveClass, VertexClass
from .errors import RegistryMiss
from .normal import Strands, cut_component_count
from .surface import SpecialCase
from .triangulation import IdealTriangulation


class TypeLabel(str, enum.Enum):
    SEP_CURVE = "SepCurve"
    SEP_LOOP_ARC = "SepLoopArc"
    NONSEP_CURVE = "NonsepCurve"
    NONSEP_LOOP_ARC = "NonsepLoopArc"
    INTER_PUNCTURE_ARC = "InterPunctureArc"


INCONCLUSIVE = "Inconclusive"


# -- topology of a single class ------------------------------------------------------

def separating(x: VertexClass, registry) -> bool:
    """Whether cutting along ``x`` disconnects the surface."""
    if isinstance(x, CurveClass):
        return cut_component_count(Strands(registry.base, x.coords)) == 2
    if x.endpoints[0] != x.endpoints[1]:
        return False
    anchor = x.anchor
    if anchor is None:
        known = registry.arcs.get(x.key())
        if known is None:
            raise RegistryMiss(f"arc {x.to_json()} is not in the registry")
        anchor = known.anchor
    tri = registry.nodes[anchor[0]].tri
    return _dual_graph_cut(tri, anchor[1])


def _dual_graph_cut(tri: IdealTriangulation, f: int) -> bool:
    g = nx.Graph()
    g.add_nodes_from(range(tri.num_triangles))
    for c in range(tri.num_corners):
        if tri.edge_of[c] != f:
            g.add_edge(c // 3, int(tri.iota[c]) // 3)
    return not nx.is_connected(g)


def classify_topological(x: VertexClass, registry) -> TypeLabel:
    if isinstance(x, CurveClass):
        return TypeLabel.SEP_CURVE if separating(x, registry) else TypeLabel.NONSEP_CURVE
    if x.endpoints[0] != x.endpoints[1]:
        return TypeLabel.INTER_PUNCTURE_ARC
    return TypeLabel.SEP_LOOP_ARC if separating(x, registry) else TypeLabel.NONSEP_LOOP_ARC


# -- combinatorial classification -------------------------------------------------

def max_dim_through(b: SimplicialBall, v) -> tuple[int, bool]:
    """(largest confident clique through ``v``) - 1, and whether that is trustworthy."""
    i = b.index_of(v)
    best = 0
    for c in _cliques(b):
        if c.confident and i in c.members:
            best = max(best, c.size)
    top = b.surface.num_edges if b.surface.is_triangulable else 1
    ceiling = top if b.is_arc(i) else top - 1
    return best - 1, best == ceiling or all(b.complete)


def _cliques(b: SimplicialBall):
    cached = b.__dict__.get("_clique_cache")
    if cached is None:
        cached = b.__dict__["_clique_cache"] = maximal_cliques(b)
    return cached


@dataclass
class Verdict:
    label: str
    evidence: dict = field(default_factory=dict)

    @property
    def conclusive(self) -> bool:
        return self.label != INCONCLUSIVE

    def to_json(self) -> dict:
        return {"label": str(self.label.value if isinstance(self.label, TypeLabel) else self.label),
                "evidence": self.evidence}


def _dual_link_split(b: SimplicialBall, i: int) -> bool:
    dl = dual_link(b, i)
    return dl.number_of_nodes() > 0 and not nx.is_connected(dl)


def _curve_like(b: SimplicialBall, i: int) -> bool | None:
    """False if some clique through ``i`` has 6g+3n-6 vertices (arcs only have
    those), True if the best is exactly one less, None otherwise."""
    E = b.surface.num_edges
    if has_clique_through(b, i, E):
        return False
    if has_clique_through(b, i, E - 1):
        return True
    return None


def classify_combinatorial(b: SimplicialBall, v) -> Verdict:
    """Type of ``v`` from the ball alone: dual link, clique sizes, star containment."""
    i = b.index_of(v)
    if not b.surface.is_triangulable:
        return Verdict(INCONCLUSIVE, {"reason": "surface has no ideal triangulation"})
    if b.surface.special_case in (SpecialCase.FINITE_S03, SpecialCase.FAREY11):
        # too few curves for the star tests to tell the arc types apart
        return Verdict(INCONCLUSIVE, {"reason": "exceptional surface"})
    if not b.complete[i]:
        return Verdict(INCONCLUSIVE, {"reason": "vertex is not complete"})
    E = b.surface.num_edges
    split = _dual_link_split(b, i)
    curve_like = _curve_like(b, i)
    ev = {"dual_link_disconnected": split,
          "max_dim": None if curve_like is None else (E - 2 if curve_like else E - 1)}
    if curve_like is None:
        ev["reason"] = "no clique reaches the expected dimension"
        return Verdict(INCONCLUSIVE, ev)
    if split:
        return Verdict(TypeLabel.SEP_CURVE if curve_like else TypeLabel.SEP_LOOP_ARC, ev)
    if curve_like:
        return Verdict(TypeLabel.NONSEP_CURVE, ev)
    # an arc joining two punctures is the only kind whose link contains a
    # separating curve with a smaller star
    pending = []
    nb_i = b.adj[i] | {i}
    for z in sorted(b.adj[i]):
        if not b.adj[z] <= nb_i:
            continue
        if not b.complete[z]:
            pending.append(z)
            continue
        if _dual_link_split(b, z) and _curve_like(b, z):
            ev["witness"] = z
            return Verdict(TypeLabel.INTER_PUNCTURE_ARC, ev)
    if pending:
        ev["reason"] = "candidate separating curves are not complete"
        ev["pending"] = pending
        return Verdict(INCONCLUSIVE, ev)
    return Verdict(TypeLabel.NONSEP_LOOP_ARC, ev)
