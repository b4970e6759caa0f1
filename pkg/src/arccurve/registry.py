"""Breadth-first exploration of the flip graph from the base triangulation."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .coords import ArcClass, transport_arcs, transport_curves
from .errors import RegistryMiss, ResourceLimit
from .triangulation import IdealTriangulation

log = logging.getLogger(__name__)

DEFAULT_NODE_BUDGET = 200_000


@dataclass
class RegistryNode:
    id: int
    tri: IdealTriangulation
    path: tuple            # flipped edge ids, from the base
    moves: tuple           # move records of those flips, for transport
    depth: int
    base_arcs: np.ndarray  # row e0 = base edge e0 as an arc of this triangulation
    base_ends: np.ndarray  # end corners of those arcs
    arc_keys: tuple = field(default=())

    @property
    def quads(self) -> tuple:
        return tuple(m[2:] for m in self.moves)

    def arc_vector(self, f: int, base: IdealTriangulation | None = None) -> np.ndarray:
        """Interior intersections of edge ``f`` (of this node) with the base edges."""
        return self.base_arcs[:, f].copy()


class FlipRegistry:
    """Triangulations reachable from ``base`` by at most ``radius`` flips.

    Entries are keyed by their set of arcs, i.e. by isotopy class.  The
    combinatorial type (``canonical_code``) is kept per entry; collapsing by it
    would merge triangulations that differ by a mapping class.
    """

    def __init__(self, base: IdealTriangulation):
        self.base = base
        self.nodes: list[RegistryNode] = []
        self.index: dict[tuple, int] = {}
        self.arcs: dict[tuple, ArcClass] = {}
        self.arc_depth: dict[tuple, int] = {}
        self.radius = 0
        self.closed = False
        self._states: dict[tuple, tuple] = {}
        self._children: dict[int, list[tuple[int, int]]] = {}
        self._short: dict[tuple, int] | None = None
        E = base.num_edges
        self._add(base, (), (), 0, -np.eye(E, dtype=np.int64), np.full((E, 2), -1, dtype=np.int64))

    def __len__(self):
        return len(self.nodes)

    def _add(self, tri, path, moves, depth, xs, sts):
        node = RegistryNode(len(self.nodes), tri, path, moves, depth, xs, sts)
        keys = [("arc", tri.endpoints(f), tuple(int(x) for x in xs[:, f]))
                for f in range(tri.num_edges)]
        tkey = tuple(sorted(keys))
        if tkey in self.index:
            return None
        node.arc_keys = tuple(keys)
        self.index[tkey] = node.id
        self.nodes.append(node)
        for f, key in enumerate(keys):
            if key not in self.arcs:
                self.arcs[key] = ArcClass(key[1], key[2], (node.id, f))
                self.arc_depth[key] = depth
        return node

    def expand(self, radius: int, max_nodes: int = DEFAULT_NODE_BUDGET) -> "FlipRegistry":
        frontier = [n for n in self.nodes if n.depth == self.radius]
        while self.radius < radius and frontier:
            nxt = []
            for node in frontier:
                for e in node.tri.flippable_edges():
                    mv = node.tri.move(e)
                    xs, sts = kernels.flip_arcs(node.base_arcs, node.base_ends, [mv])
                    new = self._add(node.tri.flip(e), node.path + (e,), node.moves + (mv,),
                                    node.depth + 1, xs, sts)
                    if new is not None:
                        self._children.setdefault(node.id, []).append((e, new.id))
                        nxt.append(new)
                        if len(self.nodes) > max_nodes:
                            raise ResourceLimit(f"flip ball exceeded {max_nodes} triangulations")
            self.radius += 1
            self._short = None
            frontier = nxt
            log.debug("radius %d: %d triangulations, %d arcs", self.radius, len(self.nodes), len(self.arcs))
        if not frontier:
            self.closed = True
        return self

    def node(self, node_id: int) -> RegistryNode:
        if not 0 <= node_id < len(self.nodes):
            raise RegistryMiss(f"unknown registry node {node_id}")
        return self.nodes[node_id]

    def children(self, node_id: int) -> list[tuple[int, int]]:
        """(flipped edge, child id) for the tree of first discoveries."""
        return self._children.get(node_id, [])

    def child(self, node_id: int, e: int) -> int:
        for f, c in self.children(node_id):
            if f == e:
                return c
        raise RegistryMiss(f"node {node_id} has no recorded child across edge {e}")

    def replay(self, node_id: int) -> IdealTriangulation:
        t = self.base
        for e in self.node(node_id).path:
            t = t.flip(e)
        return t

    def curves_at(self, node_id: int, rows) -> np.ndarray:
        """Normal coordinates of curves (given over the base) at a registry node."""
        return transport_curves(rows, self.node(node_id).moves)

    def arcs_at(self, node_id: int, arcs) -> np.ndarray:
        """Coordinates of ``arcs`` relative to the triangulation of a registry node."""
        if not arcs:
            return np.zeros((0, self.base.num_edges), dtype=np.int64)
        states = [self.arc_state(a) for a in arcs]
        xs = [x for x, _ in states]
        ends = [c for _, c in states]
        return transport_arcs(xs, ends, self.node(node_id).moves)

    def arc_state(self, a: ArcClass):
        key = a.key()
        st = self._states.get(key)
        if st is None:
            st = self._states[key] = a.state(self.base)
        return st

    def short_curves(self) -> dict[tuple, int]:
        """Curves of weight 2 in some registry triangulation, as base coordinates.

        Such a curve is the core of two triangles glued along two edges.  The
        value is the smallest depth of a triangulation where it is that short.
        """
        if self._short is not None:
            return self._short
        from .normal import is_essential_curve
        out: dict[tuple, int] = {}
        E = self.base.num_edges
        for node in self.nodes:
            tri = node.tri
            rows = []
            for t in range(tri.num_triangles):
                es = {}
                for c in range(3 * t, 3 * t + 3):
                    u = int(tri.iota[c]) // 3
                    if u != t:
                        es.setdefault(u, set()).add(int(tri.edge_of[c]))
                for u, shared in es.items():
                    if u > t and len(shared) == 2:
                        v = np.zeros(E, dtype=np.int64)
                        v[list(shared)] = 1
                        if is_essential_curve(tri, v):
                            rows.append(v)
            if not rows:
                continue
            back = kernels.transport_rows(np.array(rows), [m[2:] for m in reversed(node.moves)])
            for r in back:
                key = tuple(int(x) for x in r)
                if key not in out:
                    out[key] = node.depth
        self._short = out
        return out

    def arc_list(self) -> list[ArcClass]:
        return [self.arcs[k] for k in sorted(self.arcs, key=_arc_sort_key)]

    def combinatorial_types(self, labeled: bool = False) -> int:
        return len({n.tri.canonical_code(labeled) for n in self.nodes})

    def to_json(self) -> dict:
        return {
            "base": self.base.to_json(),
            "radius": self.radius,
            "closed": self.closed,
            "triangulations": [
                {"id": n.id, "depth": n.depth, "path": list(n.path),
                 "code": n.tri.canonical_code().hex()}
                for n in self.nodes
            ],
            "arcs": [dict(a.to_json(), anchor=list(a.anchor), depth=self.arc_depth[a.key()])
                     for a in self.arc_list()],
        }


def _arc_sort_key(key):
    _, ends, coords = key
    return (sum(max(x, 0) for x in coords), ends, coords)


def flip_ball(t0: IdealTriangulation, radius: int, max_nodes: int = DEFAULT_NODE_BUDGET) -> FlipRegistry:
    if radius < 0:
        raise ValueError("radius must be non-negative")
    return FlipRegistry(t0).expand(radius, max_nodes)
