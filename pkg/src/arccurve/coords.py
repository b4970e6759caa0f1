"""Isotopy classes of curves and arcs as integer vectors over the base edges.

A curve is stored by its normal coordinates (intersection numbers with the
base edges) and moves through flips by the max-plus rule.  An arc is stored
by its interior intersection numbers with the base edges, with ``-1`` at
``e`` exactly when the arc *is* base edge ``e``, plus its endpoint pair and an
anchor (registry triangulation, edge) where it occurs as an edge.  To move an
arc through flips we also need the corners its two ends leave from; those are
recovered from an explicit realisation (see ``normal.arc_strands``).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from . import kernels
from .errors import InvalidCoordinates, RegistryMiss
from .triangulation import IdealTriangulation


@dataclass(frozen=True)
class CurveClass:
    coords: tuple

    kind = "curve"

    def __post_init__(self):
        if not any(self.coords):
            raise InvalidCoordinates("the all-zero vector is not a curve")
        if min(self.coords) < 0:
            raise InvalidCoordinates("curve coordinates must be non-negative")

    @property
    def endpoints(self):
        return None

    @property
    def weight(self) -> int:
        return sum(self.coords)

    def key(self) -> tuple:
        return ("curve", self.coords)

    def to_json(self) -> dict:
        return {"kind": "curve", "coords": list(self.coords), "endpoints": None}

    def validate(self, base: IdealTriangulation) -> "CurveClass":
        """Raise ``InvalidCoordinates`` unless this is an essential curve of ``base``."""
        from .normal import is_essential_curve

        if len(self.coords) != base.num_edges or not is_essential_curve(base, self.coords):
            raise InvalidCoordinates(f"{list(self.coords)} is not an essential curve")
        return self


@dataclass(frozen=True)
class ArcClass:
    endpoints: tuple
    coords: tuple
    anchor: tuple | None = field(default=None, compare=False, hash=False)

    kind = "arc"

    def __post_init__(self):
        p, q = self.endpoints
        if p > q:
            object.__setattr__(self, "endpoints", (q, p))
        neg = [x for x in self.coords if x < 0]
        if neg and (neg != [-1] or any(x for x in self.coords if x != -1)):
            raise InvalidCoordinates("an edge arc has a single -1 and zeros elsewhere")

    @property
    def weight(self) -> int:
        return sum(max(x, 0) for x in self.coords)

    @property
    def base_edge(self) -> int | None:
        return self.coords.index(-1) if -1 in self.coords else None

    @property
    def is_loop(self) -> bool:
        return self.endpoints[0] == self.endpoints[1]

    def key(self) -> tuple:
        return ("arc", self.endpoints, self.coords)

    def state(self, base: IdealTriangulation) -> tuple[np.ndarray, tuple]:
        """Coordinates and end corners in ``base``, ready for ``kernels.flip_arcs``."""
        x = np.asarray(self.coords, dtype=np.int64)
        if self.base_edge is not None:
            return x, (-1, -1)
        from .normal import arc_strands

        st = arc_strands(base, x, self.endpoints)
        corners = tuple(c for c in range(base.num_corners) for _ in range(int(st.stubs[c])))
        return x, corners

    def validate(self, base: IdealTriangulation) -> "ArcClass":
        """Raise ``InvalidCoordinates`` unless ``base`` carries this arc."""
        if len(self.coords) != base.num_edges:
            raise InvalidCoordinates("coordinate vector has the wrong length")
        e = self.base_edge
        if e is not None:
            if base.endpoints(e) != self.endpoints:
                raise InvalidCoordinates(f"base edge {e} joins {base.endpoints(e)}, not {self.endpoints}")
            return self
        self.state(base)
        return self

    def to_json(self) -> dict:
        return {"kind": "arc", "coords": list(self.coords), "endpoints": list(self.endpoints)}


VertexClass = Union[CurveClass, ArcClass]


def class_from_json(data) -> VertexClass:
    if isinstance(data, str):
        data = json.loads(data)
    coords = tuple(int(x) for x in data["coords"])
    if data["kind"] == "curve":
        return CurveClass(coords)
    if data["kind"] == "arc":
        return ArcClass(tuple(int(x) for x in data["endpoints"]), coords)
    raise InvalidCoordinates(f"unknown class kind {data['kind']!r}")


def class_equal(x: VertexClass, y: VertexClass) -> bool:
    return x.key() == y.key()


def transport(v, t: IdealTriangulation, e: int) -> np.ndarray:
    """Normal coordinates of a curve (relative to ``t``) after flipping ``e``."""
    from .normal import corner_counts

    v = np.asarray(v, dtype=np.int64)
    corner_counts(t, v)
    rows = v.reshape(1, -1).copy()
    return kernels.transport_rows(rows, [t.quad(e)])[0]


def transport_curves(rows, moves) -> np.ndarray:
    rows = np.array(rows, dtype=np.int64, ndmin=2)
    if len(moves) == 0:
        return rows
    return kernels.transport_rows(rows, [m[2:] for m in moves])


def transport_arcs(xs, ends, moves) -> np.ndarray:
    xs = np.array(xs, dtype=np.int64, ndmin=2)
    if len(moves) == 0:
        return xs
    return kernels.flip_arcs(xs, ends, moves)[0]


def edge_arc(base: IdealTriangulation, e: int, anchor=None) -> ArcClass:
    coords = [0] * base.num_edges
    coords[e] = -1
    return ArcClass(base.endpoints(e), tuple(coords), anchor)


def arc_base_vector(a: ArcClass, registry) -> np.ndarray:
    """Recompute an arc's base vector from its anchor in ``registry``."""
    if a.anchor is None:
        raise RegistryMiss("arc has no anchor")
    node_id, edge = a.anchor
    if node_id >= len(registry.nodes):
        raise RegistryMiss(f"unknown registry node {node_id}")
    return registry.nodes[node_id].arc_vector(edge, registry.base)


def enumerate_curves(base: IdealTriangulation, max_weight: int) -> list[CurveClass]:
    """All essential curves whose base coordinates sum to at most ``max_weight``.

    Vectors are generated edge by edge; a triangle is checked as soon as its
    three sides are assigned.  Order: by weight, then lexicographically.
    """
    from .normal import is_essential_curve

    E = base.num_edges
    tris = [tuple(int(base.edge_of[3 * t + k]) for k in range(3)) for t in range(base.num_triangles)]
    closing: list[list[tuple]] = [[] for _ in range(E)]
    for tr in tris:
        closing[max(tr)].append(tr)
    out = []
    v = [0] * E

    def rec(i, left):
        if i == E:
            if any(v) and is_essential_curve(base, v):
                out.append(CurveClass(tuple(v)))
            return
        for x in range(left + 1):
            v[i] = x
            ok = True
            for (p, q, r) in closing[i]:
                a, b, c = v[p], v[q], v[r]
                if (a + b + c) % 2 or a > b + c or b > a + c or c > a + b:
                    ok = False
                    break
            if ok:
                rec(i + 1, left - x)
        v[i] = 0

    rec(0, max_weight)
    out.sort(key=lambda c: (c.weight, c.coords))
    return out
