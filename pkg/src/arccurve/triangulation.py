"""Ideal triangulations stored as combinatorial maps.

Corners ``3t, 3t+1, 3t+2`` belong to triangle ``t``.  The rotation ``sigma``
advances a corner inside its triangle and is implicit in that numbering.  Side
``c`` is the side running from the vertex at corner ``c`` to the vertex at
``sigma(c)``; ``iota`` glues sides in pairs, reversing direction.  Vertex
orbits are the orbits of ``c -> sigma(iota(c))`` and carry puncture labels
``1..n``.
"""
from __future__ import annotations

import json
from collections import defaultdict

import numpy as np

from . import kernels
from .errors import InvalidCoordinates, SelfFoldedEdge, UnsupportedSurface
from .surface import Surface

CODE_VERSION = 1


def sig(c: int) -> int:
    return 3 * (c // 3) + (c + 1) % 3


def sig2(c: int) -> int:
    return 3 * (c // 3) + (c + 2) % 3


class IdealTriangulation:
    __slots__ = ("iota", "punct", "edge_of", "_edges", "_code")

    def __init__(self, iota, punct, edge_of, check=True):
        self.iota = np.asarray(iota, dtype=np.int64)
        self.punct = np.asarray(punct, dtype=np.int64)
        self.edge_of = np.asarray(edge_of, dtype=np.int64)
        for arr in (self.iota, self.punct, self.edge_of):
            arr.setflags(write=False)
        self._edges = None
        self._code = {}
        if check:
            self.validate()

    # -- basic counts ------------------------------------------------------
    @property
    def num_corners(self) -> int:
        return self.iota.shape[0]

    @property
    def num_triangles(self) -> int:
        return self.num_corners // 3

    @property
    def num_edges(self) -> int:
        return self.num_corners // 2

    @property
    def num_punctures(self) -> int:
        return len(set(self.punct.tolist()))

    @property
    def sigma(self) -> np.ndarray:
        c = np.arange(self.num_corners)
        return 3 * (c // 3) + (c + 1) % 3

    @property
    def edges(self) -> list[tuple[int, int]]:
        """``edges[e]`` = the two sides of edge ``e``, smaller first."""
        if self._edges is None:
            sides = defaultdict(list)
            for c, e in enumerate(self.edge_of.tolist()):
                sides[e].append(c)
            self._edges = [tuple(sorted(sides[e])) for e in range(self.num_edges)]
        return self._edges

    def surface(self) -> Surface:
        v, e, f = self.num_punctures, self.num_edges, self.num_triangles
        chi = v - e + f
        return Surface((2 - chi) // 2, v)

    def vertex_orbits(self) -> list[list[int]]:
        seen = np.zeros(self.num_corners, dtype=bool)
        orbits = []
        for c0 in range(self.num_corners):
            if seen[c0]:
                continue
            orb, c = [], c0
            while not seen[c]:
                seen[c] = True
                orb.append(c)
                c = sig(int(self.iota[c]))
            orbits.append(orb)
        return orbits

    def endpoints(self, e: int) -> tuple[int, int]:
        c = self.edges[e][0]
        p, q = int(self.punct[c]), int(self.punct[sig(c)])
        return (p, q) if p <= q else (q, p)

    def ends_in(self, e: int, labels) -> int:
        """Number of ends of edge ``e`` lying at a puncture in ``labels``."""
        c = self.edges[e][0]
        return int(int(self.punct[c]) in labels) + int(int(self.punct[sig(c)]) in labels)

    def ends_vector(self, labels) -> np.ndarray:
        labels = set(labels)
        return np.array([self.ends_in(e, labels) for e in range(self.num_edges)], dtype=np.int64)

    def link_vector(self, p: int) -> np.ndarray:
        """Normal coordinates of the peripheral curve around puncture ``p``."""
        return self.ends_vector([p])

    def is_self_folded(self, e: int) -> bool:
        a, b = self.edges[e]
        return a // 3 == b // 3

    def flippable_edges(self) -> list[int]:
        return [e for e in range(self.num_edges) if not self.is_self_folded(e)]

    def quad(self, e: int) -> tuple[int, int, int, int, int]:
        """(e, a, b, c, d) as edge ids; (a, c) and (b, d) are opposite sides."""
        s, r = self.edges[e]
        eo = self.edge_of
        return (e, int(eo[sig(s)]), int(eo[sig2(s)]), int(eo[sig(r)]), int(eo[sig2(r)]))

    def move(self, e: int) -> tuple:
        """Record of the flip of ``e``: its two sides followed by ``quad(e)``."""
        s, r = self.edges[e]
        return (s, r) + self.quad(e)

    # -- validation --------------------------------------------------------
    def validate(self) -> None:
        nc = self.num_corners
        io = self.iota
        if nc == 0 or nc % 6:
            raise InvalidCoordinates(f"corner count {nc} is not a positive multiple of 6")
        idx = np.arange(nc)
        if np.any(io[io] != idx) or np.any(io == idx):
            raise InvalidCoordinates("iota must be a fixed-point-free involution")
        if np.any(self.edge_of[io] != self.edge_of):
            raise InvalidCoordinates("edge index disagrees across a gluing")
        if sorted(np.bincount(self.edge_of, minlength=nc // 2).tolist()) != [2] * (nc // 2):
            raise InvalidCoordinates("every edge must own exactly two sides")
        for orb in self.vertex_orbits():
            labs = {int(self.punct[c]) for c in orb}
            if len(labs) != 1:
                raise InvalidCoordinates("puncture label is not constant on a vertex orbit")
        orbits = self.vertex_orbits()
        labels = sorted(int(self.punct[o[0]]) for o in orbits)
        if labels != list(range(1, len(orbits) + 1)):
            raise InvalidCoordinates(f"puncture labels {labels} are not 1..n, one per vertex")
        # connectivity of the triangle adjacency
        seen = {0}
        stack = [0]
        while stack:
            t = stack.pop()
            for c in range(3 * t, 3 * t + 3):
                u = int(io[c]) // 3
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        if len(seen) != self.num_triangles:
            raise InvalidCoordinates("triangulation is disconnected")
        v, e, f = len(orbits), self.num_edges, self.num_triangles
        if (v - e + f) % 2 or v - e + f > 2:
            raise InvalidCoordinates("Euler characteristic is not that of a closed orientable surface")

    # -- moves -------------------------------------------------------------
    def flip(self, e: int) -> "IdealTriangulation":
        """Exchange the diagonal of the quadrilateral around edge ``e``.

        The new diagonal keeps the edge id ``e``; the other sides of the
        quadrilateral keep theirs.
        """
        if self.is_self_folded(e):
            raise SelfFoldedEdge(f"edge {e} is self-folded and cannot be flipped")
        s, r = self.edges[e]
        s1, s2, r1, r2 = sig(s), sig2(s), sig(r), sig2(r)
        io = self.iota.copy()
        pu = self.punct.copy()
        eo = self.edge_of.copy()
        old_io, old_pu, old_eo = self.iota, self.punct, self.edge_of
        # quadrilateral A D B C; old triangles (A,B,C) at s and (B,A,D) at r
        moved = {s2: s1, r1: s2, r2: r1, s1: r2}
        for x, m in moved.items():
            y = int(old_io[x])
            target = moved.get(y, y)
            io[m] = target
            io[target] = m
            eo[m] = old_eo[x]
        io[s] = r
        io[r] = s
        eo[s] = eo[r] = e
        A, B = old_pu[s], old_pu[r]
        C, D = old_pu[s2], old_pu[r2]
        pu[s], pu[s1], pu[s2] = D, C, A
        pu[r], pu[r1], pu[r2] = C, D, B
        return IdealTriangulation(io, pu, eo, check=False)

    # -- identity ----------------------------------------------------------
    def labeled_key(self) -> tuple:
        """Equality as an edge- and puncture-labelled map.

        Corner numbering is forgotten: each triangle becomes its cyclic word of
        (edge id, puncture at the start corner), normalised by rotation.
        """
        tris = []
        for t in range(self.num_triangles):
            word = [(int(self.edge_of[c]), int(self.punct[c])) for c in range(3 * t, 3 * t + 3)]
            tris.append(min(tuple(word[k:] + word[:k]) for k in range(3)))
        return tuple(sorted(tris))

    def canonical_code(self, labeled: bool = True) -> bytes:
        key = bool(labeled)
        if key not in self._code:
            arr = kernels.canonical_code_array(self.iota, self.punct, key)
            head = np.array([CODE_VERSION, self.num_triangles, self.num_punctures], dtype=np.int64)
            self._code[key] = np.concatenate([head, arr]).astype("<i4").tobytes()
        return self._code[key]

    def __eq__(self, other):
        return isinstance(other, IdealTriangulation) and self.labeled_key() == other.labeled_key()

    def __hash__(self):
        return hash(self.labeled_key())

    def __repr__(self):
        return (f"IdealTriangulation(triangles={self.num_triangles}, edges={self.num_edges}, "
                f"punctures={self.num_punctures})")

    # -- serialisation -----------------------------------------------------
    def to_json(self) -> dict:
        return {
            "corners": self.num_corners,
            "sigma": self.sigma.tolist(),
            "iota": self.iota.tolist(),
            "punctures": self.punct.tolist(),
            "edges": [list(p) for p in self.edges],
        }

    @classmethod
    def from_json(cls, data) -> "IdealTriangulation":
        if isinstance(data, str):
            data = json.loads(data)
        nc = int(data["corners"])
        sigma = np.asarray(data["sigma"])
        c = np.arange(nc)
        if sigma.shape != (nc,) or np.any(sigma != 3 * (c // 3) + (c + 1) % 3):
            raise InvalidCoordinates("sigma must advance corners within consecutive triples")
        edge_of = np.full(nc, -1, dtype=np.int64)
        for e, (a, b) in enumerate(data["edges"]):
            edge_of[a] = edge_of[b] = e
        if np.any(edge_of < 0):
            raise InvalidCoordinates("edge list does not cover every side")
        return cls(data["iota"], data["punctures"], edge_of)


# -- construction -------------------------------------------------------------

def from_side_words(triangles) -> IdealTriangulation:
    """Build a triangulation from triangles given as three signed edge labels.

    Each triangle is a list of ``(label, +1|-1)``; the two occurrences of a
    label must carry opposite signs.  Punctures are numbered by first
    appearance in corner order.
    """
    nc = 3 * len(triangles)
    where = defaultdict(list)
    for t, tri in enumerate(triangles):
        for k, (lab, sgn) in enumerate(tri):
            where[lab].append((3 * t + k, sgn))
    iota = np.full(nc, -1, dtype=np.int64)
    edge_of = np.full(nc, -1, dtype=np.int64)
    for e, lab in enumerate(sorted(where, key=lambda l: min(c for c, _ in where[l]))):
        (a, sa), (b, sb) = where[lab]
        if sa == sb:
            raise InvalidCoordinates(f"label {lab!r} glued without reversing orientation")
        iota[a], iota[b] = b, a
        edge_of[a] = edge_of[b] = e
    punct = np.zeros(nc, dtype=np.int64)
    nxt = 1
    for c0 in range(nc):
        if punct[c0]:
            continue
        c = c0
        while not punct[c]:
            punct[c] = nxt
            c = sig(int(iota[c]))
        nxt += 1
    return IdealTriangulation(iota, punct, edge_of)


def _polygon_fan(genus: int) -> list:
    """Fan triangulation of the 4g-gon with word a1 b1 a1^-1 b1^-1 ..."""
    m = 4 * genus
    side = {}
    for k in range(genus):
        side[4 * k] = (f"a{k}", 1)
        side[4 * k + 1] = (f"b{k}", 1)
        side[4 * k + 2] = (f"a{k}", -1)
        side[4 * k + 3] = (f"b{k}", -1)
    tris = []
    for j in range(1, m - 1):
        first = side[0] if j == 1 else (f"d{j}", 1)
        last = side[m - 1] if j + 1 == m - 1 else (f"d{j + 1}", -1)
        tris.append([first, side[j], last])
    return tris


def base_triangulation(s: Surface) -> IdealTriangulation:
    """Deterministic ideal triangulation of ``s`` with ``n`` vertex orbits.

    Genus ``g >= 1`` starts from the one-vertex fan of the 4g-gon; the sphere
    starts from two triangles glued along their boundary.  Remaining
    punctures are added by starring triangles, cycling through them.
    """
    s.require_triangulable()
    if s.g == 0:
        tris = [[("e0", 1), ("e1", 1), ("e2", 1)], [("e2", -1), ("e1", -1), ("e0", -1)]]
        have = 3
    else:
        tris = _polygon_fan(s.g)
        have = 1
    k = 0
    while have < s.n:
        t = k % len(tris)
        (l0, s0), (l1, s1_), (l2, s2_) = tris[t]
        n0, n1, n2 = f"x{k}_0", f"x{k}_1", f"x{k}_2"
        tris[t] = [(l0, s0), (n1, 1), (n0, -1)]
        tris.append([(l1, s1_), (n2, 1), (n1, -1)])
        tris.append([(l2, s2_), (n0, 1), (n2, -1)])
        have += 1
        k += 2
    t = from_side_words(tris)
    if t.num_punctures != s.n or t.num_edges != s.num_edges:
        raise UnsupportedSurface(f"construction failed for {s}")  # pragma: no cover
    return t
