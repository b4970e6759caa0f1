"""Normal realisations of curves and arcs inside a fixed triangulation.

A class is drawn as a family of chords: in every triangle, corner chords join
two sides, and an arc additionally has *stubs* that leave a corner vertex and
end on the opposite side.  Points on side ``c`` are numbered from the vertex
at corner ``c`` towards the vertex at ``sigma(c)``; gluing reverses the
numbering.  Everything here works with sides, so self-folded triangles need
no special treatment.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import InvalidCoordinates
from .triangulation import IdealTriangulation, sig, sig2


def side_weights(tri: IdealTriangulation, vec) -> np.ndarray:
    return np.asarray(vec, dtype=np.int64)[tri.edge_of]


def corner_counts(tri: IdealTriangulation, vec, stubs=None) -> np.ndarray:
    """Corner-chord counts; raises when the vector is not normal data.

    ``stubs[c]`` is the number of stubs leaving corner ``c`` (arcs only).
    """
    w = side_weights(tri, vec)
    if np.any(w < 0):
        raise InvalidCoordinates("negative normal coordinate")
    nc = tri.num_corners
    y = w.copy()
    if stubs is not None:
        # a stub at corner c ends on side sigma(c)
        for c in range(nc):
            y[sig(c)] -= stubs[c]
    n = np.empty(nc, dtype=np.int64)
    for c in range(nc):
        twice = y[c] + y[sig2(c)] - y[sig(c)]
        if twice < 0 or twice % 2:
            raise InvalidCoordinates(f"triangle condition fails at corner {c}")
        n[c] = twice // 2
    return n


def is_normal_vector(tri: IdealTriangulation, vec) -> bool:
    try:
        corner_counts(tri, vec)
    except InvalidCoordinates:
        return False
    return True


@dataclass
class Component:
    """One traced component, as a sequence of pieces.

    ``pieces[i] = (triangle, in_slot, out_slot)``; slots number the boundary
    of a triangle counterclockwise: vertex of corner ``k`` is ``2k``, side
    ``k`` is ``2k+1`` (``k`` = corner index mod 3).  ``sides[i]`` is the side
    through which piece ``i`` leaves its triangle.
    """

    closed: bool
    pieces: list
    sides: list
    points: list = field(default_factory=list)


def vertex_slot(c: int) -> int:
    return 2 * (c % 3)


def side_slot(c: int) -> int:
    return 2 * (c % 3) + 1


class Strands:
    """Explicit chord diagram of a normal curve, multicurve or arc."""

    def __init__(self, tri: IdealTriangulation, vec, stubs=None):
        self.tri = tri
        self.vec = np.asarray(vec, dtype=np.int64)
        nc = tri.num_corners
        self.stubs = np.zeros(nc, dtype=np.int64) if stubs is None else np.asarray(stubs, dtype=np.int64)
        self.n = corner_counts(tri, self.vec, self.stubs)
        for c in range(nc):
            if self.stubs[c] and self.n[c]:
                raise InvalidCoordinates("a stub would cross corner chords of its own class")
        w = side_weights(tri, self.vec)
        self.w = w
        self.offset = np.concatenate([[0], np.cumsum(w)]).astype(np.int64)
        npts = int(self.offset[-1])
        # chord partner inside the triangle: point id, or -1-corner for a vertex end
        self.inner = np.full(npts, -(10**9), dtype=np.int64)
        self.across = np.empty(npts, dtype=np.int64)
        self.chords = []  # (triangle, end, end) with ends as above
        for c in range(nc):
            for k in range(w[c]):
                self.across[self.offset[c] + k] = self.offset[tri.iota[c]] + w[c] - 1 - k
        for c in range(nc):
            t = c // 3
            prev = sig2(c)
            for k in range(self.n[c]):
                p = self.offset[c] + k
                q = self.offset[prev] + w[prev] - 1 - k
                self._chord(t, p, q)
            base = self.offset[sig(c)] + self.n[sig(c)]
            for k in range(self.stubs[c]):
                self._chord(t, -1 - c, base + k)
        if np.any(self.inner == -(10**9)):
            raise InvalidCoordinates("chord diagram leaves unmatched points")  # pragma: no cover

    def _chord(self, t, a, b):
        if a >= 0:
            self.inner[a] = b
        if b >= 0:
            self.inner[b] = a
        self.chords.append((t, a, b))

    def side_of_point(self, p: int) -> int:
        return int(np.searchsorted(self.offset, p, side="right") - 1)

    def slot_of(self, end: int) -> int:
        if end < 0:
            return vertex_slot(-1 - end)
        return side_slot(self.side_of_point(end))

    def components(self) -> list[Component]:
        npts = int(self.offset[-1])
        seen = np.zeros(npts, dtype=bool)
        comps = []
        # arcs first: start from vertex ends
        for (t, a, b) in self.chords:
            for start, other in ((a, b), (b, a)):
                if start < 0 and not seen[other]:
                    comps.append(self._walk(start, other, seen, closed=False))
        for p0 in range(npts):
            if not seen[p0]:
                comps.append(self._walk_closed(p0, seen))
        return comps

    def _walk(self, start, first, seen, closed):
        pieces, sides, points = [], [], []
        cur_in, cur_out = start, first
        while True:
            tri_id = (self.side_of_point(cur_out) // 3) if cur_out >= 0 else (-1 - cur_out) // 3
            pieces.append((tri_id, self.slot_of(cur_in), self.slot_of(cur_out)))
            if cur_out < 0:
                break
            seen[cur_out] = True
            s = self.side_of_point(cur_out)
            sides.append(s)
            points.append(cur_out)
            q = int(self.across[cur_out])
            seen[q] = True
            cur_in, cur_out = q, int(self.inner[q])
        return Component(False, pieces, sides, points)

    def _walk_closed(self, p0, seen):
        # p0 is a point; walk: p0 -> across -> inner -> ...
        pieces, sides, points = [], [], []
        p = p0
        while True:
            q = int(self.across[p])
            r = int(self.inner[q])
            seen[p] = seen[q] = True
            s = self.side_of_point(q)
            pieces.append((s // 3, side_slot(s), self.slot_of(r)))
            sides.append(self.side_of_point(r))
            points.append(r)
            p = r
            if p == p0:
                break
        # piece i enters via across(points[i-1]) and leaves through sides[i]
        return Component(True, pieces, sides, points)

    def component_vectors(self) -> list[np.ndarray]:
        """Normal coordinates of each traced component."""
        tri = self.tri
        out = []
        for comp in self.components():
            v = np.zeros(tri.num_edges, dtype=np.int64)
            for s in comp.sides:
                v[tri.edge_of[s]] += 1
            out.append((comp, v))
        return out


def trace_multicurve(tri: IdealTriangulation, vec) -> list[np.ndarray]:
    """Component vectors of the normal multicurve with coordinates ``vec``."""
    return [v for _, v in Strands(tri, vec).component_vectors()]


def peripheral_puncture(tri: IdealTriangulation, vec) -> int | None:
    vec = np.asarray(vec)
    for p in range(1, tri.num_punctures + 1):
        if np.array_equal(vec, tri.link_vector(p)):
            return p
    return None


def is_essential_curve(tri: IdealTriangulation, vec) -> bool:
    vec = np.asarray(vec, dtype=np.int64)
    if not vec.any() or not is_normal_vector(tri, vec):
        return False
    comps = trace_multicurve(tri, vec)
    return len(comps) == 1 and peripheral_puncture(tri, vec) is None


def arc_strands(tri: IdealTriangulation, bv, endpoints) -> Strands:
    """Realise an arc from its interior intersection vector and endpoints.

    Stub positions are not part of the data; every placement compatible with
    the endpoints is tried and the unique one tracing to a single arc wins.
    """
    bv = np.asarray(bv, dtype=np.int64)
    if np.any(bv < 0):
        raise InvalidCoordinates("edge arcs have no transverse realisation")
    p, q = endpoints
    at = {lab: [c for c in range(tri.num_corners) if int(tri.punct[c]) == lab] for lab in (p, q)}
    if p == q:
        choices = list(combinations(at[p], 2)) + [(c, c) for c in at[p]]
    else:
        choices = [(a, b) for a in at[p] for b in at[q]]
    found = []
    for a, b in choices:
        stubs = np.zeros(tri.num_corners, dtype=np.int64)
        stubs[a] += 1
        stubs[b] += 1
        try:
            st = Strands(tri, bv, stubs)
        except InvalidCoordinates:
            continue
        comps = st.components()
        if len(comps) == 1 and not comps[0].closed:
            found.append(st)
    if not found:
        raise InvalidCoordinates(f"no arc with endpoints {endpoints} realises {bv.tolist()}")
    if len(found) > 1:
        raise InvalidCoordinates(f"ambiguous arc realisation for {bv.tolist()}")
    return found[0]


def cut_component_count(st: Strands) -> int:
    """Components of the surface cut along the chords of ``st``.

    The boundary of each triangle is a cyclic token list of side segments and
    chord endpoints (a vertex is an endpoint only when a stub leaves it).
    Segments between consecutive endpoints form one interval; an interval
    continues, past its closing endpoint, into the interval that follows the
    chord partner.  Segments are then glued across sides.
    """
    tri = st.tri
    w = st.w
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[ry] = rx

    partner = {}
    for (_, a, b) in st.chords:
        partner[a] = b
        partner[b] = a
    for t in range(tri.num_triangles):
        tokens = []
        for c in range(3 * t, 3 * t + 3):
            if st.stubs[c]:
                tokens.append(("P", -1 - c))
            for k in range(w[c]):
                tokens.append(("S", c, k))
                tokens.append(("P", int(st.offset[c] + k)))
            tokens.append(("S", c, int(w[c])))
        pts = [j for j, tok in enumerate(tokens) if tok[0] == "P"]
        if not pts:
            for tok in tokens:
                union(tokens[0], tok)
            continue
        m = len(tokens)
        interval_after = {}
        for j in pts:
            segs = []
            k = (j + 1) % m
            while tokens[k][0] != "P":
                segs.append(tokens[k])
                k = (k + 1) % m
            for s in segs[1:]:
                union(segs[0], s)
            interval_after[tokens[j][1]] = (segs[0], tokens[k][1])
        for x, (seg, closing) in interval_after.items():
            union(seg, interval_after[partner[closing]][0])
    for c in range(tri.num_corners):
        d = int(tri.iota[c])
        for k in range(int(w[c]) + 1):
            union(("S", c, k), ("S", d, int(w[c]) - k))
    return len({find(x) for x in list(parent)})


def edge_neighbourhood_boundary(tri: IdealTriangulation, edges) -> list[np.ndarray]:
    """Normal coordinates of each boundary component of a neighbourhood of
    some edges of ``tri`` together with their end punctures.

    The boundary is walked corner by corner around the end punctures: from
    corner ``c`` it crosses side ``c`` into the next corner of the same vertex,
    unless that side is one of ``edges``, in which case it runs along the edge
    to corner ``sigma(c)`` at the far end.  The sides crossed form a word in the
    dual graph; reducing it cyclically (a side followed by its glued partner
    is a backtrack) leaves the normal representative.  Components bounding a
    disc come out empty and are dropped.
    """
    edges = {int(e) for e in edges}
    labels = set()
    for e in edges:
        labels.update(tri.endpoints(e))
    iota, eo = tri.iota, tri.edge_of
    todo = {c for c in range(tri.num_corners) if int(tri.punct[c]) in labels}
    out = []
    while todo:
        start = min(todo)
        word = []
        c = start
        while True:
            todo.discard(c)
            if int(eo[c]) in edges:
                c = sig(c)
            else:
                word.append(c)
                c = sig(int(iota[c]))
            if c == start:
                break
        word = _reduce_cyclic(word, iota)
        if word:
            vec = np.zeros(tri.num_edges, dtype=np.int64)
            for s in word:
                vec[eo[s]] += 1
            out.append(vec)
    return out


def _reduce_cyclic(word: list[int], iota) -> list[int]:
    stack: list[int] = []
    for s in word:
        if stack and int(iota[stack[-1]]) == s:
            stack.pop()
        else:
            stack.append(s)
    while len(stack) > 1 and int(iota[stack[-1]]) == stack[0]:
        stack = stack[1:-1]
    return stack
