"""Geometric intersection numbers between curves and arcs.

Three independent routes are available:

* ``fast`` -- anchor the arc: move the other class to a triangulation in
  which the arc is an edge and read the coordinate there.
* ``linked`` -- draw both classes as normal strands in the base triangulation
  and count pairs of strand segments whose ends are linked (a crossing that no
  isotopy can remove).  This is the production route for two curves.
* ``overlay_oracle`` -- draw both classes, try every relative order of their
  points on every edge and keep the smallest crossing count.  Exponential,
  guarded by a budget; used to audit the other two.

Ends at a shared puncture never count as crossings.
"""
from __future__ import annotations

import threading
from itertools import combinations
from math import comb

import numpy as np

from .coords import ArcClass, CurveClass, VertexClass
from .errors import RegistryMiss, ResourceLimit
from .normal import Strands, arc_strands
from .triangulation import IdealTriangulation

STRANDS_PER_EDGE = 12
ORACLE_BUDGET = 200_000


# -- strand drawings --------------------------------------------------------

def strands_of(x: VertexClass, tri: IdealTriangulation) -> Strands:
    if isinstance(x, CurveClass):
        return Strands(tri, x.coords)
    return arc_strands(tri, x.coords, x.endpoints)


class _Track:
    """One traced component as pieces ``(triangle, in_slot, out_slot)``.

    ``exits[i]`` is the side piece ``i`` leaves through; an arc has one piece
    more than exits (the last piece ends at a puncture).
    """

    def __init__(self, pieces, exits, closed):
        self.pieces = pieces
        self.exits = exits
        self.closed = closed

    @classmethod
    def from_strands(cls, st: Strands) -> "_Track":
        comps = st.components()
        if len(comps) != 1:
            raise ValueError("expected a single component")
        c = comps[0]
        return cls(list(c.pieces), list(c.sides), c.closed)

    def reversed(self, iota) -> "_Track":
        m = len(self.pieces)
        pieces = [(t, o, i) for (t, i, o) in reversed(self.pieces)]
        if self.closed:
            # reversed piece k is old piece m-1-k, which was entered through
            # the exit of old piece m-2-k
            exits = [int(iota[self.exits[(m - 2 - k) % m]]) for k in range(m)]
        else:
            exits = [int(iota[self.exits[m - 2 - k]]) for k in range(m - 1)]
        return _Track(pieces, exits, self.closed)

    def prev(self, i):
        if i > 0:
            return i - 1
        return len(self.exits) - 1 if self.closed else None

    def next(self, i):
        if i + 1 < len(self.exits):
            return i + 1
        return 0 if self.closed else None


def _chords_cross(p, q) -> bool:
    """Chords p=(p1,p2), q=(q1,q2) of a hexagon with four distinct slots."""
    a, b = sorted(p)
    inside = [a < x < b for x in q]
    return inside[0] != inside[1]


def _key(slot, side_slot):
    return (slot - side_slot) % 6


def _run_crossings(A: _Track, B: _Track) -> int:
    """Crossings forced along maximal runs where A and B cross the same sides."""
    total = 0
    mA, mB = len(A.exits), len(B.exits)
    by_side: dict[int, list[int]] = {}
    for j, s in enumerate(B.exits):
        by_side.setdefault(s, []).append(j)
    for i, s in enumerate(A.exits):
        for j in by_side.get(s, ()):
            pi, pj = A.prev(i), B.prev(j)
            if pi is not None and pj is not None and A.exits[pi] == B.exits[pj]:
                continue  # not the start of the run
            # walk to the end of the run
            ii, jj, steps = i, j, 1
            full = False
            while True:
                ni, nj = A.next(ii), B.next(jj)
                if ni is None or nj is None or A.exits[ni] != B.exits[nj]:
                    break
                ii, jj = ni, nj
                steps += 1
                if steps > mA + mB:
                    full = True
                    break
            if full:
                continue  # parallel closed curves
            in_a, in_b = A.pieces[i][1], B.pieces[j][1]
            if in_a == in_b:
                continue  # both leave the same corner of the same puncture
            end_a, end_b = A.pieces[ii + 1 if ii + 1 < len(A.pieces) else 0], \
                B.pieces[jj + 1 if jj + 1 < len(B.pieces) else 0]
            out_a, out_b = end_a[2], end_b[2]
            if out_a == out_b:
                continue
            start_side = A.pieces[i][2]
            end_side = end_a[1]
            before = _key(in_a, start_side) < _key(in_b, start_side)
            after = _key(out_a, end_side) < _key(out_b, end_side)
            total += before == after
    return total


def _isolated_crossings(A: _Track, B: _Track) -> int:
    by_tri: dict[int, list] = {}
    for (t, a, b) in B.pieces:
        by_tri.setdefault(t, []).append((a, b))
    total = 0
    for (t, a, b) in A.pieces:
        for q in by_tri.get(t, ()):
            if len({a, b, q[0], q[1]}) == 4 and _chords_cross((a, b), q):
                total += 1
    return total


def track_of(x: VertexClass, tri: IdealTriangulation) -> tuple[_Track, _Track]:
    """The traced drawing of ``x`` in both orientations."""
    t = _Track.from_strands(strands_of(x, tri))
    return t, t.reversed(tri.iota)


def count_linked(a: tuple[_Track, _Track], b: tuple[_Track, _Track]) -> int:
    A, (B, B_rev) = a[0], b
    return _isolated_crossings(A, B) + _run_crossings(A, B) + _run_crossings(A, B_rev)


def linked_pair_count(x: VertexClass, y: VertexClass, tri: IdealTriangulation) -> int:
    """Crossings of the normal drawings of ``x`` and ``y`` that cannot be undone."""
    if x.key() == y.key():
        return 0
    special = _edge_shortcut(x, y)
    if special is not None:
        return special
    return count_linked(track_of(x, tri), track_of(y, tri))


def _edge_shortcut(x, y):
    """Exact value when one class is a base edge (its coordinate is the answer)."""
    for a, b in ((x, y), (y, x)):
        if isinstance(a, ArcClass) and a.base_edge is not None:
            v = b.coords[a.base_edge]
            return max(int(v), 0)
    return None


# -- exhaustive overlay ------------------------------------------------------

def overlay_oracle(x: VertexClass, y: VertexClass, tri: IdealTriangulation,
                   per_edge: int = STRANDS_PER_EDGE, budget: int = ORACLE_BUDGET) -> int:
    """Minimum crossing count over every relative order of the two strand families.

    Both classes are drawn as normal strands; on each edge the points of
    ``x`` and of ``y`` keep their own order but may interleave arbitrarily.
    Geodesic representatives are normal and in minimal position, so the
    minimum is the geometric intersection number.
    """
    if x.key() == y.key():
        return 0
    special = _edge_shortcut(x, y)
    if special is not None:
        return special
    sa, sb = strands_of(x, tri), strands_of(y, tri)
    E = tri.num_edges
    wa = [int(sa.w[tri.edges[e][0]]) for e in range(E)]
    wb = [int(sb.w[tri.edges[e][0]]) for e in range(E)]
    count = 1
    for e in range(E):
        if wa[e] + wb[e] > per_edge:
            raise ResourceLimit(f"edge {e} carries {wa[e] + wb[e]} strands (budget {per_edge})")
        count *= comb(wa[e] + wb[e], wa[e])
    if count > budget:
        raise ResourceLimit(f"{count} interleavings exceed the oracle budget {budget}")
    choices = [list(combinations(range(wa[e] + wb[e]), wa[e])) for e in range(E)]
    # two chords can only be reordered where they end on a common side, so each
    # pair's crossing is a function of at most two order bits; tabulate those
    # per edge set, then minimise the broadcast sum over every combination
    before = [_before_table(choices[e], wa[e], wb[e]) for e in range(E)]
    chords_b: dict[int, list] = {}
    for ch in sb.chords:
        chords_b.setdefault(ch[0], []).append(ch)
    tables: dict[tuple, np.ndarray] = {}
    for ca in sa.chords:
        for cb in chords_b.get(ca[0], ()):
            _add_pair(tri, sa, sb, wa, wb, ca, cb, before, choices, tables)
    total = np.zeros([len(ch) for ch in choices], dtype=np.int64)
    for es, table in tables.items():
        shape = [1] * E
        for e in es:
            shape[e] = len(choices[e])
        total += table.reshape(shape)
    return int(total.min())


def _before_table(choices, wa, wb) -> np.ndarray:
    """``out[k, i, j]``: on the first side of the edge, point ``i`` of the first
    family precedes point ``j`` of the second under interleaving ``k``."""
    tot = wa + wb
    out = np.empty((len(choices), wa, wb), dtype=bool)
    for k, slots in enumerate(choices):
        taken = set(slots)
        comp = [x for x in range(tot) if x not in taken]
        out[k] = np.less.outer(np.asarray(slots, dtype=np.int64), np.asarray(comp, dtype=np.int64))
    return out


def _add_pair(tri, sa, sb, wa, wb, ca, cb, before, choices, tables):
    ends_a, ends_b = ca[1:], cb[1:]
    shared = []                      # (end of a, end of b, side)
    for u in ends_a:
        if u < 0:
            continue
        su = sa.side_of_point(u)
        for v in ends_b:
            if v >= 0 and sb.side_of_point(v) == su:
                shared.append((u, v, su))
    bits = []                        # (edge, order bit per interleaving of that edge)
    for u, v, side in shared:
        e = int(tri.edge_of[side])
        i, j = u - int(sa.offset[side]), v - int(sb.offset[side])
        if side == tri.edges[e][0]:
            bits.append((e, before[e][:, i, j]))
        else:
            # the second side lists both families in reverse
            bits.append((e, ~before[e][:, wa[e] - 1 - i, wb[e] - 1 - j]))
    truth = np.empty((2,) * len(bits), dtype=np.int64)
    for combo in np.ndindex(*truth.shape):
        minor_a = {u: 0 if b else 1 for (u, _, _), b in zip(shared, combo)}
        minor_b = {v: 1 if b else 0 for (_, v, _), b in zip(shared, combo)}
        pa = tuple(_coord(sa, u, minor_a.get(u, 0)) for u in ends_a)
        pb = tuple(_coord(sb, v, minor_b.get(v, 0)) for v in ends_b)
        truth[combo] = len({*pa, *pb}) == 4 and _chords_cross(pa, pb)
    es = tuple(sorted({e for e, _ in bits}))
    if bits:
        axis = {e: k for k, e in enumerate(es)}
        idx = []
        for e, vec in bits:
            shape = [1] * len(es)
            shape[axis[e]] = len(choices[e])
            idx.append(vec.astype(np.int64).reshape(shape))
        value = np.broadcast_to(truth[tuple(idx)], [len(choices[e]) for e in es])
    else:
        value = truth[()]
    tables[es] = tables[es] + value if es in tables else np.array(value, dtype=np.int64)


def _coord(st: Strands, end: int, minor: int) -> tuple:
    """Place a chord end on the boundary circle of its triangle."""
    if end < 0:
        return (2 * ((-1 - end) % 3), 0)
    return (2 * (st.side_of_point(end) % 3) + 1, minor)


# -- anchored fast path and the public predicate ------------------------------

class IntersectionEngine:
    """Intersection numbers over one registry, memoised by class keys."""

    def __init__(self, registry):
        self.registry = registry
        self.base = registry.base
        self._memo: dict[tuple, tuple[int, str]] = {}
        self._lock = threading.Lock()

    def _anchor(self, a: ArcClass):
        anchor = a.anchor
        if anchor is None:
            known = self.registry.arcs.get(a.key())
            if known is None:
                raise RegistryMiss(f"arc {a.to_json()} is not in the registry")
            anchor = known.anchor
        if anchor[0] >= len(self.registry.nodes):
            raise RegistryMiss(f"unknown registry node {anchor[0]}")
        return anchor

    def fast_path(self, x: VertexClass, a: ArcClass) -> int:
        node, f = self._anchor(a)
        if isinstance(x, CurveClass):
            row = self.registry.curves_at(node, [x.coords])[0]
        else:
            row = self.registry.arcs_at(node, [x])[0]
        return max(int(row[f]), 0)

    def compute(self, x: VertexClass, y: VertexClass) -> tuple[int, str]:
        kx, ky = x.key(), y.key()
        if kx == ky:
            return 0, "identical"
        pair = (kx, ky) if kx <= ky else (ky, kx)
        hit = self._memo.get(pair)
        if hit is not None:
            return hit
        arc = y if isinstance(y, ArcClass) else x if isinstance(x, ArcClass) else None
        if arc is not None and (arc.anchor is not None or arc.key() in self.registry.arcs):
            res = (self.fast_path(x if arc is y else y, arc), "fast path")
        else:
            res = (linked_pair_count(x, y, self.base), "linked pairs")
        with self._lock:
            self._memo[pair] = res
        return res

    def intersection_number(self, x: VertexClass, y: VertexClass) -> int:
        return self.compute(x, y)[0]

    def disjoint(self, x: VertexClass, y: VertexClass) -> bool:
        return self.intersection_number(x, y) == 0

    def co_occur(self, a: ArcClass, b: ArcClass) -> bool:
        """True when some registry triangulation has both arcs as edges."""
        ka, kb = a.key(), b.key()
        return any(ka in n.arc_keys and kb in n.arc_keys for n in self.registry.nodes)

    # -- batched forms used when building balls --------------------------------
    def against_arcs(self, curves: list[CurveClass], arcs: list[ArcClass],
                     targets: list[ArcClass]) -> tuple[np.ndarray, np.ndarray]:
        """Intersection numbers of every curve and every arc with each target arc.

        The registry's flip paths form a tree, so one depth-first walk carries
        all classes to every anchor, crossing each tree edge once.
        """
        reg = self.registry
        E = self.base.num_edges
        anchors: dict[int, list[tuple[int, int]]] = {}
        for col, a in enumerate(targets):
            node, f = self._anchor(a)
            anchors.setdefault(node, []).append((col, f))
        needed = set()
        for node in anchors:
            path = reg.nodes[node].path
            cur = 0
            needed.add(0)
            for k in range(len(path)):
                cur = reg.child(cur, path[k])
                needed.add(cur)
        cx = np.array([c.coords for c in curves], dtype=np.int64).reshape(-1, E)
        states = [reg.arc_state(a) for a in arcs]
        ax = np.array([s[0] for s in states], dtype=np.int64).reshape(-1, E)
        ae = np.array([s[1] for s in states], dtype=np.int64).reshape(-1, 2)
        out_c = np.zeros((len(curves), len(targets)), dtype=np.int64)
        out_a = np.zeros((len(arcs), len(targets)), dtype=np.int64)
        from . import kernels

        stack = [(0, cx, ax, ae)]
        while stack:
            node, cx_n, ax_n, ae_n = stack.pop()
            for col, f in anchors.get(node, ()):
                out_c[:, col] = np.maximum(cx_n[:, f], 0)
                out_a[:, col] = np.maximum(ax_n[:, f], 0)
            for e, child in reg.children(node):
                if child not in needed:
                    continue
                mv = reg.nodes[child].moves[-1]
                c2 = kernels.transport_rows(cx_n.copy(), [mv[2:]]) if len(cx_n) else cx_n
                if len(ax_n):
                    a2, e2 = kernels.flip_arcs(ax_n, ae_n, [mv])
                else:
                    a2, e2 = ax_n, ae_n
                stack.append((child, c2, a2, e2))
        return out_c, out_a


def intersection_number(x: VertexClass, y: VertexClass, registry) -> int:
    return IntersectionEngine(registry).intersection_number(x, y)


def disjoint(x: VertexClass, y: VertexClass, registry) -> bool:
    return intersection_number(x, y, registry) == 0
