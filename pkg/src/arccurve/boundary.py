"""Boundary curves of regular neighbourhoods of arcs.

The arcs are first made edges of one triangulation by flips.  There the
boundary is a walk around the end punctures, read off exactly (see
``normal.edge_neighbourhood_boundary``), and is carried back to the base.
"""
from __future__ import annotations

import numpy as np

from . import kernels
from .coords import ArcClass, CurveClass
from .errors import InvalidCoordinates, InvalidPath
from .normal import corner_counts, edge_neighbourhood_boundary, trace_multicurve
from .triangulation import IdealTriangulation


def _essential_components(base: IdealTriangulation, vec) -> list[CurveClass]:
    vec = np.asarray(vec, dtype=np.int64)
    if not vec.any():
        return []
    corner_counts(base, vec)
    links = {tuple(base.link_vector(p)) for p in range(1, base.num_punctures + 1)}
    out = []
    for comp in trace_multicurve(base, vec):
        key = tuple(int(v) for v in comp)
        if key not in links and CurveClass(key) not in out:
            out.append(CurveClass(key))
    return sorted(out, key=lambda c: (c.weight, c.coords))


def as_edges(base: IdealTriangulation, arcs) -> tuple[IdealTriangulation, list, list[int]]:
    """Flip from ``base`` until each of the pairwise disjoint ``arcs`` is an edge.

    Arcs are handled in turn.  While the current one is not an edge, some
    edge it crosses can be flipped to lower its weight (the first edge it
    crosses always can); edges already placed are never crossed, so they stay.
    Returns the triangulation, the flip records and the edge of each arc.
    """
    tri, moves, placed = base, [], []
    for a in arcs:
        x, ends = a.state(base)
        xs = np.array([x], dtype=np.int64)
        sts = np.array([ends], dtype=np.int64)
        if moves:
            xs, sts = kernels.flip_arcs(xs, sts, moves)
        if any(xs[0, e] != 0 for e in placed):
            raise InvalidPath("the arcs are not disjoint")
        while -1 not in xs[0]:
            best = None
            for e in tri.flippable_edges():
                if xs[0, e] > 0:
                    mv = tri.move(e)
                    fx, fs = kernels.flip_arcs(xs.copy(), sts.copy(), [mv])
                    w = int(np.maximum(fx[0], 0).sum())
                    if best is None or w < best[0]:
                        best = (w, e, mv, fx, fs)
            if best is None or best[0] >= int(np.maximum(xs[0], 0).sum()):
                raise InvalidCoordinates("no flip shortens the arc")
            _, e, mv, xs, sts = best
            tri = tri.flip(e)
            moves.append(mv)
        placed.append(int(np.flatnonzero(xs[0] == -1)[0]))
    return tri, moves, placed


def _boundary(base: IdealTriangulation, arcs) -> list[CurveClass]:
    tri, moves, edges = as_edges(base, arcs)
    vecs = edge_neighbourhood_boundary(tri, edges)
    if not vecs:
        return []
    back = kernels.transport_rows(np.array(vecs), [m[2:] for m in reversed(moves)])
    return _essential_components(base, back.sum(axis=0))


def neighborhood_boundary(a: ArcClass, base: IdealTriangulation) -> list[CurveClass]:
    """Essential curves bounding a regular neighbourhood of ``a`` and its ends."""
    return _boundary(base, [a])


def union_boundary(a: ArcClass, b: ArcClass, base: IdealTriangulation) -> list[CurveClass]:
    """Essential boundary curves of a neighbourhood of two disjoint arcs and their ends."""
    return _boundary(base, [a, b])
