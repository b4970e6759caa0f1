"""Curve paths from arc-and-curve paths, graph distances, and the two small models.

The rewriting scans a path left to right keeping one invariant: the last
vertex written is a curve disjoint from the next unread vertex.  Each arc is
replaced by one curve, or by two when no single candidate fits, so the output
is at most twice as long as the input.  Candidates are boundary curves of
regular neighbourhoods, of the arc alone or of the arc together with the arc
after it; every choice is confirmed with intersection numbers.
"""
from __future__ import annotations

import logging
import math
import random
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import networkx as nx

from .boundary import neighborhood_boundary, union_boundary
from .complex import SimplicialBall, build_ball
from .coords import ArcClass, CurveClass, VertexClass, class_from_json
from .errors import InvalidPath, NoCandidate, Unreachable, UnsupportedSurface
from .intersect import IntersectionEngine
from .registry import FlipRegistry, flip_ball
from .surface import SpecialCase, Surface
from .triangulation import base_triangulation

log = logging.getLogger(__name__)


# -- slopes and the Farey graph -------------------------------------------------

@dataclass(frozen=True, order=True)
class FareySlope:
    """The slope p/q, with q >= 0 and 1/0 standing for infinity."""

    p: int
    q: int

    def __post_init__(self):
        p, q = self.p, self.q
        if p == 0 and q == 0:
            raise ValueError("0/0 is not a slope")
        g = math.gcd(p, q)
        p, q = p // g, q // g
        if q < 0 or (q == 0 and p < 0):
            p, q = -p, -q
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @classmethod
    def parse(cls, text: str) -> "FareySlope":
        if text in ("inf", "oo", "1/0"):
            return cls(1, 0)
        f = Fraction(text)
        return cls(f.numerator, f.denominator)

    @property
    def height(self) -> int:
        return max(abs(self.p), self.q)

    def det(self, other: "FareySlope") -> int:
        return abs(self.p * other.q - self.q * other.p)

    def __str__(self):
        return f"{self.p}/{self.q}"


def _ladder(x: FareySlope) -> list[FareySlope]:
    """Slopes met by the hyperbolic geodesic from infinity to ``x``.

    Every Farey edge crossed by that geodesic separates its two ends, so each
    path between them passes through these vertices and a shortest path never
    has to leave them.
    """
    out = [FareySlope(1, 0)]
    if x.q == 0:
        return out
    lo = math.floor(Fraction(x.p, x.q))
    left, right = (lo, 1), (lo + 1, 1)
    out += [FareySlope(*left), FareySlope(*right)]
    while True:
        m = (left[0] + right[0], left[1] + right[1])
        if (m[0], m[1]) == (x.p, x.q) or left == (x.p, x.q) or right == (x.p, x.q):
            break
        out.append(FareySlope(*m))
        if Fraction(x.p, x.q) < Fraction(*m):
            right = m
        else:
            left = m
    out.append(x)
    return sorted(set(out))


def farey_distance(s: FareySlope, t: FareySlope) -> int:
    """Distance in the Farey graph, where p/q ~ r/s iff |ps - qr| = 1."""
    if s == t:
        return 0
    # move s to infinity with a determinant-one matrix
    a, b = s.p, s.q
    g, c, d = _egcd(b, a)          # c*b + d*a = 1
    # [[d, c], [-b, a]] sends (a, b) to (1, 0)
    img = FareySlope(d * t.p + c * t.q, -b * t.p + a * t.q)
    verts = _ladder(img)
    start, goal = FareySlope(1, 0), img
    seen = {start: 0}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for w in verts:
            if w not in seen and u.det(w) == 1:
                seen[w] = seen[u] + 1
                if w == goal:
                    return seen[w]
                queue.append(w)
    raise AssertionError("the Farey graph is connected")


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (a, 1, 0) if a >= 0 else (-a, -1, 0)
    g, x, y = _egcd(b, a % b)
    return g, y, x - (a // b) * y


def slopes_up_to(bound: int) -> list[FareySlope]:
    """Every slope with |p| and q at most ``bound``, sorted."""
    out = {FareySlope(1, 0)}
    for q in range(1, bound + 1):
        for p in range(-bound, bound + 1):
            if math.gcd(p, q) == 1:
                out.add(FareySlope(p, q))
    return sorted(out)


# -- the once-punctured torus ---------------------------------------------------

# slopes of the three base edges; any choice works, the group GL(2, Z)
# permutes them and preserves |det|
_TORUS_EDGES = (FareySlope(1, 0), FareySlope(0, 1), FareySlope(1, 1))


def torus_curve(s: FareySlope) -> CurveClass:
    return CurveClass(tuple(s.det(e) for e in _TORUS_EDGES))


def torus_arc(s: FareySlope) -> ArcClass:
    return ArcClass((1, 1), tuple(s.det(e) - 1 for e in _TORUS_EDGES))


def torus_slope(v: VertexClass) -> FareySlope:
    """Inverse of ``torus_curve`` / ``torus_arc``."""
    x = [c + 1 for c in v.coords] if isinstance(v, ArcClass) else list(v.coords)
    q, p, r = x                   # |q|, |p|, |p - q|
    sign = 1 if abs(p - q) == r else -1
    return FareySlope(sign * p, q)


def ac_model_11(bound: int) -> SimplicialBall:
    """Arc-and-curve complex of the once-punctured torus on slopes of height <= bound.

    A curve is disjoint from exactly one arc, the one of the same slope; two
    arcs are disjoint iff their slopes are Farey neighbours; curves always
    meet.  The slopes of height at most ``bound`` span a triangulated polygon
    in the Farey tessellation, which makes the model convex: its graph
    distances are the true ones.
    """
    if bound < 1:
        raise ValueError("bound must be positive")
    slopes = slopes_up_to(bound)
    m = len(slopes)
    vertices: list[VertexClass] = [torus_arc(s) for s in slopes] + [torus_curve(s) for s in slopes]
    adj = [set() for _ in vertices]
    for i in range(m):
        adj[i].add(m + i)
        adj[m + i].add(i)
        for j in range(i + 1, m):
            if slopes[i].det(slopes[j]) == 1:
                adj[i].add(j)
                adj[j].add(i)
    complete = [False] * m + [True] * m
    labels = {i: str(slopes[i % m]) for i in range(2 * m)}
    return SimplicialBall(Surface(1, 1), "AC", vertices, adj,
                          {"bound": bound, "convex": True}, complete, labels=labels)


# -- the four-punctured sphere -------------------------------------------------

def sphere_slopes(curves: list[CurveClass], engine: IntersectionEngine) -> dict[tuple, FareySlope]:
    """Slopes of curves on the four-punctured sphere, read from intersections.

    Two curves of slopes s and t meet in 2 |det(s, t)| points.  Three curves
    pairwise meeting twice are given slopes 0, infinity and 1; any other
    curve is then pinned down by its three intersection numbers.
    """
    if not curves:
        return {}
    ref0 = curves[0]
    ref1 = next(c for c in curves if engine.intersection_number(ref0, c) == 2)
    ref2 = next(c for c in curves
                if engine.intersection_number(ref0, c) == 2 and engine.intersection_number(ref1, c) == 2)
    out = {}
    for c in curves:
        p = engine.intersection_number(c, ref0) // 2    # |det with 0/1| = |p|
        q = engine.intersection_number(c, ref1) // 2    # |det with 1/0| = |q|
        r = engine.intersection_number(c, ref2) // 2    # |p - q|
        sign = 1 if abs(p - q) == r else -1
        out[c.key()] = FareySlope(sign * p, q)
    return out


# -- paths ------------------------------------------------------------------------

@dataclass
class Path:
    vertices: list
    surface: Surface
    kind: str = "AC"

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    def adjacency_value(self) -> int:
        """Intersection number of consecutive vertices."""
        if self.kind == "C" and self.surface.special_case is SpecialCase.FAREY11:
            return 1
        if self.kind == "C" and self.surface.special_case is SpecialCase.SPHERE04:
            return 2
        return 0

    def validate(self, engine: IntersectionEngine) -> None:
        if not self.vertices:
            raise InvalidPath("empty path")
        want = self.adjacency_value()
        for k, (u, v) in enumerate(zip(self.vertices, self.vertices[1:])):
            if u.key() == v.key():
                raise InvalidPath(f"vertices {k} and {k + 1} coincide")
            if self.kind == "C" and not isinstance(v, CurveClass):
                raise InvalidPath(f"vertex {k + 1} of a curve path is an arc")
            i = engine.intersection_number(u, v)
            if i != want:
                raise InvalidPath(f"vertices {k} and {k + 1} meet {i} times, expected {want}")
        if self.kind == "C" and not isinstance(self.vertices[0], CurveClass):
            raise InvalidPath("vertex 0 of a curve path is an arc")

    def to_json(self) -> dict:
        return {"surface": [self.surface.g, self.surface.n], "kind": self.kind,
                "vertices": [v.to_json() for v in self.vertices]}

    @classmethod
    def from_json(cls, data) -> "Path":
        try:
            g, n = data["surface"]
            verts = [class_from_json(v) for v in data["vertices"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidPath(f"malformed path: {exc}") from exc
        return cls(verts, Surface(g, n), data.get("kind", "AC"))


def _curves_of(arc_sets) -> list[CurveClass]:
    out = []
    for group in arc_sets:
        for c in group:
            if c not in out:
                out.append(c)
    return out


def rewrite_to_curve_path(p: Path, engine: IntersectionEngine | None = None) -> Path:
    """A curve path with the same ends and at most twice the length of ``p``."""
    s = p.surface
    case = s.special_case
    if case not in (SpecialCase.GENERIC, SpecialCase.SMALL_OTHER):
        raise UnsupportedSurface(f"path rewriting needs 2g+n >= 4, got S_({s.g},{s.n})")
    if case is SpecialCase.SMALL_OTHER:
        log.debug("S_(1,2) is below the range where every arc has a usable boundary curve")
    if engine is None:
        engine = IntersectionEngine(FlipRegistry(base_triangulation(s)))
    for v in p.vertices:
        v.validate(engine.base)
    p.validate(engine)
    verts = p.vertices
    if not isinstance(verts[0], CurveClass) or not isinstance(verts[-1], CurveClass):
        raise InvalidPath("both ends of the path must be curves")
    base = engine.base
    meets = engine.intersection_number
    out: list[CurveClass] = [verts[0]]

    def push(c):
        if c.key() != out[-1].key():
            out.append(c)

    k = 1
    while k < len(verts):
        v = verts[k]
        x = out[-1]
        if isinstance(v, CurveClass):
            push(v)
            k += 1
            continue
        nxt = verts[k + 1]
        if isinstance(nxt, CurveClass):
            # x a z  ->  x w z
            cands = neighborhood_boundary(v, base)
            w = next((c for c in cands if meets(c, x) == 0 and meets(c, nxt) == 0), None)
            if w is None:
                raise NoCandidate(f"no boundary curve of arc {k} misses both neighbours")
            push(w)
            push(nxt)
            k += 2
            continue
        # two arcs in a row: x a b  ->  x z b  or  x z w b
        cands = _curves_of([neighborhood_boundary(v, base), union_boundary(v, nxt, base)])
        z = next((c for c in cands if meets(c, x) == 0 and meets(c, nxt) == 0), None)
        if z is not None:
            push(z)
        else:
            pair = next(((z, w) for z in cands if meets(z, x) == 0
                         for w in cands if w.key() != z.key() and meets(z, w) == 0
                         and meets(w, nxt) == 0), None)
            if pair is None:
                raise NoCandidate(f"no curves replace arcs {k} and {k + 1}")
            push(pair[0])
            push(pair[1])
        k += 1
    q = Path(out, s, "C")
    q.validate(engine)
    if q.length > 2 * p.length:
        raise AssertionError("rewritten path is more than twice as long")
    return q


def random_ac_path(b: SimplicialBall, length: int, rng: random.Random,
                   tries: int = 100) -> list[int] | None:
    """Vertex ids of a random walk of ``length`` steps from a curve to a curve."""
    curves = [i for i, v in enumerate(b.vertices) if isinstance(v, CurveClass)]
    if not curves:
        return None
    for _ in range(tries):
        walk = [rng.choice(curves)]
        for step in range(length):
            nbrs = sorted(b.adj[walk[-1]])
            if step == length - 1:
                nbrs = [j for j in nbrs if isinstance(b.vertices[j], CurveClass)]
            if not nbrs:
                break
            walk.append(rng.choice(nbrs))
        else:
            return walk
    return None


# -- distances ------------------------------------------------------------------------

def bfs_distance(b: SimplicialBall, x, y) -> tuple[int, bool]:
    """Graph distance in the ball, and whether it is the distance in the full complex.

    Let ``m`` be the largest radius such that every vertex closer than ``m``
    to ``x`` is complete, and ``m'`` the same for ``y``.  Then the ball holds
    every vertex within ``m`` of ``x`` and within ``m'`` of ``y``, with all their
    edges, so a path of length ``k <= m + m' + 1`` in the full complex lies in
    the ball.  The ball distance ``d`` is therefore exact when
    ``d <= m + m' + 2``, and always when the ball is convex.
    """
    i, j = b.index_of(x), b.index_of(y)
    g = b.graph()
    dist_i = nx.single_source_shortest_path_length(g, i)
    if j not in dist_i:
        raise Unreachable(f"no path from vertex {i} to vertex {j} in the ball")
    d = dist_i[j]
    if b.bounds.get("convex"):
        return d, True
    dist_j = nx.single_source_shortest_path_length(g, j)
    return d, d <= _complete_radius(b, dist_i, d) + _complete_radius(b, dist_j, d) + 2


def _complete_radius(b: SimplicialBall, dist: dict, cap: int) -> int:
    worst = cap
    for k, dk in dist.items():
        if not b.complete[k]:
            worst = min(worst, dk)
    return worst


def geodesic(b: SimplicialBall, x, y) -> list[int]:
    return nx.shortest_path(b.graph(), b.index_of(x), b.index_of(y))


# -- inequality checks ------------------------------------------------------------

@dataclass
class Report:
    surface: Surface
    case: str
    samples: list = field(default_factory=list)

    @property
    def passes(self) -> int:
        return sum(1 for r in self.samples if r["status"] == "pass")

    @property
    def skips(self) -> int:
        return sum(1 for r in self.samples if r["status"] == "skip")

    @property
    def failures(self) -> list:
        return [r for r in self.samples if r["status"] == "fail"]

    def to_json(self) -> dict:
        return {"surface": [self.surface.g, self.surface.n], "case": self.case,
                "samples": len(self.samples), "passes": self.passes, "skips": self.skips,
                "failures": self.failures, "results": self.samples}


def verify_inequalities(s: Surface, samples: int = 50, radius: int = 4, weight: int = 12,
                        bound: int = 8, seed: int = 0, jobs: int = 1) -> Report:
    """Sample curve pairs and compare their distances in C(S) and AC(S).

    Bounds checked: 1/2 d_C <= d_AC <= d_C in general; d_C <= d_AC <= d_C + 2
    on the once-punctured torus (where d_C uses curves meeting once); and
    1/2 d_C <= d_AC <= d_C + 2 on the four-punctured sphere (curves meeting
    twice).  Pairs whose distances are not certified exact are skipped.
    """
    case = s.special_case
    if case is SpecialCase.FAREY11:
        rows = _verify_torus(samples, bound, seed)
    elif case in (SpecialCase.SPHERE04, SpecialCase.GENERIC, SpecialCase.SMALL_OTHER):
        rows = _verify_ball(s, samples, radius, weight, seed, jobs)
    else:
        raise UnsupportedSurface(f"no distance comparison on S_({s.g},{s.n})")
    return Report(s, case.value, rows)


def _verify_torus(samples: int, bound: int, seed: int) -> list[dict]:
    rng = random.Random(seed)
    model = ac_model_11(bound)
    slopes = slopes_up_to(bound)
    rows = []
    for k in range(samples):
        s, t = rng.choice(slopes), rng.choice(slopes)
        dc = farey_distance(s, t)
        dac, exact = bfs_distance(model, torus_curve(s), torus_curve(t))
        ok = dc <= dac <= dc + 2 and (s == t or dac == dc + 2)
        rows.append({"id": k, "x": str(s), "y": str(t), "d_C": dc, "d_AC": dac, "exact": exact,
                     "status": "pass" if ok else "fail"})
    return rows


def _verify_ball(s: Surface, samples: int, radius: int, weight: int, seed: int,
                 jobs: int) -> list[dict]:
    rng = random.Random(seed)
    reg = flip_ball(base_triangulation(s), radius)
    # extra boundary curves are incomplete and would only shrink the certified radius
    ac = build_ball(s, "AC", radius, weight, jobs=jobs, registry=reg, arc_boundaries=False)
    engine = IntersectionEngine(reg)
    curves = [v for v in ac.vertices if isinstance(v, CurveClass)]
    pairs = [(rng.choice(curves), rng.choice(curves)) for _ in range(samples)] if curves else []
    sphere = s.special_case is SpecialCase.SPHERE04
    report_only = s.special_case is SpecialCase.SMALL_OTHER
    if sphere:
        slopes = sphere_slopes(curves, engine)
    else:
        cb = build_ball(s, "C", radius, weight, jobs=jobs, registry=reg)

    def one(k):
        x, y = pairs[k]
        row = {"id": k, "x": list(x.coords), "y": list(y.coords)}
        try:
            dac, ex_ac = bfs_distance(ac, x, y)
            if sphere:
                dc, ex_c = farey_distance(slopes[x.key()], slopes[y.key()]), True
            else:
                dc, ex_c = bfs_distance(cb, x, y)
        except Unreachable:
            row["status"] = "skip"
            row["reason"] = "unreachable in the ball"
            return row
        row.update(d_C=dc, d_AC=dac, exact=ex_ac and ex_c)
        if not row["exact"]:
            row["status"] = "skip"
            return row
        if sphere:
            ok = dc <= 2 * dac and dac <= dc + 2
        else:
            ok = dc <= 2 * dac and dac <= dc
            path = Path([ac.vertices[i] for i in geodesic(ac, x, y)], s, "AC")
            try:
                out = rewrite_to_curve_path(path, engine)
                row["rewritten_length"] = out.length
                ok = ok and out.length <= 2 * path.length and dc <= out.length
            except NoCandidate as exc:
                row["no_candidate"] = str(exc)
                ok = False
        if report_only:
            row["status"] = "pass"
            row["observed"] = ok
        else:
            row["status"] = "pass" if ok else "fail"
        return row

    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        return list(pool.map(one, range(len(pairs))))
