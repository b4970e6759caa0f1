"""Arcs and curves on punctured surfaces: flip graphs, normal coordinates,
finite pieces of the arc, curve and arc-and-curve complexes."""

__version__ = "0.1.0"

from .classify import TypeLabel, classify_combinatorial, classify_topological  # noqa: E402
from .complex import SimplicialBall, build_ball, maximal_cliques  # noqa: E402
from .coords import ArcClass, CurveClass  # noqa: E402
from .errors import ArcCurveError  # noqa: E402
from .intersect import IntersectionEngine, intersection_number  # noqa: E402
from .quasi import FareySlope, Path, farey_distance, rewrite_to_curve_path  # noqa: E402
from .registry import FlipRegistry, flip_ball  # noqa: E402
from .surface import Surface  # noqa: E402
from .triangulation import IdealTriangulation, base_triangulation  # noqa: E402

__all__ = [
    "ArcClass", "ArcCurveError", "CurveClass", "FareySlope", "FlipRegistry", "IdealTriangulation",
    "IntersectionEngine", "Path", "SimplicialBall", "Surface", "TypeLabel", "base_triangulation",
    "build_ball", "classify_combinatorial", "classify_topological", "farey_distance",
    "flip_ball", "intersection_number", "maximal_cliques", "rewrite_to_curve_path",
]
