"""Surface parameters and the small-case dispatch used everywhere else."""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import UnsupportedSurface


class SpecialCase(str, enum.Enum):
    EMPTY = "EmptyComplex"
    SINGLE_POINT = "SinglePoint"
    FINITE_S03 = "FiniteS03"
    FAREY11 = "Farey11"
    SPHERE04 = "Sphere04"
    GENERIC = "Generic"
    SMALL_OTHER = "SmallOther"


@dataclass(frozen=True, order=True)
class Surface:
    """Connected orientable surface of genus ``genus`` with ``punctures`` punctures."""

    genus: int
    punctures: int

    def __post_init__(self):
        if self.genus < 0 or self.punctures < 0:
            raise UnsupportedSurface(f"negative surface parameters ({self.genus}, {self.punctures})")

    @property
    def g(self) -> int:
        return self.genus

    @property
    def n(self) -> int:
        return self.punctures

    @property
    def chi(self) -> int:
        return euler_characteristic(self)

    @property
    def num_edges(self) -> int:
        """Edges of an ideal triangulation, ``-3 chi``."""
        return 6 * self.g + 3 * self.n - 6

    @property
    def num_triangles(self) -> int:
        return 4 * self.g + 2 * self.n - 4

    @property
    def max_simplex_size(self) -> int:
        return self.num_edges

    @property
    def min_maximal_simplex_size(self) -> int:
        return 3 * self.g + 2 * self.n - 3

    @property
    def max_curves(self) -> int:
        return max(3 * self.g + self.n - 3, 0)

    @property
    def is_triangulable(self) -> bool:
        return self.n >= 1 and self.chi < 0

    def require_triangulable(self) -> None:
        if not self.is_triangulable:
            raise UnsupportedSurface(
                f"S_({self.g},{self.n}) has no ideal triangulation (need n >= 1 and chi < 0)"
            )

    @property
    def special_case(self) -> SpecialCase:
        return special_case(self)

    def info(self) -> dict:
        """Summary used by the ``surface-info`` command."""
        out = {
            "genus": self.g,
            "punctures": self.n,
            "euler_characteristic": self.chi,
            "special_case": self.special_case.value,
            "triangulable": self.is_triangulable,
        }
        if self.is_triangulable:
            out.update(
                {
                    "triangulation_edges": self.num_edges,
                    "triangulation_triangles": self.num_triangles,
                    "max_simplex_dimension": self.num_edges - 1,
                    "min_maximal_simplex_dimension": self.min_maximal_simplex_size - 1,
                    "max_curves_in_simplex": self.max_curves,
                }
            )
        return out


def euler_characteristic(s: Surface) -> int:
    return 2 - 2 * s.g - s.n


def special_case(s: Surface) -> SpecialCase:
    g, n = s.g, s.n
    if (g, n) == (0, 1):
        return SpecialCase.EMPTY
    if (g, n) == (0, 2):
        return SpecialCase.SINGLE_POINT
    if (g, n) == (0, 3):
        return SpecialCase.FINITE_S03
    if (g, n) == (1, 1):
        return SpecialCase.FAREY11
    if (g, n) == (0, 4):
        return SpecialCase.SPHERE04
    if 2 * g + n >= 5:
        return SpecialCase.GENERIC
    # (1, 2) and the closed / puncture-free small cases
    return SpecialCase.SMALL_OTHER
