"""Triangle value type with lazily cached metric quantities.

Vertex order is meaningful everywhere in this package: side i is the side
opposite vertex i, so sides = (|v2 v3|, |v3 v1|, |v1 v2|).
"""

from __future__ import annotations

import math

from .geom import GeometryError, Point2

_DEGENERATE_REL = 1e-12


class DegenerateTriangleError(GeometryError):
    """The triangle has (numerically) collinear vertices."""


class Triangle:
    __slots__ = ("v1", "v2", "v3", "_sides", "_signed_area", "_angles")

    def __init__(self, v1: Point2, v2: Point2, v3: Point2) -> None:
        self.v1 = Point2(*v1)
        self.v2 = Point2(*v2)
        self.v3 = Point2(*v3)
        self._sides: tuple[float, float, float] | None = None
        self._angles: tuple[float, float, float] | None = None
        ux, uy = v2[0] - v1[0], v2[1] - v1[1]
        wx, wy = v3[0] - v1[0], v3[1] - v1[1]
        self._signed_area = 0.5 * (ux * wy - uy * wx)
        if not math.isfinite(self._signed_area):
            raise GeometryError("triangle vertices must be finite")

    def __repr__(self) -> str:
        return f"Triangle({self.v1}, {self.v2}, {self.v3})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Triangle):
            return NotImplemented
        return (self.v1, self.v2, self.v3) == (other.v1, other.v2, other.v3)

    def __hash__(self) -> int:
        return hash((self.v1, self.v2, self.v3))

    @property
    def vertices(self) -> tuple[Point2, Point2, Point2]:
        return (self.v1, self.v2, self.v3)

    @property
    def sides(self) -> tuple[float, float, float]:
        if self._sides is None:
            self._sides = (
                math.hypot(self.v3[0] - self.v2[0], self.v3[1] - self.v2[1]),
                math.hypot(self.v1[0] - self.v3[0], self.v1[1] - self.v3[1]),
                math.hypot(self.v2[0] - self.v1[0], self.v2[1] - self.v1[1]),
            )
        return self._sides

    @property
    def signed_area(self) -> float:
        return self._signed_area

    @property
    def area(self) -> float:
        return abs(self._signed_area)

    @property
    def perimeter(self) -> float:
        return sum(self.sides)

    def is_degenerate(self, scale: float | None = None) -> bool:
        ref = scale if scale is not None else max(self.sides)
        return self.area < _DEGENERATE_REL * ref * ref

    def require_nondegenerate(self, scale: float | None = None) -> None:
        if self.is_degenerate(scale):
            raise DegenerateTriangleError(f"triangle is degenerate: {self!r}")

    @property
    def angles(self) -> tuple[float, float, float]:
        """Internal angles, angle i at vertex i (law of cosines)."""
        if self._angles is None:
            s1, s2, s3 = self.sides
            if min(s1, s2, s3) == 0.0:
                raise DegenerateTriangleError("zero-length side")
            c1 = (s2 * s2 + s3 * s3 - s1 * s1) / (2.0 * s2 * s3)
            c2 = (s3 * s3 + s1 * s1 - s2 * s2) / (2.0 * s3 * s1)
            c3 = (s1 * s1 + s2 * s2 - s3 * s3) / (2.0 * s1 * s2)
            clamp = lambda c: min(1.0, max(-1.0, c))
            self._angles = (math.acos(clamp(c1)), math.acos(clamp(c2)), math.acos(clamp(c3)))
        return self._angles

    @property
    def inradius(self) -> float:
        return 2.0 * self.area / self.perimeter

    @property
    def circumradius(self) -> float:
        s1, s2, s3 = self.sides
        a4 = 4.0 * self.area
        if a4 == 0.0:
            raise DegenerateTriangleError("circumradius of a flat triangle")
        return s1 * s2 * s3 / a4

    @property
    def cot_omega(self) -> float:
        """Cotangent of the Brocard angle, (s1^2+s2^2+s3^2) / (4 area)."""
        s1, s2, s3 = self.sides
        a4 = 4.0 * self.area
        if a4 == 0.0:
            raise DegenerateTriangleError("Brocard angle of a flat triangle")
        return (s1 * s1 + s2 * s2 + s3 * s3) / a4
