"""Planar primitives: points, lines, axis-parallel ellipses, general conics.

Everything here is immutable and purely functional.  Angles are radians,
ellipse boundary points are parametrized as center + (a cos t, b sin t).
The conic fitter works on a centered/unit-RMS-scaled copy of the input so
its residual is comparable across clouds of any size or position.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Sequence

import numpy as np

TWO_PI = 2.0 * math.pi

# Classification thresholds (see classify_curve).
EPS_POINT = 1e-6
EPS_LINE = 1e-10
EPS_CONIC = 1e-6
EPS_PARABOLA = 1e-7

_BOUNDARY_BAND = 1e-12


class GeometryError(ValueError):
    """A geometric operation was applied outside its domain."""


class Point2(NamedTuple):
    x: float
    y: float


class Tangent(NamedTuple):
    line: "Line"
    touch: Point2


class ConicCoeffs(NamedTuple):
    """Coefficients of A x^2 + B xy + C y^2 + D x + E y + F = 0."""

    A: float
    B: float
    C: float
    D: float
    E: float
    F: float

    def evaluate(self, p: Point2) -> float:
        x, y = p
        return (self.A * x * x + self.B * x * y + self.C * y * y
                + self.D * x + self.E * y + self.F)

    def discriminant(self) -> float:
        return self.B * self.B - 4.0 * self.A * self.C

    def canonical(self) -> "ConicCoeffs":
        """Unit-norm representative with a deterministic sign.

        The coefficient vector is only defined up to scale; this picks the
        same representative fit_conic returns, so fits and analytically
        built conics compare componentwise.  The sign is anchored on the
        quadratic trace A + C (positive for every real ellipse); when the
        trace vanishes (rectangular hyperbolas, line pairs) it falls back
        to the first coefficient of significant magnitude.  Anchoring on
        the largest coefficient alone would flip on rounding noise
        whenever two magnitudes tie, which happens for every centered
        ellipse with a unit semi-axis.
        """
        n = math.sqrt(sum(c * c for c in self))
        if n == 0.0:
            raise GeometryError("all conic coefficients are zero")
        vals = [c / n for c in self]
        trace = vals[0] + vals[2]
        if abs(trace) > 1e-6:
            anchor = trace
        else:
            top = max(abs(c) for c in vals)
            anchor = next(c for c in vals if abs(c) >= 0.5 * top)
        if anchor < 0.0:
            vals = [-c for c in vals]
        return ConicCoeffs(*vals)


class CurveClass(Enum):
    ELLIPSE = "E"
    HYPERBOLA = "H"
    PARABOLA = "P"
    LINE = "L"
    POINT = "*"
    OTHER = "X"

    @property
    def code(self) -> str:
        return self.value


@dataclass(frozen=True)
class Ellipse:
    """Axis-parallel ellipse: semi-axis a along x, b along y."""

    center: Point2
    a: float
    b: float

    def __post_init__(self) -> None:
        ok = (math.isfinite(self.a) and math.isfinite(self.b)
              and self.a > 0.0 and self.b > 0.0)
        if not ok:
            raise GeometryError(f"semi-axes must be positive finite, got a={self.a}, b={self.b}")

    def implicit(self, p: Point2) -> float:
        """(x/a)^2 + (y/b)^2 - 1 in center-relative coordinates."""
        u = (p[0] - self.center[0]) / self.a
        v = (p[1] - self.center[1]) / self.b
        return u * u + v * v - 1.0

    def coefficients(self) -> ConicCoeffs:
        cx, cy = self.center
        A = 1.0 / (self.a * self.a)
        C = 1.0 / (self.b * self.b)
        return ConicCoeffs(A, 0.0, C, -2.0 * A * cx, -2.0 * C * cy,
                           A * cx * cx + C * cy * cy - 1.0)


@dataclass(frozen=True)
class Line:
    """Infinite line through p with unit direction d."""

    p: Point2
    d: Point2

    def __post_init__(self) -> None:
        n = math.hypot(self.d[0], self.d[1])
        if not (n > 0.0 and math.isfinite(n)):
            raise GeometryError("line direction must be a nonzero finite vector")
        if abs(n - 1.0) > 1e-12:
            object.__setattr__(self, "d", Point2(self.d[0] / n, self.d[1] / n))

    def at(self, s: float) -> Point2:
        return Point2(self.p[0] + s * self.d[0], self.p[1] + s * self.d[1])


def dist(p: Point2, q: Point2) -> float:
    return math.hypot(p[0] - q[0], p[1] - q[1])


def midpoint(p: Point2, q: Point2) -> Point2:
    return Point2(0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1]))


def unit(dx: float, dy: float) -> Point2:
    n = math.hypot(dx, dy)
    if n == 0.0 or not math.isfinite(n):
        raise GeometryError("cannot normalize a zero or non-finite vector")
    return Point2(dx / n, dy / n)


def cross2(ux: float, uy: float, vx: float, vy: float) -> float:
    return ux * vy - uy * vx


def point_line_distance(p: Point2, line: Line) -> float:
    return abs(cross2(p[0] - line.p[0], p[1] - line.p[1], line.d[0], line.d[1]))


def line_intersection(l1: Line, l2: Line, *, min_cross: float = 1e-12) -> Point2:
    """Intersection point; raises when the lines are (near-)parallel."""
    den = cross2(l1.d[0], l1.d[1], l2.d[0], l2.d[1])
    if abs(den) < min_cross:
        raise GeometryError("lines are parallel or nearly so")
    wx = l2.p[0] - l1.p[0]
    wy = l2.p[1] - l1.p[1]
    s = cross2(wx, wy, l2.d[0], l2.d[1]) / den
    return l1.at(s)


# ---------------------------------------------------------------------------
# Ellipse boundary operations


def ellipse_point(e: Ellipse, t: float) -> Point2:
    return Point2(e.center[0] + e.a * math.cos(t), e.center[1] + e.b * math.sin(t))


def ellipse_tangent_dir(e: Ellipse, t: float) -> Point2:
    return unit(-e.a * math.sin(t), e.b * math.cos(t))


def ellipse_param(e: Ellipse, p: Point2) -> float:
    """Parameter of a boundary point (undefined off the boundary)."""
    return math.atan2((p[1] - e.center[1]) / e.b, (p[0] - e.center[0]) / e.a)


def ellipse_curvature(e: Ellipse, t: float) -> float:
    s, c = math.sin(t), math.cos(t)
    w = e.a * e.a * s * s + e.b * e.b * c * c
    return e.a * e.b / (w * math.sqrt(w))


def evolute_point(e: Ellipse, t: float) -> Point2:
    """Center of curvature at parameter t (the evolute's point)."""
    if abs(e.a - e.b) < 1e-12 * e.a:
        raise GeometryError("evolute of a circle degenerates to its center")
    c, s = math.cos(t), math.sin(t)
    dx = (e.a * e.a - e.b * e.b) / e.a * c * c * c
    dy = (e.b * e.b - e.a * e.a) / e.b * s * s * s
    return Point2(e.center[0] + dx, e.center[1] + dy)


def tangents_from_point(e: Ellipse, p: Point2) -> list[Tangent]:
    """All real tangent lines from p to e, each with its touch point.

    Two tangents for p strictly outside, one for p on the boundary
    (within a relative band of 1e-12), none for p inside.
    """
    ux = (p[0] - e.center[0]) / e.a
    uy = (p[1] - e.center[1]) / e.b
    r2 = ux * ux + uy * uy
    if r2 < 1.0 - _BOUNDARY_BAND:
        return []
    if r2 <= 1.0 + _BOUNDARY_BAND:
        # p is on the boundary: single tangent, touching at p itself.
        g = unit(-uy / e.b, ux / e.a)
        return [Tangent(Line(p, g), p)]
    k = math.sqrt(r2 - 1.0)
    out: list[Tangent] = []
    for sgn in (1.0, -1.0):
        tx = (ux - sgn * k * uy) / r2
        ty = (uy + sgn * k * ux) / r2
        touch = Point2(e.center[0] + e.a * tx, e.center[1] + e.b * ty)
        out.append(Tangent(Line(p, unit(touch[0] - p[0], touch[1] - p[1])), touch))
    return out


def second_intersection(e: Ellipse, p: Point2, d: Point2) -> Point2:
    """Other intersection of the line through p (on e) with direction d.

    Returns p itself when the line is tangent there.  Raises if p is not
    on the boundary within 1e-9 * max(a, b) geometric distance.
    """
    a, b = e.a, e.b
    px = (p[0] - e.center[0]) / a
    py = (p[1] - e.center[1]) / b
    f = px * px + py * py - 1.0
    gn = 2.0 * math.hypot(px / a, py / b)
    if abs(f) > 1e-9 * max(a, b) * max(gn, 1e-300):
        raise GeometryError("base point is not on the ellipse")
    dx, dy = d
    dn = math.hypot(dx, dy)
    if dn == 0.0:
        raise GeometryError("direction must be nonzero")
    dx /= dn
    dy /= dn
    qa = (dx / a) ** 2 + (dy / b) ** 2
    qb = 2.0 * (px * dx / a + py * dy / b)
    s = -qb / qa
    # One Newton polish removes the O(f) bias of discarding the root at p.
    der = 2.0 * qa * s + qb
    if der != 0.0:
        s -= (qa * s * s + qb * s + f) / der
    return Point2(p[0] + s * dx, p[1] + s * dy)


def ellipse_closest_point(e: Ellipse, p: Point2) -> Point2:
    """Closest boundary point to p (robust bisection on the tangency angle)."""
    x = abs(p[0] - e.center[0])
    y = abs(p[1] - e.center[1])
    a, b = e.a, e.b
    # Root of g(t) = (a^2-b^2) cos t sin t - x a sin t + y b cos t on [0, pi/2].
    lo, hi = 0.0, 0.5 * math.pi

    def g(t: float) -> float:
        return (a * a - b * b) * math.cos(t) * math.sin(t) - x * a * math.sin(t) + y * b * math.cos(t)

    if a == b:
        t = math.atan2(y * b, x * a) if (x or y) else 0.0
    else:
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if g(mid) > 0.0:
                lo = mid
            else:
                hi = mid
        t = 0.5 * (lo + hi)
    qx = a * math.cos(t) * math.copysign(1.0, p[0] - e.center[0]) if p[0] != e.center[0] else a * math.cos(t)
    qy = b * math.sin(t) * math.copysign(1.0, p[1] - e.center[1]) if p[1] != e.center[1] else b * math.sin(t)
    return Point2(e.center[0] + qx, e.center[1] + qy)


def point_ellipse_distance(e: Ellipse, p: Point2) -> float:
    return dist(p, ellipse_closest_point(e, p))


# ---------------------------------------------------------------------------
# Inversive and projective maps


def invert_point(p: Point2, c: Point2, rho: float) -> Point2:
    """Inversion in the circle of center c, radius rho."""
    if rho <= 0.0:
        raise GeometryError("inversion radius must be positive")
    dx = p[0] - c[0]
    dy = p[1] - c[1]
    r2 = dx * dx + dy * dy
    if r2 < 1e-28:  # |p - c| < 1e-14: numerically the center
        raise GeometryError("cannot invert the circle center")
    k = rho * rho / r2
    return Point2(c[0] + k * dx, c[1] + k * dy)


def polar_line(p: Point2, c: Point2, rho: float) -> Line:
    """Polar of p with respect to the circle (c, rho)."""
    q = invert_point(p, c, rho)
    return Line(q, unit(-(p[1] - c[1]), p[0] - c[0]))


def pole_point(line: Line, c: Point2, rho: float) -> Point2:
    """Pole of a line with respect to the circle (c, rho)."""
    # Foot of the perpendicular from c, then inversion.
    wx = c[0] - line.p[0]
    wy = c[1] - line.p[1]
    s = wx * line.d[0] + wy * line.d[1]
    foot = line.at(s)
    if dist(foot, c) < 1e-300:
        raise GeometryError("line through the circle center has no finite pole")
    return invert_point(foot, c, rho)


def cremona(p: Point2, origin: Point2 = Point2(0.0, 0.0)) -> Point2:
    """Quadratic Cremona involution (x, y) -> (1/x, 1/y) relative to origin."""
    x = p[0] - origin[0]
    y = p[1] - origin[1]
    if abs(x) < 1e-14 or abs(y) < 1e-14:
        raise GeometryError("cremona map is undefined on the coordinate axes")
    return Point2(origin[0] + 1.0 / x, origin[1] + 1.0 / y)


# ---------------------------------------------------------------------------
# Conic fitting and classification


def _as_cloud(points: Sequence[Point2]) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise GeometryError("expected a sequence of planar points")
    if not np.all(np.isfinite(pts)):
        raise GeometryError("point cloud contains non-finite coordinates")
    return pts


def fit_conic(points: Sequence[Point2]) -> tuple[ConicCoeffs, float]:
    """Least-squares conic through a cloud (algebraic distance, unit norm).

    The cloud is centered and scaled to unit RMS radius before building the
    design matrix [x^2, xy, y^2, x, y, 1]; the smallest singular direction
    is the fit.  Returns coefficients mapped back to the original frame in
    canonical form (see ConicCoeffs.canonical) and the RMS residual in the
    normalized frame.
    """
    pts = _as_cloud(points)
    if len(pts) < 6:
        raise GeometryError(f"conic fit needs at least 6 points, got {len(pts)}")
    m = pts.mean(axis=0)
    q = pts - m
    s = math.sqrt(float(np.mean(np.sum(q * q, axis=1))))
    if s == 0.0:
        raise GeometryError("conic fit is undefined for a single repeated point")
    q /= s
    x, y = q[:, 0], q[:, 1]
    design = np.column_stack([x * x, x * y, y * y, x, y, np.ones_like(x)])
    _, sv, vt = np.linalg.svd(design, full_matrices=False)
    v = vt[-1]
    rms = float(sv[-1]) / math.sqrt(len(pts))

    # Undo the normalization x' = (x - mx)/s.
    a2, b2, c2, d1, e1, f0 = (float(c) for c in v)
    mx, my = float(m[0]), float(m[1])
    s2 = s * s
    A = a2 / s2
    B = b2 / s2
    C = c2 / s2
    D = d1 / s - (2.0 * a2 * mx + b2 * my) / s2
    E = e1 / s - (b2 * mx + 2.0 * c2 * my) / s2
    F = f0 + (a2 * mx * mx + b2 * mx * my + c2 * my * my) / s2 - (d1 * mx + e1 * my) / s
    vec = np.array([A, B, C, D, E, F])
    nrm = float(np.linalg.norm(vec))
    if nrm == 0.0:
        raise GeometryError("degenerate conic fit")
    vec /= nrm
    if float(np.max(np.abs(vec[:5]))) < 1e-14:
        raise GeometryError("conic fit collapsed to a constant")
    return ConicCoeffs(*(float(c) for c in vec)).canonical(), rms


def classify_curve(points: Sequence[Point2], scale: float | None = None, *,
                   eps_point: float = EPS_POINT, eps_line: float = EPS_LINE,
                   eps_conic: float = EPS_CONIC,
                   eps_parabola: float = EPS_PARABOLA) -> CurveClass:
    """Classify a sampled curve as one of the CurveClass tags.

    Order of tests: point (cloud diameter below eps_point * scale), line
    (PCA eigenvalue ratio below eps_line), then conic fit -- residual below
    eps_conic picks ellipse/parabola/hyperbola by the sign of B^2 - 4AC,
    anything else is OTHER.  `scale` defaults to the cloud's RMS distance
    from the origin; callers that know the ambient figure (e.g. an outer
    ellipse) should pass its size so tiny stationary clouds classify as
    points regardless of where they sit.
    """
    pts = _as_cloud(points)
    if len(pts) < 2:
        raise GeometryError("classification needs at least 2 points")
    centroid = pts.mean(axis=0)
    rel = pts - centroid
    spread = float(np.max(np.hypot(rel[:, 0], rel[:, 1])))
    if scale is None:
        scale = math.sqrt(float(np.mean(np.sum(pts * pts, axis=1))))
    if spread == 0.0 or 2.0 * spread < eps_point * scale:
        return CurveClass.POINT
    cov = (rel.T @ rel) / len(pts)
    eigvals = np.linalg.eigvalsh(cov)
    if eigvals[0] / eigvals[-1] < eps_line:
        return CurveClass.LINE
    if len(pts) < 6:
        return CurveClass.OTHER
    coeffs, rms = fit_conic(pts)
    if rms >= eps_conic:
        return CurveClass.OTHER
    quad = coeffs.A ** 2 + coeffs.B ** 2 + coeffs.C ** 2
    if quad == 0.0:
        return CurveClass.OTHER
    disc = coeffs.discriminant() / quad
    if abs(disc) < eps_parabola:
        return CurveClass.PARABOLA
    return CurveClass.ELLIPSE if disc < 0.0 else CurveClass.HYPERBOLA
