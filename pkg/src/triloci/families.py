"""Poncelet triangle families over nested conic pairs.

A family is a pair (outer, inner) of nested conics admitting a closed
3-periodic transverse: triangles inscribed in the outer conic with all
sides tangent to the inner one.  For concentric axis-parallel pairs the
closure condition is a'/a + b'/b = 1; each named family below derives its
caustic from that condition plus one extra constraint.  Non-concentric
pairs (poristic circle pairs, the Brocard porism) and pinned "mounted"
families are built by their own constructors.

Kinds: confocal, incircle, circumcircle, homothetic, dual, excentral
(excentral triangles of the confocal family), poristic, brocard, and
mounted:<pin> with pin in MOUNTED_PINS or explicit pin coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .geom import (Ellipse, GeometryError, Point2, TWO_PI, dist, ellipse_param,
                   ellipse_point, second_intersection, tangents_from_point, unit)
from .triangle import Triangle
from . import centers as _centers

PONCELET_KINDS = ("confocal", "incircle", "circumcircle", "homothetic", "dual",
                  "poristic", "brocard")
FAMILY_KINDS = PONCELET_KINDS + ("excentral",)
MOUNTED_PINS = ("major", "minor", "mixed", "fs", "fsCtr")

_CAYLEY_TOL = 1e-10


class FamilyError(GeometryError):
    """A family spec could not be built or fails its closure condition."""


@dataclass(frozen=True)
class FamilySpec:
    """A triangle family: conic pair, or pins, or a parent family.

    Instances from the public constructors are validated; the dataclass
    itself stays passive so tests can assemble deliberately broken pairs.
    """

    kind: str
    outer: Ellipse
    inner: Ellipse | None = None
    derived_from: "FamilySpec | None" = None
    pins: tuple[Point2, Point2] | None = None
    seed: Triangle | None = None

    @property
    def is_mounted(self) -> bool:
        return self.kind.startswith("mounted")

    @property
    def is_poncelet(self) -> bool:
        return self.kind in PONCELET_KINDS

    def pair(self) -> tuple[Ellipse, Ellipse]:
        """The conic pair that generates the transverse (parent's for excentral)."""
        spec = self.derived_from if self.kind == "excentral" else self
        if spec is None or spec.inner is None:
            raise FamilyError(f"family {self.kind!r} has no generating conic pair")
        return spec.outer, spec.inner


def derive_caustic(kind: str, outer: Ellipse, aux: float | None = None) -> Ellipse:
    """Caustic of a concentric axis-parallel family inscribed in `outer`.

    aux is the caustic aspect ratio a'/b' for the circumcircle family and
    is ignored elsewhere.
    """
    a, b = outer.a, outer.b
    if kind == "homothetic":
        return Ellipse(outer.center, 0.5 * a, 0.5 * b)
    if kind == "incircle":
        r = a * b / (a + b)
        return Ellipse(outer.center, r, r)
    if kind == "dual":
        d = a * a + b * b
        return Ellipse(outer.center, a * b * b / d, a * a * b / d)
    if kind == "circumcircle":
        if abs(a - b) > 1e-12 * a:
            raise FamilyError("circumcircle family requires a circular outer conic")
        rho = 2.0 if aux is None else float(aux)
        if not (rho > 0.0 and math.isfinite(rho)):
            raise FamilyError(f"caustic aspect ratio must be positive, got {rho}")
        return Ellipse(outer.center, a * rho / (1.0 + rho), a / (1.0 + rho))
    if kind == "confocal":
        if abs(a - b) < 1e-12 * a:
            # Focal points coincide: the caustic degenerates to the half circle.
            return Ellipse(outer.center, 0.5 * a, 0.5 * b)
        c2 = a * a - b * b
        ap = a * (math.sqrt(a ** 4 - a * a * b * b + b ** 4) - b * b) / c2
        bp = b * (1.0 - ap / a)
        if not (0.0 < bp < ap < a):
            raise FamilyError(f"confocal caustic out of range for a={a}, b={b}")
        return Ellipse(outer.center, ap, bp)
    raise FamilyError(f"no concentric caustic rule for family kind {kind!r}")


def check_spec(spec: FamilySpec) -> None:
    """Validate the closure conditions and nesting of a family spec."""
    if spec.is_mounted:
        if spec.pins is None:
            raise FamilyError("mounted family is missing its pins")
        return
    if spec.kind == "excentral":
        if spec.derived_from is None:
            raise FamilyError("excentral family requires its parent confocal spec")
        check_spec(spec.derived_from)
        return
    if spec.kind not in PONCELET_KINDS:
        raise FamilyError(f"unknown family kind {spec.kind!r}")
    outer, inner = spec.outer, spec.inner
    if inner is None:
        raise FamilyError(f"family {spec.kind!r} requires a caustic")
    if spec.kind in ("confocal", "incircle", "circumcircle", "homothetic", "dual"):
        if dist(outer.center, inner.center) > 1e-12 * outer.a:
            raise FamilyError("concentric family has displaced conics")
        cayley = inner.a / outer.a + inner.b / outer.b
        if abs(cayley - 1.0) > _CAYLEY_TOL:
            raise FamilyError(f"closure condition violated: a'/a + b'/b = {cayley}")
        if inner.a > outer.a or inner.b > outer.b:
            raise FamilyError("caustic is not nested inside the outer conic")
        if spec.kind == "confocal" and abs(outer.a - outer.b) > 1e-12 * outer.a:
            foc = (inner.a ** 2 - inner.b ** 2) - (outer.a ** 2 - outer.b ** 2)
            if abs(foc) > _CAYLEY_TOL * outer.a ** 2:
                raise FamilyError("confocal pair does not share its foci")
        if spec.kind == "dual":
            if abs(inner.a / inner.b - outer.b / outer.a) > _CAYLEY_TOL:
                raise FamilyError("dual caustic must have the reciprocal aspect ratio")
        return
    if spec.kind == "poristic":
        R, r = outer.a, inner.a
        d = dist(outer.center, inner.center)
        if abs(outer.a - outer.b) > 1e-12 * R or abs(inner.a - inner.b) > 1e-12 * r:
            raise FamilyError("poristic family is a circle pair")
        if abs(d * d - R * (R - 2.0 * r)) > 1e-10 * R * R:
            raise FamilyError("circle pair violates the d^2 = R(R - 2r) closure relation")
        return
    # brocard: verify nesting coarsely; closure is checked numerically in tests
    for j in range(32):
        p = ellipse_point(inner, TWO_PI * j / 32)
        if outer.implicit(p) > 1e-9:
            raise FamilyError("caustic is not nested inside the outer conic")


def build_family(kind: str, a: float = 1.5, b: float = 1.0,
                 aux: float | None = None,
                 seed: tuple[float, float, float] | None = None) -> FamilySpec:
    """One-stop constructor for every family kind.

    a, b are the outer semi-axes in canonical orientation (a >= b).  For
    the circle-outer kinds, a is the circle radius and b is ignored:
    circumcircle takes its caustic aspect ratio from aux (default 2),
    poristic its inradius (default 0.4*a), and brocard its seed
    sidelengths from seed (default 4:5:6), scaled to circumradius a.
    """
    if not (math.isfinite(a) and a > 0.0 and math.isfinite(b) and b > 0.0):
        raise FamilyError(f"semi-axes must be positive and finite, got a={a}, b={b}")
    if kind.startswith("mounted"):
        return mounted_spec(kind.partition(":")[2] or "fs", a, b)
    if kind == "poristic":
        return poristic_spec(a, 0.4 * a if aux is None else float(aux))
    if kind == "brocard":
        return brocard_spec(_seed_triangle(seed or (4.0, 5.0, 6.0), a))
    if kind not in FAMILY_KINDS:
        raise FamilyError(f"unknown family kind {kind!r}")
    if kind == "circumcircle":
        outer = Ellipse(Point2(0.0, 0.0), a, a)
    else:
        if a < b:
            raise FamilyError(f"canonical orientation requires a >= b, got a={a}, b={b}")
        outer = Ellipse(Point2(0.0, 0.0), a, b)
    if kind == "excentral":
        parent = build_family("confocal", a, b)
        return FamilySpec("excentral", parent.outer, parent.inner, derived_from=parent)
    spec = FamilySpec(kind, outer, derive_caustic(kind, outer, aux))
    check_spec(spec)
    return spec


def poristic_spec(R: float, r: float) -> FamilySpec:
    """Circle pair with a shared incircle: center offset d^2 = R(R - 2r)."""
    if not (0.0 < r <= 0.5 * R and math.isfinite(r)):
        raise FamilyError(f"poristic inradius must satisfy 0 < r <= R/2, got r={r}, R={R}")
    d = math.sqrt(R * (R - 2.0 * r))
    spec = FamilySpec("poristic", Ellipse(Point2(0.0, 0.0), R, R),
                      Ellipse(Point2(d, 0.0), r, r))
    check_spec(spec)
    return spec


def _seed_triangle(sides: tuple[float, float, float],
                   circumradius: float = 1.0) -> Triangle:
    """Triangle with the given sidelengths, scaled to the given circumradius."""
    s1, s2, s3 = (float(s) for s in sides)
    if min(s1, s2, s3) <= 0.0 or s1 + s2 <= s3 or s2 + s3 <= s1 or s3 + s1 <= s2:
        raise FamilyError(f"sidelengths {sides} do not form a triangle")
    x = (s2 * s2 + s3 * s3 - s1 * s1) / (2.0 * s3)
    y2 = s2 * s2 - x * x
    if y2 <= 0.0:
        raise FamilyError(f"sidelengths {sides} are numerically degenerate")
    tri = Triangle(Point2(0.0, 0.0), Point2(s3, 0.0), Point2(x, math.sqrt(y2)))
    k = circumradius / tri.circumradius
    return Triangle(Point2(0.0, 0.0), Point2(s3 * k, 0.0), Point2(x * k, math.sqrt(y2) * k))


def brocard_spec(seed: Triangle) -> FamilySpec:
    """Brocard porism through a seed triangle.

    The family is framed canonically: circumcenter at the origin and the
    Brocard axis along +x, which makes the caustic (the inellipse whose
    foci are the seed's Brocard points) axis-parallel with its major axis
    vertical.
    """
    seed.require_nondegenerate()
    cc = _centers.circumcircle_of(seed)
    w1, w2 = _centers.brocard_points(seed)
    m = Point2(0.5 * (w1[0] + w2[0]), 0.5 * (w1[1] + w2[1]))
    R = cc.radius
    span = dist(m, cc.center)
    if span < 1e-13 * R:
        ex, ey = Point2(1.0, 0.0), Point2(0.0, 1.0)
    else:
        ex = unit(m[0] - cc.center[0], m[1] - cc.center[1])
        ey = Point2(-ex[1], ex[0])

    def to_frame(p: Point2) -> Point2:
        dx, dy = p[0] - cc.center[0], p[1] - cc.center[1]
        return Point2(dx * ex[0] + dy * ex[1], dx * ey[0] + dy * ey[1])

    canon = Triangle(to_frame(seed.v1), to_frame(seed.v2), to_frame(seed.v3))
    f1, f2 = to_frame(w1), to_frame(w2)
    c_half = 0.5 * dist(f1, f2)
    # Product of focal distances to any tangent line equals the squared
    # semi-minor axis; all three sides must agree.
    b2s = []
    for p, q in ((canon.v1, canon.v2), (canon.v2, canon.v3), (canon.v3, canon.v1)):
        d = unit(q[0] - p[0], q[1] - p[1])
        h1 = abs((f1[0] - p[0]) * d[1] - (f1[1] - p[1]) * d[0])
        h2 = abs((f2[0] - p[0]) * d[1] - (f2[1] - p[1]) * d[0])
        b2s.append(h1 * h2)
    if max(b2s) - min(b2s) > 1e-9 * R * R:
        raise FamilyError("Brocard inellipse is inconsistent across the seed's sides")
    minor = math.sqrt(sum(b2s) / 3.0)
    major = math.sqrt(minor * minor + c_half * c_half)
    inner = Ellipse(Point2(0.5 * (f1[0] + f2[0]), 0.0), minor, major)
    spec = FamilySpec("brocard", Ellipse(Point2(0.0, 0.0), R, R), inner, seed=canon)
    check_spec(spec)
    return spec


def mounted_spec(pin: str | tuple[Point2, Point2], a: float = 1.5,
                 b: float = 1.0) -> FamilySpec:
    """Two pinned vertices plus one vertex sweeping the ellipse."""
    if not (math.isfinite(a) and math.isfinite(b) and a >= b > 0.0):
        raise FamilyError(f"semi-axes must satisfy a >= b > 0, got a={a}, b={b}")
    outer = Ellipse(Point2(0.0, 0.0), a, b)
    if isinstance(pin, str):
        if pin not in MOUNTED_PINS:
            raise FamilyError(f"unknown mounted pin {pin!r}; supported: {MOUNTED_PINS}")
        c = math.sqrt(max(a * a - b * b, 0.0))
        pins = {
            "major": (Point2(-a, 0.0), Point2(a, 0.0)),
            "minor": (Point2(0.0, b), Point2(0.0, -b)),
            "mixed": (Point2(-a, 0.0), Point2(0.0, b)),
            "fs": (Point2(-c, 0.0), Point2(c, 0.0)),
            "fsCtr": (Point2(0.0, 0.0), Point2(c, 0.0)),
        }[pin]
        kind = f"mounted:{pin}"
    else:
        pins = (Point2(*pin[0]), Point2(*pin[1]))
        kind = "mounted:custom"
    if dist(pins[0], pins[1]) < 1e-12:
        raise FamilyError(f"mounted pins must be distinct (got {pins[0]} twice; "
                          "focus-based pins need an outer aspect ratio above 1)")
    return FamilySpec(kind, outer, pins=pins)


# ---------------------------------------------------------------------------
# The Poncelet transverse


def poncelet_step(spec: FamilySpec, p: Point2, prev: Point2 | None = None) -> Point2:
    """Next vertex of the transverse from p.

    Of the two chords from p tangent to the caustic, pick the one that is
    not the chord we arrived on (when prev is given), else the one whose
    endpoint advances counterclockwise by the smaller arc.
    """
    outer, inner = spec.pair()
    tangents = tangents_from_point(inner, p)
    if len(tangents) < 2:
        raise FamilyError("transverse base point is not outside the caustic")
    if prev is not None:
        din = unit(p[0] - prev[0], p[1] - prev[1])
        # The arrival chord reappears as one of the two tangents; take the other.
        tangents.sort(key=lambda t: abs(t.line.d[0] * din[1] - t.line.d[1] * din[0]))
        chosen = tangents[-1]
        return second_intersection(outer, p, chosen.line.d)
    t0 = ellipse_param(outer, p)
    best: tuple[float, Point2] | None = None
    for tan in tangents:
        q = second_intersection(outer, p, tan.line.d)
        adv = (ellipse_param(outer, q) - t0) % TWO_PI
        if best is None or adv < best[0]:
            best = (adv, q)
    assert best is not None
    return best[1]


def triangle_at(spec: FamilySpec, t: float) -> Triangle:
    """Family member at sweep parameter t.

    Poncelet kinds start the transverse at the outer-conic point with
    parameter t; mounted kinds move their free vertex there; the excentral
    kind returns the excentral triangle of its parent's member.
    """
    if spec.is_mounted:
        assert spec.pins is not None
        return Triangle(spec.pins[0], spec.pins[1], ellipse_point(spec.outer, t))
    if spec.kind == "excentral":
        assert spec.derived_from is not None
        return _centers.derived_triangle(triangle_at(spec.derived_from, t), "excentral")
    v1 = ellipse_point(spec.outer, t)
    v2 = poncelet_step(spec, v1)
    v3 = poncelet_step(spec, v2, prev=v1)
    return Triangle(v1, v2, v3)


def closure_residual(spec: FamilySpec, t: float) -> float:
    """Distance between the start vertex and the third transverse step."""
    outer, _ = spec.pair()
    p1 = ellipse_point(outer, t)
    p2 = poncelet_step(spec, p1)
    p3 = poncelet_step(spec, p2, prev=p1)
    p4 = poncelet_step(spec, p3, prev=p2)
    return dist(p4, p1)


def side_touch_points(spec: FamilySpec, tri: Triangle) -> tuple[Point2, Point2, Point2]:
    """Where the triangle's sides touch the caustic.

    Side i is the side opposite vertex i.  Computed as the foot of the
    center's perpendicular in the frame where the caustic is a unit circle.
    """
    _, inner = spec.pair()
    cx, cy = inner.center
    out = []
    for p, q in ((tri.v2, tri.v3), (tri.v3, tri.v1), (tri.v1, tri.v2)):
        px, py = (p[0] - cx) / inner.a, (p[1] - cy) / inner.b
        qx, qy = (q[0] - cx) / inner.a, (q[1] - cy) / inner.b
        dx, dy = qx - px, qy - py
        den = dx * dx + dy * dy
        if den == 0.0:
            raise FamilyError("degenerate side has no tangency point")
        s = -(px * dx + py * dy) / den
        out.append(Point2(cx + inner.a * (px + s * dx), cy + inner.b * (py + s * dy)))
    return tuple(out)  # type: ignore[return-value]
