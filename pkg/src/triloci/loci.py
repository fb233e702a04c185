"""Loci, envelopes, metric snapshots, and invariant detection over a family sweep.

A Channel names one curve to trace: a center's locus, a vertex's, an
envelope of moving lines, or a Brocard point, optionally through a derived
triangle and a cevian-style construction.  Sampling is pure and ordered by
the sweep index, so results are deterministic; degenerate parameters are
skipped and recorded rather than raised.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from .geom import (CurveClass, Ellipse, GeometryError, Line, Point2, TWO_PI,
                   classify_curve, dist, ellipse_curvature, ellipse_param,
                   line_intersection)
from .triangle import DegenerateTriangleError, Triangle
from .centers import (CEVIAN_KINDS, DERIVED_KINDS, CenterRegistry,
                      brocard_points, center, cevian_like, default_registry,
                      derived_triangle)
from .families import FamilySpec, side_touch_points, triangle_at

LOCUS_TYPES = ("off", "xn", "v1", "v2", "v3", "env", "e12", "e23", "e31",
               "e1x", "e2x", "e3x", "omega1", "omega2")
_ENVELOPE_TYPES = frozenset({"env", "e12", "e23", "e31", "e1x", "e2x", "e3x"})
_CENTER_TYPES = frozenset({"xn", "e1x", "e2x", "e3x"})
_RIGHT_ANGLE_EPS = 1e-9
# Quantities dominated by tan near a right angle; see detect_invariants.
_RIGHT_SENSITIVE = frozenset({"Σtan", "Πcot", "Σtan'", "Πcot'"})

DEFAULT_SAMPLES = 720
DEFAULT_TOL = 1e-7


class LociError(RuntimeError):
    """Base class for sweep-level sampling failures."""


class AllSamplesDegenerateError(LociError):
    """Every sweep position produced a degenerate or undefined target."""


class AllSamplesParallelError(LociError):
    """Every pair of consecutive generating lines was near-parallel."""


class Channel(BaseModel):
    """What to trace: locus type, derived-triangle stage, center, colors.

    locus_type: off | xn | v1 | v2 | v3 | env | e12 | e23 | e31 | e1x |
    e2x | e3x | omega1 | omega2.  `center` is the registry index used by
    xn/e1x/e2x/e3x; `env` holds the (m, n) center pair whose connecting
    line is enveloped; `cevian` is an optional (kind, center) construction
    applied after `triangle_type`.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    locus_type: str = "off"
    triangle_type: str = "reference"
    center: int | None = None
    cevian: tuple[str, int] | None = None
    env: tuple[int, int] | None = None
    color: tuple[int, int, int] = (0, 0, 0)

    @field_validator("locus_type")
    @classmethod
    def _check_locus_type(cls, v: str) -> str:
        if v not in LOCUS_TYPES:
            raise ValueError(f"locus_type must be one of {LOCUS_TYPES}, got {v!r}")
        return v

    @field_validator("triangle_type")
    @classmethod
    def _check_triangle_type(cls, v: str) -> str:
        if v not in DERIVED_KINDS:
            raise ValueError(f"triangle_type must be one of {DERIVED_KINDS}, got {v!r}")
        return v

    @field_validator("color")
    @classmethod
    def _check_color(cls, v: tuple[int, int, int]) -> tuple[int, int, int]:
        if any(c < 0 or c > 255 for c in v):
            raise ValueError(f"color components must be in 0..255, got {v}")
        return v

    @model_validator(mode="after")
    def _check_wiring(self) -> "Channel":
        reg = default_registry()
        if self.locus_type in _CENTER_TYPES:
            if self.center is None:
                raise ValueError(f"locus_type {self.locus_type!r} requires a center")
            if self.center not in reg:
                raise ValueError(f"center X{self.center} is not in the registry")
        if self.locus_type == "env":
            if self.env is None:
                raise ValueError("locus_type 'env' requires an (m, n) center pair")
            for k in self.env:
                if k not in reg:
                    raise ValueError(f"center X{k} is not in the registry")
        if self.cevian is not None:
            kind, k = self.cevian
            if kind not in CEVIAN_KINDS:
                raise ValueError(f"cevian kind must be one of {CEVIAN_KINDS}, got {kind!r}")
            if k not in reg:
                raise ValueError(f"center X{k} is not in the registry")
        return self


@dataclass(frozen=True)
class MetricSnapshot:
    """Per-member metric state: sides, angles, radii, curvatures, J.

    kappa_i is the outer-conic curvature at vertex i and is NaN for a
    vertex that does not lie on the outer conic (derived triangles,
    interior pins).  J is present for the confocal family only.  `primed`
    carries the same measurements of a selected derived triangle.
    """

    s1: float
    s2: float
    s3: float
    L: float
    A: float
    theta1: float
    theta2: float
    theta3: float
    r: float
    R: float
    cot_omega: float
    kappa1: float
    kappa2: float
    kappa3: float
    J: float | None = None
    primed: "MetricSnapshot | None" = None

    @property
    def sides(self) -> tuple[float, float, float]:
        return (self.s1, self.s2, self.s3)

    @property
    def angles(self) -> tuple[float, float, float]:
        return (self.theta1, self.theta2, self.theta3)

    @property
    def kappas(self) -> tuple[float, float, float]:
        return (self.kappa1, self.kappa2, self.kappa3)


@dataclass(frozen=True)
class Locus:
    """Ordered trace of one channel with its fitted curve class."""

    points: tuple[Point2, ...]
    skipped: tuple[int, ...]
    curve_class: CurveClass
    channel: Channel


@dataclass(frozen=True)
class InvariantEntry:
    name: str
    mean: float
    spread: float
    is_invariant: bool


@dataclass(frozen=True)
class InvariantReport:
    """Detected conserved quantities of a sweep at a relative-spread tolerance."""

    entries: tuple[InvariantEntry, ...]
    tolerance: float

    def line(self, precision: int = 6) -> str:
        """The one-line summary of invariant quantities, `name=value, ...`."""
        parts = [f"{e.name}={e.mean:.{precision}g}" for e in self.entries
                 if e.is_invariant]
        return ", ".join(parts) if parts else "(none)"

    def __getitem__(self, name: str) -> InvariantEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def invariant_names(self) -> tuple[str, ...]:
        return tuple(e.name for e in self.entries if e.is_invariant)


def _on_outer_param(outer: Ellipse, v: Point2) -> float | None:
    if abs(outer.implicit(v)) <= 1e-9:
        return ellipse_param(outer, v)
    return None


def snapshot(spec: FamilySpec, tri: Triangle,
             derived: Triangle | None = None) -> MetricSnapshot:
    """Measure one family member (and optionally a derived triangle of it)."""
    tri.require_nondegenerate(spec.outer.a)
    s1, s2, s3 = tri.sides
    th1, th2, th3 = tri.angles
    kappas = []
    for v in tri.vertices:
        t = _on_outer_param(spec.outer, v)
        kappas.append(math.nan if t is None else ellipse_curvature(spec.outer, t))
    J = None
    if spec.kind == "confocal":
        outer = spec.outer
        total = 0.0
        verts = tri.vertices
        for i, v in enumerate(verts):
            nxt = verts[(i + 1) % 3]
            d = dist(v, nxt)
            vx, vy = (nxt[0] - v[0]) / d, (nxt[1] - v[1]) / d
            gx = 2.0 * (v[0] - outer.center[0]) / outer.a ** 2
            gy = 2.0 * (v[1] - outer.center[1]) / outer.b ** 2
            total += 0.5 * (vx * gx + vy * gy)
        J = total / 3.0
    primed = None
    if derived is not None:
        primed = snapshot(spec, derived)
    cot_w = sum(1.0 / math.tan(t) for t in (th1, th2, th3))
    return MetricSnapshot(s1, s2, s3, tri.perimeter, tri.area, th1, th2, th3,
                          tri.inradius, tri.circumradius, cot_w,
                          kappas[0], kappas[1], kappas[2], J, primed)


def _final_triangle(spec: FamilySpec, t: float, ch: Channel,
                    registry: CenterRegistry | None) -> Triangle:
    tri = triangle_at(spec, t)
    tri.require_nondegenerate(spec.outer.a)
    if ch.triangle_type != "reference":
        tri = derived_triangle(tri, ch.triangle_type)
        tri.require_nondegenerate(spec.outer.a)
    if ch.cevian is not None:
        kind, k = ch.cevian
        tri = cevian_like(tri, kind, k, registry)
        tri.require_nondegenerate(spec.outer.a)
    return tri


def _target_point(tri: Triangle, ch: Channel,
                  registry: CenterRegistry | None) -> Point2:
    lt = ch.locus_type
    if lt == "xn":
        assert ch.center is not None
        return center(tri, ch.center, registry)
    if lt == "v1":
        return tri.v1
    if lt == "v2":
        return tri.v2
    if lt == "v3":
        return tri.v3
    if lt == "omega1":
        return brocard_points(tri)[0]
    if lt == "omega2":
        return brocard_points(tri)[1]
    raise ValueError(f"locus_type {lt!r} does not trace a point")


def _generating_line(spec: FamilySpec, t: float, ch: Channel,
                     registry: CenterRegistry | None) -> Line:
    tri = _final_triangle(spec, t, ch, registry)
    lt = ch.locus_type
    if lt in ("e12", "e23", "e31"):
        pairs = {"e12": (tri.v1, tri.v2), "e23": (tri.v2, tri.v3),
                 "e31": (tri.v3, tri.v1)}
        p, q = pairs[lt]
    elif lt in ("e1x", "e2x", "e3x"):
        assert ch.center is not None
        p = {"e1x": tri.v1, "e2x": tri.v2, "e3x": tri.v3}[lt]
        q = center(tri, ch.center, registry)
    elif lt == "env":
        assert ch.env is not None
        p = center(tri, ch.env[0], registry)
        q = center(tri, ch.env[1], registry)
    else:
        raise ValueError(f"locus_type {lt!r} has no generating line")
    return Line(p, Point2(q[0] - p[0], q[1] - p[1]))


def envelope(spec: FamilySpec, ch: Channel, n: int = DEFAULT_SAMPLES,
             delta: float | None = None,
             registry: CenterRegistry | None = None) -> list[Point2]:
    """Envelope of the channel's generating line, sampled at n sweep positions.

    The characteristic point at t is approximated by intersecting the
    lines at t and t + delta (delta defaults to the sample step 2*pi/n;
    pass a smaller delta to tighten the first-order approximation).
    Near-parallel line pairs and degenerate parameters are skipped.
    """
    pts, _ = _envelope_with_skips(spec, ch, n, delta, registry)
    if not pts:
        raise AllSamplesParallelError(
            "no envelope point could be constructed at any sweep position")
    return pts


def _envelope_with_skips(spec: FamilySpec, ch: Channel, n: int,
                         delta: float | None,
                         registry: CenterRegistry | None
                         ) -> tuple[list[Point2], list[int]]:
    if ch.locus_type not in _ENVELOPE_TYPES:
        raise ValueError(f"channel locus_type {ch.locus_type!r} is not an envelope")
    if n < 32:
        raise ValueError(f"envelope sampling needs n >= 32, got {n}")
    step = TWO_PI / n
    d = step if delta is None else float(delta)
    pts: list[Point2] = []
    skipped: list[int] = []
    for j in range(n):
        t = step * j
        try:
            l1 = _generating_line(spec, t, ch, registry)
            l2 = _generating_line(spec, t + d, ch, registry)
            pts.append(line_intersection(l1, l2))
        except GeometryError:
            skipped.append(j)
    return pts, skipped


def sample_locus(spec: FamilySpec, ch: Channel, n: int = DEFAULT_SAMPLES,
                 registry: CenterRegistry | None = None,
                 delta: float | None = None) -> Locus:
    """Trace a channel over t = 2*pi*j/n and classify the retained points."""
    if ch.locus_type == "off":
        raise ValueError("cannot sample an 'off' channel")
    if n < 8:
        raise ValueError(f"need n >= 8 samples, got {n}")
    if ch.locus_type in _ENVELOPE_TYPES:
        pts, skipped = _envelope_with_skips(spec, ch, n, delta, registry)
        if not pts:
            raise AllSamplesParallelError(
                "no envelope point could be constructed at any sweep position")
    else:
        pts, skipped = [], []
        for j in range(n):
            try:
                tri = _final_triangle(spec, TWO_PI * j / n, ch, registry)
                pts.append(_target_point(tri, ch, registry))
            except GeometryError:
                skipped.append(j)
        if not pts:
            raise AllSamplesDegenerateError(
                "every sweep position was degenerate for this channel")
    cls = classify_curve(pts, scale=spec.outer.a)
    return Locus(tuple(pts), tuple(skipped), cls, ch)


# ---------------------------------------------------------------------------
# Invariant detection

def _quantities(snap: MetricSnapshot) -> Iterator[tuple[str, float]]:
    s1, s2, s3 = snap.sides
    th = snap.angles
    yield "L", snap.L
    yield "A", snap.A
    sum_s2 = s1 * s1 + s2 * s2 + s3 * s3
    yield "Σs²", sum_s2
    yield "Σ1/s", 1.0 / s1 + 1.0 / s2 + 1.0 / s3
    yield "Σ1/s²", 1.0 / (s1 * s1) + 1.0 / (s2 * s2) + 1.0 / (s3 * s3)
    prod_s = s1 * s2 * s3
    yield "Πs", prod_s
    yield "r", snap.r
    yield "R", snap.R
    yield "r/R", snap.r / snap.R
    yield "cotω", snap.cot_omega
    yield "Σsin", sum(math.sin(t) for t in th)
    yield "Σcos", sum(math.cos(t) for t in th)
    yield "Σtan", sum(math.tan(t) for t in th)
    yield "Πsin", math.prod(math.sin(t) for t in th)
    yield "Πcos", math.prod(math.cos(t) for t in th)
    yield "Πcot", math.prod(1.0 / math.tan(t) for t in th)
    yield "Σcot", sum(1.0 / math.tan(t) for t in th)
    yield "Σs²/A", sum_s2 / snap.A
    yield "Σs²/Πs", sum_s2 / prod_s
    if all(math.isfinite(k) for k in snap.kappas):
        yield "Σκ^(2/3)", sum(k ** (2.0 / 3.0) for k in snap.kappas)
        yield "Σκ^(-2/3)", sum(k ** (-2.0 / 3.0) for k in snap.kappas)
        yield "Σκ^(-4/3)", sum(k ** (-4.0 / 3.0) for k in snap.kappas)
    if snap.J is not None:
        yield "J", snap.J
    if snap.primed is not None:
        p = snap.primed
        yield "L'/L", p.L / snap.L
        yield "A'/A", p.A / snap.A
        yield "A'·A", p.A * snap.A
        for name, val in _quantities(
                MetricSnapshot(p.s1, p.s2, p.s3, p.L, p.A, p.theta1, p.theta2,
                               p.theta3, p.r, p.R, p.cot_omega, math.nan,
                               math.nan, math.nan)):
            if name in ("L", "A"):
                continue
            yield _PRIMED_NAMES.get(name, name + "'"), val


# Primed spellings that keep the prime on the side symbol.
_PRIMED_NAMES = {
    "Σs²": "Σs'²", "Σ1/s": "Σ1/s'", "Σ1/s²": "Σ1/s'²", "Πs": "Πs'",
    "r/R": "r'/R'", "Σs²/A": "Σs'²/A'", "Σs²/Πs": "Σs'²/Πs'",
}


def _near_right(snap: MetricSnapshot) -> bool:
    angles = list(snap.angles)
    if snap.primed is not None:
        angles += list(snap.primed.angles)
    return any(abs(t - 0.5 * math.pi) < _RIGHT_ANGLE_EPS for t in angles)


def detect_invariants(spec: FamilySpec, ch: Channel, n: int = DEFAULT_SAMPLES,
                      tol: float = DEFAULT_TOL,
                      registry: CenterRegistry | None = None) -> InvariantReport:
    """Sweep the family and report which metric quantities stay constant.

    Quantities are measured on the family member (for the excentral family:
    on its generating member, with the excentral triangle as the primed
    copy) plus the channel's derived triangle when one is selected.
    Samples within 1e-9 of a right angle are excluded from the
    tan-singular quantities, which are then reported non-invariant.
    """
    if n < 64:
        raise ValueError(f"invariant detection needs n >= 64, got {n}")
    values: dict[str, list[float]] = {}
    order: list[str] = []
    masked: set[str] = set()
    retained = 0
    for j in range(n):
        t = TWO_PI * j / n
        try:
            snap = sweep_snapshot(spec, t, ch, registry)
        except GeometryError:
            continue
        retained += 1
        near_right = _near_right(snap)
        for name, val in _iter_sample_quantities(spec, t, snap):
            if near_right and name in _RIGHT_SENSITIVE:
                masked.add(name)
                continue
            if name not in values:
                values[name] = []
                order.append(name)
            values[name].append(val)
    if retained == 0:
        raise AllSamplesDegenerateError("every sweep position was degenerate")
    entries = []
    for name in order:
        vals = values[name]
        if len(vals) < 2 or any(not math.isfinite(v) for v in vals):
            continue
        mean = math.fsum(vals) / len(vals)
        spread = (max(vals) - min(vals)) / max(abs(mean), 1e-12)
        flag = spread <= tol and name not in masked
        entries.append(InvariantEntry(name, mean, spread, flag))
    return InvariantReport(tuple(entries), tol)


def sweep_snapshot(spec: FamilySpec, t: float, ch: Channel | None = None,
                   registry: CenterRegistry | None = None) -> MetricSnapshot:
    """Snapshot of the family member at t, with the channel's derived copy.

    For the excentral family the base member is the generating triangle
    and the excentral triangle itself becomes the primed copy.
    """
    if spec.kind == "excentral":
        assert spec.derived_from is not None
        base = triangle_at(spec.derived_from, t)
        base.require_nondegenerate(spec.outer.a)
        derived: Triangle | None = triangle_at(spec, t)
    else:
        base = triangle_at(spec, t)
        base.require_nondegenerate(spec.outer.a)
        derived = None
        if ch is not None and ch.triangle_type != "reference":
            derived = derived_triangle(base, ch.triangle_type)
    if derived is not None:
        derived.require_nondegenerate(spec.outer.a)
    return snapshot(spec, base, derived)


def _iter_sample_quantities(spec: FamilySpec, t: float,
                            snap: MetricSnapshot) -> Iterator[tuple[str, float]]:
    yield from _quantities(snap)
    if spec.kind == "circumcircle":
        # The caustic-side curvature power sum, measured at the tangency
        # points of the member's sides.
        tri = triangle_at(spec, t)
        inner = spec.inner
        assert inner is not None
        total = 0.0
        for q in side_touch_points(spec, tri):
            total += ellipse_curvature(inner, ellipse_param(inner, q)) ** (2.0 / 3.0)
        yield "Σκ'^(2/3)", total
