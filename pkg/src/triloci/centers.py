"""Triangle centers, derived triangles, and cevian-style constructions.

Centers are evaluated from a data-driven registry of barycentric weight
functions (see data/centers.tsv for the line grammar).  A center is the
normalized weighted combination of the vertices; weight functions may be
singular on degenerate inputs, in which case the documented errors are
raised rather than returning a non-finite point.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable

from .geom import (Ellipse, GeometryError, Line, Point2, dist, line_intersection,
                   midpoint, second_intersection, unit)
from .triangle import DegenerateTriangleError, Triangle

DERIVED_KINDS = ("reference", "medial", "orthic", "excentral", "intouch",
                 "extouch", "tangential", "anticomplementary")
CEVIAN_KINDS = ("cevian", "anticevian", "circumcevian", "pedal", "antipedal")
CIRCLE_KINDS = ("incircle", "circumcircle", "ninepoint", "bevan")

_RIGHT_ANGLE_EPS = 1e-9


class UnknownCenterError(GeometryError):
    """The requested center index is not in the registry."""


class ZeroWeightSumError(GeometryError):
    """Barycentric weights are undefined or sum to (numerically) zero."""


class RegistryParseError(ValueError):
    """A registry file line could not be parsed."""


@dataclass(frozen=True)
class Circle:
    center: Point2
    radius: float


# ---------------------------------------------------------------------------
# Weight-function registry

_ALLOWED_NAMES = {"s1", "s2", "s3", "a1", "a2", "a3", "w", "S", "pi"}
_ALLOWED_FUNCS = {"cos", "sin", "tan", "sqrt"}
_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>\^|[-+*/()]))")


def _compile_expression(expr: str, where: str):
    """Translate a registry expression to a Python code object."""
    pos = 0
    parts: list[str] = []
    needs_angles = False
    needs_area = False
    while pos < len(expr):
        m = _TOKEN_RE.match(expr, pos)
        if m is None or m.end() == pos:
            tail = expr[pos:].strip()
            if not tail:
                break
            raise RegistryParseError(f"{where}: unexpected token at {tail[:12]!r}")
        if m.group("name"):
            name = m.group("name")
            if name not in _ALLOWED_NAMES and name not in _ALLOWED_FUNCS:
                raise RegistryParseError(f"{where}: unknown name {name!r}")
            if name in ("a1", "a2", "a3", "w"):
                needs_angles = True
            if name in ("S", "w"):
                needs_area = True
            parts.append(name)
        elif m.group("op"):
            parts.append("**" if m.group("op") == "^" else m.group("op"))
        else:
            parts.append(m.group("num"))
        pos = m.end()
    if not parts:
        raise RegistryParseError(f"{where}: empty expression")
    code = compile("".join(parts), where, "eval")
    return code, needs_angles, needs_area


_FUNC_ENV = {"cos": math.cos, "sin": math.sin, "tan": math.tan,
             "sqrt": math.sqrt, "pi": math.pi, "__builtins__": {}}


def _make_weight(code, needs_angles: bool, needs_area: bool) -> Callable[[float, float, float], float]:
    def weight(s1: float, s2: float, s3: float) -> float:
        env: dict[str, float] = {"s1": s1, "s2": s2, "s3": s3}
        if needs_angles or needs_area:
            p = 0.5 * (s1 + s2 + s3)
            h = p * (p - s1) * (p - s2) * (p - s3)
            area = math.sqrt(h) if h > 0.0 else 0.0
            if needs_area:
                env["S"] = area
            if needs_angles:
                clamp = lambda c: min(1.0, max(-1.0, c))
                env["a1"] = math.acos(clamp((s2 * s2 + s3 * s3 - s1 * s1) / (2.0 * s2 * s3)))
                env["a2"] = math.acos(clamp((s3 * s3 + s1 * s1 - s2 * s2) / (2.0 * s3 * s1)))
                env["a3"] = math.acos(clamp((s1 * s1 + s2 * s2 - s3 * s3) / (2.0 * s1 * s2)))
                env["w"] = math.atan2(4.0 * area, s1 * s1 + s2 * s2 + s3 * s3)
        return eval(code, _FUNC_ENV, env)  # noqa: S307 - restricted names only

    return weight


class CenterRegistry:
    """Maps center indices to barycentric weight functions."""

    def __init__(self, entries: dict[int, Callable[[float, float, float], float]],
                 sources: dict[int, str]) -> None:
        self._entries = dict(entries)
        self.sources = dict(sources)

    def __contains__(self, k: int) -> bool:
        return k in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def indices(self) -> list[int]:
        return sorted(self._entries)

    def weight(self, k: int, s1: float, s2: float, s3: float) -> float:
        try:
            fn = self._entries[k]
        except KeyError:
            raise UnknownCenterError(f"center X{k} is not registered") from None
        return fn(s1, s2, s3)

    @classmethod
    def from_file(cls, path: str | Path, base: "CenterRegistry | None" = None) -> "CenterRegistry":
        entries: dict[int, Callable[[float, float, float], float]] = dict(base._entries) if base else {}
        sources: dict[int, str] = dict(base.sources) if base else {}
        text = Path(path).read_text(encoding="utf-8")
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "\t" not in line:
                raise RegistryParseError(f"{path}:{lineno}: expected '<index><TAB><expression>'")
            head, expr = line.split("\t", 1)
            try:
                k = int(head.strip())
            except ValueError:
                raise RegistryParseError(f"{path}:{lineno}: bad center index {head.strip()!r}") from None
            if k <= 0:
                raise RegistryParseError(f"{path}:{lineno}: center index must be positive")
            code, na, ns = _compile_expression(expr.strip(), f"{path}:{lineno}")
            entries[k] = _make_weight(code, na, ns)
            sources[k] = expr.strip()
        return cls(entries, sources)


_DEFAULT_REGISTRY: CenterRegistry | None = None


def default_registry() -> CenterRegistry:
    global _DEFAULT_REGISTRY
    if _DEFAULT_REGISTRY is None:
        path = resources.files("triloci.data").joinpath("centers.tsv")
        _DEFAULT_REGISTRY = CenterRegistry.from_file(str(path))
    return _DEFAULT_REGISTRY


# ---------------------------------------------------------------------------
# Center evaluation


def center(tri: Triangle, k: int, registry: CenterRegistry | None = None) -> Point2:
    """Triangle center X_k as the normalized barycentric vertex combination."""
    reg = registry if registry is not None else default_registry()
    if k not in reg:
        raise UnknownCenterError(f"center X{k} is not registered")
    tri.require_nondegenerate()
    s1, s2, s3 = tri.sides
    try:
        w1 = reg.weight(k, s1, s2, s3)
        w2 = reg.weight(k, s2, s3, s1)
        w3 = reg.weight(k, s3, s1, s2)
    except (ZeroDivisionError, ValueError, OverflowError) as exc:
        raise ZeroWeightSumError(f"X{k} weights are undefined for this triangle") from exc
    if not (math.isfinite(w1) and math.isfinite(w2) and math.isfinite(w3)):
        raise ZeroWeightSumError(f"X{k} weights are non-finite for this triangle")
    tot = w1 + w2 + w3
    if tot == 0.0 or abs(tot) < 1e-12 * (abs(w1) + abs(w2) + abs(w3)):
        raise ZeroWeightSumError(f"X{k} weight sum vanishes for this triangle")
    p = Point2((w1 * tri.v1[0] + w2 * tri.v2[0] + w3 * tri.v3[0]) / tot,
               (w1 * tri.v1[1] + w2 * tri.v2[1] + w3 * tri.v3[1]) / tot)
    if not (math.isfinite(p[0]) and math.isfinite(p[1])):
        raise ZeroWeightSumError(f"X{k} evaluates to a non-finite point")
    return p


def _combine(tri: Triangle, w1: float, w2: float, w3: float) -> Point2:
    tot = w1 + w2 + w3
    if tot == 0.0 or abs(tot) < 1e-12 * (abs(w1) + abs(w2) + abs(w3)):
        raise ZeroWeightSumError("barycentric weight sum vanishes")
    return Point2((w1 * tri.v1[0] + w2 * tri.v2[0] + w3 * tri.v3[0]) / tot,
                  (w1 * tri.v1[1] + w2 * tri.v2[1] + w3 * tri.v3[1]) / tot)


def circumcircle_of(tri: Triangle) -> Circle:
    tri.require_nondegenerate()
    s1, s2, s3 = tri.sides
    w1 = s1 * s1 * (s2 * s2 + s3 * s3 - s1 * s1)
    w2 = s2 * s2 * (s3 * s3 + s1 * s1 - s2 * s2)
    w3 = s3 * s3 * (s1 * s1 + s2 * s2 - s3 * s3)
    c = _combine(tri, w1, w2, w3)
    return Circle(c, dist(c, tri.v1))


# ---------------------------------------------------------------------------
# Derived triangles


def _foot(p: Point2, a: Point2, b: Point2) -> Point2:
    """Foot of the perpendicular from p onto line ab."""
    ux, uy = b[0] - a[0], b[1] - a[1]
    den = ux * ux + uy * uy
    if den == 0.0:
        raise DegenerateTriangleError("projection onto a zero-length side")
    s = ((p[0] - a[0]) * ux + (p[1] - a[1]) * uy) / den
    return Point2(a[0] + s * ux, a[1] + s * uy)


def derived_triangle(tri: Triangle, kind: str) -> Triangle:
    """One of DERIVED_KINDS built from the reference triangle."""
    if kind not in DERIVED_KINDS:
        raise GeometryError(f"unknown derived-triangle kind {kind!r}")
    if kind == "reference":
        return tri
    tri.require_nondegenerate()
    v1, v2, v3 = tri.vertices
    if kind == "medial":
        return Triangle(midpoint(v2, v3), midpoint(v3, v1), midpoint(v1, v2))
    if kind == "anticomplementary":
        return Triangle(Point2(v2[0] + v3[0] - v1[0], v2[1] + v3[1] - v1[1]),
                        Point2(v3[0] + v1[0] - v2[0], v3[1] + v1[1] - v2[1]),
                        Point2(v1[0] + v2[0] - v3[0], v1[1] + v2[1] - v3[1]))
    if kind == "orthic":
        cos_min = min(abs(math.cos(t)) for t in tri.angles)
        if cos_min < _RIGHT_ANGLE_EPS:
            raise DegenerateTriangleError("orthic triangle of a right triangle degenerates")
        return Triangle(_foot(v1, v2, v3), _foot(v2, v3, v1), _foot(v3, v1, v2))
    s1, s2, s3 = tri.sides
    if kind == "excentral":
        return Triangle(_combine(tri, -s1, s2, s3),
                        _combine(tri, s1, -s2, s3),
                        _combine(tri, s1, s2, -s3))
    if kind == "intouch":
        p = 0.5 * (s1 + s2 + s3)
        f = lambda a, b, sa, sb: Point2(a[0] + (p - sa) / sb * (b[0] - a[0]),
                                        a[1] + (p - sa) / sb * (b[1] - a[1]))
        return Triangle(f(v2, v3, s2, s1), f(v3, v1, s3, s2), f(v1, v2, s1, s3))
    if kind == "extouch":
        p = 0.5 * (s1 + s2 + s3)
        f = lambda a, b, sa, sb: Point2(a[0] + (p - sa) / sb * (b[0] - a[0]),
                                        a[1] + (p - sa) / sb * (b[1] - a[1]))
        return Triangle(f(v2, v3, s3, s1), f(v3, v1, s1, s2), f(v1, v2, s2, s3))
    # tangential: bounded by circumcircle tangents at the vertices
    return Triangle(_combine(tri, -s1 * s1, s2 * s2, s3 * s3),
                    _combine(tri, s1 * s1, -s2 * s2, s3 * s3),
                    _combine(tri, s1 * s1, s2 * s2, -s3 * s3))


# ---------------------------------------------------------------------------
# Cevian-style constructions


def _barycentrics_of(tri: Triangle, p: Point2) -> tuple[float, float, float]:
    """Normalized barycentric coordinates of an arbitrary point."""
    v1, v2, v3 = tri.vertices
    det = (v2[1] - v3[1]) * (v1[0] - v3[0]) + (v3[0] - v2[0]) * (v1[1] - v3[1])
    if det == 0.0:
        raise DegenerateTriangleError("barycentrics of a flat triangle")
    u = ((v2[1] - v3[1]) * (p[0] - v3[0]) + (v3[0] - v2[0]) * (p[1] - v3[1])) / det
    v = ((v3[1] - v1[1]) * (p[0] - v3[0]) + (v1[0] - v3[0]) * (p[1] - v3[1])) / det
    return u, v, 1.0 - u - v


def cevian_like(tri: Triangle, kind: str, m: int,
                registry: CenterRegistry | None = None) -> Triangle:
    """Cevian/anticevian/circumcevian/pedal/antipedal triangle of X_m."""
    if kind not in CEVIAN_KINDS:
        raise GeometryError(f"unknown cevian-like kind {kind!r}")
    p = center(tri, m, registry)
    v1, v2, v3 = tri.vertices
    if kind in ("cevian", "anticevian"):
        u, v, w = _barycentrics_of(tri, p)
        if kind == "cevian":
            return Triangle(_combine(tri, 0.0, v, w),
                            _combine(tri, u, 0.0, w),
                            _combine(tri, u, v, 0.0))
        return Triangle(_combine(tri, -u, v, w),
                        _combine(tri, u, -v, w),
                        _combine(tri, u, v, -w))
    if kind == "circumcevian":
        cc = circumcircle_of(tri)
        boundary = Ellipse(cc.center, cc.radius, cc.radius)
        out = []
        for vtx in (v1, v2, v3):
            if dist(vtx, p) < 1e-12 * cc.radius:
                raise GeometryError("circumcevian is undefined when X_m sits on a vertex")
            out.append(second_intersection(boundary, vtx, unit(p[0] - vtx[0], p[1] - vtx[1])))
        return Triangle(*out)
    if kind == "pedal":
        return Triangle(_foot(p, v2, v3), _foot(p, v3, v1), _foot(p, v1, v2))
    # antipedal: through each vertex, the perpendicular to the segment to p
    def perp_at(vtx: Point2) -> Line:
        return Line(vtx, unit(-(p[1] - vtx[1]), p[0] - vtx[0]))

    l1, l2, l3 = perp_at(v1), perp_at(v2), perp_at(v3)
    return Triangle(line_intersection(l2, l3), line_intersection(l3, l1),
                    line_intersection(l1, l2))


# ---------------------------------------------------------------------------
# Brocard points and notable circles


def brocard_points(tri: Triangle) -> tuple[Point2, Point2]:
    """First and second Brocard points."""
    tri.require_nondegenerate()
    s1, s2, s3 = tri.sides
    q1, q2, q3 = 1.0 / (s1 * s1), 1.0 / (s2 * s2), 1.0 / (s3 * s3)
    first = _combine(tri, q2, q3, q1)
    second = _combine(tri, q3, q1, q2)
    return first, second


def notable_circle(tri: Triangle, which: str,
                   registry: CenterRegistry | None = None) -> Circle:
    """One of CIRCLE_KINDS attached to the triangle."""
    if which not in CIRCLE_KINDS:
        raise GeometryError(f"unknown circle kind {which!r}")
    if which == "incircle":
        return Circle(center(tri, 1, registry), tri.inradius)
    if which == "circumcircle":
        return circumcircle_of(tri)
    if which == "ninepoint":
        return Circle(center(tri, 5, registry), 0.5 * tri.circumradius)
    return circumcircle_of(derived_triangle(tri, "excentral"))
