"""Experiment configuration, serialization, URL encoding, and exports.

An ExperimentConfig captures everything needed to reproduce a scene: the
family and its parameters, four trace channels, sampling density, and the
view (half-width, rotation, background).  It round-trips losslessly
through a versioned JSON document and through a compact URL query string
in which every default is omitted, so a default scene is an empty query.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from typing import Any, Sequence
from urllib.parse import parse_qsl, quote

from pydantic import BaseModel, ConfigDict, ValidationError, field_validator, \
    model_validator

from .families import FAMILY_KINDS, MOUNTED_PINS, FamilySpec, build_family
from .loci import Channel, Locus

SCHEMA_VERSION = 1

_KNOWN_KINDS = FAMILY_KINDS + tuple(f"mounted:{p}" for p in MOUNTED_PINS)

# Per-slot default trace colors (first slot traces the incenter out of the box).
_PALETTE = ((228, 26, 28), (55, 126, 184), (77, 175, 74), (152, 78, 163))
DEFAULT_CHANNELS = (
    Channel(locus_type="xn", center=1, color=_PALETTE[0]),
    Channel(color=_PALETTE[1]),
    Channel(color=_PALETTE[2]),
    Channel(color=_PALETTE[3]),
)

ROTATIONS = (0, 90, 180, 270)


class ConfigError(ValueError):
    """Base class for configuration failures."""


class ConfigParseError(ConfigError):
    """The text could not be parsed at all (bad JSON / malformed query)."""


class ConfigValidationError(ConfigError):
    """The text parsed but violates the schema; message names the fields."""


class FamilyParams(BaseModel):
    """Family kind plus its numeric parameters.

    a, b are the outer semi-axes (canonical orientation a >= b; for the
    circle-outer kinds b is ignored and a is the radius).  aux is the
    caustic aspect ratio for circumcircle and the inradius for poristic;
    seed gives the brocard seed sidelengths.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: str = "confocal"
    a: float = 1.5
    b: float = 1.0
    aux: float | None = None
    seed: tuple[float, float, float] | None = None

    @field_validator("kind")
    @classmethod
    def _check_kind(cls, v: str) -> str:
        if v not in _KNOWN_KINDS:
            raise ValueError(f"unknown family kind {v!r}; one of {_KNOWN_KINDS}")
        return v

    @field_validator("a", "b")
    @classmethod
    def _check_axes(cls, v: float) -> float:
        if not (math.isfinite(v) and v > 0.0):
            raise ValueError(f"semi-axis must be positive and finite, got {v}")
        return v

    @field_validator("aux")
    @classmethod
    def _check_aux(cls, v: float | None) -> float | None:
        if v is not None and not (math.isfinite(v) and v > 0.0):
            raise ValueError(f"aux must be positive and finite, got {v}")
        return v

    @field_validator("seed")
    @classmethod
    def _check_seed(cls, v):
        if v is not None and any(not (math.isfinite(s) and s > 0.0) for s in v):
            raise ValueError(f"seed sidelengths must be positive, got {v}")
        return v

    @model_validator(mode="after")
    def _check_orientation(self) -> "FamilyParams":
        if self.a < self.b:
            raise ValueError(
                f"a/b >= 1 required (canonical orientation), got a={self.a} < b={self.b}; "
                "lenient parsing swaps the axes and rotates the view instead")
        return self


class ExperimentConfig(BaseModel):
    """One reproducible scene: family, four channels, sampling, view."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    family: FamilyParams = FamilyParams()
    channels: tuple[Channel, Channel, Channel, Channel] = DEFAULT_CHANNELS
    samples: int = 720
    rmax: float = 2.0
    rotation: int = 0
    background: tuple[int, int, int] = (255, 255, 255)

    @field_validator("samples")
    @classmethod
    def _check_samples(cls, v: int) -> int:
        if v < 8:
            raise ValueError(f"samples ≥ 8 required, got {v}")
        return v

    @field_validator("rmax")
    @classmethod
    def _check_rmax(cls, v: float) -> float:
        if not (math.isfinite(v) and v > 0.0):
            raise ValueError(f"rmax must be positive and finite, got {v}")
        return v

    @field_validator("rotation")
    @classmethod
    def _check_rotation(cls, v: int) -> int:
        if v not in ROTATIONS:
            raise ValueError(f"rotation must be one of {ROTATIONS}, got {v}")
        return v

    @field_validator("background")
    @classmethod
    def _check_background(cls, v: tuple[int, int, int]) -> tuple[int, int, int]:
        if any(c < 0 or c > 255 for c in v):
            raise ValueError(f"background components must be in 0..255, got {v}")
        return v


DEFAULT_CONFIG = ExperimentConfig()


def build_spec(cfg: ExperimentConfig | FamilyParams) -> FamilySpec:
    """The FamilySpec a config describes (raises FamilyError when invalid)."""
    fam = cfg.family if isinstance(cfg, ExperimentConfig) else cfg
    return build_family(fam.kind, fam.a, fam.b, fam.aux, fam.seed)


def channel_label(ch: Channel) -> str:
    """Short display label for a channel: X1, V2, E12, E1X(X5), ENV(X2,X3), Ω1."""
    if ch.locus_type == "xn":
        return f"X{ch.center}"
    if ch.locus_type in ("e1x", "e2x", "e3x"):
        return f"{ch.locus_type.upper()}(X{ch.center})"
    if ch.locus_type == "env":
        assert ch.env is not None
        return f"ENV(X{ch.env[0]},X{ch.env[1]})"
    if ch.locus_type in ("omega1", "omega2"):
        return "Ω" + ch.locus_type[-1]
    return ch.locus_type.upper()


def validation_messages(err: ValidationError) -> list[str]:
    """One 'field.path: message' string per schema violation."""
    parts = []
    for e in err.errors():
        loc = ".".join(str(p) for p in e["loc"]) or "(root)"
        msg = e["msg"]
        if e["type"] == "extra_forbidden":
            msg = "unknown field"
        parts.append(f"{loc}: {msg}")
    return parts


def _format_validation_error(err: ValidationError) -> str:
    return "; ".join(validation_messages(err))


def _validate_config(payload: dict[str, Any]) -> ExperimentConfig:
    try:
        return ExperimentConfig.model_validate(payload)
    except ValidationError as err:
        raise ConfigValidationError(_format_validation_error(err)) from err


def _canonicalize_axes(payload: dict[str, Any]) -> None:
    """Lenient-mode fixup: swap a < b into a >= b and rotate the view 90°."""
    fam = payload.get("family")
    if not isinstance(fam, dict):
        return
    a, b = fam.get("a", 1.5), fam.get("b", 1.0)
    if isinstance(a, (int, float)) and isinstance(b, (int, float)) and a < b:
        fam["a"], fam["b"] = b, a
        rot = payload.get("rotation", 0)
        if isinstance(rot, int):
            payload["rotation"] = (rot + 90) % 360


# ---------------------------------------------------------------------------
# JSON form

def to_json(cfg: ExperimentConfig) -> str:
    """Versioned, sorted, indented JSON document (deterministic bytes)."""
    payload = {"version": SCHEMA_VERSION, **cfg.model_dump()}
    return json.dumps(payload, indent=2, sort_keys=True)


def from_json(text: str, strict: bool = True) -> ExperimentConfig:
    """Parse a config document; see ConfigParseError/ConfigValidationError.

    strict=False canonicalizes a < b by swapping the axes and adding 90°
    of view rotation instead of rejecting.
    """
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as err:
        raise ConfigParseError(
            f"invalid JSON at line {err.lineno} column {err.colno}: {err.msg}") from err
    if not isinstance(payload, dict):
        raise ConfigValidationError("config document must be a JSON object")
    if "version" not in payload:
        raise ConfigValidationError("version: field required")
    version = payload.pop("version")
    if version != SCHEMA_VERSION:
        raise ConfigValidationError(
            f"version: unsupported schema version {version!r} (expected {SCHEMA_VERSION})")
    # A config document always names its family; to_json never omits it.
    if "family" not in payload:
        raise ConfigValidationError("family: field required")
    if not strict:
        _canonicalize_axes(payload)
    return _validate_config(payload)


# ---------------------------------------------------------------------------
# URL form
#
# Keys (all optional; a default scene is the empty query):
#   f=kind a=<float> b=<float> aux=<float> seed=s1,s2,s3
#   c<i>=locus_type x<i>=center t<i>=triangle_type cv<i>=kind:center
#   e<i>=m:n col<i>=rrggbb          (i = 1..4)
#   smp=samples rmax=<float> rot={0,90,180,270} bg=rrggbb
#   ab=<float> is accepted on input as shorthand for a=<v>, b=1.

def _fnum(v: float) -> str:
    return repr(float(v))


def _hex_color(c: tuple[int, int, int]) -> str:
    return "".join(f"{x:02x}" for x in c)


def _parse_hex_color(v: str, key: str) -> tuple[int, int, int]:
    if len(v) != 6 or any(ch not in "0123456789abcdefABCDEF" for ch in v):
        raise ConfigParseError(f"{key}: expected rrggbb hex color, got {v!r}")
    return (int(v[0:2], 16), int(v[2:4], 16), int(v[4:6], 16))


def _parse_float(v: str, key: str) -> float:
    try:
        return float(v)
    except ValueError:
        raise ConfigParseError(f"{key}: expected a number, got {v!r}") from None


def _parse_int(v: str, key: str) -> int:
    try:
        return int(v)
    except ValueError:
        raise ConfigParseError(f"{key}: expected an integer, got {v!r}") from None


def to_url(cfg: ExperimentConfig) -> str:
    """Compact query-string encoding with every default omitted."""
    fam, dfam = cfg.family, DEFAULT_CONFIG.family
    pairs: list[tuple[str, str]] = []
    if fam.kind != dfam.kind:
        pairs.append(("f", fam.kind))
    if fam.a != dfam.a:
        pairs.append(("a", _fnum(fam.a)))
    if fam.b != dfam.b:
        pairs.append(("b", _fnum(fam.b)))
    if fam.aux is not None:
        pairs.append(("aux", _fnum(fam.aux)))
    if fam.seed is not None:
        pairs.append(("seed", ",".join(_fnum(s) for s in fam.seed)))
    for i, (ch, dch) in enumerate(zip(cfg.channels, DEFAULT_CHANNELS), start=1):
        # Overriding the locus type resets the wiring baseline to a bare
        # channel (slot color kept), so stale defaults don't leak through.
        if ch.locus_type != dch.locus_type:
            pairs.append((f"c{i}", ch.locus_type))
            base = Channel(color=dch.color)
        else:
            base = dch
        if ch.center != base.center and ch.center is not None:
            pairs.append((f"x{i}", str(ch.center)))
        if ch.triangle_type != base.triangle_type:
            pairs.append((f"t{i}", ch.triangle_type))
        if ch.cevian != base.cevian and ch.cevian is not None:
            pairs.append((f"cv{i}", f"{ch.cevian[0]}:{ch.cevian[1]}"))
        if ch.env != base.env and ch.env is not None:
            pairs.append((f"e{i}", f"{ch.env[0]}:{ch.env[1]}"))
        if ch.color != dch.color:
            pairs.append((f"col{i}", _hex_color(ch.color)))
    if cfg.samples != DEFAULT_CONFIG.samples:
        pairs.append(("smp", str(cfg.samples)))
    if cfg.rmax != DEFAULT_CONFIG.rmax:
        pairs.append(("rmax", _fnum(cfg.rmax)))
    if cfg.rotation != DEFAULT_CONFIG.rotation:
        pairs.append(("rot", str(cfg.rotation)))
    if cfg.background != DEFAULT_CONFIG.background:
        pairs.append(("bg", _hex_color(cfg.background)))
    return "&".join(f"{k}={quote(v, safe=',:')}" for k, v in pairs)


def from_url(query: str, strict: bool = True) -> ExperimentConfig:
    """Parse a query string produced by to_url (or typed by hand)."""
    query = query.lstrip("?")
    if query == "":
        return DEFAULT_CONFIG
    try:
        raw = parse_qsl(query, strict_parsing=True)
    except ValueError as err:
        raise ConfigParseError(f"malformed query string: {err}") from err
    seen: dict[str, str] = {}
    for k, v in raw:
        if k in seen:
            raise ConfigParseError(f"duplicate key {k!r} in query")
        seen[k] = v

    fam: dict[str, Any] = {}
    # A c<i> override resets that slot to a bare channel (slot color kept).
    channels = []
    for i, dch in enumerate(DEFAULT_CHANNELS, start=1):
        if f"c{i}" in seen:
            channels.append(Channel(color=dch.color).model_dump())
        else:
            channels.append(dch.model_dump())
    payload: dict[str, Any] = {}
    if "ab" in seen:
        if "a" in seen or "b" in seen:
            raise ConfigParseError("ab is shorthand for a with b=1; do not mix with a/b keys")
        fam["a"], fam["b"] = _parse_float(seen.pop("ab"), "ab"), 1.0
    for key, val in seen.items():
        if key == "f":
            fam["kind"] = val
        elif key == "a":
            fam["a"] = _parse_float(val, key)
        elif key == "b":
            fam["b"] = _parse_float(val, key)
        elif key == "aux":
            fam["aux"] = _parse_float(val, key)
        elif key == "seed":
            parts = val.split(",")
            if len(parts) != 3:
                raise ConfigParseError(f"seed: expected s1,s2,s3, got {val!r}")
            fam["seed"] = [_parse_float(p, "seed") for p in parts]
        elif key == "smp":
            payload["samples"] = _parse_int(val, key)
        elif key == "rmax":
            payload["rmax"] = _parse_float(val, key)
        elif key == "rot":
            payload["rotation"] = _parse_int(val, key)
        elif key == "bg":
            payload["background"] = _parse_hex_color(val, key)
        elif len(key) >= 2 and key[-1] in "1234":
            i = int(key[-1]) - 1
            stem = key[:-1]
            ch = channels[i]
            if stem == "c":
                ch["locus_type"] = val
            elif stem == "x":
                ch["center"] = _parse_int(val, key)
            elif stem == "t":
                ch["triangle_type"] = val
            elif stem == "cv":
                kind, _, num = val.partition(":")
                if not num:
                    raise ConfigParseError(f"{key}: expected kind:center, got {val!r}")
                ch["cevian"] = (kind, _parse_int(num, key))
            elif stem == "e":
                m, _, n = val.partition(":")
                if not n:
                    raise ConfigParseError(f"{key}: expected m:n, got {val!r}")
                ch["env"] = (_parse_int(m, key), _parse_int(n, key))
            elif stem == "col":
                ch["color"] = _parse_hex_color(val, key)
            else:
                raise ConfigParseError(f"unknown query key {key!r}")
        else:
            raise ConfigParseError(f"unknown query key {key!r}")
    if fam:
        payload["family"] = fam
    payload["channels"] = channels
    if not strict:
        _canonicalize_axes(payload)
    return _validate_config(payload)


# ---------------------------------------------------------------------------
# Exports

def _fmt17(x: float) -> str:
    return format(float(x), ".17g")


def export_loci_json(loci: Sequence[Locus]) -> str:
    """Loci as versioned JSON; coordinates carry 17 significant digits."""
    if not loci:
        raise ValueError("export needs at least one locus")
    blocks = []
    for lo in loci:
        pts = ",".join(f"[{_fmt17(p[0])},{_fmt17(p[1])}]" for p in lo.points)
        channel = json.dumps(lo.channel.model_dump(), sort_keys=True)
        skipped = json.dumps(list(lo.skipped))
        blocks.append('{"channel":%s,"class":%s,"points":[%s],"skipped":%s}'
                      % (channel, json.dumps(lo.curve_class.code), pts, skipped))
    return '{"version":%d,"loci":[%s]}' % (SCHEMA_VERSION, ",".join(blocks))


def _rotate_point(p: tuple[float, float], rotation: int) -> tuple[float, float]:
    x, y = p
    if rotation == 90:
        return (-y, x)
    if rotation == 180:
        return (-x, -y)
    if rotation == 270:
        return (y, -x)
    return (x, y)


def _fmtc(x: float) -> str:
    return format(x, ".10g")


def export_svg(loci: Sequence[Locus], cfg: ExperimentConfig) -> str:
    """Scene as a minimal SVG (polyline/circle elements, one per locus).

    Coordinates are rotated per cfg.rotation; each element carries a
    scale(1,-1) transform so the mathematical y-axis points up.  The
    viewBox spans rmax view half-widths of b vertically and the matching
    a/b-scaled span horizontally (swapped at 90/270).
    """
    if not loci:
        raise ValueError("export needs at least one locus")
    a, b = cfg.family.a, cfg.family.b
    hw, hh = cfg.rmax * b * (a / b), cfg.rmax * b
    if cfg.rotation in (90, 270):
        hw, hh = hh, hw
    parts = [
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{_fmtc(-hw)} {_fmtc(-hh)} {_fmtc(2 * hw)} {_fmtc(2 * hh)}" '
        f'style="background-color:#{_hex_color(cfg.background)}">'
    ]
    stroke_w = _fmtc(0.004 * max(hw, hh))
    for lo in loci:
        color = "#" + _hex_color(lo.channel.color)
        pts = [_rotate_point(p, cfg.rotation) for p in lo.points]
        if lo.curve_class.code == "*":
            cx = math.fsum(p[0] for p in pts) / len(pts)
            cy = math.fsum(p[1] for p in pts) / len(pts)
            parts.append(
                f'<circle cx="{_fmtc(cx)}" cy="{_fmtc(cy)}" r="{stroke_w}" '
                f'fill="{color}" transform="scale(1,-1)"/>')
        else:
            coords = " ".join(f"{_fmtc(x)},{_fmtc(y)}" for x, y in pts)
            parts.append(
                f'<polyline points="{coords}" fill="none" stroke="{color}" '
                f'stroke-width="{stroke_w}" transform="scale(1,-1)"/>')
    parts.append("</svg>")
    return "\n".join(parts)


# ---------------------------------------------------------------------------
# Playlists

@dataclass(frozen=True)
class PlaylistItem:
    caption: str
    config: ExperimentConfig


@dataclass(frozen=True)
class Playlist:
    """A named, ordered group of captioned experiment configs."""

    name: str
    items: tuple[PlaylistItem, ...]

    def __post_init__(self) -> None:
        if not self.items:
            raise ValueError(f"playlist {self.name!r} is empty")


def parse_playlists(text: str) -> list[Playlist]:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as err:
        raise ConfigParseError(
            f"invalid playlist JSON at line {err.lineno}: {err.msg}") from err
    if not isinstance(payload, list):
        raise ConfigValidationError("playlist document must be a JSON array")
    out = []
    for entry in payload:
        items = []
        for item in entry.get("items", ()):
            body = dict(item["config"])
            if "version" not in body:
                body["version"] = SCHEMA_VERSION
            items.append(PlaylistItem(item["caption"], from_json(json.dumps(body))))
        out.append(Playlist(entry["name"], tuple(items)))
    return out


def load_playlists() -> list[Playlist]:
    """The playlists shipped with the package."""
    text = resources.files("triloci.data").joinpath("playlists.json").read_text("utf-8")
    return parse_playlists(text)
