"""Config schema, JSON/URL round-trips, exports, and shipped playlists."""

import json
import math

import pytest
from hypothesis import given, settings, strategies as st

from triloci.geom import CurveClass
from triloci.families import FamilyError
from triloci.loci import Channel, Locus, sample_locus
from triloci.experiment import (
    DEFAULT_CHANNELS,
    DEFAULT_CONFIG,
    ConfigParseError,
    ConfigValidationError,
    ExperimentConfig,
    FamilyParams,
    build_spec,
    channel_label,
    export_loci_json,
    export_svg,
    from_json,
    from_url,
    load_playlists,
    parse_playlists,
    to_json,
    to_url,
)

FANCY = ExperimentConfig(
    family=FamilyParams(kind="circumcircle", a=2.0, b=2.0, aux=3.0),
    channels=(
        Channel(locus_type="xn", center=3, triangle_type="orthic", color=(1, 2, 3)),
        Channel(locus_type="env", env=(2, 4), color=(55, 126, 184)),
        Channel(locus_type="e1x", center=5, cevian=("pedal", 3), color=(0, 0, 0)),
        Channel(locus_type="omega2", color=(152, 78, 163)),
    ),
    samples=240,
    rmax=3.5,
    rotation=90,
    background=(250, 250, 245),
)


# ---------------------------------------------------------------------------
# Round-trips


def test_default_config_is_the_empty_url():
    assert to_url(DEFAULT_CONFIG) == ""
    assert from_url("") == DEFAULT_CONFIG
    assert from_url("?") == DEFAULT_CONFIG


def test_json_roundtrip_and_determinism():
    text = to_json(FANCY)
    assert from_json(text) == FANCY
    assert to_json(FANCY) == text  # byte-for-byte deterministic
    payload = json.loads(text)
    assert payload["version"] == 1
    assert payload["family"]["kind"] == "circumcircle"


def test_url_roundtrip_nontrivial():
    url = to_url(FANCY)
    assert from_url(url) == FANCY
    # defaults are omitted: the default kind and b never appear
    assert "f=confocal" not in url
    assert "smp=240" in url and "rot=90" in url


def test_url_omits_per_field_defaults():
    cfg = ExperimentConfig(family=FamilyParams(a=2.0))
    url = to_url(cfg)
    assert url == "a=2.0"
    cfg2 = ExperimentConfig(samples=64)
    assert to_url(cfg2) == "smp=64"


def test_ab_shorthand():
    cfg = from_url("ab=2.0")
    assert cfg.family.a == 2.0 and cfg.family.b == 1.0
    with pytest.raises(ConfigParseError):
        from_url("ab=2.0&a=1.5")


def test_channel_url_override_resets_slot():
    # changing slot 1 to v1 must not inherit the default center wiring
    cfg = from_url("c1=v1")
    assert cfg.channels[0].locus_type == "v1"
    assert cfg.channels[0].center is None
    assert cfg.channels[0].color == DEFAULT_CHANNELS[0].color
    # untouched slots keep their defaults
    assert cfg.channels[1] == DEFAULT_CHANNELS[1]


_CENTER_IDS = st.sampled_from((1, 2, 3, 4, 5, 6, 9, 20, 57, 100))
_COLORS = st.tuples(st.integers(0, 255), st.integers(0, 255), st.integers(0, 255))


@st.composite
def _channels(draw):
    lt = draw(st.sampled_from(("off", "xn", "v1", "v3", "env", "e12", "e2x",
                               "omega1", "omega2")))
    kw = {"locus_type": lt, "color": draw(_COLORS)}
    if lt in ("xn", "e2x"):
        kw["center"] = draw(_CENTER_IDS)
    if lt == "env":
        kw["env"] = (draw(_CENTER_IDS), draw(_CENTER_IDS))
    kw["triangle_type"] = draw(st.sampled_from(("reference", "medial", "excentral")))
    if draw(st.booleans()):
        kw["cevian"] = (draw(st.sampled_from(("cevian", "pedal", "anticevian"))),
                        draw(_CENTER_IDS))
    return Channel(**kw)


@st.composite
def _configs(draw):
    kind = draw(st.sampled_from(("confocal", "incircle", "homothetic", "dual",
                                 "circumcircle", "poristic", "brocard", "excentral",
                                 "mounted:fs", "mounted:major")))
    b = draw(st.floats(0.25, 2.0, allow_nan=False))
    a = b + draw(st.floats(0.0, 3.0, allow_nan=False))
    fam = {"kind": kind, "a": a, "b": b}
    if draw(st.booleans()):
        fam["aux"] = draw(st.floats(0.1, 3.0, allow_nan=False))
    if draw(st.booleans()):
        fam["seed"] = (draw(st.floats(3.0, 4.0)), draw(st.floats(4.0, 5.0)),
                       draw(st.floats(5.0, 6.0)))
    return ExperimentConfig(
        family=FamilyParams(**fam),
        channels=tuple(draw(_channels()) for _ in range(4)),
        samples=draw(st.integers(8, 2000)),
        rmax=draw(st.floats(0.5, 8.0, allow_nan=False)),
        rotation=draw(st.sampled_from((0, 90, 180, 270))),
        background=draw(_COLORS),
    )


@given(_configs())
@settings(max_examples=120, deadline=None)
def test_roundtrip_is_lossless(cfg):
    assert from_json(to_json(cfg)) == cfg
    assert from_url(to_url(cfg)) == cfg


# ---------------------------------------------------------------------------
# Validation and error reporting


def test_strict_mode_rejects_swapped_axes():
    doc = json.dumps({"version": 1, "family": {"a": 1.0, "b": 2.0}})
    with pytest.raises(ConfigValidationError, match="canonical orientation"):
        from_json(doc)


def test_lenient_mode_swaps_axes_and_rotates():
    doc = json.dumps({"version": 1, "family": {"a": 1.0, "b": 2.0}, "rotation": 270})
    cfg = from_json(doc, strict=False)
    assert cfg.family.a == 2.0 and cfg.family.b == 1.0
    assert cfg.rotation == 0  # 270 + 90 wraps around
    url_cfg = from_url("a=1.0&b=2.0", strict=False)
    assert url_cfg.family.a == 2.0 and url_cfg.rotation == 90


def test_from_json_error_paths():
    with pytest.raises(ConfigParseError, match="line"):
        from_json("{not json")
    with pytest.raises(ConfigValidationError, match="JSON object"):
        from_json("[1, 2]")
    with pytest.raises(ConfigValidationError, match="version"):
        from_json("{}")
    with pytest.raises(ConfigValidationError, match="unsupported schema version"):
        from_json('{"version": 99, "family": {}}')
    with pytest.raises(ConfigValidationError, match="family: field required"):
        from_json('{"version": 1}')
    with pytest.raises(ConfigValidationError, match="samples"):
        from_json('{"version": 1, "family": {}, "samples": 4}')
    with pytest.raises(ConfigValidationError, match="unknown field"):
        from_json('{"version": 1, "family": {}, "wat": true}')
    with pytest.raises(ConfigValidationError, match="family.a"):
        from_json('{"version": 1, "family": {"a": -2.0}}')


def test_from_url_error_paths():
    for query in ("a=1&a=2",            # duplicate key
                  "wat=1",              # unknown key
                  "col1=red",           # bad color
                  "smp=many",           # bad integer
                  "a=wide",             # bad float
                  "cv1=pedal",          # missing :center
                  "e1=3",               # missing :n
                  "seed=1,2",           # wrong arity
                  "a==&=",              # malformed query
                  "col9=000000"):       # slot out of range
        with pytest.raises(ConfigParseError):
            from_url(query)
    with pytest.raises(ConfigValidationError):
        from_url("c1=teapot")  # parses fine, fails the schema
    with pytest.raises(ConfigValidationError):
        from_url("smp=4")


def test_build_spec_reports_family_errors():
    cfg = ExperimentConfig(family=FamilyParams(kind="poristic", a=1.0, aux=0.9))
    with pytest.raises(FamilyError):
        build_spec(cfg)  # inradius must satisfy r <= R/2
    spec = build_spec(DEFAULT_CONFIG)
    assert spec.kind == "confocal"


def test_channel_labels():
    assert channel_label(Channel(locus_type="xn", center=7)) == "X7"
    assert channel_label(Channel(locus_type="v2")) == "V2"
    assert channel_label(Channel(locus_type="e12")) == "E12"
    assert channel_label(Channel(locus_type="e1x", center=5)) == "E1X(X5)"
    assert channel_label(Channel(locus_type="env", env=(2, 3))) == "ENV(X2,X3)"
    assert channel_label(Channel(locus_type="omega1")) == "Ω1"
    assert channel_label(Channel(locus_type="off")) == "OFF"


# ---------------------------------------------------------------------------
# Exports


def _tiny_locus(points, cls=CurveClass.ELLIPSE, channel=None):
    return Locus(points=tuple(points), skipped=(5,),
                 curve_class=cls, channel=channel or Channel())


def test_loci_export_is_lossless():
    pts = ((0.1, 0.2), (0.3, 0.4), (-1.0 / 3.0, 2.0 / 7.0))
    text = export_loci_json([_tiny_locus(pts)])
    assert '"version":1' in text
    assert "0.10000000000000001" in text  # 17 significant digits
    payload = json.loads(text)
    block = payload["loci"][0]
    assert block["class"] == "E"
    assert block["skipped"] == [5]
    for got, want in zip(block["points"], pts):
        assert got[0] == want[0] and got[1] == want[1]  # exact float recovery
    assert export_loci_json([_tiny_locus(pts)]) == text
    with pytest.raises(ValueError):
        export_loci_json([])


def test_svg_scene_layout():
    cfg = ExperimentConfig()  # a=1.5, b=1, rmax=2
    loci = [
        _tiny_locus(((1.0, 2.0), (0.5, -0.25)), channel=Channel(color=(255, 0, 0))),
        _tiny_locus(((0.5, 0.5),) * 3, cls=CurveClass.POINT,
                    channel=Channel(color=(0, 0, 255))),
    ]
    svg = export_svg(loci, cfg)
    assert svg.startswith("<svg ")
    assert 'viewBox="-3 -2 6 4"' in svg
    assert svg.count("<polyline") == 1
    assert svg.count("<circle") == 1  # point-class loci render as dots
    assert 'stroke="#ff0000"' in svg
    assert 'fill="#0000ff"' in svg
    assert "background-color:#ffffff" in svg
    with pytest.raises(ValueError):
        export_svg([], cfg)


def test_svg_rotation():
    cfg = ExperimentConfig(rotation=180)
    svg = export_svg([_tiny_locus(((1.0, 2.0), (3.0, 4.0)))], cfg)
    assert 'points="-1,-2 -3,-4"' in svg
    cfg90 = ExperimentConfig(rotation=90)
    svg90 = export_svg([_tiny_locus(((1.0, 2.0), (3.0, 4.0)))], cfg90)
    assert 'points="-2,1 -4,3"' in svg90
    assert 'viewBox="-2 -3 4 6"' in svg90  # the view swaps spans at 90 degrees


def test_svg_pipeline_is_deterministic():
    cfg = ExperimentConfig(samples=64)
    spec = build_spec(cfg)
    runs = []
    for _ in range(2):
        locus = sample_locus(spec, cfg.channels[0], n=cfg.samples)
        runs.append(export_svg([locus], cfg))
    assert runs[0] == runs[1]


# ---------------------------------------------------------------------------
# Playlists


def test_shipped_playlists_are_valid():
    playlists = load_playlists()
    assert len(playlists) >= 2
    total = sum(len(p.items) for p in playlists)
    assert total >= 12
    for p in playlists:
        assert p.name
        for item in p.items:
            assert item.caption.strip()
            assert isinstance(item.config, ExperimentConfig)
            build_spec(item.config)  # every entry describes a buildable family


def test_parse_playlists_errors():
    with pytest.raises(ConfigParseError):
        parse_playlists("{nope")
    with pytest.raises(ConfigValidationError):
        parse_playlists('{"name": "x"}')
    with pytest.raises(ValueError):
        parse_playlists('[{"name": "empty", "items": []}]')
