"""Locus sampling, envelopes, metric snapshots, and invariant detection."""

import math

import pytest
from pydantic import ValidationError

from triloci.geom import (ConicCoeffs, CurveClass, Ellipse, Point2, dist,
                          evolute_point, fit_conic, point_ellipse_distance)
from triloci.families import FamilySpec, build_family, mounted_spec, triangle_at
from triloci.loci import (
    AllSamplesDegenerateError,
    Channel,
    detect_invariants,
    envelope,
    sample_locus,
    snapshot,
    sweep_snapshot,
)

O = Point2(0.0, 0.0)
SQ3 = math.sqrt(3.0)


def circle_pair():
    return FamilySpec("incircle", Ellipse(O, 1.0, 1.0), Ellipse(O, 0.5, 0.5))


def hausdorff(ps, qs):
    def one_sided(xs, ys):
        return max(min(dist(x, y) for y in ys) for x in xs)

    return max(one_sided(ps, qs), one_sided(qs, ps))


# ---------------------------------------------------------------------------
# Metric snapshots


def test_snapshot_of_equilateral_member():
    spec = circle_pair()
    snap = snapshot(spec, triangle_at(spec, 0.0))
    assert abs(snap.L - 3.0 * SQ3) < 1e-9
    assert abs(snap.A - 0.75 * SQ3) < 1e-9
    assert abs(snap.r / snap.R - 0.5) < 1e-9
    assert abs(sum(math.cos(t) for t in snap.angles) - 1.5) < 1e-9
    assert abs(snap.cot_omega - SQ3) < 1e-9
    assert max(abs(k - 1.0) for k in snap.kappas) < 1e-12  # unit-circle curvature
    assert snap.J is None
    assert snap.primed is None


def test_snapshot_of_right_triangle_member():
    # pins at the right-angle legs, free vertex on the outer ellipse at (0, 3)
    spec = mounted_spec((Point2(0.0, 0.0), Point2(4.0, 0.0)), 4.0, 3.0)
    snap = snapshot(spec, triangle_at(spec, math.pi / 2.0))
    assert (snap.s1, snap.s2, snap.s3) == pytest.approx((5.0, 3.0, 4.0), abs=1e-12)
    assert abs(snap.L - 12.0) < 1e-12
    assert abs(snap.A - 6.0) < 1e-12
    assert abs(snap.r - 1.0) < 1e-12
    assert abs(snap.R - 2.5) < 1e-12
    assert abs(snap.theta1 - math.pi / 2.0) < 1e-12
    assert abs(snap.cot_omega - 25.0 / 12.0) < 1e-12
    # (0,0) is interior, so kappa1 is absent; (4,0) and (0,3) are ellipse apexes
    assert math.isnan(snap.kappa1)
    assert abs(snap.kappa2 - 4.0 / 9.0) < 1e-12
    assert abs(snap.kappa3 - 3.0 / 16.0) < 1e-12


def test_confocal_snapshot_conserves_perimeter_and_j():
    spec = build_family("confocal", 2.0, 1.0)
    a = snapshot(spec, triangle_at(spec, 0.4))
    b = snapshot(spec, triangle_at(spec, 1.9))
    assert abs(a.L - b.L) < 1e-9
    assert a.J is not None and b.J is not None
    assert abs(a.J - b.J) < 1e-9
    assert abs(a.r / a.R - b.r / b.R) < 1e-9


def test_sweep_snapshot_attaches_derived_copy():
    spec = build_family("confocal", 1.5, 1.0)
    ch = Channel(locus_type="xn", center=1, triangle_type="medial")
    snap = sweep_snapshot(spec, 0.3, ch)
    assert snap.primed is not None
    assert abs(snap.primed.L - 0.5 * snap.L) < 1e-12  # medial halves every length


def test_excentral_family_snapshot_measures_parent_and_member():
    spec = build_family("excentral", 2.0, 1.0)
    snap = sweep_snapshot(spec, 0.8)
    assert snap.primed is not None
    parent = snapshot(spec, triangle_at(spec.derived_from, 0.8))
    assert abs(snap.L - parent.L) < 1e-12
    member = triangle_at(spec, 0.8)
    assert abs(snap.primed.A - member.area) < 1e-12


# ---------------------------------------------------------------------------
# Locus sampling and classification


def test_confocal_incenter_locus_is_ellipse():
    spec = build_family("confocal", 1.5, 1.0)
    locus = sample_locus(spec, Channel(locus_type="xn", center=1), n=256)
    assert locus.curve_class is CurveClass.ELLIPSE
    assert len(locus.points) == 256
    assert locus.skipped == ()


def test_confocal_mittenpunkt_locus_is_point():
    spec = build_family("confocal", 1.5, 1.0)
    locus = sample_locus(spec, Channel(locus_type="xn", center=9), n=128)
    assert locus.curve_class is CurveClass.POINT
    for p in locus.points:
        assert dist(p, O) < 1e-8 * spec.outer.a


def test_vertex_locus_recovers_outer_conic():
    spec = build_family("confocal", 1.5, 1.0)
    locus = sample_locus(spec, Channel(locus_type="v1"), n=128)
    assert locus.curve_class is CurveClass.ELLIPSE
    coeffs, _rms = fit_conic(locus.points)
    want = ConicCoeffs(*spec.outer.coefficients()).canonical()
    got = coeffs.canonical()
    assert max(abs(g - w) for g, w in zip(got, want)) < 1e-8


def test_brocard_point_locus_is_circle():
    # in the Brocard porism both Brocard points are fixed; the locus degenerates
    spec = build_family("brocard", 1.0)
    locus = sample_locus(spec, Channel(locus_type="omega1"), n=128)
    assert locus.curve_class is CurveClass.POINT
    locus2 = sample_locus(spec, Channel(locus_type="omega2"), n=128)
    assert locus2.curve_class is CurveClass.POINT
    assert dist(locus.points[0], locus2.points[0]) > 1e-3  # two distinct fixed points


def test_channel_through_derived_and_cevian_stages():
    spec = build_family("confocal", 1.5, 1.0)
    ch = Channel(locus_type="xn", center=3, triangle_type="medial",
                 cevian=("cevian", 2))
    locus = sample_locus(spec, ch, n=64)
    # cevian-of-centroid of the medial triangle is its own medial triangle;
    # oracle: rebuild the stage chain directly at one sample
    from triloci.centers import center as center_of, derived_triangle, cevian_like

    tri = cevian_like(derived_triangle(triangle_at(spec, 0.0), "medial"), "cevian", 2)
    assert dist(locus.points[0], center_of(tri, 3)) < 1e-12


def test_orthic_channel_skips_right_angle_members():
    # mounted family on the focal chord: at t = pi/2 the member is right-angled
    spec = mounted_spec("fs", math.sqrt(2.0), 1.0)
    ch = Channel(locus_type="xn", center=1, triangle_type="orthic")
    locus = sample_locus(spec, ch, n=720)
    assert locus.skipped  # the right-angled positions fall out
    assert len(locus.points) + len(locus.skipped) == 720


def test_all_samples_degenerate_raises():
    # diameter pins on a circle: every member is right-angled (Thales),
    # so the orthic stage fails at every sweep position
    spec = mounted_spec("major", 1.0, 1.0)
    with pytest.raises(AllSamplesDegenerateError):
        sample_locus(spec, Channel(locus_type="xn", center=2, triangle_type="orthic"), n=16)


def test_sample_locus_input_validation():
    spec = build_family("confocal", 1.5, 1.0)
    with pytest.raises(ValueError):
        sample_locus(spec, Channel(locus_type="off"))
    with pytest.raises(ValueError):
        sample_locus(spec, Channel(locus_type="v1"), n=7)
    with pytest.raises(ValueError):
        envelope(spec, Channel(locus_type="e12"), n=16)
    with pytest.raises(ValueError):
        envelope(spec, Channel(locus_type="v1"), n=64)
    with pytest.raises(ValueError):
        detect_invariants(spec, Channel(locus_type="v1"), n=32)


# ---------------------------------------------------------------------------
# Envelopes


def test_side_envelope_recovers_the_caustic():
    # every envelope point must land on the caustic (the sides are its tangents)
    spec = build_family("confocal", 2.0, 1.0)
    pts = envelope(spec, Channel(locus_type="e12"), n=720, delta=1e-4)
    worst = max(point_ellipse_distance(spec.inner, p) for p in pts)
    assert worst < 1e-6 * spec.outer.a


def test_poristic_side_envelope_is_the_incircle():
    spec = build_family("poristic", 1.0, aux=0.5)
    pts = envelope(spec, Channel(locus_type="e23"), n=128, delta=1e-4)
    for p in pts:
        assert abs(dist(p, spec.inner.center) - 0.5) < 1e-6


def test_incircle_family_side_envelope():
    spec = build_family("incircle", 2.0, 1.0)
    pts = envelope(spec, Channel(locus_type="e31"), n=128, delta=1e-4)
    r = 2.0 / 3.0
    for p in pts:
        assert abs(dist(p, O) - r) < 1e-6


def test_vertex_to_incenter_envelope_of_confocal_is_the_evolute():
    # in the confocal family the vertex-to-incenter line is the outer normal,
    # so its characteristic points trail the evolute samples at the same grid
    spec = build_family("confocal", 1.5, 1.0)
    ch = Channel(locus_type="e1x", center=1)
    pts = envelope(spec, ch, n=720, delta=1e-4)
    target = [evolute_point(spec.outer, 2.0 * math.pi * j / 720) for j in range(720)]
    assert hausdorff(pts, target) < 1e-3 * spec.outer.a


def test_center_pair_envelope_matches_fixed_line():
    # X3 and X6 are both fixed in the Brocard porism: every generating line
    # is the same Brocard axis, so no envelope point can be built
    spec = build_family("brocard", 1.0)
    from triloci.loci import AllSamplesParallelError

    with pytest.raises(AllSamplesParallelError):
        envelope(spec, Channel(locus_type="env", env=(3, 6)), n=64)


# ---------------------------------------------------------------------------
# Invariant detection


def test_confocal_invariant_rows():
    spec = build_family("confocal", 1.5, 1.0)
    report = detect_invariants(spec, Channel(locus_type="xn", center=1), n=256)
    for name in ("L", "J", "r/R", "Σcos", "Σκ^(2/3)"):
        assert report[name].is_invariant, name
    for name in ("A", "Σs²", "r", "R"):
        assert not report[name].is_invariant, name
    assert abs(report["Σcos"].mean - (1.0 + report["r/R"].mean)) < 1e-9


def test_homothetic_invariant_rows():
    spec = build_family("homothetic", 1.5, 1.0)
    report = detect_invariants(spec, Channel(locus_type="xn", center=2), n=256)
    for name in ("A", "Σs²", "cotω", "Σκ^(-2/3)", "Σκ^(-4/3)"):
        assert report[name].is_invariant, name
    assert not report["L"].is_invariant


def test_incircle_invariant_rows():
    spec = build_family("incircle", 1.5, 1.0)
    report = detect_invariants(spec, Channel(locus_type="xn", center=1), n=256)
    assert report["R"].is_invariant
    assert report["Σcos"].is_invariant
    assert report["r"].is_invariant  # the caustic is the incircle itself
    assert not report["L"].is_invariant


def test_circumcircle_invariant_rows():
    spec = build_family("circumcircle", 1.0, 1.0, aux=2.0)
    report = detect_invariants(spec, Channel(locus_type="xn", center=3), n=256)
    for name in ("Σs²", "Πcos", "R", "Σκ'^(2/3)"):
        assert report[name].is_invariant, name
    report_orthic = detect_invariants(
        spec, Channel(locus_type="xn", center=3, triangle_type="orthic"), n=256)
    assert report_orthic["r'/R'"].is_invariant


def test_excentral_invariant_rows():
    spec = build_family("excentral", 1.5, 1.0)
    report = detect_invariants(spec, Channel(locus_type="xn", center=6), n=256)
    for name in ("A'/A", "Πcos'", "Σs'²/Πs'"):
        assert report[name].is_invariant, name
    # the parent's conserved quantities ride along
    assert report["L"].is_invariant


def test_right_angle_masking():
    # focal-chord mounted family crosses exact right angles during the sweep
    spec = mounted_spec("fs", math.sqrt(2.0), 1.0)
    report = detect_invariants(spec, Channel(locus_type="v3"), n=256)
    names = {e.name for e in report.entries}
    assert "Σtan" in names and "Πcot" in names
    assert not report["Σtan"].is_invariant
    assert not report["Πcot"].is_invariant


def test_report_line_and_lookup():
    spec = build_family("confocal", 1.5, 1.0)
    report = detect_invariants(spec, Channel(locus_type="xn", center=1), n=64)
    line = report.line()
    assert "L=" in line and "J=" in line
    assert "A=" not in line.replace("Σs²/A=", "").replace("/A=", "")
    with pytest.raises(KeyError):
        report["no-such-quantity"]
    assert set(report.invariant_names()) >= {"L", "J", "r/R", "Σcos"}


def test_identity_between_sums_holds_per_sample():
    spec = build_family("homothetic", 1.5, 1.0)
    for j in range(16):
        snap = sweep_snapshot(spec, 2.0 * math.pi * j / 16)
        lhs = sum(math.cos(t) for t in snap.angles)
        assert abs(lhs - (1.0 + snap.r / snap.R)) < 1e-10
        sum_s2 = sum(s * s for s in snap.sides)
        assert abs(snap.cot_omega - sum_s2 / (4.0 * snap.A)) < 1e-10


def test_channel_validation():
    with pytest.raises(ValidationError):
        Channel(locus_type="nope")
    with pytest.raises(ValidationError):
        Channel(locus_type="xn")  # missing center
    with pytest.raises(ValidationError):
        Channel(locus_type="xn", center=424242)
    with pytest.raises(ValidationError):
        Channel(locus_type="env")  # missing the center pair
    with pytest.raises(ValidationError):
        Channel(locus_type="env", env=(3, 424242))
    with pytest.raises(ValidationError):
        Channel(locus_type="v1", cevian=("bogus", 2))
    with pytest.raises(ValidationError):
        Channel(locus_type="v1", triangle_type="scalene")
    with pytest.raises(ValidationError):
        Channel(locus_type="v1", color=(0, 300, 0))
    with pytest.raises(ValidationError):
        Channel(locus_type="v1", extra_field=1)
    ch = Channel(locus_type="e1x", center=4, color=(255, 128, 0))
    assert ch.locus_type == "e1x" and ch.center == 4
