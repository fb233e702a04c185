"""Batch command-line front end: locus export, invariant reports, verify matrix.

Exit codes: 0 success, 2 validation error (bad flags or config), 3
computation error (a valid config whose sweep cannot be computed).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from typing import Sequence

from pydantic import ValidationError

from .centers import UnknownCenterError
from .geom import GeometryError, Point2, dist
from .families import (FAMILY_KINDS, MOUNTED_PINS, FamilyError, FamilySpec,
                       build_family, closure_residual)
from .loci import (Channel, LociError, detect_invariants, sample_locus)
from .experiment import (ConfigError, DEFAULT_CHANNELS, ExperimentConfig,
                         build_spec, channel_label, export_loci_json,
                         export_svg, from_json, from_url,
                         _format_validation_error)

_AB_SWEEP = (1.2, 1.5, 2.0, 3.0)

# Table rows checked by `verify`: family -> (fixed centers, invariant names,
# channel overrides for the invariant sweep).
_VERIFY_ROWS: dict[str, tuple[tuple[int, ...], tuple[str, ...], dict]] = {
    "confocal": ((9,), ("L", "J", "r/R", "Σcos", "Σκ^(2/3)"), {}),
    "incircle": ((1,), ("R", "Σcos"), {}),
    "circumcircle": ((3,), ("Σs²", "Πcos", "r'", "R'"), {"triangle_type": "orthic"}),
    "excentral": ((6,), ("A'/A", "Πcos'", "Σs'²/Πs'"), {}),
    "homothetic": ((2,), ("A", "Σs²", "cotω", "Σκ^(-2/3)", "Σκ^(-4/3)"), {}),
    "dual": ((4,), (), {}),
    "poristic": ((1, 3), ("r/R", "Σcos"), {}),
    "brocard": ((3, 6), ("Σcot", "Σs²/A"), {}),
}
_NEGATIVE_CONTROLS = (("homothetic", "L"), ("confocal", "A"))


def _config_from_flags(args: argparse.Namespace) -> ExperimentConfig:
    if getattr(args, "config", None) and getattr(args, "url", None):
        raise ConfigError("--config and --url are mutually exclusive")
    if getattr(args, "config", None):
        with open(args.config, "r", encoding="utf-8") as fh:
            cfg = from_json(fh.read())
    elif getattr(args, "url", None):
        cfg = from_url(args.url)
    else:
        cfg = ExperimentConfig()
    fam = cfg.family.model_dump()
    if args.family is not None:
        fam["kind"] = args.family
    if args.ab is not None:
        fam["a"], fam["b"] = args.ab, 1.0
    if getattr(args, "aux", None) is not None:
        fam["aux"] = args.aux
    ch1 = cfg.channels[0].model_dump()
    if getattr(args, "center", None) is not None:
        ch1["center"] = args.center
        if ch1["locus_type"] == "off":
            ch1["locus_type"] = "xn"
    if getattr(args, "triangle", None) is not None:
        ch1["triangle_type"] = args.triangle
    if getattr(args, "locus_type", None) is not None:
        ch1["locus_type"] = args.locus_type
    body = cfg.model_dump()
    body["family"] = fam
    body["channels"] = [ch1, *body["channels"][1:]]
    if args.samples is not None:
        body["samples"] = args.samples
    try:
        return ExperimentConfig.model_validate(body)
    except ValidationError as err:
        raise ConfigError(_format_validation_error(err)) from err


def cmd_locus(args: argparse.Namespace) -> int:
    cfg = _config_from_flags(args)
    spec = build_spec(cfg)
    loci = []
    for ch in cfg.channels:
        if ch.locus_type == "off":
            continue
        lo = sample_locus(spec, ch, cfg.samples)
        loci.append(lo)
        print(f"{channel_label(ch)}({lo.curve_class.code})")
    if not loci:
        raise ConfigError("every channel is off; nothing to compute")
    if args.out:
        text = export_svg(loci, cfg) if args.format == "svg" else export_loci_json(loci)
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return 0


def cmd_invariants(args: argparse.Namespace) -> int:
    cfg = _config_from_flags(args)
    spec = build_spec(cfg)
    ch = cfg.channels[0]
    if ch.locus_type == "off":
        ch = DEFAULT_CHANNELS[0]
    report = detect_invariants(spec, ch, cfg.samples, args.tol)
    print(report.line())
    payload = {
        "family": cfg.family.model_dump(),
        "samples": cfg.samples,
        "tolerance": report.tolerance,
        "entries": [dataclasses.asdict(e) for e in report.entries],
    }
    print(json.dumps(payload, sort_keys=True))
    return 0


def _perturbed(spec: FamilySpec, fraction: float) -> FamilySpec:
    if not spec.is_poncelet or spec.inner is None or fraction == 0.0:
        return spec
    inner = dataclasses.replace(spec.inner, a=spec.inner.a * (1.0 + fraction),
                                b=spec.inner.b * (1.0 + fraction))
    return dataclasses.replace(spec, inner=inner)


def _verify_specs(ab: float, perturb: float) -> dict[str, FamilySpec]:
    out = {}
    for kind in _VERIFY_ROWS:
        if kind == "circumcircle":
            spec = build_family(kind, ab, aux=2.0)
        elif kind == "poristic":
            spec = build_family(kind, 1.0, aux=0.4)
        elif kind == "brocard":
            spec = build_family(kind, 1.0)
        else:
            spec = build_family(kind, ab)
        out[kind] = _perturbed(spec, perturb)
    return out


def cmd_verify(args: argparse.Namespace) -> int:
    sweep = tuple(args.ab_sweep) if args.ab_sweep else _AB_SWEEP
    n = args.samples
    failures = 0

    def emit(ok: bool, what: str) -> None:
        nonlocal failures
        failures += 0 if ok else 1
        print(f"{'PASS' if ok else 'FAIL'}  {what}")

    for ab in sweep:
        specs = _verify_specs(ab, args.perturb_caustic)
        for kind, spec in specs.items():
            if spec.is_poncelet:
                worst = max(closure_residual(spec, 0.05 + 2.0 * math.pi * j / 64)
                            for j in range(64))
                emit(worst < 1e-9 * spec.outer.a,
                     f"closure     {kind:13s} a/b={ab:<4} residual={worst:.2e}")
            fixed, names, ch_over = _VERIFY_ROWS[kind]
            for k in fixed:
                lo = sample_locus(spec, Channel(locus_type="xn", center=k), n)
                ctr = Point2(math.fsum(p[0] for p in lo.points) / len(lo.points),
                             math.fsum(p[1] for p in lo.points) / len(lo.points))
                drift = max(dist(p, ctr) for p in lo.points)
                emit(lo.curve_class.code == "*" and drift < 1e-8 * spec.outer.a,
                     f"fixed X{k:<4} {kind:13s} a/b={ab:<4} class={lo.curve_class.code} "
                     f"drift={drift:.2e}")
            if names:
                ch = Channel(locus_type="xn", center=1, **ch_over)
                rep = detect_invariants(spec, ch, n)
                inv = set(rep.invariant_names())
                missing = [q for q in names if q not in inv]
                emit(not missing,
                     f"invariants  {kind:13s} a/b={ab:<4} "
                     + (f"missing {missing}" if missing else f"{{{', '.join(names)}}}"))
    ch = Channel(locus_type="xn", center=1)
    for kind, name in _NEGATIVE_CONTROLS:
        rep = detect_invariants(build_family(kind, 1.5), ch, n)
        spread = rep[name].spread
        emit(spread > 1e-3,
             f"control     {kind:13s} a/b=1.5  {name} spread={spread:.2e} (not invariant)")
    print(f"{'ALL PASS' if failures == 0 else f'{failures} FAILURES'}")
    return 0 if failures == 0 else 1


def cmd_serve(args: argparse.Namespace) -> int:
    try:
        import uvicorn
    except ImportError:
        print("the serve command needs uvicorn (install the 'server' extra)",
              file=sys.stderr)
        return 2
    from .server import create_app
    uvicorn.run(create_app(static_dir=args.static), host=args.host,
                port=args.port, log_level="info")
    return 0


def _add_config_flags(p: argparse.ArgumentParser, require_family: bool) -> None:
    p.add_argument("--family", required=require_family,
                   help="family kind: " + ", ".join(FAMILY_KINDS)
                        + ", mounted:{" + ",".join(MOUNTED_PINS) + "}")
    p.add_argument("--ab", type=float, default=None,
                   help="outer aspect ratio a/b (b is normalized to 1)")
    p.add_argument("--aux", type=float, default=None,
                   help="family parameter: caustic aspect (circumcircle), inradius (poristic)")
    p.add_argument("--samples", type=int, default=None, help="sweep sample count")
    p.add_argument("--config", default=None, help="load a config JSON file")
    p.add_argument("--url", default=None, help="load a config query string")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="triloci",
        description="Poncelet triangle families: loci, envelopes, invariants.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("locus", help="sample loci and export JSON/SVG")
    _add_config_flags(p, require_family=False)
    p.add_argument("--center", type=int, default=None, help="center index for channel 1")
    p.add_argument("--triangle", default=None, help="derived-triangle kind for channel 1")
    p.add_argument("--locus-type", dest="locus_type", default=None,
                   help="channel-1 locus type (xn, v1..v3, e12..e31, e1x..e3x, env, omega1/2)")
    p.add_argument("--out", default=None, help="output file path")
    p.add_argument("--format", choices=("json", "svg"), default="json")
    p.set_defaults(func=cmd_locus, needs_family=True)

    p = sub.add_parser("invariants", help="detect conserved quantities")
    _add_config_flags(p, require_family=False)
    p.add_argument("--triangle", default=None, help="derived-triangle kind for the sweep")
    p.add_argument("--tol", type=float, default=1e-7, help="relative-spread tolerance")
    p.set_defaults(func=cmd_invariants, needs_family=True)

    p = sub.add_parser("verify", help="run the family/invariant acceptance matrix")
    p.add_argument("--ab-sweep", type=float, nargs="+", default=None,
                   help="aspect ratios to check (default 1.2 1.5 2.0 3.0)")
    p.add_argument("--samples", type=int, default=720)
    p.add_argument("--perturb-caustic", type=float, default=0.0,
                   help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify, needs_family=False)

    p = sub.add_parser("serve", help="run the HTTP API")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--static", default=None,
                   help="directory of UI assets to host at the web root")
    p.set_defaults(func=cmd_serve, needs_family=False)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "needs_family", False) and args.family is None \
            and not args.config and not args.url:
        ap.error("one of --family, --config, or --url is required")
    try:
        return args.func(args)
    except (ConfigError, FamilyError, UnknownCenterError, OSError,
            json.JSONDecodeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except (LociError, GeometryError, ValueError) as err:
        print(f"computation failed: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
