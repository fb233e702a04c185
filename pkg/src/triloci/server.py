"""HTTP facade over the engine for the interactive explorer.

Three JSON endpoints: GET /api/families describes what can be configured,
POST /api/locus samples the loci (plus the invariant line) for a config,
and GET /api/playlists serves the curated tour.  The server keeps no
per-request state: the centers registry and the playlists are loaded once
at startup and every engine call is pure, so identical request bodies
yield identical responses and requests may run concurrently.

``create_app(static_dir=...)`` additionally mounts a directory of UI
assets at the web root, which is how the browser bundle is hosted.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any, Sequence

from fastapi import Body, FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import ValidationError

from .centers import default_registry
from .experiment import (ExperimentConfig, SCHEMA_VERSION, build_spec,
                         channel_label, load_playlists, to_json, to_url,
                         validation_messages)
from .families import MOUNTED_PINS, FamilyError
from .geom import GeometryError, Point2
from .loci import LociError, detect_invariants, sample_locus

_CENTER_NAMES = {
    1: "incenter",
    2: "centroid",
    3: "circumcenter",
    4: "orthocenter",
    6: "symmedian point",
    9: "mittenpunkt",
}

_AXIS_PARAMS = {
    "a": "outer semi-major axis",
    "b": "outer semi-minor axis",
}

# Which of a/b/aux/seed each kind consumes, and which centers stay put.
_FAMILY_SCHEMAS: tuple[tuple[str, dict[str, str], tuple[int, ...]], ...] = (
    ("confocal", dict(_AXIS_PARAMS), (9,)),
    ("incircle", dict(_AXIS_PARAMS), (1,)),
    ("circumcircle",
     {"a": "outer radius", "aux": "caustic aspect ratio (default 2)"}, (3,)),
    ("excentral", dict(_AXIS_PARAMS), (6,)),
    ("homothetic", dict(_AXIS_PARAMS), (2,)),
    ("dual", dict(_AXIS_PARAMS), (4,)),
    ("poristic",
     {"a": "outer radius", "aux": "inradius (default 0.4·a)"}, (1, 3)),
    ("brocard",
     {"a": "circumradius",
      "seed": "seed triangle sidelengths (default 4, 5, 6)"}, (3, 6)),
)


def _families_payload() -> dict[str, Any]:
    families = []
    for kind, params, fixed in _FAMILY_SCHEMAS:
        families.append({
            "kind": kind,
            "params": params,
            "fixed_centers": [
                {"index": k, "label": f"X{k}", "name": _CENTER_NAMES[k]}
                for k in fixed],
        })
    return {
        "version": SCHEMA_VERSION,
        "families": families,
        "mounted": {
            "kinds": [f"mounted:{p}" for p in MOUNTED_PINS],
            "pins": list(MOUNTED_PINS),
            "params": dict(_AXIS_PARAMS),
            "fixed_centers": [],
        },
    }


def _playlists_payload() -> dict[str, Any]:
    return {
        "version": SCHEMA_VERSION,
        "playlists": [
            {"name": pl.name,
             "items": [{"caption": item.caption,
                        "config": json.loads(to_json(item.config))}
                       for item in pl.items]}
            for pl in load_playlists()],
    }


def _bad_request(messages: list[str]) -> HTTPException:
    return HTTPException(status_code=400, detail=messages)


def _parse_config(payload: Any) -> ExperimentConfig:
    if not isinstance(payload, dict):
        raise _bad_request(["(root): expected a JSON object"])
    body = dict(payload)
    version = body.pop("version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise _bad_request([f"version: expected {SCHEMA_VERSION}, got {version!r}"])
    try:
        return ExperimentConfig.model_validate(body)
    except ValidationError as err:
        raise _bad_request(validation_messages(err)) from err


def _decimate(points: Sequence[Point2], cap: int) -> Sequence[Point2]:
    if len(points) <= cap:
        return points
    return points[::math.ceil(len(points) / cap)]


def create_app(static_dir: str | Path | None = None) -> FastAPI:
    """The ASGI app; loads registry and playlists up front (fail fast)."""
    registry = default_registry()
    families = _families_payload()
    playlists = _playlists_payload()

    app = FastAPI(title="triloci", docs_url=None, redoc_url=None)

    @app.exception_handler(RequestValidationError)
    async def _body_error(request: Request, exc: RequestValidationError):
        messages = []
        for e in exc.errors():
            loc = ".".join(str(p) for p in e["loc"]) or "(root)"
            messages.append(f"{loc}: {e['msg']}")
        return JSONResponse(status_code=400, content={"detail": messages})

    @app.get("/api/families")
    def api_families() -> dict[str, Any]:
        return families

    @app.post("/api/locus")
    def api_locus(payload: Any = Body(...)) -> dict[str, Any]:
        cfg = _parse_config(payload)
        try:
            spec = build_spec(cfg)
            channels = []
            for slot, ch in enumerate(cfg.channels, start=1):
                if ch.locus_type == "off":
                    continue
                locus = sample_locus(spec, ch, n=cfg.samples, registry=registry)
                points = _decimate(locus.points, cfg.samples)
                channels.append({
                    "slot": slot,
                    "label": channel_label(ch),
                    "class": locus.curve_class.code,
                    "points": [[p[0], p[1]] for p in points],
                    "skipped": list(locus.skipped),
                })
            # The invariant sweep needs enough samples to trust a spread but
            # must not balloon the latency when the client asks for a very
            # dense locus.
            n_inv = min(max(cfg.samples, 64), 720)
            report = detect_invariants(spec, cfg.channels[0], n=n_inv,
                                       registry=registry)
        except (FamilyError, LociError, GeometryError) as err:
            raise HTTPException(status_code=422, detail=str(err)) from err
        return {
            "version": SCHEMA_VERSION,
            "config": json.loads(to_json(cfg)),
            "url": to_url(cfg),
            "channels": channels,
            "invariants": report.line(),
        }

    @app.get("/api/playlists")
    def api_playlists() -> dict[str, Any]:
        return playlists

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=str(static_dir), html=True),
                  name="ui")

    return app
