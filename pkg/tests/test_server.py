"""HTTP facade: payload shapes, validation errors, static hosting."""

import json

import pytest
from fastapi.testclient import TestClient

from triloci.experiment import DEFAULT_CONFIG, from_json, from_url, to_url
from triloci.server import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def test_families_payload(client):
    resp = client.get("/api/families")
    assert resp.status_code == 200
    body = resp.json()
    assert body["version"] == 1
    kinds = [f["kind"] for f in body["families"]]
    assert kinds == ["confocal", "incircle", "circumcircle", "excentral",
                     "homothetic", "dual", "poristic", "brocard"]
    confocal = body["families"][0]
    assert confocal["fixed_centers"] == [
        {"index": 9, "label": "X9", "name": "mittenpunkt"}]
    assert "a" in confocal["params"]
    mounted = body["mounted"]
    assert len(mounted["kinds"]) == len(mounted["pins"]) == 5
    assert all(k.startswith("mounted:") for k in mounted["kinds"])


def test_locus_endpoint(client):
    resp = client.post("/api/locus", json={
        "version": 1, "family": {"a": 1.5}, "samples": 64})
    assert resp.status_code == 200
    body = resp.json()
    assert body["version"] == 1
    (block,) = body["channels"]  # channels 2-4 default to off
    assert block["slot"] == 1
    assert block["label"] == "X1"
    assert block["class"] == "E"
    assert len(block["points"]) == 64
    assert block["skipped"] == []
    for fragment in ("L=", "J=", "r/R="):
        assert fragment in body["invariants"]
    # the echoed url and config describe the same validated experiment
    assert from_json(json.dumps(body["config"])) == from_url(body["url"])


def test_locus_multiple_channels(client):
    cfg = {
        "version": 1,
        "family": {"kind": "confocal", "a": 1.5},
        "channels": [
            {"locus_type": "xn", "center": 1},
            {"locus_type": "xn", "center": 9},
            {"locus_type": "off"},
            {"locus_type": "v1"},
        ],
        "samples": 64,
    }
    body = client.post("/api/locus", json=cfg).json()
    assert [b["slot"] for b in body["channels"]] == [1, 2, 4]
    assert [b["label"] for b in body["channels"]] == ["X1", "X9", "V1"]
    assert [b["class"] for b in body["channels"]] == ["E", "*", "E"]


def test_locus_defaults_give_the_empty_url(client):
    body = client.post("/api/locus", json={"version": 1, "family": {}}).json()
    assert body["url"] == to_url(DEFAULT_CONFIG) == ""


def test_bad_payloads_get_400_with_messages(client):
    resp = client.post("/api/locus", json=[1, 2])
    assert resp.status_code == 400
    assert resp.json()["detail"] == ["(root): expected a JSON object"]

    resp = client.post("/api/locus", json={"version": 2, "family": {}})
    assert resp.status_code == 400
    assert "version: expected 1" in resp.json()["detail"][0]

    five = {"version": 1, "family": {},
            "channels": [{"locus_type": "off"}] * 5}
    resp = client.post("/api/locus", json=five)
    assert resp.status_code == 400
    assert any("channels" in m for m in resp.json()["detail"])

    resp = client.post("/api/locus", json={"version": 1, "family": {},
                                           "samples": 4})
    assert resp.status_code == 400
    assert any("samples" in m for m in resp.json()["detail"])

    resp = client.post("/api/locus", json={"version": 1, "family": {},
                                           "wat": True})
    assert resp.status_code == 400
    assert any("unknown field" in m for m in resp.json()["detail"])

    resp = client.post("/api/locus", content="{not json",
                       headers={"content-type": "application/json"})
    assert resp.status_code == 400
    assert resp.json()["detail"]


def test_unbuildable_family_gets_422(client):
    resp = client.post("/api/locus", json={
        "version": 1, "family": {"kind": "poristic", "a": 1.0, "aux": 0.9}})
    assert resp.status_code == 422
    assert isinstance(resp.json()["detail"], str)


def test_degenerate_sweep_gets_422(client):
    cfg = {
        "version": 1,
        "family": {"kind": "mounted:major", "a": 1.0, "b": 1.0},
        "channels": [
            {"locus_type": "xn", "center": 1, "triangle_type": "orthic"},
            {"locus_type": "off"}, {"locus_type": "off"}, {"locus_type": "off"},
        ],
        "samples": 64,
    }
    resp = client.post("/api/locus", json=cfg)
    assert resp.status_code == 422


def test_playlists_endpoint(client):
    resp = client.get("/api/playlists")
    assert resp.status_code == 200
    body = resp.json()
    assert body["version"] == 1
    assert len(body["playlists"]) >= 2
    for pl in body["playlists"]:
        assert pl["name"]
        for item in pl["items"]:
            assert item["caption"]
            from_json(json.dumps(item["config"]))  # each config validates


def test_startup_fails_fast_on_bad_playlists(monkeypatch):
    def boom():
        raise RuntimeError("corrupt playlist data")

    monkeypatch.setattr("triloci.server.load_playlists", boom)
    with pytest.raises(RuntimeError, match="corrupt playlist"):
        create_app()


def test_static_mount(tmp_path):
    (tmp_path / "index.html").write_text("<h1>explorer</h1>")
    with TestClient(create_app(static_dir=tmp_path)) as ui_client:
        resp = ui_client.get("/")
        assert resp.status_code == 200
        assert "explorer" in resp.text
        assert ui_client.get("/api/families").status_code == 200
