import warnings

import numpy as np
import pytest

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    from fastapi.testclient import TestClient

from bsa.service import app

client = TestClient(app, raise_server_exceptions=False)

L2_SQUARE = {
    "space": {"type": "lp", "p": 2, "dim": 2},
    "points": [[1, 0], [-1, 0], [0, 1], [0, -1]],
}


def test_validate_ok():
    resp = client.post("/validate", json={"space": {"type": "lp", "p": 2, "dim": 3}})
    assert resp.status_code == 200
    assert resp.json()["space"] == {"type": "lp", "p": 2.0, "dim": 3}


def test_validate_rejects_asymmetric_polytope():
    resp = client.post(
        "/validate",
        json={"space": {"type": "polytope", "vertices": [[1, 0], [0, 1], [-1, 0]]}},
    )
    assert resp.status_code == 422
    assert resp.json()["error"] == "NotSymmetric"


def test_certify_diamond():
    resp = client.post("/certify", json={"set": L2_SQUARE})
    assert resp.status_code == 200
    body = resp.json()
    assert body["report"]["d"] == pytest.approx(np.sqrt(2), abs=1e-9)
    assert body["verdict"]["valid"]
    margins = sorted(row["margin"] for row in body["table"])
    assert margins[0] == pytest.approx(np.sqrt(2), abs=1e-9)
    assert margins[-1] == pytest.approx(2.0, abs=1e-9)


def test_certify_accepts_family_wrapper():
    fam = client.post("/construct", json={"family": "summing", "n": 4}).json()
    resp = client.post("/certify", json={"set": fam})
    assert resp.status_code == 200
    assert resp.json()["report"]["d"] == pytest.approx(2.0, abs=1e-6)


def test_construct_lp_basis():
    resp = client.post("/construct", json={"family": "lp-basis", "p": 2, "n": 3})
    assert resp.status_code == 200
    assert resp.json()["family"]["d"] == pytest.approx(np.sqrt(2))


def test_construct_missing_argument():
    resp = client.post("/construct", json={"family": "lp-basis", "p": 2})
    assert resp.status_code == 422


def test_construct_auerbach_system():
    resp = client.post(
        "/construct",
        json={"family": "auerbach", "space": {"type": "lp", "p": 3, "dim": 2}},
    )
    assert resp.status_code == 200
    body = resp.json()["system"]
    assert len(body["vectors"]) == 2


def test_search_antipodal():
    resp = client.post(
        "/search",
        json={
            "space": {"type": "lp", "p": 2, "dim": 2},
            "mode": "antipodal",
            "count": 4,
            "config": {"seed": 0, "restarts": 2, "iterations": 400},
        },
    )
    assert resp.status_code == 200
    body = resp.json()
    assert body["found"]
    assert body["certified"]
    assert body["wall_time"] > 0


def test_oracle_matches_certify():
    resp = client.post("/oracle", json={"set": L2_SQUARE, "pair": [0, 1], "grid": 720})
    assert resp.status_code == 200
    assert resp.json()["margin"] == pytest.approx(2.0, abs=1e-2)
