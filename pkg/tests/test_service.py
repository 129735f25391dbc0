"""HTTP service routes."""

import warnings

import pytest

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    from fastapi.testclient import TestClient

from rlw.service import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def test_health(client):
    resp = client.get("/health")
    assert resp.status_code == 200
    assert resp.json()["status"] == "ok"


def test_search_route(client):
    payload = {
        "spec": {"n": 2, "rainbow": "chain:3", "palette": "exact", "k": 3}
    }
    resp = client.post("/search", json=payload)
    assert resp.status_code == 200
    doc = resp.json()
    assert doc["kind"] == "search"
    assert doc["result"]["found"] is True


def test_number_gr_route(client):
    payload = {"kind": "gr", "q": "fork", "p": "chain:2", "k": 3, "window": [2, 4]}
    resp = client.post("/number", json=payload)
    assert resp.status_code == 200
    assert resp.json()["result"]["value"] == 3


def test_number_requires_fields(client):
    resp = client.post("/number", json={"kind": "gr", "p": "chain:2"})
    assert resp.status_code == 400


def test_classify_and_verify_round_trip(client):
    gen = client.post(
        "/generate",
        json={"instance": {"type": "Type2", "n": 4, "X0": "{1}", "Y0": "{1,2,3}"}},
    )
    assert gen.status_code == 200
    doc = gen.json()
    coloring = doc["witnesses"][0]["coloring"]

    cls = client.post("/classify", json={"which": "b2", "coloring": coloring})
    assert cls.status_code == 200
    assert cls.json()["result"]["matched"] is True
    assert cls.json()["instance"]["type"] == "Type2"

    ver = client.post("/verify", json={"document": doc})
    assert ver.status_code == 200
    assert ver.json()["ok"] is True


def test_construct_route(client):
    resp = client.post("/construct", json={"which": "gr-c3", "s": 3, "k": 3})
    assert resp.status_code == 200
    body = resp.json()
    assert body["n"] == 2
    assert body["coloring"]["colors"] == [1, 2, 3, 1]


def test_blob_route(client):
    resp = client.post("/blob", json={"m": 2, "n0": 1})
    assert resp.status_code == 200
    assert len(resp.json()["blocks"]) == 3


def test_extremal_routes(client):
    assert (
        client.post(
            "/extremal/lubell", json={"n": 3, "family": ["{1}", "{2}", "{3}"]}
        ).json()["lubell"]
        == "1"
    )
    assert client.post("/extremal/lu", json={"n": 3, "p": "chain:3"}).json()[
        "lu_max"
    ] == "2"
    assert client.post("/extremal/e", json={"p": "chain:3"}).json()["value"] == 2
    assert client.post("/extremal/g", json={"q": "fork"}).json()["value"] == 1
    assert client.post("/extremal/uilb", json={"p": "chain:2"}).json()["value"] is True
    gst = client.post("/extremal/gst", json={"v": 2, "n": 3, "verify": True}).json()
    assert gst == {"value": 2, "verified": True}
    caps = client.post("/extremal/caps", json={"n": 3}).json()
    assert caps["c3"] == 4 and caps["b2"] == 7


def test_theorem_route(client):
    resp = client.post(
        "/extremal/theorem", json={"claim": "Thm1_7", "params": {"e": 1}}
    )
    assert resp.json()["value"] == 3


def test_claim_route(client):
    resp = client.post("/claim", json={"claim": "Thm4_2", "params": {"v": 1, "n": 2}})
    assert resp.status_code == 200
    assert resp.json()["result"]["verdict"] == "pass"


def test_dimacs_routes(client):
    spec = {"n": 1, "rainbow": "chain:2", "palette": "exact", "k": 2}
    text = client.post("/dimacs/export", json={"spec": spec}).text
    assert text.startswith("c spec-sha256:") or "p cnf" in text
    # The two singleton subsets must take the two distinct colors; the
    # chain {} < {1} is then rainbow, so the formula is unsatisfiable.
    from rlw import export_dimacs, solve_cnf
    from rlw.documents import spec_from_json

    doc = export_dimacs(spec_from_json(spec))
    assert solve_cnf(doc.num_vars, doc.clauses) is None


def test_dimacs_decode_route(client):
    from rlw import export_dimacs, solve_cnf
    from rlw.documents import spec_from_json

    spec = {"n": 2, "rainbow": "chain:3", "palette": "exact", "k": 3}
    doc = export_dimacs(spec_from_json(spec))
    model = solve_cnf(doc.num_vars, doc.clauses)
    assert model is not None
    text = "v " + " ".join(str(lit) for lit in model) + " 0"
    resp = client.post("/dimacs/decode", json={"spec": spec, "model_text": text})
    assert resp.status_code == 200
    assert resp.json()["accepted"] is True


def test_domain_errors_are_400(client):
    resp = client.post(
        "/search", json={"spec": {"n": 30, "rainbow": "chain:3"}}
    )
    assert resp.status_code == 400
    resp = client.post("/extremal/g", json={"q": "nonsense"})
    assert resp.status_code == 400
    resp = client.post("/claim", json={"claim": "NotAClaim", "params": {}})
    assert resp.status_code == 400
