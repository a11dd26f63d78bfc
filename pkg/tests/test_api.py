import asyncio
import inspect
import json
from types import SimpleNamespace

import pytest
from fastapi import Request
from fastapi.routing import APIRoute
from fastapi.testclient import TestClient
from slowapi.errors import RateLimitExceeded

import config
from main import app
from rate_limiter import limiter, rate_limit_exceeded_handler, search_limit


@pytest.fixture
def client():
    limiter.enabled = False
    yield TestClient(app)
    limiter.enabled = True


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "healthy"}


def test_extremal(client, k2_document):
    response = client.post("/api/polytope/extremal", json={"network": k2_document, "flow": {"e0": "0"}})
    assert response.status_code == 200
    document = response.json()
    assert document["verdict"] == "not-extremal"
    assert document["epsilon"] == "1/2"


def test_vertices(client, k2_document):
    response = client.post("/api/polytope/vertices", json={"network": k2_document})
    assert response.status_code == 200
    assert response.json()["vertex_count"] == 2


def test_bad_documents_are_unprocessable(client, k2_document):
    broken = {"vertices": [{"id": "v"}, {"id": "w"}], "edges": [{"id": "e0", "tail": "v", "head": "w", "b": "0.5"}]}
    assert client.post("/api/degeneracy/cactus", json={"network": broken}).status_code == 422
    loop = {"vertices": [{"id": "v"}], "edges": [{"id": "e0", "tail": "v", "head": "v"}]}
    response = client.post("/api/degeneracy/cactus", json={"network": loop})
    assert response.status_code == 422
    assert "self-loop" in response.json()["detail"]
    response = client.post("/api/polytope/feasible", json={"network": k2_document, "flow": {"e9": "0"}})
    assert response.status_code == 422


def test_infeasible_flow_conflicts(client, k2_document):
    response = client.post("/api/polytope/extremal", json={"network": k2_document, "flow": {"e0": "2"}})
    assert response.status_code == 409


def test_cactus_and_witness(client, k2_document, diamond_document):
    response = client.post("/api/degeneracy/cactus?minor=true", json={"network": diamond_document})
    assert response.status_code == 200
    assert response.json()["diamond"] is not None
    witness = client.post("/api/degeneracy/witness", json={"network": diamond_document})
    assert witness.status_code == 200
    check = client.post("/api/degeneracy/verify", json=witness.json())
    assert check.json() == {"valid": True, "failures": []}
    assert client.post("/api/degeneracy/witness", json={"network": k2_document}).status_code == 409


def test_nondegeneracy(client, diamond_document):
    response = client.post("/api/degeneracy/test", json={"network": diamond_document})
    assert response.json()["verdict"] == "certified-degenerate"
    response = client.post("/api/degeneracy/test", json={"network": diamond_document, "budget": 1})
    assert response.status_code == 413


def test_alpha_and_sufficient_conditions(client, k2_document):
    body = {"network": k2_document, "flow": {"e0": "1"}}
    forest = client.post("/api/alpha/extract", json=body).json()
    response = client.post("/api/alpha/validate", json={"network": k2_document, "alpha_forest": forest})
    assert response.json()["is_alpha_tree"] is True
    response = client.post("/api/degeneracy/suffcond", json={**body, "alpha_forest": forest})
    assert response.json()["certified"] is True


def test_gadget(client):
    response = client.post("/api/gadget/decide", json={"sizes": [1, 2], "target": 3})
    assert response.status_code == 200
    assert response.json()["polytope_subset"] == [1, 2]
    assert client.post("/api/gadget/decide", json={"sizes": [0], "target": 3}).status_code == 422
    built = client.post("/api/gadget/build", json={"sizes": [2, 4], "target": 3})
    assert len(built.json()["network"]["edges"]) == 8


def test_generate(client):
    body = {"seed": 3, "min_vertices": 5, "max_vertices": 5, "topology": "tree"}
    first = client.post("/api/gadget/generate", json=body)
    assert first.status_code == 200
    assert len(first.json()["edges"]) == 4
    assert first.json() == client.post("/api/gadget/generate", json=body).json()
    assert client.post("/api/gadget/generate", json={"min_vertices": 5, "max_vertices": 2}).status_code == 422


def test_api_handlers_run_in_the_threadpool():
    handlers = [route for route in app.routes if isinstance(route, APIRoute) and route.path.startswith("/api/")]
    assert handlers
    for route in handlers:
        assert not inspect.iscoroutinefunction(route.endpoint), route.path


def test_every_search_has_its_own_limit():
    assert set(config.API_SEARCH_LIMITS) == {"vertices", "nondegeneracy", "gadget"}
    with pytest.raises(ValueError):
        search_limit("cactus")


def test_rate_limit_response():
    limit = SimpleNamespace(error_message="gadget limited to 20/minute", limit="20 per 1 minute")
    scope = {"type": "http", "method": "POST", "path": "/api/gadget/decide", "headers": [], "query_string": b""}
    response = asyncio.run(rate_limit_exceeded_handler(Request(scope), RateLimitExceeded(limit)))
    assert response.status_code == 429
    assert json.loads(response.body) == {
        "error": "Rate limit exceeded",
        "detail": "gadget limited to 20/minute",
        "path": "/api/gadget/decide",
    }
