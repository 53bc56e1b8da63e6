import math
import threading
import time

import numpy as np
import pytest
from fastapi.testclient import TestClient

from commentscore_sidecar.config import SidecarConfig
from commentscore_sidecar.service import create_app


class FailingBackend:
    model_id = "broken"
    dim = 0

    def load(self):
        raise RuntimeError("weights file missing")


@pytest.fixture
def client():
    with TestClient(create_app(SidecarConfig())) as c:
        yield c


CODE = "def get_player_score(player, match):\n    return scores[player][match]"
TERMS = ["player", "score", "match", "banana"]


# ------------------------------------------------------------------- health


def test_health_before_startup_is_503():
    app = create_app(SidecarConfig())
    # no lifespan: the backend never loads
    client = TestClient(app)
    response = client.get("/v1/health")
    assert response.status_code == 503


def test_health_after_startup_is_200(client):
    response = client.get("/v1/health")
    assert response.status_code == 200
    body = response.json()
    assert body["status"] == "ok"
    assert body["model_id"] == "deterministic-hash-v1"
    assert body["dim"] == 64


def test_failed_model_load_gives_503_everywhere():
    with TestClient(create_app(SidecarConfig(), backend=FailingBackend())) as client:
        assert client.get("/v1/health").status_code == 503
        assert "weights file missing" in client.get("/v1/health").json()["detail"]
        response = client.post(
            "/v1/term-weights",
            json={"code": "x", "language": "python", "terms": ["aa"]},
        )
        assert response.status_code == 503
        assert client.post("/v1/embed", json={"texts": ["x"]}).status_code == 503


def test_health_model_id_echoes_config():
    config = SidecarConfig(model_id="my-custom-id")
    with TestClient(create_app(config)) as client:
        assert client.get("/v1/health").json()["model_id"] == "my-custom-id"


# ------------------------------------------------------------- term weights


def test_weights_length_equals_terms_length(client):
    for terms in (["player"], TERMS, ["a1", "b2", "c3", "d4", "e5"]):
        response = client.post(
            "/v1/term-weights",
            json={"code": CODE, "language": "python", "terms": terms},
        )
        assert response.status_code == 200
        assert len(response.json()["weights"]) == len(terms)


def test_aligned_terms_positive_absent_terms_zero(client):
    response = client.post(
        "/v1/term-weights",
        json={"code": CODE, "language": "python", "terms": TERMS},
    )
    weights = response.json()["weights"]
    by_term = dict(zip(TERMS, weights))
    assert by_term["player"] > 0
    assert by_term["score"] > 0
    assert by_term["banana"] == 0.0
    assert "warning" not in response.json()


def test_all_absent_terms_zero_with_warning(client):
    response = client.post(
        "/v1/term-weights",
        json={"code": CODE, "language": "python", "terms": ["banana", "kiwi"]},
    )
    body = response.json()
    assert body["weights"] == [0.0, 0.0]
    assert "no term aligned" in body["warning"]


def test_empty_terms_is_400(client):
    response = client.post(
        "/v1/term-weights", json={"code": CODE, "language": "python", "terms": []}
    )
    assert response.status_code == 400


def test_bad_request_shape_is_400(client):
    response = client.post("/v1/term-weights", json={"code": CODE})
    assert response.status_code == 400
    response = client.post(
        "/v1/term-weights",
        json={"code": CODE, "language": "python", "terms": "player"},
    )
    assert response.status_code == 400


def test_term_weight_repeat_call_determinism(client):
    payload = {"code": CODE, "language": "python", "terms": TERMS}
    first = client.post("/v1/term-weights", json=payload).json()
    for _ in range(3):
        assert client.post("/v1/term-weights", json=payload).json() == first
    # across a fresh service instance too
    with TestClient(create_app(SidecarConfig())) as other:
        assert other.post("/v1/term-weights", json=payload).json() == first


# ------------------------------------------------------------------- embed


def test_embed_unit_norm_within_1e6(client):
    response = client.post(
        "/v1/embed", json={"texts": ["def f():\n    return 1", "short", ""]}
    )
    assert response.status_code == 200
    body = response.json()
    assert body["dim"] == 64
    for vector in body["vectors"]:
        assert len(vector) == body["dim"]
        assert abs(np.linalg.norm(vector) - 1.0) < 1e-6


def test_embed_identical_texts_identical_vectors(client):
    response = client.post("/v1/embed", json={"texts": ["same", "same"]})
    first, second = response.json()["vectors"]
    assert first == second


def test_embed_repeat_call_determinism(client):
    payload = {"texts": ["alpha", "beta"]}
    first = client.post("/v1/embed", json=payload).json()
    assert client.post("/v1/embed", json=payload).json() == first
    with TestClient(create_app(SidecarConfig())) as other:
        assert other.post("/v1/embed", json=payload).json() == first


def test_embed_empty_texts_is_400(client):
    assert client.post("/v1/embed", json={"texts": []}).status_code == 400


def test_embed_dim_constant_across_requests(client):
    dims = {
        client.post("/v1/embed", json={"texts": [text]}).json()["dim"]
        for text in ("a", "bb", "ccc", "x" * 500)
    }
    assert len(dims) == 1


def test_concurrent_requests_serialized_results_stable(client):
    payload = {"code": CODE, "language": "python", "terms": TERMS}
    results = []

    def call():
        results.append(client.post("/v1/term-weights", json=payload).json())

    threads = [threading.Thread(target=call) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(r == results[0] for r in results)


# ----------------------------------------------- wire contract with primary


def test_primary_providers_speak_the_protocol():
    """The scorer's sidecar clients against a live server socket."""
    import uvicorn

    from commentscore.informativeness import SidecarWeightProvider, weigh_terms
    from commentscore.relevance import SidecarEmbeddingProvider, relevance

    config = uvicorn.Config(
        create_app(SidecarConfig()), host="127.0.0.1", port=0, log_level="error"
    )
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    try:
        deadline = time.monotonic() + 10
        while not server.started:
            if time.monotonic() > deadline:
                raise RuntimeError("server did not start")
            time.sleep(0.02)
        port = server.servers[0].sockets[0].getsockname()[1]
        url = f"http://127.0.0.1:{port}"

        weighted = weigh_terms(
            CODE, ["match", "player", "score"], SidecarWeightProvider(url), "python"
        )
        assert math.isclose(sum(t.weight for t in weighted), 1.0, abs_tol=1e-9)

        value = relevance(CODE, "Returns the player score.", SidecarEmbeddingProvider(url))
        assert -1.0 <= value <= 1.0
        same = relevance(CODE, CODE, SidecarEmbeddingProvider(url))
        assert abs(same - 1.0) < 1e-9
    finally:
        server.should_exit = True
        thread.join(timeout=10)
