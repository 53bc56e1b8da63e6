"""HTTP service: term attention weights and text embeddings.

Endpoints (JSON over HTTP/1.1):

  POST /v1/term-weights  {code, language, terms}  -> {weights, model_id, warning?}
  POST /v1/embed         {texts}                  -> {vectors, dim, model_id}
  GET  /v1/health                                 -> {status, model_id, dim}

The service is stateless between requests; model inference is serialized
behind a lock, so concurrent clients queue rather than interleave.
Malformed request shapes return 400; an unloaded or failed backend 503.
"""

from __future__ import annotations

import threading
from contextlib import asynccontextmanager
from typing import Optional

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .alignment import align_term_weights
from .backends import Backend, build_backend
from .config import SidecarConfig


class TermWeightRequest(BaseModel):
    code: str
    language: str
    terms: list[str]


class TermWeightResponse(BaseModel):
    weights: list[float]
    model_id: str
    warning: Optional[str] = None


class EmbedRequest(BaseModel):
    texts: list[str]


class EmbedResponse(BaseModel):
    vectors: list[list[float]]
    dim: int
    model_id: str


def create_app(config: SidecarConfig | None = None, backend: Backend | None = None) -> FastAPI:
    config = config or SidecarConfig()
    backend = backend or build_backend(config)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        try:
            backend.load()
            app.state.ready = True
            app.state.load_error = None
        except Exception as exc:  # surface via /v1/health, not a crash
            app.state.ready = False
            app.state.load_error = str(exc)
        yield

    app = FastAPI(title="commentscore-sidecar", lifespan=lifespan)
    app.state.ready = False
    app.state.load_error = None
    app.state.backend = backend
    app.state.inference_lock = threading.Lock()

    @app.exception_handler(RequestValidationError)
    async def bad_request(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    def require_ready():
        if not app.state.ready:
            detail = app.state.load_error or "model not loaded"
            raise HTTPException(status_code=503, detail=detail)

    @app.get("/v1/health")
    def health():
        if not app.state.ready:
            raise HTTPException(
                status_code=503, detail=app.state.load_error or "model not loaded"
            )
        return {"status": "ok", "model_id": backend.model_id, "dim": backend.dim}

    @app.post("/v1/term-weights", response_model=TermWeightResponse,
              response_model_exclude_none=True)
    def term_weights(request: TermWeightRequest):
        require_ready()
        if not request.terms:
            raise HTTPException(status_code=400, detail="terms must be non-empty")
        with app.state.inference_lock:
            offsets = [
                (start, end)
                for _, start, end in backend.tokenize_with_offsets(request.code)
            ]
            mass = backend.token_attention_mass(request.code)
        weights = align_term_weights(
            request.code, request.language, request.terms, offsets, mass
        )
        warning = None
        if all(w == 0.0 for w in weights):
            warning = "no term aligned with any identifier in the code"
        return TermWeightResponse(
            weights=weights, model_id=backend.model_id, warning=warning
        )

    @app.post("/v1/embed", response_model=EmbedResponse)
    def embed(request: EmbedRequest):
        require_ready()
        if not request.texts:
            raise HTTPException(status_code=400, detail="texts must be non-empty")
        with app.state.inference_lock:
            vectors = backend.embed(request.texts)
        return EmbedResponse(
            vectors=[[float(v) for v in row] for row in vectors],
            dim=int(vectors.shape[1]),
            model_id=backend.model_id,
        )

    return app
