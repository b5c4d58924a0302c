"""HTTP API over the framework, consumed by the companion web UI.

Every module error maps to exactly one stable machine code (ApiError
body: {"code", "message"}). ERROR_CODES is the documented set of codes
reachable through the endpoints; "internal_error" is the catch-all 500
that no documented request shape should ever trigger.
"""

from __future__ import annotations

import hashlib
import socket
from pathlib import Path
from typing import Literal

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field
from starlette.exceptions import HTTPException as StarletteHTTPException

from .config import AppConfig
from .errors import PlumberError
from .evaluation import load_profiles
from .model import Document, DocumentSource
from .registry import descriptor_to_dict
from .runner import RunResult, pipeline_to_dict, run_result_to_dict
from .service import AppState, build_state

# Machine codes reachable through documented endpoints, with HTTP statuses.
ERROR_STATUS = {
    "invalid_request": 400,
    "document_too_large": 413,
    "incomplete_pool": 409,
    "unknown_component": 404,
    "task_mismatch": 400,
    "kg_mismatch": 400,
    "model_missing": 409,
    "stale_model": 409,
    "no_pipeline_match": 404,
    "unknown_run": 404,
    "index_out_of_range": 400,
    "not_found": 404,
    "method_not_allowed": 405,
}
ERROR_CODES = frozenset(ERROR_STATUS)
INTERNAL_ERROR_CODE = "internal_error"


class PortInUse(PlumberError):
    code = "port_in_use"


class ApiError(PlumberError):
    """Gateway-level request error carrying an explicit machine code."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


class ManualSelection(BaseModel):
    coref: str
    extractor: str
    linkers: list[str] = Field(min_length=1, max_length=2)
    kg: str


class SelectRequest(BaseModel):
    text: str
    kg: str | None = None


class RunRequest(BaseModel):
    text: str | None = None
    file: str | None = None
    mode: Literal["manual", "automatic"]
    manual: ManualSelection | None = None
    kg: str | None = None


class FeedbackRequest(BaseModel):
    run_id: str
    triple_index: int
    verdict: Literal["accept", "reject"]
    pipeline_id: str | None = None


def _error_response(code: str, message: str) -> JSONResponse:
    status = ERROR_STATUS.get(code)
    if status is None:
        status, code = 400, "invalid_request"
    return JSONResponse(status_code=status, content={"code": code, "message": message})


def create_app(state: AppState) -> FastAPI:
    app = FastAPI(title="plumber", docs_url=None, redoc_url=None)
    app.state.plumber = state

    if state.config.ui_origin:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=[state.config.ui_origin],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(PlumberError)
    async def plumber_error_handler(request: Request, exc: PlumberError):
        return _error_response(exc.code, exc.message)

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc: RequestValidationError):
        return _error_response("invalid_request", str(exc.errors()[:3]))

    @app.exception_handler(StarletteHTTPException)
    async def http_handler(request: Request, exc: StarletteHTTPException):
        if exc.status_code == 404:
            return _error_response("not_found", "no such endpoint or resource")
        if exc.status_code == 405:
            return _error_response("method_not_allowed", "method not allowed here")
        return JSONResponse(
            status_code=exc.status_code,
            content={"code": INTERNAL_ERROR_CODE, "message": str(exc.detail)},
        )

    @app.exception_handler(Exception)
    async def fallback_handler(request: Request, exc: Exception):
        return JSONResponse(
            status_code=500,
            content={"code": INTERNAL_ERROR_CODE, "message": "unexpected failure"},
        )

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.get("/components")
    def components():
        return [descriptor_to_dict(d) for d in state.registry.list_components()]

    @app.get("/pipelines")
    def pipelines(kg: str | None = None):
        pool, stats = state.registry.enumerate_pipelines()
        selected = [p for p in pool if kg is None or p.kg == kg]
        return {
            "pipelines": [pipeline_to_dict(p) for p in selected],
            "stats": {
                "coref_count": stats.coref_count,
                "extractor_count": stats.extractor_count,
                "entity_linkers": stats.entity_linkers,
                "relation_linkers": stats.relation_linkers,
                "joint_linkers": stats.joint_linkers,
                "total": stats.total,
            },
        }

    @app.post("/pipelines/validate")
    def validate_pipeline(req: ManualSelection):
        pipeline, _ = state.selector.select_manual(
            req.coref, req.extractor, req.linkers, req.kg
        )
        return pipeline_to_dict(pipeline)

    @app.post("/select")
    def select(req: SelectRequest):
        pipeline, scores = state.selector.select_automatic(req.text, req.kg)
        ranking = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
        return {
            "pipeline": pipeline_to_dict(pipeline),
            "scores": [{"pipeline_id": pid, "score": score} for pid, score in ranking],
        }

    @app.post("/run")
    def run(req: RunRequest):
        result = _execute_run(state, req)
        return run_result_to_dict(result)

    @app.get("/runs/{run_id}")
    def get_run(run_id: str):
        return run_result_to_dict(state.run_store.get(run_id))

    @app.post("/feedback")
    def feedback(req: FeedbackRequest):
        record = state.feedback.record_feedback(
            run_id=req.run_id,
            triple_index=req.triple_index,
            verdict=req.verdict,
            pipeline_id=req.pipeline_id,
        )
        return {
            "acknowledged": True,
            "record": {
                "run_id": record.run_id,
                "triple_index": record.triple_index,
                "verdict": record.verdict,
                "pipeline_id": record.pipeline_id,
                "timestamp": record.timestamp,
            },
        }

    @app.get("/profiles")
    def profiles():
        path = state.config.data_dir / "profiles.json"
        if not path.is_file():
            return []
        return [
            {
                "pipeline_id": p.pipeline_id,
                "per_document_f1": list(p.per_document_f1),
                "f1": p.report.f1,
                "precision": p.report.precision,
                "recall": p.report.recall,
                "mean_latency_ms": p.mean_latency_ms,
            }
            for p in load_profiles(path)
        ]

    return app


def _execute_run(state: AppState, req: RunRequest) -> RunResult:
    if (req.text is None) == (req.file is None):
        raise ApiError("invalid_request", "provide exactly one of 'text' or 'file'")
    if req.text is not None:
        text = req.text
        source = DocumentSource.INLINE
    else:
        path = Path(req.file)
        try:
            text = path.read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            raise ApiError("invalid_request", f"cannot read file {req.file!r}: {exc}")
        source = DocumentSource.FILE

    doc = Document(
        id="doc-" + hashlib.sha256(text.encode("utf-8")).hexdigest()[:12],
        text=text,
        source=source,
    )

    if req.mode == "manual":
        if req.manual is None:
            raise ApiError("invalid_request", "manual mode requires a 'manual' selection")
        pipeline, _ = state.selector.select_manual(
            req.manual.coref, req.manual.extractor, req.manual.linkers, req.manual.kg
        )
        return state.runner.run_pipeline(pipeline, doc, mode="manual")

    pipeline, _ = state.selector.select_automatic(text, req.kg)
    return state.runner.run_pipeline(pipeline, doc, mode="automatic")


def serve(config: AppConfig, host: str = "127.0.0.1") -> None:
    """Bind the configured port and serve until interrupted."""
    import uvicorn

    with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as probe:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        try:
            probe.bind((host, config.port))
        except OSError as exc:
            raise PortInUse(f"port {config.port} is already in use: {exc}") from exc

    app = create_app(build_state(config))
    uvicorn.run(
        app,
        host=host,
        port=config.port,
        timeout_graceful_shutdown=10,
        log_level="warning",
    )
