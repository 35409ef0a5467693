"""JSON HTTP API over a session store.

All responses are emitted through the canonical serializer so that numbers
match the library (and the CLI) byte-for-byte. Errors map to HTTP 400 with
``{"error_code", "phase", "message"}``.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, File, Request, UploadFile
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import Response
from fastapi.staticfiles import StaticFiles

from .errors import ConfigError, FairrankError
from .jsonutil import canonical_json
from .session import SessionStore


def _json_response(payload, status_code: int = 200) -> Response:
    return Response(
        content=canonical_json(payload),
        status_code=status_code,
        media_type="application/json",
    )


def create_app(store: SessionStore | None = None, static_dir: str | Path | None = None) -> FastAPI:
    store = store or SessionStore()
    app = FastAPI(title="fairrank", docs_url=None, redoc_url=None)
    app.state.store = store
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(FairrankError)
    async def _engine_error(_req: Request, exc: FairrankError):
        return _json_response(
            {"error_code": exc.error_code, "phase": exc.phase, "message": str(exc)},
            status_code=400,
        )

    @app.post("/api/datasets")
    async def upload_dataset(csv: UploadFile,
                             schema_file: UploadFile = File(alias="schema")):
        csv_bytes = await csv.read()
        schema_bytes = await schema_file.read()
        dataset_id = store.add_dataset(csv_bytes, schema_bytes)
        return _json_response({"dataset_id": dataset_id})

    @app.get("/api/datasets")
    async def list_datasets():
        return _json_response({"dataset_ids": store.dataset_ids()})

    @app.get("/api/datasets/{dataset_id}/features")
    async def dataset_features(dataset_id: str, sensitive: str | None = None,
                               protected: str | None = None):
        return _json_response(store.dataset_features(dataset_id, sensitive, protected))

    @app.post("/api/runs")
    async def create_run(request: Request):
        raw = await request.json()
        record = store.create_run(raw)
        return Response(content=store.run_json(record.run_id),
                        media_type="application/json")

    @app.get("/api/runs")
    async def list_runs():
        return _json_response(store.summaries())

    # declared before /api/runs/{run_id} so "compare" is not parsed as an id
    @app.get("/api/runs/compare")
    async def compare_runs(ids: str):
        try:
            run_ids = [int(part) for part in ids.split(",") if part.strip() != ""]
        except ValueError:
            raise ConfigError(f"ids must be a comma-separated list of integers: {ids!r}")
        return _json_response(store.compare_runs(run_ids))

    @app.get("/api/runs/{run_id}")
    async def get_run(run_id: int):
        return Response(content=store.run_json(run_id), media_type="application/json")

    @app.get("/api/runs/{run_id}/curves")
    async def get_curves(run_id: int):
        return _json_response(store.curves(run_id))

    @app.get("/api/runs/{run_id}/instances/{i}")
    async def get_instance(run_id: int, i: int):
        return _json_response(store.instance_detail(run_id, i))

    @app.get("/api/runs/{run_id}/audit")
    async def get_audit(run_id: int):
        return _json_response(store.audit_report(run_id))

    @app.get("/api/runs/{run_id}/distortion")
    async def get_distortion(run_id: int):
        return _json_response(store.distortion_matrix(run_id))

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
