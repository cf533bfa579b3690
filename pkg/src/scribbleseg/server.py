"""Local HTTP session service for interactive scribble refinement.

A session caches every scribble-independent artifact (superpixels,
features, candidate affinity graphs) at creation, so each scribble
submission only pays for the scribble-dependent stages. Wire format is
JSON with base64-encoded PNGs.
"""

from __future__ import annotations

import base64
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import io as sio
from .config import PipelineConfig
from .errors import InputError, ScribbleSegError
from .estimator import ScribbleSegmenter
from .propagation import LabelMask

FRONTEND_DIST = Path(__file__).resolve().parents[2] / "frontend" / "dist"


class StrokeModel(BaseModel):
    class_id: int
    width_px: float = 3.0
    points: list[tuple[float, float]]


class CreateSessionRequest(BaseModel):
    image_png: str
    full_grid: bool = False
    config: Optional[dict[str, object]] = None


class ScribbleRequest(BaseModel):
    strokes: Optional[list[StrokeModel]] = None
    scribbles_png: Optional[str] = None


@dataclass
class Session:
    id: str
    segmenter: ScribbleSegmenter
    config: PipelineConfig
    lock: threading.Lock = field(default_factory=threading.Lock)
    last_mask: LabelMask | None = None


def _b64_png(data: bytes) -> str:
    return base64.b64encode(data).decode("ascii")


def _decode_b64(payload: str, what: str) -> bytes:
    try:
        return base64.b64decode(payload, validate=True)
    except Exception as exc:
        raise InputError(f"invalid base64 in {what}: {exc}") from exc


def create_app(base_config: PipelineConfig | None = None) -> FastAPI:
    base_config = base_config or PipelineConfig()
    app = FastAPI(title="scribbleseg", version="0.1.0")
    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()

    def _get(session_id: str) -> Session:
        with registry_lock:
            session = sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id}")
        return session

    @app.get("/health")
    def health():
        return {"status": "ok", "sessions": len(sessions)}

    @app.post("/sessions")
    def create_session(req: CreateSessionRequest):
        cfg = base_config if req.full_grid else base_config.interactive()
        if req.config:
            from .config import parse_config

            lines = "\n".join(f"{k} = {v}" for k, v in req.config.items())
            try:
                cfg = parse_config(lines, cfg)
            except InputError as exc:
                raise HTTPException(status_code=400, detail=str(exc)) from exc
        try:
            image = sio.decode_image(_decode_b64(req.image_png, "image_png"))
        except InputError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        segmenter = ScribbleSegmenter(**_estimator_params(cfg))
        segmenter.fit(image)
        session = Session(id=uuid.uuid4().hex, segmenter=segmenter, config=cfg)
        with registry_lock:
            sessions[session.id] = session
        return {
            "id": session.id,
            "width": int(image.shape[1]),
            "height": int(image.shape[0]),
            "superpixel_counts": segmenter.superpixel_counts(),
        }

    @app.post("/sessions/{session_id}/scribbles")
    def submit_scribbles(session_id: str, req: ScribbleRequest):
        session = _get(session_id)
        image = session.segmenter.image_
        height, width = image.shape[:2]
        if req.scribbles_png is not None:
            try:
                decoded = sio.decode_mask_png(_decode_b64(req.scribbles_png, "scribbles_png"))
            except InputError as exc:
                raise HTTPException(status_code=400, detail=str(exc)) from exc
            arr = np.asarray(decoded.labels, dtype=np.int64)
            if arr.shape != (height, width):
                raise HTTPException(status_code=400, detail="scribble raster does not match image size")
        elif req.strokes:
            try:
                arr = sio.rasterize_strokes(
                    [s.model_dump() for s in req.strokes], width, height, session.config.n_classes
                )
            except InputError as exc:
                raise HTTPException(status_code=400, detail=str(exc)) from exc
        else:
            raise HTTPException(status_code=400, detail="submit strokes or scribbles_png")
        if not (arr != 255).any():
            raise HTTPException(status_code=400, detail="empty scribble set")
        started = time.perf_counter()
        with session.lock:
            try:
                session.segmenter.propagate(arr)
            except InputError as exc:
                raise HTTPException(status_code=400, detail=str(exc)) from exc
            except ScribbleSegError as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from exc
            result = session.segmenter.result_
            session.last_mask = result.mask
        elapsed_ms = (time.perf_counter() - started) * 1000.0
        confidence = np.clip(np.round(result.votes * 255.0), 0, 255).astype(np.uint8)
        return {
            "mask_png": _b64_png(sio.encode_mask_png(result.mask)),
            "confidence_png": _b64_png(sio.encode_mask_png(confidence)),
            "ms": elapsed_ms,
        }

    @app.get("/sessions/{session_id}/mask")
    def get_mask(session_id: str):
        session = _get(session_id)
        with session.lock:
            if session.last_mask is None:
                raise HTTPException(status_code=404, detail="no scribbles submitted yet")
            return {"mask_png": _b64_png(sio.encode_mask_png(session.last_mask))}

    @app.delete("/sessions/{session_id}", status_code=204)
    def delete_session(session_id: str):
        with registry_lock:
            if sessions.pop(session_id, None) is None:
                raise HTTPException(status_code=404, detail=f"unknown session {session_id}")

    if FRONTEND_DIST.is_dir():
        app.mount("/", StaticFiles(directory=FRONTEND_DIST, html=True), name="ui")

    return app


def _estimator_params(cfg: PipelineConfig) -> dict:
    return {
        "color_spaces": tuple(space.value for space in cfg.color_spaces),
        "k_values": cfg.k_values,
        "sigma_fh": cfg.sigma_fh,
        "sigma_c": cfg.sigma_c,
        "sigma_t": cfg.sigma_t,
        "sigma_grid": cfg.sigma_grid,
        "min_size": cfg.min_size,
        "n_classes": cfg.n_classes,
        "ignore_label": cfg.ignore_label,
        "tolerance": cfg.tolerance,
        "max_iterations": cfg.max_iterations,
        "alpha_margin": cfg.alpha_margin,
        "jobs": cfg.jobs,
        "two_stage_vote": cfg.two_stage_vote,
    }
