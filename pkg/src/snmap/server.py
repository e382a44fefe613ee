"""HTTP service: the whole pipeline as a stateful session API.

A session walks the states created -> scanned -> cropped -> segmented ->
registered -> confirmed -> analyzed; a rejected alignment moves it to
failed.  Out-of-order calls get a 409 and leave the session untouched.
Uploads are raw CSV bodies; map payloads come back as base64 float32
little-endian so clients can reconstruct exact values.
"""

from __future__ import annotations

import base64
import pickle
import tempfile
import threading
import uuid
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

import numpy as np
from fastapi import FastAPI, HTTPException, Query, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import __version__
from .core import Frame, PixelCoord, PolygonROI, RectROI, Sequence, validate_pair
from .exceptions import InputError, NoValley, SnmapError
from .ingest import ScanSpec, scan_text
from .pipeline import ALIGNMENT_SUGGESTIONS, _movie_frames, _unified_rois
from .registration import (
    RigidTransform,
    TemporalAlignment,
    crop_roi,
    midline,
    polygon_mask,
    temporal_align,
    transform_from_midline,
    transform_from_points,
    warp,
)
from .render import MovieSpec, encode_movie, height_field_payload, overlay_check
from .segmentation import Threshold, apply_threshold, find_threshold, fit_gmm, histogram
from .smoothing import Bandwidths
from .snm import SnmConfig, SnmResult, run_snm

MAP_KINDS = ("D", "S", "T", "P", "SIG")
MOVIE_KINDS = ("O1", "O2", "R1", "R2", "D", "S", "T", "P")


# ---------------------------------------------------------------- models


class CreateSessionRequest(BaseModel):
    seed: int = 0
    preprocessed: bool = False


class SessionResource(BaseModel):
    id: str
    state: str
    progress: float = 0.0
    seed: int = 0
    preprocessed: bool = False
    frame_count: int | None = None
    frame_rows: int | None = None
    frame_cols: int | None = None
    aligned_pairs: int | None = None
    warnings: list[str] = Field(default_factory=list)


class RectModel(BaseModel):
    row0: int
    col0: int
    height: int
    width: int


class PointModel(BaseModel):
    row: float
    col: float


class RoiRequest(BaseModel):
    roi1: RectModel | None = None
    roi2: RectModel | None = None


class HistogramResponse(BaseModel):
    which: int
    bin_edges: list[float]
    counts: list[int]
    n_pixels: int


class SegmentRequest(BaseModel):
    mode: Literal["auto", "manual"] = "auto"
    cutoff1: float | None = None
    cutoff2: float | None = None
    groups: int | Literal["auto"] = "auto"


class ThresholdModel(BaseModel):
    value: float
    origin: str


class SegmentResponse(BaseModel):
    state: str
    thresholds: dict[str, ThresholdModel]


class RegisterRequest(BaseModel):
    mode: Literal["auto", "manual"] = "auto"
    points: list[PointModel] | None = None


class TransformModel(BaseModel):
    theta: float
    s_x: float
    s_y: float


class TemporalModel(BaseModel):
    j_max: int
    avg_cor: list[float]
    excluded: int
    pairs: list[tuple[int, int]]


class RegisterResponse(BaseModel):
    state: str
    temporal: TemporalModel
    transforms: dict[str, TransformModel]
    overlay_url: str


class ConfirmRequest(BaseModel):
    accepted: bool


class ConfirmResponse(BaseModel):
    state: str
    suggestions: list[str] = Field(default_factory=list)


class BandwidthModel(BaseModel):
    h1: float
    h2: float


class AnalyzeRequest(BaseModel):
    alpha: float = 0.05
    sidedness: Literal["two", "greater"] = "two"
    display: Literal["basic", "all"] = "basic"
    pmap_dim: Literal[2, 3] = 2
    polygon: list[PointModel] | None = None
    bandwidths: list[BandwidthModel] | None = None
    fdr_scope: Literal["frame", "pooled"] = "frame"
    df_method: Literal["two-moment", "n-minus-6"] = "two-moment"
    workers: int = 1


class DfModel(BaseModel):
    sigma_hat: float
    delta1: float
    delta2: float
    nu: float
    method: str


class AnalyzeResponse(BaseModel):
    state: str
    frames: int
    alpha: float
    sidedness: str
    bandwidths: BandwidthModel
    df: list[DfModel]
    maps: list[str]
    movies: list[str]
    warnings: list[str] = Field(default_factory=list)


class MapPayload(BaseModel):
    kind: str
    frame: int
    rows: int
    cols: int
    dtype: Literal["f32le"] = "f32le"
    data: str


class SurfacePayload(BaseModel):
    rows: int
    cols: int
    values: list[float]
    range: tuple[float, float]


class HealthResponse(BaseModel):
    status: str
    version: str


REQUEST_MODELS = (
    CreateSessionRequest,
    RoiRequest,
    SegmentRequest,
    RegisterRequest,
    ConfirmRequest,
    AnalyzeRequest,
)
RESPONSE_MODELS = (
    SessionResource,
    HistogramResponse,
    SegmentResponse,
    RegisterResponse,
    ConfirmResponse,
    AnalyzeResponse,
    MapPayload,
    SurfacePayload,
    HealthResponse,
)


# ---------------------------------------------------------------- session


@dataclass
class Session:
    id: str
    seed: int = 0
    preprocessed: bool = False
    state: str = "created"
    progress: float = 0.0
    warnings: list[str] = field(default_factory=list)
    raw: dict[int, Sequence] = field(default_factory=dict)
    cropped: dict[int, list[Frame]] = field(default_factory=dict)
    segmented: dict[int, list[Frame]] = field(default_factory=dict)
    thresholds: dict[int, Threshold] = field(default_factory=dict)
    alignment: TemporalAlignment | None = None
    transforms: dict[int, RigidTransform] = field(default_factory=dict)
    registered: dict[int, list[Frame]] = field(default_factory=dict)
    overlay_png: bytes | None = None
    result: SnmResult | None = None
    analyze_params: dict = field(default_factory=dict)
    movie_dir: str | None = None
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def __getstate__(self):
        state = self.__dict__.copy()
        del state["lock"]
        return state

    def __setstate__(self, state):
        self.__dict__.update(state)
        self.lock = threading.Lock()

    def resource(self) -> SessionResource:
        # dims reflect the frames later stages will see, so a crop echoes
        # back as the new shape
        shape = None
        if self.cropped:
            shape = next(iter(self.cropped.values()))[0].shape
        elif self.raw:
            shape = next(iter(self.raw.values())).frame_shape
        pairs = None
        if self.alignment is not None:
            pairs = len(self.alignment.pairs)
        elif self.preprocessed and len(self.raw) == 2:
            pairs = min(len(s) for s in self.raw.values())
        return SessionResource(
            id=self.id,
            state=self.state,
            progress=self.progress,
            seed=self.seed,
            preprocessed=self.preprocessed,
            frame_count=min(len(s) for s in self.raw.values()) if self.raw else None,
            frame_rows=shape[0] if shape else None,
            frame_cols=shape[1] if shape else None,
            aligned_pairs=pairs,
            warnings=list(self.warnings),
        )


class SessionStore:
    """In-memory sessions, optionally mirrored to a directory."""

    def __init__(self, directory: str | None = None):
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()
        self._dir = Path(directory) if directory else None
        if self._dir is not None:
            self._dir.mkdir(parents=True, exist_ok=True)
            for p in sorted(self._dir.glob("*.pkl")):
                try:
                    with p.open("rb") as fh:
                        sess = pickle.load(fh)
                    self._sessions[sess.id] = sess
                except Exception:  # a corrupt file should not kill the app
                    continue

    def create(self, seed: int, preprocessed: bool) -> Session:
        sess = Session(id=uuid.uuid4().hex, seed=seed, preprocessed=preprocessed)
        with self._lock:
            self._sessions[sess.id] = sess
        self.save(sess)
        return sess

    def get(self, session_id: str) -> Session:
        with self._lock:
            sess = self._sessions.get(session_id)
        if sess is None:
            raise HTTPException(status_code=404, detail="unknown session")
        return sess

    def delete(self, session_id: str) -> None:
        with self._lock:
            sess = self._sessions.pop(session_id, None)
        if sess is None:
            raise HTTPException(status_code=404, detail="unknown session")
        if self._dir is not None:
            (self._dir / f"{session_id}.pkl").unlink(missing_ok=True)

    def save(self, sess: Session) -> None:
        if self._dir is None:
            return
        tmp = self._dir / f"{sess.id}.pkl.tmp"
        with tmp.open("wb") as fh:
            pickle.dump(sess, fh)
        tmp.replace(self._dir / f"{sess.id}.pkl")


def _require_state(sess: Session, allowed: tuple[str, ...]) -> None:
    if sess.state not in allowed:
        raise HTTPException(
            status_code=409,
            detail=f"session is {sess.state!r}; expected one of {list(allowed)}",
        )


def _b64_f32(arr: np.ndarray) -> str:
    return base64.b64encode(np.ascontiguousarray(arr, dtype="<f4").tobytes()).decode(
        "ascii"
    )


def _collect(record: list[warnings.WarningMessage], sess: Session) -> None:
    for w in record:
        msg = str(w.message)
        if msg not in sess.warnings:
            sess.warnings.append(msg)


def _ui_dir() -> Path | None:
    import os

    env = os.environ.get("SNMAP_UI_DIR")
    if env:
        p = Path(env)
        return p if p.is_dir() else None
    here = Path(__file__).resolve()
    for candidate in (
        here.parent / "ui",
        here.parents[2] / "frontend" / "dist",
        here.parents[3] / "frontend" / "dist",
    ):
        if (candidate / "index.html").is_file():
            return candidate
    return None


# ------------------------------------------------------------------- app


def create_app(serve_ui: bool = True, session_dir: str | None = None) -> FastAPI:
    import os

    if session_dir is None:
        session_dir = os.environ.get("SNMAP_SESSION_DIR") or None
    store = SessionStore(session_dir)
    app = FastAPI(title="snmap", version=__version__)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.store = store

    @app.exception_handler(SnmapError)
    async def snmap_error(request: Request, exc: SnmapError):
        status = 422 if isinstance(exc, InputError) else 500
        detail = {"error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, NoValley) and exc.suggestion is not None:
            detail["suggestion"] = exc.suggestion
        return JSONResponse(status_code=status, content={"detail": detail})

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.post("/sessions", response_model=SessionResource, status_code=201)
    def create_session(body: CreateSessionRequest) -> SessionResource:
        sess = store.create(seed=body.seed, preprocessed=body.preprocessed)
        return sess.resource()

    @app.get("/sessions/{session_id}", response_model=SessionResource)
    def get_session(session_id: str) -> SessionResource:
        return store.get(session_id).resource()

    @app.delete("/sessions/{session_id}", status_code=204)
    def delete_session(session_id: str) -> Response:
        store.delete(session_id)
        return Response(status_code=204)

    @app.post("/sessions/{session_id}/upload", response_model=SessionResource)
    async def upload(
        session_id: str,
        request: Request,
        which: int = Query(..., ge=1, le=2),
        mode: Literal["row", "col", "blank"] = "blank",
        nframe: int = Query(..., ge=1),
        nrow: int = Query(..., ge=1),
        ncol: int = Query(..., ge=1),
        row_id: str = "",
        col_id: int = Query(default=1, ge=1),
    ) -> SessionResource:
        sess = store.get(session_id)
        body = await request.body()
        with sess.lock:
            _require_state(sess, ("created", "scanned"))
            spec = ScanSpec(
                mode=mode, nframe=nframe, nrow=nrow, ncol=ncol,
                row_id=row_id, col_id=col_id,
            )
            with warnings.catch_warnings(record=True) as rec:
                warnings.simplefilter("always")
                seq = scan_text(
                    body.decode("utf-8-sig"), spec, label=f"seq{which}"
                )
                sess.raw[which] = seq
                if len(sess.raw) == 2:
                    s1, s2 = validate_pair(sess.raw[1], sess.raw[2])
                    sess.raw = {1: s1, 2: s2}
                    sess.state = "scanned"
            _collect(rec, sess)
        store.save(sess)
        return sess.resource()

    @app.post("/sessions/{session_id}/roi", response_model=SessionResource)
    def set_roi(session_id: str, body: RoiRequest) -> SessionResource:
        sess = store.get(session_id)
        with sess.lock:
            _require_state(sess, ("scanned", "cropped"))
            if body.roi1 is None and body.roi2 is None:
                raise InputError("provide roi1, roi2 or both")
            r1 = body.roi1 and RectROI(**body.roi1.model_dump())
            r2 = body.roi2 and RectROI(**body.roi2.model_dump())
            rois = _unified_rois(r1, r2, sess.raw[1].frame_shape)
            sess.cropped = {
                1: [crop_roi(f, rois[0]) for f in sess.raw[1].frames],
                2: [crop_roi(f, rois[1]) for f in sess.raw[2].frames],
            }
            sess.state = "cropped"
        store.save(sess)
        return sess.resource()

    def _working_frames(sess: Session, which: int) -> list[Frame]:
        if sess.cropped:
            return sess.cropped[which]
        return list(sess.raw[which].frames)

    @app.get(
        "/sessions/{session_id}/histogram", response_model=HistogramResponse
    )
    def get_histogram(
        session_id: str,
        which: int = Query(..., ge=1, le=2),
        nbins: int = Query(default=64, ge=1),
    ) -> HistogramResponse:
        sess = store.get(session_id)
        _require_state(
            sess,
            ("scanned", "cropped", "segmented", "registered", "confirmed",
             "analyzed", "failed"),
        )
        summary = histogram(_working_frames(sess, which)[0], nbins=nbins)
        return HistogramResponse(which=which, **summary.to_dict())

    @app.post("/sessions/{session_id}/segment", response_model=SegmentResponse)
    def segment(session_id: str, body: SegmentRequest) -> SegmentResponse:
        sess = store.get(session_id)
        with sess.lock:
            _require_state(
                sess, ("scanned", "cropped", "segmented", "registered", "failed")
            )
            if body.mode == "manual" and (body.cutoff1 is None or body.cutoff2 is None):
                raise InputError("manual segmentation needs cutoff1 and cutoff2")
            out: dict[int, list[Frame]] = {}
            thr: dict[int, Threshold] = {}
            for which in (1, 2):
                frames = _working_frames(sess, which)
                cutoff = (
                    (body.cutoff1 if which == 1 else body.cutoff2)
                    if body.mode == "manual"
                    else None
                )
                if cutoff is not None:
                    t = Threshold(value=float(cutoff), origin="manual")
                else:
                    model = fit_gmm(
                        frames[0].values, n_components=body.groups, seed=sess.seed
                    )
                    t = find_threshold(model)
                out[which] = [apply_threshold(f, t) for f in frames]
                thr[which] = t
            sess.segmented = out
            sess.thresholds = thr
            sess.alignment = None
            sess.transforms = {}
            sess.registered = {}
            sess.overlay_png = None
            sess.state = "segmented"
        store.save(sess)
        return SegmentResponse(
            state=sess.state,
            thresholds={
                f"seq{k}": ThresholdModel(**t.to_dict()) for k, t in thr.items()
            },
        )

    @app.post("/sessions/{session_id}/register", response_model=RegisterResponse)
    def register(session_id: str, body: RegisterRequest) -> RegisterResponse:
        sess = store.get(session_id)
        with sess.lock:
            _require_state(sess, ("segmented", "registered", "failed"))
            if not sess.segmented:
                raise HTTPException(status_code=409, detail="segment first")
            if body.mode == "manual":
                if body.points is None or len(body.points) != 4:
                    raise InputError(
                        "manual registration needs four points: two per sequence"
                    )
                pts = [PixelCoord(p.row, p.col) for p in body.points]
            with warnings.catch_warnings(record=True) as rec:
                warnings.simplefilter("always")
                align = temporal_align(
                    Sequence(sess.segmented[1], label="seq1"),
                    Sequence(sess.segmented[2], label="seq2"),
                )
                ex = align.excluded
                post = {k: v[ex:] for k, v in sess.segmented.items()}
                tf: dict[int, RigidTransform] = {}
                reg: dict[int, list[Frame]] = {}
                for which in (1, 2):
                    shape = post[which][0].shape
                    if body.mode == "manual":
                        p = pts[0:2] if which == 1 else pts[2:4]
                        tf[which] = transform_from_points(p[0], p[1], shape)
                    else:
                        tf[which] = transform_from_midline(
                            midline(post[which][0]), shape
                        )
                    reg[which] = [warp(f, tf[which]) for f in post[which]]
            _collect(rec, sess)
            sess.alignment = align
            sess.transforms = tf
            sess.registered = reg
            i, j = align.pairs[0]
            overlay = overlay_check(reg[1][i], reg[2][j], scale=8)
            import io

            from PIL import Image

            buf = io.BytesIO()
            Image.fromarray(overlay, mode="RGB").save(buf, format="PNG")
            sess.overlay_png = buf.getvalue()
            sess.state = "registered"
        store.save(sess)
        return RegisterResponse(
            state=sess.state,
            temporal=TemporalModel(**sess.alignment.to_dict()),
            transforms={
                f"seq{k}": TransformModel(
                    theta=t.theta, s_x=t.s_x, s_y=t.s_y
                )
                for k, t in tf.items()
            },
            overlay_url=f"/sessions/{sess.id}/overlay",
        )

    @app.get("/sessions/{session_id}/overlay")
    def get_overlay(session_id: str) -> Response:
        sess = store.get(session_id)
        if sess.overlay_png is None:
            raise HTTPException(status_code=404, detail="no overlay yet")
        return Response(content=sess.overlay_png, media_type="image/png")

    @app.post("/sessions/{session_id}/confirm", response_model=ConfirmResponse)
    def confirm(session_id: str, body: ConfirmRequest) -> ConfirmResponse:
        sess = store.get(session_id)
        with sess.lock:
            _require_state(sess, ("registered",))
            if body.accepted:
                sess.state = "confirmed"
                suggestions: list[str] = []
            else:
                sess.state = "failed"
                suggestions = list(ALIGNMENT_SUGGESTIONS)
        store.save(sess)
        return ConfirmResponse(state=sess.state, suggestions=suggestions)

    @app.post("/sessions/{session_id}/analyze", response_model=AnalyzeResponse)
    def analyze(session_id: str, body: AnalyzeRequest) -> AnalyzeResponse:
        sess = store.get(session_id)
        with sess.lock:
            if sess.preprocessed:
                _require_state(sess, ("scanned", "analyzed"))
                pairs = list(zip(sess.raw[1].frames, sess.raw[2].frames))
            else:
                _require_state(sess, ("confirmed", "analyzed"))
                reg = sess.registered
                pairs = [
                    (reg[1][i], reg[2][j]) for i, j in sess.alignment.pairs
                ]

            mask = None
            if body.polygon is not None:
                poly = PolygonROI([(p.row, p.col) for p in body.polygon])
                mask = polygon_mask(pairs[0][0].shape, poly)
                pairs = [
                    (
                        Frame(np.where(mask, a.values, 0.0)),
                        Frame(np.where(mask, b.values, 0.0)),
                    )
                    for a, b in pairs
                ]

            grid = None
            if body.bandwidths:
                grid = tuple(Bandwidths(b.h1, b.h2) for b in body.bandwidths)
            cfg = SnmConfig(
                alpha=body.alpha,
                sidedness=body.sidedness,
                bandwidths=grid,
                df_method=body.df_method,
                fdr_scope=body.fdr_scope,
                seed=sess.seed,
                workers=body.workers,
            )
            sess.progress = 0.0

            def on_frame(done: int, total: int) -> None:
                sess.progress = done / total

            with warnings.catch_warnings(record=True) as rec:
                warnings.simplefilter("always")
                result = run_snm(pairs, cfg, mask=mask, progress=on_frame)
            _collect(rec, sess)
            sess.result = result
            sess.analyze_params = body.model_dump()
            sess.progress = 1.0
            _render_movies(sess, body)
            sess.state = "analyzed"
        store.save(sess)
        return AnalyzeResponse(
            state=sess.state,
            frames=len(result.maps),
            alpha=body.alpha,
            sidedness=body.sidedness,
            bandwidths=BandwidthModel(**result.bandwidths.to_dict()),
            df=[DfModel(**d.to_dict()) for d in result.dfs],
            maps=list(MAP_KINDS),
            movies=_available_movies(sess),
            warnings=list(sess.warnings),
        )

    def _render_movies(sess: Session, body: AnalyzeRequest) -> None:
        result = sess.result
        if sess.movie_dir:
            import shutil

            shutil.rmtree(sess.movie_dir, ignore_errors=True)
        movie_dir = Path(tempfile.mkdtemp(prefix=f"snmap-{sess.id}-"))
        sess.movie_dir = str(movie_dir)
        todo: dict[str, tuple[list, list | None]] = {}
        p_maps = [m.p for m in result.maps]
        sig = [m.significant for m in result.maps]
        if body.pmap_dim == 2:
            todo["P"] = (p_maps, sig)
        if body.display == "all":
            if sess.preprocessed:
                o1 = [f.values for f in sess.raw[1].frames]
                o2 = [f.values for f in sess.raw[2].frames]
                r1, r2 = o1, o2
            else:
                ex = sess.alignment.excluded
                o1 = [f.values for f in sess.raw[1].frames[ex:]]
                o2 = [f.values for f in sess.raw[2].frames[ex:]]
                r1 = [f.values for f in sess.registered[1]]
                r2 = [f.values for f in sess.registered[2]]
            todo["O1"] = (o1, None)
            todo["O2"] = (o2, None)
            todo["R1"] = (r1, None)
            todo["R2"] = (r2, None)
            todo["D"] = ([m.d.values for m in result.maps], None)
            todo["S"] = ([m.s for m in result.maps], None)
            todo["T"] = ([m.t for m in result.maps], None)
        for kind, (values, sigs) in todo.items():
            frames_rgb = _movie_frames(values, kind, sigs)
            encode_movie(movie_dir / f"{kind}.gif", frames_rgb, MovieSpec(kind=kind))

    def _available_movies(sess: Session) -> list[str]:
        if not sess.movie_dir:
            return []
        return sorted(
            p.stem for p in Path(sess.movie_dir).glob("*.gif")
        )

    @app.get(
        "/sessions/{session_id}/maps/{kind}/{frame}", response_model=MapPayload
    )
    def get_map(session_id: str, kind: str, frame: int) -> MapPayload:
        sess = store.get(session_id)
        _require_state(sess, ("analyzed",))
        kind = kind.upper()
        if kind not in MAP_KINDS:
            raise HTTPException(status_code=404, detail=f"unknown map kind {kind!r}")
        if not 0 <= frame < len(sess.result.maps):
            raise HTTPException(status_code=404, detail="frame out of range")
        m = sess.result.maps[frame]
        arr = {
            "D": m.d.values,
            "S": m.s,
            "T": m.t,
            "P": m.p,
            "SIG": m.significant.astype(np.float32),
        }[kind]
        return MapPayload(
            kind=kind,
            frame=frame,
            rows=arr.shape[0],
            cols=arr.shape[1],
            data=_b64_f32(arr),
        )

    @app.get(
        "/sessions/{session_id}/surface/{kind}/{frame}",
        response_model=SurfacePayload,
    )
    def get_surface(session_id: str, kind: str, frame: int) -> SurfacePayload:
        sess = store.get(session_id)
        _require_state(sess, ("analyzed",))
        if kind.upper() != "P":
            raise HTTPException(
                status_code=404, detail="surface payloads exist for P only"
            )
        if not 0 <= frame < len(sess.result.maps):
            raise HTTPException(status_code=404, detail="frame out of range")
        return SurfacePayload(**height_field_payload(sess.result.maps[frame].p))

    @app.get("/sessions/{session_id}/movies/{kind}")
    def get_movie(session_id: str, kind: str) -> Response:
        sess = store.get(session_id)
        _require_state(sess, ("analyzed",))
        kind = kind.upper()
        if kind not in MOVIE_KINDS:
            raise HTTPException(status_code=404, detail=f"unknown movie kind {kind!r}")
        path = sess.movie_dir and Path(sess.movie_dir) / f"{kind}.gif"
        if not path or not path.is_file():
            raise HTTPException(
                status_code=404,
                detail=f"movie {kind!r} was not rendered for this session",
            )
        return Response(content=path.read_bytes(), media_type="image/gif")

    if serve_ui:
        ui = _ui_dir()
        if ui is not None:
            from fastapi.staticfiles import StaticFiles

            app.mount("/", StaticFiles(directory=str(ui), html=True), name="ui")

    return app
