"""Session-oriented HTTP API for the interactive workflow:
load, inspect, constrain, preview roots, commit steps, inspect the dual."""

from __future__ import annotations

import hashlib
import json
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .config import DEFAULT_CONFIG, SolverConfig
from .dual import DualDiagram, build_dual, update_member_forces
from .errors import (DegenerateDualError, DocumentError, NoSolutionForArea,
                     OverConstrainedError, PolystaticsError)
from .face_solver import (InconsistentConstraintsError, analyze_constraints,
                          solve_face)
from .model import PolyhedralComplex, load_complex
from .poly_solver import PolySolveState, StepRecord, update_polyhedron

UNDO_DEPTH = 32


class AnalyzeBody(BaseModel):
    fixed_edges: dict[str, float] = {}


class PreviewBody(BaseModel):
    fixed_edges: dict[str, float] = {}
    target_area: float


class CommitBody(BaseModel):
    fixed_edges: dict[str, float] = {}
    target_area: float
    root: str = "near"
    preview_id: str | None = None


@dataclass
class Session:
    id: str
    state: PolySolveState
    dual: DualDiagram | None
    config: SolverConfig
    version: int = 0
    undo_stack: list[PolySolveState] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)


def _constraint_error(kind: str, exc: Exception) -> JSONResponse:
    return JSONResponse(status_code=422,
                        content={"kind": kind, "detail": str(exc)})


def _classification_payload(classification) -> dict:
    cgdof = classification.cgdof
    payload = {
        "cgdof": None if cgdof == float("-inf") else int(cgdof),
        "consistent": classification.consistent,
        "ci": None,
        "nci": [],
        "fix": [],
        "nfd": [],
    }
    if classification.consistent:
        if classification.ci is not None:
            payload["ci"] = int(classification.edges[classification.ci])
        payload["nci"] = sorted(classification.global_of(classification.nci))
        payload["fix"] = sorted(classification.global_of(classification.fix))
        payload["nfd"] = sorted(classification.global_of(classification.nfd))
    return payload


def _ghost_vertices(complex_: PolyhedralComplex, face_index: int,
                    lengths: np.ndarray) -> list[list[float]]:
    """Face polygon positions chained from the face's first current vertex."""
    loop = complex_.face_vertex_loop(face_index)
    dirs = complex_.face_traversal_directions(face_index)
    point = complex_.vertices[loop[0]].copy()
    out = [point.tolist()]
    for t in range(len(loop) - 1):
        point = point + lengths[t] * dirs[t]
        out.append(point.tolist())
    return out


def create_app(state_dir: str | None = None,
               config: SolverConfig = DEFAULT_CONFIG) -> FastAPI:
    app = FastAPI(title="polystatics service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
        allow_headers=["*"])

    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()
    storage = Path(state_dir) if state_dir else None
    if storage:
        storage.mkdir(parents=True, exist_ok=True)

    def persist(session: Session) -> None:
        if not storage:
            return
        snapshot = {
            "model": session.state.initial_complex.to_document(),
            "current_lengths": [float(q) for q in
                                session.state.complex.geometry.lengths],
            "fixed_edges": {str(e): float(v) for e, v in
                            session.state.fixed_edges.items()},
            "step_log": session.state.step_log_document()["steps"],
            "version": session.version,
        }
        (storage / f"{session.id}.json").write_text(json.dumps(snapshot))

    def restore_all() -> None:
        if not storage:
            return
        for path in sorted(storage.glob("*.json")):
            try:
                snapshot = json.loads(path.read_text())
                initial = load_complex(snapshot["model"], config)
                current = initial.with_lengths(
                    np.array(snapshot["current_lengths"]), config)
                state = PolySolveState(
                    complex=current, initial_complex=initial,
                    fixed_edges={int(e): float(v) for e, v in
                                 snapshot["fixed_edges"].items()})
                session = Session(id=path.stem, state=state,
                                  dual=_try_dual(initial), config=config,
                                  version=int(snapshot.get("version", 0)))
                sessions[session.id] = session
            except (PolystaticsError, KeyError, ValueError, json.JSONDecodeError):
                continue

    def _try_dual(complex_: PolyhedralComplex) -> DualDiagram | None:
        try:
            return build_dual(complex_, config)
        except (DegenerateDualError, PolystaticsError):
            return None

    def get_session(session_id: str) -> Session:
        session = sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404,
                                detail=f"unknown session {session_id}")
        return session

    def parse_fixed(raw: dict[str, float],
                    complex_: PolyhedralComplex) -> dict[int, float]:
        fixed = {}
        for key, value in raw.items():
            try:
                edge = int(key)
            except ValueError:
                raise HTTPException(status_code=400,
                                    detail=f"bad edge index {key!r}")
            if not 0 <= edge < complex_.num_edges:
                raise HTTPException(status_code=400,
                                    detail=f"edge {edge} does not exist")
            fixed[edge] = float(value)
        return fixed

    def preview_token(session: Session, face: int, fixed: dict[int, float],
                      target: float) -> str:
        blob = json.dumps([session.version, face, sorted(fixed.items()), target])
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def session_payload(session: Session) -> dict:
        state = session.state
        members = None
        if session.dual is not None:
            members = update_member_forces(
                state.complex, session.dual, session.config).members_document()
        return {
            "id": session.id,
            "version": session.version,
            "primal": state.complex.to_document(),
            "edge_lengths": [float(q) for q in state.complex.geometry.lengths],
            "fixed_edges": {str(e): float(v)
                            for e, v in sorted(state.fixed_edges.items())},
            "step_log": state.step_log_document()["steps"],
            "dual": session.dual.to_document() if session.dual else None,
            "member_forces": members["members"] if members else [],
        }

    @app.post("/sessions")
    def create_session(document: dict):
        try:
            complex_ = load_complex(document, config)
        except PolystaticsError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        session = Session(
            id=uuid.uuid4().hex[:12],
            state=PolySolveState(complex=complex_, initial_complex=complex_),
            dual=_try_dual(complex_),
            config=config)
        with registry_lock:
            sessions[session.id] = session
        persist(session)
        return {"id": session.id}

    @app.get("/sessions/{session_id}")
    def get_state(session_id: str):
        session = get_session(session_id)
        with session.lock:
            return session_payload(session)

    def merged_face_fixed(session: Session, face: int,
                          requested: dict[int, float]) -> dict[int, float]:
        """Session constraints plus the request, restricted to the face.

        Off-face fixed edges stay global constraints: they bind during the
        whole-polyhedron update, not in the per-face system.
        """
        complex_ = session.state.complex
        face_edges = complex_.faces[face].edge_indices
        merged = dict(session.state.fixed_edges)
        merged.update(requested)
        return {e: v for e, v in merged.items() if e in face_edges}

    @app.post("/sessions/{session_id}/faces/{face}/analyze")
    def analyze(session_id: str, face: int, body: AnalyzeBody):
        session = get_session(session_id)
        with session.lock:
            complex_ = session.state.complex
            if not 0 <= face < complex_.num_faces:
                raise HTTPException(status_code=404,
                                    detail=f"face {face} does not exist")
            requested = parse_fixed(body.fixed_edges, complex_)
            fixed = merged_face_fixed(session, face, requested)
            try:
                _, _, classification = analyze_constraints(
                    complex_, face, fixed, session.config)
            except ValueError as exc:
                raise HTTPException(status_code=400, detail=str(exc))
            return _classification_payload(classification)

    @app.post("/sessions/{session_id}/faces/{face}/preview")
    def preview(session_id: str, face: int, body: PreviewBody):
        session = get_session(session_id)
        with session.lock:
            complex_ = session.state.complex
            if not 0 <= face < complex_.num_faces:
                raise HTTPException(status_code=404,
                                    detail=f"face {face} does not exist")
            requested = parse_fixed(body.fixed_edges, complex_)
            fixed = merged_face_fixed(session, face, requested)
            try:
                result = solve_face(complex_, face, fixed, body.target_area,
                                    session.config)
            except InconsistentConstraintsError as exc:
                return _constraint_error("cgdof", exc)
            except NoSolutionForArea as exc:
                return _constraint_error("no_solution", exc)
            except ValueError as exc:
                raise HTTPException(status_code=400, detail=str(exc))

            previews = []
            for root in result.roots:
                lengths = result.quadratic.lengths_at(root)
                previews.append({
                    "root": float(root),
                    "lengths": {int(e): float(q) for e, q in
                                zip(result.classification.edges, lengths)},
                    "face_vertices": _ghost_vertices(complex_, face, lengths),
                })
            return {
                "classification": _classification_payload(result.classification),
                "coefficients": {"a": result.quadratic.a,
                                 "b": result.quadratic.b,
                                 "c": result.quadratic.c},
                "roots": [float(r) for r in result.roots],
                "previews": previews,
                "preview_id": preview_token(session, face, fixed,
                                            body.target_area),
            }

    @app.post("/sessions/{session_id}/faces/{face}/commit")
    def commit(session_id: str, face: int, body: CommitBody):
        session = get_session(session_id)
        with session.lock:
            state = session.state
            complex_ = state.complex
            if not 0 <= face < complex_.num_faces:
                raise HTTPException(status_code=404,
                                    detail=f"face {face} does not exist")
            requested = parse_fixed(body.fixed_edges, complex_)
            fixed = merged_face_fixed(session, face, requested)
            if body.preview_id is not None:
                expected = preview_token(session, face, fixed, body.target_area)
                if body.preview_id != expected:
                    raise HTTPException(
                        status_code=409,
                        detail="preview is stale; request a fresh preview")
            if body.root not in ("near", "low", "high"):
                raise HTTPException(status_code=400,
                                    detail=f"unknown root choice {body.root!r}")

            snapshot = state.copy()
            try:
                result = solve_face(complex_, face, fixed, body.target_area,
                                    session.config, root_policy=body.root)
                new_fixed = dict(state.fixed_edges)
                new_fixed.update(requested)
                new_fixed.update(result.updated_global())
                lengths, residual = update_polyhedron(
                    complex_, new_fixed, session.config,
                    recent_edges=result.updated_global())
                new_complex = complex_.with_lengths(lengths, session.config)
            except InconsistentConstraintsError as exc:
                return _constraint_error("cgdof", exc)
            except NoSolutionForArea as exc:
                return _constraint_error("no_solution", exc)
            except OverConstrainedError as exc:
                return _constraint_error("over_constrained", exc)
            except ValueError as exc:
                raise HTTPException(status_code=400, detail=str(exc))

            state.complex = new_complex
            state.fixed_edges = new_fixed
            state.step_log.append(StepRecord(
                face_index=face, target_area=body.target_area,
                roots=result.roots, chosen_root=result.chosen_root,
                pre_lengths=snapshot.complex.geometry.lengths.copy(),
                post_lengths=lengths.copy(), residual=residual,
                achieved_area=result.achieved_area))
            session.undo_stack.append(snapshot)
            del session.undo_stack[:-UNDO_DEPTH]
            session.version += 1
            persist(session)
            return session_payload(session)

    @app.post("/sessions/{session_id}/undo")
    def undo(session_id: str):
        session = get_session(session_id)
        with session.lock:
            if not session.undo_stack:
                raise HTTPException(status_code=409, detail="nothing to undo")
            session.state = session.undo_stack.pop()
            session.version += 1
            persist(session)
            return session_payload(session)

    @app.get("/sessions/{session_id}/dual")
    def get_dual(session_id: str):
        session = get_session(session_id)
        with session.lock:
            if session.dual is None:
                return _constraint_error(
                    "degenerate_dual",
                    DegenerateDualError("no dual diagram for this model"))
            dual = update_member_forces(session.state.complex, session.dual,
                                        session.config)
            return dual.to_document()

    restore_all()
    return app
