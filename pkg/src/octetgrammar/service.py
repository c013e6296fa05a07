"""HTTP session service for interactive, step-by-step derivation.

Sessions are in-memory; the durable artifact is the derivation script,
which fully reconstructs the state.  Match lists carry the fingerprint
of the state they were computed against, and apply rejects requests
whose fingerprint no longer matches (optimistic concurrency, HTTP 409).
"""

from __future__ import annotations

import threading
import uuid

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel

from . import grammar, pipeline
from .assembly import Assembly, fingerprint
from .errors import CollisionDetected, OctetError, StaleMatch, UnknownRule
from .scene import emit_obj, emit_scene, scene_from_assembly


class _Session:
    def __init__(self, sid: str, initial: str, assembly: Assembly):
        self.id = sid
        self.initial = initial
        self.assembly = assembly
        self.undo_stack: list[Assembly] = []
        self.lock = threading.Lock()


class CreateSession(BaseModel):
    initial: str


class ApplyRequest(BaseModel):
    rule: str
    index: int
    state: str


def _cell_doc(cell, tags):
    return {
        "species": cell.species.value,
        "vertices": [[float(c) for c in v] for v in cell.vertices],
        "tags": sorted(tags),
    }


def _state_doc(session: _Session) -> dict:
    assembly = session.assembly
    script = assembly.provenance
    return {
        "fingerprint": fingerprint(assembly).decode(),
        "cells": [
            _cell_doc(cell, assembly.tag_for(i))
            for i, cell in enumerate(assembly.cells)
        ],
        "script": (
            None
            if not isinstance(script, grammar.DerivationScript)
            else {
                "initial": script.initial,
                "steps": [
                    {
                        "rule": s.rule,
                        "host": s.host,
                        "feature": s.feature,
                        "variant": s.variant,
                    }
                    for s in script.steps
                ],
            }
        ),
    }


def _match_doc(match) -> dict:
    return {
        "rule": match.rule_id,
        "host": match.host,
        "feature": match.feature,
        "variant": match.variant,
        "transform": {
            "linear": [[float(x) for x in row] for row in match.isometry.linear],
            "translation": [float(x) for x in match.isometry.translation],
        },
        "cell": _cell_doc(match.cell, frozenset()),
    }


def create_app() -> FastAPI:
    app = FastAPI(title="octetgrammar sessions")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    sessions: dict[str, _Session] = {}
    registry_lock = threading.Lock()

    def _get(sid: str) -> _Session:
        session = sessions.get(sid)
        if session is None:
            raise HTTPException(404, f"no session {sid}")
        return session

    @app.post("/sessions")
    def create_session(body: CreateSession):
        try:
            assembly = pipeline.initial_assembly(body.initial)
        except (UnknownRule, OctetError) as exc:
            raise HTTPException(400, str(exc)) from exc
        sid = uuid.uuid4().hex[:12]
        session = _Session(sid, body.initial, assembly)
        with registry_lock:
            sessions[sid] = session
        return {"id": sid, "state": _state_doc(session)}

    @app.get("/sessions/{sid}/matches")
    def list_matches(sid: str, rule: str):
        session = _get(sid)
        with session.lock:
            try:
                matches = grammar.find_matches(session.assembly, rule)
            except UnknownRule as exc:
                raise HTTPException(400, str(exc)) from exc
            return {
                "state": fingerprint(session.assembly).decode(),
                "matches": [_match_doc(m) for m in matches],
            }

    @app.post("/sessions/{sid}/apply")
    def apply_match(sid: str, body: ApplyRequest):
        session = _get(sid)
        with session.lock:
            current = fingerprint(session.assembly).decode()
            if body.state != current:
                raise HTTPException(409, "session changed since match list")
            try:
                matches = grammar.find_matches(session.assembly, body.rule)
            except UnknownRule as exc:
                raise HTTPException(400, str(exc)) from exc
            if not (0 <= body.index < len(matches)):
                raise HTTPException(400, f"match index {body.index} out of range")
            try:
                new_assembly = grammar.apply(session.assembly, matches[body.index])
            except (StaleMatch, CollisionDetected) as exc:
                raise HTTPException(409, str(exc)) from exc
            session.undo_stack.append(session.assembly)
            session.assembly = new_assembly
            return {"state": _state_doc(session)}

    @app.post("/sessions/{sid}/undo")
    def undo(sid: str):
        session = _get(sid)
        with session.lock:
            if not session.undo_stack:
                raise HTTPException(400, "nothing to undo")
            session.assembly = session.undo_stack.pop()
            return {"state": _state_doc(session)}

    @app.get("/sessions/{sid}/scene")
    def scene(sid: str, units: str = "lattice"):
        session = _get(sid)
        if units not in ("lattice", "feet"):
            raise HTTPException(400, f"unknown units {units!r}")
        with session.lock:
            try:
                doc = scene_from_assembly(session.assembly, units=units)
            except OctetError as exc:
                raise HTTPException(400, str(exc)) from exc
            import json

            return json.loads(emit_scene(doc))

    @app.get("/sessions/{sid}/obj")
    def obj(sid: str, mode: str = "frame", units: str = "lattice"):
        session = _get(sid)
        if mode not in ("frame", "cells"):
            raise HTTPException(400, f"unknown mode {mode!r}")
        if units not in ("lattice", "feet"):
            raise HTTPException(400, f"unknown units {units!r}")
        with session.lock:
            try:
                doc = scene_from_assembly(session.assembly, units=units)
                text = emit_obj(doc, mode=mode)
            except OctetError as exc:
                raise HTTPException(400, str(exc)) from exc
            return PlainTextResponse(text)

    return app
