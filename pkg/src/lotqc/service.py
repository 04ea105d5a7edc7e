"""Event-sourced HTTP service for live sequential inspection sessions.

State model: a session is an append-only JSONL event log (one file per
session); the in-memory state is always a deterministic replay of that log.
Every mutation appends its event to disk before the response is built, so a
crash followed by a restart reconstructs identical state. Mutations on one
session are serialized by a per-session lock; sessions are independent.

Events:
  {"type": "created", "plan": {...}, "schema_version": 1}
  {"type": "outcome", "seq": k, "is_defect": b, "recorded_at": ts,
   "idempotency_key": str|None, "schema_version": 1}
  {"type": "amendment", "seq": k, "corrected_is_defect": b, "recorded_at": ts,
   "reopen": b, "schema_version": 1}
"""

from __future__ import annotations

import json
import os
import threading
import time
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .design import design_sequential
from .models import ConfigError, PopulationModel, QualityConfig, PRESETS
from .plans import SCHEMA_VERSION, decide, plan_from_dict

DEFAULT_STORAGE_ENV = "LOTQC_STORAGE_DIR"


# --- session state ------------------------------------------------------------


@dataclass
class SessionState:
    session_id: str
    plan: object
    outcomes: list = field(default_factory=list)  # effective per-item flags
    events: list = field(default_factory=list)
    verdict: str = "continue"
    verdict_at: int | None = None  # items inspected when the verdict fired
    idempotency: dict = field(default_factory=dict)  # key -> seq
    locked_verdict: str | None = None
    _defect_count: int = 0

    @property
    def inspected(self) -> int:
        return len(self.outcomes)

    @property
    def defects(self) -> int:
        return self._defect_count

    def _bounds(self):
        return self.plan.decision_bounds()

    def _step_verdict(self):
        """O(1) verdict check after appending one outcome."""
        a, r, n_t = self._bounds()
        m, d = len(self.outcomes), self._defect_count
        if m > n_t:
            return
        if d >= r[m]:
            self.verdict, self.verdict_at = "reject", m
        elif d <= a[m]:
            self.verdict, self.verdict_at = "accept", m
        if self.verdict != "continue":
            self.locked_verdict = self.verdict

    def recompute(self):
        """Re-derive the verdict by replaying the effective outcome sequence."""
        verdict, at, _ = decide(self.plan, self.outcomes)
        if self.locked_verdict is not None and verdict == "continue":
            # conservative audit semantics: a finished verdict stays final
            # unless an amendment explicitly re-opened the session
            self.verdict = self.locked_verdict
            return
        self.verdict = verdict
        self.verdict_at = at if verdict != "continue" else None
        self.locked_verdict = verdict if verdict != "continue" else None

    def apply(self, event: dict):
        etype = event["type"]
        if etype == "created":
            return
        if etype == "outcome":
            flag = bool(event["is_defect"])
            self.outcomes.append(flag)
            self._defect_count += flag
            key = event.get("idempotency_key")
            if key:
                self.idempotency[key] = event["seq"]
            if self.locked_verdict is None:
                self._step_verdict()
        elif etype == "amendment":
            idx = event["seq"] - 1
            if not 0 <= idx < len(self.outcomes):
                raise ConfigError(f"amendment references unknown item {event['seq']}")
            old = self.outcomes[idx]
            new = bool(event["corrected_is_defect"])
            self.outcomes[idx] = new
            self._defect_count += int(new) - int(old)
            if event.get("reopen"):
                self.locked_verdict = None
            self.recompute()
        else:
            raise ConfigError(f"unknown event type {etype!r}")
        self.events.append(event)

    def public_state(self, include_boundaries=False, include_events=False) -> dict:
        doc = {
            "session_id": self.session_id,
            "inspected": self.inspected,
            "defects": self.defects,
            "verdict": self.verdict,
            "verdict_at": self.verdict_at,
            "max_items": self.plan.max_items,
            "plan": self.plan.to_dict(),
        }
        a, r, n_t = self.plan.decision_bounds()
        m = self.inspected
        if self.verdict == "continue" and m < n_t:
            doc["next_boundaries"] = {
                "m": m + 1,
                "accept_max_d": a[m + 1],
                "reject_min_d": min(r[m + 1], m + 2),
            }
        if include_boundaries:
            doc["boundaries"] = [
                {"m": mm, "accept_max_d": a[mm], "reject_min_d": min(r[mm], mm + 1)}
                for mm in range(1, n_t + 1)
            ]
        if include_events:
            doc["events"] = list(self.events)
        return doc


# --- persistent store -----------------------------------------------------------


class SessionStore:
    """All live sessions plus their append-only logs under storage_dir.

    durable=False skips the per-event fsync (writes are still flushed); meant
    for tests and bulk replay, never for live inspection.
    """

    def __init__(self, storage_dir: str, durable: bool = True):
        self.storage_dir = storage_dir
        self.durable = durable
        os.makedirs(storage_dir, exist_ok=True)
        self._sessions: dict[str, SessionState] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()
        self._recover()

    # -- persistence

    def _path(self, session_id: str) -> str:
        return os.path.join(self.storage_dir, f"{session_id}.jsonl")

    def _append(self, session_id: str, event: dict):
        line = json.dumps(event, sort_keys=True)
        with open(self._path(session_id), "a", encoding="utf-8") as fh:
            fh.write(line + "\n")
            fh.flush()
            if self.durable:
                os.fsync(fh.fileno())

    def _recover(self):
        for fname in sorted(os.listdir(self.storage_dir)):
            if not fname.endswith(".jsonl"):
                continue
            session_id = fname[: -len(".jsonl")]
            state = None
            with open(self._path(session_id), encoding="utf-8") as fh:
                for line in fh:
                    if not line.strip():
                        continue
                    event = json.loads(line)
                    if event["type"] == "created":
                        plan = plan_from_dict(event["plan"])
                        state = SessionState(session_id=session_id, plan=plan)
                        state.events.append(event)
                    else:
                        state.apply(event)
            if state is not None:
                self._sessions[session_id] = state
                self._locks[session_id] = threading.Lock()

    # -- access

    def lock(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            if session_id not in self._locks:
                raise KeyError(session_id)
            return self._locks[session_id]

    def get(self, session_id: str) -> SessionState:
        try:
            return self._sessions[session_id]
        except KeyError:
            raise KeyError(session_id) from None

    def list_ids(self):
        return sorted(self._sessions)

    # -- mutations (each persists before mutating memory)

    def create(self, plan) -> SessionState:
        session_id = uuid.uuid4().hex
        state = SessionState(session_id=session_id, plan=plan)
        event = {
            "type": "created",
            "plan": plan.to_dict(),
            "recorded_at": time.time(),
            "schema_version": SCHEMA_VERSION,
        }
        with self._registry_lock:
            self._append(session_id, event)
            state.events.append(event)
            self._sessions[session_id] = state
            self._locks[session_id] = threading.Lock()
        return state

    def record_outcome(self, session_id: str, is_defect: bool, idempotency_key=None,
                       expected_seq=None) -> tuple:
        """Returns (state, replayed) where replayed means an idempotent retry."""
        state = self.get(session_id)
        with self.lock(session_id):
            if idempotency_key and idempotency_key in state.idempotency:
                return state, True
            if state.verdict != "continue":
                raise SessionFinished(state.verdict)
            seq = state.inspected + 1
            if expected_seq is not None and expected_seq != seq:
                raise SequenceConflict(expected_seq, seq)
            event = {
                "type": "outcome",
                "seq": seq,
                "is_defect": bool(is_defect),
                "recorded_at": time.time(),
                "idempotency_key": idempotency_key,
                "schema_version": SCHEMA_VERSION,
            }
            self._append(session_id, event)
            state.apply(event)
            return state, False

    def amend(self, session_id: str, seq: int, corrected_is_defect: bool,
              reopen: bool = False) -> tuple:
        """Returns (state, reopened)."""
        state = self.get(session_id)
        with self.lock(session_id):
            if not 1 <= seq <= state.inspected:
                raise ConfigError(f"no recorded item {seq}")
            was_finished = state.verdict != "continue"
            event = {
                "type": "amendment",
                "seq": seq,
                "corrected_is_defect": bool(corrected_is_defect),
                "recorded_at": time.time(),
                "reopen": bool(reopen),
                "schema_version": SCHEMA_VERSION,
            }
            self._append(session_id, event)
            state.apply(event)
            reopened = was_finished and state.verdict == "continue"
            return state, reopened


class SessionFinished(RuntimeError):
    def __init__(self, verdict):
        super().__init__(f"session already finished: {verdict}")
        self.verdict = verdict


class SequenceConflict(RuntimeError):
    def __init__(self, expected, actual):
        super().__init__(f"sequence conflict: client expected {expected}, next is {actual}")
        self.expected = expected
        self.actual = actual


# --- HTTP layer -----------------------------------------------------------------


class CreateSessionBody(BaseModel):
    plan: dict | None = None
    preset: str | None = None
    lot_size: int | None = None
    acceptable_rate: float | None = None
    rejectable_rate: float | None = None
    producer_risk: float | None = None
    consumer_risk: float | None = None
    curtailment: str = "none"


class OutcomeBody(BaseModel):
    is_defect: bool
    idempotency_key: str | None = None
    expected_seq: int | None = None


class AmendmentBody(BaseModel):
    sequence_number: int
    corrected_is_defect: bool
    reopen: bool = False


def _plan_from_request(body: CreateSessionBody):
    if body.plan is not None:
        return plan_from_dict(body.plan)
    base = PRESETS.get(body.preset) if body.preset else None
    fields = {
        "acceptable_rate": body.acceptable_rate,
        "rejectable_rate": body.rejectable_rate,
        "producer_risk": body.producer_risk,
        "consumer_risk": body.consumer_risk,
    }
    if base is not None:
        merged = {**base.to_dict(), **{k: v for k, v in fields.items() if v is not None}}
        merged.pop("ci_half_width", None)
        config = QualityConfig(**merged)
    else:
        missing = [k for k, v in fields.items() if v is None]
        if missing:
            raise ConfigError(f"missing quality fields: {missing} (or pass preset/plan)")
        config = QualityConfig(**fields)
    if body.lot_size is None:
        raise ConfigError("lot_size is required when no plan document is given")
    model = PopulationModel.without_replacement(body.lot_size)
    return design_sequential(config, model, curtailment=body.curtailment)


def create_app(storage_dir: str | None = None) -> FastAPI:
    storage_dir = storage_dir or os.environ.get(DEFAULT_STORAGE_ENV) or "./lotqc-sessions"
    app = FastAPI(title="lotqc inspection service")
    # the browser console may be served from a different origin than the API
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.store = SessionStore(storage_dir)

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody):
        try:
            plan = _plan_from_request(body)
        except (ConfigError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        state = app.state.store.create(plan)
        return state.public_state(include_boundaries=True)

    @app.get("/sessions")
    def list_sessions():
        store = app.state.store
        return {
            "sessions": [
                store.get(sid).public_state() for sid in store.list_ids()
            ]
        }

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        try:
            state = app.state.store.get(session_id)
        except KeyError:
            raise HTTPException(status_code=404, detail="unknown session")
        return state.public_state(include_boundaries=True, include_events=True)

    @app.post("/sessions/{session_id}/outcomes")
    def record_outcome(session_id: str, body: OutcomeBody):
        store = app.state.store
        try:
            state, replayed = store.record_outcome(
                session_id, body.is_defect, body.idempotency_key, body.expected_seq
            )
        except KeyError:
            raise HTTPException(status_code=404, detail="unknown session")
        except SessionFinished as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except SequenceConflict as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        doc = state.public_state()
        doc["replayed"] = replayed
        return doc

    @app.post("/sessions/{session_id}/amendments")
    def amend(session_id: str, body: AmendmentBody):
        store = app.state.store
        try:
            state, reopened = store.amend(
                session_id, body.sequence_number, body.corrected_is_defect, body.reopen
            )
        except KeyError:
            raise HTTPException(status_code=404, detail="unknown session")
        except ConfigError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        doc = state.public_state()
        doc["reopened"] = reopened
        return doc

    return app


def serve(
    storage_dir: str | None,
    host: str = "127.0.0.1",
    port: int = 8787,
    initial_plan=None,
):
    import uvicorn

    app = create_app(storage_dir)
    if initial_plan is not None:
        state = app.state.store.create(initial_plan)
        print(f"created session {state.session_id} from the given plan")
    uvicorn.run(app, host=host, port=port, log_level="info")
