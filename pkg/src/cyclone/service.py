"""Local HTTP/JSON service for live human-vs-agent games.

One session holds one game between a human seat and an agent preset. The
human is only ever sent their own cards' knowledge (never identities);
the agent's hand is face-up per Hanabi visibility. The agent replies
synchronously inside the human's action request until it is the human's
turn again or the game ends. With a capture directory set, the game log
and the human's decision records are rewritten after every turn, so a
crash loses nothing.

Schema (version 1): every response carries ``schema: 1``. Actions are
``{"kind": "play"|"discard", "slot": int}`` or
``{"kind": "clue_color"|"clue_rank", "value": "R"|rank}``; the clue
target is always the other seat.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .cards import COLOR_CHARS, NUM_COLORS, NUM_RANKS
from .decision import PRESET_NAMES, WeightVector, choose_action, load_preset
from .engine import (
    ActionKind,
    ActionSpec,
    GameState,
    ResolvedEvent,
    apply_action,
    illegality_reason,
    legal_actions,
    new_game,
)
from .errors import ConfigurationError
from .harness import DecisionDatabase, DecisionRecord
from .knowledge import CardKnowledge, observe
from .rng import derive_seed

SCHEMA_VERSION = 1
HUMAN_TAG = "human:web"


class CreateSessionRequest(BaseModel):
    preset: str = "human-like"
    seed: int | None = None
    human_seat: int = 0
    capture: bool = True


class ActionRequest(BaseModel):
    action: dict


@dataclass
class Session:
    session_id: str
    preset_name: str
    weights: WeightVector
    human_seat: int
    capture: bool
    state: GameState
    lock: threading.Lock = field(default_factory=threading.Lock)

    @property
    def agent_seat(self) -> int:
        return 1 - self.human_seat

    def decision_records(self) -> list[DecisionRecord]:
        if not self.capture:
            return []
        records = []
        for event in self.state.history:
            if event.actor == self.human_seat:
                records.append(
                    DecisionRecord(
                        game_id=self.session_id,
                        turn=event.turn,
                        actor=event.actor,
                        actor_tag=HUMAN_TAG,
                        action=event.action,
                    )
                )
        return records

    def database(self) -> DecisionDatabase:
        db = DecisionDatabase()
        db.add_game(self.session_id, self.state.to_log())
        db.add_records(self.decision_records())
        return db


def _action_from_dto(dto: dict, human_seat: int) -> ActionSpec:
    try:
        kind = ActionKind(dto["kind"])
        if kind in (ActionKind.PLAY, ActionKind.DISCARD):
            return ActionSpec(kind, slot=int(dto["slot"]))
        value = dto["value"]
        if kind is ActionKind.CLUE_COLOR:
            value = COLOR_CHARS.index(value) if isinstance(value, str) else int(value)
        else:
            value = int(value)
        return ActionSpec(kind, value=value, target=1 - human_seat)
    except (KeyError, ValueError, TypeError) as exc:
        raise HTTPException(status_code=400, detail=f"malformed action: {exc}") from exc


def _action_dto(action: ActionSpec) -> dict:
    dto: dict = {"kind": action.kind.value}
    if action.slot is not None:
        dto["slot"] = action.slot
    if action.kind is ActionKind.CLUE_COLOR:
        dto["value"] = COLOR_CHARS[action.value]
        dto["target"] = action.target
    elif action.kind is ActionKind.CLUE_RANK:
        dto["value"] = action.value
        dto["target"] = action.target
    return dto


def _knowledge_dto(k: CardKnowledge) -> dict:
    possible_colors = [COLOR_CHARS[c] for c in range(NUM_COLORS) if k.mask & (0b11111 << (5 * c))]
    possible_ranks = [
        r
        for r in range(1, NUM_RANKS + 1)
        if any(k.mask >> (5 * c + r - 1) & 1 for c in range(NUM_COLORS))
    ]
    return {
        "possible_colors": possible_colors,
        "possible_ranks": possible_ranks,
        "known_color": COLOR_CHARS[k.known_color] if k.known_color is not None else None,
        "known_rank": k.known_rank,
        "singled_out": k.singled_out,
    }


def _event_dto(event: ResolvedEvent) -> dict:
    # Events come from the human's view, so their own draws are already
    # redacted (drawn is None).
    dto: dict = {"turn": event.turn, "actor": event.actor, "action": _action_dto(event.action)}
    if event.card is not None:
        dto["card"] = str(event.card)
        dto["success"] = event.success
    if event.touched is not None:
        dto["touched"] = list(event.touched)
    dto["drawn"] = str(event.drawn) if event.drawn is not None else None
    return dto


def _view_payload(session: Session) -> dict:
    state = session.state
    view = observe(state, session.human_seat)
    if state.is_terminal:
        status = "over"
    elif state.current_player == session.human_seat:
        status = "human_turn"
    else:
        status = "agent_turn"
    legal = (
        [_action_dto(a) for a in legal_actions(state)]
        if status == "human_turn"
        else []
    )
    return {
        "schema": SCHEMA_VERSION,
        "seat": session.human_seat,
        "preset": session.preset_name,
        "status": status,
        "current_player": state.current_player,
        "score": state.score,
        "final_score": state.final_score if state.is_terminal else None,
        "info_tokens": view.info_tokens,
        "strikes": view.strikes,
        "deck_size": view.deck_size,
        "fireworks": {COLOR_CHARS[c]: view.fireworks[c] for c in range(NUM_COLORS)},
        "discards": [str(card) for card in view.discards],
        "own_hand": [_knowledge_dto(k) for k in view.own],
        "agent_hand": [
            {"card": str(card), "knowledge": _knowledge_dto(k)}
            for card, k in zip(view.teammate_cards, view.teammate_knowledge)
        ],
        "legal_actions": legal,
        "moves": [_event_dto(ev) for ev in view.history],
    }


def create_app(capture_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="cyclone-hanabi service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    sessions: dict[str, Session] = {}
    capture_path = Path(capture_dir) if capture_dir is not None else None
    if capture_path is not None:
        capture_path.mkdir(parents=True, exist_ok=True)

    def get_session(session_id: str) -> Session:
        session = sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id}")
        return session

    def write_through(session: Session) -> None:
        if capture_path is None:
            return
        (capture_path / f"{session.session_id}.log").write_text(session.state.to_log().to_text())
        if session.capture:
            (capture_path / f"{session.session_id}.decisions").write_text(
                session.database().to_text()
            )

    def agent_replies(session: Session) -> None:
        while not session.state.is_terminal and session.state.current_player == session.agent_seat:
            view = observe(session.state, session.agent_seat)
            action = choose_action(view, session.weights)
            session.state, _ = apply_action(session.state, action)

    @app.get("/health")
    def health() -> dict:
        return {"schema": SCHEMA_VERSION, "ok": True, "presets": list(PRESET_NAMES)}

    @app.post("/sessions")
    def create_session(req: CreateSessionRequest) -> dict:
        try:
            weights = load_preset(req.preset)
        except ConfigurationError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        if req.human_seat not in (0, 1):
            raise HTTPException(status_code=400, detail="human_seat must be 0 or 1")
        session_id = uuid.uuid4().hex[:12]
        seed = req.seed if req.seed is not None else derive_seed(uuid.uuid4().int & (2**63 - 1), 0)
        session = Session(
            session_id=session_id,
            preset_name=req.preset,
            weights=weights,
            human_seat=req.human_seat,
            capture=req.capture,
            state=new_game(seed),
        )
        with session.lock:
            agent_replies(session)  # agent may move first
            sessions[session_id] = session
            write_through(session)
            return {"session_id": session_id, "seed": seed, **_view_payload(session)}

    @app.get("/sessions/{session_id}")
    def get_view(session_id: str) -> dict:
        session = get_session(session_id)
        with session.lock:
            return _view_payload(session)

    @app.post("/sessions/{session_id}/actions")
    def submit_action(session_id: str, req: ActionRequest) -> dict:
        session = get_session(session_id)
        with session.lock:
            if session.state.is_terminal:
                raise HTTPException(status_code=409, detail="game is over")
            if session.state.current_player != session.human_seat:
                raise HTTPException(status_code=409, detail="not the human's turn")
            action = _action_from_dto(req.action, session.human_seat)
            reason = illegality_reason(session.state, action)
            if reason is not None:
                raise HTTPException(status_code=409, detail=f"illegal action: {reason}")
            session.state, _ = apply_action(session.state, action)
            agent_replies(session)
            write_through(session)
            return _view_payload(session)

    @app.post("/sessions/{session_id}/end")
    def end_session(session_id: str) -> dict:
        session = get_session(session_id)
        with session.lock:
            payload = {
                "schema": SCHEMA_VERSION,
                "session_id": session_id,
                "score": session.state.final_score if session.state.is_terminal else session.state.score,
                "terminal": session.state.is_terminal,
                "log_text": session.state.to_log().to_text(),
                "decisions_text": session.database().to_text() if session.capture else None,
            }
            write_through(session)
            del sessions[session_id]
            return payload

    return app
