"""Batch simulation, cross-play statistics, and behavioral-clone scoring.

Everything here is deterministic in a single base seed: game ``i`` of a
batch plays from ``derive_seed(seed_base, i)``, and seats alternate
between games so neither style pockets the first-move advantage. The
decision database stores (game log, turn index) references rather than
serialized views, so a stored view can never drift from its log.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .cards import MAX_SCORE
from .decision import WeightVector, choose_action
from .engine import (
    ActionSpec,
    GameLog,
    GameState,
    RulesConfig,
    apply_action,
    illegality_reason,
    new_game,
    replay,
)
from .errors import FormatError, ValidationError
from .knowledge import PlayerView, observe
from .rng import SplitMix64, derive_seed

DB_FORMAT_VERSION = 1


def play_game(
    seed: int,
    w_first: WeightVector,
    w_second: WeightVector,
    config: RulesConfig | None = None,
) -> GameState:
    """One full game; seat 0 uses ``w_first``."""
    weights = (w_first, w_second)
    state = new_game(seed, config)
    while not state.is_terminal:
        actor = state.current_player
        action = choose_action(observe(state, actor), weights[actor])
        state, _ = apply_action(state, action)
    return state


def bootstrap_ci95(scores: list[int], resamples: int = 2000, seed: int = 0) -> float:
    """Percentile-bootstrap half-width for the mean.

    Alternative to the normal approximation for small or skewed batches;
    deterministic in ``seed``.
    """
    rng = SplitMix64(seed)
    n = len(scores)
    means = sorted(
        math.fsum(scores[rng.next_below(n)] for _ in range(n)) / n for _ in range(resamples)
    )
    lo = means[round(0.025 * (resamples - 1))]
    hi = means[round(0.975 * (resamples - 1))]
    return (hi - lo) / 2


@dataclass(frozen=True)
class MatchStats:
    """Score statistics for one pairing.

    ``ci95`` is the normal-approximation half-width by default; build with
    ``ci_method="bootstrap"`` for the percentile bootstrap instead.
    """

    label_a: str
    label_b: str
    n: int
    mean: float
    sd: float
    ci95: float
    histogram: tuple[int, ...]  # counts for scores 0..25

    @classmethod
    def from_scores(
        cls, label_a: str, label_b: str, scores: list[int], ci_method: str = "normal"
    ) -> MatchStats:
        n = len(scores)
        mean = math.fsum(scores) / n
        sd = math.sqrt(math.fsum((s - mean) ** 2 for s in scores) / (n - 1)) if n > 1 else 0.0
        if ci_method == "normal":
            ci95 = 1.96 * sd / math.sqrt(n)
        elif ci_method == "bootstrap":
            ci95 = bootstrap_ci95(scores)
        else:
            raise ValidationError(f"unknown ci method {ci_method!r}")
        histogram = [0] * (MAX_SCORE + 1)
        for s in scores:
            histogram[s] += 1
        return cls(
            label_a=label_a,
            label_b=label_b,
            n=n,
            mean=mean,
            sd=sd,
            ci95=ci95,
            histogram=tuple(histogram),
        )

    def to_record(self) -> dict:
        return {
            "pair": [self.label_a, self.label_b],
            "n": self.n,
            "mean": self.mean,
            "sd": self.sd,
            "ci95": self.ci95,
            "histogram": list(self.histogram),
        }

    def summary(self) -> str:
        return f"{self.label_a} + {self.label_b}: mean {self.mean:.2f} ± {self.ci95:.2f} (n={self.n})"


def _score_range(
    w_a: WeightVector,
    w_b: WeightVector,
    seed_base: int,
    indices: range,
    config: RulesConfig | None,
    collect_logs: bool,
) -> list[tuple[int, int, str | None]]:
    out = []
    for i in indices:
        first, second = (w_a, w_b) if i % 2 == 0 else (w_b, w_a)
        state = play_game(derive_seed(seed_base, i), first, second, config)
        out.append((i, state.final_score, state.to_log().to_text() if collect_logs else None))
    return out


def simulate_games(
    w_a: WeightVector,
    w_b: WeightVector,
    n: int,
    seed_base: int,
    *,
    config: RulesConfig | None = None,
    label_a: str = "A",
    label_b: str = "B",
    collect_logs: bool = False,
    jobs: int = 1,
    ci_method: str = "normal",
) -> tuple[MatchStats, list[GameLog]]:
    """Play ``n`` independent games of ``w_a`` with ``w_b``.

    Deterministic in ``seed_base`` regardless of ``jobs``; game ``i`` seats
    ``w_a`` first when ``i`` is even.
    """
    if n < 1:
        raise ValidationError("n must be >= 1")
    if jobs > 1 and n > 1:
        chunks = [range(k, n, jobs) for k in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = pool.map(
                _score_range,
                [w_a] * jobs,
                [w_b] * jobs,
                [seed_base] * jobs,
                chunks,
                [config] * jobs,
                [collect_logs] * jobs,
            )
            results = sorted(row for part in parts for row in part)
    else:
        results = _score_range(w_a, w_b, seed_base, range(n), config, collect_logs)
    scores = [score for _, score, _ in results]
    logs = [GameLog.from_text(text) for _, _, text in results if text is not None]
    return MatchStats.from_scores(label_a, label_b, scores, ci_method=ci_method), logs


@dataclass(frozen=True)
class CrossplayMatrix:
    """All unordered pairings of a preset list, diagonal included."""

    names: tuple[str, ...]
    cells: dict[tuple[int, int], MatchStats]

    def cell(self, a: str, b: str) -> MatchStats:
        i, j = sorted((self.names.index(a), self.names.index(b)))
        return self.cells[(i, j)]

    def to_record(self) -> dict:
        return {
            "kind": "crossplay",
            "names": list(self.names),
            "cells": [
                {"i": i, "j": j, **stats.to_record()}
                for (i, j), stats in sorted(self.cells.items())
            ],
        }

    def format_text(self) -> str:
        width = max(len(n) for n in self.names) + 2
        cell_w = 14
        lines = ["mean score ± 95% CI"]
        header = " " * width + "".join(n.rjust(cell_w) for n in self.names)
        lines.append(header)
        for i, name in enumerate(self.names):
            row = name.ljust(width)
            for j in range(len(self.names)):
                stats = self.cells[(min(i, j), max(i, j))]
                row += f"{stats.mean:.1f} ± {stats.ci95:.1f}".rjust(cell_w)
            lines.append(row)
        return "\n".join(lines) + "\n"


def crossplay_matrix(
    named_weights: list[tuple[str, WeightVector]],
    n_per_cell: int,
    seed_base: int,
    *,
    config: RulesConfig | None = None,
    jobs: int = 1,
) -> CrossplayMatrix:
    """Evaluate every unordered pairing; seats pool within each cell."""
    if len(named_weights) < 2:
        raise ValidationError("need at least two presets for a cross-play matrix")
    names = tuple(name for name, _ in named_weights)
    cells = {}
    cell_index = 0
    for i in range(len(named_weights)):
        for j in range(i, len(named_weights)):
            stats, _ = simulate_games(
                named_weights[i][1],
                named_weights[j][1],
                n_per_cell,
                derive_seed(seed_base, cell_index),
                config=config,
                label_a=names[i],
                label_b=names[j],
                jobs=jobs,
            )
            cells[(i, j)] = stats
            cell_index += 1
    return CrossplayMatrix(names=names, cells=cells)


# --- decision capture and the humanness metric ---------------------------


@dataclass(frozen=True)
class DecisionRecord:
    """One (game state, chosen action) pair, referenced by log position."""

    game_id: str
    turn: int
    actor: int
    actor_tag: str
    action: ActionSpec

    def to_record(self) -> dict:
        return {
            "kind": "decision",
            "game": self.game_id,
            "turn": self.turn,
            "actor": self.actor,
            "tag": self.actor_tag,
            "action": self.action.to_record(),
        }

    @classmethod
    def from_record(cls, rec: dict) -> DecisionRecord:
        try:
            return cls(
                game_id=rec["game"],
                turn=rec["turn"],
                actor=rec["actor"],
                actor_tag=rec["tag"],
                action=ActionSpec.from_record(rec["action"]),
            )
        except KeyError as exc:
            raise FormatError(f"bad decision record {rec!r}") from exc


@dataclass
class DecisionDatabase:
    """Decision records plus the game logs they reference."""

    games: dict[str, GameLog] = field(default_factory=dict)
    records: list[DecisionRecord] = field(default_factory=list)

    def add_game(self, game_id: str, log: GameLog) -> None:
        if game_id in self.games and self.games[game_id] != log:
            raise ValidationError(f"conflicting log for game {game_id!r}")
        self.games[game_id] = log

    def add_records(self, records: list[DecisionRecord]) -> None:
        for rec in records:
            if rec.game_id not in self.games:
                raise ValidationError(f"record references unknown game {rec.game_id!r}")
        self.records.extend(records)

    def to_text(self) -> str:
        lines = [json.dumps({"v": DB_FORMAT_VERSION, "kind": "decision-db"}, sort_keys=True, separators=(",", ":"))]
        for game_id in sorted(self.games):
            log = self.games[game_id]
            rec = {
                "kind": "game",
                "id": game_id,
                "seed": log.seed,
                "config": log.config.to_record(),
                "deck": "".join(str(c) for c in log.deck) if log.deck is not None else None,
                "actions": [a.to_record() for a in log.actions],
            }
            lines.append(json.dumps(rec, sort_keys=True, separators=(",", ":")))
        lines.extend(
            json.dumps(r.to_record(), sort_keys=True, separators=(",", ":")) for r in self.records
        )
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> DecisionDatabase:
        lines = [line for line in text.split("\n") if line]
        if not lines:
            raise FormatError("empty decision database")
        header = json.loads(lines[0])
        if header.get("kind") != "decision-db" or header.get("v") != DB_FORMAT_VERSION:
            raise FormatError("not a supported decision database")
        db = cls()
        for line in lines[1:]:
            rec = json.loads(line)
            if rec.get("kind") == "game":
                log_text_lines = [
                    json.dumps(
                        {
                            "v": 1,
                            "kind": "gamelog",
                            "seed": rec["seed"],
                            "config": rec["config"],
                            "config_hash": None,
                            "deck": rec["deck"],
                        },
                        sort_keys=True,
                        separators=(",", ":"),
                    )
                ]
                log_text_lines += [json.dumps(a, sort_keys=True, separators=(",", ":")) for a in rec["actions"]]
                db.add_game(rec["id"], GameLog.from_text("\n".join(log_text_lines) + "\n"))
            elif rec.get("kind") == "decision":
                db.records.append(DecisionRecord.from_record(rec))
            else:
                raise FormatError(f"unknown record kind {rec.get('kind')!r}")
        for r in db.records:
            if r.game_id not in db.games:
                raise FormatError(f"record references unknown game {r.game_id!r}")
        return db

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_text())

    @classmethod
    def load(cls, path: str | Path) -> DecisionDatabase:
        return cls.from_text(Path(path).read_text())


def _prefix_states(log: GameLog) -> list[GameState]:
    """State before each logged action (length ``len(actions) + 1``)."""
    states = [replay(GameLog(seed=log.seed, config=log.config, actions=(), deck=log.deck))]
    for action in log.actions:
        state, _ = apply_action(states[-1], action)
        states.append(state)
    return states


def capture_decisions(
    log: GameLog, actor_tags: tuple[str, str], game_id: str
) -> list[DecisionRecord]:
    """One record per turn of a finished game, attributed to its actor."""
    states = _prefix_states(log)
    return [
        DecisionRecord(
            game_id=game_id,
            turn=turn,
            actor=states[turn].current_player,
            actor_tag=actor_tags[states[turn].current_player],
            action=action,
        )
        for turn, action in enumerate(log.actions)
    ]


def record_views(db: DecisionDatabase) -> list[tuple[DecisionRecord, PlayerView]]:
    """Reconstruct the acting player's view for every record.

    Views come from replaying each game's log prefix; a record whose
    turn, actor, or action cannot be reproduced raises
    :class:`ValidationError` naming it.
    """
    states_by_game: dict[str, list[GameState]] = {}
    out = []
    for rec in db.records:
        if rec.game_id not in states_by_game:
            try:
                states_by_game[rec.game_id] = _prefix_states(db.games[rec.game_id])
            except Exception as exc:
                raise ValidationError(f"game {rec.game_id!r} does not replay: {exc}") from exc
        states = states_by_game[rec.game_id]
        if rec.turn >= len(states) - 1:
            raise ValidationError(f"record {rec.game_id}:{rec.turn} is past the end of the log")
        state = states[rec.turn]
        if rec.actor != state.current_player:
            raise ValidationError(
                f"record {rec.game_id}:{rec.turn} names actor {rec.actor}, log says {state.current_player}"
            )
        if illegality_reason(state, rec.action) is not None:
            raise ValidationError(f"record {rec.game_id}:{rec.turn} action is illegal at that point")
        out.append((rec, observe(state, rec.actor)))
    return out


@dataclass(frozen=True)
class RecordMatch:
    game_id: str
    turn: int
    actor_tag: str
    chosen: ActionSpec
    predicted: ActionSpec
    matched: bool


@dataclass(frozen=True)
class HumannessReport:
    """Fraction of recorded decisions the weights reproduce."""

    matched: int
    total: int
    matches: tuple[RecordMatch, ...]

    @property
    def fraction(self) -> float:
        return self.matched / self.total

    def to_record(self) -> dict:
        return {
            "kind": "humanness",
            "matched": self.matched,
            "total": self.total,
            "fraction": self.fraction,
            "records": [
                {
                    "game": m.game_id,
                    "turn": m.turn,
                    "tag": m.actor_tag,
                    "chosen": m.chosen.to_record(),
                    "predicted": m.predicted.to_record(),
                    "matched": m.matched,
                }
                for m in self.matches
            ],
        }


def evaluate_humanness(w: WeightVector, db: DecisionDatabase) -> HumannessReport:
    """Score ``w`` against every record: does it pick the recorded action?"""
    if not db.records:
        raise ValidationError("decision database is empty")
    matches = []
    matched = 0
    for rec, view in record_views(db):
        predicted = choose_action(view, w)
        hit = predicted == rec.action
        matched += hit
        matches.append(
            RecordMatch(
                game_id=rec.game_id,
                turn=rec.turn,
                actor_tag=rec.actor_tag,
                chosen=rec.action,
                predicted=predicted,
                matched=hit,
            )
        )
    return HumannessReport(matched=matched, total=len(db.records), matches=tuple(matches))
