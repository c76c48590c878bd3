"""Full-factorial coordinate search over the trainable weight parameters.

One experiment picks four parameters, tries every combination of
{-step, 0, +step} on them (81 candidates), and re-bases on the winner;
training repeats experiments over a schedule of parameter groups until a
full round brings no improvement. All candidates within an experiment
are scored on the same seed block (common random numbers), which the
audit trail records.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product
from pathlib import Path
from typing import Callable

from .decision import (
    WeightVector,
    expected_values,
    get_parameter,
    parameter_names,
    with_parameter,
)
from .engine import RulesConfig
from .errors import ConfigurationError, ExperimentError, ValidationError
from .harness import DecisionDatabase, record_views, simulate_games
from .rng import derive_seed

AUDIT_FORMAT_VERSION = 1
LEVELS = (-1, 0, 1)
BASE_INDEX = 40  # position of (0, 0, 0, 0) in the 3^4 product order

ObjectiveFn = Callable[[WeightVector], float]


@dataclass(frozen=True)
class DesignExperiment:
    """One 3^4 factorial probe around ``base``."""

    base: WeightVector
    factors: tuple[str, str, str, str]
    steps: tuple[float, float, float, float]
    objective_id: str = ""
    games_per_candidate: int = 200
    seed_base: int = 0

    def __post_init__(self) -> None:
        if len(self.factors) != 4 or len(set(self.factors)) != 4:
            raise ConfigurationError("an experiment varies exactly 4 distinct parameters")
        if len(self.steps) != 4 or any(s <= 0 for s in self.steps):
            raise ConfigurationError("step sizes must be 4 positive reals")
        for name in self.factors:
            # Raises on unknown names and dominance-flagged (untrainable) factors.
            with_parameter(self.base, name, get_parameter(self.base, name))

    @property
    def seed_block(self) -> tuple[int, ...]:
        return tuple(derive_seed(self.seed_base, i) for i in range(self.games_per_candidate))

    def candidate(self, levels: tuple[int, ...]) -> WeightVector:
        w = self.base
        for name, step, level in zip(self.factors, self.steps, levels):
            if level:
                w = with_parameter(w, name, get_parameter(self.base, name) + level * step)
        return w


@dataclass(frozen=True)
class CandidateResult:
    levels: tuple[int, int, int, int]
    score: float


@dataclass(frozen=True)
class ExperimentResult:
    experiment: DesignExperiment
    candidates: tuple[CandidateResult, ...]
    best_index: int
    saturated: bool

    @property
    def base_score(self) -> float:
        return self.candidates[BASE_INDEX].score

    @property
    def best_score(self) -> float:
        return self.candidates[self.best_index].score

    @property
    def best(self) -> WeightVector:
        return self.experiment.candidate(self.candidates[self.best_index].levels)

    def to_record(self) -> dict:
        return {
            "kind": "experiment",
            "objective": self.experiment.objective_id,
            "factors": list(self.experiment.factors),
            "steps": list(self.experiment.steps),
            "games_per_candidate": self.experiment.games_per_candidate,
            "seed_block": list(self.experiment.seed_block),
            "candidates": [{"levels": list(c.levels), "score": c.score} for c in self.candidates],
            "base_score": self.base_score,
            "best_levels": list(self.candidates[self.best_index].levels),
            "best_score": self.best_score,
            "saturated": self.saturated,
            "best_weights": self.best.to_record(),
        }


def run_experiment(exp: DesignExperiment, objective: ObjectiveFn) -> ExperimentResult:
    """Score all 81 candidates; ties go to the base vector."""
    candidates = []
    for levels in product(LEVELS, repeat=4):
        w = exp.candidate(levels)
        try:
            score = objective(w)
        except Exception as exc:
            raise ExperimentError(f"objective failed on candidate {levels}: {exc}") from exc
        candidates.append(CandidateResult(levels=levels, score=score))
    best_score = max(c.score for c in candidates)
    if candidates[BASE_INDEX].score == best_score:
        best_index = BASE_INDEX
    else:
        best_index = next(i for i, c in enumerate(candidates) if c.score == best_score)
    return ExperimentResult(
        experiment=exp,
        candidates=tuple(candidates),
        best_index=best_index,
        saturated=best_index == BASE_INDEX,
    )


def default_schedule(w: WeightVector) -> list[tuple[str, str, str, str]]:
    """Chunks of four over all trainable parameters, wrapping at the end.

    Parameters are ordered play / discard / conventions / curve, so the
    chunks roughly follow the factor categories while every experiment
    still varies exactly four parameters.
    """
    params = parameter_names(w)
    groups = []
    for start in range(0, len(params), 4):
        groups.append(tuple(params[(start + k) % len(params)] for k in range(4)))
    return groups


def default_step(value: float, scale: float = 1.0) -> float:
    return scale * max(0.25, 0.25 * abs(value))


@dataclass
class TrainResult:
    final: WeightVector
    experiments: list[ExperimentResult]
    rounds: int
    saturated: bool
    capped: bool = False


class AuditWriter:
    """Append-only JSONL trail of every experiment in a training run."""

    def __init__(self, path: str | Path):
        self.path = Path(path)

    def write_header(self, start: WeightVector, objective_id: str) -> None:
        header = {
            "kind": "train-audit",
            "v": AUDIT_FORMAT_VERSION,
            "objective": objective_id,
            "start": start.to_record(),
        }
        self.path.write_text(json.dumps(header, sort_keys=True, separators=(",", ":")) + "\n")

    def append(self, record: dict) -> None:
        with self.path.open("a") as fh:
            fh.write(json.dumps(record, sort_keys=True, separators=(",", ":")) + "\n")

    def last_best(self) -> WeightVector | None:
        """Winner of the last completed experiment, for resuming a run."""
        if not self.path.exists():
            return None
        best = None
        for line in self.path.read_text().splitlines():
            rec = json.loads(line)
            if rec.get("kind") == "experiment":
                best = WeightVector.from_record(rec["best_weights"])
        return best


def train_to_saturation(
    start: WeightVector,
    objective: ObjectiveFn,
    *,
    schedule: list[tuple[str, str, str, str]] | None = None,
    objective_id: str = "",
    games_per_candidate: int = 200,
    seed_base: int = 0,
    max_rounds: int = 25,
    max_experiments: int | None = None,
    step_halvings: int = 0,
    audit: AuditWriter | None = None,
    resume: bool = False,
) -> TrainResult:
    """Repeat factorial experiments until a full schedule round stalls.

    Each experiment re-bases on its winner. ``step_halvings`` optionally
    inserts coarse-to-fine refinement: a stalled round halves all steps
    that many times before training stops. ``max_rounds`` (and
    ``max_experiments``, if set) guard against non-termination; hitting a
    guard returns ``capped=True``.
    """
    current = start
    if audit is not None:
        if resume:
            resumed = audit.last_best()
            if resumed is not None:
                current = resumed
        if not resume or not audit.path.exists():
            audit.write_header(start, objective_id)

    groups = schedule if schedule is not None else default_schedule(current)
    for group in groups:
        if len(group) != 4:
            raise ConfigurationError(f"schedule group {group} must have exactly 4 parameters")
    experiments: list[ExperimentResult] = []
    scale = 1.0
    halvings = 0
    rounds = 0
    saturated = False
    capped = False
    done = False
    while not done:
        if rounds >= max_rounds:
            capped = True
            break
        improved = False
        for group in groups:
            if max_experiments is not None and len(experiments) >= max_experiments:
                capped = True
                done = True
                break
            exp = DesignExperiment(
                base=current,
                factors=tuple(group),
                steps=tuple(default_step(get_parameter(current, name), scale) for name in group),
                objective_id=objective_id,
                games_per_candidate=games_per_candidate,
                seed_base=seed_base,
            )
            result = run_experiment(exp, objective)
            experiments.append(result)
            if audit is not None:
                audit.append(result.to_record())
            if not result.saturated:
                current = result.best
                improved = True
        rounds += 1
        if done:
            break
        if not improved:
            if halvings < step_halvings:
                halvings += 1
                scale *= 0.5
            else:
                saturated = True
                done = True
    result = TrainResult(
        final=current,
        experiments=experiments,
        rounds=rounds,
        saturated=saturated,
        capped=capped,
    )
    if audit is not None:
        audit.append(
            {
                "kind": "final",
                "weights": current.to_record(),
                "rounds": rounds,
                "experiments": len(experiments),
                "saturated": saturated,
                "capped": capped,
            }
        )
    return result


# --- objectives -----------------------------------------------------------


def make_selfplay_objective(
    games: int, seed_base: int, *, config: RulesConfig | None = None, jobs: int = 1
) -> ObjectiveFn:
    """Mean final score of ``w`` paired with itself over a fixed seed block."""

    def objective(w: WeightVector) -> float:
        stats, _ = simulate_games(w, w, games, seed_base, config=config, jobs=jobs)
        return stats.mean

    return objective


def make_paired_objective(
    partner: WeightVector,
    games: int,
    seed_base: int,
    *,
    config: RulesConfig | None = None,
    jobs: int = 1,
) -> ObjectiveFn:
    """Mean final score of ``w`` paired with a fixed partner (seats alternate)."""

    def objective(w: WeightVector) -> float:
        stats, _ = simulate_games(w, partner, games, seed_base, config=config, jobs=jobs)
        return stats.mean

    return objective


def make_humanness_objective(db: DecisionDatabase) -> ObjectiveFn:
    """Fraction of recorded decisions reproduced by ``w``.

    Views are reconstructed once and per-view factor vectors are cached by
    give-up-curve setting, so the 81 candidates of an experiment re-score
    cheaply; the scores are identical to ``evaluate_humanness``.
    """
    if not db.records:
        raise ValidationError("decision database is empty")
    pairs = record_views(db)
    h_cache: dict[tuple, list] = {}

    def objective(w: WeightVector) -> float:
        key = (w.curve, w.teammate_play_aggregation)
        if key not in h_cache:
            h_cache[key] = [[(e.action, e.h) for e in expected_values(view, w)] for _, view in pairs]
        cached = h_cache[key]
        matched = 0
        for (rec, _), actions in zip(pairs, cached):
            best_action = None
            best_key = None
            for action, h in actions:
                k = w.evaluate(h)
                if best_key is None or k > best_key:
                    best_key = k
                    best_action = action
            matched += best_action == rec.action
        return matched / len(pairs)

    return objective
