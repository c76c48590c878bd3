"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line with its measured numbers (run with ``pytest -s`` to see
them inline). Criteria and tolerances are pinned here, not configurable.
"""

from __future__ import annotations

import random
import time
from collections import Counter
from dataclasses import replace
from itertools import product

import numpy as np
import pytest

from cyclone.cards import Card, full_deck
from cyclone.cli import main
from cyclone.decision import (
    FactorVector,
    WeightVector,
    choose_action,
    expected_values,
    get_parameter,
    load_preset,
    with_parameter,
)
from cyclone.engine import apply_action, legal_actions, new_game
from cyclone.harness import (
    DecisionDatabase,
    capture_decisions,
    crossplay_matrix,
    evaluate_humanness,
    simulate_games,
)
from cyclone.knowledge import (
    DEFAULT_GIVE_UP_CURVE,
    give_up_threshold,
    observe,
    prob_non_endangered,
    prob_playable,
    prob_unneeded,
)
from cyclone.trainer import (
    DesignExperiment,
    make_humanness_objective,
    run_experiment,
    train_to_saturation,
)

from conftest import random_playout, sample_states
from test_engine import brute_force_legal, full_multiset, state_multiset
from test_knowledge import oracle_endangered, oracle_fraction, oracle_playable, oracle_unneeded


def report(name: str, passed: bool, detail: str) -> None:
    print(f"\nACCEPTANCE {name}: {'PASS' if passed else 'FAIL'} ({detail})")
    assert passed, f"{name}: {detail}"


def test_criterion_engine_rules_oracle():
    from cyclone.errors import IllegalActionError
    from test_engine import all_wellformed

    t0 = time.time()
    rng = random.Random(1001)
    full = full_multiset()
    checked = 0
    while checked < 10_000:
        states = random_playout(rng)
        for state in states:
            assert state_multiset(state) == full
            assert 0 <= state.info_tokens <= 8
            assert 0 <= state.strikes <= 3
            if not state.is_terminal:
                legal = set(legal_actions(state))
                assert legal == brute_force_legal(state)
                # legal_actions is exactly the set apply_action accepts.
                for action in all_wellformed(state):
                    try:
                        apply_action(state, action)
                        accepted = True
                    except IllegalActionError:
                        accepted = False
                    assert accepted == (action in legal), action
            checked += 1
    elapsed = time.time() - t0
    report(
        "engine-rules-oracle",
        elapsed < 60,
        f"{checked} states, legality vs brute force, apply-acceptance equivalence, "
        f"conservation + bounds, {elapsed:.1f}s < 60s",
    )


def test_criterion_probability_oracle_equivalence():
    t0 = time.time()
    states = [s for s in sample_states(160, seed=404, skip_first=6) if not s.is_terminal][:110]
    assert len(states) >= 100
    curve = DEFAULT_GIVE_UP_CURVE
    compared = 0
    for state in states:
        for viewer in (0, 1):
            view = observe(state, viewer)
            for slot in range(len(view.own)):
                assert prob_playable(view, slot) == oracle_fraction(view, slot, oracle_playable)
                assert prob_non_endangered(view, slot) == oracle_fraction(
                    view, slot, lambda v, c: not oracle_endangered(v, c)
                )
                assert prob_unneeded(view, slot, curve) == oracle_fraction(
                    view, slot, lambda v, c: oracle_unneeded(v, c, curve)
                )
                compared += 3
    elapsed = time.time() - t0
    report(
        "probability-oracle",
        elapsed < 60,
        f"{len(states)} states, {compared} exact rational equalities, {elapsed:.1f}s < 60s",
    )


def test_criterion_two_factor_projection():
    w = WeightVector(
        weights=tuple(
            {"discard_non_endangered": 0.1, "play_playable": 1.0}.get(name, 0.0)
            for name in FactorVector._fields
        )
    )
    _, ev_discard = w.evaluate(FactorVector(discard_non_endangered=1.0))
    _, ev_play = w.evaluate(FactorVector(play_playable=0.5))
    report(
        "two-factor-projection",
        ev_play == pytest.approx(0.5) and ev_discard == pytest.approx(0.1) and ev_play > ev_discard,
        f"EV(play)={ev_play} > EV(discard)={ev_discard}, Play selected",
    )


def test_criterion_matrix_product_equivalence_and_scaling():
    states = [s for s in sample_states(1100, seed=777) if not s.is_terminal][:1000]
    assert len(states) == 1000
    w = load_preset("self-play")
    w_finite = np.array([x if d == 0 else 0.0 for x, d in zip(w.weights, w.dominant)])
    worst = 0.0
    for state in states:
        view = observe(state, state.current_player)
        evaluations = expected_values(view, w)
        y = np.array([list(e.h) for e in evaluations]) @ w_finite
        worst = max(worst, max(abs(e.ev - yi) for e, yi in zip(evaluations, y)))
    doubled = replace(w, weights=tuple(2.0 * x for x in w.weights))
    halved = replace(w, weights=tuple(0.5 * x for x in w.weights))
    scaling_ok = all(
        choose_action(observe(s, s.current_player), w)
        == choose_action(observe(s, s.current_player), doubled)
        == choose_action(observe(s, s.current_player), halved)
        for s in states
    )
    report(
        "matrix-product-equivalence",
        worst < 1e-12 and scaling_ok,
        f"1000 states, max |ev - (H^T w)_i| = {worst:.2e} < 1e-12, argmax scale-invariant",
    )


def test_criterion_give_up_curve_anchors():
    at40 = give_up_threshold(40)
    crossing = next(s for s in range(40, -1, -1) if give_up_threshold(s) < 5)
    report(
        "give-up-curve-anchors",
        abs(at40 - 5.5) <= 1e-9 and crossing == 29,
        f"m(40)={at40} (=5.5 ± 1e-9), first deck size below 5 walking down = {crossing} (=29)",
    )


QUAD_FACTORS = (
    "discard_non_endangered",
    "discard_unneeded",
    "teammate_play_playable",
    "clue_info_tokens_held",
)


def test_criterion_trainer_contract():
    start = load_preset("human-like")
    for name in QUAD_FACTORS:
        start = with_parameter(start, name, 0.0)
    target = {
        "discard_non_endangered": 0.5,
        "discard_unneeded": -0.75,
        "teammate_play_playable": 0.25,
        "clue_info_tokens_held": 1.0,
    }

    def objective(w):
        return -sum((get_parameter(w, n) - t) ** 2 for n, t in target.items())

    calls = []
    exp = DesignExperiment(base=start, factors=QUAD_FACTORS, steps=(0.25,) * 4)
    run_experiment(exp, lambda w: calls.append(0) or objective(w))
    result = train_to_saturation(start, objective, schedule=[QUAD_FACTORS], max_rounds=40)

    # Brute-force lattice optimum: start + 0.25k per coordinate, |k| <= 8.
    lattice = [[0.25 * k for k in range(-8, 9)]] * 4
    best = max(
        (vals for vals in product(*lattice)),
        key=lambda vals: -sum((v - target[n]) ** 2 for v, n in zip(vals, QUAD_FACTORS)),
    )
    within = all(
        abs(get_parameter(result.final, n) - b) <= 0.25 + 1e-12
        for n, b in zip(QUAD_FACTORS, best)
    )
    report(
        "trainer-contract",
        len(calls) == 81 and result.saturated and within,
        f"81 evaluations per experiment, saturated in {len(result.experiments)} experiments, "
        f"final within one step of brute-forced lattice optimum",
    )


def test_criterion_cloning_pipeline_closure():
    preset = load_preset("human-like")
    _, logs = simulate_games(preset, preset, 12, seed_base=77, collect_logs=True)
    train_db, holdout_db = DecisionDatabase(), DecisionDatabase()
    for i, log in enumerate(logs):
        db = train_db if i < 8 else holdout_db
        game_id = f"g{i}"
        db.add_game(game_id, log)
        db.add_records(capture_decisions(log, ("preset:human-like",) * 2, game_id))

    full_db = DecisionDatabase(
        games={**train_db.games, **holdout_db.games},
        records=train_db.records + holdout_db.records,
    )
    self_report = evaluate_humanness(preset, full_db)
    assert self_report.fraction == 1.0

    start = preset
    for name, value in [
        ("discard_non_endangered", 0.6),
        ("play_singled_out", 2.0),
        ("clue_singles_out_playable", 2.25),
        ("clue_info_tokens_held", 0.25),
    ]:
        start = with_parameter(start, name, value)
    objective = make_humanness_objective(train_db)
    start_fraction = objective(start)
    assert start_fraction < 0.95, "perturbation must actually change decisions"
    result = train_to_saturation(
        start, objective, objective_id="humanness", max_experiments=10
    )
    holdout = evaluate_humanness(result.final, holdout_db).fraction
    report(
        "cloning-pipeline-closure",
        self_report.fraction == 1.0 and holdout >= 0.9 and len(result.experiments) <= 10,
        f"self-humanness 1.0 on {self_report.total} records; perturbed start "
        f"{start_fraction:.3f} recovered to held-out {holdout:.3f} >= 0.9 in "
        f"{len(result.experiments)} experiments",
    )


def test_criterion_selfplay_score_band_and_matrix():
    w = load_preset("self-play")
    t0 = time.time()
    stats, _ = simulate_games(w, w, 1000, seed_base=2024, label_a="self-play", label_b="self-play")
    elapsed = time.time() - t0
    named = [(n, load_preset(n)) for n in ("human-like", "human-complementary", "self-play")]
    matrix = crossplay_matrix(named, 100, seed_base=31)
    print("\n" + matrix.format_text())
    for (i, j), cell in sorted(matrix.cells.items()):
        assert cell.ci95 >= 0.0
        assert cell.n == 100
    report(
        "selfplay-score-band",
        17.5 <= stats.mean <= 23.5 and elapsed < 300,
        f"mean {stats.mean:.2f} ± {stats.ci95:.2f} over 1000 games in {elapsed:.0f}s < 300s; "
        f"3x3 matrix emitted with 95% CIs (orderings reported, not gated)",
    )


def test_criterion_cli_determinism(tmp_path, capsys):
    args = ["sim", "--a", "self-play", "-n", "6", "--seed", "99", "--logs"]
    assert main(args + ["--out", str(tmp_path / "a")]) == 0
    assert main(args + ["--out", str(tmp_path / "b")]) == 0
    capsys.readouterr()
    files_a = sorted(p.relative_to(tmp_path / "a") for p in (tmp_path / "a").rglob("*") if p.is_file())
    files_b = sorted(p.relative_to(tmp_path / "b") for p in (tmp_path / "b").rglob("*") if p.is_file())
    identical = files_a == files_b and all(
        (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes() for f in files_a
    )
    report(
        "cli-determinism",
        identical,
        f"{len(files_a)} artifacts (stats + logs) byte-identical across reruns",
    )
