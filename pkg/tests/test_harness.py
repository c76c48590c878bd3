from __future__ import annotations

import math
import random

import pytest

from cyclone.decision import load_preset
from cyclone.engine import ActionKind, ActionSpec, GameLog, RulesConfig, replay
from cyclone.errors import ValidationError
from cyclone.harness import (
    CrossplayMatrix,
    DecisionDatabase,
    DecisionRecord,
    MatchStats,
    capture_decisions,
    crossplay_matrix,
    evaluate_humanness,
    play_game,
    record_views,
    simulate_games,
)
from cyclone.knowledge import observe


def test_bootstrap_ci_flag():
    from cyclone.harness import bootstrap_ci95

    scores = [10, 12, 14, 20, 25, 0, 7, 12] * 10
    normal = MatchStats.from_scores("a", "b", scores)
    boot = MatchStats.from_scores("a", "b", scores, ci_method="bootstrap")
    assert boot.ci95 == bootstrap_ci95(scores)
    assert boot.ci95 == pytest.approx(normal.ci95, rel=0.25)  # same ballpark
    assert boot.mean == normal.mean
    with pytest.raises(ValidationError):
        MatchStats.from_scores("a", "b", scores, ci_method="zzz")


def test_matchstats_closed_form():
    scores = [10, 12, 14, 20, 25, 0, 7, 12]
    stats = MatchStats.from_scores("a", "b", scores)
    n = len(scores)
    mean = sum(scores) / n
    sd = math.sqrt(sum((s - mean) ** 2 for s in scores) / (n - 1))
    assert abs(stats.mean - mean) < 1e-12
    assert abs(stats.sd - sd) < 1e-12
    assert abs(stats.ci95 - 1.96 * sd / math.sqrt(n)) < 1e-12
    assert sum(stats.histogram) == n
    assert stats.histogram[12] == 2


def test_simulate_is_deterministic_and_histogram_sums():
    w = load_preset("self-play")
    a, _ = simulate_games(w, w, 10, seed_base=3)
    b, _ = simulate_games(w, w, 10, seed_base=3)
    assert a == b
    assert sum(a.histogram) == a.n == 10
    c, _ = simulate_games(w, w, 10, seed_base=4)
    assert c != a


def test_seats_alternate_between_games():
    human = load_preset("human-like")
    selfp = load_preset("self-play")
    # Game i seats w_a first iff i is even; verify against direct play.
    stats, logs = simulate_games(human, selfp, 2, seed_base=9, collect_logs=True)
    from cyclone.rng import derive_seed

    direct0 = play_game(derive_seed(9, 0), human, selfp)
    direct1 = play_game(derive_seed(9, 1), selfp, human)
    assert replay(logs[0]) == direct0
    assert replay(logs[1]) == direct1


def test_collected_logs_replay_to_reported_scores():
    w = load_preset("self-play")
    stats, logs = simulate_games(w, w, 6, seed_base=12, collect_logs=True)
    scores = sorted(replay(log).final_score for log in logs)
    histogram_scores = sorted(
        score for score, count in enumerate(stats.histogram) for _ in range(count)
    )
    assert scores == histogram_scores


def test_stacks_stand_config_propagates():
    w = load_preset("self-play")
    config = RulesConfig(strike_out_zero=False)
    stats, logs = simulate_games(w, w, 4, seed_base=2, config=config, collect_logs=True)
    assert logs[0].config == config


def test_parallel_jobs_match_serial():
    w = load_preset("self-play")
    serial, _ = simulate_games(w, w, 8, seed_base=5)
    parallel, _ = simulate_games(w, w, 8, seed_base=5, jobs=2)
    assert serial == parallel


def test_crossplay_matrix_shape_and_symmetry():
    named = [(n, load_preset(n)) for n in ("human-like", "human-complementary", "self-play")]
    matrix = crossplay_matrix(named, 4, seed_base=1)
    assert len(matrix.cells) == 6  # 3 diagonal + 3 off-diagonal pairings
    assert matrix.cell("human-like", "self-play") is matrix.cell("self-play", "human-like")
    rec = matrix.to_record()
    assert len(rec["cells"]) == 6
    text = matrix.format_text()
    assert "human-compl" in text and "±" in text
    with pytest.raises(ValidationError):
        crossplay_matrix(named[:1], 4, seed_base=1)


def make_db(n_games=3, preset="human-like", seed_base=23):
    w = load_preset(preset)
    _, logs = simulate_games(w, w, n_games, seed_base=seed_base, collect_logs=True)
    db = DecisionDatabase()
    for i, log in enumerate(logs):
        game_id = f"g{i}"
        db.add_game(game_id, log)
        db.add_records(capture_decisions(log, (f"preset:{preset}", f"preset:{preset}"), game_id))
    return db


def test_capture_one_record_per_turn_alternating():
    w = load_preset("human-like")
    _, logs = simulate_games(w, w, 1, seed_base=31, collect_logs=True)
    log = logs[0]
    records = capture_decisions(log, ("first", "second"), "g")
    assert len(records) == len(log.actions)
    assert [r.turn for r in records] == list(range(len(log.actions)))
    assert all(r.actor_tag == ("first", "second")[r.turn % 2] for r in records)


def test_pipeline_closure_humanness_is_one():
    db = make_db()
    report = evaluate_humanness(load_preset("human-like"), db)
    assert report.fraction == 1.0
    assert report.total == len(db.records)
    assert all(m.matched for m in report.matches)


def test_humanness_counts_fraction():
    db = make_db(n_games=2)
    # Synthetic db: keep 4 records, flip 3 of them to a different action.
    db.records = db.records[:4]
    views = record_views(db)
    flipped = []
    for i, (rec, view) in enumerate(views):
        if i == 0:
            flipped.append(rec)
            continue
        from cyclone.decision import legal_actions_from_view, choose_action

        alternatives = [a for a in legal_actions_from_view(view) if a != rec.action]
        flipped.append(
            DecisionRecord(rec.game_id, rec.turn, rec.actor, rec.actor_tag, alternatives[0])
        )
    db.records = flipped
    report = evaluate_humanness(load_preset("human-like"), db)
    assert report.matched == 1 and report.total == 4
    assert report.fraction == 0.25


def test_humanness_invariant_under_shuffling_and_tags():
    db = make_db(n_games=2)
    base = evaluate_humanness(load_preset("self-play"), db).fraction
    rng = random.Random(0)
    shuffled = DecisionDatabase(games=db.games, records=list(db.records))
    rng.shuffle(shuffled.records)
    shuffled.records = [
        DecisionRecord(r.game_id, r.turn, r.actor, "relabeled", r.action) for r in shuffled.records
    ]
    assert evaluate_humanness(load_preset("self-play"), shuffled).fraction == base


def test_database_text_round_trip():
    db = make_db(n_games=2)
    text = db.to_text()
    parsed = DecisionDatabase.from_text(text)
    assert parsed.to_text() == text
    assert parsed.records == db.records
    assert parsed.games.keys() == db.games.keys()
    for gid in db.games:
        assert parsed.games[gid] == db.games[gid]


def test_record_views_match_log_prefix_replay():
    db = make_db(n_games=1)
    pairs = record_views(db)
    log = db.games["g0"]
    state = replay(GameLog(seed=log.seed, config=log.config, actions=(), deck=log.deck))
    from cyclone.engine import apply_action

    for rec, view in pairs:
        assert view == observe(state, state.current_player)
        state, _ = apply_action(state, rec.action)


def test_validation_errors_name_the_record():
    db = make_db(n_games=1)
    bad = DecisionRecord("g0", 10 ** 6, 0, "t", ActionSpec(ActionKind.PLAY, slot=0))
    broken = DecisionDatabase(games=db.games, records=[bad])
    with pytest.raises(ValidationError, match="past the end"):
        record_views(broken)
    real = db.records[0]
    wrong_actor = DecisionRecord("g0", real.turn, 1 - real.actor, "t", real.action)
    with pytest.raises(ValidationError, match="actor"):
        record_views(DecisionDatabase(games=db.games, records=[wrong_actor]))
    with pytest.raises(ValidationError):
        evaluate_humanness(load_preset("human-like"), DecisionDatabase())
    with pytest.raises(ValidationError):
        DecisionDatabase().add_records([real])
