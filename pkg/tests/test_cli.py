from __future__ import annotations

import json

import pytest

from cyclone.cli import main
from cyclone.engine import GameLog, replay
from cyclone.harness import DecisionDatabase


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_sim_writes_stats_and_echoes_config(tmp_path, capsys):
    code, out, err = run(
        ["sim", "--a", "self-play", "-n", "4", "--seed", "5", "--out", str(tmp_path)], capsys
    )
    assert code == 0
    assert out.startswith("config {")
    echoed = json.loads(out.splitlines()[0].removeprefix("config "))
    assert echoed["n"] == 4 and echoed["seed"] == 5
    stats = json.loads((tmp_path / "stats.json").read_text())
    assert stats["n"] == 4
    assert sum(stats["histogram"]) == 4
    assert (tmp_path / "stats.txt").exists()


def test_sim_repeat_runs_are_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    args = ["sim", "--a", "self-play", "-n", "4", "--seed", "9", "--logs"]
    assert run(args + ["--out", str(a)], capsys)[0] == 0
    assert run(args + ["--out", str(b)], capsys)[0] == 0
    assert (a / "stats.json").read_bytes() == (b / "stats.json").read_bytes()
    assert (a / "stats.txt").read_bytes() == (b / "stats.txt").read_bytes()
    logs_a = sorted(p.name for p in (a / "logs").iterdir())
    assert logs_a == sorted(p.name for p in (b / "logs").iterdir())
    for name in logs_a:
        assert (a / "logs" / name).read_bytes() == (b / "logs" / name).read_bytes()


def test_sim_matrix(tmp_path, capsys):
    code, out, _ = run(
        [
            "sim",
            "--matrix",
            "human-like,self-play",
            "-n",
            "2",
            "--seed",
            "3",
            "--out",
            str(tmp_path),
        ],
        capsys,
    )
    assert code == 0
    rec = json.loads((tmp_path / "crossplay.json").read_text())
    assert len(rec["cells"]) == 3
    assert "±" in (tmp_path / "crossplay.txt").read_text()


def test_unknown_preset_is_usage_error(tmp_path, capsys):
    with pytest.raises(SystemExit) as exit_info:
        main(["sim", "--a", "not-a-preset", "-n", "1", "--out", str(tmp_path)])
    assert exit_info.value.code == 2


def test_missing_subcommand_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exit_info:
        main([])
    assert exit_info.value.code == 2


def test_replay_command_and_capture(tmp_path, capsys):
    sim_out = tmp_path / "sim"
    run(["sim", "--a", "human-like", "-n", "1", "--seed", "8", "--logs", "--out", str(sim_out)], capsys)
    log_path = sim_out / "logs" / "game_0000.log"
    db_path = tmp_path / "decisions.db"
    code, out, _ = run(
        [
            "replay",
            "--log",
            str(log_path),
            "--capture",
            "preset:human-like,preset:human-like",
            "--db-out",
            str(db_path),
            "--game-id",
            "g0",
        ],
        capsys,
    )
    assert code == 0
    assert "replayed" in out
    log = GameLog.from_text(log_path.read_text())
    assert str(replay(log).final_score) in out
    db = DecisionDatabase.load(db_path)
    assert len(db.records) == len(log.actions)


def test_humanness_command(tmp_path, capsys):
    sim_out = tmp_path / "sim"
    run(["sim", "--a", "human-like", "-n", "2", "--seed", "8", "--logs", "--out", str(sim_out)], capsys)
    db = DecisionDatabase()
    from cyclone.harness import capture_decisions

    for i in range(2):
        log = GameLog.from_text((sim_out / "logs" / f"game_{i:04d}.log").read_text())
        db.add_game(f"g{i}", log)
        db.add_records(capture_decisions(log, ("a", "b"), f"g{i}"))
    db_path = tmp_path / "d.db"
    db.save(db_path)
    code, out, _ = run(
        ["humanness", "--weights", "human-like", "--db", str(db_path), "--out", str(tmp_path)],
        capsys,
    )
    assert code == 0
    assert "humanness 1.0000" in out
    rec = json.loads((tmp_path / "humanness.json").read_text())
    assert rec["fraction"] == 1.0


def test_train_command_smoke(tmp_path, capsys):
    code, out, _ = run(
        [
            "train",
            "--objective",
            "selfplay",
            "--start",
            "human-like",
            "-n",
            "2",
            "--seed",
            "4",
            "--max-experiments",
            "1",
            "--out",
            str(tmp_path),
        ],
        capsys,
    )
    assert code == 0
    assert (tmp_path / "audit.jsonl").exists()
    assert (tmp_path / "weights.json").exists()
    assert "81 evaluations" in out


def test_runtime_errors_exit_one(tmp_path, capsys):
    code, _, err = run(
        ["humanness", "--weights", "human-like", "--db", str(tmp_path / "missing.db"), "--out", str(tmp_path)],
        capsys,
    )
    assert code == 1
    assert err.startswith("error:")
    bad_db = tmp_path / "bad.db"
    bad_db.write_text("{}\n")
    code, _, err = run(
        ["humanness", "--weights", "human-like", "--db", str(bad_db), "--out", str(tmp_path)],
        capsys,
    )
    assert code == 1
    assert err.startswith("error:")
