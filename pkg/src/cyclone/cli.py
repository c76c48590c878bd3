"""Command-line front door: simulation, training, evaluation, service.

Every subcommand prints the fully-resolved configuration it runs with as
a single ``config {...}`` line, and all randomness flows from ``--seed``,
so any artifact can be reproduced from that echo alone. Exit codes:
0 success, 1 runtime failure (single-line ``error: ...`` on stderr),
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .decision import PRESET_NAMES, WeightVector, resolve_weights
from .engine import GameLog, RulesConfig, replay
from .errors import CycloneError
from .harness import (
    DecisionDatabase,
    capture_decisions,
    crossplay_matrix,
    evaluate_humanness,
    simulate_games,
)
from .trainer import (
    AuditWriter,
    make_humanness_objective,
    make_paired_objective,
    make_selfplay_objective,
    train_to_saturation,
)

DEFAULT_SEED = 1


def _echo_config(args: argparse.Namespace, parser_keys: list[str]) -> None:
    resolved = {k: getattr(args, k) for k in parser_keys}
    print("config " + json.dumps(resolved, sort_keys=True, default=str))


def _out_dir(args: argparse.Namespace) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write(path: Path, text: str) -> None:
    path.write_text(text)
    print(f"wrote {path}")


def _weights_arg(parser: argparse.ArgumentParser, value: str) -> WeightVector:
    try:
        return resolve_weights(value)
    except CycloneError as exc:
        parser.error(str(exc))


def cmd_sim(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    config = RulesConfig(strike_out_zero=not args.stacks_stand)
    out = _out_dir(args)
    if args.matrix:
        names = [n.strip() for n in args.matrix.split(",") if n.strip()]
        if len(names) < 2:
            parser.error("--matrix needs at least two comma-separated presets/files")
        named = [(name, _weights_arg(parser, name)) for name in names]
        matrix = crossplay_matrix(named, args.n, args.seed, config=config, jobs=args.jobs)
        _write(out / "crossplay.json", json.dumps(matrix.to_record(), sort_keys=True, indent=2) + "\n")
        _write(out / "crossplay.txt", matrix.format_text())
        print(matrix.format_text())
        return 0
    w_a = _weights_arg(parser, args.a)
    w_b = _weights_arg(parser, args.b if args.b is not None else args.a)
    label_b = args.b if args.b is not None else args.a
    stats, logs = simulate_games(
        w_a,
        w_b,
        args.n,
        args.seed,
        config=config,
        label_a=args.a,
        label_b=label_b,
        collect_logs=args.logs,
        jobs=args.jobs,
        ci_method=args.ci,
    )
    _write(out / "stats.json", json.dumps(stats.to_record(), sort_keys=True, indent=2) + "\n")
    _write(out / "stats.txt", stats.summary() + "\n")
    if args.logs:
        logs_dir = out / "logs"
        logs_dir.mkdir(exist_ok=True)
        for i, log in enumerate(logs):
            (logs_dir / f"game_{i:04d}.log").write_text(log.to_text())
        print(f"wrote {len(logs)} logs to {logs_dir}")
    print(stats.summary())
    return 0


def cmd_train(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    start = _weights_arg(parser, args.start)
    if args.objective == "selfplay":
        objective = make_selfplay_objective(args.n, args.seed, jobs=args.jobs)
    elif args.objective == "paired":
        if args.partner is None:
            parser.error("--partner is required for the paired objective")
        objective = make_paired_objective(_weights_arg(parser, args.partner), args.n, args.seed, jobs=args.jobs)
    else:
        if args.db is None:
            parser.error("--db is required for the humanness objective")
        objective = make_humanness_objective(DecisionDatabase.load(args.db))
    out = _out_dir(args)
    audit = AuditWriter(out / "audit.jsonl")
    result = train_to_saturation(
        start,
        objective,
        objective_id=args.objective,
        games_per_candidate=args.n,
        seed_base=args.seed,
        max_rounds=args.rounds,
        max_experiments=args.max_experiments,
        step_halvings=args.halvings,
        audit=audit,
        resume=args.resume,
    )
    _write(out / "weights.json", result.final.to_text())
    status = "saturated" if result.saturated else ("capped" if result.capped else "stopped")
    print(
        f"training {status} after {len(result.experiments)} experiments"
        f" ({len(result.experiments) * 81} evaluations, {result.rounds} rounds)"
    )
    if result.capped:
        print("warning: stopped by round/experiment cap before saturation", file=sys.stderr)
    return 0


def cmd_humanness(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    w = _weights_arg(parser, args.weights)
    db = DecisionDatabase.load(args.db)
    report = evaluate_humanness(w, db)
    out = _out_dir(args)
    _write(out / "humanness.json", json.dumps(report.to_record(), sort_keys=True, indent=2) + "\n")
    print(f"humanness {report.fraction:.4f} ({report.matched}/{report.total})")
    return 0


def cmd_replay(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    log = GameLog.from_text(Path(args.log).read_text())
    state = replay(log)
    print(f"replayed {len(log.actions)} actions: score {state.final_score} (stacks {state.score})")
    if args.capture:
        tags = tuple(t.strip() for t in args.capture.split(","))
        if len(tags) != 2:
            parser.error("--capture needs two comma-separated actor tags")
        db = DecisionDatabase()
        db.add_game(args.game_id, log)
        db.add_records(capture_decisions(log, tags, args.game_id))
        _write(Path(args.db_out), db.to_text())
    return 0


def cmd_serve(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(capture_dir=args.capture_dir)
    if args.ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=args.ui_dir, html=True), name="ui")
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cyclone",
        description="Factor-weighted Hanabi teammate: simulate, train, evaluate, serve.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="base seed (default %(default)s)")
        p.add_argument(
            "--out",
            default=os.environ.get("CYCLONE_OUT_DIR", "out"),
            help="output directory (env CYCLONE_OUT_DIR, default %(default)s)",
        )
        p.add_argument(
            "--jobs",
            type=int,
            default=int(os.environ.get("CYCLONE_JOBS", "1")),
            help="parallel worker processes (env CYCLONE_JOBS, default %(default)s)",
        )

    p_sim = sub.add_parser("sim", help="simulate batches or a cross-play matrix")
    p_sim.add_argument("--a", default="self-play", help=f"preset {PRESET_NAMES} or weights file")
    p_sim.add_argument("--b", default=None, help="partner preset/file (default: same as --a)")
    p_sim.add_argument("--matrix", default=None, help="comma-separated presets/files; full matrix")
    p_sim.add_argument("-n", type=int, default=1000, help="games per pairing (default %(default)s)")
    p_sim.add_argument("--logs", action="store_true", help="persist one log file per game")
    p_sim.add_argument("--stacks-stand", action="store_true", help="striking out keeps the stack sum")
    p_sim.add_argument("--ci", choices=("normal", "bootstrap"), default="normal", help="CI method for stats")
    common(p_sim)

    p_train = sub.add_parser("train", help="full-factorial weight search to saturation")
    p_train.add_argument("--objective", choices=("selfplay", "paired", "humanness"), required=True)
    p_train.add_argument("--start", required=True, help="starting preset or weights file")
    p_train.add_argument("--partner", default=None, help="partner preset/file (paired objective)")
    p_train.add_argument("--db", default=None, help="decision database (humanness objective)")
    p_train.add_argument("-n", type=int, default=200, help="games per candidate (default %(default)s)")
    p_train.add_argument("--rounds", type=int, default=25, help="max schedule rounds (default %(default)s)")
    p_train.add_argument("--max-experiments", type=int, default=None, help="hard cap on experiments")
    p_train.add_argument("--halvings", type=int, default=0, help="step halvings before stopping")
    p_train.add_argument("--resume", action="store_true", help="continue from the audit trail")
    common(p_train)

    p_hum = sub.add_parser("humanness", help="score weights against a decision database")
    p_hum.add_argument("--weights", required=True, help="preset or weights file")
    p_hum.add_argument("--db", required=True, help="decision database file")
    common(p_hum)

    p_rep = sub.add_parser("replay", help="replay a game log; optionally capture decisions")
    p_rep.add_argument("--log", required=True, help="game log file")
    p_rep.add_argument("--capture", default=None, help="two actor tags, e.g. 'human:x,preset:y'")
    p_rep.add_argument("--db-out", default="decisions.db", help="decision database output path")
    p_rep.add_argument("--game-id", default="replayed", help="game id for captured records")
    common(p_rep)

    p_serve = sub.add_parser("serve", help="run the live-play HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8711)
    p_serve.add_argument("--capture-dir", default=None, help="write-through dir for logs/decisions")
    p_serve.add_argument("--ui-dir", default=None, help="serve a built web UI from this directory")
    common(p_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _echo_config(args, [k for k in vars(args) if k != "command"])
    handlers = {
        "sim": cmd_sim,
        "train": cmd_train,
        "humanness": cmd_humanness,
        "replay": cmd_replay,
        "serve": cmd_serve,
    }
    try:
        return handlers[args.command](args, parser)
    except (CycloneError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
