"""Command-line surface.

Six subcommands: simulate (one training), cohort (a grid of
executions), compare (two trial logs, session by session), group-compare
(pooled per-session comparison across many logs), figure (CSV data
behind the three summary figures) and import (validate a trial log).

The environment variable RODENTSIM_SEED, when set, overrides --seed.
"""

from __future__ import annotations

import argparse
import glob as globmod
import os
import sys
from pathlib import Path
from typing import Optional

from .config import MetricsConfig, load_config
from .errors import RodentsimError, TrialLogError
from .io import (
    cohort_seeds,
    emit_figure_data,
    export_trial_log_csv,
    export_trial_log_json,
    find_trial_log,
    import_trial_log,
    make_run_record,
    pooled_session_matrix,
    read_trial_log,
    run_experiment_executions,
    save_run_records,
    write_compare_csv,
    write_distance_matrix_csv,
)
from .metrics import distance_by_name, individual_distance
from .model import Cohort, accuracy
from .protocol import run_training

DEFAULT_DELTA = MetricsConfig().delta


def _load_configs(path: Optional[str]):
    if path is None:
        from .agent import AgentConfig
        from .protocol import ProtocolConfig
        return AgentConfig(), ProtocolConfig(), MetricsConfig()
    return load_config(path)


def _resolve_seed(arg_seed: Optional[int], parser: argparse.ArgumentParser,
                  flag: str = "--seed") -> int:
    env = os.environ.get("RODENTSIM_SEED")
    if env is not None and env != "":
        try:
            return int(env)
        except ValueError:
            parser.error(f"RODENTSIM_SEED must be an integer, got {env!r}")
    if arg_seed is None:
        parser.error(f"{flag} is required (or set RODENTSIM_SEED)")
    return arg_seed


def _summarize(member) -> None:
    last = member.sessions[-1]
    verdict = (f"reached criterion at session {member.sessions_to_criterion}"
               if member.trained else "did not reach criterion")
    print(f"{member.individual_id}: {len(member.sessions)} sessions, "
          f"{verdict}, last-session accuracy {accuracy(last):.3f}")


def _cmd_simulate(args, parser) -> int:
    agent_cfg, protocol_cfg, metrics_cfg = _load_configs(args.config)
    seed = _resolve_seed(args.seed, parser)
    training = run_training(protocol_cfg, agent_cfg, seed)
    cohort = Cohort(members=(training,))
    seeds = {training.individual_id: seed}
    out = Path(args.out)
    written = [
        export_trial_log_csv(cohort, out / "trials.csv", agent=agent_cfg,
                             protocol=protocol_cfg, seeds=seeds),
        export_trial_log_json(cohort, out / "trials.json", agent=agent_cfg,
                              protocol=protocol_cfg, seeds=seeds),
        save_run_records(
            [make_run_record(seed, agent_cfg, protocol_cfg, metrics_cfg,
                             training)],
            out / "runs.jsonl"),
    ]
    _summarize(training)
    for path in written:
        print(f"wrote {path}")
    return 0


def _cmd_cohort(args, parser) -> int:
    agent_cfg, protocol_cfg, metrics_cfg = _load_configs(args.config)
    cohort = run_experiment_executions(
        agent_cfg, protocol_cfg, args.sessions, args.executions,
        args.seed_base, stop_on_success=args.stop_on_success,
        fresh_per_session=args.fresh_per_session, workers=args.workers)
    seeds = {m.individual_id: args.seed_base + i
             for i, m in enumerate(cohort.members)}
    out = Path(args.out)
    records = [
        make_run_record(seeds[m.individual_id], agent_cfg, protocol_cfg,
                        metrics_cfg, m, n_sessions=args.sessions,
                        stop_on_success=args.stop_on_success,
                        fresh_per_session=args.fresh_per_session)
        for m in cohort.members
    ]
    written = [
        export_trial_log_csv(cohort, out / "trials.csv", agent=agent_cfg,
                             protocol=protocol_cfg, seeds=seeds),
        save_run_records(records, out / "runs.jsonl"),
    ]
    for member in cohort.members:
        _summarize(member)
    for path in written:
        print(f"wrote {path}")
    return 0


def _single_member(path: str):
    cohort, _ = read_trial_log(path)
    if len(cohort.members) != 1:
        raise TrialLogError(
            f"{path} holds {len(cohort.members)} individuals; "
            f"compare expects one per log")
    return cohort.members[0]


def _cmd_compare(args, parser) -> int:
    dist = distance_by_name(args.distance)
    a = _single_member(args.a)
    b = _single_member(args.b)
    shared = sorted({s.index for s in a.sessions}
                    & {s.index for s in b.sessions})
    if not shared:
        raise TrialLogError(
            f"{a.individual_id} and {b.individual_id} share no "
            f"session indices")
    rows = [
        (j, individual_distance(a.session(j), b.session(j), args.delta,
                                dist))
        for j in shared
    ]
    mean = sum(d for _, d in rows) / len(rows)
    write_compare_csv(args.out, rows, delta=args.delta,
                      distance=args.distance, a=a.individual_id,
                      b=b.individual_id, mean=mean)
    print(f"{a.individual_id} vs {b.individual_id}: mean distance "
          f"{mean:.6f} over {len(rows)} shared sessions")
    print(f"wrote {args.out}")
    return 0


def _cmd_group_compare(args, parser) -> int:
    paths = sorted(globmod.glob(args.logs, recursive=True))
    if not paths:
        raise TrialLogError(f"no files match {args.logs!r}")
    members = []
    seen = set()
    for path in paths:
        cohort, _ = read_trial_log(path)
        for member in cohort.members:
            if member.individual_id in seen:
                raise TrialLogError(
                    f"duplicate individual {member.individual_id!r} "
                    f"across logs")
            seen.add(member.individual_id)
            members.append(member)
    matrix = pooled_session_matrix(Cohort(members=tuple(members)),
                                   args.delta)
    write_distance_matrix_csv(args.out, matrix)
    n = len(matrix.labels)
    print(f"pooled {len(members)} individuals into a {n}x{n} "
          f"session matrix")
    print(f"wrote {args.out}")
    return 0


def _cmd_figure(args, parser) -> int:
    log = find_trial_log(args.in_dir)
    cohort, meta = read_trial_log(log)
    seeds = cohort_seeds(cohort, meta)
    written = emit_figure_data(cohort, args.which, args.delta, args.out,
                               seeds=seeds)
    for path in written:
        print(f"wrote {path}")
    return 0


def _cmd_import(args, parser) -> int:
    cohort = import_trial_log(args.path, args.format)
    total_sessions = sum(len(m.sessions) for m in cohort.members)
    total_trials = sum(len(s.trials) for m in cohort.members
                       for s in m.sessions)
    print(f"imported {len(cohort.members)} individual(s), "
          f"{total_sessions} session(s), {total_trials} trial(s)")
    for member in cohort.members:
        _summarize(member)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rodentsim",
        description="Simulated operant-conditioning trainings and "
                    "behavioral-similarity analysis.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one training to criterion")
    p.add_argument("--config", help="TOML config file (defaults otherwise)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("cohort",
                       help="run a fixed grid of independent executions")
    p.add_argument("--config", help="TOML config file (defaults otherwise)")
    p.add_argument("--executions", type=int, required=True)
    p.add_argument("--sessions", type=int, required=True)
    p.add_argument("--seed-base", type=int, required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--stop-on-success", action="store_true",
                   help="stop executions at the success criterion instead "
                        "of completing the session grid")
    p.add_argument("--fresh-per-session", action="store_true",
                   help="reset the learner before every session")
    p.add_argument("--workers", type=int, default=1,
                   help="parallel training processes")
    p.set_defaults(func=_cmd_cohort)

    p = sub.add_parser("compare",
                       help="distance between two logs, session by session")
    p.add_argument("--a", required=True, help="first trial log (csv/json)")
    p.add_argument("--b", required=True, help="second trial log (csv/json)")
    p.add_argument("--delta", type=int, default=DEFAULT_DELTA)
    p.add_argument("--distance", default="match")
    p.add_argument("--out", required=True, help="output CSV")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("group-compare",
                       help="pooled per-session distance matrix over logs")
    p.add_argument("--logs", required=True,
                   help="glob of trial logs (quote it)")
    p.add_argument("--delta", type=int, default=DEFAULT_DELTA)
    p.add_argument("--out", required=True, help="output CSV")
    p.set_defaults(func=_cmd_group_compare)

    p = sub.add_parser("figure", help="emit CSV data behind a figure")
    p.add_argument("--which", required=True,
                   choices=("fig2", "fig3", "fig4"))
    p.add_argument("--in", dest="in_dir", required=True,
                   help="run directory (or a trial log file)")
    p.add_argument("--delta", type=int, default=DEFAULT_DELTA)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_figure)

    p = sub.add_parser("import", help="load and validate a trial log")
    p.add_argument("--path", required=True)
    p.add_argument("--format", required=True, choices=("csv", "json"))
    p.set_defaults(func=_cmd_import)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except (RodentsimError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
