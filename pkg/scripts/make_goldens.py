"""Regenerate the worked example files under docs/examples/.

Every file is produced deterministically: fixed seeds, a pinned
``created_at`` stamp, and small configs so the examples stay readable.
``tests/test_goldens.py`` rebuilds them into a temp directory and
byte-compares against the committed copies, so this script is the
single source of truth for the documented formats.

Usage:
    python scripts/make_goldens.py [output_dir]
"""

import sys
from pathlib import Path

from rodentsim.agent import AgentConfig
from rodentsim.config import MetricsConfig, write_default_config
from rodentsim.io import (
    export_trial_log_csv,
    export_trial_log_json,
    make_run_record,
    save_run_records,
    write_compare_csv,
    write_distance_matrix_csv,
    write_series_csv,
)
from rodentsim.metrics import (
    ItemLabel,
    distance_matrix,
    individual_distance,
    windowed_series,
)
from rodentsim.model import Cohort
from rodentsim.protocol import ProtocolConfig, run_training

STAMP = "2026-08-15T00:00:00Z"
DELTA = 4

DEFAULT_OUT = Path(__file__).resolve().parent.parent / "docs" / "examples"


def build(out_dir):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    agent = AgentConfig()
    protocol = ProtocolConfig(trials_per_session=12)
    metrics = MetricsConfig(delta=DELTA)

    write_default_config(out / "config.toml")

    members = tuple(
        run_training(protocol, agent, seed, n_sessions=2,
                     stop_on_success=False)
        for seed in (7, 8))
    cohort = Cohort(members=members)
    seeds = {m.individual_id: s for m, s in zip(members, (7, 8))}
    export_trial_log_csv(cohort, out / "trials.csv", agent=agent,
                         protocol=protocol, seeds=seeds, created_at=STAMP)
    export_trial_log_json(cohort, out / "trials.json", agent=agent,
                          protocol=protocol, seeds=seeds, created_at=STAMP)

    save_run_records(
        [make_run_record(7, agent, protocol, metrics, members[0],
                         n_sessions=2, stop_on_success=False,
                         created_at=STAMP)],
        out / "runs.jsonl")

    series = windowed_series(members[0].sessions[0], DELTA)
    write_series_csv(out / "series.csv", series.values, DELTA,
                     individual_id=members[0].individual_id,
                     session_index=1, created_at=STAMP)

    items = [(ItemLabel(m.individual_id, j), m.sessions[j - 1])
             for m in members for j in (1, 2)]
    write_distance_matrix_csv(out / "matrix.csv",
                              distance_matrix(items, DELTA),
                              created_at=STAMP)

    rows = [(j, individual_distance(members[0].sessions[j - 1],
                                    members[1].sessions[j - 1], DELTA))
            for j in (1, 2)]
    mean = sum(d for _, d in rows) / len(rows)
    write_compare_csv(out / "compare.csv", rows, delta=DELTA,
                      distance="match", a=members[0].individual_id,
                      b=members[1].individual_id, mean=mean,
                      created_at=STAMP)
    return out


if __name__ == "__main__":
    target = build(sys.argv[1] if len(sys.argv) > 1 else DEFAULT_OUT)
    for path in sorted(target.iterdir()):
        print(f"wrote {path}")
