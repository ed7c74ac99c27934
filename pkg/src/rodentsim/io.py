"""Persistence, trial-log import, and experiment orchestration.

File formats (a committed golden example of each lives under
docs/examples/):

* Trial logs, CSV or JSON. The CSV opens with ``# key = <json>``
  metadata lines, then a header row, then one row per trial. The JSON
  document carries the same content as one object. Metadata snapshots
  the configs and per-individual seed/success info, so an exported log
  fully determines how to reproduce it.
* Run records, JSONL: one self-contained record per training, holding
  the seed, both config snapshots, the metric parameters and the full
  training sequence.
* Distance matrices, windowed series and comparison tables: CSV with
  the same metadata-line convention.

``created_at`` stamps are ISO-8601 UTC; readers carry them through but
nothing compares them.
"""

from __future__ import annotations

import csv
import glob as globmod
import json
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence, Union

import numpy as np

from .agent import AgentConfig
from .config import (
    MetricsConfig,
    agent_config_from_dict,
    agent_config_to_dict,
    metrics_config_from_dict,
    metrics_config_to_dict,
    protocol_config_from_dict,
    protocol_config_to_dict,
)
from .errors import (
    TrialLogError,
    TrialLogIntegrityError,
    TrialLogParseError,
)
from .metrics import (
    DistanceMatrix,
    ItemLabel,
    accuracy_curve,
    distance_matrix,
    group_series,
    match_distance,
)
from .model import (
    Cohort,
    Outcome,
    Response,
    Session,
    Stimulus,
    TrainingSequence,
    Trial,
)
from .protocol import ProtocolConfig, run_training

TRIAL_LOG_COLUMNS = ("individual_id", "session_index", "trial_index",
                     "stimulus", "response", "outcome")

_FORMAT_TRIAL_LOG = "rodentsim-trial-log"
_FORMAT_RUN = "rodentsim-run"
_FORMAT_MATRIX = "rodentsim-distance-matrix"
_FORMAT_SERIES = "rodentsim-series"
_FORMAT_COMPARE = "rodentsim-compare"
_VERSION = 1

PathLike = Union[str, Path]


def _utcnow() -> str:
    now = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return now.replace("+00:00", "Z")


def namespace_individual_id(raw: str) -> str:
    """Prefix un-namespaced ids with "real:"; imported lab data then can
    never collide with simulated individuals ("sim:...")."""
    if raw.startswith("sim:") or raw.startswith("real:"):
        return raw
    return f"real:{raw}"


def _safe_filename(value: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]+", "-", value)


# ---------------------------------------------------------------------------
# metadata-line convention shared by every CSV format


def _write_meta(fh, meta: dict[str, Any]) -> None:
    for key, value in meta.items():
        if value is None:
            continue
        fh.write(f"# {key} = {json.dumps(value)}\n")


def _read_meta_and_rows(
    path: PathLike,
) -> tuple[dict[str, Any], list[list[str]], list[Optional[int]]]:
    """Split a CSV file into its metadata dict and its data rows.

    Returns (meta, rows, line numbers); line numbers are None when a
    quoted field spans lines and the mapping is ambiguous.
    """
    meta: dict[str, Any] = {}
    data_lines: list[str] = []
    linenos: list[int] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for lineno, line in enumerate(fh, start=1):
            if line.startswith("#"):
                body = line[1:].strip()
                if " = " in body:
                    key, _, raw = body.partition(" = ")
                    try:
                        meta[key.strip()] = json.loads(raw)
                    except json.JSONDecodeError:
                        raise TrialLogParseError(
                            f"bad metadata value for {key.strip()!r}",
                            lineno) from None
                continue
            if line.strip() == "":
                continue
            data_lines.append(line)
            linenos.append(lineno)
    rows = list(csv.reader(data_lines))
    numbers: list[Optional[int]]
    if len(rows) == len(data_lines):
        numbers = list(linenos)
    else:
        numbers = [None] * len(rows)
    return meta, rows, numbers


# ---------------------------------------------------------------------------
# trial logs


def _individuals_meta(cohort: Cohort,
                      seeds: Optional[dict[str, int]]) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for member in cohort.members:
        info: dict[str, Any] = {
            "trained": member.trained,
            "sessions_to_criterion": member.sessions_to_criterion,
        }
        if seeds and member.individual_id in seeds:
            info["seed"] = seeds[member.individual_id]
        out[member.individual_id] = info
    return out


def export_trial_log_csv(cohort: Cohort, path: PathLike, *,
                         agent: Optional[AgentConfig] = None,
                         protocol: Optional[ProtocolConfig] = None,
                         seeds: Optional[dict[str, int]] = None,
                         created_at: Optional[str] = None) -> Path:
    """Write a cohort as a flat per-trial CSV with metadata headers."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    meta: dict[str, Any] = {
        "format": _FORMAT_TRIAL_LOG,
        "version": _VERSION,
        "created_at": created_at or _utcnow(),
        "agent": agent_config_to_dict(agent) if agent else None,
        "protocol": protocol_config_to_dict(protocol) if protocol else None,
        "individuals": _individuals_meta(cohort, seeds),
    }
    with open(path, "w", encoding="utf-8", newline="") as fh:
        _write_meta(fh, meta)
        writer = csv.writer(fh)
        writer.writerow(TRIAL_LOG_COLUMNS)
        for member in cohort.members:
            for session in member.sessions:
                for t, trial in enumerate(session.trials, start=1):
                    writer.writerow((
                        member.individual_id, session.index, t,
                        trial.stimulus.label, trial.response.label,
                        trial.outcome.label))
    return path


def _sequence_to_dict(member: TrainingSequence,
                      seed: Optional[int] = None) -> dict[str, Any]:
    d: dict[str, Any] = {
        "individual_id": member.individual_id,
        "trained": member.trained,
        "sessions_to_criterion": member.sessions_to_criterion,
        "sessions": [
            {
                "index": session.index,
                "trials": [
                    {
                        "trial_index": t,
                        "stimulus": trial.stimulus.label,
                        "response": trial.response.label,
                        "outcome": trial.outcome.label,
                    }
                    for t, trial in enumerate(session.trials, start=1)
                ],
            }
            for session in member.sessions
        ],
    }
    if seed is not None:
        d["seed"] = seed
    return d


def export_trial_log_json(cohort: Cohort, path: PathLike, *,
                          agent: Optional[AgentConfig] = None,
                          protocol: Optional[ProtocolConfig] = None,
                          seeds: Optional[dict[str, int]] = None,
                          created_at: Optional[str] = None) -> Path:
    """Write a cohort as one JSON document (same content as the CSV)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    seeds = seeds or {}
    doc: dict[str, Any] = {
        "format": _FORMAT_TRIAL_LOG,
        "version": _VERSION,
        "created_at": created_at or _utcnow(),
    }
    if agent is not None:
        doc["agent"] = agent_config_to_dict(agent)
    if protocol is not None:
        doc["protocol"] = protocol_config_to_dict(protocol)
    doc["individuals"] = [
        _sequence_to_dict(m, seeds.get(m.individual_id))
        for m in cohort.members
    ]
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
    return path


def _parse_trial_fields(stim: str, resp: str, outc: str,
                        lineno: Optional[int]) -> Trial:
    try:
        return Trial(Stimulus.from_label(stim), Response.from_label(resp),
                     Outcome.from_label(outc))
    except ValueError as exc:
        raise TrialLogParseError(str(exc), lineno) from None


def _assemble_cohort(per_individual: dict[str, dict[int, list[Trial]]],
                     individuals_meta: dict[str, Any]) -> Cohort:
    members = []
    for iid, by_session in per_individual.items():
        sessions = tuple(
            Session(index=i, trials=tuple(by_session[i]))
            for i in sorted(by_session))
        info = individuals_meta.get(iid, {})
        if not isinstance(info, dict):
            info = {}
        try:
            members.append(TrainingSequence(
                individual_id=iid,
                sessions=sessions,
                trained=bool(info.get("trained", False)),
                sessions_to_criterion=info.get("sessions_to_criterion"),
            ))
        except ValueError as exc:
            raise TrialLogIntegrityError(f"{iid}: {exc}") from None
    if not members:
        raise TrialLogError("log contains no trials")
    return Cohort(members=tuple(members))


def _import_csv(path: PathLike) -> tuple[Cohort, dict[str, Any]]:
    meta, rows, linenos = _read_meta_and_rows(path)
    if not rows:
        raise TrialLogError(f"{path}: log contains no trials")
    header, rows = rows[0], rows[1:]
    header_line, linenos = linenos[0], linenos[1:]
    if tuple(h.strip() for h in header) != TRIAL_LOG_COLUMNS:
        raise TrialLogParseError(
            f"expected header {','.join(TRIAL_LOG_COLUMNS)}", header_line)

    raw_individuals = meta.get("individuals", {})
    individuals_meta = {
        namespace_individual_id(k): v for k, v in raw_individuals.items()
    } if isinstance(raw_individuals, dict) else {}

    per_individual: dict[str, dict[int, list[Trial]]] = {}
    for row, lineno in zip(rows, linenos):
        if len(row) != 6:
            raise TrialLogParseError(
                f"expected 6 fields, got {len(row)}", lineno)
        raw_id, s_idx, t_idx, stim, resp, outc = (f.strip() for f in row)
        try:
            session_index = int(s_idx)
            trial_index = int(t_idx)
        except ValueError:
            raise TrialLogParseError(
                f"non-integer index in ({s_idx!r}, {t_idx!r})",
                lineno) from None
        if session_index < 1 or trial_index < 1:
            raise TrialLogParseError(
                f"indices must be >= 1, got ({session_index}, {trial_index})",
                lineno)
        iid = namespace_individual_id(raw_id)
        trial = _parse_trial_fields(stim, resp, outc, lineno)
        trials = per_individual.setdefault(iid, {}).setdefault(
            session_index, [])
        expected = len(trials) + 1
        if trial_index != expected:
            where = f" at line {lineno}" if lineno else ""
            raise TrialLogIntegrityError(
                f"{iid} session {session_index}: expected trial_index "
                f"{expected}, got {trial_index}{where}")
        trials.append(trial)

    return _assemble_cohort(per_individual, individuals_meta), meta


def _import_json(path: PathLike) -> tuple[Cohort, dict[str, Any]]:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise TrialLogParseError(exc.msg, exc.lineno) from None
    if not isinstance(doc, dict) or "individuals" not in doc:
        raise TrialLogParseError("missing top-level 'individuals' list")
    if doc.get("format", _FORMAT_TRIAL_LOG) != _FORMAT_TRIAL_LOG:
        raise TrialLogParseError(
            f"not a trial log: format = {doc.get('format')!r}")

    per_individual: dict[str, dict[int, list[Trial]]] = {}
    individuals_meta: dict[str, Any] = {}
    for entry in doc["individuals"]:
        if not isinstance(entry, dict) or "individual_id" not in entry:
            raise TrialLogParseError("individual entry lacks individual_id")
        iid = namespace_individual_id(str(entry["individual_id"]))
        if iid in per_individual:
            raise TrialLogIntegrityError(f"duplicate individual {iid}")
        by_session: dict[int, list[Trial]] = {}
        for sess in entry.get("sessions", []):
            index = sess.get("index")
            if not isinstance(index, int) or index < 1:
                raise TrialLogParseError(
                    f"{iid}: bad session index {index!r}")
            if index in by_session:
                raise TrialLogIntegrityError(
                    f"{iid}: duplicate session {index}")
            trials: list[Trial] = []
            for t in sess.get("trials", []):
                expected = len(trials) + 1
                if t.get("trial_index") != expected:
                    raise TrialLogIntegrityError(
                        f"{iid} session {index}: expected trial_index "
                        f"{expected}, got {t.get('trial_index')!r}")
                trials.append(_parse_trial_fields(
                    str(t.get("stimulus")), str(t.get("response")),
                    str(t.get("outcome")), None))
            if not trials:
                raise TrialLogIntegrityError(
                    f"{iid}: session {index} has no trials")
            by_session[index] = trials
        per_individual[iid] = by_session
        individuals_meta[iid] = {
            "trained": entry.get("trained", False),
            "sessions_to_criterion": entry.get("sessions_to_criterion"),
            "seed": entry.get("seed"),
        }

    meta = {k: v for k, v in doc.items() if k != "individuals"}
    meta["individuals"] = individuals_meta
    return _assemble_cohort(per_individual, individuals_meta), meta


def read_trial_log(path: PathLike,
                   format: Optional[str] = None,
                   ) -> tuple[Cohort, dict[str, Any]]:
    """Load a trial log plus its metadata dict; format inferred from the
    suffix when not given."""
    if format is None:
        suffix = Path(path).suffix.lower()
        format = {".csv": "csv", ".json": "json"}.get(suffix)
        if format is None:
            raise TrialLogError(
                f"cannot infer format of {path}; pass format='csv' or 'json'")
    if format == "csv":
        return _import_csv(path)
    if format == "json":
        return _import_json(path)
    raise ValueError(f"format must be 'csv' or 'json', got {format!r}")


def import_trial_log(path: PathLike, format: str) -> Cohort:
    """Load a trial log as a cohort, grouped by individual with sessions
    in index order. Un-namespaced ids come back prefixed "real:"."""
    cohort, _ = read_trial_log(path, format)
    return cohort


def find_trial_log(directory: PathLike) -> Path:
    """The trial log inside a run directory (trials.csv, then trials.json)."""
    directory = Path(directory)
    if directory.is_file():
        return directory
    for name in ("trials.csv", "trials.json"):
        candidate = directory / name
        if candidate.exists():
            return candidate
    raise TrialLogError(f"no trials.csv or trials.json under {directory}")


# ---------------------------------------------------------------------------
# run records (JSONL)


@dataclass(frozen=True)
class RunRecord:
    """Everything needed to reproduce and analyze one training run."""

    run_id: str
    seed: int
    agent: AgentConfig
    protocol: ProtocolConfig
    metrics: MetricsConfig
    training: TrainingSequence
    mode: dict[str, Any]
    created_at: str

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "format": _FORMAT_RUN,
            "version": _VERSION,
            "run_id": self.run_id,
            "seed": self.seed,
            "created_at": self.created_at,
            "agent": agent_config_to_dict(self.agent),
            "protocol": protocol_config_to_dict(self.protocol),
            "metrics": metrics_config_to_dict(self.metrics),
            "mode": dict(self.mode),
            "training": _sequence_to_dict(self.training),
        }

    @classmethod
    def from_json_dict(cls, doc: dict[str, Any]) -> "RunRecord":
        if doc.get("format") != _FORMAT_RUN:
            raise TrialLogParseError(
                f"not a run record: format = {doc.get('format')!r}")
        training = _training_from_dict(doc["training"])
        return cls(
            run_id=str(doc["run_id"]),
            seed=int(doc["seed"]),
            agent=agent_config_from_dict(doc.get("agent", {})),
            protocol=protocol_config_from_dict(doc.get("protocol", {})),
            metrics=metrics_config_from_dict(doc.get("metrics", {})),
            training=training,
            mode=dict(doc.get("mode", {})),
            created_at=str(doc.get("created_at", "")),
        )


def _training_from_dict(entry: dict[str, Any]) -> TrainingSequence:
    sessions = []
    for sess in entry.get("sessions", []):
        trials = tuple(
            _parse_trial_fields(t["stimulus"], t["response"], t["outcome"],
                                None)
            for t in sess["trials"])
        sessions.append(Session(index=int(sess["index"]), trials=trials))
    return TrainingSequence(
        individual_id=str(entry["individual_id"]),
        sessions=tuple(sessions),
        trained=bool(entry.get("trained", False)),
        sessions_to_criterion=entry.get("sessions_to_criterion"),
    )


def make_run_record(seed: int, agent: AgentConfig, protocol: ProtocolConfig,
                    metrics: MetricsConfig, training: TrainingSequence, *,
                    n_sessions: Optional[int] = None,
                    stop_on_success: bool = True,
                    fresh_per_session: bool = False,
                    created_at: Optional[str] = None) -> RunRecord:
    mode = {
        "n_sessions": n_sessions,
        "stop_on_success": stop_on_success,
        "fresh_per_session": fresh_per_session,
    }
    return RunRecord(
        run_id=f"run-{seed}", seed=seed, agent=agent, protocol=protocol,
        metrics=metrics, training=training, mode=mode,
        created_at=created_at or _utcnow())


def replay_run(record: RunRecord) -> TrainingSequence:
    """Re-run a record's training from its configs and seed; the result
    must equal the recorded sequence."""
    mode = record.mode
    return run_training(
        record.protocol, record.agent, record.seed,
        n_sessions=mode.get("n_sessions"),
        stop_on_success=bool(mode.get("stop_on_success", True)),
        fresh_per_session=bool(mode.get("fresh_per_session", False)),
        individual_id=record.training.individual_id)


def save_run_records(records: Iterable[RunRecord], path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record.to_json_dict(),
                                separators=(",", ":")))
            fh.write("\n")
    return path


def load_run_records(path: PathLike) -> list[RunRecord]:
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                doc = json.loads(line)
            except json.JSONDecodeError as exc:
                raise TrialLogParseError(exc.msg, lineno) from None
            records.append(RunRecord.from_json_dict(doc))
    return records


# ---------------------------------------------------------------------------
# series / matrix / comparison CSVs


def write_series_csv(path: PathLike, values: Sequence[float], delta: int, *,
                     kind: str = "windowed_series",
                     individual_id: Optional[str] = None,
                     session_index: Optional[int] = None,
                     group_size: Optional[int] = None,
                     seeds: Optional[list[int]] = None,
                     created_at: Optional[str] = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    meta = {
        "format": _FORMAT_SERIES,
        "version": _VERSION,
        "created_at": created_at or _utcnow(),
        "kind": kind,
        "delta": delta,
        "individual_id": individual_id,
        "session_index": session_index,
        "group_size": group_size,
        "seeds": seeds,
    }
    with open(path, "w", encoding="utf-8", newline="") as fh:
        _write_meta(fh, meta)
        writer = csv.writer(fh)
        writer.writerow(("t", "value"))
        for t, value in enumerate(values):
            writer.writerow((t, repr(float(value))))
    return path


def read_series_csv(path: PathLike) -> tuple[dict[str, Any], np.ndarray]:
    meta, rows, linenos = _read_meta_and_rows(path)
    if not rows or [h.strip() for h in rows[0]] != ["t", "value"]:
        raise TrialLogParseError("expected header t,value",
                                 linenos[0] if linenos else None)
    values = []
    for row, lineno in zip(rows[1:], linenos[1:]):
        if len(row) != 2:
            raise TrialLogParseError(
                f"expected 2 fields, got {len(row)}", lineno)
        try:
            t = int(row[0])
            values.append(float(row[1]))
        except ValueError:
            raise TrialLogParseError(f"bad row {row!r}", lineno) from None
        if t != len(values) - 1:
            raise TrialLogIntegrityError(
                f"expected t={len(values) - 1}, got {t}")
    return meta, np.asarray(values, dtype=np.float64)


def _label_to_dict(label: ItemLabel) -> dict[str, Any]:
    return {
        "individual_id": label.individual_id,
        "session_index": label.session_index,
        "execution_index": label.execution_index,
    }


def _label_from_dict(d: dict[str, Any]) -> ItemLabel:
    return ItemLabel(
        individual_id=str(d["individual_id"]),
        session_index=int(d["session_index"]),
        execution_index=(None if d.get("execution_index") is None
                         else int(d["execution_index"])),
    )


def write_distance_matrix_csv(path: PathLike, matrix: DistanceMatrix, *,
                              seeds: Optional[list[int]] = None,
                              created_at: Optional[str] = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    meta = {
        "format": _FORMAT_MATRIX,
        "version": _VERSION,
        "created_at": created_at or _utcnow(),
        "delta": matrix.delta,
        "distance": matrix.distance,
        "seeds": seeds,
        "labels": [_label_to_dict(lb) for lb in matrix.labels],
    }
    names = [str(lb) for lb in matrix.labels]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        _write_meta(fh, meta)
        writer = csv.writer(fh)
        writer.writerow(["label"] + names)
        for name, row in zip(names, matrix.entries):
            writer.writerow([name] + [repr(float(x)) for x in row])
    return path


def read_distance_matrix_csv(path: PathLike) -> DistanceMatrix:
    meta, rows, _ = _read_meta_and_rows(path)
    if meta.get("format") != _FORMAT_MATRIX:
        raise TrialLogParseError(
            f"not a distance matrix: format = {meta.get('format')!r}")
    labels = tuple(_label_from_dict(d) for d in meta.get("labels", []))
    n = len(labels)
    if not rows or len(rows) != n + 1:
        raise TrialLogParseError(
            f"expected {n + 1} data rows, found {len(rows)}")
    entries = np.zeros((n, n), dtype=np.float64)
    for i, row in enumerate(rows[1:]):
        if len(row) != n + 1:
            raise TrialLogParseError(
                f"row {i}: expected {n + 1} fields, got {len(row)}")
        entries[i] = [float(x) for x in row[1:]]
    return DistanceMatrix(labels=labels, entries=entries,
                          delta=int(meta.get("delta", 0) or 0),
                          distance=str(meta.get("distance", "match")))


def write_compare_csv(path: PathLike,
                      rows: Sequence[tuple[int, float]], *,
                      delta: int, distance: str, a: str, b: str,
                      mean: float,
                      created_at: Optional[str] = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    meta = {
        "format": _FORMAT_COMPARE,
        "version": _VERSION,
        "created_at": created_at or _utcnow(),
        "delta": delta,
        "distance": distance,
        "a": a,
        "b": b,
        "mean_distance": mean,
    }
    with open(path, "w", encoding="utf-8", newline="") as fh:
        _write_meta(fh, meta)
        writer = csv.writer(fh)
        writer.writerow(("session_index", "distance"))
        for index, value in rows:
            writer.writerow((index, repr(float(value))))
    return path


def read_compare_csv(
    path: PathLike,
) -> tuple[dict[str, Any], list[tuple[int, float]]]:
    meta, rows, linenos = _read_meta_and_rows(path)
    if meta.get("format") != _FORMAT_COMPARE:
        raise TrialLogParseError(
            f"not a comparison table: format = {meta.get('format')!r}")
    if not rows or [h.strip() for h in rows[0]] != ["session_index",
                                                    "distance"]:
        raise TrialLogParseError("expected header session_index,distance",
                                 linenos[0] if linenos else None)
    out = []
    for row, lineno in zip(rows[1:], linenos[1:]):
        try:
            out.append((int(row[0]), float(row[1])))
        except (ValueError, IndexError):
            raise TrialLogParseError(f"bad row {row!r}", lineno) from None
    return meta, out


# ---------------------------------------------------------------------------
# experiment orchestration


def _train_one(args) -> TrainingSequence:
    protocol, agent, seed, n_sessions, stop, fresh = args
    return run_training(protocol, agent, seed, n_sessions=n_sessions,
                        stop_on_success=stop, fresh_per_session=fresh)


def run_experiment_executions(agent_config: AgentConfig,
                              protocol_config: ProtocolConfig,
                              sessions: int, executions: int,
                              seed_base: int, *,
                              stop_on_success: bool = False,
                              fresh_per_session: bool = False,
                              workers: int = 1) -> Cohort:
    """Run ``executions`` independent trainings of ``sessions`` sessions
    each, seeded seed_base, seed_base+1, ... Identical configs give the
    executions identical initial conditions; the seeds alone differ.

    By default a fixed session grid is kept even when an execution hits
    the success criterion early (exploration then freezes at its
    success-time value); ``stop_on_success`` restores early stopping.
    """
    if executions < 1:
        raise ValueError(f"executions must be >= 1, got {executions}")
    if sessions < 1:
        raise ValueError(f"sessions must be >= 1, got {sessions}")
    args = [
        (protocol_config, agent_config, seed_base + i, sessions,
         stop_on_success, fresh_per_session)
        for i in range(executions)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            members = list(pool.map(_train_one, args))
    else:
        members = [_train_one(a) for a in args]
    return Cohort(members=tuple(members))


def cohort_seeds(cohort: Cohort,
                 meta: Optional[dict[str, Any]] = None) -> Optional[list[int]]:
    """Per-member seeds from log metadata, or None if any are unknown."""
    individuals = (meta or {}).get("individuals", {})
    seeds = []
    for member in cohort.members:
        info = individuals.get(member.individual_id, {})
        seed = info.get("seed") if isinstance(info, dict) else None
        if seed is None:
            return None
        seeds.append(int(seed))
    return seeds


# ---------------------------------------------------------------------------
# figure data


FIGURE_SESSIONS = (1, 6, 12)


def pooled_session_matrix(cohort: Cohort, delta: int) -> DistanceMatrix:
    """Distance matrix between per-session-index pooled series.

    Each session index present anywhere in the cohort becomes one item,
    pooling every member that reached that index.
    """
    indices = sorted({s.index for m in cohort.members for s in m.sessions})
    if len(indices) < 2:
        raise ValueError(
            "pooled session comparison needs at least 2 session indices")
    items = []
    for j in indices:
        group = [m.sessions[j - 1] for m in cohort.members
                 if j <= len(m.sessions)]
        items.append((ItemLabel("group", j, None),
                      group_series(group, delta)))
    return distance_matrix(items, delta, match_distance)


def _session_or_error(member: TrainingSequence, index: int) -> Session:
    try:
        return member.session(index)
    except KeyError as exc:
        raise ValueError(str(exc.args[0])) from None


def emit_figure_data(cohort: Cohort, which: str, delta: int,
                     out_dir: PathLike, *,
                     fig_sessions: Sequence[int] = FIGURE_SESSIONS,
                     seeds: Optional[list[int]] = None,
                     created_at: Optional[str] = None) -> list[Path]:
    """Write the CSV data behind one of the three summary figures.

    fig2: per-individual smoothed accuracy curves for the selected
    sessions (default 1, 6 and 12). fig3: the all-pairs distance matrix
    over (execution, session) items for those sessions. fig4: the
    distance matrix between per-session-index pooled series over all
    session indices present in the cohort.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    if which == "fig2":
        for member in cohort.members:
            for j in fig_sessions:
                curve = accuracy_curve(_session_or_error(member, j), delta)
                name = f"fig2_{_safe_filename(member.individual_id)}" \
                       f"_session{j}.csv"
                written.append(write_series_csv(
                    out / name, curve.values, delta,
                    kind="accuracy_curve",
                    individual_id=member.individual_id,
                    session_index=j, seeds=seeds, created_at=created_at))
        return written

    if which == "fig3":
        items = []
        for e, member in enumerate(cohort.members, start=1):
            for j in fig_sessions:
                items.append((
                    ItemLabel(member.individual_id, j, e),
                    _session_or_error(member, j)))
        matrix = distance_matrix(items, delta, match_distance)
        written.append(write_distance_matrix_csv(
            out / "fig3_matrix.csv", matrix, seeds=seeds,
            created_at=created_at))
        return written

    if which == "fig4":
        matrix = pooled_session_matrix(cohort, delta)
        written.append(write_distance_matrix_csv(
            out / "fig4_matrix.csv", matrix, seeds=seeds,
            created_at=created_at))
        return written

    raise ValueError(f"unknown figure {which!r}; expected fig2, fig3 or fig4")
