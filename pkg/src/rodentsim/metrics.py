"""Behavioral similarity metrics over trial outcome sequences.

Everything here reduces a session to its 0/1 outcome sequence, smooths it
with a sliding window of Delta trials, and compares the resulting series
of correct-rates. A correct-rate p stands for the two-point distribution
(p, 1-p) over {correct, incorrect}; distances between rates are distances
between those distributions. Match Distance (the L1 metric, shipped
default) is one choice; anything with the same signature can be slotted
in through the ``DISTANCES`` registry.

Window sums are integer trial counts divided once at the end, so equal
inputs produce bit-equal series and the N=1 group reduces to the
individual computation exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .backend import kernels
from .errors import InsufficientDataError
from .model import Session

DistanceFn = Callable[[float, float], float]


def _frozen(values: np.ndarray) -> np.ndarray:
    values = np.ascontiguousarray(values, dtype=np.float64)
    values.setflags(write=False)
    return values


@dataclass(frozen=True, eq=False)
class WindowedSeries:
    """Correct-rates of one session's sliding windows.

    ``values[t]`` covers trials t+1..t+delta (1-based); the series is
    empty when the session is shorter than the window.
    """

    delta: int
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values))

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True, eq=False)
class GroupSeries:
    """Pooled correct-rates of N same-index sessions, truncated to the
    shortest member before windowing."""

    delta: int
    size: int
    session_index: int
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values))

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class ItemLabel:
    """Provenance tag for one row/column of a distance matrix."""

    individual_id: str
    session_index: int
    execution_index: Optional[int] = None

    def __str__(self) -> str:
        if self.execution_index is None:
            return f"{self.individual_id}/session{self.session_index}"
        return (f"{self.individual_id}/exec{self.execution_index}"
                f"/session{self.session_index}")


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    labels: tuple[ItemLabel, ...]
    entries: np.ndarray
    delta: int
    distance: str = "match"

    def __post_init__(self):
        object.__setattr__(self, "entries", _frozen(self.entries))
        n = len(self.labels)
        if self.entries.shape != (n, n):
            raise ValueError(
                f"entries shape {self.entries.shape} does not match "
                f"{n} labels")


def windowed_series(session: Session, delta: int) -> WindowedSeries:
    """Sliding-window correct-rates: value[t] = correct/delta over trials
    t+1..t+delta. Empty when the session has fewer than delta trials."""
    if delta < 1:
        raise ValueError(f"delta must be >= 1, got {delta}")
    counts = kernels().window_counts(session.outcome_codes, delta)
    return WindowedSeries(delta=delta, values=counts / delta)


def accuracy_curve(session: Session, delta: int) -> WindowedSeries:
    """Smoothed within-session accuracy; same computation as
    :func:`windowed_series`, exported under the plotting-facing name."""
    return windowed_series(session, delta)


def match_distance(p: float, q: float) -> float:
    """L1 distance between the two-point distributions (p, 1-p) and
    (q, 1-q); ranges over [0, 2]."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p}")
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"q must be in [0, 1], got {q}")
    return abs(p - q) + abs((1.0 - p) - (1.0 - q))


DISTANCES: dict[str, DistanceFn] = {"match": match_distance}


def distance_by_name(name: str) -> DistanceFn:
    try:
        return DISTANCES[name]
    except KeyError:
        known = ", ".join(sorted(DISTANCES))
        raise ValueError(f"unknown distance {name!r} (known: {known})") \
            from None


def _mean_pointwise(a: np.ndarray, b: np.ndarray, dist: DistanceFn) -> float:
    n = min(len(a), len(b))
    if dist is match_distance:
        return kernels().mean_match(a[:n], b[:n])
    total = 0.0
    for i in range(n):
        total += dist(float(a[i]), float(b[i]))
    return total / n


def individual_distance(a: Session, b: Session, delta: int,
                        dist: DistanceFn = match_distance) -> float:
    """Mean window-distance between two sessions, both truncated to the
    shorter one's length before windowing."""
    if delta < 1:
        raise ValueError(f"delta must be >= 1, got {delta}")
    length = min(len(a.trials), len(b.trials))
    if length < delta:
        raise InsufficientDataError(
            f"need at least {delta} trials in both sessions, shorter one "
            f"has {length}")
    ca = kernels().window_counts(a.outcome_codes[:length], delta)
    cb = kernels().window_counts(b.outcome_codes[:length], delta)
    return _mean_pointwise(ca / delta, cb / delta, dist)


def group_series(sessions: Sequence[Session], delta: int) -> GroupSeries:
    """Pooled correct-rate series of N sessions sharing one index.

    Members are truncated to the shortest; each value is the total
    correct count in the aligned windows divided by N*delta.
    """
    if delta < 1:
        raise ValueError(f"delta must be >= 1, got {delta}")
    members = list(sessions)
    if not members:
        raise ValueError("group must have at least one member")
    index = members[0].index
    for s in members[1:]:
        if s.index != index:
            raise ValueError(
                f"group members must share a session index, got "
                f"{index} and {s.index}")
    length = min(len(s.trials) for s in members)
    if length < delta:
        raise InsufficientDataError(
            f"group's shortest member has {length} trials, need >= {delta}")
    total = np.zeros(length - delta + 1, dtype=np.int64)
    for s in members:
        total += kernels().window_counts(s.outcome_codes[:length], delta)
    n = len(members)
    return GroupSeries(delta=delta, size=n, session_index=index,
                       values=total / (n * delta))


def group_distance(gi: GroupSeries, gj: GroupSeries,
                   dist: DistanceFn = match_distance) -> float:
    """Mean window-distance between two pooled series, aligned up to the
    shorter one."""
    if gi.delta != gj.delta:
        raise ValueError(
            f"window mismatch: {gi.delta} vs {gj.delta}")
    if len(gi) == 0 or len(gj) == 0:
        raise InsufficientDataError("cannot compare an empty series")
    return _mean_pointwise(gi.values, gj.values, dist)


MatrixItem = tuple[ItemLabel, Union[Session, GroupSeries]]


def distance_matrix(items: Sequence[MatrixItem], delta: int,
                    dist: DistanceFn = match_distance) -> DistanceMatrix:
    """All-pairs distances over labeled sessions or labeled pooled series.

    The result is exactly symmetric with a zero diagonal; each pair is
    computed once and mirrored.
    """
    items = list(items)
    if len(items) < 2:
        raise ValueError(f"need at least 2 items, got {len(items)}")
    payloads = [payload for _, payload in items]
    labels = tuple(label for label, _ in items)
    if all(isinstance(p, Session) for p in payloads):
        lengths = [len(p.trials) for p in payloads]
        values = [kernels().window_counts(p.outcome_codes, delta) / delta
                  for p in payloads]
    elif all(isinstance(p, GroupSeries) for p in payloads):
        for label, p in items:
            if p.delta != delta:
                raise ValueError(
                    f"item {label} was pooled with delta={p.delta}, "
                    f"matrix wants delta={delta}")
        lengths = [len(p) + delta - 1 for p in payloads]
        values = [p.values for p in payloads]
    else:
        raise TypeError("items must be all sessions or all pooled series")

    n = len(items)
    entries = np.zeros((n, n), dtype=np.float64)
    for i in range(n):
        for j in range(i + 1, n):
            if min(lengths[i], lengths[j]) < delta:
                raise InsufficientDataError(
                    f"pair ({labels[i]}, {labels[j]}) has fewer than "
                    f"{delta} aligned trials")
            d = _mean_pointwise(values[i], values[j], dist)
            entries[i, j] = d
            entries[j, i] = d
    name = next((k for k, v in DISTANCES.items() if v is dist),
                getattr(dist, "__name__", "custom"))
    return DistanceMatrix(labels=labels, entries=entries, delta=delta,
                          distance=name)
