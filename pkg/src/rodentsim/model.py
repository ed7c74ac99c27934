"""Domain types for operant-conditioning training data.

A training run is a sequence of sessions; a session is a sequence of
trials; a trial is one (stimulus, response, outcome) triple. These types
are plain immutable values shared by the simulator, the metrics, and the
persistence layer.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

import numpy as np


class Category(enum.Enum):
    """Taste category of a stimulus; decides which spout is rewarded."""

    SWEET = "sweet-category"
    SALT = "salt-category"


class Stimulus(enum.IntEnum):
    """The four gustatory stimuli: pure sucrose/salt and the 55/45 mixtures.

    The integer value doubles as the array code used by the kernels.
    """

    SWEET = 0
    SWEET_55 = 1
    SALT_55 = 2
    SALT = 3

    @property
    def label(self) -> str:
        return _STIMULUS_LABELS[self]

    @property
    def category(self) -> Category:
        return Category.SWEET if self <= Stimulus.SWEET_55 else Category.SALT

    @classmethod
    def from_label(cls, label: str) -> "Stimulus":
        try:
            return _STIMULI_BY_LABEL[label]
        except KeyError:
            raise ValueError(f"unknown stimulus {label!r}") from None


class Response(enum.IntEnum):
    """Lick responses: one of the two lateral spouts, or no lick at all."""

    LEFT = 0
    RIGHT = 1
    NONE = 2

    @property
    def label(self) -> str:
        return _RESPONSE_LABELS[self]

    @classmethod
    def from_label(cls, label: str) -> "Response":
        try:
            return _RESPONSES_BY_LABEL[label]
        except KeyError:
            raise ValueError(f"unknown response {label!r}") from None


class Outcome(enum.IntEnum):
    """Whether the response matched the rewarded spout.

    CORRECT is 1 so outcome codes double as correctness indicators.
    """

    INCORRECT = 0
    CORRECT = 1

    @property
    def label(self) -> str:
        return _OUTCOME_LABELS[self]

    @classmethod
    def from_label(cls, label: str) -> "Outcome":
        try:
            return _OUTCOMES_BY_LABEL[label]
        except KeyError:
            raise ValueError(f"unknown outcome {label!r}") from None


_STIMULUS_LABELS = {
    Stimulus.SWEET: "sweet",
    Stimulus.SWEET_55: "sweet_55",
    Stimulus.SALT_55: "salt_55",
    Stimulus.SALT: "salt",
}
_STIMULI_BY_LABEL = {v: k for k, v in _STIMULUS_LABELS.items()}
STIMULI = tuple(Stimulus)

_RESPONSE_LABELS = {
    Response.LEFT: "left",
    Response.RIGHT: "right",
    Response.NONE: "none",
}
_RESPONSES_BY_LABEL = {v: k for k, v in _RESPONSE_LABELS.items()}
RESPONSES = tuple(Response)

_OUTCOME_LABELS = {Outcome.INCORRECT: "incorrect", Outcome.CORRECT: "correct"}
_OUTCOMES_BY_LABEL = {v: k for k, v in _OUTCOME_LABELS.items()}


@dataclass(frozen=True)
class Trial:
    """One stimulus presentation with the recorded response and outcome."""

    stimulus: Stimulus
    response: Response
    outcome: Outcome


@dataclass(frozen=True)
class Session:
    """An ordered block of trials for one individual; indices are 1-based."""

    index: int
    trials: tuple[Trial, ...]

    def __post_init__(self):
        if self.index < 1:
            raise ValueError(f"session index must be >= 1, got {self.index}")
        if not isinstance(self.trials, tuple):
            object.__setattr__(self, "trials", tuple(self.trials))
        if len(self.trials) == 0:
            raise ValueError("a session must contain at least one trial")

    def __len__(self) -> int:
        return len(self.trials)

    @cached_property
    def stimulus_codes(self) -> np.ndarray:
        return np.fromiter((t.stimulus for t in self.trials), dtype=np.uint8,
                           count=len(self.trials))

    @cached_property
    def response_codes(self) -> np.ndarray:
        return np.fromiter((t.response for t in self.trials), dtype=np.uint8,
                           count=len(self.trials))

    @cached_property
    def outcome_codes(self) -> np.ndarray:
        """0/1 correctness indicators, one per trial."""
        return np.fromiter((t.outcome for t in self.trials), dtype=np.uint8,
                           count=len(self.trials))


@dataclass(frozen=True)
class TrainingSequence:
    """All sessions of one individual, plus the success-criterion verdict.

    ``individual_id`` is namespaced ("sim:..." for simulated executions,
    "real:..." for imported lab data) so mixed cohorts stay unambiguous.
    """

    individual_id: str
    sessions: tuple[Session, ...]
    trained: bool
    sessions_to_criterion: Optional[int] = None

    def __post_init__(self):
        if not isinstance(self.sessions, tuple):
            object.__setattr__(self, "sessions", tuple(self.sessions))
        for pos, session in enumerate(self.sessions, start=1):
            if session.index != pos:
                raise ValueError(
                    f"session indices must be consecutive from 1; "
                    f"position {pos} has index {session.index}")
        if self.trained:
            n = len(self.sessions)
            stc = self.sessions_to_criterion
            if stc is None or not 1 <= stc <= n:
                raise ValueError(
                    f"trained sequences need sessions_to_criterion in 1..{n}, "
                    f"got {stc}")
        elif self.sessions_to_criterion is not None:
            raise ValueError(
                "sessions_to_criterion must be absent for untrained sequences")

    def __len__(self) -> int:
        return len(self.sessions)

    def session(self, index: int) -> Session:
        """Return the session with the given 1-based index."""
        if not 1 <= index <= len(self.sessions):
            raise KeyError(f"{self.individual_id} has no session {index}")
        return self.sessions[index - 1]

    def accuracies(self) -> list[float]:
        return [accuracy(s) for s in self.sessions]


@dataclass(frozen=True)
class Cohort:
    """A group of training sequences compared or exported together."""

    members: tuple[TrainingSequence, ...]

    def __post_init__(self):
        if not isinstance(self.members, tuple):
            object.__setattr__(self, "members", tuple(self.members))
        if len(self.members) == 0:
            raise ValueError("a cohort must have at least one member")
        for member in self.members:
            if len(member.sessions) == 0:
                raise ValueError(
                    f"cohort member {member.individual_id!r} has no sessions")

    def __len__(self) -> int:
        return len(self.members)

    def member(self, individual_id: str) -> TrainingSequence:
        for m in self.members:
            if m.individual_id == individual_id:
                return m
        raise KeyError(f"no cohort member {individual_id!r}")


def accuracy(session: Session) -> float:
    """Fraction of correct trials in a session."""
    m = len(session.trials)
    if m == 0:
        raise ValueError("accuracy is undefined for an empty session")
    n_correct = sum(1 for t in session.trials if t.outcome is Outcome.CORRECT)
    return n_correct / m


def check_success(accuracies: Sequence[float], threshold: float = 0.70,
                  window: int = 3) -> bool:
    """True if some run of ``window`` consecutive accuracies all reach ``threshold``.

    The threshold is inclusive.
    """
    return sessions_to_criterion(accuracies, threshold, window) is not None


def sessions_to_criterion(accuracies: Sequence[float], threshold: float = 0.70,
                          window: int = 3) -> Optional[int]:
    """1-based index of the session that completes the first qualifying run.

    Returns None if no run of ``window`` consecutive accuracies at or above
    ``threshold`` exists.
    """
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    run = 0
    for pos, acc in enumerate(accuracies, start=1):
        run = run + 1 if acc >= threshold else 0
        if run >= window:
            return pos
    return None
