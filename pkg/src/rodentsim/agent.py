"""The artificial rodent: a tabular Q-learning agent.

States are the tuple of the last ``k`` presented stimuli, actions are the
three possible responses, and exploitation samples from a softmax over
the state's action values. Exploration probability follows a per-session
schedule that decays to zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .model import RESPONSES, STIMULI, Response, Stimulus

# Actions share the response carrier: lick left, lick right, or not at all.
Action = Response
ACTIONS = RESPONSES

State = tuple  # tuple of exactly ``k`` Stimulus values, most recent last


@dataclass(frozen=True)
class AgentConfig:
    """Hyperparameters of the learning model.

    ``warmup`` selects how the state window is initialized at the start
    of a training: "prefill" copies the first stimulus into every slot so
    the agent acts from trial 1; "observe" lets the first ``k - 1``
    stimuli stream past without an action (those trials are recorded with
    response "none").
    """

    k: int = 3
    alpha: float = 0.2
    gamma: float = 1.0
    eps_start: float = 0.8
    eps_decay_rate: float = 0.025
    q_init: float = 0.0
    warmup: str = "prefill"

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must be in (0, 1], got {self.alpha}")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError(f"gamma must be in [0, 1], got {self.gamma}")
        if not 0.0 <= self.eps_start <= 1.0:
            raise ValueError(
                f"eps_start must be in [0, 1], got {self.eps_start}")
        if self.warmup not in ("prefill", "observe"):
            raise ValueError(
                f"warmup must be 'prefill' or 'observe', got {self.warmup!r}")

    @property
    def n_states(self) -> int:
        return 4 ** self.k


def epsilon_for_session(j: int, config: AgentConfig) -> float:
    """Exploration probability at the start of session ``j``.

    eps_start + exp(-eps_decay_rate * j) - 1, clamped to [0, 1]. The raw
    schedule goes negative for large ``j``; clamping at zero turns the
    policy purely greedy from there on.
    """
    if j < 1:
        raise ValueError(f"session number must be >= 1, got {j}")
    raw = config.eps_start + math.exp(-config.eps_decay_rate * j) - 1.0
    return min(1.0, max(0.0, raw))


def action_distribution(q_row: Sequence[float]) -> tuple[float, float, float]:
    """Softmax probabilities over the three actions for one Q-table row.

    Uses max-subtraction so large action values cannot overflow; the
    result is shift-invariant and sums to 1 up to rounding.
    """
    if len(q_row) != len(ACTIONS):
        raise ValueError(f"expected {len(ACTIONS)} action values, "
                         f"got {len(q_row)}")
    values = [float(v) for v in q_row]
    if not all(math.isfinite(v) for v in values):
        raise ValueError(f"action values must be finite, got {values}")
    mx = max(values)
    exps = [math.exp(v - mx) for v in values]
    total = sum(exps)
    return tuple(e / total for e in exps)


def select_action(state: State, eps: float, qtable: "QTable", rng) -> Action:
    """Pick an action: uniform with probability ``eps``, softmax otherwise.

    Always consumes exactly two uniforms so the draw stream stays aligned
    with the fused kernels. The exploit branch walks the unnormalized
    cumulative exponentials, which is the same softmax draw the kernels
    make.
    """
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"eps must be in [0, 1], got {eps}")
    u1 = rng.random()
    u2 = rng.random()
    if u1 < eps:
        return ACTIONS[int(u2 * 3)]
    q0, q1, q2 = qtable.row(state)
    mx = max(q0, q1, q2)
    e0 = math.exp(q0 - mx)
    e1 = math.exp(q1 - mx)
    e2 = math.exp(q2 - mx)
    r = u2 * (e0 + e1 + e2)
    if r < e0:
        return ACTIONS[0]
    if r < e0 + e1:
        return ACTIONS[1]
    return ACTIONS[2]


def q_update(qtable: "QTable", s: State, a: Action, r: float, s_next: State,
             config: AgentConfig) -> float:
    """One-step Q-learning update; returns the new value of (s, a).

    q(s,a) <- q(s,a) + alpha * (r + gamma * max_a' q(s',a') - q(s,a))
    """
    old = qtable.get(s, a)
    n0, n1, n2 = qtable.row(s_next)
    mx = n0
    if n1 > mx:
        mx = n1
    if n2 > mx:
        mx = n2
    new = old + config.alpha * (r + config.gamma * mx - old)
    qtable.set(s, a, new)
    return new


def push_stimulus(state: State, stimulus: Stimulus) -> State:
    """Shift a stimulus into the window: drop the oldest, append the new."""
    return state[1:] + (stimulus,)


class QTable:
    """Dense action-value table over all 4**k stimulus windows.

    Every (state, action) entry exists from the start, initialized to
    ``q_init``, so lookups never fail.
    """

    def __init__(self, k: int, q_init: float = 0.0,
                 values: Optional[np.ndarray] = None):
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        self.k = k
        self.q_init = float(q_init)
        n = 4 ** k
        if values is None:
            self.values = np.full((n, 3), self.q_init, dtype=np.float64)
        else:
            values = np.ascontiguousarray(values, dtype=np.float64)
            if values.shape != (n, 3):
                raise ValueError(
                    f"expected a ({n}, 3) table for k={k}, "
                    f"got shape {values.shape}")
            if not np.isfinite(values).all():
                raise ValueError("Q-table values must be finite")
            self.values = values

    def state_index(self, state: State) -> int:
        if len(state) != self.k:
            raise ValueError(
                f"state must have exactly {self.k} stimuli, got {len(state)}")
        idx = 0
        for s in state:
            idx = idx * 4 + int(s)
        return idx

    def state_from_index(self, idx: int) -> State:
        codes = []
        for _ in range(self.k):
            codes.append(idx % 4)
            idx //= 4
        return tuple(STIMULI[c] for c in reversed(codes))

    def row(self, state: State) -> tuple[float, float, float]:
        i = self.state_index(state)
        return (float(self.values[i, 0]), float(self.values[i, 1]),
                float(self.values[i, 2]))

    def get(self, state: State, action: Action) -> float:
        return float(self.values[self.state_index(state), int(action)])

    def set(self, state: State, action: Action, value: float) -> None:
        if not math.isfinite(value):
            raise ValueError(f"Q-values must be finite, got {value}")
        self.values[self.state_index(state), int(action)] = value

    def copy(self) -> "QTable":
        return QTable(self.k, self.q_init, self.values.copy())

    def to_json_dict(self) -> dict:
        """Snapshot as a JSON-safe dict; only rows off the initial value."""
        entries = {}
        for i in range(self.values.shape[0]):
            row = self.values[i]
            if row[0] != self.q_init or row[1] != self.q_init \
                    or row[2] != self.q_init:
                key = ",".join(s.label for s in self.state_from_index(i))
                entries[key] = [float(v) for v in row]
        return {
            "format": "rodentsim-qtable",
            "version": 1,
            "k": self.k,
            "q_init": self.q_init,
            "actions": [a.label for a in ACTIONS],
            "entries": entries,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "QTable":
        table = cls(int(data["k"]), float(data["q_init"]))
        for key, row in data["entries"].items():
            state = tuple(Stimulus.from_label(p) for p in key.split(","))
            for action, value in zip(ACTIONS, row):
                table.set(state, action, float(value))
        return table


class Agent:
    """Mutable learning state driven by the protocol's session loop.

    Owns the Q-table, the stimulus window and the deferred value update
    (a trial's update is applied one trial later, once the successor
    state is known). The window and table persist across sessions; only
    the exploration probability changes per session.
    """

    def __init__(self, config: AgentConfig, qtable: Optional[QTable] = None):
        self.config = config
        if qtable is None:
            qtable = QTable(config.k, config.q_init)
        elif qtable.k != config.k:
            raise ValueError(
                f"Q-table is for k={qtable.k}, config has k={config.k}")
        self.qtable = qtable
        self.window_index = 0
        self.stimuli_seen = 0
        # deferred update as (has, state_index, action_code, reward)
        self.pending: tuple[int, int, int, float] = (0, 0, 0, 0.0)

    @property
    def window_full(self) -> bool:
        return self.stimuli_seen >= self.config.k

    def warmup_trials_needed(self) -> int:
        """Non-acting trials still owed before the agent starts acting."""
        if self.config.warmup != "observe":
            return 0
        return max(0, self.config.k - 1 - self.stimuli_seen)

    def prefill_window(self, stimulus_code: int) -> None:
        """Fill every window slot with one stimulus ("prefill" warm-up)."""
        if self.stimuli_seen:
            raise ValueError("window already initialized")
        # k repetitions of one base-4 digit
        self.window_index = int(stimulus_code) * (4 ** self.config.k - 1) // 3
        self.stimuli_seen = self.config.k

    def observe_without_acting(self, stimulus_code: int) -> None:
        """Shift one stimulus into a not-yet-full window ("observe" warm-up)."""
        if self.window_full:
            raise ValueError("window is already full")
        self.window_index = self.window_index * 4 + int(stimulus_code)
        self.stimuli_seen += 1

    def window_state(self) -> Optional[State]:
        """Current window as a stimulus tuple, or None while warming up."""
        if not self.window_full:
            return None
        return self.qtable.state_from_index(self.window_index)
