"""The training environment: constrained stimulus sequences, judging, and
the session/training loops.

A training starts on the two pure stimuli and, once the switch criterion
fires, mixes in the 55/45 stimuli. Sessions have a fixed trial count; the
training ends when the success criterion (three consecutive sessions at
or above the accuracy threshold) fires or a session cap is reached.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .agent import Agent, AgentConfig, epsilon_for_session
from .backend import kernels
from .errors import InfeasibleConstraintError
from .model import (
    STIMULI,
    Category,
    Outcome,
    Response,
    Session,
    Stimulus,
    TrainingSequence,
    Trial,
    accuracy,
    sessions_to_criterion,
)

ALL_STIMULI = STIMULI
PURE_STIMULI = (Stimulus.SWEET, Stimulus.SALT)

PHASE_SWITCH_RULES = ("accuracy", "never")


@dataclass(frozen=True)
class ProtocolConfig:
    """Environment settings for one training.

    ``phase_stimuli`` is the stimulus set of the opening curriculum phase
    (all four from session 1 can be requested by listing all four);
    ``phase_switch_rule`` decides when the mixtures are added: "accuracy"
    switches after the first session at or above ``success_threshold``,
    "never" keeps the opening set for the whole training.
    """

    max_run_length: int = 3
    trials_per_session: int = 150
    phase_stimuli: tuple[Stimulus, ...] = PURE_STIMULI
    sweet_target: Response = Response.LEFT
    phase_switch_rule: str = "accuracy"
    success_threshold: float = 0.70
    success_window: int = 3
    max_sessions: int = 100

    def __post_init__(self):
        if self.max_run_length < 1:
            raise ValueError(
                f"max_run_length must be >= 1, got {self.max_run_length}")
        if self.trials_per_session < 1:
            raise ValueError(
                f"trials_per_session must be >= 1, got {self.trials_per_session}")
        stimuli = tuple(self.phase_stimuli)
        if len(stimuli) == 0:
            raise ValueError("phase_stimuli must not be empty")
        if len(set(stimuli)) != len(stimuli):
            raise ValueError(f"phase_stimuli has duplicates: {stimuli}")
        object.__setattr__(self, "phase_stimuli", stimuli)
        if self.sweet_target not in (Response.LEFT, Response.RIGHT):
            raise ValueError(
                f"sweet_target must be left or right, got {self.sweet_target}")
        if self.phase_switch_rule not in PHASE_SWITCH_RULES:
            raise ValueError(
                f"phase_switch_rule must be one of {PHASE_SWITCH_RULES}, "
                f"got {self.phase_switch_rule!r}")
        if not 0.0 <= self.success_threshold <= 1.0:
            raise ValueError(
                f"success_threshold must be in [0, 1], got {self.success_threshold}")
        if self.success_window < 1:
            raise ValueError(
                f"success_window must be >= 1, got {self.success_window}")
        if self.max_sessions < 1:
            raise ValueError(
                f"max_sessions must be >= 1, got {self.max_sessions}")


def target_response(stimulus: Stimulus, config: ProtocolConfig) -> Response:
    """The rewarded spout for a stimulus under the configured mapping."""
    if stimulus.category is Category.SWEET:
        return config.sweet_target
    return Response.RIGHT if config.sweet_target is Response.LEFT \
        else Response.LEFT


def judge(stimulus: Stimulus, response: Response,
          config: ProtocolConfig) -> Outcome:
    """Correct iff the response is the rewarded spout; no lick never is."""
    if response is Response.NONE:
        return Outcome.INCORRECT
    return Outcome.CORRECT if response is target_response(stimulus, config) \
        else Outcome.INCORRECT


def _target_codes(config: ProtocolConfig) -> np.ndarray:
    """Per-stimulus-code rewarded response codes, for the kernels."""
    return np.array([int(target_response(s, config)) for s in STIMULI],
                    dtype=np.uint8)


def _active_codes(config: ProtocolConfig) -> np.ndarray:
    """Sorted stimulus codes of the current phase (draw order is canonical)."""
    return np.array(sorted(int(s) for s in config.phase_stimuli),
                    dtype=np.uint8)


def generate_stimulus_codes(config: ProtocolConfig, length: int,
                            rng: np.random.Generator) -> np.ndarray:
    """Stimulus codes for one session, run-length constraint enforced."""
    if length < 1:
        raise ValueError(f"length must be >= 1, got {length}")
    active = _active_codes(config)
    if len(active) < 2 and length > config.max_run_length:
        raise InfeasibleConstraintError(
            f"cannot draw {length} stimuli from a single-stimulus phase "
            f"with runs capped at {config.max_run_length}")
    return kernels().sequence_codes(rng, active, length, config.max_run_length)


def generate_stimulus_sequence(config: ProtocolConfig, length: int,
                               rng: np.random.Generator) -> list[Stimulus]:
    """Like :func:`generate_stimulus_codes`, but as Stimulus values."""
    codes = generate_stimulus_codes(config, length, rng)
    return [STIMULI[c] for c in codes]


def run_session(agent: Agent, config: ProtocolConfig, session_index: int,
                rng: np.random.Generator, *,
                eps: Optional[float] = None) -> Session:
    """Run one session: generate stimuli, act, judge, reward, learn.

    The agent's Q-table, window and deferred update persist across
    sessions. ``eps`` overrides the per-session schedule when given (the
    cohort runner uses this to freeze exploration after the success
    criterion fires).
    """
    if session_index < 1:
        raise ValueError(f"session index must be >= 1, got {session_index}")
    if eps is None:
        eps = epsilon_for_session(session_index, agent.config)
    stims = generate_stimulus_codes(config, config.trials_per_session, rng)
    targets = _target_codes(config)

    m = len(stims)
    trials: list[Trial] = []
    i = 0
    if not agent.window_full:
        if agent.config.warmup == "prefill":
            agent.prefill_window(int(stims[0]))
        else:
            # let stimuli stream past without acting until one short of full
            needed = agent.warmup_trials_needed()
            while i < min(needed, m):
                code = int(stims[i])
                agent.observe_without_acting(code)
                stimulus = STIMULI[code]
                trials.append(Trial(stimulus, Response.NONE,
                                    judge(stimulus, Response.NONE, config)))
                i += 1

    if i < m:
        has, sidx, act, rew = agent.pending
        resp, outc, widx, has, sidx, act, rew = kernels().session_trials(
            rng, agent.qtable.values, stims[i:], targets, agent.window_index,
            has, sidx, act, rew, eps, agent.config.alpha, agent.config.gamma,
            agent.config.n_states)
        agent.window_index = widx
        agent.pending = (has, sidx, act, rew)
        agent.stimuli_seen = max(agent.stimuli_seen, agent.config.k)
        resp_list = resp.tolist()
        outc_list = outc.tolist()
        for j in range(m - i):
            trials.append(Trial(STIMULI[stims[i + j]],
                                Response(resp_list[j]),
                                Outcome(outc_list[j])))

    return Session(index=session_index, trials=tuple(trials))


def run_training(config: ProtocolConfig, agent_config: AgentConfig,
                 seed: int, *,
                 n_sessions: Optional[int] = None,
                 stop_on_success: bool = True,
                 fresh_per_session: bool = False,
                 individual_id: Optional[str] = None) -> TrainingSequence:
    """Run a full training and return its recorded sequence.

    Default behavior stops as soon as the success criterion fires (or at
    ``max_sessions``). Passing ``n_sessions`` with ``stop_on_success``
    False always runs exactly that many sessions; once the criterion has
    fired, exploration is frozen at its value from the success session so
    later sessions reflect trained behavior.

    ``fresh_per_session`` re-initializes the agent before every session
    (sessions then differ only through the exploration schedule), instead
    of carrying one agent across the whole training.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    agent = Agent(agent_config)
    phase = tuple(config.phase_stimuli)
    limit = n_sessions if n_sessions is not None else config.max_sessions
    if limit < 1:
        raise ValueError(f"session count must be >= 1, got {limit}")

    sessions: list[Session] = []
    accuracies: list[float] = []
    trained_at: Optional[int] = None
    for j in range(1, limit + 1):
        if fresh_per_session:
            agent = Agent(agent_config)
        eps = None
        if trained_at is not None:
            eps = epsilon_for_session(trained_at, agent_config)
        session_config = replace(config, phase_stimuli=phase)
        session = run_session(agent, session_config, j, rng, eps=eps)
        sessions.append(session)
        acc = accuracy(session)
        accuracies.append(acc)

        if trained_at is None:
            trained_at = sessions_to_criterion(
                accuracies, config.success_threshold, config.success_window)
            if trained_at is not None and stop_on_success:
                break
        if (config.phase_switch_rule == "accuracy"
                and len(phase) < len(ALL_STIMULI)
                and acc >= config.success_threshold):
            phase = ALL_STIMULI

    if individual_id is None:
        individual_id = f"sim:{seed}"
    return TrainingSequence(
        individual_id=individual_id,
        sessions=tuple(sessions),
        trained=trained_at is not None,
        sessions_to_criterion=trained_at,
    )
