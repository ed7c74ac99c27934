import math

import numpy as np
import pytest

from rodentsim.agent import (
    ACTIONS,
    Agent,
    AgentConfig,
    QTable,
    action_distribution,
    epsilon_for_session,
    push_stimulus,
    q_update,
    select_action,
)
from rodentsim.model import Response, Stimulus

# value of the schedule at j=1 with the default constants,
# eps_start + exp(-eps_decay_rate) - 1, frozen to full double precision
EPS_SESSION_1 = 0.7753099120283327


def test_config_defaults_and_validation():
    cfg = AgentConfig()
    assert (cfg.k, cfg.alpha, cfg.gamma) == (3, 0.2, 1.0)
    assert (cfg.eps_start, cfg.eps_decay_rate) == (0.8, 0.025)
    assert cfg.q_init == 0.0
    assert cfg.warmup == "prefill"
    assert cfg.n_states == 64
    with pytest.raises(ValueError):
        AgentConfig(k=0)
    with pytest.raises(ValueError):
        AgentConfig(alpha=1.5)
    with pytest.raises(ValueError):
        AgentConfig(eps_start=-0.1)
    with pytest.raises(ValueError):
        AgentConfig(warmup="guess")


def test_epsilon_schedule_value_at_session_one():
    assert epsilon_for_session(1, AgentConfig()) == \
        pytest.approx(EPS_SESSION_1, abs=1e-14)


def test_epsilon_schedule_monotone_and_clamped():
    cfg = AgentConfig()
    values = [epsilon_for_session(j, cfg) for j in range(1, 501)]
    assert all(0.0 <= v <= 1.0 for v in values)
    assert all(a >= b for a, b in zip(values, values[1:]))
    # the raw schedule goes negative around j = -ln(0.2)/0.025 ~ 64
    assert values[-1] == 0.0
    assert values[0] > 0.7


def test_epsilon_rejects_nonpositive_sessions():
    with pytest.raises(ValueError):
        epsilon_for_session(0, AgentConfig())


def test_action_distribution_uniform_on_equal_values():
    p = action_distribution((0.0, 0.0, 0.0))
    assert p == (1 / 3, 1 / 3, 1 / 3)
    assert action_distribution((5.0, 5.0, 5.0)) == p


def test_action_distribution_orders_by_value():
    p = action_distribution((0.0, 2.0, -1.0))
    assert p[1] > p[0] > p[2]
    assert sum(p) == pytest.approx(1.0, abs=1e-12)
    # hand-computed softmax
    exps = [math.exp(v - 2.0) for v in (0.0, 2.0, -1.0)]
    assert p == pytest.approx(tuple(e / sum(exps) for e in exps), abs=1e-15)


def test_action_distribution_rejects_bad_rows():
    with pytest.raises(ValueError):
        action_distribution((0.0, 1.0))
    with pytest.raises(ValueError):
        action_distribution((0.0, float("nan"), 1.0))


def test_q_update_from_zero_table():
    cfg = AgentConfig()
    qt = QTable(cfg.k)
    s = (Stimulus.SWEET,) * 3
    s2 = push_stimulus(s, Stimulus.SALT)
    # reward 1 into an all-zero table: 0 + 0.2 * (1 + 0 - 0) = 0.2, exact
    assert q_update(qt, s, Response.LEFT, 1.0, s2, cfg) == 0.2
    assert qt.get(s, Response.LEFT) == 0.2


def test_q_update_cancels_back_to_zero():
    cfg = AgentConfig()
    qt = QTable(cfg.k)
    s = (Stimulus.SWEET,) * 3
    qt.set(s, Response.LEFT, 0.2)
    # punish with the same state as successor, whose best value is 0.2:
    # 0.2 + 0.2 * (-1 + 1.0 * 0.2 - 0.2) = 0.0, exact in doubles
    assert q_update(qt, s, Response.LEFT, -1.0, s, cfg) == 0.0


def test_q_update_uses_successor_maximum():
    cfg = AgentConfig(alpha=0.5, gamma=0.5)
    qt = QTable(cfg.k)
    s = (Stimulus.SWEET,) * 3
    s2 = push_stimulus(s, Stimulus.SALT)
    qt.set(s2, Response.RIGHT, 4.0)
    qt.set(s2, Response.NONE, -8.0)
    # 0 + 0.5 * (1 + 0.5 * 4 - 0) = 1.5
    assert q_update(qt, s, Response.LEFT, 1.0, s2, cfg) == 1.5


def test_push_stimulus_shifts_window():
    s = (Stimulus.SWEET, Stimulus.SALT, Stimulus.SWEET)
    assert push_stimulus(s, Stimulus.SALT_55) == \
        (Stimulus.SALT, Stimulus.SWEET, Stimulus.SALT_55)


def test_select_action_explore_branch_uses_second_draw(rng):
    cfg = AgentConfig()
    qt = QTable(cfg.k)
    state = (Stimulus.SWEET,) * 3
    mirror = np.random.Generator(np.random.PCG64(12345))
    for _ in range(50):
        expected_u1 = mirror.random()
        expected_u2 = mirror.random()
        assert expected_u1 < 1.0
        action = select_action(state, 1.0, qt, rng)
        assert action is ACTIONS[int(expected_u2 * 3)]


def test_select_action_exploit_favors_best_value(rng):
    cfg = AgentConfig()
    qt = QTable(cfg.k)
    state = (Stimulus.SWEET,) * 3
    qt.set(state, Response.RIGHT, 6.0)
    picks = [select_action(state, 0.0, qt, rng) for _ in range(300)]
    frac = sum(1 for a in picks if a is Response.RIGHT) / len(picks)
    assert frac > 0.98  # softmax margin exp(6) dominates


def test_select_action_validates_eps(rng):
    qt = QTable(3)
    with pytest.raises(ValueError):
        select_action((Stimulus.SWEET,) * 3, 1.5, qt, rng)


def test_qtable_state_index_roundtrip():
    qt = QTable(3)
    state = (Stimulus.SALT, Stimulus.SWEET_55, Stimulus.SWEET)
    idx = qt.state_index(state)
    assert idx == 3 * 16 + 1 * 4 + 0
    assert qt.state_from_index(idx) == state
    for i in (0, 17, 63):
        assert qt.state_index(qt.state_from_index(i)) == i


def test_qtable_json_roundtrip_skips_default_rows():
    qt = QTable(3, q_init=0.5)
    s = (Stimulus.SWEET, Stimulus.SALT, Stimulus.SALT)
    qt.set(s, Response.LEFT, 1.25)
    doc = qt.to_json_dict()
    assert len(doc["entries"]) == 1  # only the touched row is stored
    back = QTable.from_json_dict(doc)
    assert back.k == 3 and back.q_init == 0.5
    assert np.array_equal(back.values, qt.values)


def test_qtable_rejects_nonfinite_values():
    qt = QTable(3)
    with pytest.raises(ValueError):
        qt.set((Stimulus.SWEET,) * 3, Response.LEFT, float("inf"))


def test_agent_prefill_fills_window_with_one_stimulus():
    agent = Agent(AgentConfig())
    assert not agent.window_full
    agent.prefill_window(int(Stimulus.SALT))
    assert agent.window_full
    assert agent.window_state() == (Stimulus.SALT,) * 3
    with pytest.raises(ValueError):
        agent.prefill_window(0)


def test_agent_observe_warmup_counts_down():
    agent = Agent(AgentConfig(warmup="observe"))
    assert agent.warmup_trials_needed() == 2
    agent.observe_without_acting(int(Stimulus.SWEET))
    assert agent.warmup_trials_needed() == 1
    agent.observe_without_acting(int(Stimulus.SALT))
    assert agent.warmup_trials_needed() == 0
    assert not agent.window_full  # one push short; the next acted trial fills it
    assert agent.window_state() is None


def test_agent_rejects_mismatched_qtable():
    with pytest.raises(ValueError):
        Agent(AgentConfig(k=3), qtable=QTable(2))
