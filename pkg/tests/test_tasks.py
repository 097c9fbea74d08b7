import numpy as np
import pytest

from polyarena.errors import UnknownLayer
from polyarena.sprites import State, make_sprite
from polyarena.tasks import (AvoidContact, CompositeTask, ContactReward,
                             Timeout)


def nav_state(agent_x=0.5, agent_y=0.5):
    goal = make_sprite(x=0.1, y=0.1, shape="square", scale=0.1, c0=255)
    agent = make_sprite(x=agent_x, y=agent_y, shape="circle", scale=0.1, c1=255)
    return State([("goal", [goal]), ("agent", [agent])])


def drive_to_contact(task, state, agent, contact_at, total=20):
    """Step the task while teleporting the agent onto the goal at step
    `contact_at`; returns (rewards, reset_steps)."""
    rewards, resets = [], []
    for step in range(1, total + 1):
        if step == contact_at:
            agent.position = np.array([0.1, 0.1])
        verdict = task.verdict(state, step)
        rewards.append(verdict.reward)
        resets.append(verdict.reset)
    return rewards, resets


def test_contact_reward_fires_once_then_resets_five_later():
    state = nav_state()
    agent = state.sprites("agent")[0]
    task = ContactReward(1.0, "agent", "goal", reset_steps_after_contact=5)
    task.reset(state)
    rewards, resets = drive_to_contact(task, state, agent, contact_at=4, total=12)
    assert rewards == [0, 0, 0, 1.0, 0, 0, 0, 0, 0, 0, 0, 0]
    assert resets.index(True) == 8  # contact at step 4 -> reset at step 9
    assert sum(rewards) == 1.0


def test_contact_reward_sustained_contact_pays_once():
    state = nav_state(agent_x=0.1, agent_y=0.1)  # starts on the goal
    task = ContactReward(1.0, "agent", "goal")
    task.reset(state)
    rewards = [task.verdict(state, i).reward for i in range(1, 4)]
    assert rewards == [1.0, 0.0, 0.0]


def test_contact_reward_no_contact_is_silent():
    state = nav_state()
    task = ContactReward(1.0, "agent", "goal", reset_steps_after_contact=5)
    task.reset(state)
    for step in range(1, 30):
        verdict = task.verdict(state, step)
        assert verdict.reward == 0.0 and not verdict.reset


def test_contact_reward_zero_countdown_resets_same_step():
    state = nav_state(agent_x=0.1, agent_y=0.1)
    task = ContactReward(1.0, "agent", "goal", reset_steps_after_contact=0)
    task.reset(state)
    verdict = task.verdict(state, 1)
    assert verdict.reward == 1.0 and verdict.reset


def test_contact_reward_rearms_after_reset():
    state = nav_state(agent_x=0.1, agent_y=0.1)
    task = ContactReward(1.0, "agent", "goal")
    task.reset(state)
    assert task.verdict(state, 1).reward == 1.0
    assert task.verdict(state, 2).reward == 0.0
    task.reset(state)  # fresh trial: can earn again
    assert task.verdict(state, 1).reward == 1.0


def test_contact_reward_per_pair_mode():
    agent = make_sprite(x=0.5, y=0.5, scale=0.3)
    pellets = [make_sprite(x=x, y=0.5, scale=0.05) for x in (0.45, 0.55, 0.9)]
    state = State([("agent", [agent]), ("pellets", pellets)])
    task = ContactReward(1.0, "agent", "pellets", per_pair=True)
    task.reset(state)
    assert task.verdict(state, 1).reward == 2.0  # two pellets touched at once
    assert task.verdict(state, 2).reward == 0.0  # same pairs pay nothing more
    agent.position = np.array([0.9, 0.5])
    assert task.verdict(state, 3).reward == 1.0  # the third pellet


def test_contact_reward_unknown_layer():
    task = ContactReward(1.0, "agent", "nowhere")
    with pytest.raises(UnknownLayer):
        task.verdict(nav_state(), 1)


def test_avoid_contact():
    state = nav_state()
    task = AvoidContact(-1.0, "agent", "goal", terminate_on_contact=True)
    verdict = task.verdict(state, 1)
    assert verdict.reward == 0.0 and not verdict.reset

    touching = nav_state(agent_x=0.1, agent_y=0.1)
    verdict = task.verdict(touching, 1)
    assert verdict.reward == -1.0 and verdict.reset


def test_avoid_contact_single_penalty_for_simultaneous_contacts():
    agent = make_sprite(x=0.5, y=0.5, scale=0.3)
    hazards = [make_sprite(x=0.45, y=0.5, scale=0.05),
               make_sprite(x=0.55, y=0.5, scale=0.05)]
    state = State([("agent", [agent]), ("hazards", hazards)])
    verdict = AvoidContact(-1.0, "agent", "hazards").verdict(state, 1)
    assert verdict.reward == -1.0  # once per step, not per pair


def test_timeout_boundaries():
    task = Timeout(100)
    state = State([("a", [])])
    assert not task.verdict(state, 99).reset
    assert task.verdict(state, 100).reset
    assert Timeout(1).verdict(state, 1).reset
    with pytest.raises(ValueError):
        Timeout(0)


def test_composite_task():
    state = nav_state(agent_x=0.1, agent_y=0.1)
    win = ContactReward(1.0, "agent", "goal", reset_steps_after_contact=3)
    lose = AvoidContact(-1.0, "agent", "goal")
    both = CompositeTask([win, lose])
    both.reset(state)
    verdict = both.verdict(state, 1)
    assert verdict.reward == 0.0  # +1 - 1 on the same step
    assert not verdict.reset
    assert verdict.reset_countdown == 3

    single = CompositeTask([Timeout(2)])
    assert single.verdict(state, 2).reset and not single.verdict(state, 1).reset

    with pytest.raises(ValueError):
        CompositeTask([])


def test_composite_matches_isolated_subtasks():
    template = [(0.5, 0.5), (0.3, 0.3), (0.1, 0.1), (0.1, 0.1), (0.5, 0.5)]
    solo = ContactReward(2.0, "agent", "goal")
    merged = CompositeTask([ContactReward(2.0, "agent", "goal"), Timeout(50)])
    solo.reset(None)
    merged.reset(None)
    for step, (x, y) in enumerate(template, start=1):
        state = nav_state(agent_x=x, agent_y=y)
        assert merged.verdict(state, step).reward == solo.verdict(state, step).reward


def test_tasks_do_not_mutate_state():
    state = nav_state(agent_x=0.1, agent_y=0.1)
    before = [(s.id, s.position.copy()) for s in state.z_order()]
    task = CompositeTask([ContactReward(1.0, "agent", "goal"),
                          AvoidContact(-1.0, "agent", "goal"), Timeout(5)])
    task.reset(state)
    task.verdict(state, 1)
    after = [(s.id, s.position) for s in state.z_order()]
    for (i, p), (j, q) in zip(before, after):
        assert i == j and np.array_equal(p, q)
