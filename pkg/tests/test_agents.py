"""Random baseline, replay players, strategy follower, and the policy factory."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from tmworlds.agents import (RandomAgent, StrategyPolicy, StrategySweepAgent,
                             TmAgentPolicy, VictoryReplayAgent, make_policy,
                             parse_agent_spec)
from tmworlds.alphabet import VICTORY
from tmworlds.game import Caps, play_life, success
from tmworlds.machines import Transition, new_agent_machine
from tmworlds.textfmt import agent_to_text
from tmworlds.tree import build_tree_of_this_game, max_sum

from conftest import (always_loss_world, always_victory_world, build_world,
                      never_final_world, random_world, two_step_victory_world)


def small_caps(cap=3, games=100):
    return Caps(game_big_step_cap=cap, life_games=games)


# -- random baseline -----------------------------------------------------------

def test_random_agent_uniform(ab):
    agent = RandomAgent(ab, 4)
    counts = {a: 0 for a in ab.omega}
    trials = 10_000
    for _ in range(trials):
        counts[agent.next_action()] += 1
    for count in counts.values():
        assert abs(count / trials - 0.5) < 0.02


def test_random_agent_seeded(ab):
    a1 = [RandomAgent(ab, 9).next_action() for _ in range(50)]
    a2 = [RandomAgent(ab, 9).next_action() for _ in range(50)]
    assert a1 == a2


# -- first-victory replay (td1) ---------------------------------------------------

def test_replay_agent_repeats_first_victory(ab):
    world = two_step_victory_world(ab)
    agent = VictoryReplayAgent(ab, 13)
    life = play_life(agent, world, small_caps(), seed=13,
                     reset_world_each_game=True)
    outcomes = [g.outcome for g in life.games]
    assert VICTORY in outcomes
    first_win = outcomes.index(VICTORY)
    assert all(o == VICTORY for o in outcomes[first_win:])
    assert success(life.counts) > Fraction(1, 2)


def test_replay_agent_random_forever_without_victory(ab):
    world = always_loss_world(ab)
    agent = VictoryReplayAgent(ab, 5)
    life = play_life(agent, world, small_caps(games=50), seed=5,
                     reset_world_each_game=True)
    assert life.counts.n_loss == 50
    assert agent._winning is None


# -- sequence sweep (td2) -----------------------------------------------------------

def test_sweep_agent_finds_late_victory(ab):
    # victory needs (a1, a1): sequences 0..5 fail, index 6 = (a1, a1, a0) wins
    world = build_world(ab, 2, {
        (0, "a1"): (1, "a1", "R"),
        (1, "_"): (0, "s0", "L"),
        (1, "s0"): (0, "victory", "R"),
    })
    agent = StrategySweepAgent(ab, game_cap=3, seed=0)
    life = play_life(agent, world, small_caps(games=20), seed=0,
                     reset_world_each_game=True)
    outcomes = [g.outcome for g in life.games]
    assert all(o != VICTORY for o in outcomes[:6])
    assert all(o == VICTORY for o in outcomes[6:])
    assert agent.mode == "victory"


def test_sweep_agent_settles_on_draw(ab):
    world = never_final_world(ab)  # every game is a cap draw
    agent = StrategySweepAgent(ab, game_cap=3, seed=0)
    life = play_life(agent, world, small_caps(games=12), seed=0,
                     reset_world_each_game=True)
    assert agent.mode == "draw"  # 8 sequences tried, all drawn, replaying
    assert life.counts.n_draw == 12


def test_sweep_agent_random_after_all_losses(ab):
    world = always_loss_world(ab)
    agent = StrategySweepAgent(ab, game_cap=2, seed=0)
    life = play_life(agent, world, small_caps(cap=2, games=10), seed=0,
                     reset_world_each_game=True)
    assert agent.mode == "random"
    assert life.counts.n_loss == 10


def test_sweep_agent_eventually_scores_best_value(ab):
    caps = small_caps(cap=3, games=40)
    rng = random.Random(31)
    for _ in range(8):
        world = random_world(ab, rng, deterministic=True)
        best = max_sum(build_tree_of_this_game(world, caps)).value
        agent = StrategySweepAgent(ab, game_cap=3, seed=1)
        life = play_life(agent, world, caps, seed=1, reset_world_each_game=True)
        tail = [ab.payoff(g.outcome) for g in life.games[-5:]]
        assert all(value == best for value in tail), world.key()


# -- strategy follower ---------------------------------------------------------------

def test_strategy_policy_follows_and_flags_off_support(ab):
    world = two_step_victory_world(ab)
    caps = small_caps(cap=3, games=1)
    strategy = max_sum(build_tree_of_this_game(world, caps)).strategy
    policy = StrategyPolicy(strategy, ab, seed=0)
    life = play_life(policy, world, caps, seed=0, n_games=1)
    assert life.games[0].outcome == VICTORY
    assert not policy.off_strategy
    # a second game runs past the one-game strategy
    policy = StrategyPolicy(strategy, ab, seed=0)
    play_life(policy, world, caps, seed=0, n_games=2, reset_world_each_game=True)
    assert policy.off_strategy


# -- machine-backed agents -------------------------------------------------------------

def test_tm_policy_plays_fixed_action(ab):
    action = ab.omega[0]
    table = {(0, letter): Transition(0, action, "R")
             for letter in range(ab.n_world_letters)}
    machine = new_agent_machine(1, 0, table, ab)
    world = two_step_victory_world(ab)
    life = play_life(TmAgentPolicy(machine), world, small_caps(games=5), seed=0,
                     reset_world_each_game=True)
    assert all(g.outcome == VICTORY for g in life.games)


def test_tm_policy_failure_forfeits_rest_of_life(ab):
    machine = new_agent_machine(1, 0, {}, ab)  # hangs instantly
    world = always_victory_world(ab)
    life = play_life(TmAgentPolicy(machine), world, small_caps(games=4), seed=0)
    assert life.counts.n_loss == 4
    assert all(g.termination == "agent_error" for g in life.games)


# -- factory ------------------------------------------------------------------------

def test_parse_agent_spec():
    assert parse_agent_spec("kind=td4, courage=1/20") == {
        "kind": "td4", "courage": "1/20"}
    with pytest.raises(ValueError):
        parse_agent_spec("td4")
    with pytest.raises(ValueError):
        parse_agent_spec("courage=1/20")


def test_make_policy_kinds(ab, tmp_path):
    caps = small_caps()
    for spec, cls in [("kind=random", RandomAgent),
                      ("kind=td1", VictoryReplayAgent),
                      ("kind=td2", StrategySweepAgent)]:
        assert isinstance(make_policy(spec, ab, caps, 0), cls)
    td4 = make_policy("kind=td4,courage=1/10,k=6", ab, caps, 0)
    assert td4.config.courage == Fraction(1, 10)
    assert td4.config.schedule_constant == 6
    with pytest.raises(ValueError):
        make_policy("kind=nope", ab, caps, 0)
    with pytest.raises(ValueError):
        make_policy("kind=random,bogus=1", ab, caps, 0)

    action = ab.omega[0]
    table = {(0, letter): Transition(0, action, "R")
             for letter in range(ab.n_world_letters)}
    machine = new_agent_machine(1, 0, table, ab)
    path = tmp_path / "agent.tm"
    path.write_text(agent_to_text(machine))
    policy = make_policy(f"kind=tm,file={path}", ab, caps, 0)
    assert isinstance(policy, TmAgentPolicy)
    assert policy.next_action() == action
