"""Empirical-tree learners: explore-then-plan and the decaying-experiment planner."""

from __future__ import annotations

import random
from fractions import Fraction

from tmworlds.agents import CourageousPlannerAgent, ExploreThenPlanAgent, RandomAgent
from tmworlds.agents.empirical import TD4Config
from tmworlds.alphabet import VICTORY
from tmworlds.game import Caps, play_life
from tmworlds.tree import build_tree_of_this_game, max_sum

from conftest import fifty_fifty_world, random_world, two_step_victory_world


def small_caps(cap=3, games=100):
    return Caps(game_big_step_cap=cap, life_games=games)


# -- explore then plan (td3) ------------------------------------------------------

def test_explorer_reaches_best_value_on_deterministic_worlds(ab):
    caps = small_caps(cap=3, games=260)
    rng = random.Random(17)
    for _ in range(6):
        world = random_world(ab, rng, deterministic=True)
        best = max_sum(build_tree_of_this_game(world, caps)).value
        agent = ExploreThenPlanAgent(ab, exploration_budget=200, seed=2)
        life = play_life(agent, world, caps, seed=2, reset_world_each_game=True)
        tail = [ab.payoff(g.outcome) for g in life.games[-20:]]
        assert all(value == best for value in tail), world.key()


def test_explorer_budget_zero_follows_tie_break(ab):
    agent = ExploreThenPlanAgent(ab, exploration_budget=0, seed=0)
    # empty statistics: every action is worth 1/2, so the lowest action wins
    assert agent.next_action() == ab.omega[0]


def test_explorer_estimates_chance_probabilities(ab):
    world = fifty_fifty_world(ab)
    caps = small_caps(cap=2, games=500)
    agent = ExploreThenPlanAgent(ab, exploration_budget=500, seed=8)
    play_life(agent, world, caps, seed=8, reset_world_each_game=True)
    estimate = agent.stats.estimated_probability((), ab.omega[0], VICTORY)
    assert abs(float(estimate) - 0.5) < 0.05


# -- decaying experiments (td4) ------------------------------------------------------

def test_full_courage_equals_random_agent_stream(ab):
    planner = CourageousPlannerAgent(ab, TD4Config(courage=Fraction(1)), seed=42)
    baseline = RandomAgent(ab, 42)
    percepts = [3, 4, VICTORY] * 40
    for percept in percepts:
        assert planner.next_action() == baseline.next_action()
        planner.observe(percept)
        baseline.observe(percept)
    assert planner.experiments == len(percepts)


def test_lower_courage_means_fewer_experiments(ab):
    world = fifty_fifty_world(ab)
    caps = small_caps(cap=2, games=300)

    def experiments(courage):
        agent = CourageousPlannerAgent(ab, TD4Config(courage=courage), seed=5)
        play_life(agent, world, caps, seed=5, reset_world_each_game=True)
        return agent.experiments

    assert experiments(Fraction(1, 100)) < experiments(Fraction(1, 5))


def test_planner_gets_close_to_best_on_deterministic_world(ab):
    world = two_step_victory_world(ab)
    caps = small_caps(cap=3, games=1000)
    best = max_sum(build_tree_of_this_game(world, caps)).value
    agent = CourageousPlannerAgent(ab, TD4Config(courage=Fraction(1, 20)), seed=3)
    life = play_life(agent, world, caps, seed=3, reset_world_each_game=True)
    values = [float(ab.payoff(g.outcome)) for g in life.games]
    mean = sum(values) / len(values)
    spread = (sum((v - mean) ** 2 for v in values) / (len(values) - 1)) ** 0.5
    margin = 3 * spread / len(values) ** 0.5
    assert mean >= float(best) - 0.05 - margin


def test_planner_keeps_learning_after_start(ab):
    world = fifty_fifty_world(ab)
    caps = small_caps(cap=2, games=50)
    agent = CourageousPlannerAgent(ab, TD4Config(courage=Fraction(1, 10)), seed=1)
    play_life(agent, world, caps, seed=1, reset_world_each_game=True)
    assert agent.games_completed == 50
    assert agent.stats.estimated_probability((), ab.omega[0], VICTORY) > 0
