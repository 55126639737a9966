"""Acceptance criteria, one test per criterion.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one line per
criterion.  Every tolerance is pinned here; exact checks use rational
equality.  Criteria phrased over entire machine populations ("every world
of size <= 2") run on fixed seeded samples: the populations themselves
are astronomically large (10^8 machines at one state already), so a
representative sample is the strongest exhaustiveness these checks can
honestly claim.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from tmworlds.agents import (CourageousPlannerAgent, ShortestModelAgent,
                             StrategySweepAgent, td5_best_strategy)
from tmworlds.agents.empirical import TD4Config
from tmworlds.agents.modeling import TD6Config
from tmworlds.alphabet import DRAW, LOSS, VICTORY
from tmworlds.game import (Caps, OutcomeCounts, play_game, play_life, success)
from tmworlds.harness import EvalConfig, evaluate
from tmworlds.machines import (MachineRunState, Transition, world_respond)
from tmworlds.report import report_to_json_text, report_to_tsv_text
from tmworlds.tree import (build_multigame_tree, build_tree_of_this_game,
                           build_world_set_tree, count_strategies,
                           enumerate_strategies, max_sum,
                           strategy_expected_success)
from tmworlds.worldspace import (ALL_WORLDS, DETERMINISTIC_ONLY, WorldSpaceSpec,
                                 count_raw_deterministic,
                                 iter_valid_deterministic_tables, sample_world)

from conftest import (build_world, fifty_fifty_world, never_final_world,
                      random_world, silent_world, three_way_world,
                      two_step_victory_world)


def ok(name: str) -> None:
    print(f"ACCEPTANCE PASS: {name}")


# -- 1. max-sum equals brute force over strategies ------------------------------

def test_criterion_max_sum_oracle_equivalence(ab):
    rng = random.Random(20240)
    spec = WorldSpaceSpec(ab, 3, ALL_WORLDS)
    for index in range(200):
        if index % 2 == 0:
            world = sample_world(spec, rng)
        else:
            world = random_world(ab, rng, max_states=3, group_rate=0.25)
        assert world.n_states <= 3
        caps = Caps(game_big_step_cap=(2, 3, 4)[index % 3])
        tree = build_tree_of_this_game(world, caps)
        value = max_sum(tree).value
        brute = max(strategy_expected_success(s, tree)
                    for s in enumerate_strategies(tree))
        assert value == brute, f"world #{index}: {value} != {brute}"
    ok("max-sum oracle equivalence (200 worlds, caps 2-4, exact)")


# -- 2. success formula -----------------------------------------------------------

def test_criterion_success_formula():
    assert success(OutcomeCounts(1, 0, 1, 2)) == Fraction(3, 4)
    rng = random.Random(0)
    for _ in range(1000):
        v, l, d = rng.randrange(200), rng.randrange(200), rng.randrange(200)
        if v + l + d == 0:
            v = 1
        counts = OutcomeCounts(v, l, d, v + l + d)
        value = success(counts)
        assert 0 <= value <= 1
        assert success(counts.add(VICTORY)) >= value
        assert success(counts.add(LOSS)) <= value
    ok("success formula: {1,0,1,2} -> 3/4 and monotonicity over 1000 counts")


# -- 3. cap semantics --------------------------------------------------------------

def test_criterion_cap_semantics(ab):
    class FirstAction:
        def __init__(self):
            self.alphabet = ab

        def next_action(self):
            return ab.omega[0]

        def observe(self, percept):
            pass

    record = play_game(FirstAction(), MachineRunState.fresh(never_final_world(ab)),
                       Caps(), None)
    assert record.big_steps == 1000
    assert record.outcome == DRAW
    assert record.termination == "big_step_cap"
    assert all(not ab.is_final(p) for _, p in record.moves[:-1])
    assert record.moves[-1][1] == DRAW

    step = world_respond(MachineRunState.fresh(silent_world(ab)), ab.omega[0],
                         None, small_step_cap=800)
    assert step.cap_fired and step.percept == DRAW
    assert step.small_steps == 801
    record = play_game(FirstAction(), MachineRunState.fresh(silent_world(ab)),
                       Caps(), None)
    assert record.big_steps == 1 and record.outcome == DRAW
    assert record.termination == "world_small_step_cap"
    ok("cap semantics: draw at big step 1000 and past 800 small steps")


# -- 4. machine counting -------------------------------------------------------------

def test_criterion_count_check():
    assert count_raw_deterministic(20, 5) == 200 ** 100

    triples = [Transition(q, b, d) for q in (0,) for b in (0, 1)
               for d in ("L", "R")]
    oracle = {table for table in itertools.product(triples, repeat=2)
              if all(tr.write < 1 for tr in table if tr.next_state == 0)}
    enumerated = set(iter_valid_deterministic_tables(1, 2, 1))
    assert enumerated == oracle
    assert len(enumerated) == 4 < count_raw_deterministic(1, 2) == 16
    ok("count check: 200^100 raw and (p=1, a=2) set equality vs oracle")


# -- 5. sequence sweep reaches the best reachable outcome ------------------------------

def test_criterion_td2_optimality(ab):
    spec = WorldSpaceSpec(ab, 2, DETERMINISTIC_ONLY)
    rng = random.Random(777)
    caps = Caps(game_big_step_cap=4, life_games=500)
    for index in range(40):
        if index % 4 == 0:
            world = random_world(ab, rng, max_states=1, deterministic=True)
        else:
            world = sample_world(spec, rng)
        assert world.size <= 2
        best = max_sum(build_tree_of_this_game(world, caps)).value
        agent = StrategySweepAgent(ab, game_cap=4, seed=index)
        life = play_life(agent, world, caps, seed=index,
                         reset_world_each_game=True)
        assert agent.mode != "sweep"  # 16 sequences fit easily in 500 games
        tail = [ab.payoff(g.outcome) for g in life.games[-50:]]
        assert all(v == best for v in tail), (index, best, world.key())
    ok("td2 optimality on 40 deterministic size<=2 worlds in 500-game lives")


# -- 6. courage bound ---------------------------------------------------------------

def conditional_world(ab):
    """First percept is s0 or s1 at random; the matching second action wins."""
    return build_world(ab, 3, {
        (0, "a0"): (1, "a0", "R"),
        (0, "a1"): (2, "a1", "R"),
        (1, "_"): [(0, "s0", "L"), (0, "s1", "L")],
        (2, "_"): [(0, "s0", "L"), (0, "s1", "L")],
        (1, "s0"): (0, "victory", "R"),
        (1, "s1"): (0, "loss", "R"),
        (2, "s0"): (0, "loss", "R"),
        (2, "s1"): (0, "victory", "R"),
    })


def noisy_conditional_world(ab):
    return build_world(ab, 3, {
        (0, "a0"): (1, "a0", "R"),
        (0, "a1"): (2, "a1", "R"),
        (1, "_"): [(0, "s0", "L"), (0, "s1", "L")],
        (2, "_"): [(0, "s0", "L"), (0, "s1", "L")],
        (1, "s0"): [(0, "victory", "R"), (0, "draw", "R")],
        (1, "s1"): (0, "loss", "R"),
        (2, "s0"): (0, "loss", "R"),
        (2, "s1"): [(0, "victory", "R"), (0, "draw", "R")],
    })


def biased_world(ab):
    return build_world(ab, 1, {
        (0, "a0"): [(0, "victory", "R"), (0, "draw", "R")],
        (0, "a1"): (0, "loss", "R"),
    })


def test_criterion_td4_courage_bound(ab):
    worlds = [fifty_fifty_world(ab), three_way_world(ab), biased_world(ab),
              conditional_world(ab), noisy_conditional_world(ab)]
    assert sum(not w.is_deterministic for w in worlds) == 5
    caps = Caps(game_big_step_cap=3, life_games=2000)
    for index, world in enumerate(worlds):
        best = max_sum(build_tree_of_this_game(world, caps)).value
        agent = CourageousPlannerAgent(ab, TD4Config(courage=Fraction(1, 20)),
                                       seed=100 + index)
        life = play_life(agent, world, caps, seed=100 + index,
                         reset_world_each_game=True)
        values = [float(ab.payoff(g.outcome)) for g in life.games]
        mean = sum(values) / len(values)
        var = sum((v - mean) ** 2 for v in values) / (len(values) - 1)
        margin = 3 * (var / len(values)) ** 0.5
        assert mean >= float(best) - 0.05 - margin, (index, mean, best)
    ok("td4 courage bound: 5 nondeterministic worlds, 2000 games, eps=1/20")


# -- 7. shortest-model recovery ---------------------------------------------------------

def memoryless_win_world(ab):
    return build_world(ab, 1, {(0, "a0"): (0, "victory", "R"),
                               (0, "a1"): (0, "loss", "R")})


def chain3_world(ab):
    """Constant a0 answers s0, s1, then victory, via an upgraded tape mark."""
    return build_world(ab, 2, {
        (0, "a0"): (1, "a0", "R"),
        (1, "_"): (0, "s0", "L"),
        (1, "s0"): (0, "s1", "L"),
        (1, "s1"): (0, "victory", "L"),
    })


def mirror_two_step_world(ab):
    return build_world(ab, 2, {
        (0, "a1"): (1, "a1", "R"),
        (1, "_"): (0, "s1", "L"),
        (1, "s1"): (0, "victory", "R"),
    })


def phase_world(ab):
    """Six states; two mark cells drive a period-4 percept pattern."""
    rules = {}
    for action in ("a0", "a1"):
        rules[(0, action)] = (1, action, "R")
    rules[(1, "s0")] = (2, "s0", "R")
    rules[(1, "s1")] = (3, "s1", "R")
    rules[(1, "_")] = (2, "_", "R")
    rules[(2, "_")] = (4, "s0", "L")
    rules[(2, "s0")] = (4, "s1", "L")
    rules[(2, "s1")] = (5, "s0", "L")
    rules[(3, "s0")] = (5, "s1", "L")
    rules[(3, "s1")] = (4, "s0", "L")
    for letter in ("s0", "s1", "_"):
        rules[(4, letter)] = (0, "s0", "L")
        rules[(5, letter)] = (0, "s1", "L")
    return build_world(ab, 6, rules)


def _settled_tail(life, settled_step):
    step = 0
    for game_index, game in enumerate(life.games):
        step += game.big_steps
        if step >= settled_step:
            return life.games[game_index + 1:]
    return []


def _model_consistent(ab, machine, transcript, caps, reset):
    run = MachineRunState.fresh(machine)
    step_in_game = 0
    for action, recorded in transcript:
        percept = world_respond(run, action, None, caps.world_small_step_cap).percept
        if not ab.is_final(percept) and step_in_game + 1 >= caps.game_big_step_cap:
            percept = DRAW
        if percept != recorded:
            return False
        step_in_game += 1
        if ab.is_final(percept):
            step_in_game = 0
            if reset:
                run = MachineRunState.fresh(machine)
    return True


def test_criterion_td6_recovery(ab):
    caps = Caps(game_big_step_cap=3, life_games=80)
    suite = [memoryless_win_world(ab), two_step_victory_world(ab),
             mirror_two_step_world(ab), chain3_world(ab)]
    rng = random.Random(2026)
    while len(suite) < 12:
        suite.append(random_world(ab, rng, max_states=3, deterministic=True))
    for index, world in enumerate(suite):
        assert world.size <= 3
        best = max_sum(build_tree_of_this_game(world, caps)).value
        agent = ShortestModelAgent(
            ab, TD6Config(model_size_cap=3, search_depth=4, search_budget=500_000),
            caps, seed=50 + index, reset_world_each_game=True)
        life = play_life(agent, world, caps, seed=50 + index,
                         reset_world_each_game=True)
        assert agent.stats.adoptions >= 1 and agent.stats.exhausted is None, (
            index, agent.stats)
        assert _model_consistent(ab, agent._model, agent._transcript, caps, True)
        tail = _settled_tail(life, agent.stats.last_adoption_at)
        assert tail, f"world #{index}: model kept changing"
        assert all(ab.payoff(g.outcome) == best for g in tail), (index, best)

    # a size-6 generator defeats the size-3 search: the budget runs out and
    # the agent plays on at random
    big = phase_world(ab)
    assert big.size == 6
    caps6 = Caps(game_big_step_cap=3, life_games=40)
    agent = ShortestModelAgent(
        ab, TD6Config(model_size_cap=3, search_depth=4, search_budget=30_000),
        caps6, seed=1, reset_world_each_game=False)
    life = play_life(agent, big, caps6, seed=1, reset_world_each_game=False)
    assert agent.stats.exhausted is not None
    assert agent._model is None
    assert len(life.games) == 40
    ok("td6 recovery on 12 generators (size<=3) and size-6 budget exhaustion")


# -- 8. best strategy at desk scale --------------------------------------------------------

def echo_world(ab):
    return build_world(ab, 1, {(0, "a0"): (0, "s0", "R"),
                               (0, "a1"): (0, "s1", "R")},
                       default=(0, "s0", "R"))


def test_criterion_td5_desk_scale(ab):
    rng = random.Random(4)
    spec = WorldSpaceSpec(ab, 2, DETERMINISTIC_ONLY)
    worlds = [two_step_victory_world(ab), mirror_two_step_world(ab),
              echo_world(ab), sample_world(spec, rng), sample_world(spec, rng)]
    assert all(w.size <= 2 for w in worlds)
    caps = Caps(game_big_step_cap=2, life_games=2)
    n_games = 2

    strategy, value = td5_best_strategy(worlds, n_games, caps)

    mixture = build_world_set_tree(worlds, n_games, caps)
    assert count_strategies(mixture) >= 100
    trees = [build_multigame_tree(w, n_games, caps) for w in worlds]
    brute = None
    for candidate in enumerate_strategies(mixture):
        mean = sum((strategy_expected_success(candidate, t) for t in trees),
                   Fraction(0)) / len(worlds)
        if brute is None or mean > brute:
            brute = mean
    assert value == brute
    own = sum((strategy_expected_success(strategy, t) for t in trees),
              Fraction(0)) / len(worlds)
    assert own == value
    ok(f"td5 desk scale: best of {count_strategies(mixture)} strategies over "
       f"5 worlds matches brute force exactly ({value})")


# -- 9. reproducibility -------------------------------------------------------------------

def test_criterion_reproducibility(ab):
    def run(workers):
        config = EvalConfig(space=WorldSpaceSpec(ab, 3, ALL_WORLDS),
                            sample_count=6,
                            caps=Caps(game_big_step_cap=5, life_games=20),
                            lives_per_world=2, master_seed=99, workers=workers)
        report = evaluate("kind=td4,courage=1/10", config)
        return report_to_json_text(report) + report_to_tsv_text(report)

    baseline = run(1)
    for workers in (1, 4, 8):
        assert run(workers) == baseline
    ok("reproducibility: byte-identical reports at 1, 4, 8 workers")
