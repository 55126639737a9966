"""Evaluation harness: agent x sampled worlds x seeded lives.

``evaluate`` samples N worlds from a bounded space, plays a configurable
number of lives in each, and aggregates success.  Every random stream is
derived from the master seed with a stable hash-based splitter keyed by
role and indices, so the report is byte-identical no matter how many
workers run the (world, life) tasks or in what order they finish.  Tasks
share nothing mutable; aggregation is a plain mean over per-world means.

Statistics use a normal approximation for the 95% interval over per-world
means; with few worlds the interval is a rough guide only, and the report
says so.  The pass flag is the strict comparison mean > threshold.
"""

from __future__ import annotations

import hashlib
import random
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from . import defaults
from .agents import make_policy
from .game import Caps, play_life, success
from .textfmt import world_hash
from .tree import StrategyNode, build_multigame_tree, strategy_expected_success
from .worldspace import ALL_WORLDS, WorldSpaceSpec, sample_world

REPORT_FORMAT_VERSION = 1


def derive_seed(master_seed: int, *tags) -> int:
    """Stable 64-bit stream seed for (master seed, role, indices...)."""
    text = repr((master_seed,) + tags).encode()
    return int.from_bytes(hashlib.sha256(text).digest()[:8], "big")


@dataclass(frozen=True)
class EvalConfig:
    space: WorldSpaceSpec
    sample_count: int
    caps: Caps = Caps()
    lives_per_world: int = 1
    master_seed: int = 0
    threshold: Fraction = defaults.SUCCESS_THRESHOLD
    reset_world_each_game: bool = False
    workers: int = 1

    def __post_init__(self):
        if self.sample_count < 1:
            raise ValueError("sample_count must be positive")
        if self.lives_per_world < 1:
            raise ValueError("lives_per_world must be positive")
        if self.workers < 1:
            raise ValueError("workers must be positive")


@dataclass(frozen=True)
class LifeResult:
    seed: int
    outcomes: str  # one letter per game: V, L, D
    value: Fraction


@dataclass(frozen=True)
class WorldEntry:
    index: int
    world_hash: str
    size: int
    deterministic: bool
    lives: tuple
    mean: Fraction


@dataclass(frozen=True)
class EvalReport:
    agent_spec: str
    entries: tuple
    failures: tuple  # (world index, error text) pairs excluded from aggregates
    mean: Optional[Fraction]
    stderr: Optional[float]
    ci95: Optional[tuple]
    threshold: Fraction
    passed: Optional[bool]
    notes: tuple
    provenance: dict


_OUTCOME_LETTER = {0: "V", 1: "L", 2: "D"}


def _play_one(agent_spec, world, config, world_index, life_index) -> LifeResult:
    life_seed = derive_seed(config.master_seed, "life", world_index, life_index)
    agent_seed = derive_seed(config.master_seed, "agent", world_index, life_index)
    policy = make_policy(agent_spec, config.space.alphabet, config.caps, agent_seed,
                         config.reset_world_each_game)
    life = play_life(policy, world, config.caps, life_seed,
                     reset_world_each_game=config.reset_world_each_game)
    outcomes = "".join(_OUTCOME_LETTER[g.outcome] for g in life.games)
    return LifeResult(life_seed, outcomes, success(life.counts))


def evaluate(agent_spec: Union[str, dict], config: EvalConfig) -> EvalReport:
    """Sample worlds, play lives, aggregate mean success.

    World or agent construction errors abort only their own entry; failed
    entries are listed in the report and excluded from the aggregate.
    """
    sample_rng_seed = derive_seed(config.master_seed, "sample")
    sample_rng = random.Random(sample_rng_seed)
    worlds = []
    for index in range(config.sample_count):
        try:
            worlds.append((index, sample_world(config.space, sample_rng)))
        except Exception as exc:  # noqa: BLE001 - reported, not raised
            worlds.append((index, exc))

    tasks = []
    failures = []
    for index, world in worlds:
        if isinstance(world, Exception):
            failures.append((index, f"world construction: {world}"))
            continue
        for life_index in range(config.lives_per_world):
            tasks.append((index, world, life_index))

    results: dict = {}

    def run_task(task):
        index, world, life_index = task
        try:
            outcome = _play_one(agent_spec, world, config, index, life_index)
        except Exception as exc:  # noqa: BLE001 - reported per entry
            outcome = exc
        return (index, life_index), outcome

    if config.workers == 1:
        for task in tasks:
            key, value = run_task(task)
            results[key] = value
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            for key, value in pool.map(run_task, tasks):
                results[key] = value

    entries = []
    for index, world in worlds:
        if isinstance(world, Exception):
            continue
        lives = [results[(index, li)] for li in range(config.lives_per_world)]
        broken = [life for life in lives if isinstance(life, Exception)]
        if broken:
            failures.append((index, f"life failed: {broken[0]}"))
            continue
        mean = sum((life.value for life in lives), Fraction(0)) / len(lives)
        entries.append(WorldEntry(index, world_hash(world), world.size,
                                  world.is_deterministic, tuple(lives), mean))

    mean = stderr = ci95 = passed = None
    if entries:
        mean = sum((e.mean for e in entries), Fraction(0)) / len(entries)
        passed = mean > config.threshold
        floats = [float(e.mean) for e in entries]
        if len(floats) > 1:
            stderr = statistics.stdev(floats) / len(floats) ** 0.5
            half = 1.96 * stderr
            ci95 = (float(mean) - half, float(mean) + half)

    notes = [f"pass means mean success strictly above threshold {config.threshold}"]
    if len(entries) < 30:
        notes.append("normal-approximation interval is rough below ~30 worlds")
    if config.space.determinism == ALL_WORLDS:
        notes.append("mixed deterministic/nondeterministic population sampled "
                     "uniformly over machines; no cross-population reweighting "
                     "is applied")
    notes.append("small-space runs are descriptive; thresholds are calibrated "
                 "for the full-size parameter set")

    from . import __version__
    provenance = {
        "format_version": REPORT_FORMAT_VERSION,
        "tmworlds_version": __version__,
        "agent_spec": agent_spec if isinstance(agent_spec, str) else dict(agent_spec),
        "master_seed": config.master_seed,
        "sample_count": config.sample_count,
        "lives_per_world": config.lives_per_world,
        "max_size": config.space.max_size,
        "determinism": config.space.determinism,
        "sigma": list(config.space.alphabet.sigma_names),
        "omega": list(config.space.alphabet.omega_names),
        "caps": {
            "game_big_step_cap": config.caps.game_big_step_cap,
            "world_small_step_cap": config.caps.world_small_step_cap,
            "life_games": config.caps.life_games,
            "agent_small_step_cap": config.caps.agent_small_step_cap,
        },
        "reset_world_each_game": config.reset_world_each_game,
        "threshold": str(config.threshold),
    }
    return EvalReport(
        agent_spec=agent_spec if isinstance(agent_spec, str) else repr(agent_spec),
        entries=tuple(entries), failures=tuple(failures), mean=mean, stderr=stderr,
        ci95=ci95, threshold=config.threshold, passed=passed, notes=tuple(notes),
        provenance=provenance)


def exact_evaluate(strategy: StrategyNode, worlds, n_games: int, caps: Caps,
                   reset_each_game: bool = False,
                   max_nodes: int = defaults.TREE_NODE_BUDGET) -> Fraction:
    """Exact mean over ``worlds`` of the strategy's expected success."""
    worlds = list(worlds)
    if not worlds:
        raise ValueError("at least one world is required")
    total = Fraction(0)
    for world in worlds:
        tree = build_multigame_tree(world, n_games, caps, reset_each_game, max_nodes)
        total += strategy_expected_success(strategy, tree)
    return total / len(worlds)
