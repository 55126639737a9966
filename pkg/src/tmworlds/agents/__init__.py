"""Reference players and the name-based policy factory.

CLI names: ``random``, ``td1`` (win once, replay), ``td2`` (sweep all
action sequences), ``td3`` (explore a budget of games, then plan),
``td4`` (plan with decaying experiments, parameter ``courage``), ``td6``
(shortest-consistent-model planner), ``tm`` (a submitted agent machine
file), and ``strategy`` players built programmatically from a computed
strategy.  ``td5`` is not an online policy: use ``td5_best_strategy``
plus ``StrategyPolicy`` to play its result.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

from ..alphabet import AlphabetConfig
from ..game import Caps
from .base import AgentPolicy, RandomAgent, StrategyPolicy, TmAgentPolicy, uniform_action
from .empirical import (CourageousPlannerAgent, EmpiricalGameTree,
                        ExploreThenPlanAgent, TD4Config)
from .modeling import SearchStats, ShortestModelAgent, TD6Config, find_shortest_model
from .replay import StrategySweepAgent, VictoryReplayAgent
from .strategy_search import td5_best_strategy

__all__ = [
    "AgentPolicy", "RandomAgent", "StrategyPolicy", "TmAgentPolicy",
    "VictoryReplayAgent", "StrategySweepAgent", "ExploreThenPlanAgent",
    "CourageousPlannerAgent", "ShortestModelAgent", "TD4Config", "TD6Config",
    "EmpiricalGameTree", "SearchStats", "find_shortest_model",
    "td5_best_strategy", "uniform_action", "parse_agent_spec", "make_policy",
]


def parse_agent_spec(spec: str) -> dict:
    """Parse ``kind=td4,courage=1/20`` style parameter strings."""
    params = {}
    for item in spec.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise ValueError(f"agent parameters look like key=value, got {item!r}")
        key, value = item.split("=", 1)
        params[key.strip()] = value.strip()
    if "kind" not in params:
        raise ValueError("agent spec needs a kind=... entry")
    return params


def make_policy(spec: Union[str, dict], alphabet: AlphabetConfig, caps: Caps,
                seed: Optional[int],
                reset_world_each_game: bool = False) -> AgentPolicy:
    """Build a policy from a name + parameter spec."""
    params = parse_agent_spec(spec) if isinstance(spec, str) else dict(spec)
    kind = params.pop("kind")
    if kind == "random":
        policy = RandomAgent(alphabet, seed)
    elif kind == "td1":
        policy = VictoryReplayAgent(alphabet, seed)
    elif kind == "td2":
        policy = StrategySweepAgent(alphabet, caps.game_big_step_cap, seed)
    elif kind == "td3":
        budget = int(params.pop("budget", 100))
        policy = ExploreThenPlanAgent(alphabet, budget, seed)
    elif kind == "td4":
        config = TD4Config(courage=Fraction(params.pop("courage", "1/20")),
                           schedule_constant=int(params.pop("k", 4)))
        policy = CourageousPlannerAgent(alphabet, config, seed)
    elif kind == "td6":
        config = TD6Config(model_size_cap=int(params.pop("size_cap", 5)),
                           search_depth=int(params.pop("depth", 4)),
                           search_budget=int(params.pop("budget", 200_000)))
        policy = ShortestModelAgent(alphabet, config, caps, seed,
                                    reset_world_each_game)
    elif kind == "tm":
        from ..textfmt import parse_agent_text
        path = params.pop("file", None)
        if path is None:
            raise ValueError("kind=tm needs file=<machine file>")
        machine = parse_agent_text(Path(path).read_text())
        if machine.alphabet != alphabet:
            raise ValueError("agent machine file uses a different alphabet")
        policy = TmAgentPolicy(machine, caps)
    else:
        raise ValueError(f"unknown agent kind {kind!r}")
    if params:
        raise ValueError(f"unused agent parameters: {sorted(params)}")
    return policy
