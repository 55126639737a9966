"""Players that learn an empirical game tree from observed frequencies.

The empirical tree keeps, per (in-game history, action), a counter of the
percepts seen next.  Histories are interned as integer node ids, with one
node per visited history and cached subtree values that are invalidated
along the ancestor chain of each update, so planning from the current
node stays cheap even in thousand-step games.

Valuing the tree works like the exact solver: final percepts score their
payoff, continuations score the best action below, actions are averaged
by observed frequency, and any unvisited action is valued at the draw
payoff 1/2 — which nudges greedy play toward untried branches whenever
the known ones score worse than a draw.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ..alphabet import AlphabetConfig
from .base import AgentPolicy, uniform_action

_HALF = Fraction(1, 2)


class _Node:
    __slots__ = ("parent", "stats", "children", "value")

    def __init__(self, parent: Optional[int]):
        self.parent = parent
        self.stats: dict = {}      # action -> Counter of next percepts
        self.children: dict = {}   # (action, percept) -> node id
        self.value: Optional[Fraction] = None  # cached; None when stale


class EmpiricalGameTree:
    """Visit counts and percept frequencies per (history, action)."""

    root = 0

    def __init__(self, alphabet: AlphabetConfig):
        self.alphabet = alphabet
        self._nodes: list[_Node] = [_Node(None)]

    def child(self, node: int, action: int, percept: int) -> int:
        """Node id of the continuation history (created on first use)."""
        entry = self._nodes[node]
        key = (action, percept)
        child = entry.children.get(key)
        if child is None:
            child = len(self._nodes)
            self._nodes.append(_Node(node))
            entry.children[key] = child
        return child

    def record(self, node: int, action: int, percept: int) -> None:
        entry = self._nodes[node]
        entry.stats.setdefault(action, Counter())[percept] += 1
        current: Optional[int] = node
        while current is not None:
            self._nodes[current].value = None
            current = self._nodes[current].parent

    def _q_value(self, node: int, action: int) -> Fraction:
        stats = self._nodes[node].stats.get(action)
        if not stats:
            return _HALF
        total = sum(stats.values())
        value = Fraction(0)
        for percept, count in stats.items():
            if self.alphabet.is_final(percept):
                leaf = self.alphabet.payoff(percept)
            else:
                leaf = self.value(self.child(node, action, percept))
            value += Fraction(count, total) * leaf
        return value

    def value(self, node: int) -> Fraction:
        """Best achievable value from this history, per current statistics."""
        if self._nodes[node].value is not None:
            return self._nodes[node].value
        stack = [node]
        while stack:
            current = stack[-1]
            entry = self._nodes[current]
            if entry.value is not None:
                stack.pop()
                continue
            pending = []
            for action, counter in entry.stats.items():
                for percept in counter:
                    if self.alphabet.is_final(percept):
                        continue
                    child = self.child(current, action, percept)
                    if self._nodes[child].value is None:
                        pending.append(child)
            if pending:
                stack.extend(pending)
                continue
            entry.value = max(self._q_value(current, action)
                              for action in self.alphabet.omega)
            stack.pop()
        return self._nodes[node].value

    def best_action(self, node: int) -> int:
        """Highest-valued action; ties break to the lowest action id."""
        best_action, best_value = None, None
        for action in self.alphabet.omega:
            value = self._q_value(node, action)
            if best_value is None or value > best_value:
                best_action, best_value = action, value
        return best_action

    def node_of(self, history: tuple) -> int:
        node = self.root
        for action, percept in history:
            node = self.child(node, action, percept)
        return node

    def estimated_probability(self, history: tuple, action: int,
                              percept: int) -> Fraction:
        stats = self._nodes[self.node_of(history)].stats.get(action)
        if not stats:
            return Fraction(0)
        return Fraction(stats[percept], sum(stats.values()))


class _LearningAgent(AgentPolicy):
    """Shared bookkeeping: record every exchange, reset at game boundaries."""

    def __init__(self, alphabet: AlphabetConfig, seed: Optional[int]):
        self.alphabet = alphabet
        self.stats = EmpiricalGameTree(alphabet)
        self.games_completed = 0
        self._node = self.stats.root
        self._rng = random.Random(seed)
        self._pending: Optional[int] = None

    def observe(self, percept: int) -> None:
        self.stats.record(self._node, self._pending, percept)
        if self.alphabet.is_final(percept):
            self.games_completed += 1
            self._node = self.stats.root
        else:
            self._node = self.stats.child(self._node, self._pending, percept)


class ExploreThenPlanAgent(_LearningAgent):
    """Plays uniformly at random for a fixed budget of games, then follows
    the empirical tree's recommendation (and keeps learning as it plays).

    With budget 0 the very first actions follow the tie-break order on an
    empty tree.
    """

    def __init__(self, alphabet: AlphabetConfig, exploration_budget: int,
                 seed: Optional[int]):
        super().__init__(alphabet, seed)
        if exploration_budget < 0:
            raise ValueError("exploration_budget must be non-negative")
        self.exploration_budget = exploration_budget

    def next_action(self) -> int:
        if self.games_completed < self.exploration_budget:
            action = uniform_action(self._rng, self.alphabet.omega)
        else:
            action = self.stats.best_action(self._node)
        self._pending = action
        return action


@dataclass(frozen=True)
class TD4Config:
    """Exploration settings: ``courage`` is the tolerated success shortfall.

    On game g the agent experiments with probability
    min(1, schedule_constant * courage / sqrt(g)); courage >= 1 means every
    step is an experiment.
    """

    courage: Fraction
    schedule_constant: int = 4

    def __post_init__(self):
        if self.courage <= 0:
            raise ValueError("courage must be positive")
        if self.schedule_constant < 1:
            raise ValueError("schedule_constant must be positive")


class CourageousPlannerAgent(_LearningAgent):
    """Follows the empirical tree but keeps experimenting at a decaying rate.

    Each step is either an experiment (a uniformly random action) with the
    game-indexed probability from ``TD4Config``, or the current empirical
    recommendation.  At courage >= 1 no randomness test is consumed and the
    action stream equals the random baseline's for the same seed.
    """

    def __init__(self, alphabet: AlphabetConfig, config: TD4Config,
                 seed: Optional[int]):
        super().__init__(alphabet, seed)
        self.config = config
        self.experiments = 0

    def experiment_probability(self) -> float:
        if self.config.courage >= 1:
            return 1.0
        game = self.games_completed + 1
        return min(1.0, self.config.schedule_constant * float(self.config.courage)
                   / math.sqrt(game))

    def next_action(self) -> int:
        probability = self.experiment_probability()
        if probability >= 1.0 or self._rng.random() < probability:
            self.experiments += 1
            action = uniform_action(self._rng, self.alphabet.omega)
        else:
            action = self.stats.best_action(self._node)
        self._pending = action
        return action
