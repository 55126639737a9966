"""Policy interface and the simplest players.

A policy alternates ``next_action()`` and ``observe(percept)`` calls for a
whole life.  It sees every percept, including the final letters, which is
how it segments games — there is no other game-boundary signal.  Policies
must stay total (always return an action letter) and be deterministic
given their seed and history.
"""

from __future__ import annotations

import abc
import random
from dataclasses import replace
from typing import Optional

from ..alphabet import AlphabetConfig
from ..errors import AgentFailure, AgentHalted
from ..machines import AgentMachine, MachineRunState, agent_absorb, agent_emit
from ..tree import StrategyNode


def uniform_action(rng: random.Random, omega: tuple[int, ...]) -> int:
    return omega[rng.randrange(len(omega))]


class AgentPolicy(abc.ABC):
    """Behavioral interface: emit an action, then be shown the percept."""

    @abc.abstractmethod
    def next_action(self) -> int:
        ...

    @abc.abstractmethod
    def observe(self, percept: int) -> None:
        ...


class RandomAgent(AgentPolicy):
    """Uniform over the action letters at every step."""

    def __init__(self, alphabet: AlphabetConfig, seed: Optional[int]):
        self.alphabet = alphabet
        self._rng = random.Random(seed)

    def next_action(self) -> int:
        return uniform_action(self._rng, self.alphabet.omega)

    def observe(self, percept: int) -> None:
        pass


class TmAgentPolicy(AgentPolicy):
    """Runs a submitted agent machine as a policy.

    Machine failures (hang, cap, bad output) propagate as AgentFailure, and
    the policy keeps failing afterwards; the game runtime records such
    games as forfeits.
    """

    def __init__(self, machine: AgentMachine, caps=None):
        if machine.small_step_cap is None and caps is not None:
            machine = replace(machine, small_step_cap=caps.agent_small_step_cap)
        self.run = MachineRunState.fresh(machine)
        self._failed = False

    def next_action(self) -> int:
        if self._failed:
            raise AgentHalted("agent machine failed earlier in this life")
        try:
            return agent_emit(self.run)
        except AgentFailure:
            self._failed = True
            raise

    def observe(self, percept: int) -> None:
        if not self._failed:
            agent_absorb(self.run, percept)


class StrategyPolicy(AgentPolicy):
    """Follows a precomputed strategy tree.

    Once play leaves the strategy's support (a percept it never mapped, or
    more games than it covers), the policy falls back to uniform random
    actions and sets ``off_strategy``.
    """

    def __init__(self, strategy: StrategyNode, alphabet: AlphabetConfig,
                 seed: Optional[int] = 0):
        self.alphabet = alphabet
        self.off_strategy = False
        self._current: Optional[StrategyNode] = strategy
        self._rng = random.Random(seed)

    def next_action(self) -> int:
        if self._current is None:
            self.off_strategy = True
            return uniform_action(self._rng, self.alphabet.omega)
        return self._current.action

    def observe(self, percept: int) -> None:
        if self._current is None:
            return
        try:
            self._current = self._current.response_for(percept)
        except KeyError:
            self._current = None
