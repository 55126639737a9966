"""Replay players: win once, then repeat the winning game forever."""

from __future__ import annotations

import random
from typing import Optional

from ..alphabet import DRAW, VICTORY, AlphabetConfig
from .base import AgentPolicy, uniform_action


class VictoryReplayAgent(AgentPolicy):
    """Plays at random until a game ends in victory, then replays that
    game's action sequence in every later game.

    In a deterministic world with independent games the replay wins
    forever.  If a replayed game's percept departs from the recorded one
    (possible only in nondeterministic worlds, which the original scheme
    does not cover), the recording is dropped and the agent plays randomly
    until its next victory.
    """

    def __init__(self, alphabet: AlphabetConfig, seed: Optional[int]):
        self.alphabet = alphabet
        self._rng = random.Random(seed)
        self._winning: Optional[list] = None  # (action, percept) pairs of the won game
        self._game: list = []
        self._step = 0
        self._diverged = False
        self._pending: Optional[int] = None

    def next_action(self) -> int:
        if (self._winning is not None and not self._diverged
                and self._step < len(self._winning)):
            action = self._winning[self._step][0]
        else:
            action = uniform_action(self._rng, self.alphabet.omega)
        self._pending = action
        return action

    def observe(self, percept: int) -> None:
        self._game.append((self._pending, percept))
        if self._winning is not None and not self._diverged:
            on_script = (self._step < len(self._winning)
                         and percept == self._winning[self._step][1])
            if not on_script:
                self._diverged = True
        self._step += 1
        if self.alphabet.is_final(percept):
            if percept == VICTORY:
                self._winning = list(self._game)
            elif self._diverged:
                self._winning = None
            self._game = []
            self._step = 0
            self._diverged = False


class StrategySweepAgent(AgentPolicy):
    """Tries action sequences one per game, in canonical order, until a
    game is won; then replays the winning game forever.

    Sequence number k spells k in base |omega| padded to the game cap, so
    the sweep is lexicographic and covers every action path a game can
    take.  In a deterministic world with independent games the realized
    plays of these sequences are exactly the game's strategies, so the
    sweep settles on the best reachable outcome: if the whole space is
    exhausted without a win it replays the last drawn game forever, and
    with no draw either it plays at random.  In nondeterministic worlds
    the procedure still runs and stays total, but has no such guarantee.

    A victory reached in any mode (even post-exhaustion random play) is
    locked in and replayed.
    """

    def __init__(self, alphabet: AlphabetConfig, game_cap: int, seed: Optional[int]):
        self.alphabet = alphabet
        self.game_cap = game_cap
        self._rng = random.Random(seed)
        self._n = len(alphabet.omega)
        self._total = self._n ** game_cap
        self._index = 0
        self.mode = "sweep"  # sweep | victory | draw | random
        self._replay: Optional[list] = None
        self._last_draw: Optional[list] = None
        self._game_actions: list = []
        self._step = 0
        self._digits: Optional[list] = None  # current sequence, computed per game
        self._pending: Optional[int] = None

    def _sweep_action(self) -> int:
        if self._digits is None:
            remaining, digits = self._index, []
            for _ in range(self.game_cap):
                remaining, digit = divmod(remaining, self._n)
                digits.append(digit)
            self._digits = digits[::-1]
        return self.alphabet.omega[self._digits[self._step]]

    def next_action(self) -> int:
        if self.mode in ("victory", "draw"):
            if self._step < len(self._replay):
                action = self._replay[self._step]
            else:
                action = uniform_action(self._rng, self.alphabet.omega)
        elif self.mode == "sweep" and self._step < self.game_cap:
            action = self._sweep_action()
        else:
            action = uniform_action(self._rng, self.alphabet.omega)
        self._pending = action
        return action

    def observe(self, percept: int) -> None:
        self._game_actions.append(self._pending)
        self._step += 1
        if not self.alphabet.is_final(percept):
            return
        if percept == VICTORY:
            if self.mode != "victory":
                self._replay = list(self._game_actions)
                self.mode = "victory"
        elif self.mode == "sweep":
            if percept == DRAW:
                self._last_draw = list(self._game_actions)
            self._index += 1
            if self._index >= self._total:
                if self._last_draw is not None:
                    self._replay = self._last_draw
                    self.mode = "draw"
                else:
                    self.mode = "random"
        self._game_actions = []
        self._step = 0
        self._digits = None
