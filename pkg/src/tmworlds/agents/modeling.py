"""A player that infers the smallest world machine fitting its life so far
and plans against it.

The model search looks for a deterministic world machine that, simulated
from a fresh start over the whole recorded action sequence (with the
usual step caps and game segmentation applied), reproduces every recorded
percept.  State counts are tried in ascending order, and within one state
count the search backtracks over table rows in the order the simulation
first needs them.  Row values are tried in a fixed documented order
chosen to fail fast: output transitions whose percept can match the
recorded one, then transitions that rewrite the letter they read (small
machines rarely scramble their tape), then everything else ascending;
output transitions that cannot match the recorded percept are skipped
outright, since they would be refuted on the very next small step.  Rows
the transcript never exercises are filled with an output transition
writing victory.  The result is deterministic and minimal in state count,
though the within-size order differs from the flat row-major enumeration
(which is far too large to scan directly).

Unexercised rows default to an output transition writing victory, so an
adopted model is optimistic about untried branches; chasing those claims
is what drives the agent to either confirm them or contradict the model
and search again.  A search that fails — whether the bounded space is
exhausted or the trial budget runs out — fails for every longer
transcript too, so the agent then plays randomly for good.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ..alphabet import DRAW, AlphabetConfig
from ..game import Caps
from ..machines import MachineRunState, WorldMachine, world_respond
from ..worldspace import _single_options
from .base import AgentPolicy, uniform_action

_HALF = Fraction(1, 2)


@dataclass(frozen=True)
class TD6Config:
    """Model-search bounds: largest model tried, planning depth, and the
    per-search budget of candidate row assignments."""

    model_size_cap: int = 5
    search_depth: int = 4
    search_budget: int = 200_000

    def __post_init__(self):
        if self.model_size_cap < 1 or self.search_depth < 1 or self.search_budget < 1:
            raise ValueError("model_size_cap, search_depth and search_budget "
                             "must be positive")


@dataclass
class SearchStats:
    searches: int = 0
    adoptions: int = 0
    candidates_tried: int = 0
    last_adoption_at: Optional[int] = None
    model_states: Optional[int] = None
    exhausted: Optional[str] = None  # "space" or "budget" once a search fails


class _Sim:
    """Resumable simulation of a (partial) deterministic table over a
    transcript, with world small-step cap and game segmentation applied."""

    __slots__ = ("tape", "state", "head", "t", "step_in_game", "small", "in_step")

    def __init__(self):
        self.tape: dict = {}
        self.state = 0
        self.head = 0
        self.t = 0
        self.step_in_game = 0
        self.small = 0
        self.in_step = False

    def clone(self) -> "_Sim":
        sim = _Sim()
        sim.tape = dict(self.tape)
        sim.state, sim.head, sim.t = self.state, self.head, self.t
        sim.step_in_game, sim.small, sim.in_step = (
            self.step_in_game, self.small, self.in_step)
        return sim


def _simulate(rows: dict, sim: _Sim, transcript: list, alphabet: AlphabetConfig,
              caps: Caps, reset_each_game: bool):
    """Advance ``sim`` as far as the assigned rows allow.

    Returns "done" (whole transcript reproduced), "mismatch", or
    ("need", key) when an unassigned row is required.
    """
    blank = alphabet.blank
    while sim.t < len(transcript):
        action, recorded = transcript[sim.t]
        if not sim.in_step:
            sim.tape[sim.head] = action
            sim.in_step = True
            sim.small = 0
        percept = None
        while percept is None:
            letter = sim.tape.get(sim.head, blank)
            key = (sim.state, letter)
            tr = rows.get(key)
            if tr is None:
                return ("need", key)
            if sim.small >= caps.world_small_step_cap:
                sim.tape[sim.head] = DRAW
                sim.head += 1 if tr.move == "R" else -1
                sim.state = 0
                sim.small += 1
                percept = DRAW
                break
            sim.tape[sim.head] = tr.write
            sim.head += 1 if tr.move == "R" else -1
            sim.state = tr.next_state
            sim.small += 1
            if tr.next_state == 0:
                percept = tr.write
        sim.step_in_game += 1
        if not alphabet.is_final(percept) and sim.step_in_game >= caps.game_big_step_cap:
            percept = DRAW
        if percept != recorded:
            return "mismatch"
        sim.t += 1
        sim.in_step = False
        if alphabet.is_final(percept):
            sim.step_in_game = 0
            if reset_each_game:
                sim.tape = {}
                sim.state = 0
                sim.head = 0
    return "done"


def _decision_candidates(read_letter: int, sim: _Sim, transcript: list,
                         alphabet: AlphabetConfig, caps: Caps,
                         outputs: list, nonout_same: dict,
                         nonout_other: dict) -> list:
    """Row values worth trying at this decision point, in canonical order.

    When the pending small step would complete the big step uncapped, an
    output transition yields its written percept immediately, so outputs
    that cannot match the recorded percept are dropped.  Once the step cap
    has fired only the head direction of the row matters.
    """
    recorded = transcript[sim.t][1]
    if sim.small >= caps.world_small_step_cap:
        # the forced draw completes this step no matter what is assigned
        if recorded != DRAW:
            return []
        return outputs + nonout_same[read_letter] + nonout_other[read_letter]
    forced_game_end = sim.step_in_game + 1 >= caps.game_big_step_cap
    viable = []
    for tr in outputs:
        percept = tr.write
        if forced_game_end and not alphabet.is_final(percept):
            percept = DRAW
        if percept == recorded:
            viable.append(tr)
    return viable + nonout_same[read_letter] + nonout_other[read_letter]


def find_shortest_model(alphabet: AlphabetConfig, transcript: list, max_states: int,
                        caps: Caps, reset_each_game: bool,
                        budget: int) -> tuple[Optional[WorldMachine], str, int]:
    """First deterministic machine consistent with ``transcript``, searching
    state counts 1..max_states.

    Within one state count the search deepens iteratively on the number of
    assigned rows, so machines that explain the transcript with few
    distinct rows are found first and deep dead-end walks are cut early.
    A deepening level that never hit its row limit has explored the whole
    space for that state count, so the search then moves on.

    Returns (machine, reason, candidates_tried); machine is None with
    reason "space" or "budget" when the search fails.
    """
    tried = 0
    letters = alphabet.n_world_letters
    for states in range(1, max_states + 1):
        options = _single_options(states, letters, alphabet.n_sigma)
        outputs = sorted((tr for tr in options if tr.next_state == 0),
                         key=lambda t: (t.write, t.move))
        nonout_same = {b: sorted((tr for tr in options
                                  if tr.next_state != 0 and tr.write == b))
                       for b in range(letters)}
        nonout_other = {b: sorted((tr for tr in options
                                   if tr.next_state != 0 and tr.write != b))
                        for b in range(letters)}
        for row_limit in range(1, states * letters + 1):
            rows: dict = {}
            sim = _Sim()
            frames: list = []  # (key, candidate list, next index, snapshot)
            cut = False
            while True:
                outcome = _simulate(rows, sim, transcript, alphabet, caps,
                                    reset_each_game)
                if outcome == "done":
                    table = dict(rows)
                    for state in range(states):
                        for letter in range(letters):
                            table.setdefault((state, letter), options[0])
                    machine = WorldMachine(
                        states, 0, {k: (tr,) for k, tr in table.items()}, alphabet)
                    return machine, "found", tried
                if outcome != "mismatch":
                    _, key = outcome
                    if len(rows) >= row_limit:
                        cut = True
                        candidates = []
                    else:
                        candidates = _decision_candidates(
                            key[1], sim, transcript, alphabet, caps,
                            outputs, nonout_same, nonout_other)
                    frames.append([key, candidates, 0, sim.clone()])
                # advance to the next untried candidate, backtracking as needed
                while frames:
                    frame = frames[-1]
                    if frame[2] >= len(frame[1]):
                        rows.pop(frame[0], None)
                        frames.pop()
                        continue
                    tried += 1
                    if tried > budget:
                        return None, "budget", tried
                    rows[frame[0]] = frame[1][frame[2]]
                    frame[2] += 1
                    sim = frame[3].clone()
                    break
                else:
                    break  # this deepening level is exhausted
            if not cut:
                break  # the whole space for this state count was explored
    return None, "space", tried


class ShortestModelAgent(AgentPolicy):
    """Adopts the smallest world model consistent with its whole life and
    plans by depth-limited search on it.

    The model is re-checked against every new percept; a wrong prediction
    drops it and triggers a fresh search over the grown transcript.  While
    no model is held (or after a search has failed for good) the agent
    plays uniformly at random.  Planning looks ``search_depth`` big steps
    ahead within the current game: final percepts score their payoff,
    deeper horizons score the draw value 1/2, and ties break to the lowest
    action id.
    """

    def __init__(self, alphabet: AlphabetConfig, config: TD6Config, caps: Caps,
                 seed: Optional[int], reset_world_each_game: bool = False):
        self.alphabet = alphabet
        self.config = config
        self.caps = caps
        self.reset_world_each_game = reset_world_each_game
        self.stats = SearchStats()
        self._rng = random.Random(seed)
        self._transcript: list = []
        self._model: Optional[WorldMachine] = None
        self._model_run: Optional[MachineRunState] = None
        self._gave_up = False
        self._step_in_game = 0
        self._pending: Optional[int] = None

    # -- model bookkeeping -------------------------------------------------

    def _advance_model(self, run: MachineRunState, action: int,
                       step_in_game: int) -> int:
        """One model big step with game rules; returns the effective percept."""
        step = world_respond(run, action, None, self.caps.world_small_step_cap)
        percept = step.percept
        if (not self.alphabet.is_final(percept)
                and step_in_game + 1 >= self.caps.game_big_step_cap):
            percept = DRAW
        return percept

    def _replay_model(self, machine: WorldMachine) -> MachineRunState:
        run = MachineRunState.fresh(machine)
        step_in_game = 0
        for action, recorded in self._transcript:
            percept = self._advance_model(run, action, step_in_game)
            assert percept == recorded, "search returned an inconsistent model"
            step_in_game += 1
            if self.alphabet.is_final(percept):
                step_in_game = 0
                if self.reset_world_each_game:
                    run = MachineRunState.fresh(machine)
        return run

    def _search(self) -> None:
        self.stats.searches += 1
        machine, reason, tried = find_shortest_model(
            self.alphabet, self._transcript, self.config.model_size_cap,
            self.caps, self.reset_world_each_game, self.config.search_budget)
        self.stats.candidates_tried += tried
        if machine is None:
            self._gave_up = True
            self.stats.exhausted = reason
            return
        self._model = machine
        self._model_run = self._replay_model(machine)
        self.stats.adoptions += 1
        self.stats.last_adoption_at = len(self._transcript)
        self.stats.model_states = machine.n_states

    # -- planning ------------------------------------------------------------

    def _plan_value(self, run: MachineRunState, step_in_game: int, action: int,
                    depth: int) -> Fraction:
        work = run.clone()
        percept = self._advance_model(work, action, step_in_game)
        if self.alphabet.is_final(percept):
            return self.alphabet.payoff(percept)
        if depth <= 1:
            return _HALF
        best = None
        for next_action in self.alphabet.omega:
            value = self._plan_value(work, step_in_game + 1, next_action, depth - 1)
            if best is None or value > best:
                best = value
        return best

    def _plan(self) -> int:
        best_action, best_value = None, None
        for action in self.alphabet.omega:
            value = self._plan_value(self._model_run, self._step_in_game, action,
                                     self.config.search_depth)
            if best_value is None or value > best_value:
                best_action, best_value = action, value
        return best_action

    # -- policy interface ------------------------------------------------------

    def next_action(self) -> int:
        if self._model is None and not self._gave_up:
            self._search()
        if self._model is None:
            action = uniform_action(self._rng, self.alphabet.omega)
        else:
            action = self._plan()
        self._pending = action
        return action

    def observe(self, percept: int) -> None:
        self._transcript.append((self._pending, percept))
        if self._model is not None:
            predicted = self._advance_model(self._model_run, self._pending,
                                            self._step_in_game)
            if predicted != percept:
                self._model = None
                self._model_run = None
        self._step_in_game += 1
        if self.alphabet.is_final(percept):
            self._step_in_game = 0
            if self._model is not None and self.reset_world_each_game:
                self._model_run = MachineRunState.fresh(self._model)
