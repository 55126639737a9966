"""Tapes, machine descriptions, and exact step semantics.

Two machine kinds share the tape model:

* ``AgentMachine`` — a deterministic transducer.  It runs small steps
  until a transition lands back on the start state; the letter written by
  that transition is the emitted action, and the following percept is
  written under the (already moved) head.

* ``WorldMachine`` — a total relation.  Transitions whose target is the
  start state are *output* transitions; their written letter is the
  percept.  Several transitions may share a (state, letter) source only
  if all of them are output transitions ("a nondeterminism group"), and
  group members must emit pairwise distinct percepts.  One member is
  drawn uniformly at random when the group fires.

A big step is one emit/absorb exchange; a small step is one transition.
If a world machine runs more than ``small_step_cap`` small steps inside
one big step, the step is completed as if the executing transition
targeted the start state and wrote ``draw``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional

from . import defaults
from .alphabet import DRAW, AlphabetConfig
from .errors import (
    AgentHalted,
    BadLetter,
    BranchExplosion,
    DirectionOnlyDuplicate,
    IllegalNondeterminism,
    MissingStart,
    NonActionOutput,
    NonSigmaOutput,
    NotTotal,
    SmallStepCapExceeded,
    UnknownState,
)

LEFT = "L"
RIGHT = "R"
_HEAD_DELTA = {LEFT: -1, RIGHT: 1}


class Transition(NamedTuple):
    """One table entry: go to ``next_state``, write ``write``, move ``move``."""

    next_state: int
    write: int
    move: str


class Tape(object):
    """Two-sided unbounded tape; unwritten cells read as the blank."""

    __slots__ = ("blank", "_cells")

    def __init__(self, blank: int, cells: Optional[dict] = None):
        self.blank = blank
        self._cells = dict(cells) if cells else {}

    def read(self, pos: int) -> int:
        return self._cells.get(pos, self.blank)

    def write(self, pos: int, letter: int) -> None:
        if letter == self.blank:
            self._cells.pop(pos, None)
        else:
            self._cells[pos] = letter

    def nonblank_items(self) -> tuple:
        return tuple(sorted(self._cells.items()))

    def clone(self) -> "Tape":
        return Tape(self.blank, self._cells)


def _check_states(n_states: int, start: int, keys: Iterable[tuple]) -> None:
    if not 0 <= start < n_states:
        raise MissingStart(f"start state {start} not among {n_states} states")
    for state, _ in keys:
        if not 0 <= state < n_states:
            raise UnknownState(f"source state {state} not among {n_states} states")


@dataclass(frozen=True)
class AgentMachine:
    """A validated agent machine description.

    ``table`` maps (state, letter) to a single transition.  The letter
    alphabet is sigma + omega + blank plus ``service_names`` extras.
    ``small_step_cap`` bounds the small steps of one big step; ``None``
    leaves the machine unbounded (it may then hang).
    """

    n_states: int
    start: int
    table: dict
    alphabet: AlphabetConfig
    service_names: tuple[str, ...] = ()
    small_step_cap: Optional[int] = defaults.AGENT_SMALL_STEP_CAP

    def __post_init__(self):
        _check_states(self.n_states, self.start, self.table.keys())
        n_letters = self.n_letters
        for (state, letter), tr in self.table.items():
            if not 0 <= letter < n_letters:
                raise BadLetter(f"read letter {letter} outside the agent alphabet")
            if not 0 <= tr.next_state < self.n_states:
                raise UnknownState(f"target state {tr.next_state} not among {self.n_states} states")
            if not 0 <= tr.write < n_letters:
                raise BadLetter(f"written letter {tr.write} outside the agent alphabet")
            if tr.move not in _HEAD_DELTA:
                raise BadLetter(f"direction {tr.move!r} must be L or R")

    @property
    def n_letters(self) -> int:
        return self.alphabet.n_world_letters + len(self.service_names)

    def letter_name(self, letter: int) -> str:
        if letter >= self.alphabet.n_world_letters:
            return self.service_names[letter - self.alphabet.n_world_letters]
        return self.alphabet.name(letter)

    def key(self) -> tuple:
        return (self.n_states, self.start, tuple(sorted(self.table.items())))


@dataclass(frozen=True)
class WorldMachine:
    """A validated world machine description.

    ``rows`` maps every (state, letter) over sigma + omega + blank to a
    canonically sorted tuple of transitions.  Rows with two or more
    entries are nondeterminism groups.
    """

    n_states: int
    start: int
    rows: dict
    alphabet: AlphabetConfig

    def __post_init__(self):
        _check_states(self.n_states, self.start, self.rows.keys())
        ab = self.alphabet
        n_letters = ab.n_world_letters
        canon = {}
        for (state, letter), transitions in self.rows.items():
            if not 0 <= letter < n_letters:
                raise BadLetter(f"read letter {letter} outside the world alphabet")
            group = tuple(sorted(set(transitions)))
            if not group:
                raise NotTotal(f"empty transition row at state {state}")
            for tr in group:
                if not 0 <= tr.next_state < self.n_states:
                    raise UnknownState(
                        f"target state {tr.next_state} not among {self.n_states} states")
                if not 0 <= tr.write < n_letters:
                    raise BadLetter(f"written letter {tr.write} outside the world alphabet")
                if tr.move not in _HEAD_DELTA:
                    raise BadLetter(f"direction {tr.move!r} must be L or R")
                if tr.next_state == self.start and not ab.is_sigma(tr.write):
                    raise NonSigmaOutput(
                        f"output transition at ({state}, {letter}) writes non-percept "
                        f"{tr.write}")
            seen = {}
            for tr in group:
                prev = seen.get((tr.next_state, tr.write))
                if prev is not None and prev.move != tr.move:
                    raise DirectionOnlyDuplicate(
                        f"transitions at ({state}, {letter}) differ only in direction")
                seen[(tr.next_state, tr.write)] = tr
            if len(group) > 1:
                for tr in group:
                    if tr.next_state != self.start:
                        raise IllegalNondeterminism(
                            f"non-output transitions share source ({state}, {letter})")
            # groups sort by emitted percept so random draws are reproducible
            canon[(state, letter)] = tuple(sorted(group, key=lambda t: (t.write, t.move)))
        for state in range(self.n_states):
            for letter in range(n_letters):
                if (state, letter) not in canon:
                    raise NotTotal(f"no transition for state {state}, "
                                   f"letter {ab.name(letter)!r}")
        object.__setattr__(self, "rows", canon)

    @property
    def indefiniteness(self) -> int:
        """Count of group transitions beyond one per group."""
        return sum(len(g) - 1 for g in self.rows.values() if len(g) > 1)

    @property
    def size(self) -> int:
        return self.n_states + self.indefiniteness

    @property
    def is_deterministic(self) -> bool:
        return self.indefiniteness == 0

    def key(self) -> tuple:
        return (self.n_states, self.start, tuple(sorted(self.rows.items())))


def new_agent_machine(n_states, start, table, alphabet, service_names=(),
                      small_step_cap=defaults.AGENT_SMALL_STEP_CAP) -> AgentMachine:
    """Validate and build an agent machine; raises a MachineSpecError subclass."""
    return AgentMachine(n_states, start, dict(table), alphabet,
                        tuple(service_names), small_step_cap)


def new_world_machine(n_states, start, rows, alphabet) -> WorldMachine:
    """Validate and build a world machine; raises a MachineSpecError subclass.

    ``rows`` may map (state, letter) to a single Transition or to an
    iterable of them.
    """
    normalized = {}
    for key, value in rows.items():
        if isinstance(value, Transition):
            normalized[key] = (value,)
        else:
            normalized[key] = tuple(value)
    return WorldMachine(n_states, start, normalized, alphabet)


def world_size(machine: WorldMachine) -> int:
    """State count plus indefiniteness (extra transitions in groups)."""
    return machine.size


@dataclass
class MachineRunState:
    """Mutable execution state of one machine: tape, control state, counters."""

    machine: object
    tape: Tape
    state: int
    head: int = 0
    small_steps_this_big_step: int = 0
    big_steps_total: int = 0

    @classmethod
    def fresh(cls, machine) -> "MachineRunState":
        return cls(machine, Tape(machine.alphabet.blank), machine.start)

    def clone(self) -> "MachineRunState":
        return MachineRunState(self.machine, self.tape.clone(), self.state, self.head,
                               self.small_steps_this_big_step, self.big_steps_total)

    def config_key(self) -> tuple:
        """Hashable snapshot of (control state, head, tape content)."""
        return (self.state, self.head, self.tape.nonblank_items())


# -- agent stepping ---------------------------------------------------------

def agent_emit(run: MachineRunState) -> int:
    """Run small steps until a transition re-enters the start state.

    Returns the action letter written by that final transition; the head
    has already moved, so the next percept lands on a fresh cell.
    """
    machine = run.machine
    cap = machine.small_step_cap
    run.small_steps_this_big_step = 0
    while True:
        if cap is not None and run.small_steps_this_big_step >= cap:
            raise SmallStepCapExceeded(
                f"no big step within {cap} small steps")
        letter = run.tape.read(run.head)
        tr = machine.table.get((run.state, letter))
        if tr is None:
            raise AgentHalted(
                f"no rule for state {run.state}, letter {machine.letter_name(letter)!r}")
        run.tape.write(run.head, tr.write)
        run.head += _HEAD_DELTA[tr.move]
        run.state = tr.next_state
        run.small_steps_this_big_step += 1
        if tr.next_state == machine.start:
            if not machine.alphabet.is_omega(tr.write):
                raise NonActionOutput(
                    f"emitted {machine.letter_name(tr.write)!r}, not an action letter")
            run.small_steps_this_big_step = 0
            run.big_steps_total += 1
            return tr.write


def agent_absorb(run: MachineRunState, percept: int) -> None:
    """Overwrite the cell under the head with the incoming percept."""
    if not run.machine.alphabet.is_sigma(percept):
        raise BadLetter(f"percept {percept} is not a sigma letter")
    run.tape.write(run.head, percept)


# -- world stepping ---------------------------------------------------------

class WorldStep(NamedTuple):
    percept: int
    small_steps: int
    cap_fired: bool


class WorldOutcome(NamedTuple):
    percept: int
    probability: Fraction
    run: MachineRunState
    cap_fired: bool


def _check_action(machine: WorldMachine, action: int) -> None:
    if not machine.alphabet.is_omega(action):
        raise BadLetter(f"action {action} is not an omega letter")


def world_respond(run: MachineRunState, action: int, rng: Optional[random.Random],
                  small_step_cap: int = defaults.WORLD_SMALL_STEP_CAP) -> WorldStep:
    """Write the action under the head and run one big step in place.

    Within a nondeterminism group one transition is drawn uniformly via
    ``rng`` (groups are stored sorted by percept, so a fixed seed gives a
    reproducible run).  After ``small_step_cap`` small steps the step is
    force-completed with percept ``draw``, keeping the head move of the
    canonically first matching transition.
    """
    machine = run.machine
    _check_action(machine, action)
    run.tape.write(run.head, action)
    steps = 0
    while True:
        group = machine.rows[(run.state, run.tape.read(run.head))]
        if steps >= small_step_cap:
            run.tape.write(run.head, DRAW)
            run.head += _HEAD_DELTA[group[0].move]
            run.state = machine.start
            steps += 1
            run.small_steps_this_big_step = 0
            run.big_steps_total += 1
            return WorldStep(DRAW, steps, True)
        tr = group[0] if len(group) == 1 else group[rng.randrange(len(group))]
        run.tape.write(run.head, tr.write)
        run.head += _HEAD_DELTA[tr.move]
        run.state = tr.next_state
        steps += 1
        run.small_steps_this_big_step = steps
        if tr.next_state == machine.start:
            run.small_steps_this_big_step = 0
            run.big_steps_total += 1
            return WorldStep(tr.write, steps, False)


def world_outcomes(run: MachineRunState, action: int,
                   small_step_cap: int = defaults.WORLD_SMALL_STEP_CAP,
                   branch_bound: int = defaults.BRANCH_BOUND) -> list[WorldOutcome]:
    """All percepts reachable in one big step, with exact probabilities.

    The input run is not modified; each outcome carries its own successor
    run.  Execution is deterministic until the first nondeterminism group
    fires, and firing a group always completes the big step, so exactly
    one branch point can occur.  Probabilities sum to 1.
    """
    machine = run.machine
    _check_action(machine, action)
    work = run.clone()
    work.tape.write(work.head, action)
    steps = 0
    while True:
        group = machine.rows[(work.state, work.tape.read(work.head))]
        if steps >= small_step_cap:
            work.tape.write(work.head, DRAW)
            work.head += _HEAD_DELTA[group[0].move]
            work.state = machine.start
            work.small_steps_this_big_step = 0
            work.big_steps_total += 1
            return [WorldOutcome(DRAW, Fraction(1), work, True)]
        if len(group) == 1:
            tr = group[0]
            work.tape.write(work.head, tr.write)
            work.head += _HEAD_DELTA[tr.move]
            work.state = tr.next_state
            steps += 1
            if tr.next_state == machine.start:
                work.small_steps_this_big_step = 0
                work.big_steps_total += 1
                return [WorldOutcome(tr.write, Fraction(1), work, False)]
            work.small_steps_this_big_step = steps
            continue
        if len(group) > branch_bound:
            raise BranchExplosion(f"{len(group)} branches in one big step")
        prob = Fraction(1, len(group))
        outcomes = []
        for tr in group:
            branch = work.clone()
            branch.tape.write(branch.head, tr.write)
            branch.head += _HEAD_DELTA[tr.move]
            branch.state = tr.next_state
            branch.small_steps_this_big_step = 0
            branch.big_steps_total += 1
            outcomes.append(WorldOutcome(tr.write, prob, branch, False))
        return outcomes
