"""Shared fixtures: the minimal alphabet and hand-built toy worlds."""

from __future__ import annotations

import pytest

from tmworlds import AlphabetConfig
from tmworlds.machines import Transition, WorldMachine, new_world_machine


@pytest.fixture
def ab() -> AlphabetConfig:
    return AlphabetConfig.minimal()


def build_world(ab: AlphabetConfig, n_states: int, rules: dict,
                default=(0, "loss", "R")) -> WorldMachine:
    """Build a total world machine from sparse, name-based rules.

    ``rules`` maps (state, letter name) to one (next_state, write name,
    move) triple or a list of them; every unspecified row gets ``default``.
    """

    def to_transition(spec):
        next_state, write_name, move = spec
        return Transition(next_state, ab.id_of(write_name), move)

    rows = {}
    for state in range(n_states):
        for letter in range(ab.n_world_letters):
            spec = rules.get((state, ab.name(letter)), default)
            if isinstance(spec, tuple):
                rows[(state, letter)] = (to_transition(spec),)
            else:
                rows[(state, letter)] = tuple(to_transition(s) for s in spec)
    return new_world_machine(n_states, 0, rows, ab)


def always_victory_world(ab) -> WorldMachine:
    return build_world(ab, 1, {}, default=(0, "victory", "R"))


def always_loss_world(ab) -> WorldMachine:
    return build_world(ab, 1, {}, default=(0, "loss", "R"))


def never_final_world(ab) -> WorldMachine:
    """Responds s0 to everything; games only end at the big-step cap."""
    return build_world(ab, 1, {}, default=(0, "s0", "R"))


def silent_world(ab) -> WorldMachine:
    """Never outputs: loops between two states until the small-step cap."""
    rules = {}
    for letter in range(ab.n_world_letters):
        rules[(0, ab.name(letter))] = (1, ab.name(letter), "R")
        rules[(1, ab.name(letter))] = (1, ab.name(letter), "R")
    return build_world(ab, 2, rules)


def two_step_victory_world(ab) -> WorldMachine:
    """Victory exactly on the action sequence (a0, a0); a1 loses at once.

    The first a0 answers s0; seeing s0 on the tape afterwards is how the
    machine knows a0 was already played.
    """
    return build_world(ab, 2, {
        (0, "a0"): (1, "a0", "R"),
        (1, "_"): (0, "s0", "L"),
        (1, "s0"): (0, "victory", "R"),
    })


def fifty_fifty_world(ab) -> WorldMachine:
    """a0 wins or loses with probability 1/2 each; a1 draws."""
    return build_world(ab, 1, {
        (0, "a0"): [(0, "victory", "R"), (0, "loss", "R")],
        (0, "a1"): (0, "draw", "R"),
    })


def three_way_world(ab) -> WorldMachine:
    """a0 resolves uniformly over all three final letters."""
    return build_world(ab, 1, {
        (0, "a0"): [(0, "victory", "R"), (0, "loss", "R"), (0, "draw", "R")],
        (0, "a1"): (0, "draw", "R"),
    })


def random_world(ab: AlphabetConfig, rng, max_states: int = 3,
                 group_rate: float = 0.2, deterministic: bool = False) -> WorldMachine:
    """A random valid world machine with up to ``max_states`` states."""
    n_states = rng.randint(1, max_states)
    rows = {}
    for state in range(n_states):
        for letter in range(ab.n_world_letters):
            if not deterministic and rng.random() < group_rate:
                k = rng.randint(2, 3)
                letters = rng.sample(range(ab.n_sigma), k)
                rows[(state, letter)] = tuple(
                    Transition(0, b, rng.choice("LR")) for b in letters)
            else:
                nxt = rng.randrange(n_states)
                write = (rng.randrange(ab.n_sigma) if nxt == 0
                         else rng.randrange(ab.n_world_letters))
                rows[(state, letter)] = (Transition(nxt, write, rng.choice("LR")),)
    return new_world_machine(n_states, 0, rows, ab)
