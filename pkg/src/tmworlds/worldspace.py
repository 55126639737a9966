"""Enumeration, counting, and uniform sampling of bounded-size worlds.

A world machine with ``p`` states over a tape alphabet of ``a`` letters is
a total table: one transition group per (state, letter) row, in row-major
order.  Machine size is the state count plus indefiniteness (transitions
beyond one per nondeterminism group), and the space of a given bound is
every valid table whose size fits.  Machines are *not* quotiented by
behavioral equivalence: simple behaviors recur across many syntactically
distinct tables, which is exactly the intended weighting.

Canonical order is by state count, then lexicographically by the flat
row-option vector (group members sorted by written letter).  The start
state is always q0; other labelings are renamings of the same table.

The raw count ``(2*p*a)**(p*a)`` ignores the validity constraints; the
``*_valid_deterministic`` helpers apply the single binding deterministic
constraint (rows returning to the start must write one of the first
``sigma_count`` letters) on an abstract (p, a, sigma) table space, which
keeps exhaustive cross-checks feasible.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from math import comb
from typing import Iterator

from .alphabet import AlphabetConfig
from .errors import BudgetExceeded
from .machines import Transition, WorldMachine

DETERMINISTIC_ONLY = "deterministic_only"
ALL_WORLDS = "all"


@dataclass(frozen=True)
class WorldSpaceSpec:
    """A bounded machine space: alphabet, size cap, determinism filter."""

    alphabet: AlphabetConfig
    max_size: int
    determinism: str = ALL_WORLDS

    def __post_init__(self):
        if self.max_size < 0:
            raise ValueError("max_size must be non-negative")
        if self.determinism not in (DETERMINISTIC_ONLY, ALL_WORLDS):
            raise ValueError(f"unknown determinism filter {self.determinism!r}")


# -- raw and abstract table counting -----------------------------------------

def count_raw_deterministic(states: int, tape_letters: int) -> int:
    """Unconstrained total deterministic tables: (2*p*a) ** (p*a)."""
    if states < 1 or tape_letters < 1:
        raise ValueError("states and tape_letters must be positive")
    return (2 * states * tape_letters) ** (states * tape_letters)


def _single_options(states: int, tape_letters: int, sigma_count: int,
                    start: int = 0) -> list[Transition]:
    options = []
    for nxt in range(states):
        writable = range(sigma_count) if nxt == start else range(tape_letters)
        for write in writable:
            for move in ("L", "R"):
                options.append(Transition(nxt, write, move))
    return sorted(options)


def count_valid_deterministic(states: int, tape_letters: int, sigma_count: int) -> int:
    """Valid total deterministic tables over the abstract (p, a, sigma) space."""
    per_row = 2 * sigma_count + 2 * tape_letters * (states - 1)
    return per_row ** (states * tape_letters)


def iter_valid_deterministic_tables(states: int, tape_letters: int,
                                    sigma_count: int) -> Iterator[tuple]:
    """Every valid deterministic table, canonically ordered.

    A table is a tuple with one Transition per (state, letter) row in
    row-major order; rows whose transition returns to the start state
    write one of the first ``sigma_count`` letters.
    """
    options = _single_options(states, tape_letters, sigma_count)
    rows = states * tape_letters
    return itertools.product(options, repeat=rows)


# -- real machine space -------------------------------------------------------

def _group_options(sigma_count: int, start: int, max_extra: int) -> list[tuple]:
    """Nondeterminism groups: >=2 output transitions with distinct percepts."""
    groups = []
    for k in range(2, sigma_count + 1):
        if k - 1 > max_extra:
            break
        for letters in itertools.combinations(range(sigma_count), k):
            for moves in itertools.product(("L", "R"), repeat=k):
                groups.append(tuple(Transition(start, b, m)
                                    for b, m in zip(letters, moves)))
    return groups


def _row_options(states: int, alphabet: AlphabetConfig, max_extra: int) -> list[tuple]:
    """All (extra, option) choices for one row, in canonical option order.

    ``option`` is a tuple of transitions (singletons for deterministic
    rows); ``extra`` is its contribution to indefiniteness.
    """
    singles = [(tr,) for tr in _single_options(states, alphabet.n_world_letters,
                                               alphabet.n_sigma)]
    groups = _group_options(alphabet.n_sigma, 0, max_extra)
    options = [(len(opt) - 1, opt) for opt in sorted(singles + groups)]
    return options


def enumerate_worlds(spec: WorldSpaceSpec, max_yield: int = 10 ** 6) -> Iterator[WorldMachine]:
    """Yield every valid machine of size <= max_size exactly once, in
    canonical order.  Raises BudgetExceeded past ``max_yield`` machines."""
    yielded = 0
    for machine in _enumerate(spec):
        yielded += 1
        if yielded > max_yield:
            raise BudgetExceeded(f"enumeration passed {max_yield} machines")
        yield machine


def _enumerate(spec: WorldSpaceSpec) -> Iterator[WorldMachine]:
    alphabet = spec.alphabet
    letters = alphabet.n_world_letters
    for states in range(1, spec.max_size + 1):
        allowance = 0 if spec.determinism == DETERMINISTIC_ONLY else spec.max_size - states
        options = _row_options(states, alphabet, allowance)
        keys = [(s, letter) for s in range(states) for letter in range(letters)]
        chosen: list = []

        def assign(index: int, remaining: int) -> Iterator[WorldMachine]:
            if index == len(keys):
                rows = dict(zip(keys, chosen))
                yield WorldMachine(states, 0, rows, alphabet)
                return
            for extra, option in options:
                if extra <= remaining:
                    chosen.append(option)
                    yield from assign(index + 1, remaining - extra)
                    chosen.pop()

        yield from assign(0, allowance)


def _poly_mul(x: list[int], y: list[int], trunc: int) -> list[int]:
    out = [0] * min(len(x) + len(y) - 1, trunc + 1)
    for i, xi in enumerate(x):
        if xi == 0 or i > trunc:
            continue
        for j, yj in enumerate(y):
            if i + j > trunc:
                break
            out[i + j] += xi * yj
    return out


def _row_poly(states: int, alphabet: AlphabetConfig, max_extra: int) -> list[int]:
    """Coefficient i = number of row options adding i to indefiniteness."""
    sigma = alphabet.n_sigma
    coeffs = [2 * sigma + 2 * alphabet.n_world_letters * (states - 1)]
    for k in range(2, sigma + 1):
        extra = k - 1
        if extra > max_extra:
            break
        coeffs.extend([0] * (extra - len(coeffs) + 1))
        coeffs[extra] = comb(sigma, k) * 2 ** k
    return coeffs


def _machine_count_poly(states: int, alphabet: AlphabetConfig,
                        max_extra: int) -> list[int]:
    """Coefficient i = machines with ``states`` states and indefiniteness i."""
    row = _row_poly(states, alphabet, max_extra)
    poly = [1]
    for _ in range(states * alphabet.n_world_letters):
        poly = _poly_mul(poly, row, max_extra)
    return poly


def count_worlds(spec: WorldSpaceSpec) -> int:
    """Exact number of valid machines of size <= max_size."""
    total = 0
    for states in range(1, spec.max_size + 1):
        allowance = 0 if spec.determinism == DETERMINISTIC_ONLY else spec.max_size - states
        total += sum(_machine_count_poly(states, spec.alphabet, allowance))
    return total


def sample_world(spec: WorldSpaceSpec, rng: random.Random) -> WorldMachine:
    """Draw one machine uniformly over the whole bounded space.

    Exact: the state count and indefiniteness are chosen by their counted
    weights, then rows are sampled sequentially with the matching
    conditional weights, so no rejection loop is needed.
    """
    if spec.max_size < 1:
        raise ValueError("cannot sample from an empty space")
    alphabet = spec.alphabet
    per_state_polys = {}
    total = 0
    for states in range(1, spec.max_size + 1):
        allowance = 0 if spec.determinism == DETERMINISTIC_ONLY else spec.max_size - states
        poly = _machine_count_poly(states, alphabet, allowance)
        per_state_polys[states] = poly
        total += sum(poly)
    index = rng.randrange(total)
    states = indef = None
    for p, poly in per_state_polys.items():
        for i, count in enumerate(poly):
            if index < count:
                states, indef = p, i
                break
            index -= count
        if states is not None:
            break

    allowance = 0 if spec.determinism == DETERMINISTIC_ONLY else spec.max_size - states
    row_poly = _row_poly(states, alphabet, allowance)
    n_rows = states * alphabet.n_world_letters
    suffix = [[1]]
    for _ in range(n_rows):
        suffix.append(_poly_mul(suffix[-1], row_poly, allowance))

    singles = _single_options(states, alphabet.n_world_letters, alphabet.n_sigma)
    groups_by_k: dict[int, list] = {}
    for group in _group_options(alphabet.n_sigma, 0, allowance):
        groups_by_k.setdefault(len(group), []).append(group)

    letters = alphabet.n_world_letters
    keys = [(s, letter) for s in range(states) for letter in range(letters)]
    rows = {}
    remaining = indef
    for row_index, key in enumerate(keys):
        rest = suffix[n_rows - row_index - 1]
        weights = []
        for extra, count in enumerate(row_poly):
            left = remaining - extra
            weight = count * rest[left] if 0 <= left < len(rest) else 0
            weights.append(weight)
        pick = rng.randrange(sum(weights))
        extra = 0
        for extra, weight in enumerate(weights):
            if pick < weight:
                break
            pick -= weight
        if extra == 0:
            rows[key] = (singles[rng.randrange(len(singles))],)
        else:
            bucket = groups_by_k[extra + 1]
            rows[key] = bucket[rng.randrange(len(bucket))]
        remaining -= extra
    return WorldMachine(states, 0, rows, alphabet)
