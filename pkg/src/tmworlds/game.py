"""Games, lives, and the success metric.

A game alternates agent action and world percept until a final percept
(victory, loss or draw) arrives.  Two caps keep games finite: the world's
own small-step cap (enforced inside ``world_respond``) and the big-step
cap enforced here — when a game reaches ``game_big_step_cap`` exchanges
without a final percept, the percept of that step is replaced by draw and
delivered to the agent, so agents can segment games without any side
channel.

A life is a fixed number of consecutive games against one world instance.
The world's tape persists across games unless ``reset_world_each_game``
is set.  Success values a life as (2*victories + draws) / (2*games).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import defaults
from .alphabet import DRAW, LOSS, AlphabetConfig
from .errors import AgentFailure, EmptyLife, ParseError
from .machines import MachineRunState, WorldMachine, world_respond

TERM_FINAL_LETTER = "final_letter"
TERM_BIG_STEP_CAP = "big_step_cap"
TERM_WORLD_SMALL_STEP_CAP = "world_small_step_cap"
TERM_AGENT_ERROR = "agent_error"


@dataclass(frozen=True)
class Caps:
    """Runtime bounds; defaults follow the standard parameter set."""

    game_big_step_cap: int = defaults.GAME_BIG_STEP_CAP
    world_small_step_cap: int = defaults.WORLD_SMALL_STEP_CAP
    life_games: int = defaults.LIFE_GAMES
    agent_small_step_cap: int = defaults.AGENT_SMALL_STEP_CAP

    def __post_init__(self):
        for name in ("game_big_step_cap", "world_small_step_cap",
                     "life_games", "agent_small_step_cap"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class OutcomeCounts:
    n_victory: int = 0
    n_loss: int = 0
    n_draw: int = 0
    n_games: int = 0

    def __post_init__(self):
        if self.n_victory + self.n_loss + self.n_draw != self.n_games:
            raise ValueError("outcome counts must sum to the game count")

    def add(self, outcome: int) -> "OutcomeCounts":
        return OutcomeCounts(self.n_victory + (outcome == 0),
                             self.n_loss + (outcome == 1),
                             self.n_draw + (outcome == 2),
                             self.n_games + 1)


@dataclass(frozen=True)
class GameRecord:
    """Transcript of one game: (action, percept) moves and how it ended."""

    moves: tuple
    outcome: int
    big_steps: int
    termination: str


@dataclass(frozen=True)
class LifeRecord:
    games: tuple
    counts: OutcomeCounts
    seed: Optional[int]


def play_game(agent, world_run: MachineRunState, caps: Caps,
              rng: Optional[random.Random]) -> GameRecord:
    """Play one game in place on ``world_run``; the agent is mutated too.

    An AgentFailure from the agent forfeits the game: it is recorded as a
    loss with termination ``agent_error`` and no percept is delivered.
    """
    moves = []
    for step in range(1, caps.game_big_step_cap + 1):
        try:
            action = agent.next_action()
        except AgentFailure:
            return GameRecord(tuple(moves), LOSS, step - 1, TERM_AGENT_ERROR)
        world_step = world_respond(world_run, action, rng, caps.world_small_step_cap)
        percept = world_step.percept
        alphabet = world_run.machine.alphabet
        if world_step.cap_fired:
            termination = TERM_WORLD_SMALL_STEP_CAP
        elif alphabet.is_final(percept):
            termination = TERM_FINAL_LETTER
        elif step == caps.game_big_step_cap:
            percept = DRAW
            termination = TERM_BIG_STEP_CAP
        else:
            termination = ""
        agent.observe(percept)
        moves.append((action, percept))
        if termination:
            return GameRecord(tuple(moves), percept, step, termination)
    raise AssertionError("unreachable: the big-step cap forces a draw")


def play_life(agent, world: WorldMachine, caps: Caps, seed: Optional[int],
              n_games: Optional[int] = None,
              reset_world_each_game: bool = False) -> LifeRecord:
    """Play a full life against a fresh instance of ``world``.

    ``n_games`` overrides ``caps.life_games`` (0 gives an empty life).
    With ``reset_world_each_game`` every game starts from a blank world
    tape, making games independent; by default the tape carries over.
    """
    rng = random.Random(seed) if seed is not None else None
    total = caps.life_games if n_games is None else n_games
    run = MachineRunState.fresh(world)
    games = []
    counts = OutcomeCounts()
    for index in range(total):
        if reset_world_each_game and index:
            run = MachineRunState.fresh(world)
        record = play_game(agent, run, caps, rng)
        games.append(record)
        counts = counts.add(record.outcome)
    return LifeRecord(tuple(games), counts, seed)


def success(counts: OutcomeCounts) -> Fraction:
    """(2*victories + draws) / (2*games), exactly."""
    if counts.n_games == 0:
        raise EmptyLife("success is undefined for zero games")
    return Fraction(2 * counts.n_victory + counts.n_draw, 2 * counts.n_games)


def success_prefix_series(life: LifeRecord) -> list[Fraction]:
    """The k-th element is the success over the first k games."""
    if not life.games:
        raise EmptyLife("a non-empty life is required")
    series = []
    counts = OutcomeCounts()
    for record in life.games:
        counts = counts.add(record.outcome)
        series.append(success(counts))
    return series


def limit_estimate(life: LifeRecord, tail_window: Optional[int] = None) -> Fraction:
    """Midpoint of the prefix-series range over a trailing window.

    A finite-run stand-in for averaging the series' limit inferior and
    limit superior; the window defaults to the last half of the series.
    """
    series = success_prefix_series(life)
    if tail_window is None:
        tail = series[len(series) // 2:]
    else:
        if tail_window < 1:
            raise ValueError("tail_window must be positive")
        tail = series[-tail_window:]
    return Fraction(min(tail) + max(tail), 2)


# -- transcript serialization -------------------------------------------------

_LIFE_FORMAT = "life-format 1"


def life_to_text(life: LifeRecord, alphabet: AlphabetConfig, caps: Caps,
                 world_hash: str, reset_world_each_game: bool = False) -> str:
    """Stable line-oriented transcript of one life."""
    lines = [
        _LIFE_FORMAT,
        f"seed {'none' if life.seed is None else life.seed}",
        (f"caps game_big_step_cap={caps.game_big_step_cap} "
         f"world_small_step_cap={caps.world_small_step_cap} "
         f"life_games={caps.life_games} "
         f"agent_small_step_cap={caps.agent_small_step_cap}"),
        f"world sha256={world_hash}",
        f"reset_world_each_game {'true' if reset_world_each_game else 'false'}",
        "alphabet sigma " + " ".join(alphabet.sigma_names)
        + " omega " + " ".join(alphabet.omega_names),
    ]
    for number, game in enumerate(life.games, start=1):
        lines.append(f"game {number} outcome {alphabet.name(game.outcome)} "
                     f"termination {game.termination} big_steps {game.big_steps}")
        moves = " ".join(f"{alphabet.name(a)}:{alphabet.name(p)}" for a, p in game.moves)
        lines.append(f"  moves {moves}".rstrip())
    lines.append("end")
    return "\n".join(lines) + "\n"


def parse_life_text(text: str) -> tuple[LifeRecord, dict]:
    """Parse a transcript back into a LifeRecord plus its metadata."""
    lines = text.splitlines()
    if not lines or lines[0].strip() != _LIFE_FORMAT:
        raise ParseError(1, f"expected header {_LIFE_FORMAT!r}")
    meta: dict = {}
    alphabet = None
    games = []
    counts = OutcomeCounts()
    pending = None  # (outcome, termination, big_steps) awaiting its moves line
    for line_no, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "seed":
            meta["seed"] = None if parts[1] == "none" else int(parts[1])
        elif parts[0] == "caps":
            caps_kv = dict(item.split("=") for item in parts[1:])
            meta["caps"] = Caps(**{k: int(v) for k, v in caps_kv.items()})
        elif parts[0] == "world":
            meta["world_hash"] = parts[1].split("=", 1)[1]
        elif parts[0] == "reset_world_each_game":
            meta["reset_world_each_game"] = parts[1] == "true"
        elif parts[0] == "alphabet":
            omega_at = parts.index("omega")
            sigma = parts[2:omega_at]
            alphabet = AlphabetConfig(("victory", "loss", "draw") + tuple(sigma[3:]),
                                      tuple(parts[omega_at + 1:]))
            meta["alphabet"] = alphabet
        elif parts[0] == "game":
            if pending is not None:
                raise ParseError(line_no, "game header without a moves line")
            if alphabet is None:
                raise ParseError(line_no, "games before the alphabet line")
            pending = (alphabet.id_of(parts[3]), parts[5], int(parts[7]))
        elif parts[0] == "moves":
            if pending is None:
                raise ParseError(line_no, "moves line without a game header")
            moves = []
            for item in parts[1:]:
                a_name, p_name = item.split(":")
                moves.append((alphabet.id_of(a_name), alphabet.id_of(p_name)))
            outcome, termination, big_steps = pending
            games.append(GameRecord(tuple(moves), outcome, big_steps, termination))
            counts = counts.add(outcome)
            pending = None
        elif parts[0] == "end":
            break
        else:
            raise ParseError(line_no, f"unexpected line {line!r}")
    if pending is not None:
        raise ParseError(len(lines), "transcript ended inside a game block")
    return LifeRecord(tuple(games), counts, meta.get("seed")), meta
