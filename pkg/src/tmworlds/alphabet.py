"""Letter alphabets for agent and world machines.

Letters are small integers assigned from a fixed layout:

    0, 1, 2          the three final percepts (victory, loss, draw)
    3 .. |sigma|-1   regular percepts
    then             action letters
    then             the blank
    then             per-agent service letters, if any

Percepts (sigma) always start with the three final letters, so id 0 is
victory, 1 is loss and 2 is draw for every alphabet.  Names appear only
in serialization; all runtime data uses the integer ids.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import BadLetter

VICTORY = 0
LOSS = 1
DRAW = 2

FINAL_NAMES = ("victory", "loss", "draw")

_PAYOFFS = {VICTORY: Fraction(1), LOSS: Fraction(0), DRAW: Fraction(1, 2)}


@dataclass(frozen=True)
class AlphabetConfig:
    """The percept set sigma, the action set omega, and the blank.

    ``sigma_names`` must begin with the three final letters.  Sigma needs
    at least two non-final percepts and omega at least two actions, so the
    smallest legal sigma has five letters.
    """

    sigma_names: tuple[str, ...]
    omega_names: tuple[str, ...]
    blank_name: str = "_"

    def __post_init__(self):
        if len(self.sigma_names) < 5:
            raise BadLetter("sigma needs the 3 final letters plus >= 2 percepts")
        if self.sigma_names[:3] != FINAL_NAMES:
            raise BadLetter(f"sigma must start with {FINAL_NAMES}")
        if len(self.omega_names) < 2:
            raise BadLetter("omega needs at least 2 action letters")
        names = self.sigma_names + self.omega_names + (self.blank_name,)
        if len(set(names)) != len(names):
            raise BadLetter("letter names must be pairwise distinct")

    @classmethod
    def make(cls, extra_sigma=("s0", "s1"), omega=("a0", "a1"), blank="_") -> "AlphabetConfig":
        return cls(FINAL_NAMES + tuple(extra_sigma), tuple(omega), blank)

    @classmethod
    def minimal(cls) -> "AlphabetConfig":
        """The smallest legal alphabet: 5 percepts, 2 actions, 1 blank."""
        return cls.make()

    # -- id layout ---------------------------------------------------------

    @property
    def n_sigma(self) -> int:
        return len(self.sigma_names)

    @property
    def n_omega(self) -> int:
        return len(self.omega_names)

    @property
    def sigma(self) -> tuple[int, ...]:
        return tuple(range(self.n_sigma))

    @property
    def omega(self) -> tuple[int, ...]:
        return tuple(range(self.n_sigma, self.n_sigma + self.n_omega))

    @property
    def blank(self) -> int:
        return self.n_sigma + self.n_omega

    @property
    def finals(self) -> tuple[int, int, int]:
        return (VICTORY, LOSS, DRAW)

    @property
    def n_world_letters(self) -> int:
        """Size of the world machine's tape alphabet: sigma + omega + blank."""
        return self.n_sigma + self.n_omega + 1

    @property
    def world_letters(self) -> tuple[int, ...]:
        return tuple(range(self.n_world_letters))

    # -- helpers -----------------------------------------------------------

    def is_sigma(self, letter: int) -> bool:
        return 0 <= letter < self.n_sigma

    def is_omega(self, letter: int) -> bool:
        return self.n_sigma <= letter < self.n_sigma + self.n_omega

    def is_final(self, letter: int) -> bool:
        return letter in (VICTORY, LOSS, DRAW)

    def payoff(self, letter: int) -> Fraction:
        """Game value of a final percept: 1, 0 or 1/2."""
        return _PAYOFFS[letter]

    def name(self, letter: int) -> str:
        names = self.sigma_names + self.omega_names + (self.blank_name,)
        if not 0 <= letter < len(names):
            raise BadLetter(f"letter id {letter} outside the world alphabet")
        return names[letter]

    def id_of(self, name: str) -> int:
        names = self.sigma_names + self.omega_names + (self.blank_name,)
        try:
            return names.index(name)
        except ValueError:
            raise BadLetter(f"unknown letter name {name!r}") from None
