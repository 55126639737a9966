"""Default parameter values, kept in one place.

Every knob of the artifact has a default here: game and life caps, the
world-size bound, and the evaluation threshold.  Callers override them
through ``Caps``, ``WorldSpaceSpec`` and ``EvalConfig``.
"""

from fractions import Fraction

GAME_BIG_STEP_CAP = 1000
WORLD_SMALL_STEP_CAP = 800
LIFE_GAMES = 100
AGENT_SMALL_STEP_CAP = 100_000
MAX_WORLD_SIZE = 20
SUCCESS_THRESHOLD = Fraction(7, 10)

TREE_NODE_BUDGET = 10 ** 6
STRATEGY_BUDGET = 10 ** 6
BRANCH_BOUND = 64
