"""Exhaustive best-strategy computation over a finite set of worlds."""

from __future__ import annotations

from fractions import Fraction

from .. import defaults
from ..game import Caps
from ..tree import StrategyNode, build_world_set_tree, max_sum


def td5_best_strategy(worlds, n_games: int, caps: Caps,
                      reset_each_game: bool = False,
                      max_nodes: int = defaults.TREE_NODE_BUDGET
                      ) -> tuple[StrategyNode, Fraction]:
    """The multigame strategy maximizing mean expected success over ``worlds``.

    Works on the exact mixture tree of the world set, so the returned value
    equals the arithmetic mean of the strategy's expected success in each
    world.  Only feasible at desk scale; larger inputs raise TreeTooLarge.
    Ties break canonically (lowest action id at every node).
    """
    tree = build_world_set_tree(worlds, n_games, caps, reset_each_game, max_nodes)
    result = max_sum(tree)
    return result.strategy, result.value
