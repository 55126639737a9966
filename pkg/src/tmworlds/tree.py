"""Game trees, strategies, and the max-sum solver.

Trees alternate agent choice nodes and world chance nodes.  An agent node
has one child per action letter; a world node has one child per reachable
percept, each arc carrying an exact rational probability.  A leaf sits
exactly where the incoming arc letter is final; at the last exchange of a
game (depth ``2*cap - 1`` inside the game) every non-final percept is
forced to draw, so world nodes there have only final-letter children.

Each node carries an exact weighted set of world run states.  For a
single game over one world this is always a singleton and the tree is the
familiar state-labelled game tree.  Mixtures appear in two places only:
multigame trees continued past a cap-forced draw that merged distinct
world branches under one percept, and trees built over a whole set of
candidate worlds (used for best-strategy search).  In both cases the
weights are exact posteriors given the observed letters, so strategy
values computed here equal the average over the underlying worlds.

``max_sum`` assigns leaves their payoff (1, 0 or 1/2 for a single game;
the per-game average for multigame trees), maximizes over agent children
and takes the probability-weighted sum over world children.  It is not
minimax: the world is indifferent, not adversarial.  Ties at agent nodes
break toward the lowest action id, so best strategies are reproducible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import defaults
from .alphabet import DRAW, AlphabetConfig
from .errors import StrategyMismatch, TreeTooLarge
from .game import Caps
from .machines import MachineRunState, WorldMachine, world_outcomes

Belief = tuple  # of (Fraction weight, MachineRunState) pairs, weights summing to 1


class _Budget:
    __slots__ = ("remaining",)

    def __init__(self, max_nodes: int):
        self.remaining = max_nodes

    def charge(self) -> None:
        self.remaining -= 1
        if self.remaining < 0:
            raise TreeTooLarge("game tree exceeded its node budget")


def _merge_belief(parts) -> Belief:
    """Sum weights of components with identical machine and configuration."""
    merged: dict = {}
    for weight, run in parts:
        key = (id(run.machine), run.config_key())
        if key in merged:
            merged[key] = (merged[key][0] + weight, merged[key][1])
        else:
            merged[key] = (weight, run)
    return tuple(merged.values())


class LeafNode:
    kind = "leaf"
    __slots__ = ("payoff", "depth", "belief", "value")

    def __init__(self, payoff: Fraction, depth: int, belief: Belief):
        self.payoff = payoff
        self.depth = depth
        self.belief = belief
        self.value: Optional[Fraction] = None


class WorldNode:
    """Chance node: an action was chosen, the world's percept is pending."""

    kind = "world"
    __slots__ = ("action", "depth", "belief", "game_index", "step_index",
                 "cum_payoff", "value", "_builder", "_children")

    def __init__(self, builder, action, depth, belief, game_index, step_index,
                 cum_payoff):
        self.action = action
        self.depth = depth
        self.belief = belief
        self.game_index = game_index
        self.step_index = step_index
        self.cum_payoff = cum_payoff
        self.value: Optional[Fraction] = None
        self._builder = builder
        self._children = None

    @property
    def children(self) -> list:
        """(percept letter, probability, child node) triples, letter-sorted."""
        if self._children is None:
            self._children = self._builder._expand_world(self)
        return self._children


class AiNode:
    """Choice node: one child world node per action letter."""

    kind = "ai"
    __slots__ = ("depth", "belief", "game_index", "step_index", "cum_payoff",
                 "value", "best_action", "_builder", "_children")

    def __init__(self, builder, depth, belief, game_index, step_index, cum_payoff):
        self.depth = depth
        self.belief = belief
        self.game_index = game_index
        self.step_index = step_index
        self.cum_payoff = cum_payoff
        self.value: Optional[Fraction] = None
        self.best_action: Optional[int] = None
        self._builder = builder
        self._children = None

    @property
    def children(self) -> list:
        """(action letter, world node) pairs in action order."""
        if self._children is None:
            self._children = self._builder._expand_ai(self)
        return self._children


class _TreeBuilder:
    """Expands nodes on demand, charging a shared node budget."""

    def __init__(self, alphabet: AlphabetConfig, caps: Caps, n_games: int,
                 reset_each_game: bool, max_nodes: int):
        self.alphabet = alphabet
        self.caps = caps
        self.n_games = n_games
        self.reset_each_game = reset_each_game
        self.budget = _Budget(max_nodes)

    def root(self, belief: Belief) -> AiNode:
        self.budget.charge()
        return AiNode(self, 0, belief, 1, 0, Fraction(0))

    def _expand_ai(self, node: AiNode) -> list:
        children = []
        for action in self.alphabet.omega:
            self.budget.charge()
            children.append((action, WorldNode(
                self, action, node.depth + 1, node.belief, node.game_index,
                node.step_index, node.cum_payoff)))
        return children

    def _expand_world(self, node: WorldNode) -> list:
        ab = self.alphabet
        last_step = node.step_index + 1 == self.caps.game_big_step_cap
        buckets: dict = {}
        for weight, run in node.belief:
            for oc in world_outcomes(run, node.action, self.caps.world_small_step_cap):
                letter = oc.percept
                if last_step and not ab.is_final(letter):
                    letter = DRAW
                buckets.setdefault(letter, []).append((weight * oc.probability, oc.run))
        entries = []
        for letter in sorted(buckets):
            parts = buckets[letter]
            prob = sum(w for w, _ in parts)
            belief = _merge_belief((w / prob, run) for w, run in parts)
            self.budget.charge()
            if ab.is_final(letter):
                gained = node.cum_payoff + ab.payoff(letter)
                if node.game_index == self.n_games:
                    child = LeafNode(gained / self.n_games, node.depth + 1, belief)
                else:
                    if self.reset_each_game:
                        belief = _merge_belief(
                            (w, MachineRunState.fresh(r.machine)) for w, r in belief)
                    child = AiNode(self, node.depth + 1, belief,
                                   node.game_index + 1, 0, gained)
            else:
                child = AiNode(self, node.depth + 1, belief, node.game_index,
                               node.step_index + 1, node.cum_payoff)
            entries.append((letter, prob, child))
        return entries


def build_tree_of_this_game(world: WorldMachine, caps: Caps,
                            root_run: Optional[MachineRunState] = None,
                            max_nodes: int = defaults.TREE_NODE_BUDGET) -> AiNode:
    """Tree of one game of ``world``, from ``root_run`` or a fresh start."""
    run = root_run.clone() if root_run is not None else MachineRunState.fresh(world)
    builder = _TreeBuilder(world.alphabet, caps, 1, False, max_nodes)
    return builder.root(((Fraction(1), run),))


def build_multigame_tree(world: WorldMachine, n_games: int, caps: Caps,
                         reset_each_game: bool = False,
                         max_nodes: int = defaults.TREE_NODE_BUDGET) -> AiNode:
    """Tree of ``n_games`` consecutive games; leaves carry the life average.

    Children materialize lazily, so the budget is charged as the tree is
    actually explored.
    """
    if n_games < 1:
        raise ValueError("n_games must be positive")
    builder = _TreeBuilder(world.alphabet, caps, n_games, reset_each_game, max_nodes)
    return builder.root(((Fraction(1), MachineRunState.fresh(world)),))


def build_world_set_tree(worlds, n_games: int, caps: Caps,
                         reset_each_game: bool = False,
                         max_nodes: int = defaults.TREE_NODE_BUDGET) -> AiNode:
    """Tree over a uniform mixture of candidate worlds.

    Expected success of a strategy on this tree equals the arithmetic mean
    of its expected success over the individual worlds.
    """
    worlds = list(worlds)
    if not worlds:
        raise ValueError("at least one world is required")
    alphabet = worlds[0].alphabet
    for world in worlds:
        if world.alphabet != alphabet:
            raise ValueError("all worlds must share one alphabet")
    builder = _TreeBuilder(alphabet, caps, n_games, reset_each_game, max_nodes)
    weight = Fraction(1, len(worlds))
    belief = tuple((weight, MachineRunState.fresh(w)) for w in worlds)
    return builder.root(belief)


# -- strategies ---------------------------------------------------------------

@dataclass(frozen=True)
class StrategyNode:
    """One action choice plus a continuation for every possible percept.

    ``responses`` pairs each percept letter of the following world node
    with either the next StrategyNode or None where the tree ends.
    """

    action: int
    responses: tuple

    def response_for(self, letter: int):
        for name, sub in self.responses:
            if name == letter:
                return sub
        raise KeyError(letter)


def _child_nodes(node):
    if node.kind == "ai":
        return [child for _, child in node.children]
    return [child for _, _, child in node.children]


def _postorder(root):
    stack = [(root, False)]
    while stack:
        node, processed = stack.pop()
        if node.kind == "leaf":
            yield node
            continue
        if processed:
            yield node
        else:
            stack.append((node, True))
            for child in _child_nodes(node):
                stack.append((child, False))


@dataclass(frozen=True)
class MaxSumResult:
    value: Fraction
    strategy: StrategyNode
    root: AiNode


def max_sum(root: AiNode) -> MaxSumResult:
    """Annotate every node with its best possible success; return one best
    strategy.

    Leaves value at their payoff, agent nodes maximize over children
    (ties to the lowest action id), world nodes take the exact
    probability-weighted sum.
    """
    for node in _postorder(root):
        if node.kind == "leaf":
            node.value = node.payoff
        elif node.kind == "world":
            node.value = sum((p * child.value for _, p, child in node.children),
                             Fraction(0))
        else:
            best_action, best_value = None, None
            for letter, child in node.children:
                if best_value is None or child.value > best_value:
                    best_action, best_value = letter, child.value
            node.best_action = best_action
            node.value = best_value
    return MaxSumResult(root.value, _extract_strategy(root), root)


def _chosen_world(ai: AiNode) -> WorldNode:
    for letter, child in ai.children:
        if letter == ai.best_action:
            return child
    raise AssertionError("annotated node lost its best action")


def _extract_strategy(root: AiNode) -> StrategyNode:
    built: dict = {}
    stack = [(root, False)]
    while stack:
        ai, processed = stack.pop()
        world = _chosen_world(ai)
        if not processed:
            stack.append((ai, True))
            for _, _, child in world.children:
                if child.kind == "ai":
                    stack.append((child, False))
        else:
            responses = tuple(
                (letter, built[id(child)] if child.kind == "ai" else None)
                for letter, _, child in world.children)
            built[id(ai)] = StrategyNode(ai.best_action, responses)
    return built[id(root)]


def count_strategies(root: AiNode) -> int:
    """Number of distinct strategies of the tree."""
    counts: dict = {}
    for node in _postorder(root):
        if node.kind == "leaf":
            counts[id(node)] = 1
        elif node.kind == "world":
            total = 1
            for _, _, child in node.children:
                total *= counts[id(child)]
            counts[id(node)] = total
        else:
            counts[id(node)] = sum(counts[id(child)] for _, child in node.children)
    return counts[id(root)]


def enumerate_strategies(root: AiNode, max_strategies: int = defaults.STRATEGY_BUDGET):
    """Yield every strategy exactly once, in canonical order.

    The order is depth-first by action letter: all strategies choosing the
    first action at a node come before any choosing the second, and within
    a world node the response combinations vary the last percept fastest.
    """
    if count_strategies(root) > max_strategies:
        raise TreeTooLarge(f"more than {max_strategies} strategies")
    lists: dict = {}
    for node in _postorder(root):
        if node.kind == "leaf":
            lists[id(node)] = [None]
        elif node.kind == "world":
            per_child = [[(letter, sub) for sub in lists[id(child)]]
                         for letter, _, child in node.children]
            lists[id(node)] = [tuple(combo) for combo in itertools.product(*per_child)]
        else:
            strategies = []
            for letter, child in node.children:
                for responses in lists[id(child)]:
                    strategies.append(StrategyNode(letter, responses))
            lists[id(node)] = strategies
    return iter(lists[id(root)])


def strategy_expected_success(strategy: StrategyNode, root: AiNode) -> Fraction:
    """Exact expected success of ``strategy`` played on ``root``'s tree.

    The strategy may come from a different (richer) tree, as long as it
    covers every percept this tree can produce along the chosen actions.
    """
    total = Fraction(0)
    stack = [(root, strategy, Fraction(1))]
    while stack:
        node, snode, prob = stack.pop()
        world = None
        for letter, child in node.children:
            if letter == snode.action:
                world = child
                break
        if world is None:
            raise StrategyMismatch(f"action {snode.action} not available in the tree")
        for letter, p, child in world.children:
            try:
                sub = snode.response_for(letter)
            except KeyError:
                raise StrategyMismatch(
                    f"strategy has no response for percept {letter}") from None
            if child.kind == "leaf":
                if sub is not None:
                    raise StrategyMismatch("strategy continues past a leaf")
                total += prob * p * child.payoff
            else:
                if sub is None:
                    raise StrategyMismatch("strategy ends before the tree does")
                stack.append((child, sub, prob * p))
    return total


# -- text dumps ---------------------------------------------------------------

def _fmt(value) -> str:
    return "?" if value is None else str(value)


def tree_to_text(root: AiNode, max_depth: Optional[int] = None) -> str:
    """Indented dump, one node per line with value and arc probability."""
    alphabet = None
    for _, run in root.belief:
        alphabet = run.machine.alphabet
        break
    lines = []
    stack = [(root, 0, "")]
    while stack:
        node, indent, arc = stack.pop()
        pad = "  " * indent
        if node.kind == "leaf":
            lines.append(f"{pad}{arc}leaf payoff={node.payoff} value={_fmt(node.value)}")
            continue
        if node.kind == "ai":
            lines.append(f"{pad}{arc}ai depth={node.depth} value={_fmt(node.value)}")
            if max_depth is not None and node.depth >= max_depth:
                continue
            for letter, child in reversed(node.children):
                stack.append((child, indent + 1, f"{alphabet.name(letter)} -> "))
        else:
            lines.append(f"{pad}{arc}world value={_fmt(node.value)}")
            for letter, prob, child in reversed(node.children):
                stack.append((child, indent + 1, f"{alphabet.name(letter)} p={prob} -> "))
    return "\n".join(lines) + "\n"


def strategy_to_text(strategy: StrategyNode, alphabet: AlphabetConfig) -> str:
    """Indented dump of a strategy's action choices."""
    lines = []
    stack = [(strategy, 0, "")]
    while stack:
        node, indent, arc = stack.pop()
        pad = "  " * indent
        lines.append(f"{pad}{arc}play {alphabet.name(node.action)}")
        for letter, sub in reversed(node.responses):
            if sub is None:
                lines.append(f"{pad}  on {alphabet.name(letter)}: end")
            else:
                stack.append((sub, indent + 1, f"on {alphabet.name(letter)}: "))
    return "\n".join(lines) + "\n"
