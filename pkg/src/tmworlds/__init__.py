"""tmworlds: simulate, solve and benchmark agent/world Turing machine games."""

__version__ = "0.1.0"

from .alphabet import DRAW, LOSS, VICTORY, AlphabetConfig
from .errors import (AgentFailure, AgentHalted, BadLetter, BranchExplosion,
                     BudgetExceeded, DirectionOnlyDuplicate, EmptyLife,
                     IllegalNondeterminism, MachineSpecError, MissingStart,
                     NonActionOutput, NonSigmaOutput, NotTotal, ParseError,
                     SmallStepCapExceeded, StrategyMismatch, TmWorldsError,
                     TreeTooLarge, UnknownState)
from .machines import (AgentMachine, MachineRunState, Tape, Transition,
                       WorldMachine, agent_absorb, agent_emit,
                       new_agent_machine, new_world_machine, world_outcomes,
                       world_respond, world_size)
from .game import (Caps, GameRecord, LifeRecord, OutcomeCounts, life_to_text,
                   limit_estimate, parse_life_text, play_game, play_life,
                   success, success_prefix_series)
from .tree import (AiNode, LeafNode, MaxSumResult, StrategyNode, WorldNode,
                   build_multigame_tree, build_tree_of_this_game,
                   build_world_set_tree, count_strategies, enumerate_strategies,
                   max_sum, strategy_expected_success, strategy_to_text,
                   tree_to_text)
from .worldspace import (WorldSpaceSpec, count_raw_deterministic,
                         count_valid_deterministic, count_worlds,
                         enumerate_worlds, iter_valid_deterministic_tables,
                         sample_world)
from .agents import (AgentPolicy, CourageousPlannerAgent, ExploreThenPlanAgent,
                     RandomAgent, ShortestModelAgent, StrategyPolicy,
                     StrategySweepAgent, TD4Config, TD6Config, TmAgentPolicy,
                     VictoryReplayAgent, make_policy, parse_agent_spec,
                     td5_best_strategy)
from .harness import (EvalConfig, EvalReport, derive_seed, evaluate,
                      exact_evaluate)
from .textfmt import (agent_to_text, parse_agent_text, parse_world_text,
                      world_hash, world_to_text)
from .report import write_report
