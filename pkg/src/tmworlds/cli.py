"""Command-line interface.

Subcommands: ``validate`` machine files, ``enumerate``/``sample`` world
spaces, ``play`` one life (transcript out), ``tree`` (build a game tree
and solve it), ``best-strategy`` (exhaustive search at desk scale), and
``evaluate`` (sampled benchmark; writes report.json, per_world.tsv and
figures).
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import defaults
from .agents import make_policy, td5_best_strategy
from .alphabet import AlphabetConfig
from .errors import TmWorldsError
from .game import Caps, life_to_text, limit_estimate, play_life, success
from .harness import EvalConfig, evaluate
from .machines import world_size
from .report import report_summary_text, write_report
from .textfmt import (parse_agent_text, parse_world_text, world_hash,
                      world_to_text)
from .tree import build_multigame_tree, max_sum, strategy_to_text, tree_to_text
from .worldspace import WorldSpaceSpec, count_worlds, enumerate_worlds, sample_world


def _alphabet_from_flag(text: str | None) -> AlphabetConfig:
    if not text:
        return AlphabetConfig.minimal()
    try:
        sigma_part, omega_part = text.split(":")
        extra_sigma = tuple(s for s in sigma_part.split(",") if s)
        omega = tuple(s for s in omega_part.split(",") if s)
    except ValueError:
        raise SystemExit("--alphabet looks like 's0,s1:a0,a1' "
                         "(extra percepts : actions)")
    return AlphabetConfig.make(extra_sigma, omega)


def _caps_from_args(args) -> Caps:
    return Caps(game_big_step_cap=args.game_cap,
                world_small_step_cap=args.world_step_cap,
                life_games=args.life_games,
                agent_small_step_cap=args.agent_step_cap)


def _add_common(parser: argparse.ArgumentParser, caps: bool = True,
                alphabet: bool = True) -> None:
    if alphabet:
        parser.add_argument("--alphabet", metavar="SIGMA:OMEGA", default=None,
                            help="extra percepts and actions, e.g. s0,s1:a0,a1")
    if caps:
        parser.add_argument("--game-cap", type=int, default=defaults.GAME_BIG_STEP_CAP,
                            help="big steps before a game is forced to draw")
        parser.add_argument("--world-step-cap", type=int,
                            default=defaults.WORLD_SMALL_STEP_CAP,
                            help="small steps before a world big step is forced to draw")
        parser.add_argument("--life-games", type=int, default=defaults.LIFE_GAMES,
                            help="games per life")
        parser.add_argument("--agent-step-cap", type=int,
                            default=defaults.AGENT_SMALL_STEP_CAP,
                            help="small steps before an agent machine is failed")


def _cmd_validate(args) -> int:
    failed = 0
    for path in args.files:
        try:
            text = Path(path).read_text()
            machine = (parse_agent_text(text) if args.kind == "agent"
                       else parse_world_text(text))
        except (TmWorldsError, OSError) as exc:
            print(f"{path}: ERROR: {exc}")
            failed += 1
            continue
        if args.kind == "world":
            print(f"{path}: OK (states={machine.n_states}, "
                  f"size={world_size(machine)}, "
                  f"deterministic={machine.is_deterministic})")
        else:
            print(f"{path}: OK (states={machine.n_states})")
    return 1 if failed else 0


def _cmd_enumerate(args) -> int:
    spec = WorldSpaceSpec(_alphabet_from_flag(args.alphabet), args.max_size,
                          args.determinism)
    if args.count_only:
        print(count_worlds(spec))
        return 0
    out_dir = Path(args.out) if args.out else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
    n = 0
    for machine in enumerate_worlds(spec, max_yield=args.limit):
        n += 1
        if out_dir:
            (out_dir / f"world_{n:06d}.tm").write_text(world_to_text(machine))
        else:
            sys.stdout.write(world_to_text(machine) + "\n")
        if n >= args.limit:
            break
    print(f"# enumerated {n} machines", file=sys.stderr)
    return 0


def _cmd_sample(args) -> int:
    import random
    spec = WorldSpaceSpec(_alphabet_from_flag(args.alphabet), args.max_size,
                          args.determinism)
    rng = random.Random(args.seed)
    out_dir = Path(args.out) if args.out else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
    for i in range(1, args.count + 1):
        machine = sample_world(spec, rng)
        if out_dir:
            (out_dir / f"sample_{i:06d}.tm").write_text(world_to_text(machine))
        else:
            sys.stdout.write(world_to_text(machine) + "\n")
    return 0


def _cmd_play(args) -> int:
    world = parse_world_text(Path(args.world).read_text())
    caps = _caps_from_args(args)
    policy = make_policy(args.agent, world.alphabet, caps, args.seed,
                         args.reset_each_game)
    life = play_life(policy, world, caps, args.seed,
                     reset_world_each_game=args.reset_each_game)
    text = life_to_text(life, world.alphabet, caps, world_hash(world),
                        args.reset_each_game)
    if args.out:
        Path(args.out).write_text(text)
        print(f"transcript written to {args.out}")
    else:
        sys.stdout.write(text)
    value = success(life.counts)
    print(f"games={life.counts.n_games} victories={life.counts.n_victory} "
          f"losses={life.counts.n_loss} draws={life.counts.n_draw}")
    print(f"success={value} ({float(value):.4f}) "
          f"limit_estimate={limit_estimate(life)}")
    return 0


def _cmd_tree(args) -> int:
    world = parse_world_text(Path(args.world).read_text())
    caps = _caps_from_args(args)
    tree = build_multigame_tree(world, args.games, caps,
                                reset_each_game=args.reset_each_game,
                                max_nodes=args.max_nodes)
    result = max_sum(tree)
    dump = tree_to_text(result.root, max_depth=args.max_depth)
    if args.out:
        Path(args.out).write_text(dump)
        print(f"tree dump written to {args.out}")
    else:
        sys.stdout.write(dump)
    print(f"best possible success: {result.value} ({float(result.value):.4f})")
    print("best strategy:")
    sys.stdout.write(strategy_to_text(result.strategy, world.alphabet))
    return 0


def _cmd_best_strategy(args) -> int:
    worlds = [parse_world_text(Path(p).read_text()) for p in args.worlds]
    caps = _caps_from_args(args)
    strategy, value = td5_best_strategy(worlds, args.games, caps,
                                        reset_each_game=args.reset_each_game,
                                        max_nodes=args.max_nodes)
    print(f"worlds: {len(worlds)}  games: {args.games}")
    print(f"best average success: {value} ({float(value):.4f})")
    text = strategy_to_text(strategy, worlds[0].alphabet)
    if args.out:
        Path(args.out).write_text(text)
        print(f"strategy written to {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_evaluate(args) -> int:
    spec = WorldSpaceSpec(_alphabet_from_flag(args.alphabet), args.max_size,
                          args.determinism)
    config = EvalConfig(space=spec, sample_count=args.sample_count,
                        caps=_caps_from_args(args),
                        lives_per_world=args.lives_per_world,
                        master_seed=args.seed,
                        threshold=Fraction(args.threshold),
                        reset_world_each_game=args.reset_each_game,
                        workers=args.workers)
    report = evaluate(args.agent, config)
    sys.stdout.write(report_summary_text(report))
    if args.out:
        paths = write_report(report, args.out, figures=not args.no_figures)
        print(f"report: {paths['json']}")
        print(f"table: {paths['tsv']}")
        for figure in paths.get("figures", []):
            print(f"figure: {figure}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tmworlds",
        description="simulate, solve and benchmark agent/world machine games")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate machine files")
    p.add_argument("--kind", choices=("agent", "world"), default="world")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("enumerate", help="enumerate a bounded world space")
    _add_common(p, caps=False)
    p.add_argument("--max-size", type=int, default=2)
    p.add_argument("--determinism", choices=("deterministic_only", "all"),
                   default="all")
    p.add_argument("--limit", type=int, default=1000,
                   help="stop after this many machines")
    p.add_argument("--count-only", action="store_true",
                   help="print the exact machine count and exit")
    p.add_argument("--out", default=None, help="directory for machine files")
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("sample", help="sample worlds uniformly")
    _add_common(p, caps=False)
    p.add_argument("--max-size", type=int, default=defaults.MAX_WORLD_SIZE)
    p.add_argument("--determinism", choices=("deterministic_only", "all"),
                   default="all")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="directory for machine files")
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("play", help="play one life, write the transcript")
    _add_common(p, alphabet=False)
    p.add_argument("--world", required=True, help="world machine file")
    p.add_argument("--agent", default="kind=random", help="agent spec, "
                   "e.g. kind=td4,courage=1/20 or kind=tm,file=agent.tm")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--reset-each-game", action="store_true")
    p.add_argument("--out", default=None, help="transcript file")
    p.set_defaults(func=_cmd_play)

    p = sub.add_parser("tree", help="build and solve a game tree")
    _add_common(p, alphabet=False)
    p.add_argument("--world", required=True)
    p.add_argument("--games", type=int, default=1)
    p.add_argument("--max-nodes", type=int, default=defaults.TREE_NODE_BUDGET)
    p.add_argument("--max-depth", type=int, default=None,
                   help="truncate the dump below this depth")
    p.add_argument("--reset-each-game", action="store_true")
    p.add_argument("--out", default=None, help="dump file")
    p.set_defaults(func=_cmd_tree)

    p = sub.add_parser("best-strategy",
                       help="exhaustive best strategy over a world set")
    _add_common(p, alphabet=False)
    p.add_argument("--worlds", nargs="+", required=True, help="world files")
    p.add_argument("--games", type=int, default=1)
    p.add_argument("--max-nodes", type=int, default=defaults.TREE_NODE_BUDGET)
    p.add_argument("--reset-each-game", action="store_true")
    p.add_argument("--out", default=None, help="strategy file")
    p.set_defaults(func=_cmd_best_strategy)

    p = sub.add_parser("evaluate", help="sampled benchmark with report files")
    _add_common(p)
    p.add_argument("--agent", default="kind=random")
    p.add_argument("--max-size", type=int, default=defaults.MAX_WORLD_SIZE)
    p.add_argument("--determinism", choices=("deterministic_only", "all"),
                   default="all")
    p.add_argument("--sample-count", type=int, default=20)
    p.add_argument("--lives-per-world", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threshold", default="7/10")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--reset-each-game", action="store_true")
    p.add_argument("--out", default=None, help="report directory")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=_cmd_evaluate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except TmWorldsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
