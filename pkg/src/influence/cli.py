"""Command-line front end.

Exit codes: 0 yes/SAT/success, 1 no/UNSAT, 2 input error, 3 budget or
horizon exhausted without a verdict.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from .analysis import (BudgetExceeded, HorizonExceeded, default_budget, is_nash,
                       is_weakly_dominant, is_winning, is_winning_bounded)
from .core import ModelError, state_count
from .diffusion import format_trace, induced_lasso
from .encoding import document_for, export, export_table
from .game import StrategyFamily
from .gamefile import (GameFileError, family_from_dict, load_game, load_json,
                       profile_from_dict, random_game)
from .logic.reduction import ReductionError, reduce
from .logic.semantics import evaluate
from .logic.syntax import ParseError, Vocabulary, parse, to_text

EXIT_YES, EXIT_NO, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3
ENCODE_LIMIT = 1 << 12


class InputError(Exception):
    pass


def _err(msg: str) -> None:
    print(f"error: {msg}", file=sys.stderr)


def _load(args):
    game = load_game(args.game)
    if getattr(args, "strategies", None):
        spec = load_json(args.strategies)
        if isinstance(spec, dict) and "agents" in spec:
            spec = spec.get("strategies")
    else:
        spec = load_json(args.game).get("strategies")
    return game, profile_from_dict(game, spec)


def _agent(game, name: str) -> int:
    i = game.vocab.agent_index(name)
    if i is None:
        raise InputError(f"unknown agent {name!r}")
    return i


def _family(args, game) -> StrategyFamily:
    if args.family is None:
        print("warning: no --family given; deciding over constant strategies only",
              file=sys.stderr)
        return StrategyFamily("constant")
    if args.family == "table":
        if not args.alternatives:
            raise InputError("--family table needs --alternatives FILE")
        return family_from_dict(game, load_json(args.alternatives))
    return StrategyFamily(args.family)


def _print_record(records: List[dict], holds: bool) -> int:
    out = records[0] if len(records) == 1 else {
        "verdict": "yes" if holds else "no", "checks": records}
    print(json.dumps(out, indent=2, sort_keys=True))
    return EXIT_YES if holds else EXIT_NO


# -- commands ---------------------------------------------------------------

def cmd_simulate(args) -> int:
    game, profile = _load(args)
    lasso = induced_lasso(game.initial, profile, game.dynamics)
    if args.steps is not None:
        states = lasso.unrolled(args.steps + 1)
        actions = [lasso.actions[lasso.position(t)] for t in range(args.steps)]
        print(format_trace(states, actions, game.issues))
        return EXIT_YES
    print(format_trace(lasso.states, lasso.actions, game.issues))
    print(f"lasso: prefix {len(lasso.prefix)}, cycle {len(lasso.cycle)}, "
          f"returns to t={lasso.loop}")
    return EXIT_YES


def cmd_check(args) -> int:
    game, profile = _load(args)
    phi = parse(args.formula, game.vocab)
    lasso = induced_lasso(game.initial, profile, game.dynamics)
    ok = evaluate(phi, lasso, args.at)
    print("SAT" if ok else "UNSAT")
    return EXIT_YES if ok else EXIT_NO


def cmd_reduce(args) -> int:
    vocab = Vocabulary(open=True)
    phi = parse(args.formula, vocab)
    print(to_text(reduce(phi), vocab))
    return EXIT_YES


def cmd_encode(args) -> int:
    game = load_game(args.game)
    profile = None
    if args.strategies or "strategies" in load_json(args.game):
        _, profile = _load(args)
        count = state_count(game.n, game.m)
        if count > args.limit:
            raise InputError(f"strategy encoding needs {count} state implications per agent, "
                             f"over the encoding guard {args.limit} (raise --limit)")
    try:
        doc = document_for(game.vocab, game.network, game.m, profile, args.limit)
    except ModelError as e:
        raise InputError(str(e)) from None
    sys.stdout.write(export(doc))
    table = export_table(doc)
    if args.table:
        with open(args.table, "w", encoding="utf-8") as fh:
            fh.write(table)
    else:
        sys.stdout.write("# propositions\n")
        sys.stdout.write("".join(f"# {line}\n" for line in table.splitlines()))
    return EXIT_YES


def cmd_winning(args) -> int:
    game, profile = _load(args)
    i = _agent(game, args.agent)
    family = _family(args, game)
    budget = args.budget
    v = is_winning(game, i, profile[i], family, args.uniform, budget=budget)
    records, holds = [v.record(game)], v.holds
    if args.horizon is not None and holds:
        b = is_winning_bounded(game, i, profile[i], args.horizon, args.uniform, budget=budget)
        records.append(b.record(game))
        holds = b.holds
    return _print_record(records, holds)


def cmd_dominant(args) -> int:
    game, profile = _load(args)
    i = _agent(game, args.agent)
    family = _family(args, game)
    v = is_weakly_dominant(game, i, profile[i], family, args.uniform, budget=args.budget)
    return _print_record([v.record(game)], v.holds)


def cmd_nash(args) -> int:
    game, profile = _load(args)
    family = _family(args, game)
    v = is_nash(game, profile, family, budget=args.budget, probe_horizon=args.horizon)
    return _print_record([v.record(game)], v.holds)


def cmd_export_dot(args) -> int:
    game = load_game(args.game)
    lines = ["digraph influence {"]
    lines += [f'  "{name}";' for name in game.agents]
    lines += [f'  "{game.agents[a]}" -> "{game.agents[b]}";'
              for a, b in game.network.sorted_edges()]
    lines.append("}")
    print("\n".join(lines))
    return EXIT_YES


def cmd_generate(args) -> int:
    print(json.dumps(random_game(args.seed, args.agents, args.issues), indent=2))
    return EXIT_YES


# -- wiring -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="influence",
                                 description="Games of influence: simulate, check and analyse.")
    sub = ap.add_subparsers(dest="command", required=True)

    def game_cmd(name, fn, help_text, strategies=True):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("game", help="game file (JSON)")
        if strategies:
            p.add_argument("--strategies", "-s",
                           help="strategy file (JSON); default: the game's own 'strategies'")
        p.set_defaults(fn=fn)
        return p

    p = game_cmd("simulate", cmd_simulate, "print the induced history")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--steps", type=int, help="print exactly this many steps")
    g.add_argument("--lasso", action="store_true", help="print prefix and cycle (default)")

    p = game_cmd("check", cmd_check, "evaluate a formula on the induced history")
    p.add_argument("formula")
    p.add_argument("--at", type=int, default=0, help="time index (default 0)")

    p = sub.add_parser("reduce", help="eliminate K from a formula")
    p.add_argument("formula")
    p.set_defaults(fn=cmd_reduce)

    p = game_cmd("encode", cmd_encode, "export the LTL encoding")
    p.add_argument("--table", help="write the proposition table (TSV) to this file")
    p.add_argument("--limit", type=int, default=ENCODE_LIMIT,
                   help=f"largest state space to encode strategies over (default {ENCODE_LIMIT})")

    for name, fn, text in (("winning", cmd_winning, "is the agent's strategy winning?"),
                           ("dominant", cmd_dominant, "is the agent's strategy weakly dominant?"),
                           ("nash", cmd_nash, "is the profile a Nash equilibrium?")):
        p = game_cmd(name, fn, text)
        if name != "nash":
            p.add_argument("--agent", "-a", required=True)
            p.add_argument("--uniform", action="store_true",
                           help="quantify over the agent's information class of the initial state")
        p.add_argument("--family", choices=StrategyFamily.KINDS,
                       help="strategy family quantified over (default constant)")
        p.add_argument("--alternatives", help="strategy lists for --family table (JSON)")
        p.add_argument("--budget", type=int, default=None,
                       help="search budget in branches (env INFLUENCE_BUDGET, default 2^24)")
        p.add_argument("--horizon", type=int, default=None,
                       help="also run the unconstrained-adversary check (winning) or "
                            "the deviation probe (nash) up to this many steps")

    game_cmd("export-dot", cmd_export_dot, "print the network as Graphviz DOT", strategies=False)

    p = sub.add_parser("generate", help="print a random game file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--agents", type=int, default=3)
    p.add_argument("--issues", type=int, default=1)
    p.set_defaults(fn=cmd_generate)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "budget", None) is None and hasattr(args, "budget"):
        args.budget = default_budget()
    try:
        return args.fn(args)
    except (GameFileError, InputError, ParseError, ReductionError, ModelError) as e:
        _err(str(e))
        return EXIT_INPUT
    except (BudgetExceeded, HorizonExceeded) as e:
        _err(str(e))
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
