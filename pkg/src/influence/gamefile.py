"""JSON game and strategy files.

A game file::

    {"agents": ["Ann", "Bob"], "issues": ["p"],
     "edges": [["Ann", "Bob"]],
     "beliefs": [[1], [0]], "visibility": [[0], [0]],
     "goals": {"Ann": "F G B[Bob,p]"},
     "aggregation": "unanimous",
     "strategies": {"Ann": {"constant": "reveal p"}}}

Matrices are agent-major, issue-minor.  Agents without a goal get ``true``.
A strategy is one of::

    {"constant": "reveal p"}
    {"rules": [{"when": "B[Ann,p]", "do": "reveal p"}], "default": "hide p"}
    {"table": [{"beliefs": [[1], [0]], "visibility": [[0], [0]], "do": "reveal p"}],
     "default": "skip"}

Rule guards are state formulas tested as ``K[agent] guard``.  Table rows name
one state; the action applies to the agent's whole information state.
"""

from __future__ import annotations

import json
import random
from typing import Dict, List, Mapping, Optional

from .core import InfluenceNetwork, ModelError, State, class_key
from .diffusion import RULES, SKIP, parse_action
from .game import (ConstantStrategy, InfluenceGame, RuleStrategy, Strategy, StrategyFamily,
                   TableStrategy)
from .logic.syntax import TRUE, Vocabulary, is_state_formula, parse, to_text


class GameFileError(ValueError):
    """Invalid game or strategy file; the message names the offending field."""


def _need(data: Mapping, key: str, where: str):
    if key not in data:
        raise GameFileError(f"{where}: missing field {key!r}")
    return data[key]


def _agent(vocab: Vocabulary, name, where: str) -> int:
    i = vocab.agent_index(str(name))
    if i is None:
        raise GameFileError(f"{where}: unknown agent {name!r}")
    return i


def _formula(text: str, vocab: Vocabulary, where: str):
    try:
        return parse(text, vocab)
    except ValueError as e:
        raise GameFileError(f"{where}: {e}") from None


def game_from_dict(data: Mapping) -> InfluenceGame:
    if not isinstance(data, Mapping):
        raise GameFileError("game file: top level must be an object")
    agents = [str(a) for a in _need(data, "agents", "game file")]
    issues = [str(p) for p in _need(data, "issues", "game file")]
    if not agents or not issues:
        raise GameFileError("game file: need at least one agent and one issue")
    try:
        vocab = Vocabulary(agents, issues)
    except ValueError as e:
        raise GameFileError(f"game file: {e}") from None
    edges = []
    for k, edge in enumerate(data.get("edges", [])):
        if not isinstance(edge, (list, tuple)) or len(edge) != 2:
            raise GameFileError(f"edges[{k}]: expected a [from, to] pair")
        edges.append((_agent(vocab, edge[0], f"edges[{k}]"), _agent(vocab, edge[1], f"edges[{k}]")))
    try:
        net = InfluenceNetwork(len(agents), edges)
        initial = State.from_matrices(_need(data, "beliefs", "game file"),
                                      _need(data, "visibility", "game file"))
    except ModelError as e:
        raise GameFileError(f"game file: {e}") from None
    if (initial.n, initial.m) != (len(agents), len(issues)):
        raise GameFileError(f"game file: matrices must be {len(agents)} x {len(issues)}")
    raw_goals = data.get("goals", {})
    if isinstance(raw_goals, list):
        if len(raw_goals) != len(agents):
            raise GameFileError("goals: a list needs one formula per agent")
        raw_goals = dict(zip(agents, raw_goals))
    goals = [TRUE] * len(agents)
    for name, text in raw_goals.items():
        goals[_agent(vocab, name, "goals")] = _formula(str(text), vocab, f"goals[{name}]")
    rule_name = data.get("aggregation", "unanimous")
    if rule_name not in RULES:
        raise GameFileError(f"aggregation: expected one of {sorted(RULES)}, got {rule_name!r}")
    return InfluenceGame(agents, issues, net, initial, goals, [RULES[rule_name]()] * len(agents))


def strategy_from_spec(game: InfluenceGame, agent: int, spec, where: str = "strategy") -> Strategy:
    vocab = game.vocab

    def action(text, field_where):
        try:
            return parse_action(str(text), game.issues)
        except ModelError as e:
            raise GameFileError(f"{field_where}: {e}") from None

    if isinstance(spec, str):
        return ConstantStrategy(agent, action(spec, where))
    if not isinstance(spec, Mapping):
        raise GameFileError(f"{where}: expected an object or an action string")
    default = action(spec.get("default", "skip"), f"{where}.default")
    if "constant" in spec:
        return ConstantStrategy(agent, action(spec["constant"], f"{where}.constant"))
    if "rules" in spec:
        rules = []
        for k, rule in enumerate(spec["rules"]):
            w = f"{where}.rules[{k}]"
            guard = _formula(str(_need(rule, "when", w)), vocab, f"{w}.when")
            if not is_state_formula(guard):
                raise GameFileError(f"{w}.when: guard must be a state formula")
            rules.append((guard, action(_need(rule, "do", w), f"{w}.do")))
        return RuleStrategy(agent, game.n, game.m, rules, default)
    if "table" in spec:
        table = {}
        for k, row in enumerate(spec["table"]):
            w = f"{where}.table[{k}]"
            try:
                s = State.from_matrices(_need(row, "beliefs", w), _need(row, "visibility", w))
            except ModelError as e:
                raise GameFileError(f"{w}: {e}") from None
            if (s.n, s.m) != (game.n, game.m):
                raise GameFileError(f"{w}: state has the wrong shape")
            table[class_key(s, agent)] = action(_need(row, "do", w), f"{w}.do")
        return TableStrategy(agent, table, default)
    raise GameFileError(f"{where}: expected 'constant', 'rules' or 'table'")


def profile_from_dict(game: InfluenceGame, data: Optional[Mapping]) -> List[Strategy]:
    """Per-agent strategies; agents not listed play ``skip``."""
    profile: List[Strategy] = [ConstantStrategy(i, SKIP) for i in range(game.n)]
    for name, spec in (data or {}).items():
        i = _agent(game.vocab, name, "strategies")
        profile[i] = strategy_from_spec(game, i, spec, f"strategies[{name}]")
    return profile


def family_from_dict(game: InfluenceGame, data: Mapping) -> StrategyFamily:
    """A table family: ``{"Ann": [spec, spec, ...], ...}``."""
    tables: Dict[int, List[Strategy]] = {}
    for name, specs in data.items():
        i = _agent(game.vocab, name, "alternatives")
        tables[i] = [strategy_from_spec(game, i, s, f"alternatives[{name}][{k}]")
                     for k, s in enumerate(specs)]
    return StrategyFamily("table", tables)


def load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise GameFileError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}") from None
    except OSError as e:
        raise GameFileError(f"{path}: {e.strerror}") from None


def load_game(path: str) -> InfluenceGame:
    return game_from_dict(load_json(path))


def game_to_dict(game: InfluenceGame) -> dict:
    return {
        "agents": list(game.agents),
        "issues": list(game.issues),
        "edges": [[game.agents[a], game.agents[b]] for a, b in game.network.sorted_edges()],
        "beliefs": [list(r) for r in game.initial.belief_matrix()],
        "visibility": [list(r) for r in game.initial.visibility_matrix()],
        "goals": {game.agents[i]: to_text(g, game.vocab) for i, g in enumerate(game.goals)},
        "aggregation": game.rules[0].name,
    }


_GOAL_SHAPES = ("F G B[{j},{p}]", "X B[{j},{p}]", "F X !B[{j},{p}]", "G (V[{i},{p}] -> F B[{j},{p}])",
                "F K[{i}] B[{j},{p}]")


def random_game(seed: int, n: int = 3, m: int = 1, edge_prob: float = 0.5) -> dict:
    """A reproducible random game file."""
    rng = random.Random(seed)
    agents = [f"a{i}" for i in range(n)]
    issues = [f"p{q}" for q in range(m)]
    edges = [[a, b] for a in agents for b in agents if a != b and rng.random() < edge_prob]
    goals = {}
    for i in agents:
        j = rng.choice([a for a in agents if a != i] or [i])
        goals[i] = rng.choice(_GOAL_SHAPES).format(i=i, j=j, p=rng.choice(issues))
    return {
        "agents": agents, "issues": issues, "edges": edges,
        "beliefs": [[rng.randint(0, 1) for _ in issues] for _ in agents],
        "visibility": [[rng.randint(0, 1) for _ in issues] for _ in agents],
        "goals": goals, "aggregation": "unanimous",
    }
