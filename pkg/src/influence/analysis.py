"""Winning strategies, weak dominance, best response and Nash equilibrium.

Quantifiers over strategies range over a :class:`StrategyFamily`.  Explicit
families (constant, table) are enumerated.  The full family is searched
lazily: a strategy's action on an information state is only chosen when a
play first reaches that state, so every branch of the search stands for all
full strategies that agree on the states visited so far.  This is the same
quantification as enumerating every table; the budget counts branches.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Mapping, Optional, Sequence

from .core import InfluenceNetwork, ModelError, State, class_key, indistinguishability_class
from .diffusion import SKIP, Lasso, all_actions, format_trace, induced_lasso
from .game import (CONSTANT, InfluenceGame, Strategy, StrategyFamily, TableStrategy)
from .logic.semantics import evaluate
from .logic.syntax import Formula, next_depth

DEFAULT_BUDGET = 1 << 24
BUDGET_ENV = "INFLUENCE_BUDGET"


def default_budget() -> int:
    value = os.environ.get(BUDGET_ENV)
    return int(value) if value else DEFAULT_BUDGET


class BudgetExceeded(RuntimeError):
    pass


class HorizonExceeded(RuntimeError):
    pass


@dataclass
class Verdict:
    """Answer to one decision question, with the family it was decided over."""

    question: str
    holds: bool
    family: str
    spent: int = 0
    witness: Optional[dict] = None
    notes: List[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.holds

    def record(self, game: Optional[InfluenceGame] = None) -> dict:
        out = {"question": self.question, "verdict": "yes" if self.holds else "no",
               "family": self.family, "budget_spent": self.spent}
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness, game)
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def describe_key(key, agent: int, n: int, m: int) -> str:
    own, visibility, seen = key
    rows = []
    for j in range(n):
        bits = ""
        for p in range(m):
            b = j * m + p
            if j == agent or (visibility >> b) & 1:
                bits += str(((own | seen) >> b) & 1)
            else:
                bits += "?"
        rows.append(bits)
    vis = ",".join("".join(str((visibility >> (j * m + p)) & 1) for p in range(m))
                   for j in range(n))
    return f"B=({','.join(rows)}) V=({vis})"


def _jsonable(value, game):
    issues = game.issues if game is not None else None
    if isinstance(value, dict):
        return {str(k): _jsonable(v, game) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v, game) for v in value]
    if isinstance(value, State):
        return str(value)
    if isinstance(value, Lasso):
        return {"trace": format_trace(value.states, value.actions or (), issues).splitlines(),
                "loop": value.loop}
    if isinstance(value, TableStrategy):
        n, m = (game.n, game.m) if game is not None else (None, None)
        entries = []
        for key, action in sorted(value.table.items()):
            where = describe_key(key, value.agent, n, m) if n else str(key)
            entries.append({"when": where, "do": action.label(issues)})
        return {"table": entries, "otherwise": value.default.label(issues)}
    if isinstance(value, Strategy):
        return value.describe(issues)
    return value


class Analyzer:
    """Shared search machinery for one game."""

    def __init__(self, game: InfluenceGame, budget: Optional[int] = None):
        self.game = game
        self.dyn = game.dynamics
        self.actions = all_actions(game.m)
        self.budget = default_budget() if budget is None else budget
        self.spent = 0
        self._sat: Dict = {}

    # -- bookkeeping --------------------------------------------------------

    def tick(self, amount: int = 1):
        self.spent += amount
        if self.spent > self.budget:
            raise BudgetExceeded(f"search exceeded the budget of {self.budget} branches")

    def admit(self, families: Mapping[int, StrategyFamily]):
        """Static admission check: each ``full`` quantifier must fit the budget."""
        for a, fam in families.items():
            if fam.kind != "full":
                continue
            size = fam.size(a, self.game.n, self.game.m)
            if size > self.budget:
                raise BudgetExceeded(
                    f"the full family has {size} strategies for agent {self.game.agents[a]}, "
                    f"over the budget {self.budget}; use the reachable or constant family")

    def goal_holds(self, i: int, lasso: Lasso) -> bool:
        key = (i, lasso.states, lasso.loop)
        hit = self._sat.get(key)
        if hit is None:
            hit = self._sat[key] = evaluate(self.game.goals[i], lasso, 0)
        return hit

    def lasso(self, s0: State, profile: Sequence[Strategy]) -> Lasso:
        return induced_lasso(s0, profile, self.dyn)

    # -- lazy search --------------------------------------------------------

    def one_run(self, s0: State, fixed: Mapping[int, Strategy], lazy: Sequence[int],
                assign: Dict[int, Dict]) -> Iterator[Lasso]:
        """Every lasso from ``s0`` as the lazy agents' unassigned entries vary."""
        n = self.game.n
        for a in range(n):
            if a not in fixed and a not in assign:
                raise ModelError(f"agent {a} has neither a strategy nor a family")
        path: List[State] = []
        index: Dict[State, int] = {}
        acts: list = []

        def go(s: State):
            if s in index:
                yield Lasso(tuple(path), index[s], tuple(acts))
                return
            index[s] = len(path)
            path.append(s)
            base = [None] * n
            pending = []
            for a in range(n):
                q = fixed.get(a)
                if q is not None:
                    base[a] = q(s)
                else:
                    key = class_key(s, a)
                    act = assign[a].get(key)
                    if act is None:
                        pending.append((a, key))
                    else:
                        base[a] = act
            if not pending:
                joint = tuple(base)
                acts.append(joint)
                yield from go(self.dyn.step(s, joint))
                acts.pop()
            else:
                try:
                    for combo in itertools.product(self.actions, repeat=len(pending)):
                        self.tick()
                        for (a, key), act in zip(pending, combo):
                            assign[a][key] = act
                            base[a] = act
                        joint = tuple(base)
                        acts.append(joint)
                        yield from go(self.dyn.step(s, joint))
                        acts.pop()
                finally:
                    for a, key in pending:
                        assign[a].pop(key, None)
            path.pop()
            del index[s]

        yield from go(s0)

    def runs(self, starts: Sequence[State], fixed, lazy, assign,
             accept: Callable[[int, Lasso], bool]) -> Iterator[List[Lasso]]:
        """Assignments under which every start's lasso is accepted."""
        acc: List[Lasso] = []

        def rec(k: int):
            if k == len(starts):
                yield list(acc)
                return
            for lasso in self.one_run(starts[k], fixed, lazy, assign):
                if accept(k, lasso):
                    acc.append(lasso)
                    yield from rec(k + 1)
                    acc.pop()

        yield from rec(0)

    def find(self, starts: Sequence[State], fixed: Mapping[int, Strategy],
             families: Mapping[int, StrategyFamily], accept: Callable[[int, Lasso], bool],
             preset: Optional[Mapping[int, Dict]] = None) -> Optional[dict]:
        """First strategies (canonical order) for the quantified agents that
        make every start's lasso accepted."""
        self.admit(families)
        m = self.game.m
        explicit = {a: fam.explicit(a, m) for a, fam in families.items() if not fam.lazy}
        lazy = sorted(a for a, fam in families.items() if fam.lazy)
        names = sorted(explicit)
        for choice in itertools.product(*(explicit[a] for a in names)):
            self.tick()
            fx = dict(fixed)
            fx.update(zip(names, choice))
            assign = {a: dict((preset or {}).get(a, {})) for a in lazy}
            for lassos in self.runs(starts, fx, lazy, assign, accept):
                strategies = {a: fx[a] for a in names}
                for a in lazy:
                    strategies[a] = TableStrategy(a, dict(assign[a]), SKIP)
                return {"strategies": strategies, "lassos": lassos}
        return None


def _class_or_single(game: InfluenceGame, s0: State, i: int, uniform: bool) -> List[State]:
    return indistinguishability_class(s0, i) if uniform else [s0]


def _others(game: InfluenceGame, i: int) -> List[int]:
    return [a for a in range(game.n) if a != i]


def _named(game: InfluenceGame, strategies: Mapping[int, Strategy]) -> dict:
    return {game.agents[a]: q for a, q in sorted(strategies.items())}


def satisfies(game: InfluenceGame, profile: Sequence[Strategy],
              s0: Optional[State] = None) -> List[bool]:
    """Per-agent goal satisfaction on the history the profile induces."""
    lasso = induced_lasso(game.initial if s0 is None else s0, profile, game.dynamics)
    return [evaluate(goal, lasso, 0) for goal in game.goals]


def min_utility(game: InfluenceGame, i: int, profile: Sequence[Strategy],
                s0: Optional[State] = None) -> int:
    """Worst 0/1 goal satisfaction of agent ``i`` over her class of ``s0``."""
    s0 = game.initial if s0 is None else s0
    for s in indistinguishability_class(s0, i):
        if not evaluate(game.goals[i], induced_lasso(s, profile, game.dynamics), 0):
            return 0
    return 1


def is_winning(game: InfluenceGame, i: int, q: Strategy, family: StrategyFamily = CONSTANT,
               uniform: bool = False, s0: Optional[State] = None,
               budget: Optional[int] = None) -> Verdict:
    """Does ``q`` satisfy agent ``i``'s goal against every opponent profile in the family?"""
    an = Analyzer(game, budget)
    s0 = game.initial if s0 is None else s0
    question = f"{game.agents[i]}: {q.describe(game.issues)} is winning" + (" uniform" if uniform else "")
    for s in _class_or_single(game, s0, i, uniform):
        found = an.find([s], {i: q}, {a: family for a in _others(game, i)},
                        lambda k, lasso: not an.goal_holds(i, lasso))
        if found is not None:
            return Verdict(question, False, str(family), an.spent, witness={
                "initial_state": s, "opponents": _named(game, found["strategies"]),
                "history": found["lassos"][0]})
    return Verdict(question, True, str(family), an.spent)


def is_coherent(game: InfluenceGame, goal: Formula, s0: Optional[State] = None,
                family: StrategyFamily = CONSTANT, budget: Optional[int] = None) -> Verdict:
    """Does some profile in the family induce a history satisfying ``goal``?"""
    an = Analyzer(game, budget)
    s0 = game.initial if s0 is None else s0
    found = an.find([s0], {}, {a: family for a in range(game.n)},
                    lambda k, lasso: evaluate(goal, lasso, 0))
    witness = None if found is None else {"profile": _named(game, found["strategies"]),
                                          "history": found["lassos"][0]}
    return Verdict("goal is coherent with the initial state", found is not None,
                   str(family), an.spent, witness)


def is_weakly_dominant(game: InfluenceGame, i: int, q: Strategy,
                       family: StrategyFamily = CONSTANT, uniform: bool = False,
                       s0: Optional[State] = None,
                       alternatives: Optional[StrategyFamily] = None,
                       budget: Optional[int] = None) -> Verdict:
    """For every opponent profile, if some alternative wins then so does ``q``."""
    an = Analyzer(game, budget)
    s0 = game.initial if s0 is None else s0
    alternatives = alternatives or family
    others = _others(game, i)
    fams = {a: family for a in others}
    an.admit({**fams, i: alternatives})
    explicit = {a: family.explicit(a, game.m) for a in others} if not family.lazy else {}
    lazy = others if family.lazy else []
    names = sorted(explicit)
    question = (f"{game.agents[i]}: {q.describe(game.issues)} is weakly dominant"
                + (" uniform" if uniform else ""))
    label = f"opponents {family}, alternatives {alternatives}"
    for s in _class_or_single(game, s0, i, uniform):
        for choice in itertools.product(*(explicit[a] for a in names)):
            an.tick()
            fx = {i: q, **dict(zip(names, choice))}
            assign = {a: {} for a in lazy}
            for lassos in an.runs([s], fx, lazy, assign,
                                  lambda k, lasso: not an.goal_holds(i, lasso)):
                preset = {a: dict(assign[a]) for a in lazy}
                rivals = an.find([s], dict(zip(names, choice)),
                                 {i: alternatives, **{a: family for a in lazy}},
                                 lambda k, lasso: an.goal_holds(i, lasso), preset)
                if rivals is not None:
                    strategies = dict(rivals["strategies"])
                    better = strategies.pop(i)
                    return Verdict(question, False, label, an.spent, witness={
                        "initial_state": s, "opponents": _named(game, strategies),
                        "better_alternative": better,
                        "history_with_strategy": lassos[0],
                        "history_with_alternative": rivals["lassos"][0]})
    return Verdict(question, True, label, an.spent)


def is_best_response(game: InfluenceGame, i: int, q: Strategy, profile: Sequence[Strategy],
                     family: StrategyFamily = CONSTANT, s0: Optional[State] = None,
                     budget: Optional[int] = None, _an: Optional[Analyzer] = None) -> Verdict:
    """Worst-case goal satisfaction of ``q`` over ``i``'s class is maximal.

    ``profile`` supplies the other agents' strategies; its entry for ``i``
    is ignored.
    """
    an = _an or Analyzer(game, budget)
    s0 = game.initial if s0 is None else s0
    prof = list(profile)
    prof[i] = q
    question = f"{game.agents[i]}: {q.describe(game.issues)} is a best response"
    starts = indistinguishability_class(s0, i)
    failing = [s for s in starts if not an.goal_holds(i, an.lasso(s, prof))]
    if not failing:
        return Verdict(question, True, str(family), an.spent, notes=["minimum utility 1"])
    fixed = {a: prof[a] for a in _others(game, i)}
    found = an.find(starts, fixed, {i: family}, lambda k, lasso: an.goal_holds(i, lasso))
    if found is None:
        return Verdict(question, True, str(family), an.spent,
                       notes=["minimum utility 0; no alternative reaches 1"])
    return Verdict(question, False, str(family), an.spent, witness={
        "agent": game.agents[i], "deviation": found["strategies"][i],
        "failing_initial_state": failing[0],
        "history_with_strategy": an.lasso(failing[0], prof),
        "history_with_deviation": found["lassos"][starts.index(failing[0])]})


def is_nash(game: InfluenceGame, profile: Sequence[Strategy],
            family: StrategyFamily = CONSTANT, s0: Optional[State] = None,
            budget: Optional[int] = None, probe_horizon: Optional[int] = None) -> Verdict:
    """Every strategy is a best response to the others; otherwise a deviation.

    With ``probe_horizon`` each agent whose worst case is 0 is also probed
    against deviations outside the family (see :func:`deviation_probe`).
    """
    an = Analyzer(game, budget)
    s0 = game.initial if s0 is None else s0
    notes = []
    for i in range(game.n):
        br = is_best_response(game, i, profile[i], profile, family, s0, _an=an)
        if not br:
            return Verdict("profile is a Nash equilibrium", False, str(family), an.spent,
                           br.witness, notes)
        if probe_horizon is not None:
            probe = deviation_probe(game, profile, i, probe_horizon, s0, budget=budget)
            notes.append(f"{game.agents[i]}: {probe.notes[-1] if probe.notes else probe.question}")
            if not probe:
                notes.append(f"{game.agents[i]}: probe inconclusive")
                return Verdict("profile is a Nash equilibrium", True, str(family), an.spent,
                               probe.witness, notes + ["certified only within the family"])
    return Verdict("profile is a Nash equilibrium", True, str(family), an.spent, None, notes)


def controls(net: InfluenceNetwork, i: int, j: int) -> bool:
    """``i`` controls ``j``: every influencer of ``j`` is ``i`` or controlled by ``i``."""
    if i == j:
        raise ModelError("control is defined between distinct agents")
    controlled: set = set()
    changed = True
    while changed:
        changed = False
        for k in range(net.n):
            if k == i or k in controlled:
                continue
            inf = set(net.influencers(k))
            if inf and inf <= controlled | {i}:
                controlled.add(k)
                changed = True
    return j in controlled


# -- bounded game-tree search ---------------------------------------------

class _PathSearch:
    """Depth-first search over plays where some agents choose actions freely.

    For goals that only use ``X`` (depth ``d <= horizon``) every play of
    length ``d`` is examined, which is exact.  Otherwise plays are followed
    until a state repeats, giving every simple lasso; a branch longer than
    the horizon is reported as exceeded.
    """

    def __init__(self, an: Analyzer, goal: Formula, fixed: Mapping[int, Strategy],
                 free: Sequence[int], horizon: int):
        self.an = an
        self.goal = goal
        self.fixed = fixed
        self.free = list(free)
        self.horizon = horizon
        d = next_depth(goal)
        self.exact = d is not None and d <= horizon
        self.depth = d
        self.exceeded = False

    def successors(self, s: State):
        seen = {}
        n = self.an.game.n
        for combo in itertools.product(self.an.actions, repeat=len(self.free)):
            joint = [None] * n
            for a, q in self.fixed.items():
                joint[a] = q(s)
            for a, act in zip(self.free, combo):
                joint[a] = act
            joint = tuple(joint)
            nxt = self.an.dyn.step(s, joint)
            if nxt not in seen:
                seen[nxt] = joint
        return seen.items()

    def search(self, s0: State, want: bool) -> Optional[Lasso]:
        """First play whose goal value equals ``want``."""
        path: List[State] = []
        acts: list = []

        def check(lasso: Lasso) -> Optional[Lasso]:
            self.an.tick()
            return lasso if evaluate(self.goal, lasso, 0) == want else None

        def go(s: State) -> Optional[Lasso]:
            if self.exact:
                if len(path) == self.depth:
                    return check(Lasso(tuple(path) + (s,), len(path), tuple(acts) + (None,)))
            else:
                if s in path:
                    return check(Lasso(tuple(path), path.index(s), tuple(acts)))
                if len(path) > self.horizon:
                    self.exceeded = True
                    return None
            path.append(s)
            try:
                for nxt, joint in self.successors(s):
                    acts.append(joint)
                    hit = go(nxt)
                    acts.pop()
                    if hit is not None:
                        return hit
            finally:
                path.pop()
            return None

        return go(s0)


def is_winning_bounded(game: InfluenceGame, i: int, q: Strategy, horizon: int,
                       uniform: bool = False, s0: Optional[State] = None,
                       budget: Optional[int] = None) -> Verdict:
    """``q`` against opponents choosing any joint action at every step.

    ``yes`` implies ``q`` is winning over every state-based family.  For
    goals built from ``X`` only, with depth at most ``horizon``, the answer is
    exact; a ``no`` always comes with a concrete play.
    """
    an = Analyzer(game, budget)
    s0 = game.initial if s0 is None else s0
    search = _PathSearch(an, game.goals[i], {i: q}, _others(game, i), horizon)
    question = (f"{game.agents[i]}: {q.describe(game.issues)} wins against any play"
                + (" uniform" if uniform else ""))
    family = f"unconstrained adversary, horizon {horizon}"
    for s in _class_or_single(game, s0, i, uniform):
        bad = search.search(s, want=False)
        if bad is not None:
            return Verdict(question, False, family, an.spent,
                           witness={"initial_state": s, "history": bad})
    if search.exceeded:
        raise HorizonExceeded(f"some play runs longer than {horizon} steps without repeating")
    note = ("exact: goal only uses X" if search.exact
            else "every simple lasso checked: winning against all state-based opponents")
    return Verdict(question, True, family, an.spent, notes=[note])


def deviation_probe(game: InfluenceGame, profile: Sequence[Strategy], i: int, horizon: int,
                    s0: Optional[State] = None, budget: Optional[int] = None) -> Verdict:
    """Can any deviation of ``i``, inside or outside a family, raise her worst case?

    ``yes`` (no profitable deviation) is certified when the current worst
    case is already 1, or when from some state of her class no play at all
    reaches her goal.  ``no`` means candidate plays exist and the probe is
    inconclusive.
    """
    an = Analyzer(game, budget)
    s0 = game.initial if s0 is None else s0
    question = f"{game.agents[i]}: no deviation improves the worst case"
    family = f"any play of {game.agents[i]}, horizon {horizon}"
    if min_utility(game, i, profile, s0):
        return Verdict(question, True, family, an.spent, notes=["minimum utility already 1"])
    fixed = {a: profile[a] for a in _others(game, i)}
    candidate = None
    for s in indistinguishability_class(s0, i):
        search = _PathSearch(an, game.goals[i], fixed, [i], horizon)
        hit = search.search(s, want=True)
        if hit is None and not search.exceeded:
            return Verdict(question, True, family, an.spent,
                           notes=[f"no play reaches the goal from {s}"])
        candidate = candidate or hit
    return Verdict(question, False, family, an.spent,
                   witness=None if candidate is None else {"candidate_play": candidate},
                   notes=["inconclusive: some play reaches the goal from every state of the class"])


def exists_winning_play(game: InfluenceGame, i: int, s0: Optional[State] = None,
                        budget: Optional[int] = None) -> bool:
    """For ``X``-only goals: can ``i``, choosing freely each step, force her goal?

    Opponents also choose freely.  ``False`` rules out every strategy of
    ``i``, state-based or not.
    """
    goal = game.goals[i]
    d = next_depth(goal)
    if d is None:
        raise ModelError("exists_winning_play needs a goal built from X only")
    an = Analyzer(game, budget)
    s0 = game.initial if s0 is None else s0
    others = _others(game, i)

    def go(path: List[State]) -> bool:
        s = path[-1]
        if len(path) == d + 1:
            an.tick()
            return evaluate(goal, Lasso(tuple(path), len(path) - 1), 0)
        for mine in an.actions:
            ok = True
            for combo in itertools.product(an.actions, repeat=len(others)):
                joint = [None] * game.n
                joint[i] = mine
                for a, act in zip(others, combo):
                    joint[a] = act
                if not go(path + [an.dyn.step(s, tuple(joint))]):
                    ok = False
                    break
            if ok:
                return True
        return False

    return go([s0])
