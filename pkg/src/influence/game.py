"""Influence games and state-based strategies."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from .core import (DEFAULT_STATE_LIMIT, InfluenceNetwork, ModelError, State, class_count,
                   class_key)
from .diffusion import (SKIP, Action, AggregationRule, Dynamics, UnanimousRule,
                        all_actions, hide, reveal)
from .logic.semantics import eval_state
from .logic.syntax import Bel, Formula, Know, Not, Vocabulary, conjoin, Eventually, Next

ClassKey = Tuple[int, int, int]


@dataclass
class InfluenceGame:
    agents: List[str]
    issues: List[str]
    network: InfluenceNetwork
    initial: State
    goals: List[Formula]
    rules: List[AggregationRule] = None
    state_limit: int = DEFAULT_STATE_LIMIT

    def __post_init__(self):
        n, m = len(self.agents), len(self.issues)
        if self.rules is None:
            self.rules = [UnanimousRule()] * n
        if self.network.n != n or (self.initial.n, self.initial.m) != (n, m):
            raise ModelError("network, initial state and name lists disagree on n or m")
        if len(self.goals) != n or len(self.rules) != n:
            raise ModelError("need one goal and one aggregation rule per agent")

    @property
    def n(self) -> int:
        return len(self.agents)

    @property
    def m(self) -> int:
        return len(self.issues)

    @cached_property
    def dynamics(self) -> Dynamics:
        return Dynamics(self.network, self.rules, self.state_limit)

    @cached_property
    def vocab(self) -> Vocabulary:
        return Vocabulary(self.agents, self.issues)

    def with_initial(self, s0: State) -> "InfluenceGame":
        g = InfluenceGame(self.agents, self.issues, self.network, s0, self.goals,
                          self.rules, self.state_limit)
        g.__dict__["dynamics"] = self.dynamics
        return g


class Strategy:
    """Maps agent ``agent``'s information state to an action.

    Subclasses implement :meth:`action_for` on class keys, so two states the
    agent cannot tell apart always get the same action.
    """

    agent: int

    def action_for(self, key: ClassKey) -> Action:
        raise NotImplementedError

    def __call__(self, state: State) -> Action:
        return self.action_for(class_key(state, self.agent))

    def describe(self, issues: Optional[Sequence[str]] = None) -> str:
        return type(self).__name__


@dataclass(frozen=True)
class ConstantStrategy(Strategy):
    agent: int
    action: Action

    def action_for(self, key):
        return self.action

    def describe(self, issues=None):
        return f"always {self.action.label(issues)}"


@dataclass
class TableStrategy(Strategy):
    """Explicit action per class key, ``default`` elsewhere."""

    agent: int
    table: Dict[ClassKey, Action]
    default: Action = SKIP

    def action_for(self, key):
        return self.table.get(key, self.default)

    def describe(self, issues=None):
        return f"table with {len(self.table)} entries, otherwise {self.default.label(issues)}"


@dataclass
class RuleStrategy(Strategy):
    """First rule whose guard the agent knows to hold fires.

    A guard is a state formula; it is tested as ``K[agent] guard``, which is
    constant on each information state.
    """

    agent: int
    n: int
    m: int
    rules: List[Tuple[Formula, Action]]
    default: Action = SKIP
    _memo: Dict = field(default_factory=dict, repr=False, compare=False)

    def action_for(self, key):
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        own, visibility, seen = key
        probe = State(self.n, self.m, own | seen, visibility)
        out = self.default
        for guard, action in self.rules:
            if eval_state(Know(self.agent, guard), probe):
                out = action
                break
        self._memo[key] = out
        return out

    def describe(self, issues=None):
        return f"{len(self.rules)} guarded rules, otherwise {self.default.label(issues)}"


@dataclass
class FunctionStrategy(Strategy):
    agent: int
    fn: Callable[[ClassKey], Action]
    name: str = "function"

    def action_for(self, key):
        return self.fn(key)

    def describe(self, issues=None):
        return self.name


def representative(key: ClassKey, n: int, m: int) -> State:
    """A state in the information state ``key`` (hidden beliefs set to 0)."""
    own, visibility, seen = key
    return State(n, m, own | seen, visibility)


def all_skip(n: int) -> List[Strategy]:
    return [ConstantStrategy(i, SKIP) for i in range(n)]


def consensus_profile(n: int, m: int = 1, issue: int = 0,
                      positive: bool = True) -> List[Strategy]:
    """Reveal the issue when holding the target value, hide it otherwise."""
    profile = []
    for i in range(n):
        guard = Bel(i, issue) if positive else Not(Bel(i, issue))
        profile.append(RuleStrategy(i, n, m, [(guard, reveal(issue))], hide(issue)))
    return profile


def consensus_goals(n: int, issue: int = 0, positive: bool = True) -> List[Formula]:
    """``F X`` (all other agents hold the target value on ``issue``)."""
    goals = []
    for i in range(n):
        lits = [Bel(j, issue) if positive else Not(Bel(j, issue)) for j in range(n) if j != i]
        goals.append(Eventually(Next(conjoin(lits))))
    return goals


@dataclass
class StrategyFamily:
    """Which strategies a quantifier ranges over.

    ``full``       every map from information states to actions, admitted
                   only when ``|A| ** classes`` fits the budget;
    ``reachable``  the same set, searched lazily over the information states
                   the play actually reaches (admitted while the search stays
                   within the budget);
    ``constant``   one action everywhere;
    ``table``      an explicit list of strategies per agent.
    """

    kind: str = "constant"
    tables: Mapping[int, Sequence[Strategy]] = field(default_factory=dict)

    KINDS = ("full", "reachable", "constant", "table")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ModelError(f"unknown strategy family {self.kind!r}")

    @property
    def lazy(self) -> bool:
        return self.kind in ("full", "reachable")

    def explicit(self, agent: int, m: int) -> List[Strategy]:
        if self.kind == "constant":
            return [ConstantStrategy(agent, a) for a in all_actions(m)]
        if self.kind == "table":
            if agent not in self.tables:
                raise ModelError(f"table family lists no strategies for agent {agent}")
            return list(self.tables[agent])
        raise ModelError(f"family {self.kind!r} is searched lazily")

    def size(self, agent: int, n: int, m: int) -> int:
        if self.lazy:
            return (2 * m + 1) ** class_count(n, m)
        return len(self.explicit(agent, m))

    def __str__(self):
        return self.kind


FULL = StrategyFamily("full")
REACHABLE = StrategyFamily("reachable")
CONSTANT = StrategyFamily("constant")
