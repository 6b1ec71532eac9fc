"""Actions, aggregation rules, the transition function and induced lassos."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional, Sequence, Tuple

from .core import (DEFAULT_STATE_LIMIT, HIDDEN, InfluenceNetwork, ModelError,
                   OpinionVector, PublicOpinion, State, StateSpaceTooLarge,
                   public_opinion, state_count)

REVEAL, HIDE, SKIP_KIND = "reveal", "hide", "skip"


@dataclass(frozen=True, order=True)
class Action:
    kind: str
    issue: Optional[int] = None

    def __post_init__(self):
        if self.kind == SKIP_KIND:
            if self.issue is not None:
                raise ModelError("skip takes no issue")
        elif self.kind in (REVEAL, HIDE):
            if self.issue is None:
                raise ModelError(f"{self.kind} needs an issue")
        else:
            raise ModelError(f"unknown action kind {self.kind!r}")

    def label(self, issues: Optional[Sequence[str]] = None) -> str:
        if self.kind == SKIP_KIND:
            return "skip"
        name = issues[self.issue] if issues is not None else f"p{self.issue}"
        return f"{self.kind} {name}"

    def __str__(self) -> str:
        return self.label()


SKIP = Action(SKIP_KIND)


def reveal(p: int) -> Action:
    return Action(REVEAL, p)


def hide(p: int) -> Action:
    return Action(HIDE, p)


def all_actions(m: int) -> Tuple[Action, ...]:
    """The 2m+1 individual actions in canonical order: reveals, hides, skip."""
    return tuple(reveal(p) for p in range(m)) + tuple(hide(p) for p in range(m)) + (SKIP,)


def parse_action(text: str, issues: Sequence[str]) -> Action:
    words = text.split()
    if words == ["skip"]:
        return SKIP
    if len(words) == 2 and words[0] in (REVEAL, HIDE):
        try:
            return Action(words[0], list(issues).index(words[1]))
        except ValueError:
            raise ModelError(f"unknown issue {words[1]!r} in action {text!r}") from None
    raise ModelError(f"cannot read action {text!r} (use 'reveal <issue>', 'hide <issue>' or 'skip')")


JointAction = Tuple[Action, ...]


class AggregationRule:
    """Maps an agent's opinion and her influencers' public opinions to a new opinion.

    ``publics`` holds one public opinion per influencer; hidden entries are
    ``HIDDEN``.  The rule must not look at anything else.
    """

    name = "abstract"
    encodable = False

    def update(self, own: OpinionVector, publics: Mapping[int, PublicOpinion]) -> OpinionVector:
        raise NotImplementedError

    def __eq__(self, other):
        return type(self) is type(other)

    def __hash__(self):
        return hash(type(self))

    def __repr__(self):
        return f"{type(self).__name__}()"


class UnanimousRule(AggregationRule):
    """Adopt the influencers' value on an issue when all who show it agree."""

    name = "unanimous"
    encodable = True

    def update(self, own, publics):
        out = list(own)
        for p in range(len(own)):
            shown = {pub[p] for pub in publics.values() if pub[p] is not HIDDEN}
            if len(shown) == 1:
                out[p] = shown.pop()
        return tuple(out)


class MajorityRule(AggregationRule):
    """Copy the strict majority of the visible influencers; ties keep the own value."""

    name = "majority"

    def update(self, own, publics):
        out = list(own)
        for p in range(len(own)):
            ones = sum(1 for pub in publics.values() if pub[p] == 1)
            zeros = sum(1 for pub in publics.values() if pub[p] == 0)
            if ones > zeros:
                out[p] = 1
            elif zeros > ones:
                out[p] = 0
        return tuple(out)


RULES = {"unanimous": UnanimousRule, "majority": MajorityRule}


def unanimous_update(state: State, net: InfluenceNetwork, i: int) -> OpinionVector:
    """New opinion of ``i`` under unanimous aggregation, reading ``state`` as is."""
    publics = {j: public_opinion(state, j) for j in net.influencers(i)}
    return UnanimousRule().update(state.opinion(i), publics)


def apply_visibility(state: State, joint: JointAction) -> int:
    v = state.visibility
    m = state.m
    for i, a in enumerate(joint):
        if a.kind == REVEAL:
            v |= 1 << (i * m + a.issue)
        elif a.kind == HIDE:
            v &= ~(1 << (i * m + a.issue))
    return v


def transition(state: State, joint: JointAction, net: InfluenceNetwork,
               rules: Sequence[AggregationRule]) -> State:
    """Apply the joint action to visibility, then update all beliefs at once.

    Every agent reads the public profile built from the old beliefs and the
    new visibility.
    """
    if len(joint) != state.n:
        raise ModelError(f"joint action has {len(joint)} entries for {state.n} agents")
    for a in joint:
        if a.issue is not None and not 0 <= a.issue < state.m:
            raise ModelError(f"action {a} names an unknown issue")
    shown = state.with_bits(visibility=apply_visibility(state, joint))
    publics = [public_opinion(shown, j) for j in range(state.n)]
    beliefs = 0
    m = state.m
    for i in range(state.n):
        new = rules[i].update(state.opinion(i),
                              {j: publics[j] for j in net.influencers(i)})
        for p, x in enumerate(new):
            beliefs |= x << (i * m + p)
    return shown.with_bits(beliefs=beliefs)


class Dynamics:
    """A network plus per-agent rules, with a memo of computed transitions."""

    def __init__(self, net: InfluenceNetwork, rules: Sequence[AggregationRule],
                 state_limit: int = DEFAULT_STATE_LIMIT):
        if len(rules) != net.n:
            raise ModelError("need exactly one aggregation rule per agent")
        self.net = net
        self.rules = tuple(rules)
        self.state_limit = state_limit
        self._memo: Dict[Tuple[State, JointAction], State] = {}

    @classmethod
    def unanimous(cls, net: InfluenceNetwork, **kw) -> "Dynamics":
        return cls(net, [UnanimousRule()] * net.n, **kw)

    def step(self, state: State, joint: JointAction) -> State:
        key = (state, joint)
        nxt = self._memo.get(key)
        if nxt is None:
            nxt = transition(state, joint, self.net, self.rules)
            if len(self._memo) < 1_000_000:
                self._memo[key] = nxt
        return nxt


@dataclass(frozen=True)
class Lasso:
    """An ultimately periodic history ``states[:loop] (states[loop:])^omega``.

    ``actions[k]`` is the joint action taken at ``states[k]``; it leads to
    ``states[k + 1]``, or back to ``states[loop]`` from the last state.
    """

    states: Tuple[State, ...]
    loop: int
    actions: Optional[Tuple[JointAction, ...]] = field(default=None, compare=False)

    def __post_init__(self):
        if not self.states or not 0 <= self.loop < len(self.states):
            raise ModelError("a lasso needs a non-empty cycle")

    @property
    def prefix(self) -> Tuple[State, ...]:
        return self.states[:self.loop]

    @property
    def cycle(self) -> Tuple[State, ...]:
        return self.states[self.loop:]

    def __len__(self) -> int:
        return len(self.states)

    def successor(self, k: int) -> int:
        return k + 1 if k + 1 < len(self.states) else self.loop

    def position(self, k: int) -> int:
        """Fold an arbitrary time index onto ``0..len-1``."""
        if k < len(self.states):
            return k
        c = len(self.states) - self.loop
        return self.loop + (k - self.loop) % c

    def state_at(self, k: int) -> State:
        return self.states[self.position(k)]

    def unrolled(self, length: int) -> list:
        return [self.state_at(k) for k in range(length)]


def induced_lasso(s0: State, profile, dynamics: Dynamics) -> Lasso:
    """Run the state-based profile from ``s0`` until a state repeats.

    ``profile`` is either a callable ``state -> joint action`` or a sequence
    of per-agent callables ``state -> action``.
    """
    if state_count(s0.n, s0.m) > dynamics.state_limit:
        raise StateSpaceTooLarge(
            f"{state_count(s0.n, s0.m)} states exceed the state-space guard {dynamics.state_limit}")
    choose = profile if callable(profile) else (lambda s: tuple(q(s) for q in profile))
    index: Dict[State, int] = {}
    states, actions = [], []
    s = s0
    while s not in index:
        index[s] = len(states)
        states.append(s)
        joint = tuple(choose(s))
        actions.append(joint)
        s = dynamics.step(s, joint)
    return Lasso(tuple(states), index[s], tuple(actions))


def format_step(t: int, state: State, joint: Optional[JointAction],
                issues: Optional[Sequence[str]] = None) -> str:
    b = ",".join("".join(map(str, row)) for row in state.belief_matrix())
    v = ",".join("".join(map(str, row)) for row in state.visibility_matrix())
    a = "-" if joint is None else "(" + ", ".join(x.label(issues) for x in joint) + ")"
    return f"{t} | B=({b}) | V=({v}) | a={a}"


def format_trace(states: Sequence[State], actions: Sequence[Optional[JointAction]],
                 issues: Optional[Sequence[str]] = None) -> str:
    lines = []
    for t, s in enumerate(states):
        joint = actions[t] if t < len(actions) else None
        lines.append(format_step(t, s, joint, issues))
    return "\n".join(lines)


def is_fixed_point(state: State, dynamics: Dynamics) -> bool:
    return dynamics.step(state, (SKIP,) * state.n) == state


def agreement_holds(state: State, net: InfluenceNetwork) -> bool:
    """Every agent's beliefs match all of her active influencers' public values."""
    for i in range(state.n):
        for p in range(state.m):
            for j in net.influencers(i):
                if state.visible(j, p) and state.belief(j, p) != state.belief(i, p):
                    return False
    return True


__all__ = [
    "Action", "SKIP", "reveal", "hide", "all_actions", "parse_action", "JointAction",
    "AggregationRule", "UnanimousRule", "MajorityRule", "RULES", "unanimous_update",
    "transition", "Dynamics", "Lasso", "induced_lasso", "format_step", "format_trace",
    "is_fixed_point", "agreement_holds",
]
