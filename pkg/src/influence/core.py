"""Agents, issues, opinions, visibility and the indistinguishability relation.

A state packs the belief profile and the visibility profile into two
integers.  Bit ``i * m + p`` holds agent ``i``'s value on issue ``p``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence, Tuple

HIDDEN = None  # the '?' of a public opinion

DEFAULT_STATE_LIMIT = 1 << 24

OpinionVector = Tuple[int, ...]
VisibilityVector = Tuple[int, ...]
PublicOpinion = Tuple[Optional[int], ...]


class ModelError(ValueError):
    """Invalid agent/issue index, malformed matrix or network."""


class StateSpaceTooLarge(ModelError):
    pass


def _check_index(value: int, bound: int, what: str) -> None:
    if not 0 <= value < bound:
        raise ModelError(f"unknown {what} {value!r} (expected 0..{bound - 1})")


@dataclass(frozen=True, slots=True)
class State:
    """A profile of private opinions plus a profile of visibility functions."""

    n: int
    m: int
    beliefs: int
    visibility: int

    @classmethod
    def from_matrices(cls, beliefs: Sequence[Sequence[int]],
                      visibility: Sequence[Sequence[int]]) -> "State":
        n = len(beliefs)
        if n == 0 or len(visibility) != n:
            raise ModelError("belief and visibility matrices need one row per agent")
        m = len(beliefs[0])
        b = v = 0
        for i in range(n):
            if len(beliefs[i]) != m or len(visibility[i]) != m:
                raise ModelError(f"row {i} is not total over the {m} issues")
            for p in range(m):
                for value in (beliefs[i][p], visibility[i][p]):
                    if value not in (0, 1):
                        raise ModelError(f"entry ({i},{p}) must be 0 or 1, got {value!r}")
                b |= int(beliefs[i][p]) << (i * m + p)
                v |= int(visibility[i][p]) << (i * m + p)
        return cls(n, m, b, v)

    @classmethod
    def single_issue(cls, beliefs: Sequence[int], visibility: Sequence[int]) -> "State":
        """Build a one-issue state from per-agent belief and visibility tuples."""
        return cls.from_matrices([[x] for x in beliefs], [[x] for x in visibility])

    def belief(self, i: int, p: int) -> int:
        return (self.beliefs >> (i * self.m + p)) & 1

    def visible(self, i: int, p: int) -> int:
        return (self.visibility >> (i * self.m + p)) & 1

    def opinion(self, i: int) -> OpinionVector:
        _check_index(i, self.n, "agent")
        return tuple(self.belief(i, p) for p in range(self.m))

    def visibility_of(self, i: int) -> VisibilityVector:
        _check_index(i, self.n, "agent")
        return tuple(self.visible(i, p) for p in range(self.m))

    def belief_matrix(self) -> Tuple[OpinionVector, ...]:
        return tuple(self.opinion(i) for i in range(self.n))

    def visibility_matrix(self) -> Tuple[VisibilityVector, ...]:
        return tuple(self.visibility_of(i) for i in range(self.n))

    def with_bits(self, beliefs: Optional[int] = None,
                  visibility: Optional[int] = None) -> "State":
        return State(self.n, self.m,
                     self.beliefs if beliefs is None else beliefs,
                     self.visibility if visibility is None else visibility)

    def __str__(self) -> str:
        def row(vec: Sequence[int]) -> str:
            return "".join(str(x) for x in vec)

        b = ",".join(row(v) for v in self.belief_matrix())
        v = ",".join(row(v) for v in self.visibility_matrix())
        return f"(({b}),({v}))"


def agent_mask(i: int, m: int) -> int:
    """Bit mask covering all issues of agent ``i``."""
    return ((1 << m) - 1) << (i * m)


def state_count(n: int, m: int) -> int:
    return 1 << (2 * n * m)


def all_states(n: int, m: int, limit: int = DEFAULT_STATE_LIMIT) -> Iterator[State]:
    """Enumerate every state for ``n`` agents and ``m`` issues."""
    total = state_count(n, m)
    if total > limit:
        raise StateSpaceTooLarge(
            f"{total} states for n={n}, m={m} exceed the state-space guard {limit}")
    size = 1 << (n * m)
    for b in range(size):
        for v in range(size):
            yield State(n, m, b, v)


def public_opinion(state: State, i: int) -> PublicOpinion:
    """Agent ``i``'s beliefs where visible, ``HIDDEN`` elsewhere."""
    _check_index(i, state.n, "agent")
    return tuple(state.belief(i, p) if state.visible(i, p) else HIDDEN
                 for p in range(state.m))


@dataclass(frozen=True)
class InfluenceNetwork:
    """Directed irreflexive graph; ``(i, j)`` in ``edges`` means i influences j."""

    n: int
    edges: frozenset

    def __init__(self, n: int, edges: Iterable[Tuple[int, int]] = ()):
        edges = frozenset((int(a), int(b)) for a, b in edges)
        for a, b in edges:
            _check_index(a, n, "agent")
            _check_index(b, n, "agent")
            if a == b:
                raise ModelError(f"reflexive edge ({a},{a}): influence networks are irreflexive")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", edges)
        inf = tuple(tuple(sorted(a for a, b in edges if b == j)) for j in range(n))
        object.__setattr__(self, "_influencers", inf)

    @classmethod
    def complete(cls, n: int) -> "InfluenceNetwork":
        return cls(n, ((a, b) for a in range(n) for b in range(n) if a != b))

    def influencers(self, j: int) -> Tuple[int, ...]:
        _check_index(j, self.n, "agent")
        return self._influencers[j]

    def sorted_edges(self) -> list:
        return sorted(self.edges)


def influencers(net: InfluenceNetwork, j: int) -> frozenset:
    """Inf(j): the in-neighbours of ``j``."""
    return frozenset(net.influencers(j))


def active_influencers(state: State, net: InfluenceNetwork, i: int, p: int) -> frozenset:
    """Influencers of ``i`` currently showing their opinion on ``p``."""
    _check_index(p, state.m, "issue")
    return frozenset(j for j in net.influencers(i) if state.visible(j, p))


def _others_mask(i: int, n: int, m: int) -> int:
    return ((1 << (n * m)) - 1) & ~agent_mask(i, m)


def indistinguishable(s: State, t: State, i: int) -> bool:
    """True iff agent ``i`` cannot tell ``s`` from ``t``."""
    _check_index(i, s.n, "agent")
    if (s.n, s.m) != (t.n, t.m):
        raise ModelError("states range over different agent/issue sets")
    if s.visibility != t.visibility:
        return False
    own = agent_mask(i, s.m)
    if (s.beliefs ^ t.beliefs) & own:
        return False
    seen = s.visibility & _others_mask(i, s.n, s.m)
    return not ((s.beliefs ^ t.beliefs) & seen)


def hidden_entries(s: State, i: int) -> list:
    """Bit positions of other agents' beliefs that ``i`` cannot see."""
    others = _others_mask(i, s.n, s.m)
    hidden = others & ~s.visibility
    return [b for b in range(s.n * s.m) if (hidden >> b) & 1]


def indistinguishability_class(s: State, i: int) -> list:
    """Every state agent ``i`` confuses with ``s`` (``s`` first)."""
    _check_index(i, s.n, "agent")
    bits = hidden_entries(s, i)
    base = s.beliefs
    for b in bits:
        base &= ~(1 << b)
    out = []
    for values in itertools.product((0, 1), repeat=len(bits)):
        b = base
        for bit, x in zip(bits, values):
            b |= x << bit
        out.append(State(s.n, s.m, b, s.visibility))
    out.sort(key=lambda t: t != s)
    return out


def class_key(s: State, i: int) -> Tuple[int, int, int]:
    """Canonical name of ``i``'s information state at ``s``.

    Keys coincide exactly when the states are indistinguishable for ``i``:
    own beliefs, the full visibility profile and the visible part of the
    other agents' beliefs.
    """
    own = agent_mask(i, s.m)
    seen = s.visibility & ~own
    return (s.beliefs & own, s.visibility, s.beliefs & seen)


def class_count(n: int, m: int) -> int:
    """Number of information states of one agent."""
    return 4 ** m * 3 ** ((n - 1) * m)
