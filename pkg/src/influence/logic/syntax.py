"""Formula trees, concrete syntax and printing.

Concrete syntax::

    B[agent,issue]  V[agent,issue]  true  false
    !a   K[agent] a   X a   F a   G a   a U b   a & b   a | b   a -> b

Prefix operators bind tightest, then ``U`` (left-associative), ``&``,
``|`` and finally ``->`` (right-associative).  ``K`` may only be applied
to formulas without temporal operators.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple


class Formula:
    __slots__ = ()

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Const(Formula):
    value: bool


@dataclass(frozen=True)
class Bel(Formula):
    agent: int
    issue: int


@dataclass(frozen=True)
class Vis(Formula):
    agent: int
    issue: int


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Know(Formula):
    agent: int
    arg: Formula


@dataclass(frozen=True)
class Next(Formula):
    arg: Formula


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Eventually(Formula):
    arg: Formula


@dataclass(frozen=True)
class Henceforth(Formula):
    arg: Formula


TRUE = Const(True)
FALSE = Const(False)

ATOMS = (Const, Bel, Vis)
UNARY = (Not, Know, Next, Eventually, Henceforth)
BINARY = (And, Or, Implies, Until)
TEMPORAL = (Next, Until, Eventually, Henceforth)


def children(f: Formula) -> Tuple[Formula, ...]:
    if isinstance(f, UNARY):
        return (f.arg,)
    if isinstance(f, BINARY):
        return (f.left, f.right)
    return ()


def subformulas(f: Formula) -> Iterator[Formula]:
    """All nodes of ``f``, children before parents."""
    stack = [(f, False)]
    while stack:
        node, done = stack.pop()
        if done:
            yield node
            continue
        stack.append((node, True))
        for c in reversed(children(node)):
            stack.append((c, False))


def size(f: Formula) -> int:
    return sum(1 for _ in subformulas(f))


def is_state_formula(f: Formula) -> bool:
    """No temporal operator anywhere inside."""
    return not any(isinstance(g, TEMPORAL) for g in subformulas(f))


def is_epistemic_free(f: Formula) -> bool:
    return not any(isinstance(g, Know) for g in subformulas(f))


def count_know(f: Formula) -> int:
    return sum(1 for g in subformulas(f) if isinstance(g, Know))


def next_depth(f: Formula) -> Optional[int]:
    """Nesting depth of ``X`` if the formula uses no ``U``/``F``/``G``, else ``None``."""
    if isinstance(f, (Until, Eventually, Henceforth)):
        return None
    depths = [next_depth(c) for c in children(f)]
    if any(d is None for d in depths):
        return None
    inner = max(depths, default=0)
    return inner + 1 if isinstance(f, Next) else inner


def temporal_depth(f: Formula) -> int:
    inner = max((temporal_depth(c) for c in children(f)), default=0)
    return inner + 1 if isinstance(f, TEMPORAL) else inner


def agents_mentioned(f: Formula) -> set:
    return {g.agent for g in subformulas(f) if isinstance(g, (Bel, Vis, Know))}


def conjoin(parts: Sequence[Formula]) -> Formula:
    """Balanced conjunction; ``true`` when empty."""
    parts = list(parts)
    if not parts:
        return TRUE
    if len(parts) == 1:
        return parts[0]
    mid = len(parts) // 2
    return And(conjoin(parts[:mid]), conjoin(parts[mid:]))


def disjoin(parts: Sequence[Formula]) -> Formula:
    parts = list(parts)
    if not parts:
        return FALSE
    if len(parts) == 1:
        return parts[0]
    mid = len(parts) // 2
    return Or(disjoin(parts[:mid]), disjoin(parts[mid:]))


def iff(a: Formula, b: Formula) -> Formula:
    return And(Implies(a, b), Implies(b, a))


# -- names -----------------------------------------------------------------

_NAME = re.compile(r"[A-Za-z0-9_]+\Z")


class Vocabulary:
    """Agent and issue names.  An open vocabulary registers unseen names."""

    def __init__(self, agents: Iterable[str] = (), issues: Iterable[str] = (), open: bool = False):
        self.agents: List[str] = [str(a) for a in agents]
        self.issues: List[str] = [str(p) for p in issues]
        self.open = open
        for name in self.agents + self.issues:
            if not _NAME.match(name):
                raise ValueError(f"name {name!r} must match [A-Za-z0-9_]+")
        if len(set(self.agents)) != len(self.agents) or len(set(self.issues)) != len(self.issues):
            raise ValueError("duplicate agent or issue name")

    @classmethod
    def numbered(cls, n: int, m: int) -> "Vocabulary":
        return cls([str(i) for i in range(n)], [f"p{q}" for q in range(m)])

    def agent_index(self, name: str) -> Optional[int]:
        if name in self.agents:
            return self.agents.index(name)
        if self.open:
            self.agents.append(name)
            return len(self.agents) - 1
        return None

    def issue_index(self, name: str) -> Optional[int]:
        if name in self.issues:
            return self.issues.index(name)
        if self.open:
            self.issues.append(name)
            return len(self.issues) - 1
        return None

    def agent_name(self, i: int) -> str:
        return self.agents[i] if i < len(self.agents) else str(i)

    def issue_name(self, p: int) -> str:
        return self.issues[p] if p < len(self.issues) else f"p{p}"


# -- parsing ---------------------------------------------------------------

class ParseError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


_TOKEN = re.compile(r"\s*(?:(->)|([!&|()\[\],])|([A-Za-z0-9_]+))")


def _tokenize(text: str) -> List[Tuple[str, int]]:
    tokens, pos = [], 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        match = _TOKEN.match(text, pos)
        if not match:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        start = match.start(match.lastindex)
        tokens.append((match.group(match.lastindex), start))
        pos = match.end()
    tokens.append(("", len(text)))
    return tokens


_TEMPORAL_WORDS = {"X", "F", "G", "U"}


class _Parser:
    def __init__(self, text: str, vocab: Vocabulary,
                 props: Optional[Dict[str, Formula]] = None):
        self.text = text
        self.vocab = vocab
        self.props = props
        self.tokens = _tokenize(text)
        self.i = 0
        self.under_know: Optional[int] = None

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def pos(self) -> int:
        return self.tokens[self.i][1]

    def error(self, message: str, pos: Optional[int] = None):
        raise ParseError(message, self.pos() if pos is None else pos, self.text)

    def take(self, expected: Optional[str] = None) -> str:
        tok = self.peek()
        if expected is not None and tok != expected:
            self.error(f"expected {expected!r}, found {tok or 'end of input'!r}")
        self.i += 1
        return tok

    def check_layer(self, tok: str):
        if self.under_know is not None and tok in _TEMPORAL_WORDS:
            self.error(f"temporal operator {tok!r} under K "
                       f"(K at position {self.under_know})")

    def parse(self) -> Formula:
        f = self.implication()
        if self.peek() != "":
            self.error(f"unexpected {self.peek()!r}")
        return f

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.peek() == "|":
            self.take()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.until()
        while self.peek() == "&":
            self.take()
            f = And(f, self.until())
        return f

    def until(self) -> Formula:
        f = self.unary()
        while self.peek() == "U":
            self.check_layer("U")
            self.take()
            f = Until(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.peek()
        if tok == "!":
            self.take()
            return Not(self.unary())
        if tok in ("X", "F", "G"):
            self.check_layer(tok)
            self.take()
            arg = self.unary()
            return {"X": Next, "F": Eventually, "G": Henceforth}[tok](arg)
        if tok == "K":
            start = self.pos()
            self.take()
            self.take("[")
            agent = self.agent()
            self.take("]")
            outer = self.under_know
            self.under_know = start if outer is None else outer
            try:
                arg = self.unary()
            finally:
                self.under_know = outer
            return Know(agent, arg)
        return self.atom()

    def agent(self) -> int:
        pos = self.pos()
        name = self.take()
        if not _NAME.match(name or "-"):
            self.error("expected an agent name", pos)
        index = self.vocab.agent_index(name)
        if index is None:
            self.error(f"unknown agent {name!r}", pos)
        return index

    def issue(self) -> int:
        pos = self.pos()
        name = self.take()
        if not _NAME.match(name or "-"):
            self.error("expected an issue name", pos)
        index = self.vocab.issue_index(name)
        if index is None:
            self.error(f"unknown issue {name!r}", pos)
        return index

    def atom(self) -> Formula:
        tok = self.peek()
        if tok == "(":
            self.take()
            f = self.implication()
            self.take(")")
            return f
        if tok in ("true", "false"):
            self.take()
            return Const(tok == "true")
        if self.props is not None:
            if tok in self.props:
                self.take()
                return self.props[tok]
            self.error(f"unknown proposition {tok!r}" if tok else "unexpected end of input")
        if tok in ("B", "V"):
            self.take()
            self.take("[")
            agent = self.agent()
            self.take(",")
            issue = self.issue()
            self.take("]")
            return (Bel if tok == "B" else Vis)(agent, issue)
        if tok == "":
            self.error("unexpected end of input")
        self.error(f"unexpected {tok!r}")


def parse(text: str, vocab: Optional[Vocabulary] = None) -> Formula:
    """Parse a goal formula; without a vocabulary, names are registered on first use."""
    return _Parser(text, vocab if vocab is not None else Vocabulary(open=True)).parse()


def parse_with_props(text: str, props: Dict[str, Formula]) -> Formula:
    """Parse text whose atoms are proposition names from ``props``."""
    return _Parser(text, Vocabulary(), props).parse()


def read_formula_file(text: str, vocab: Optional[Vocabulary] = None) -> List[Formula]:
    """One formula per line; blank lines and ``#`` comments are skipped."""
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(parse(line, vocab))
    return out


# -- printing --------------------------------------------------------------

_LEVEL = {Implies: 1, Or: 2, And: 3, Until: 4}
_UNARY_LEVEL = 5
_ATOM_LEVEL = 6


def _level(f: Formula) -> int:
    if isinstance(f, BINARY):
        return _LEVEL[type(f)]
    if isinstance(f, UNARY):
        return _UNARY_LEVEL
    return _ATOM_LEVEL


_SYMBOL = {Implies: "->", Or: "|", And: "&", Until: "U"}


def default_atom_text(vocab: Vocabulary) -> Callable[[Formula], str]:
    def render(f: Formula) -> str:
        kind = "B" if isinstance(f, Bel) else "V"
        return f"{kind}[{vocab.agent_name(f.agent)},{vocab.issue_name(f.issue)}]"
    return render


def to_text(f: Formula, vocab: Optional[Vocabulary] = None,
            atom_text: Optional[Callable[[Formula], str]] = None) -> str:
    """Render ``f`` so that parsing the result gives back the same tree."""
    vocab = vocab if vocab is not None else Vocabulary()
    atom_text = atom_text or default_atom_text(vocab)
    memo: Dict[int, str] = {}

    def wrap(g: Formula, ok: bool) -> str:
        s = memo[id(g)]
        return s if ok else f"({s})"

    for g in subformulas(f):
        if isinstance(g, Const):
            s = "true" if g.value else "false"
        elif isinstance(g, (Bel, Vis)):
            s = atom_text(g)
        elif isinstance(g, Not):
            s = "!" + wrap(g.arg, _level(g.arg) >= _UNARY_LEVEL)
        elif isinstance(g, Know):
            s = f"K[{vocab.agent_name(g.agent)}] " + wrap(g.arg, _level(g.arg) >= _UNARY_LEVEL)
        elif isinstance(g, (Next, Eventually, Henceforth)):
            op = {Next: "X", Eventually: "F", Henceforth: "G"}[type(g)]
            s = f"{op} " + wrap(g.arg, _level(g.arg) >= _UNARY_LEVEL)
        else:
            lvl = _LEVEL[type(g)]
            if isinstance(g, Implies):
                left_ok = _level(g.left) > lvl
                right_ok = _level(g.right) >= lvl
            else:
                left_ok = _level(g.left) >= lvl
                right_ok = _level(g.right) > lvl
            s = f"{wrap(g.left, left_ok)} {_SYMBOL[type(g)]} {wrap(g.right, right_ok)}"
        memo[id(g)] = s
    return memo[id(f)]
