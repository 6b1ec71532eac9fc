"""Truth of goal formulas at states and along lassos."""

from __future__ import annotations

from typing import Dict, List

from ..core import State, all_states, class_key, indistinguishability_class
from ..diffusion import Lasso
from .syntax import (And, Bel, Const, Eventually, Formula, Henceforth, Implies, Know,
                     Next, Not, Or, Until, Vis, subformulas)


class FormulaError(ValueError):
    pass


def eval_state(alpha: Formula, s: State, _cache: Dict = None) -> bool:
    """Truth of a temporal-free formula at a single state.

    ``K[i] a`` holds when ``a`` holds at every state of ``i``'s class.
    """
    if _cache is None:
        _cache = {}
    key = (id(alpha), s)
    hit = _cache.get(key)
    if hit is not None:
        return hit
    if isinstance(alpha, Const):
        out = alpha.value
    elif isinstance(alpha, Bel):
        out = bool(s.belief(alpha.agent, alpha.issue))
    elif isinstance(alpha, Vis):
        out = bool(s.visible(alpha.agent, alpha.issue))
    elif isinstance(alpha, Not):
        out = not eval_state(alpha.arg, s, _cache)
    elif isinstance(alpha, And):
        out = eval_state(alpha.left, s, _cache) and eval_state(alpha.right, s, _cache)
    elif isinstance(alpha, Or):
        out = eval_state(alpha.left, s, _cache) or eval_state(alpha.right, s, _cache)
    elif isinstance(alpha, Implies):
        out = (not eval_state(alpha.left, s, _cache)) or eval_state(alpha.right, s, _cache)
    elif isinstance(alpha, Know):
        out = all(eval_state(alpha.arg, t, _cache)
                  for t in indistinguishability_class(s, alpha.agent))
    else:
        raise FormulaError(f"temporal operator in a state formula: {alpha}")
    _cache[key] = out
    return out


class TruthTables:
    """Whole-state-space evaluation of state formulas as bitsets.

    Bit ``k`` stands for the ``k``-th state of :func:`all_states`.  Meant for
    brute-force validity checks at desk scale.
    """

    def __init__(self, n: int, m: int):
        self.n, self.m = n, m
        self.states = list(all_states(n, m))
        self.full = (1 << len(self.states)) - 1
        self._atoms: Dict = {}
        self._classes: Dict[int, List[int]] = {}

    def _atom(self, kind: str, i: int, p: int) -> int:
        key = (kind, i, p)
        if key not in self._atoms:
            read = State.belief if kind == "b" else State.visible
            self._atoms[key] = sum(1 << k for k, s in enumerate(self.states) if read(s, i, p))
        return self._atoms[key]

    def classes(self, i: int) -> List[int]:
        if i not in self._classes:
            groups: Dict = {}
            for k, s in enumerate(self.states):
                groups[class_key(s, i)] = groups.get(class_key(s, i), 0) | (1 << k)
            self._classes[i] = list(groups.values())
        return self._classes[i]

    def table(self, alpha: Formula) -> int:
        if isinstance(alpha, Const):
            return self.full if alpha.value else 0
        if isinstance(alpha, Bel):
            return self._atom("b", alpha.agent, alpha.issue)
        if isinstance(alpha, Vis):
            return self._atom("v", alpha.agent, alpha.issue)
        if isinstance(alpha, Not):
            return self.full & ~self.table(alpha.arg)
        if isinstance(alpha, And):
            return self.table(alpha.left) & self.table(alpha.right)
        if isinstance(alpha, Or):
            return self.table(alpha.left) | self.table(alpha.right)
        if isinstance(alpha, Implies):
            return (self.full & ~self.table(alpha.left)) | self.table(alpha.right)
        if isinstance(alpha, Know):
            inner = self.table(alpha.arg)
            out = 0
            for c in self.classes(alpha.agent):
                if inner & c == c:
                    out |= c
            return out
        raise FormulaError(f"temporal operator in a state formula: {alpha}")

    def state(self, k: int) -> State:
        return self.states[k]


def _until(left: List[bool], right: List[bool], lasso: Lasso) -> List[bool]:
    n, loop = len(lasso), lasso.loop
    out = [False] * n
    # least fixpoint on the cycle: two backward sweeps settle every position
    for _ in range(2):
        for k in range(n - 1, loop - 1, -1):
            out[k] = right[k] or (left[k] and out[lasso.successor(k)])
    for k in range(loop - 1, -1, -1):
        out[k] = right[k] or (left[k] and out[k + 1])
    return out


def label(phi: Formula, lasso: Lasso, _state_cache: Dict = None) -> List[bool]:
    """Truth value of ``phi`` at every position ``0..len(lasso)-1``."""
    cache = {} if _state_cache is None else _state_cache
    n = len(lasso)
    labels: Dict[int, List[bool]] = {}
    for g in subformulas(phi):
        if id(g) in labels:
            continue
        if isinstance(g, (Const, Bel, Vis, Know)):
            vals = [eval_state(g, s, cache) for s in lasso.states]
        elif isinstance(g, Not):
            vals = [not x for x in labels[id(g.arg)]]
        elif isinstance(g, And):
            vals = [a and b for a, b in zip(labels[id(g.left)], labels[id(g.right)])]
        elif isinstance(g, Or):
            vals = [a or b for a, b in zip(labels[id(g.left)], labels[id(g.right)])]
        elif isinstance(g, Implies):
            vals = [(not a) or b for a, b in zip(labels[id(g.left)], labels[id(g.right)])]
        elif isinstance(g, Next):
            sub = labels[id(g.arg)]
            vals = [sub[lasso.successor(k)] for k in range(n)]
        elif isinstance(g, Until):
            vals = _until(labels[id(g.left)], labels[id(g.right)], lasso)
        elif isinstance(g, Eventually):
            vals = _until([True] * n, labels[id(g.arg)], lasso)
        elif isinstance(g, Henceforth):
            sub = labels[id(g.arg)]
            vals = [not x for x in _until([True] * n, [not x for x in sub], lasso)]
        else:
            raise FormulaError(f"cannot evaluate {g!r}")
        labels[id(g)] = vals
    return labels[id(phi)]


def evaluate(phi: Formula, lasso: Lasso, k: int = 0) -> bool:
    """Truth of ``phi`` at time ``k`` of the infinite history the lasso stands for."""
    return label(phi, lasso)[lasso.position(k)]


eval_formula = evaluate
