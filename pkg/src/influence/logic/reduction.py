"""Negation normal form and elimination of the knowledge operator.

``reduce`` rewrites every ``K[i] a`` bottom-up: innermost first, so the
argument is always epistemic-free when it is handled.  The argument is put
in negation normal form, ``K`` is pushed through conjunctions, and
literals are replaced by their visibility-based equivalents::

    K[i] B[i,p]   <->  B[i,p]
    K[i] B[j,p]   <->  B[j,p] & V[j,p]        (j != i)
    K[i] V[j,p]   <->  V[j,p]

``K`` only distributes over a disjunction when the two sides share no
belief atom of another agent.  If they do, say ``x = B[j,p]``, the
disjunction is split on ``x``::

    K[i] a  <->  (K[i] a[x:=true]  | V[j,p] & !x)
               & (K[i] a[x:=false] | V[j,p] & x)

which holds because every state in ``i``'s class agrees on ``V[j,p]``, and
on ``x`` too when it is visible.
"""

from __future__ import annotations

from typing import Dict, FrozenSet, Tuple

from .syntax import (FALSE, TRUE, And, Bel, Const, Eventually, Formula, Henceforth,
                     Implies, Know, Next, Not, Or, Until, Vis, is_epistemic_free)


class ReductionError(ValueError):
    pass


def mk_not(a: Formula) -> Formula:
    if isinstance(a, Const):
        return Const(not a.value)
    return Not(a)


def _conjuncts(f: Formula) -> list:
    out, stack = [], [f]
    while stack:
        g = stack.pop()
        if isinstance(g, And):
            stack.extend((g.left, g.right))
        else:
            out.append(g)
    return out


def mk_and(a: Formula, b: Formula) -> Formula:
    if a == FALSE or b == FALSE:
        return FALSE
    if a == TRUE:
        return b
    if b == TRUE or a == b or b in _conjuncts(a):
        return a
    if a in _conjuncts(b):
        return b
    return And(a, b)


def mk_or(a: Formula, b: Formula) -> Formula:
    if a == TRUE or b == TRUE:
        return TRUE
    if a == FALSE:
        return b
    if b == FALSE or a == b:
        return a
    return Or(a, b)


def nnf(alpha: Formula) -> Formula:
    """Push negations down to atoms of an epistemic-free state formula."""
    if not is_epistemic_free(alpha):
        raise ReductionError("nnf expects a formula without K")
    return _nnf(alpha, False)


def _nnf(f: Formula, negate: bool) -> Formula:
    if isinstance(f, Const):
        return Const(f.value != negate)
    if isinstance(f, (Bel, Vis)):
        return Not(f) if negate else f
    if isinstance(f, Not):
        return _nnf(f.arg, not negate)
    if isinstance(f, Implies):
        return _nnf(Or(Not(f.left), f.right), negate)
    if isinstance(f, (And, Or)):
        left, right = _nnf(f.left, negate), _nnf(f.right, negate)
        flip = isinstance(f, And) == negate
        return Or(left, right) if flip else And(left, right)
    raise ReductionError(f"nnf is defined on state formulas only, got {type(f).__name__}")


def is_literal(f: Formula) -> bool:
    return isinstance(f, (Bel, Vis)) or (isinstance(f, Not) and isinstance(f.arg, (Bel, Vis)))


def _opaque_atoms(f: Formula, i: int) -> FrozenSet[Tuple[int, int]]:
    """Belief atoms that vary inside agent ``i``'s class."""
    out = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Bel) and g.agent != i:
            out.add((g.agent, g.issue))
        elif isinstance(g, Not):
            stack.append(g.arg)
        elif isinstance(g, (And, Or)):
            stack.extend((g.left, g.right))
    return frozenset(out)


def _substitute(f: Formula, atom: Tuple[int, int], value: bool) -> Formula:
    """Replace a belief atom by a constant in an NNF formula and simplify."""
    if isinstance(f, Bel) and (f.agent, f.issue) == atom:
        return Const(value)
    if isinstance(f, Not):
        return mk_not(_substitute(f.arg, atom, value))
    if isinstance(f, And):
        return mk_and(_substitute(f.left, atom, value), _substitute(f.right, atom, value))
    if isinstance(f, Or):
        return mk_or(_substitute(f.left, atom, value), _substitute(f.right, atom, value))
    return f


def reduce_literal(i: int, lit: Formula) -> Formula:
    """``K[i]`` of a belief/visibility literal, without ``K``."""
    negated = isinstance(lit, Not)
    atom = lit.arg if negated else lit
    if isinstance(atom, Vis) or atom.agent == i:
        return lit
    return And(lit, Vis(atom.agent, atom.issue))


def know_free(i: int, alpha: Formula) -> Formula:
    """Epistemic-free equivalent of ``K[i] alpha`` for NNF, epistemic-free ``alpha``."""
    if isinstance(alpha, Const):
        return alpha
    if is_literal(alpha):
        return reduce_literal(i, alpha)
    if isinstance(alpha, And):
        return mk_and(know_free(i, alpha.left), know_free(i, alpha.right))
    if isinstance(alpha, Or):
        shared = _opaque_atoms(alpha.left, i) & _opaque_atoms(alpha.right, i)
        if not shared:
            return mk_or(know_free(i, alpha.left), know_free(i, alpha.right))
        j, p = min(shared)
        x, v = Bel(j, p), Vis(j, p)
        when_true = know_free(i, _substitute(alpha, (j, p), True))
        when_false = know_free(i, _substitute(alpha, (j, p), False))
        return mk_and(mk_or(when_true, And(v, Not(x))),
                      mk_or(when_false, And(v, x)))
    raise ReductionError(f"unexpected node {type(alpha).__name__} under K")


def collapse_nesting(f: Formula) -> Formula:
    """``K[i]K[i]a -> K[i]a`` and ``K[i]K[j]K[i]a -> K[j]K[i]a`` (``a`` without K)."""
    while isinstance(f, Know) and isinstance(f.arg, Know):
        inner = f.arg
        if inner.agent == f.agent:
            f = inner
        elif (isinstance(inner.arg, Know) and inner.arg.agent == f.agent
              and is_epistemic_free(inner.arg.arg)):
            f = inner
        else:
            break
    return f


def reduce(phi: Formula) -> Formula:
    """Equivalent formula with no ``K``; temporal structure is kept as written."""
    memo: Dict[int, Formula] = {}
    return _reduce(phi, memo)


def _reduce(f: Formula, memo: Dict[int, Formula]) -> Formula:
    hit = memo.get(id(f))
    if hit is not None:
        return hit
    if isinstance(f, (Const, Bel, Vis)):
        out = f
    elif isinstance(f, Know):
        g = collapse_nesting(f)
        if not isinstance(g, Know):
            out = _reduce(g, memo)
        else:
            arg = _reduce(g.arg, memo)
            out = know_free(g.agent, nnf(arg))
    elif isinstance(f, (Not, Next, Eventually, Henceforth)):
        out = type(f)(_reduce(f.arg, memo))
    elif isinstance(f, (And, Or, Implies, Until)):
        out = type(f)(_reduce(f.left, memo), _reduce(f.right, memo))
    else:
        raise ReductionError(f"unknown node {f!r}")
    memo[id(f)] = out
    return out
