"""Epistemic temporal goal language: syntax, semantics and K-elimination."""

from .reduction import ReductionError, know_free, nnf, reduce
from .semantics import FormulaError, eval_state, evaluate, label
from .syntax import (FALSE, TRUE, And, Bel, Const, Eventually, Formula, Henceforth,
                     Implies, Know, Next, Not, Or, ParseError, Until, Vis, Vocabulary,
                     conjoin, count_know, disjoin, iff, is_epistemic_free,
                     is_state_formula, next_depth, parse, parse_with_props,
                     read_formula_file, size, subformulas, temporal_depth, to_text)
