"""Shared generators and independent oracles for the test suite."""

import json
import random
from pathlib import Path

from influence.core import InfluenceNetwork, State, all_states, indistinguishable
from influence.diffusion import SKIP, Dynamics, Lasso, all_actions, hide, induced_lasso, reveal
from influence.game import FunctionStrategy
from influence.logic.syntax import (FALSE, TRUE, And, Bel, Const, Eventually, Henceforth,
                                    Implies, Know, Next, Not, Or, Until, Vis)

HERE = Path(__file__).parent
FIXTURES = HERE / "fixtures"


def fixture_path(name: str) -> str:
    return str(FIXTURES / name)


def fixture(name: str) -> dict:
    return json.loads((FIXTURES / name).read_text())


# -- random formulas ------------------------------------------------------

def random_state_formula(rng, n, m, depth, know=True):
    if depth <= 0 or rng.random() < 0.25:
        r = rng.random()
        if r < 0.05:
            return TRUE if rng.random() < 0.5 else FALSE
        atom = Bel if r < 0.6 else Vis
        return atom(rng.randrange(n), rng.randrange(m))
    choice = rng.choice(["not", "and", "or", "implies", "know"] if know
                        else ["not", "and", "or", "implies"])
    if choice == "not":
        return Not(random_state_formula(rng, n, m, depth - 1, know))
    if choice == "know":
        return Know(rng.randrange(n), random_state_formula(rng, n, m, depth - 1, know))
    cls = {"and": And, "or": Or, "implies": Implies}[choice]
    return cls(random_state_formula(rng, n, m, depth - 1, know),
               random_state_formula(rng, n, m, depth - 1, know))


def random_formula(rng, n, m, depth, know=True):
    """A layer-respecting goal formula of AST depth at most ``depth``."""
    if depth <= 0 or rng.random() < 0.2:
        return random_state_formula(rng, n, m, depth, know)
    choice = rng.choice(["not", "and", "or", "implies", "X", "U", "F", "G"])
    if choice in ("X", "F", "G", "not"):
        cls = {"X": Next, "F": Eventually, "G": Henceforth, "not": Not}[choice]
        return cls(random_formula(rng, n, m, depth - 1, know))
    cls = {"and": And, "or": Or, "implies": Implies, "U": Until}[choice]
    return cls(random_formula(rng, n, m, depth - 1, know),
               random_formula(rng, n, m, depth - 1, know))


def temporal_formula(rng, n, m, tdepth):
    """Goal whose temporal nesting depth is at most ``tdepth``."""
    if tdepth == 0 or rng.random() < 0.15:
        return random_state_formula(rng, n, m, 2)
    choice = rng.choice(["X", "F", "G", "U", "and", "not"])
    if choice == "U":
        return Until(temporal_formula(rng, n, m, tdepth - 1), temporal_formula(rng, n, m, tdepth - 1))
    if choice == "and":
        return And(temporal_formula(rng, n, m, tdepth), random_state_formula(rng, n, m, 1))
    cls = {"X": Next, "F": Eventually, "G": Henceforth, "not": Not}[choice]
    return cls(temporal_formula(rng, n, m, tdepth - (choice != "not")))


# -- random games, profiles, lassos ----------------------------------------

def random_network(rng, n, prob=0.5):
    return InfluenceNetwork(n, [(a, b) for a in range(n) for b in range(n)
                                if a != b and rng.random() < prob])


def random_state(rng, n, m):
    return State(n, m, rng.getrandbits(n * m), rng.getrandbits(n * m))


def random_strategy(rng, agent, m):
    """A uniform strategy drawn lazily: one random action per information state."""
    actions = all_actions(m)
    table = {}
    seed = rng.getrandbits(32)

    def choose(key):
        if key not in table:
            table[key] = random.Random(hash((seed,) + key)).choice(actions)
        return table[key]

    return FunctionStrategy(agent, choose, "random")


def random_profile(rng, n, m):
    return [random_strategy(rng, i, m) for i in range(n)]


def random_lasso(rng, n, m, net=None):
    net = net or random_network(rng, n)
    dyn = Dynamics.unanimous(net)
    profile = random_profile(rng, n, m)
    s0 = random_state(rng, n, m)
    return induced_lasso(s0, profile, dyn), net, profile, s0


def sample_with_moves(rng, sizes=(1, 2)):
    """A random game and profile whose induced lasso takes a non-skip action."""
    while True:
        n = rng.choice(sizes)
        net = random_network(rng, n)
        profile = random_profile(rng, n, 1)
        lasso = induced_lasso(random_state(rng, n, 1), profile, Dynamics.unanimous(net))
        moves = [(t, i) for t, joint in enumerate(lasso.actions)
                 for i, a in enumerate(joint) if a != SKIP]
        if moves:
            return n, net, profile, lasso, moves


def flipped_lasso(lasso, profile, dyn, t, i):
    """Follow the profile except that agent ``i`` swaps reveal and hide at step ``t``."""
    joint = list(lasso.actions[t])
    a = joint[i]
    joint[i] = hide(a.issue) if a.kind == "reveal" else reveal(a.issue)
    states = list(lasso.states[:t + 1])
    seen = {s: k for k, s in enumerate(states)}
    nxt = dyn.step(states[-1], tuple(joint))
    while nxt not in seen:
        seen[nxt] = len(states)
        states.append(nxt)
        nxt = dyn.step(nxt, tuple(q(nxt) for q in profile))
    return Lasso(tuple(states), seen[nxt])


# -- independent oracles ----------------------------------------------------

def naive_state(f, s, states):
    """Truth at a state; K quantifies over an explicit scan of every state."""
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Bel):
        return s.belief(f.agent, f.issue) == 1
    if isinstance(f, Vis):
        return s.visible(f.agent, f.issue) == 1
    if isinstance(f, Not):
        return not naive_state(f.arg, s, states)
    if isinstance(f, And):
        return naive_state(f.left, s, states) and naive_state(f.right, s, states)
    if isinstance(f, Or):
        return naive_state(f.left, s, states) or naive_state(f.right, s, states)
    if isinstance(f, Implies):
        return (not naive_state(f.left, s, states)) or naive_state(f.right, s, states)
    if isinstance(f, Know):
        return all(naive_state(f.arg, t, states) for t in states
                   if indistinguishable(s, t, f.agent))
    raise TypeError(f)


class UnrolledWord:
    """The word ``prefix + cycle + cycle`` read as an infinite periodic word."""

    def __init__(self, lasso):
        self.prefix = len(lasso.prefix)
        self.cycle = len(lasso.cycle)
        self.word = lasso.unrolled(self.prefix + 2 * self.cycle)
        s0 = self.word[0]
        self.states = list(all_states(s0.n, s0.m))

    def at(self, k):
        if k < len(self.word):
            return self.word[k]
        back = self.prefix + self.cycle + (k - self.prefix) % self.cycle
        return self.word[back]

    def horizon(self, k):
        return k + self.prefix + self.cycle


def naive_eval(f, word, k=0):
    """Direct recursive LTL semantics on an unrolled word."""
    if isinstance(f, Next):
        return naive_eval(f.arg, word, k + 1)
    if isinstance(f, Until):
        for j in range(k, word.horizon(k) + 1):
            if naive_eval(f.right, word, j):
                return True
            if not naive_eval(f.left, word, j):
                return False
        return False
    if isinstance(f, Eventually):
        return any(naive_eval(f.arg, word, j) for j in range(k, word.horizon(k) + 1))
    if isinstance(f, Henceforth):
        return all(naive_eval(f.arg, word, j) for j in range(k, word.horizon(k) + 1))
    if isinstance(f, Not):
        return not naive_eval(f.arg, word, k)
    if isinstance(f, And):
        return naive_eval(f.left, word, k) and naive_eval(f.right, word, k)
    if isinstance(f, Or):
        return naive_eval(f.left, word, k) or naive_eval(f.right, word, k)
    if isinstance(f, Implies):
        return (not naive_eval(f.left, word, k)) or naive_eval(f.right, word, k)
    return naive_state(f, word.at(k), word.states)


# -- validity instances ----------------------------------------------------------

def literals(n, m):
    out = []
    for j in range(n):
        for p in range(m):
            for atom in (Bel(j, p), Vis(j, p)):
                out += [atom, Not(atom)]
    return out


def literal_instances(n, m):
    for i in range(n):
        for j in range(n):
            for p in range(m):
                b, v = Bel(j, p), Vis(j, p)
                if i == j:
                    yield "own-belief", Know(i, b), b
                    yield "own-disbelief", Know(i, Not(b)), Not(b)
                else:
                    yield "other-belief", Know(i, b), And(b, v)
                    yield "other-disbelief", Know(i, Not(b)), And(Not(b), v)
                yield "visibility", Know(i, v), v
                yield "invisibility", Know(i, Not(v)), Not(v)


def _operands(n, m, samples, seed, know):
    rng = random.Random(seed)
    lits = literals(n, m)
    pairs = [(a, b) for a in lits for b in lits]
    for _ in range(samples):
        pairs.append((random_state_formula(rng, n, m, 5, know),
                      random_state_formula(rng, n, m, 5, know)))
    return pairs


def connective_instances(n, m, samples=200, seed=0):
    for a, b in _operands(n, m, samples, seed, know=True):
        for i in range(n):
            yield "conjunction", Know(i, And(a, b)), And(Know(i, a), Know(i, b))
    for a, b in _operands(n, m, samples, seed + 1, know=False):
        for i in range(n):
            yield "disjunction", Know(i, Or(a, b)), Or(Know(i, a), Know(i, b))


def introspection_instances(n, m, samples=200, seed=0):
    rng = random.Random(seed)
    bodies = literals(n, m) + [random_state_formula(rng, n, m, 5, know=False)
                               for _ in range(samples)]
    for a in bodies:
        for i in range(n):
            yield "introspection", Know(i, Know(i, a)), Know(i, a)
            for j in range(n):
                if j != i:
                    yield "nested-introspection", Know(i, Know(j, Know(i, a))), Know(j, Know(i, a))


def violations(instances, n, m):
    """``{name: (count, first failing (lhs, rhs, state))}`` over all states."""
    from influence.logic.semantics import TruthTables
    tables = TruthTables(n, m)
    found = {}
    for name, lhs, rhs in instances:
        diff = tables.table(lhs) ^ tables.table(rhs)
        if diff:
            first = (diff & -diff).bit_length() - 1
            count, witness = found.get(name, (0, (lhs, rhs, tables.state(first))))
            found[name] = (count + bin(diff).count("1"), witness)
    return found
