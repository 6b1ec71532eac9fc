"""Pure-LTL encodings of states, actions, strategies and unanimous diffusion.

The output is meant for external LTL tools: propositions are named
``b_<agent>_<issue>`` and ``v_<agent>_<issue>`` and the text uses the
operators ``X U F G & | ! ->``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .core import DEFAULT_STATE_LIMIT, InfluenceNetwork, ModelError, State, all_states
from .diffusion import HIDE, REVEAL, Action
from .logic.syntax import (TRUE, And, Bel, Formula, Implies, Next, Not, Or, Vis, Vocabulary,
                           conjoin, disjoin, iff, parse_with_props, subformulas, to_text)


def _signed(atom: Formula, value: int) -> Formula:
    return atom if value else Not(atom)


def state_characteristic(s: State) -> Formula:
    """Conjunction of literals true at ``s`` and at no other state."""
    lits = []
    for i in range(s.n):
        for p in range(s.m):
            lits.append(_signed(Bel(i, p), s.belief(i, p)))
            lits.append(_signed(Vis(i, p), s.visible(i, p)))
    out = lits[0]
    for lit in lits[1:]:
        out = And(out, lit)
    return out


def action_effect(i: int, a: Action) -> Formula:
    if a.kind == REVEAL:
        return Next(Vis(i, a.issue))
    if a.kind == HIDE:
        return Next(Not(Vis(i, a.issue)))
    return TRUE


def encode_strategy(i: int, strategy, n: int, m: int,
                    limit: int = DEFAULT_STATE_LIMIT) -> Formula:
    """One implication ``state -> effect of the chosen action`` per state."""
    return conjoin([Implies(state_characteristic(s), action_effect(i, strategy(s)))
                    for s in all_states(n, m, limit)])


def encode_profile(profile: Sequence, n: int, m: int,
                   limit: int = DEFAULT_STATE_LIMIT) -> Formula:
    return conjoin([encode_strategy(i, q, n, m, limit) for i, q in enumerate(profile)])


def encode_unanimity(net: InfluenceNetwork, i: int, p: int, positive: bool = True) -> Formula:
    """Next-step value of ``B[i,p]`` (or its negation) under unanimous aggregation.

    Three cases: nobody shows ``p`` next step and ``i`` already agrees; some
    influencer shows it and all who show it agree; two shown influencers
    disagree and ``i`` already agrees.
    """
    inf = net.influencers(i)
    if not inf:
        raise ModelError(f"agent {i} has no influencers; unanimity is not encoded for her")

    def lit(j: int) -> Formula:
        return _signed(Bel(j, p), positive)

    def shown(j: int) -> Formula:
        return Next(Vis(j, p))

    silent = And(conjoin([Next(Not(Vis(j, p))) for j in inf]), lit(i))
    agree = And(disjoin([shown(j) for j in inf]),
                conjoin([Implies(shown(j), lit(j)) for j in inf]))
    pairs = [(j, z) for j in inf for z in inf if j != z]
    split = And(disjoin([conjoin([shown(j), shown(z), Bel(j, p), Not(Bel(z, p))])
                         for j, z in pairs]), lit(i))
    return iff(Next(lit(i)), Or(Or(silent, agree), split))


def encode_dynamics(net: InfluenceNetwork, m: int) -> Formula:
    """Conjunction of both unanimity formulas for every influenced agent and issue."""
    parts = []
    for i in range(net.n):
        if not net.influencers(i):
            continue
        for p in range(m):
            parts.append(And(encode_unanimity(net, i, p, True),
                             encode_unanimity(net, i, p, False)))
    return conjoin(parts)


@dataclass
class LtlDocument:
    """Formulas over named propositions, plus the proposition table."""

    vocab: Vocabulary
    formulas: List[Tuple[str, Formula]]

    def table(self) -> Dict[str, Tuple[str, int, int]]:
        out = {}
        for _, f in self.formulas:
            for g in subformulas(f):
                if isinstance(g, (Bel, Vis)):
                    out[proposition(g, self.vocab)] = (
                        "bel" if isinstance(g, Bel) else "vis", g.agent, g.issue)
        for name, (kind, a, q) in out.items():
            clash = [other for other, key in out.items() if other != name and key == (kind, a, q)]
            if clash:
                raise ModelError(f"propositions {name} and {clash[0]} collide")
        return out


def proposition(atom: Formula, vocab: Vocabulary) -> str:
    kind = "b" if isinstance(atom, Bel) else "v"
    return f"{kind}_{vocab.agent_name(atom.agent)}_{vocab.issue_name(atom.issue)}"


def to_ltl(f: Formula, vocab: Vocabulary) -> str:
    return to_text(f, vocab, atom_text=lambda g: proposition(g, vocab))


def export(doc: LtlDocument) -> str:
    """Byte-stable text: ``# name`` header lines followed by one formula each."""
    lines = []
    for name, f in doc.formulas:
        lines.append(f"# {name}")
        lines.append(to_ltl(f, doc.vocab))
    return "\n".join(lines) + "\n"


def export_table(doc: LtlDocument) -> str:
    rows = sorted(doc.table().items(), key=lambda kv: (kv[1][0], kv[1][1], kv[1][2]))
    return "".join(f"{name}\t{kind}\t{doc.vocab.agent_name(a)}\t{doc.vocab.issue_name(q)}\n"
                   for name, (kind, a, q) in rows)


def read_table(text: str, vocab: Vocabulary) -> Dict[str, Formula]:
    props = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        name, kind, agent, issue = line.split("\t")
        a, q = vocab.agent_index(agent), vocab.issue_index(issue)
        if a is None or q is None:
            raise ModelError(f"table row {line!r} names an unknown agent or issue")
        props[name] = (Bel if kind == "bel" else Vis)(a, q)
    return props


def parse_ltl(text: str, props: Dict[str, Formula]) -> Formula:
    return parse_with_props(text, props)


def all_propositions(vocab: Vocabulary, n: int, m: int) -> Dict[str, Formula]:
    props = {}
    for i in range(n):
        for p in range(m):
            for atom in (Bel(i, p), Vis(i, p)):
                props[proposition(atom, vocab)] = atom
    if len(props) != 2 * n * m:
        raise ModelError("agent/issue names make proposition names collide")
    return props


def document_for(vocab: Vocabulary, net: InfluenceNetwork, m: int,
                 profile: Optional[Sequence] = None,
                 limit: int = DEFAULT_STATE_LIMIT) -> LtlDocument:
    formulas = [("unanimous diffusion", encode_dynamics(net, m))]
    if profile is not None:
        formulas.append(("strategy profile", encode_profile(profile, net.n, m, limit)))
    return LtlDocument(vocab, formulas)
