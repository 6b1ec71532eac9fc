import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from influence.core import InfluenceNetwork, ModelError, State, all_states, class_key
from influence.diffusion import SKIP, Dynamics, Lasso, all_actions, hide, induced_lasso, reveal
from influence.encoding import (LtlDocument, action_effect, all_propositions, document_for,
                                encode_dynamics, encode_profile, encode_strategy,
                                encode_unanimity, export, export_table, parse_ltl, read_table,
                                state_characteristic, to_ltl)
from influence.game import ConstantStrategy, TableStrategy
from influence.logic.semantics import TruthTables, evaluate
from influence.logic.syntax import (FALSE, TRUE, And, Bel, Henceforth, Implies, Next, Not, Or,
                                    Vis, Vocabulary, size, subformulas)

from support import (HERE, flipped_lasso, random_network, random_profile, random_state,
                     sample_with_moves)

NUMS = Vocabulary(["1", "2"], ["p"])


def test_state_characteristic_single_agent():
    s = State.single_issue((1,), (0,))
    assert state_characteristic(s) == And(Bel(0, 0), Not(Vis(0, 0)))


def test_state_characteristic_fig1_state():
    s = State.single_issue((0, 1, 0), (1, 1, 0))
    f = state_characteristic(s)
    lits = [g for g in subformulas(f) if isinstance(g, (Bel, Vis)) or
            (isinstance(g, Not) and isinstance(g.arg, (Bel, Vis)))]
    assert sum(1 for g in lits if not isinstance(g, Not) or True) >= 6
    assert size(f) == 6 + 3 + 5


@pytest.mark.parametrize("n,m", [(2, 1), (3, 1), (2, 2)])
def test_state_characteristic_is_injective(n, m):
    tables = TruthTables(n, m)
    for k, s in enumerate(tables.states):
        assert tables.table(state_characteristic(s)) == 1 << k


def test_action_effects():
    assert action_effect(0, reveal(0)) == Next(Vis(0, 0))
    assert action_effect(1, hide(2)) == Next(Not(Vis(1, 2)))
    assert action_effect(0, SKIP) == TRUE
    assert to_ltl(action_effect(0, reveal(0)), NUMS) == "X v_1_p"


def test_constant_reveal_strategy_single_agent():
    f = encode_strategy(0, ConstantStrategy(0, reveal(0)), 1, 1)
    implications = [g for g in subformulas(f) if isinstance(g, Implies)]
    assert len(implications) == 4
    assert {g.right for g in implications} == {Next(Vis(0, 0))}
    assert {g.left for g in implications} == {state_characteristic(s) for s in all_states(1, 1)}


def test_skip_strategy_encodes_truth():
    f = encode_strategy(0, ConstantStrategy(0, SKIP), 2, 1)
    assert all(g.right == TRUE for g in subformulas(f) if isinstance(g, Implies))
    rng = random.Random(1)
    for _ in range(20):
        s0 = random_state(rng, 2, 1)
        lasso = induced_lasso(s0, random_profile(rng, 2, 1),
                              Dynamics.unanimous(random_network(rng, 2)))
        assert evaluate(Henceforth(f), lasso, 0)


def test_two_step_strategy_conjunct_holds():
    net = InfluenceNetwork(3, [(1, 0), (2, 0)])
    h0 = State.single_issue((0, 1, 1), (1, 1, 0))
    h1 = State.single_issue((1, 1, 1), (1, 1, 1))
    k = TableStrategy(2, {class_key(h0, 2): reveal(0)})
    j = TableStrategy(1, {class_key(h1, 1): hide(0)})
    profile = [ConstantStrategy(0, SKIP), j, k]
    lasso = induced_lasso(h0, profile, Dynamics.unanimous(net))
    conjunct = Implies(state_characteristic(h0), Next(Vis(2, 0)))
    assert evaluate(conjunct, lasso, 0)
    assert evaluate(Henceforth(encode_profile(profile, 3, 1)), lasso, 0)


def test_unanimity_single_influencer_shape():
    net = InfluenceNetwork(2, [(0, 1)])
    f = encode_unanimity(net, 1, 0, True)
    assert isinstance(f, And) and isinstance(f.left, Implies)
    rhs = f.left.right
    assert isinstance(rhs, Or) and isinstance(rhs.left, Or)
    assert rhs.right == And(FALSE, Bel(1, 0))
    assert f.left.left == Next(Bel(1, 0))


def test_unanimity_needs_influencers():
    with pytest.raises(ModelError):
        encode_unanimity(InfluenceNetwork(2), 0, 0, True)


def _pairs(n, m=1):
    pairs = [(a, b) for a in range(n) for b in range(n) if a != b]
    for bits in range(1 << len(pairs)):
        yield InfluenceNetwork(n, [e for k, e in enumerate(pairs) if bits >> k & 1])


@pytest.mark.parametrize("n,m", [(2, 1), (3, 1)])
def test_dynamics_encoding_characterises_successors(n, m):
    """X-depth 1 formula: only the first two positions matter. Agents with no
    influencers are left unconstrained."""
    for net in list(_pairs(n, m))[::1 if n == 2 else 9]:
        enc = encode_dynamics(net, m)
        dyn = Dynamics.unanimous(net)
        mask = 0
        for i in range(n):
            if net.influencers(i):
                mask |= ((1 << m) - 1) << (i * m)
        for s in all_states(n, m):
            for joint in itertools.product(all_actions(m), repeat=n):
                good = dyn.step(s, joint)
                for b in range(1 << (n * m)):
                    cand = good.with_bits(beliefs=b)
                    ok = evaluate(enc, Lasso((s, cand), 1), 0)
                    assert ok == ((cand.beliefs ^ good.beliefs) & mask == 0)
            if n == 3:
                break


def test_unanimity_size_quadratic_in_agents_linear_in_issues():
    per = {n: size(encode_unanimity(InfluenceNetwork.complete(n), 0, 0, True))
           for n in range(2, 10)}
    ratios = [per[n] / n ** 2 for n in per]
    assert max(ratios) <= 2 * min(ratios)
    for n in range(2, 6):
        one = size(encode_dynamics(InfluenceNetwork.complete(n), 1))
        for m in (2, 3):
            assert size(encode_dynamics(InfluenceNetwork.complete(n), m)) <= m * (one + 1)


def test_golden_export():
    net = InfluenceNetwork(2, [(0, 1)])
    doc = document_for(NUMS, net, 1)
    assert export(doc) == (HERE / "golden" / "unanimity_n2_m1.ltl").read_text()
    assert export_table(doc) == (HERE / "golden" / "unanimity_n2_m1.tsv").read_text()


def test_export_roundtrip():
    net = InfluenceNetwork.complete(2)
    profile = [ConstantStrategy(0, reveal(0)), ConstantStrategy(1, hide(0))]
    doc = document_for(NUMS, net, 1, profile)
    text = export(doc)
    props = read_table(export_table(doc), NUMS)
    lines = [line for line in text.splitlines() if not line.startswith("#")]
    assert [parse_ltl(line, all_propositions(NUMS, 2, 1)) for line in lines] == \
        [f for _, f in doc.formulas]
    assert set(props) <= set(all_propositions(NUMS, 2, 1))


def test_proposition_table_is_bijective():
    vocab = Vocabulary(["a", "b", "c"], ["p", "q"])
    props = all_propositions(vocab, 3, 2)
    assert len(props) == 12 and len(set(props.values())) == 12
    doc = LtlDocument(vocab, [("x", And(Bel(0, 1), Vis(2, 0)))])
    assert doc.table() == {"b_a_q": ("bel", 0, 1), "v_c_p": ("vis", 2, 0)}


def test_colliding_names_rejected():
    vocab = Vocabulary(["a_b", "a"], ["c", "b_c"])
    with pytest.raises(ModelError):
        all_propositions(vocab, 2, 2)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_induced_lasso_models_its_encoding(seed):
    rng = random.Random(seed)
    n, net, profile, lasso, _ = sample_with_moves(rng)
    spec = And(encode_profile(profile, n, 1), encode_dynamics(net, 1))
    assert evaluate(Henceforth(spec), lasso, 0)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_flipped_action_falsifies_encoding(seed):
    rng = random.Random(seed)
    n, net, profile, lasso, moves = sample_with_moves(rng)
    t, i = rng.choice(moves)
    bad = flipped_lasso(lasso, profile, Dynamics.unanimous(net), t, i)
    assert evaluate(Henceforth(encode_dynamics(net, 1)), bad, 0)
    assert not evaluate(Henceforth(encode_profile(profile, n, 1)), bad, 0)
