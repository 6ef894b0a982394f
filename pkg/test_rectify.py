#!/usr/bin/env python3
"""
Tests for the rooted-tree bimodule and the strictly monoidal category MC
"""

import pytest
from hypothesis import given, strategies as st

from associahedra.coherence import theta_from_an
from associahedra.exceptions import ArityMismatchError, CategoryError, InvalidTreeError
from associahedra.fixtures import discrete_fixture, poset_fixture, z2_fixture
from associahedra.kposet import arg_tuples, enumerate_words
from associahedra.rectify import (BARE_ROOT, UNARY_ROOT, MMorphism, MonoidalCategory, RootedKTree, block_word,
                                  build_MC, check_bimodule_laws, coend_quotient_oracle, contract_root_edge,
                                  enumerate_hat, exchange_fails, functor_E, functor_E_cat, functor_I,
                                  functor_I_cat, hat_from_spans, leq_hat, left_action, right_action,
                                  right_partial, root_corolla, weak_compositions)
from associahedra.reports import replay_failure
from associahedra.wordtree import ID, ZERO, Leaf, Node, ParenWord, graft, leaf_count, parse, relabel, render, to_tree


@pytest.mark.parametrize("k,count", [(0, 1), (1, 1), (2, 2), (3, 6), (4, 22)])
def test_rooted_tree_counts(k, count):
    assert len(enumerate_hat(k)) == count


def test_rooted_tree_labels_are_checked():
    with pytest.raises(InvalidTreeError):
        RootedKTree((Leaf(2), Leaf(1)))
    assert str(root_corolla(2)) == '{"root":[1,2]}'


def test_right_action_keeps_the_root():
    assert right_action(UNARY_ROOT, [ZERO]) == BARE_ROOT
    assert right_action(root_corolla(2), [ID, parse("x1x2")]) == RootedKTree((Leaf(1), Node((Leaf(2), Leaf(3)))))
    assert right_action(root_corolla(2), [ZERO, ZERO]) == BARE_ROOT
    with pytest.raises(ArityMismatchError):
        right_action(root_corolla(2), [ID])


def test_left_action_merges_roots():
    assert left_action([root_corolla(1), root_corolla(2)]) == root_corolla(3)
    assert left_action([]) == BARE_ROOT


def test_e_and_i():
    for s in enumerate_words(4) + [ZERO, ID]:
        assert functor_E(functor_I(s)) == s
    assert functor_E(BARE_ROOT) == ZERO
    assert functor_E(UNARY_ROOT) == ID
    assert functor_E(root_corolla(3)) == ParenWord.terminal(3)
    assert render(functor_E(RootedKTree((Node((Leaf(1), Leaf(2))), Leaf(3))))) == "(x1x2)x3"


def test_contracting_root_edges():
    t = RootedKTree((Node((Leaf(1), Leaf(2))), Leaf(3)))
    assert contract_root_edge(t, 0) == root_corolla(3)
    with pytest.raises(InvalidTreeError):
        contract_root_edge(t, 1)
    assert leq_hat(t, root_corolla(3))
    assert not leq_hat(root_corolla(3), t)
    assert leq_hat(functor_I(ParenWord.terminal(3)), root_corolla(3))


def _grafted(t, args):
    trees = [to_tree(a) for a in args]
    kept = [g for g in (graft(c, trees) for c in t.children) if g is not None]
    children, start = [], 1
    for g in kept:
        children.append(relabel(g, start))
        start += leaf_count(g)
    return RootedKTree(tuple(children))


def test_right_action_matches_grafting():
    for k in range(5):
        for t in enumerate_hat(k):
            for args in arg_tuples(k, 4):
                assert right_action(t, args) == _grafted(t, args)


def test_trees_from_spans():
    assert hat_from_spans(3, [(1, 3), (1, 2)]) == functor_I(parse("(x1x2)x3"))
    assert hat_from_spans(3, []) == root_corolla(3)
    assert hat_from_spans(0, []) == BARE_ROOT
    t = RootedKTree((Node((Leaf(1), Leaf(2))), Leaf(3)))
    assert hat_from_spans(t.length, t.intervals) == t
    assert RootedKTree.from_json(t.to_json()) == t
    with pytest.raises(InvalidTreeError):
        RootedKTree.from_json({'root': [{'id': True}]})


def test_single_leaf_grafting():
    t = functor_I(ParenWord.terminal(3))
    assert right_partial(t, 2, parse("x1x2")) == functor_I(parse("x1(x2x3)x4"))
    assert right_partial(t, 1, ZERO) == functor_I(ParenWord.terminal(2))
    with pytest.raises(ArityMismatchError):
        right_partial(t, 4, ID)


def test_bimodule_laws():
    report = check_bimodule_laws(bound=4)
    assert report['success'], report['failure']


def test_bimodule_laws_up_to_five_leaves():
    report = check_bimodule_laws(bound=5)
    assert report['success'], report['failure']


def test_bimodule_witnesses_replay():
    exchange = {'kind': 'bimodule_exchange',
                'instance': {'parts': [root_corolla(1).to_json(), root_corolla(2).to_json()],
                             'args': ['x1x2', '', 'x1']}}
    sequential = {'kind': 'right_sequential',
                  'instance': {'t': root_corolla(2).to_json(), 'i': 1, 'a': 'x1x2', 'k': 2, 'b': '(x1x2)x3'}}
    unit = {'kind': 'right_unit', 'instance': {'t': functor_I(parse("x1(x2x3)")).to_json()}}
    for failure in (exchange, sequential, unit):
        assert replay_failure(failure) is False

@given(st.data())
def test_random_exchange_instances(data):
    small = enumerate_hat(0) + enumerate_hat(1) + enumerate_hat(2)
    p = data.draw(st.sampled_from(small))
    q = data.draw(st.sampled_from(small))
    pieces = enumerate_words(2) + enumerate_words(3) + [ID, ZERO]
    args = data.draw(st.lists(st.sampled_from(pieces), min_size=p.length + q.length,
                              max_size=p.length + q.length))
    assert not exchange_fails(p, q, args)


def test_block_helpers():
    assert list(weak_compositions(2, 2)) == [(0, 2), (1, 1), (2, 0)]
    assert list(weak_compositions(1, 0)) == []
    assert render(block_word((2, 1))) == "(x1x2)x3"
    assert render(block_word((3,))) == "x1x2x3"
    assert render(block_word((0, 2, 2))) == "(x1x2)(x3x4)"


def test_morphism_shape_is_validated():
    with pytest.raises(CategoryError):
        MMorphism(('A',), ('A', 'A'), (1,), ('id_A',))


@pytest.fixture
def discrete_mc():
    C, d = discrete_fixture(bound=4)
    return build_MC(C, theta_from_an(C, d), max_len=4)


def test_discrete_hom_sizes(discrete_mc):
    M = discrete_mc
    assert len(M.hom(('A',), ('A', 'A', 'A'))) == 1
    assert len(M.hom(('A', 'A'), ('A', 'A', 'A'))) == 2
    assert len(M.hom(('A', 'A'), ('A', 'A', 'A', 'A'))) == 3
    assert M.hom(('A',), ()) == []
    assert M.unit_reflecting
    assert M.summary()['hom_sizes']['["A","A"]->["A","A","A"]'] == 2


def test_discrete_mc_is_verified(discrete_mc):
    report = discrete_mc.verification_report(strict=True)
    assert report['success'], report['failure']
    assert {p['check'] for p in report['parts']} == {
        'ei_identity', 'functor_e', 'mc_composition', 'tensor_strictness',
        'splitting_naturality', 'e_strict_monoidal'}


def test_composition_rebrackets(discrete_mc):
    M = discrete_mc
    f = M.hom(('A', 'A'), ('A', 'A', 'A'))[0]
    g = M.hom(('A', 'A', 'A'), ('A', 'A', 'A', 'A'))[0]
    h = M.compose(g, f)
    assert h.source == ('A', 'A') and h.target == ('A', 'A', 'A', 'A')
    assert M.validate_morphism(h) is None
    assert M.compose(M.identity(f.target), f) == f
    with pytest.raises(CategoryError):
        M.compose(f, f)


def test_functors(discrete_mc):
    M = discrete_mc
    E, I = functor_E_cat(M), functor_I_cat(M)
    assert E.on_object(('A', 'A')) == 'A'
    assert E.on_object(()) == '0'
    assert I.on_object('0') == ()
    assert I.on_object('A') == ('A',)
    assert E.on_morphism(I.on_morphism('id_A')) == 'id_A'
    assert M.tensor(('A',), ('A', 'A')) == ('A', 'A', 'A')


def test_z2_is_not_unit_reflecting():
    C, d = z2_fixture(bound=4)
    M = build_MC(C, theta_from_an(C, d), max_len=4)
    assert not M.unit_reflecting
    report = M.verification_report(strict=True)
    assert report['success'], report['failure']
    splitting = next(p for p in report['parts'] if p['check'] == 'splitting_naturality')
    assert splitting['checked'] == 0
    assert M.check_splitting()['skipped']


def test_unit_with_outgoing_morphisms():
    C, d = poset_fixture(sample_max=1, bound=3)
    M = build_MC(C, theta_from_an(C, d), max_len=2)
    assert not M.unit_reflecting
    with pytest.raises(CategoryError):
        M.i_morphism((0, 1))
    assert M.i_morphism((1, 1)) == M.identity((1,))


def test_max_len_above_bound():
    C, d = discrete_fixture(bound=3)
    with pytest.raises(CategoryError):
        build_MC(C, theta_from_an(C, d), max_len=4)


@pytest.mark.parametrize("fixture", [discrete_fixture, z2_fixture])
def test_coend_quotient_matches_normal_forms(fixture):
    C, d = fixture(bound=4)
    report = coend_quotient_oracle(C, theta_from_an(C, d), max_arity=4)
    assert report['success'], report['failure']
    assert report['classes'] > 0 and report['relations'] > 0


class LopsidedMC(MonoidalCategory):
    """Tensor of morphisms that puts a long left factor after the right one"""

    def tensor(self, x, y):
        if isinstance(x, MMorphism) and isinstance(y, MMorphism) and len(x.source) >= 2:
            return super().tensor(y, x)
        return super().tensor(x, y)


def test_tensor_checks_triples_of_morphisms(discrete_mc):
    C, t = discrete_mc.category, discrete_mc.algebra
    M = LopsidedMC(C, t, 4)
    report = M.check_tensor()
    assert not report['success']
    failure = report['failure']
    assert failure['kind'] == 'tensor_morphisms'
    assert replay_failure(failure, mc=M) is True
    assert replay_failure(failure, mc=discrete_mc) is False
    with pytest.raises(CategoryError):
        replay_failure(failure)


def test_mc_witnesses_replay(discrete_mc):
    M = discrete_mc
    f = M.hom(('A', 'A'), ('A', 'A', 'A'))[0]
    g = M.hom(('A', 'A', 'A'), ('A', 'A', 'A', 'A'))[0]
    assert MMorphism.from_json(f.to_json()) == f
    for kind in ('e_composition', 'mc_typing'):
        assert replay_failure({'kind': kind, 'instance': {'f': f.to_json(), 'g': g.to_json()}}, mc=M) is False
    assert replay_failure({'kind': 'splitting', 'instance': {'f': g.to_json()}}, mc=M) is False
    assert replay_failure({'kind': 'ei_object', 'instance': {'object': 'A'}}, mc=M) is False


def test_quotient_witness_replays():
    C, d = discrete_fixture(bound=3)
    t = theta_from_an(C, d)
    failure = {'kind': 'quotient_not_well_defined',
               'instance': {'tree': root_corolla(1).to_json(), 'objects': ['A'],
                            'max_arity': 2, 'sample': ['0', 'A']}}
    assert replay_failure(failure, category=C, algebra=t) is False


if __name__ == '__main__':
    pytest.main([__file__])
