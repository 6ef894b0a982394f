#!/usr/bin/env python3
"""
Tests for the associahedral poset K_m, the operad composition gamma and
the valence filtration
"""

import time

import pytest
from hypothesis import given, strategies as st

from associahedra.exceptions import ArityMismatchError, CapExceededError, InvalidWordError
from associahedra.kposet import (KMorphism, arg_tuples, cell_dim, check_downward_closure, check_interval_lemma,
                                 check_operad_laws, check_skeleton, covers, decompose, enumerate_words,
                                 f_vector, filtration_level, fold_partial, gamma, gamma_by_trees, interval_cube,
                                 leq, maximal_cubes, partial_compose, partial_law_instances, partial_law_sides,
                                 skeleton_excess)
from associahedra.reports import replay_failure
from associahedra.wordtree import ID, ZERO, ParenWord, parse, render


# small Schroeder numbers
@pytest.mark.parametrize("m,count", [(0, 1), (1, 1), (2, 1), (3, 3), (4, 11), (5, 45), (6, 197)])
def test_enumeration_counts(m, count):
    assert len(enumerate_words(m)) == count


@pytest.mark.parametrize("m,n,count", [(4, 2, 5), (4, 3, 10), (5, 2, 14), (5, 5, 45)])
def test_filtration_counts(m, n, count):
    assert len(enumerate_words(m, n)) == count


def test_enumeration_cap(monkeypatch):
    monkeypatch.setenv('ASSOC_MAX_M', '3')
    with pytest.raises(CapExceededError):
        enumerate_words(4)


def test_order_is_reverse_inclusion():
    low, mid, top = parse("((x1x2)x3)x4"), parse("(x1x2)x3x4"), parse("x1x2x3x4")
    assert leq(low, mid) and leq(mid, top) and leq(low, top)
    assert not leq(top, low)
    with pytest.raises(ArityMismatchError):
        leq(low, parse("x1x2"))


def test_morphism_must_drop_intervals():
    with pytest.raises(InvalidWordError):
        KMorphism(parse("x1x2x3"), parse("(x1x2)x3"))


def test_covers_and_decompose():
    w = parse("((x1x2)x3)x4")
    assert sorted(render(f.target) for f in covers(w)) == ["(x1x2)x3x4", "(x1x2x3)x4"]

    f = KMorphism(w, ParenWord.terminal(4))
    steps = decompose(f)
    assert [s.dropped for s in steps] == [((1, 3),), ((1, 2),)]
    assert steps[0].source == w and steps[-1].target == f.target


def test_interval_cube_vertices():
    f = KMorphism(parse("((x1x2)x3)x4"), ParenWord.terminal(4))
    cube = interval_cube(f)
    assert cube.dimension == 2
    assert sorted(render(w) for _, w in cube.vertices()) == sorted(
        ["((x1x2)x3)x4", "(x1x2)x3x4", "(x1x2x3)x4", "x1x2x3x4"])


def test_gamma_examples():
    outer = parse("(x1x2)x3")
    assert render(gamma(outer, [parse("x1x2"), ID, ID])) == "((x1x2)x3)x4"
    assert render(gamma(outer, [ZERO, ID, ID])) == "x1x2"
    assert render(gamma(outer, [ID, ID, parse("(x1x2)x3")])) == "(x1x2)((x3x4)x5)"
    assert gamma(outer, [ZERO, ZERO, ZERO]) == ZERO
    assert gamma(outer, [ZERO, ZERO, ID]) == ID


def test_gamma_arity_mismatch():
    with pytest.raises(ArityMismatchError):
        gamma(parse("x1x2"), [ID])


def test_f_vectors():
    assert f_vector(4).counts == (5, 5, 1)
    assert f_vector(5).counts == (14, 21, 9, 1)
    assert f_vector(5).euler == 1
    assert f_vector(5, 2).counts == (14, 0, 0, 0)
    assert f_vector(4).to_dict() == {'m': 4, 'n': None, 'counts': [5, 5, 1], 'euler': 1}


def test_cell_dimension_and_levels():
    assert cell_dim(ParenWord.terminal(5)) == 3
    assert filtration_level(ParenWord.terminal(5)) == 5
    assert filtration_level(parse("x1(x2x3x4)")) == 3
    assert parse("(x1x2x3)x4x5") in skeleton_excess(5, 3)
    with pytest.raises(InvalidWordError):
        cell_dim(ID)


def test_maximal_cubes():
    cubes = maximal_cubes(4)
    assert len(cubes) == 5
    assert all(len(f.dropped) == 2 for f in cubes)
    assert len(maximal_cubes(5)) == 14
    assert all(len(f.dropped) == 3 for f in maximal_cubes(5))


@pytest.mark.parametrize("m", [3, 4, 5, 6])
def test_structural_checks(m):
    for report in (check_interval_lemma(m), check_skeleton(m), check_downward_closure(m)):
        assert report['success'], report['failure']
        assert report['checked'] > 0


def test_skeleton_at_length_seven():
    report = check_skeleton(7)
    assert report['success'], report['failure']


@pytest.mark.parametrize("m", range(2, 8))
def test_euler_characteristic_is_one(m):
    assert f_vector(m).euler == 1


def test_two_cells_of_the_ternary_filtration():
    # a ternary root with one ternary child, in each of three positions
    assert f_vector(5, 3).counts == (14, 21, 3, 0)
    two_cells = [w for w in enumerate_words(5, 3) if cell_dim(w) == 2]
    assert sorted(render(w) for w in two_cells) == ["(x1x2x3)x4x5", "x1(x2x3x4)x5", "x1x2(x3x4x5)"]


def test_gamma_matches_tree_grafting():
    for m in range(5):
        for s in enumerate_words(m):
            for args in arg_tuples(m, 4):
                assert gamma(s, args) == gamma_by_trees(s, args)


def test_gamma_collapses_unary_chains():
    # x1 is deleted, leaving the inner node alone under the root
    assert gamma(parse("x1(x2x3)"), [ZERO, parse("x1x2"), ID]) == ParenWord(3, ((1, 2),))
    assert gamma(parse("x1(x2x3)"), [ID, ZERO, ZERO]) == ID
    assert gamma(parse("(x1x2)x3"), [ZERO, ZERO, parse("(x1x2)x3")]) == parse("(x1x2)x3")


def test_fold_of_single_slot_compositions():
    s = parse("(x1x2)x3")
    args = [ZERO, parse("x1x2"), parse("x1(x2x3)")]
    assert fold_partial(partial_compose, s, args) == gamma(s, args)
    assert partial_compose(s, 2, ZERO) == parse("x1x2")
    with pytest.raises(ArityMismatchError):
        partial_compose(s, 4, ID)


def test_law_instances_stay_within_the_bound():
    laws = set()
    for law, x, i, t, k, u in partial_law_instances(enumerate_words, 4):
        laws.add(law)
        assert 1 <= i <= x.length
        if law == 'parallel':
            assert i < k <= x.length
            assert x.length + u.length - 1 <= 4
        else:
            assert 1 <= k <= t.length
        assert x.length + t.length + u.length - 2 <= 4
        left, right = partial_law_sides(partial_compose, law, x, i, t, k, u)
        assert left == right
    assert laws == {'sequential', 'parallel'}


def test_operad_laws():
    report = check_operad_laws(max_total=4)
    assert report['success'], report['failure']


def test_operad_laws_at_total_length_five():
    started = time.perf_counter()
    report = check_operad_laws(max_total=5)
    assert report['success'], report['failure']
    assert time.perf_counter() - started < 60


def test_replay_of_a_passing_instance():
    failure = {'kind': 'gamma_unit_right', 'instance': {'s': '(x1x2)x3'}}
    assert replay_failure(failure) is False
    with pytest.raises(KeyError):
        replay_failure({'kind': 'no_such_kind', 'instance': {}})


def test_law_witnesses_replay():
    sequential = {'kind': 'gamma_sequential',
                  'instance': {'x': '(x1x2)x3', 'i': 1, 't': 'x1x2', 'k': 2, 'u': 'x1(x2x3)'}}
    parallel = {'kind': 'gamma_parallel',
                'instance': {'x': 'x1(x2x3)', 'i': 1, 't': '', 'k': 3, 'u': 'x1x2'}}
    decomposition = {'kind': 'gamma_decomposition',
                     'instance': {'s': 'x1x2', 'args': ['', 'x1x2']}}
    for failure in (sequential, parallel, decomposition):
        assert replay_failure(failure) is False


@given(st.sampled_from(enumerate_words(5)))
def test_covers_go_up(w):
    for f in covers(w):
        assert leq(w, f.target)
        assert cell_dim(f.target) == cell_dim(w) + 1
        assert filtration_level(f.target) >= filtration_level(w)


@given(st.sampled_from(enumerate_words(3)),
       st.lists(st.sampled_from(enumerate_words(2) + [ID, ZERO]), min_size=3, max_size=3))
def test_gamma_length_is_additive(s, args):
    assert gamma(s, args).length == sum(a.length for a in args)


@given(st.sampled_from(enumerate_words(5)))
def test_gamma_units(w):
    assert gamma(ID, [w]) == w
    assert gamma(w, [ID] * w.length) == w


if __name__ == '__main__':
    pytest.main([__file__])
