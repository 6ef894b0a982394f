#!/usr/bin/env python3
"""
Tests for the Tamari poset and the comparison map Lambda from K_m
"""

import pytest
from hypothesis import given, strategies as st

from associahedra.exceptions import ArityMismatchError, CapExceededError, InvalidTreeError
from associahedra.kposet import KMorphism, enumerate_words, leq
from associahedra.tamari import (ETA_SOURCE, ETA_TARGET, binary_trees, check_embedding, check_fibers,
                                 check_generators, check_monotone, check_poset, check_projection_square,
                                 check_surjectivity, express_cover, fiber, lambda_mor, lambda_obj,
                                 max_preimage, min_preimage, project_abc, project_binary, read_binary,
                                 render_binary, rotation_covers, tamari_leq)
from associahedra.wordtree import ParenWord, parse, render


# Catalan numbers C_{m-1}
@pytest.mark.parametrize("m,count", [(1, 1), (2, 1), (3, 2), (4, 5), (5, 14), (6, 42), (7, 132), (8, 429)])
def test_binary_tree_counts(m, count):
    assert len(binary_trees(m)) == count


def test_rotation_order_on_three_leaves():
    left, right = read_binary("(x1x2)x3"), read_binary("x1(x2x3)")
    assert rotation_covers(left) == [right]
    assert rotation_covers(right) == []
    assert tamari_leq(left, right)
    assert not tamari_leq(right, left)
    with pytest.raises(ArityMismatchError):
        tamari_leq(left, read_binary("x1x2"))


def test_read_binary_rejects_nonbinary():
    with pytest.raises(InvalidTreeError):
        read_binary("x1x2x3")


def test_lambda_combs_every_node():
    assert render_binary(lambda_obj(parse("x1x2x3"))) == "x1(x2x3)"
    assert render_binary(lambda_obj(parse("(x1x2x3)x4"))) == "(x1(x2x3))x4"
    assert render_binary(lambda_obj(ParenWord.terminal(4))) == "x1(x2(x3x4))"


def test_lambda_on_morphisms():
    f = KMorphism(parse("((x1x2)x3)x4"), ParenWord.terminal(4))
    g = lambda_mor(f)
    assert render_binary(g.source) == "((x1x2)x3)x4"
    assert render_binary(g.target) == "x1(x2(x3x4))"


def test_fibers_and_extremes():
    t = read_binary("x1(x2x3)")
    assert sorted(render(w) for w in fiber(t)) == ["x1(x2x3)", "x1x2x3"]
    assert render(min_preimage(t)) == "x1(x2x3)"
    assert render(max_preimage(t)) == "x1x2x3"

    t = read_binary("(x1x2)(x3x4)")
    assert render(max_preimage(t)) == "(x1x2)x3x4"
    assert all(leq(min_preimage(t), w) and leq(w, max_preimage(t)) for w in fiber(t))


def test_projections():
    w = parse("((x1x2)x3)x4")
    assert render(project_abc(w, 1, 2, 4)) == "(x1x2)x3"
    assert render_binary(project_binary(lambda_obj(w), 1, 2, 4)) == "(x1x2)x3"
    with pytest.raises(ArityMismatchError):
        project_abc(w, 2, 1, 4)


def test_express_cover_of_the_generator():
    found = express_cover(ETA_SOURCE, ETA_TARGET)
    assert found['slot'] == 1
    with pytest.raises(InvalidTreeError):
        express_cover(ETA_TARGET, ETA_SOURCE)


@pytest.mark.parametrize("check", [check_poset, check_surjectivity, check_fibers, check_monotone,
                                   check_projection_square, check_generators, check_embedding])
@pytest.mark.parametrize("m", [3, 4, 5])
def test_comparison_checks(check, m):
    report = check(m)
    assert report['success'], report['failure']


@pytest.mark.parametrize("check", [check_poset, check_surjectivity, check_fibers])
@pytest.mark.parametrize("m", [6, 7])
def test_comparison_checks_at_seven_letters(check, m):
    report = check(m)
    assert report['success'], report['failure']


def test_embedding_at_six_letters():
    report = check_embedding(6)
    assert report['success'], report['failure']


def test_fiber_sizes_over_the_pentagon():
    sizes = sorted(len(fiber(t)) for t in binary_trees(4))
    assert sizes == [1, 2, 2, 2, 4]
    assert sum(sizes) == len(enumerate_words(4))


def test_pentagon_has_two_incomparable_pairs():
    trees = binary_trees(4)
    incomparable = {frozenset((render_binary(s), render_binary(t)))
                    for s in trees for t in trees
                    if s != t and not tamari_leq(s, t) and not tamari_leq(t, s)}
    assert incomparable == {
        frozenset(("x1((x2x3)x4)", "(x1x2)(x3x4)")),
        frozenset(("(x1x2)(x3x4)", "(x1(x2x3))x4"))
    }


def test_embedding_cap(monkeypatch):
    monkeypatch.setenv('ASSOC_EMBEDDING_MAX_M', '4')
    with pytest.raises(CapExceededError):
        check_embedding(5)


@given(st.sampled_from(enumerate_words(5)), st.sampled_from(enumerate_words(5)))
def test_lambda_is_monotone(a, b):
    if leq(a, b):
        assert tamari_leq(lambda_obj(a), lambda_obj(b))


if __name__ == '__main__':
    pytest.main([__file__])
