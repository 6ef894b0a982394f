#!/usr/bin/env python3
"""
Tests for parenthesized words, stable trees and their JSON forms
"""

import pytest
from hypothesis import given, strategies as st

from associahedra.exceptions import InvalidTreeError, InvalidWordError, ParseError
from associahedra.kposet import enumerate_words
from associahedra.wordtree import (EMPTY_TREE, ID, ID_TREE, ZERO, Leaf, Node, ParenWord, from_tree,
                                   parse, read_word, render, to_tree, tree_from_json, validate_intervals,
                                   word_from_json, word_to_json)


def test_parse_and_render():
    w = parse("x1((x2x3x4)(x5x6))")
    assert w.length == 6
    assert w.intervals == ((2, 6), (2, 4), (5, 6))
    assert render(w) == "x1((x2x3x4)(x5x6))"


def test_degenerate_words():
    assert parse("") == ZERO
    assert parse("x1") == ID
    assert render(ZERO) == ""
    assert render(ID) == "x1"
    assert to_tree(ZERO) == EMPTY_TREE
    assert to_tree(ID) == ID_TREE


def test_intervals_are_canonical():
    assert ParenWord(4, ((1, 2), (1, 3))).intervals == ((1, 3), (1, 2))


@pytest.mark.parametrize("text", [
    "x2x1",            # wrong order
    "(x1)x2x3",        # singleton group
    "(x1x2x3)",        # whole word
    "((x1x2))x3",      # repeated group
    "(x1x2x3",         # unbalanced
    "x1x2)x3",
    "x1 + x2",
])
def test_parse_rejects(text):
    with pytest.raises(ParseError):
        parse(text)


def test_crossing_intervals_rejected():
    is_valid, errors = validate_intervals(4, [(1, 2), (2, 3)])
    assert not is_valid
    assert any('cross' in e for e in errors)
    with pytest.raises(InvalidWordError):
        ParenWord(4, ((1, 2), (2, 3)))


def test_tree_shape():
    tree = to_tree(parse("(x1x2)x3"))
    assert tree == Node((Node((Leaf(1), Leaf(2))), Leaf(3)))
    assert word_to_json(parse("x1(x2x3)x4")) == [1, [2, 3], 4]


def test_json_degenerate_forms():
    assert word_to_json(ZERO) == {'empty': True}
    assert word_to_json(ID) == {'id': True}
    assert word_from_json({'id': True}) == ID
    with pytest.raises(InvalidTreeError):
        tree_from_json({'weird': 1})
    with pytest.raises(InvalidTreeError):
        tree_from_json([1])


def test_from_tree_requires_ordered_labels():
    with pytest.raises(InvalidTreeError):
        from_tree(Node((Leaf(2), Leaf(1))))


def test_read_word_accepts_both_forms():
    assert read_word("[[1,2],3]") == parse("(x1x2)x3")
    assert read_word("(x1x2)x3") == parse("(x1x2)x3")
    with pytest.raises(ParseError):
        read_word("[1,2")


@given(st.sampled_from(enumerate_words(6)))
def test_render_parse_consistent(w):
    assert parse(render(w)) == w
    assert from_tree(to_tree(w)) == w


spans = st.tuples(st.integers(1, 5), st.integers(1, 5)).filter(lambda iv: iv[0] < iv[1])


@given(spans, spans)
def test_two_intervals_valid_iff_laminar(first, second):
    if first == second:
        return
    (a1, b1), (a2, b2) = first, second
    laminar = b1 < a2 or b2 < a1 or (a1 <= a2 and b2 <= b1) or (a2 <= a1 and b1 <= b2)
    is_valid, errors = validate_intervals(6, [first, second])
    assert is_valid == laminar
    assert bool(errors) != laminar


if __name__ == '__main__':
    pytest.main([__file__])
