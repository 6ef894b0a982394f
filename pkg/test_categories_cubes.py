#!/usr/bin/env python3
"""
Tests for the finite category models, cube diagrams and report helpers
"""

import pytest

from associahedra.categories import DiscreteCategory, FinCat, PosetCategory, check_typed, is_identity
from associahedra.cubes import (CubeDiagram, check_cube_commutes, cube_faces, failing_face,
                                free_cube_category, random_cube_trials)
from associahedra.exceptions import CategoryError, MissingTableEntryError
from associahedra.fixtures import loop_category
from associahedra.reports import combine_reports, make_report, registered_kinds, replay_failure, witness


def test_fincat_validates_tables():
    C = loop_category()
    assert C.is_thin is False
    assert C.compose('s', 's') == 'e'
    assert C.hom('*', '*') == ['e', 's']
    assert C.generating_morphisms() == ['s']

    with pytest.raises(CategoryError):
        FinCat(['*'], {'e': ('*', '*'), 's': ('*', '*')}, {'*': 'e'},
               {('e', 'e'): 'e', ('e', 's'): 's', ('s', 'e'): 's'})


def test_fincat_rejects_bad_identity():
    with pytest.raises(CategoryError):
        FinCat(['a', 'b'], {'f': ('a', 'b')}, {'a': 'f', 'b': 'f'}, {})


def test_fincat_unknown_morphism():
    C = DiscreteCategory(['x'])
    with pytest.raises(MissingTableEntryError):
        C.source('nope')
    assert C.tables()['identities'] == {'x': 'id_x'}


def test_poset_category():
    P = PosetCategory(sample_max=3)
    assert P.objects() == [0, 1, 2, 3]
    assert P.compose((1, 2), (0, 1)) == (0, 2)
    assert P.hom(2, 1) == []
    assert P.generating_morphisms() == [(0, 1), (1, 2), (2, 3)]
    # every natural number is an object, not only the sample
    assert P.is_morphism((5, 40))
    with pytest.raises(CategoryError):
        P.source((3, 1))
    with pytest.raises(CategoryError):
        P.compose((0, 1), (0, 1))


def test_compose_path_and_typing():
    P = PosetCategory()
    assert P.compose_path([(0, 1), (1, 3), (3, 4)]) == (0, 4)
    with pytest.raises(CategoryError):
        P.compose_path([])
    assert check_typed(P, (0, 2), 0, 2) is None
    assert 'expected' in check_typed(P, (0, 2), 0, 3)
    assert is_identity(P, (2, 2))


def test_free_square():
    _, commuting = free_cube_category(2, {((0, 0), 0, 1)})
    assert check_cube_commutes(commuting) == (True, True)
    assert failing_face(commuting) is None

    _, free = free_cube_category(2, set())
    assert check_cube_commutes(free) == (False, False)
    assert failing_face(free) == ((0, 0), 0, 1)


def test_free_cube_with_every_face():
    _, diagram = free_cube_category(3, set(cube_faces(3)))
    assert check_cube_commutes(diagram) == (True, True)


def test_cube_with_one_open_face():
    faces = set(cube_faces(3))
    faces.discard(((0, 0, 0), 0, 1))
    _, diagram = free_cube_category(3, faces)
    faces_ok, all_paths_equal = check_cube_commutes(diagram)
    assert not faces_ok and not all_paths_equal


def test_cube_diagram_requires_every_vertex():
    P = PosetCategory()
    with pytest.raises(CategoryError):
        CubeDiagram(P, 1, {(0,): 0})
    with pytest.raises(CategoryError):
        CubeDiagram(P, 1, {(0,): 1, (1,): 0}, {((0,), 0): (1, 0)})


def test_random_cube_trials():
    report = random_cube_trials(count=1000, max_dim=4)
    assert report['success'], report['failure']
    assert report['checked'] == 1000


def test_report_helpers():
    ok = make_report('a', 3)
    bad = make_report('b', 2, witness('cube_lemma', {'dimension': 2, 'imposed': [[[0, 0], 0, 1]]}))
    combined = combine_reports('both', [ok, bad])
    assert not combined['success']
    assert combined['checked'] == 5
    assert combined['failure']['part'] == 'b'
    assert [p['check'] for p in combined['parts']] == ['a', 'b']
    # a fully imposed square commutes, so the witness does not reproduce
    assert replay_failure(combined) is False
    assert 'cube_lemma' in registered_kinds()


if __name__ == '__main__':
    pytest.main([__file__])
