#!/usr/bin/env python3
"""
Tests for Hasse diagram export and the JSON document layer
"""

import json
import re
from pathlib import Path

import pytest

from associahedra.coherence import check_an_axioms, compare_an_data
from associahedra.directed import ainfty_from_directed
from associahedra.exceptions import AssociahedraError, MissingTableEntryError
from associahedra.fixtures import loop_category, loop_fixture, z2_fixture
from associahedra.hasse import (check_covers, check_k_hasse, check_tamari_hasse, k_hasse, tamari_hasse, to_dot,
                               to_json)
from associahedra.kposet import enumerate_words, leq
from associahedra.reports import registered_kinds, replay_failure
from associahedra.serialization import (BoxMorphismEntry, ComposeDocument, DirectedDocument, FiberDocument,
                                        LambdaDocument, ProjectDocument, an_document, an_from_document,
                                        category_document, dump_json, load_an_document,
                                        load_directed_document, report_document)
from associahedra.wordtree import render


def test_hasse_sizes():
    k4 = k_hasse(4)
    assert (k4.number_of_nodes(), k4.number_of_edges()) == (11, 15)
    filtered = k_hasse(4, 3)
    assert (filtered.number_of_nodes(), filtered.number_of_edges()) == (10, 10)
    pentagon = tamari_hasse(4)
    assert (pentagon.number_of_nodes(), pentagon.number_of_edges()) == (5, 5)


def test_hasse_edges_are_covers():
    for report in (check_k_hasse(4), check_k_hasse(5), check_tamari_hasse(5)):
        assert report['success'], report['failure']


def test_dot_output():
    dot = to_dot(tamari_hasse(3))
    assert dot.startswith('digraph "L3" {\n\tgraph [rankdir=BT];\n')
    assert '\t"(x1x2)x3" -> "x1(x2x3)";\n' in dot
    assert dot.endswith('}\n')


def test_json_output():
    data = to_json(k_hasse(3))
    assert data['name'] == 'K3'
    assert set(data['nodes']) == {'x1x2x3', 'x1(x2x3)', '(x1x2)x3'}
    assert sorted(data['edges']) == [['(x1x2)x3', 'x1x2x3'], ['x1(x2x3)', 'x1x2x3']]


def test_dump_json_is_canonical():
    assert dump_json({'b': 1, 'a': [1, 2]}) == '{"a":[1,2],"b":1}\n'


def test_report_document_keeps_extra_keys():
    doc = report_document({'success': True, 'check': 'coend_quotient', 'checked': 4, 'failure': None,
                           'classes': 3})
    data = json.loads(dump_json(doc))
    assert data['classes'] == 3
    assert data['schema_version'] == '1.0'
    assert 'failure' not in data


def test_category_document_omits_identity_composites():
    doc = category_document(loop_category())
    assert [(c.g, c.f, c.result) for c in doc.composition] == [('s', 's', 'e')]
    assert [(i.object, i.morphism) for i in doc.identities] == [('*', 'e')]


@pytest.mark.parametrize("fixture", [z2_fixture, loop_fixture])
def test_an_document_round_trip(fixture, tmp_path):
    C, d = fixture(bound=4)
    path = tmp_path / 'an.json'
    path.write_text(dump_json(an_document(C, d)), encoding='utf-8')

    C2, d2 = load_an_document(path)
    assert C2.objects() == C.objects()
    report = compare_an_data(d2, d)
    assert report['success'], report['failure']
    assert check_an_axioms(C2, d2)['success']


def test_missing_associators_surface_on_lookup():
    C, d = loop_fixture(bound=4)
    doc = an_document(C, d).model_copy(update={'alpha': []})
    C2, d2 = an_from_document(doc)
    with pytest.raises(MissingTableEntryError):
        check_an_axioms(C2, d2)


def test_bad_documents(tmp_path):
    broken = tmp_path / 'broken.json'
    broken.write_text('{"unit": ', encoding='utf-8')
    with pytest.raises(AssociahedraError):
        load_an_document(broken)

    incomplete = tmp_path / 'incomplete.json'
    incomplete.write_text('{"unit": "*"}', encoding='utf-8')
    with pytest.raises(AssociahedraError):
        load_an_document(incomplete)

    with pytest.raises(AssociahedraError):
        load_an_document(tmp_path / 'absent.json')


def test_directed_document(tmp_path):
    doc = DirectedDocument(category=category_document(loop_category()), unit='*', bound=4,
                           box_morphisms=[BoxMorphismEntry(left='s', right='s', value='e')])
    path = tmp_path / 'directed.json'
    path.write_text(dump_json(doc), encoding='utf-8')

    data = load_directed_document(path)
    assert data.box('*', '*') == '*'
    assert data.box_on_morphisms('s', 'e') == 's'
    assert data.box_on_morphisms('s', 's') == 'e'
    assert data.eta('*', '*', '*') == 'e'

    d = ainfty_from_directed(data.category, data.box, data.eta, data.unit,
                             box_on_morphisms=data.box_on_morphisms, bound=data.bound)
    report = check_an_axioms(data.category, d)
    assert report['success'], report['failure']


def test_hasse_mismatch_replays():
    graph = k_hasse(4)
    graph.remove_edge(*next(iter(graph.edges)))
    report = check_covers(graph, enumerate_words(4), render, leq)
    assert report['failure']['kind'] == 'hasse_mismatch'
    assert report['failure']['instance']['m'] == 4
    assert replay_failure(report['failure'], graph=graph) is True
    assert replay_failure(report['failure']) is False

    tamari_failure = {'kind': 'hasse_mismatch', 'instance': {'graph': 'L5', 'poset': 'L', 'm': 5}}
    assert replay_failure(tamari_failure) is False


def test_every_emitted_witness_kind_replays():
    import associahedra.cli  # noqa: F401  registers the replays of every module

    package = Path(associahedra.cli.__file__).parent
    pattern = re.compile(r"""(?:witness|fail|_fail|_run)\(\s*['"]([a-z_0-9]+)['"]""")
    emitted = set()
    for source in package.glob('*.py'):
        emitted.update(pattern.findall(source.read_text(encoding='utf-8')))
    emitted.update(f"{prefix}_{law}" for prefix in ('gamma', 'right') for law in ('sequential', 'parallel'))

    assert 'theta_cube' in emitted and 'an_alpha_typing' in emitted
    assert emitted - set(registered_kinds()) == set()


def test_output_documents_carry_the_schema_version():
    for document in (ComposeDocument(outer='x1x2', args=['x1', 'x1'], word='x1x2', tree=[1, 2]),
                     LambdaDocument(word='x1x2x3', tree='x1(x2x3)', binary=[1, [2, 3]]),
                     FiberDocument(tree='x1x2', size=1, fiber=['x1x2'], min='x1x2', max='x1x2'),
                     ProjectDocument(source='x1x2x3', abc=[1, 2, 3], word='x1x2x3', tree=[1, 2, 3])):
        assert json.loads(dump_json(document))['schema_version'] == '1.0'


if __name__ == '__main__':
    pytest.main([__file__])
