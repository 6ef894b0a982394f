#!/usr/bin/env python3
"""
Tests for the command-line interface and its exit codes
"""

import json

import pytest

import associahedra.cli as cli
from associahedra.cli import build_parser, run
from associahedra.exceptions import CubeNotCommuting
from associahedra.fixtures import corrupt_loop_fixture, loop_category
from associahedra.serialization import (BoxMorphismEntry, DirectedDocument, EtaEntry, an_document, category_document,
                                        dump_json)


def lines(capsys):
    return capsys.readouterr().out.splitlines()


def output_json(capsys):
    return json.loads(capsys.readouterr().out)


def test_enumerate_text(capsys):
    assert run(['enumerate', '--m', '3']) == 0
    assert set(lines(capsys)) == {'x1x2x3', 'x1(x2x3)', '(x1x2)x3'}


def test_enumerate_small(capsys):
    assert run(['enumerate', '--m', '1']) == 0
    assert lines(capsys) == ['x1']
    assert run(['enumerate', '--m', '4']) == 0
    assert len(lines(capsys)) == 11


def test_enumerate_json(capsys):
    assert run(['enumerate', '--m', '4', '--format', 'json']) == 0
    data = output_json(capsys)
    assert data['count'] == 11
    assert len(data['words']) == len(data['trees']) == 11

    assert run(['enumerate', '--m', '4', '--n', '2', '--format', 'json']) == 0
    assert output_json(capsys)['count'] == 5


def test_compose(capsys):
    assert run(['compose', '--outer', '(x1x2)x3', '--args', 'x1x2', 'x1', 'x1']) == 0
    assert lines(capsys) == ['((x1x2)x3)x4']


def test_fvector(capsys):
    assert run(['fvector', '--m', '4']) == 0
    assert lines(capsys) == ['5 5 1']
    assert run(['fvector', '--m', '5', '--format', 'json']) == 0
    data = output_json(capsys)
    assert data['counts'] == [14, 21, 9, 1]
    assert data['euler'] == 1


def test_hasse_dot(capsys):
    assert run(['hasse', '--poset', 'tamari', '--m', '4']) == 0
    out = capsys.readouterr().out
    assert out.startswith('digraph "L4" {')
    assert out.count(' -> ') == 5


def test_lambda_fiber_project(capsys):
    assert run(['lambda', '--word', 'x1x2x3']) == 0
    assert lines(capsys) == ['x1(x2x3)']

    assert run(['fiber', '--tree', 'x1(x2x3)']) == 0
    assert sorted(lines(capsys)) == ['x1(x2x3)', 'x1x2x3']

    assert run(['project', '--word', '((x1x2)x3)x4', '--abc', '1', '2', '4']) == 0
    assert lines(capsys) == ['(x1x2)x3']


@pytest.mark.parametrize("argv", [
    ['check', 'tamari', '--m', '4'],
    ['check', 'embedding', '--m', '4'],
    ['check', 'coherence', '--fixture', 'z2', '--bound', '4'],
    ['check', 'cube', '--count', '10', '--max-dim', '3', '--seed', '3'],
    ['check', 'operad', '--m', '4', '--bound', '4'],
    ['check', 'rectify', '--bound', '3'],
    ['from-directed', '--bound', '4'],
    ['build-theta', '--fixture', 'z2', '--bound', '4'],
])
def test_checks_pass(argv, capsys):
    assert run(argv) == 0
    assert output_json(capsys)['success'] is True


def test_json_output_is_stable(capsys):
    argv = ['check', 'tamari', '--poset', '--m', '5']
    assert run(argv) == 0
    first = capsys.readouterr().out
    assert run(argv) == 0
    assert capsys.readouterr().out == first


def test_text_report(capsys):
    assert run(['check', 'tamari', '--m', '3', '--poset', '--format', 'text']) == 0
    assert lines(capsys)[0].startswith('✓ tamari_poset')


def test_failing_document(tmp_path, capsys):
    path = tmp_path / 'corrupt.json'
    path.write_text(dump_json(an_document(*corrupt_loop_fixture(bound=3))), encoding='utf-8')
    assert run(['check', 'coherence', '--input', str(path)]) == 1
    data = output_json(capsys)
    assert data['success'] is False
    assert data['failure']['kind'].startswith('an_')
    assert data['replays'] is True


def test_export_then_check(tmp_path, capsys):
    assert run(['export', '--fixture', 'loop', '--bound', '4']) == 0
    path = tmp_path / 'loop.json'
    path.write_text(capsys.readouterr().out, encoding='utf-8')
    assert run(['check', 'coherence', '--input', str(path)]) == 0
    assert output_json(capsys)['success'] is True


def test_rectify_demo(capsys):
    assert run(['rectify', 'demo', '--fixture', 'discrete', '--max-len', '3']) == 0
    data = output_json(capsys)
    assert data['unit_reflecting'] is True
    assert data['hom_sizes']['["A","A"]->["A","A","A"]'] == 2
    assert data['report']['success'] is True


def test_kposet_group(capsys):
    assert run(['kposet', 'enumerate', '--m', '4', '--filtration', '3']) == 0
    assert len(lines(capsys)) == 10
    assert run(['kposet', 'fvector', '--m', '5', '--filtration', '3']) == 0
    assert lines(capsys) == ['14 21 3 0']
    assert run(['kposet', 'hasse', '--m', '4', '--format', 'json']) == 0
    data = output_json(capsys)
    assert (len(data['nodes']), len(data['edges'])) == (11, 15)


def test_kposet_compose_reads_json_trees(capsys):
    assert run(['kposet', 'compose', '--outer', '[[1,2],3]', '--args', '[1,2]', '1', '1', '--format', 'json']) == 0
    data = output_json(capsys)
    assert data['word'] == '((x1x2)x3)x4'
    assert data['outer'] == '(x1x2)x3'
    assert data['schema_version'] == '1.0'


def test_tamari_group(capsys):
    assert run(['tamari', 'hasse', '--m', '4']) == 0
    assert capsys.readouterr().out.count(' -> ') == 5

    assert run(['tamari', 'lambda', '--word', 'x1x2x3x4', '--format', 'json']) == 0
    data = output_json(capsys)
    assert data['tree'] == 'x1(x2(x3x4))'
    assert data['binary'] == [1, [2, [3, 4]]]

    assert run(['tamari', 'fiber', '--binary', '[1,[2,[3,4]]]', '--format', 'json']) == 0
    data = output_json(capsys)
    assert data['size'] == 4
    assert data['max'] == 'x1x2x3x4'

    assert run(['tamari', 'check', '--m', '4', '--poset']) == 0
    assert output_json(capsys)['check'] == 'tamari_poset'
    assert run(['tamari', 'check', '--m', '4', '--embedding']) == 0
    assert output_json(capsys)['success'] is True


def test_project_document(capsys):
    assert run(['project', '--word', '((x1x2)x3)x4', '--abc', '1', '2', '4', '--format', 'json']) == 0
    data = output_json(capsys)
    assert data['word'] == '(x1x2)x3'
    assert data['abc'] == [1, 2, 4]
    assert data['schema_version'] == '1.0'


def test_cube_trials_default_to_a_thousand(capsys):
    args = build_parser().parse_args(['check', 'cube'])
    assert (args.count, args.max_dim) == (1000, 4)


def test_failed_hypotheses_are_replayed(tmp_path, capsys):
    path = tmp_path / 'bad_unit.json'
    document = DirectedDocument(category=category_document(loop_category()), unit='*',
                                box_morphisms=[BoxMorphismEntry(left='s', right='s', value='e')],
                                eta=[EtaEntry(a='*', b='*', c='*', value='s')])
    path.write_text(dump_json(document), encoding='utf-8')
    assert run(['from-directed', '--input', str(path)]) == 1
    data = output_json(capsys)
    assert data['success'] is False
    assert data['schema_version'] == '1.0'
    assert data['failure']['kind'] == 'eta_unit'
    assert data['replays'] is True


def test_coherence_violation_is_a_versioned_report(monkeypatch, capsys):
    def disagreeing(args):
        raise CubeNotCommuting("Factorizations disagree", {'kind': 'theta_cube', 'instance': {'objects': []},
                                                           'expected': None, 'actual': None})

    monkeypatch.setattr(cli, 'cmd_enumerate', disagreeing)
    assert run(['enumerate', '--m', '3']) == 1
    data = output_json(capsys)
    assert data['success'] is False
    assert data['schema_version'] == '1.0'
    assert data['failure']['kind'] == 'theta_cube'


@pytest.mark.parametrize("argv,code", [
    (['compose', '--outer', '(x1x2'], 2),
    (['enumerate'], 2),
    (['--help'], 0),
    (['export', '--fixture', 'poset'], 2),
    (['check', 'coherence', '--input', 'no_such_file.json'], 2),
])
def test_exit_codes(argv, code):
    assert run(argv) == code


if __name__ == '__main__':
    pytest.main([__file__])
