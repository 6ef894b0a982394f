"""
Command-Line Interface

    python run.py kposet enumerate --m 4
    python run.py tamari check --m 5 --poset
    python run.py check coherence --fixture z2
    python run.py rectify demo --fixture discrete --max-len 4

Exit codes: 0 on success, 1 when a check fails (the report with its
witness goes to stdout), 2 on usage errors and malformed input.
"""

import argparse
import logging
import sys
from typing import Any, Callable, Dict, Optional, Sequence

from config import current_setting, get_config

from .categories import PosetCategory
from .coherence import (StrictAlgebra, an_from_theta, check_action_compatibility, check_an_axioms,
                        compare_an_data, theta_from_an)
from .cubes import random_cube_trials
from .directed import ainfty_from_directed, check_right_nesting_identities, directed_hypotheses
from .exceptions import AssociahedraError, CoherenceViolation
from .fixtures import (FIXTURES, discrete_fixture, poset_box, poset_box_on_morphisms, poset_eta,
                       poset_fixture, verify_poset_monotonicity)
from .hasse import check_k_hasse, check_tamari_hasse, k_hasse, tamari_hasse, to_dot, to_json
from .kposet import (check_downward_closure, check_interval_lemma, check_operad_laws, check_skeleton,
                     enumerate_words, f_vector, gamma)
from .rectify import build_MC, check_bimodule_laws, coend_quotient_oracle
from .reports import combine_reports, replay_failure
from .serialization import (ComposeDocument, FiberDocument, FVectorDocument, HasseDocument, LambdaDocument,
                            ProjectDocument, RectifyDocument, WordListDocument, an_document, dump_json,
                            load_an_document, load_directed_document, report_document)
from .tamari import (check_embedding, check_fibers, check_generators, check_monotone, check_poset,
                     check_projection_square, check_surjectivity, fiber, lambda_obj, max_preimage,
                     min_preimage, project_abc, read_binary, render_binary)
from .wordtree import read_word, render, tree_to_json, word_to_json

logger = logging.getLogger(__name__)


class CheckFailed(Exception):
    def __init__(self, report: Dict[str, Any]):
        self.report = report


def _out(text: str):
    sys.stdout.write(text if text.endswith('\n') else text + '\n')


def emit_report(report: Dict[str, Any], fmt: str, context: Optional[Dict[str, Any]] = None):
    """Print a report; a failing report is replayed and then raised as CheckFailed"""
    if not report['success']:
        try:
            report['replays'] = replay_failure(report['failure'], **(context or {}))
        except KeyError:
            logger.debug(f"No replay for witness kind {report['failure'].get('kind')}")
        except AssociahedraError as e:
            logger.warning(f"Replay of {report['failure'].get('kind')} raised: {e}")

    if fmt == 'text':
        mark = '✓' if report['success'] else '❌'
        _out(f"{mark} {report['check']}: {'passed' if report['success'] else 'FAILED'} "
             f"({report['checked']} instances)")
        for part in report.get('parts') or []:
            _out(f"   {'✓' if part['success'] else '❌'} {part['check']} ({part['checked']})")
        if report.get('skipped'):
            _out(f"   skipped: {report['skipped']}")
        if not report['success']:
            _out(f"   witness: {report['failure']}")
    else:
        _out(dump_json(report_document(report)))

    if not report['success']:
        raise CheckFailed(report)


def _load_an(args):
    """(category, An data) from --input or --fixture"""
    bound = args.bound or current_setting('WORKING_BOUND')
    if args.input:
        C, d = load_an_document(args.input)
        if args.bound:
            d.bound = args.bound
        return C, d
    if args.fixture == 'poset':
        return poset_fixture(sample_max=args.sample_max, bound=bound)
    return FIXTURES[args.fixture](bound=bound)


# Commands

def cmd_enumerate(args) -> int:
    words = enumerate_words(args.m, args.n)
    if args.format == 'json':
        _out(dump_json(WordListDocument(m=args.m, n=args.n, count=len(words),
                                        words=[render(w) for w in words],
                                        trees=[word_to_json(w) for w in words])))
    else:
        for w in words:
            _out(render(w))
    return 0


def cmd_compose(args) -> int:
    outer = read_word(args.outer)
    inner = [read_word(a) for a in args.args]
    result = gamma(outer, inner)
    if args.format == 'json':
        _out(dump_json(ComposeDocument(outer=render(outer), args=[render(a) for a in inner],
                                       word=render(result), tree=word_to_json(result))))
    else:
        _out(render(result))
    return 0


def cmd_fvector(args) -> int:
    fv = f_vector(args.m, args.n)
    if args.format == 'json':
        _out(dump_json(FVectorDocument(m=fv.m, n=fv.n, counts=list(fv.counts), euler=fv.euler)))
    else:
        _out(' '.join(str(c) for c in fv.counts))
    return 0


def cmd_hasse(args) -> int:
    graph = k_hasse(args.m, args.n) if args.poset == 'k' else tamari_hasse(args.m)
    if args.format == 'json':
        _out(dump_json(HasseDocument(**to_json(graph))))
    else:
        _out(to_dot(graph))
    return 0


def cmd_lambda(args) -> int:
    word = read_word(args.word)
    image = lambda_obj(word)
    if args.format == 'json':
        _out(dump_json(LambdaDocument(word=render(word), tree=render_binary(image),
                                      binary=tree_to_json(image))))
    else:
        _out(render_binary(image))
    return 0


def cmd_fiber(args) -> int:
    t = read_binary(args.tree)
    words = fiber(t)
    if args.format == 'json':
        _out(dump_json(FiberDocument(tree=render_binary(t), size=len(words), fiber=[render(w) for w in words],
                                     min=render(min_preimage(t)), max=render(max_preimage(t)))))
    else:
        for w in words:
            _out(render(w))
    return 0


def cmd_project(args) -> int:
    a, b, c = args.abc
    word = read_word(args.word)
    result = project_abc(word, a, b, c)
    if args.format == 'json':
        _out(dump_json(ProjectDocument(source=render(word), abc=[a, b, c], word=render(result),
                                       tree=word_to_json(result))))
    else:
        _out(render(result))
    return 0


def cmd_check_operad(args) -> int:
    reports = []
    for m in range(2, args.m + 1):
        reports += [check_interval_lemma(m), check_skeleton(m), check_downward_closure(m)]
    reports.append(check_operad_laws(max_total=args.bound))
    emit_report(combine_reports('operad', reports), args.format)
    return 0


TAMARI_CHECKS: Dict[str, Callable[[int], Dict[str, Any]]] = {
    'poset': check_poset,
    'embedding': check_embedding,
    'fibers': check_fibers,
    'surjectivity': check_surjectivity,
    'generators': check_generators,
    'monotone': check_monotone,
    'projection': check_projection_square,
    'hasse': check_tamari_hasse
}


def cmd_check_tamari(args) -> int:
    chosen = [name for name in TAMARI_CHECKS if getattr(args, name)] or list(TAMARI_CHECKS)
    if 'embedding' in chosen and args.m > current_setting('EMBEDDING_MAX_M') and len(chosen) > 1:
        chosen.remove('embedding')
    reports = [TAMARI_CHECKS[name](args.m) for name in chosen]
    emit_report(reports[0] if len(reports) == 1 else combine_reports('tamari', reports), args.format)
    return 0


def cmd_check_embedding(args) -> int:
    emit_report(combine_reports('embedding', [check_embedding(args.m), check_k_hasse(args.m)]), args.format)
    return 0


def cmd_check_coherence(args) -> int:
    C, d = _load_an(args)
    report = check_an_axioms(C, d, bound=args.bound)
    emit_report(report, args.format, {'category': C, 'data': d})
    return 0


def cmd_check_cube(args) -> int:
    emit_report(random_cube_trials(count=args.count, seed=args.seed, max_dim=args.max_dim), args.format)
    return 0


def cmd_check_rectify(args) -> int:
    C, d = discrete_fixture(bound=current_setting('WORKING_BOUND'))
    t = theta_from_an(C, d)
    M = build_MC(C, t, max_len=min(4, args.bound))
    reports = [check_bimodule_laws(bound=args.bound),
               coend_quotient_oracle(C, t, max_arity=min(4, args.bound)),
               M.verification_report()]
    emit_report(combine_reports('rectify', reports), args.format, {'mc': M, 'category': C, 'algebra': t})
    return 0


def cmd_from_directed(args) -> int:
    bound = args.bound or current_setting('WORKING_BOUND')
    if args.input:
        data = load_directed_document(args.input)
        C, box, eta, unit, box_mor = data.category, data.box, data.eta, data.unit, data.box_on_morphisms
    else:
        C, box, eta, unit, box_mor = PosetCategory(sample_max=args.sample_max), poset_box, poset_eta, 0, \
            poset_box_on_morphisms

    hypotheses = directed_hypotheses(C, box, eta, unit, box_on_morphisms=box_mor)
    reports = [hypotheses.check()]
    if not args.input:
        reports.insert(0, verify_poset_monotonicity(args.sample_max))
    context = {'hypotheses': hypotheses, 'sample_max': args.sample_max, 'category': C}
    if not all(r['success'] for r in reports):
        emit_report(combine_reports('from_directed', reports), args.format, context)

    d = ainfty_from_directed(C, box, eta, unit, box_on_morphisms=box_mor, bound=bound, verify=False)
    reports += [check_an_axioms(C, d), check_right_nesting_identities(C, d)]
    emit_report(combine_reports('from_directed', reports), args.format, dict(context, data=d))
    return 0


def cmd_build_theta(args) -> int:
    C, d = _load_an(args)
    t = theta_from_an(C, d)
    reports = [
        check_an_axioms(C, d),
        compare_an_data(an_from_theta(t), d),
        check_action_compatibility(t, bound=min(5, d.cap))
    ]
    emit_report(combine_reports('build_theta', reports), args.format, {'category': C, 'data': d, 'algebra': t})
    return 0


def cmd_rectify_demo(args) -> int:
    C, d = _load_an(args)
    t = theta_from_an(C, d)
    M = build_MC(C, t, max_len=args.max_len)
    report = M.verification_report(strict=isinstance(t, StrictAlgebra) or args.strict)
    summary = M.summary()
    document = RectifyDocument(fixture=args.input or args.fixture, max_len=args.max_len,
                               objects=summary['objects'], hom_sizes=summary['hom_sizes'],
                               unit_reflecting=summary['unit_reflecting'], report=report)
    _out(dump_json(document))
    if not report['success']:
        raise CheckFailed(report)
    return 0


def cmd_export(args) -> int:
    C, d = FIXTURES[args.fixture](bound=args.bound or current_setting('WORKING_BOUND'))
    if not hasattr(C, 'tables'):
        raise AssociahedraError(f"Fixture '{args.fixture}' is not a finite table category")
    _out(dump_json(an_document(C, d)))
    return 0


# Parser

def _add_common(p: argparse.ArgumentParser, default_format: str):
    p.add_argument('--format', choices=['json', 'dot', 'text'], default=default_format,
                   help=f"Output format (default: {default_format})")


def _add_source(p: argparse.ArgumentParser):
    p.add_argument('--fixture', choices=sorted(FIXTURES), default='z2', help='Built-in fixture (default: z2)')
    p.add_argument('--input', help='An document (JSON) to load instead of a fixture')
    p.add_argument('--bound', type=int, help='Working bound N (default from config)')
    p.add_argument('--sample-max', type=int, default=2,
                   help='Largest poset object instantiated by checks (default: 2)')


def _add_word_commands(sub, prefix: str = ''):
    """enumerate, compose, fvector and hasse; shared by the flat commands and the kposet group"""
    p = sub.add_parser('enumerate', help='List K_m (optionally K^(n)_m)')
    p.add_argument('--m', type=int, required=True)
    p.add_argument('--n', '--filtration', dest='n', type=int)
    _add_common(p, 'text')
    p.set_defaults(handler=cmd_enumerate)

    p = sub.add_parser('compose', help='Operad composition gamma(outer; args)')
    p.add_argument('--outer', required=True, help='Rendered word or JSON tree')
    p.add_argument('--args', nargs='*', default=[])
    _add_common(p, 'text')
    p.set_defaults(handler=cmd_compose)

    p = sub.add_parser('fvector', help='Cell counts of K^(n)_m by dimension')
    p.add_argument('--m', type=int, required=True)
    p.add_argument('--n', '--filtration', dest='n', type=int)
    _add_common(p, 'text')
    p.set_defaults(handler=cmd_fvector)

    p = sub.add_parser('hasse', help=f'Hasse diagram of {prefix or "K_m or L_m"}')
    if prefix:
        p.set_defaults(poset='k')
    else:
        p.add_argument('--poset', choices=['k', 'tamari'], default='k')
    p.add_argument('--m', type=int, required=True)
    p.add_argument('--n', '--filtration', dest='n', type=int)
    _add_common(p, 'dot')
    p.set_defaults(handler=cmd_hasse)


def _add_tamari_commands(sub):
    p = sub.add_parser('hasse', help='Hasse diagram of L_m')
    p.add_argument('--m', type=int, required=True)
    _add_common(p, 'dot')
    p.set_defaults(handler=cmd_hasse, poset='tamari', n=None)

    p = sub.add_parser('lambda', help='Image of a word in the Tamari poset')
    p.add_argument('--word', required=True)
    _add_common(p, 'text')
    p.set_defaults(handler=cmd_lambda)

    p = sub.add_parser('fiber', help='Words mapping to a binary tree')
    p.add_argument('--binary', '--tree', dest='tree', required=True, help='JSON tree or bracketed word')
    _add_common(p, 'text')
    p.set_defaults(handler=cmd_fiber)

    p = sub.add_parser('check', help='Tamari poset and the comparison map')
    _add_tamari_flags(p)


def _add_tamari_flags(p: argparse.ArgumentParser):
    p.add_argument('--m', type=int, required=True)
    for name in TAMARI_CHECKS:
        p.add_argument(f'--{name}', action='store_true')
    _add_common(p, 'json')
    p.set_defaults(handler=cmd_check_tamari)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='associahedra',
        description='Associahedral operad, Tamari comparison, An-monoidal coherence and rectification',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s kposet enumerate --m 4 --filtration 3
  %(prog)s kposet compose --outer "[[1,2],3]" --args "[1,2]" 1 1
  %(prog)s tamari hasse --m 4 --format dot
  %(prog)s tamari check --m 5 --poset
  %(prog)s check coherence --fixture poset --bound 4
  %(prog)s rectify demo --fixture discrete --max-len 4
        """
    )
    parser.add_argument('--verbose', action='store_true', help='Log at DEBUG')
    parser.add_argument('--quiet', action='store_true', help='Log warnings only')
    sub = parser.add_subparsers(dest='command', required=True)

    _add_word_commands(sub)
    kposet = sub.add_parser('kposet', help='Words, composition and cells of K_m')
    _add_word_commands(kposet.add_subparsers(dest='action', required=True), prefix='K_m')
    tamari = sub.add_parser('tamari', help='The Tamari poset and the map to it')
    _add_tamari_commands(tamari.add_subparsers(dest='action', required=True))

    p = sub.add_parser('lambda', help='Image of a word in the Tamari poset')
    p.add_argument('--word', required=True)
    _add_common(p, 'text')
    p.set_defaults(handler=cmd_lambda)

    p = sub.add_parser('fiber', help='Words mapping to a binary tree')
    p.add_argument('--tree', '--binary', dest='tree', required=True)
    _add_common(p, 'text')
    p.set_defaults(handler=cmd_fiber)

    p = sub.add_parser('project', help='Projection of a word onto three letters')
    p.add_argument('--word', required=True)
    p.add_argument('--abc', type=int, nargs=3, required=True, metavar=('A', 'B', 'C'))
    _add_common(p, 'text')
    p.set_defaults(handler=cmd_project)

    check = sub.add_parser('check', help='Run an exhaustive check').add_subparsers(dest='check', required=True)

    p = check.add_parser('operad', help='Interval lemma, skeleton, closure and operad laws')
    p.add_argument('--m', type=int, default=5)
    p.add_argument('--bound', type=int, default=5)
    _add_common(p, 'json')
    p.set_defaults(handler=cmd_check_operad)

    _add_tamari_flags(check.add_parser('tamari', help='Tamari poset and the comparison map'))

    p = check.add_parser('embedding', help='Projections to length 3 are jointly faithful')
    p.add_argument('--m', type=int, required=True)
    _add_common(p, 'json')
    p.set_defaults(handler=cmd_check_embedding)

    p = check.add_parser('coherence', help='An axioms on a fixture or document')
    _add_source(p)
    _add_common(p, 'json')
    p.set_defaults(handler=cmd_check_coherence)

    p = check.add_parser('cube', help='Random cube commutation trials')
    p.add_argument('--count', type=int, default=1000)
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--max-dim', type=int, default=4)
    _add_common(p, 'json')
    p.set_defaults(handler=cmd_check_cube)

    p = check.add_parser('rectify', help='Bimodule laws, coend oracle and MC checks')
    p.add_argument('--bound', type=int, default=4)
    _add_common(p, 'json')
    p.set_defaults(handler=cmd_check_rectify)

    p = sub.add_parser('from-directed', help='A-infinity data from a directed monoidal category')
    p.add_argument('--input', help='Directed document (JSON); the poset fixture when omitted')
    p.add_argument('--bound', type=int)
    p.add_argument('--sample-max', type=int, default=2)
    _add_common(p, 'json')
    p.set_defaults(handler=cmd_from_directed)

    p = sub.add_parser('build-theta', help='Build the K-action and verify the round trip')
    _add_source(p)
    _add_common(p, 'json')
    p.set_defaults(handler=cmd_build_theta)

    rectify = sub.add_parser('rectify', help='Rectification').add_subparsers(dest='action', required=True)
    p = rectify.add_parser('demo', help='Objects, hom sizes and checks of MC')
    _add_source(p)
    p.add_argument('--max-len', type=int, default=4)
    p.add_argument('--strict', action='store_true', help='Also check that E is strictly monoidal')
    p.set_defaults(handler=cmd_rectify_demo, format='json')

    p = sub.add_parser('export', help='Write a fixture as an An document')
    p.add_argument('--fixture', choices=sorted(FIXTURES), required=True)
    p.add_argument('--bound', type=int)
    p.set_defaults(handler=cmd_export, format='json')

    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 2

    level = 'DEBUG' if args.verbose else 'WARNING' if args.quiet else current_setting('LOG_LEVEL')
    get_config().init_logging(level)

    try:
        return args.handler(args)
    except CheckFailed:
        return 1
    except CoherenceViolation as e:
        _out(dump_json(report_document({'success': False, 'check': args.command, 'checked': 0,
                                          'failure': e.witness})))
        return 1
    except AssociahedraError as e:
        print(f"❌ {e}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == '__main__':
    main()
