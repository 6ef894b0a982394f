"""
Fixture Categories

Small categories with An data used by the test suite and the CLI demos:

- trivial: one object, one morphism
- z2: the group Z/2 as a discrete strict monoidal category
- discrete: objects 0 and A, a product equal to A iff some factor is A
- poset: the natural numbers with A box B = A + B + A*B^2, a directed
  (non-invertible) associator
- loop: one object whose endomorphisms form Z/2, exercising equality of
  parallel morphisms in a non-thin category
"""

import itertools
import logging
from functools import lru_cache
from typing import Any, Callable, Dict, Optional, Tuple

from config import current_setting

from .categories import Category, DiscreteCategory, FinCat, PosetCategory
from .coherence import AnData, Objects, StrictAlgebra
from .reports import make_report, register_replay, witness

logger = logging.getLogger(__name__)

Fixture = Tuple[Category, AnData]


def _bound(bound: Optional[int]) -> int:
    return current_setting('WORKING_BOUND') if bound is None else bound


def strict_an_data(C: Category, product: Callable[[Objects], Any], unit: Any,
                   product_on_morphisms: Optional[Callable[[Tuple[Any, ...]], Any]] = None,
                   bound: Optional[int] = None, name: str = 'strict') -> AnData:
    """An data of a strict monoidal category: every associator is an identity"""
    def mu(objs: Objects) -> Any:
        return product(objs) if objs else unit

    def mu_on(mors: Tuple[Any, ...]) -> Any:
        if product_on_morphisms is not None:
            return product_on_morphisms(mors)
        return C.identity(mu(tuple(C.source(f) for f in mors)))

    def associator(a: Objects, b: Objects, c: Objects) -> Any:
        return C.identity(mu(a + b + c))

    return AnData(C, unit, mu, mu_on, associator, bound=_bound(bound), name=name)


def trivial_fixture(bound: Optional[int] = None) -> Fixture:
    C = DiscreteCategory(['*'], name='trivial')
    return C, strict_an_data(C, lambda objs: '*', '*', bound=bound, name='trivial')


def _parity(objs: Objects) -> str:
    return '1' if sum(1 for x in objs if x == '1') % 2 else '0'


def z2_fixture(bound: Optional[int] = None) -> Fixture:
    C = DiscreteCategory(['0', '1'], name='z2')
    return C, strict_an_data(C, _parity, '0', bound=bound, name='z2')


def z2_algebra(bound: Optional[int] = None) -> StrictAlgebra:
    """The strict Z/2 action, built without going through An data"""
    C = DiscreteCategory(['0', '1'], name='z2')
    return StrictAlgebra(C, _parity, bound=_bound(bound), name='z2_strict')


def _absorbing(objs: Objects) -> str:
    return 'A' if 'A' in objs else '0'


def discrete_fixture(bound: Optional[int] = None) -> Fixture:
    C = DiscreteCategory(['0', 'A'], name='discrete')
    return C, strict_an_data(C, _absorbing, '0', bound=bound, name='discrete')


def poset_box(a: int, b: int) -> int:
    return a + b + a * b * b


def poset_box_on_morphisms(f: Tuple[int, int], g: Tuple[int, int]) -> Tuple[int, int]:
    return (poset_box(f[0], g[0]), poset_box(f[1], g[1]))


def poset_eta(a: int, b: int, c: int) -> Tuple[int, int]:
    return (poset_box(poset_box(a, b), c), poset_box(a, poset_box(b, c)))


def poset_fixture(sample_max: int = 8, bound: Optional[int] = None) -> Fixture:
    """
    The poset of natural numbers with right-nested box products

    Every associator component is the unique morphism from its source to
    its target; verify_poset_monotonicity shows that morphism exists.
    """
    C = PosetCategory(sample_max=sample_max)

    @lru_cache(maxsize=1 << 18)
    def mu(objs: Objects) -> int:
        if len(objs) <= 1:
            return objs[0] if objs else 0
        return poset_box(objs[0], mu(objs[1:]))

    def mu_on(mors: Tuple[Tuple[int, int], ...]) -> Tuple[int, int]:
        return (mu(tuple(f[0] for f in mors)), mu(tuple(f[1] for f in mors)))

    def associator(a: Objects, b: Objects, c: Objects) -> Tuple[int, int]:
        source = mu(a + c) if not b else mu(a + (mu(b),) + c)
        return (source, mu(a + b + c))

    return C, AnData(C, 0, mu, mu_on, associator, bound=_bound(bound), name='poset')


def verify_poset_monotonicity(sample_max: int = 8) -> Dict[str, Any]:
    """
    Brute-force proof that the poset fixture is a directed monoidal category
    on {0..sample_max}: box is monotone in each argument, 0 is a strict unit,
    (A box B) box C <= A box (B box C) everywhere, and strictly somewhere
    """
    sample = range(sample_max + 1)
    checked = 0

    def fail(kind, args, expected, actual):
        return make_report('poset_monotonicity', checked,
                           witness(kind, {'args': list(args)}, expected=expected, actual=actual))

    for a in sample:
        checked += 1
        if poset_box(0, a) != a or poset_box(a, 0) != a:
            return fail('poset_unit', [a], a, [poset_box(0, a), poset_box(a, 0)])
    for a, b in itertools.product(sample, repeat=2):
        if b < sample_max:
            checked += 1
            if poset_box(a, b) > poset_box(a, b + 1) or poset_box(b, a) > poset_box(b + 1, a):
                return fail('poset_box_monotone', [a, b], 'monotone', 'decreasing')

    strict = 0
    for a, b, c in itertools.product(sample, repeat=3):
        checked += 1
        lower, upper = poset_eta(a, b, c)
        if lower > upper:
            return fail('poset_eta_direction', [a, b, c], f"<= {upper}", lower)
        if lower < upper:
            strict += 1
    if strict == 0:
        return fail('poset_directedness', [], 'some strict inequality', 'all equal')

    logger.info(f"Poset associator is strict on {strict} triples")
    return make_report('poset_monotonicity', checked)


@register_replay('poset_unit')
def _replay_poset_unit(instance: Dict[str, Any], **_) -> bool:
    a, = instance['args']
    return poset_box(0, a) != a or poset_box(a, 0) != a


@register_replay('poset_box_monotone')
def _replay_poset_monotone(instance: Dict[str, Any], **_) -> bool:
    a, b = instance['args']
    return poset_box(a, b) > poset_box(a, b + 1) or poset_box(b, a) > poset_box(b + 1, a)


@register_replay('poset_eta_direction')
def _replay_poset_eta(instance: Dict[str, Any], **_) -> bool:
    lower, upper = poset_eta(*instance['args'])
    return lower > upper


@register_replay('poset_directedness')
def _replay_poset_directedness(instance: Dict[str, Any], sample_max: int = 8, **_) -> bool:
    sample = range(sample_max + 1)
    return all(poset_eta(a, b, c)[0] == poset_eta(a, b, c)[1]
               for a, b, c in itertools.product(sample, repeat=3))


def loop_category() -> FinCat:
    """One object * whose endomorphisms {e, s} form Z/2"""
    composition = {
        ('e', 'e'): 'e', ('e', 's'): 's',
        ('s', 'e'): 's', ('s', 's'): 'e'
    }
    return FinCat(['*'], {'e': ('*', '*'), 's': ('*', '*')}, {'*': 'e'}, composition, name='loop')


def _morphism_parity(mors: Tuple[str, ...]) -> str:
    return 's' if mors.count('s') % 2 else 'e'


def loop_fixture(bound: Optional[int] = None) -> Fixture:
    C = loop_category()
    return C, strict_an_data(C, lambda objs: '*', '*', product_on_morphisms=_morphism_parity,
                             bound=bound, name='loop')


def _nontrivial(a: Objects, b: Objects, c: Objects) -> bool:
    return len(b) >= 2 and bool(a or c)


def corrupt_alpha(d: AnData, replace: Callable[[Objects, Objects, Objects, Any], Any],
                  where: Callable[[Objects, Objects, Objects], bool] = _nontrivial,
                  name: Optional[str] = None) -> AnData:
    """Copy of d whose associator is rewritten by `replace` wherever `where` holds"""
    original = d.associator

    def associator(a: Objects, b: Objects, c: Objects) -> Any:
        component = original(a, b, c)
        return replace(a, b, c, component) if where(a, b, c) else component

    return AnData(d.category, d.unit, d.mu_objects, d.mu_morphisms, associator,
                  n=d.n, bound=d.bound, name=name or f"corrupt({d.name})")


def corrupt_loop_fixture(bound: Optional[int] = None) -> Fixture:
    """alpha = s on every nontrivial component: typed and natural, but the unit squares fail"""
    C, d = loop_fixture(bound)
    return C, corrupt_alpha(d, lambda a, b, c, f: 's')


def corrupt_poset_fixture(sample_max: int = 8, bound: Optional[int] = None) -> Fixture:
    """Associators replaced by the identity of their target, which is mistyped"""
    C, d = poset_fixture(sample_max, bound)
    return C, corrupt_alpha(d, lambda a, b, c, f: (f[1], f[1]))


FIXTURES: Dict[str, Callable[..., Fixture]] = {
    'trivial': trivial_fixture,
    'z2': z2_fixture,
    'discrete': discrete_fixture,
    'poset': poset_fixture,
    'loop': loop_fixture
}
