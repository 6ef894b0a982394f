"""
Directed Monoidal Categories

A directed monoidal category has a bifunctor box with a strict unit and a
natural associator eta_{A,B,C}: (A box B) box C -> A box (B box C) that need
not be invertible. When eta is the identity on any unit argument and the
pentagon commutes, right-nested multiplication together with associators
built from eta form A-infinity data.
"""

import itertools
import logging
from functools import lru_cache
from typing import Any, Callable, Dict, Optional, Sequence, Tuple

from config import current_setting

from .categories import Category, check_typed
from .coherence import AnData, Objects, block_shapes, block_tuples, jsonable, restore
from .exceptions import AssociahedraError, CategoryError, HypothesisViolation
from .reports import make_report, register_replay, witness

logger = logging.getLogger(__name__)

Box = Callable[[Any, Any], Any]
BoxOnMorphisms = Callable[[Any, Any], Any]
Eta = Callable[[Any, Any, Any], Any]


def thin_box_on_morphisms(C: Category, box: Box) -> BoxOnMorphisms:
    """In a thin category box on morphisms is forced; it exists iff box is monotone"""
    def on_morphisms(f: Any, g: Any) -> Any:
        source = box(C.source(f), C.source(g))
        target = box(C.target(f), C.target(g))
        found = C.hom(source, target)
        if not found:
            raise CategoryError(f"box is not monotone at {f!r}, {g!r}: no morphism {source!r} -> {target!r}")
        return found[0]
    return on_morphisms


def _box_typing(h: 'DirectedHypotheses', f: Any, g: Any):
    C = h.C
    source = h.box(C.source(f), C.source(g))
    target = h.box(C.target(f), C.target(g))
    problem = check_typed(C, h.box_mor(f, g), source, target)
    if problem:
        return {'expected': [source, target], 'actual': problem}


def _box_identity(h: 'DirectedHypotheses', x: Any, y: Any):
    C = h.C
    image = h.box_mor(C.identity(x), C.identity(y))
    if image != C.identity(h.box(x, y)):
        return {'expected': C.identity(h.box(x, y)), 'actual': image}


def _box_composition(h: 'DirectedHypotheses', f: Any, f2: Any, g: Any, g2: Any):
    C = h.C
    whole = h.box_mor(C.compose(f2, f), C.compose(g2, g))
    parts = C.compose(h.box_mor(f2, g2), h.box_mor(f, g))
    if whole != parts:
        return {'expected': parts, 'actual': whole}


def _strict_unit_object(h: 'DirectedHypotheses', x: Any):
    sides = [h.box(h.unit, x), h.box(x, h.unit)]
    if sides != [x, x]:
        return {'expected': x, 'actual': sides}


def _strict_unit_morphism(h: 'DirectedHypotheses', f: Any):
    unit_id = h.C.identity(h.unit)
    sides = [h.box_mor(unit_id, f), h.box_mor(f, unit_id)]
    if sides != [f, f]:
        return {'expected': f, 'actual': sides}


def _eta_typing(h: 'DirectedHypotheses', a: Any, b: Any, c: Any):
    source = h.box(h.box(a, b), c)
    target = h.box(a, h.box(b, c))
    problem = check_typed(h.C, h.eta(a, b, c), source, target)
    if problem:
        return {'expected': [source, target], 'actual': problem}


def _eta_unit(h: 'DirectedHypotheses', a: Any, b: Any, c: Any):
    if h.unit not in (a, b, c):
        return None
    identity = h.C.identity(h.box(a, h.box(b, c)))
    if h.eta(a, b, c) != identity:
        return {'expected': identity, 'actual': h.eta(a, b, c)}


def _eta_naturality(h: 'DirectedHypotheses', a: Any, b: Any, c: Any, slot: int, f: Any):
    C = h.C
    triple = [a, b, c]
    fs = [f if t == slot else C.identity(triple[t]) for t in range(3)]
    moved = [C.target(g) for g in fs]
    left = C.compose(h.eta(*moved), h.box_mor(h.box_mor(fs[0], fs[1]), fs[2]))
    right = C.compose(h.box_mor(fs[0], h.box_mor(fs[1], fs[2])), h.eta(a, b, c))
    if left != right:
        return {'expected': right, 'actual': left}


def _pentagon(h: 'DirectedHypotheses', a: Any, b: Any, c: Any, d: Any):
    C = h.C
    top = C.compose(h.eta(a, b, h.box(c, d)), h.eta(h.box(a, b), c, d))
    bottom = C.compose_path([
        h.box_mor(h.eta(a, b, c), C.identity(d)),
        h.eta(a, h.box(b, c), d),
        h.box_mor(C.identity(a), h.eta(b, c, d))
    ])
    if top != bottom:
        return {'expected': top, 'actual': bottom}


HYPOTHESES: Dict[str, Callable[..., Optional[Dict[str, Any]]]] = {
    'box_typing': _box_typing,
    'box_identity': _box_identity,
    'box_composition': _box_composition,
    'strict_unit_object': _strict_unit_object,
    'strict_unit_morphism': _strict_unit_morphism,
    'eta_typing': _eta_typing,
    'eta_unit': _eta_unit,
    'eta_naturality': _eta_naturality,
    'pentagon': _pentagon
}


class _Stop(Exception):
    def __init__(self, failure: Dict[str, Any]):
        self.failure = failure


class DirectedHypotheses:
    """
    Exhaustive check of the hypotheses on (box, eta) over an object sample

    Order: bifunctoriality, strict unit, typing of eta, eta on unit
    arguments, naturality of eta (skipped when thin), pentagon.
    """

    def __init__(self, C: Category, box: Box, box_on_morphisms: BoxOnMorphisms, eta: Eta,
                 unit: Any, objects: Optional[Sequence[Any]] = None):
        self.C = C
        self.box = box
        self.box_mor = box_on_morphisms
        self.eta = eta
        self.unit = unit
        self.objects = list(objects) if objects is not None else C.objects()
        sample = set(self.objects)
        self.generators = [f for f in C.generating_morphisms()
                           if C.source(f) in sample and C.target(f) in sample]
        self.checked = 0

    def _run(self, kind: str, *args):
        self.checked += 1
        result = HYPOTHESES[kind](self, *args)
        if result is not None:
            raise _Stop(witness(kind, {'args': jsonable(list(args))},
                                expected=jsonable(result['expected']), actual=jsonable(result['actual'])))

    def violates(self, kind: str, args: Sequence[Any]) -> bool:
        return HYPOTHESES[kind](self, *restore(list(args))) is not None

    def check(self) -> Dict[str, Any]:
        try:
            self._bifunctor()
            self._strict_unit()
            for a, b, c in itertools.product(self.objects, repeat=3):
                self._run('eta_typing', a, b, c)
                self._run('eta_unit', a, b, c)
            if not self.C.is_thin:
                self._naturality()
            for a, b, c, d in itertools.product(self.objects, repeat=4):
                self._run('pentagon', a, b, c, d)
        except _Stop as stop:
            return make_report('directed_hypotheses', self.checked, stop.failure)
        return make_report('directed_hypotheses', self.checked)

    def _bifunctor(self):
        C = self.C
        morphisms = [C.identity(x) for x in self.objects] + self.generators
        for f in morphisms:
            for g in morphisms:
                self._run('box_typing', f, g)
        for x in self.objects:
            for y in self.objects:
                self._run('box_identity', x, y)
        if C.is_thin:
            return
        for f, f2 in itertools.product(self.generators, repeat=2):
            if C.target(f) != C.source(f2):
                continue
            for g, g2 in itertools.product(self.generators, repeat=2):
                if C.target(g) == C.source(g2):
                    self._run('box_composition', f, f2, g, g2)

    def _strict_unit(self):
        for x in self.objects:
            self._run('strict_unit_object', x)
        for f in [self.C.identity(x) for x in self.objects] + self.generators:
            self._run('strict_unit_morphism', f)

    def _naturality(self):
        for a, b, c in itertools.product(self.objects, repeat=3):
            for slot in range(3):
                for f in self.generators:
                    if self.C.source(f) == (a, b, c)[slot]:
                        self._run('eta_naturality', a, b, c, slot, f)


def _make_hypothesis_replay(kind: str):
    def replay(instance: Dict[str, Any], hypotheses: Optional[DirectedHypotheses] = None, **_) -> bool:
        if hypotheses is None:
            raise AssociahedraError("Replaying a directed witness needs the hypotheses under test")
        return hypotheses.violates(kind, instance['args'])
    return replay


for _kind in HYPOTHESES:
    register_replay(_kind)(_make_hypothesis_replay(_kind))


def directed_hypotheses(C: Category, box: Box, eta: Eta, unit: Any,
                        box_on_morphisms: Optional[BoxOnMorphisms] = None,
                        objects: Optional[Sequence[Any]] = None) -> DirectedHypotheses:
    if box_on_morphisms is None:
        box_on_morphisms = thin_box_on_morphisms(C, box)
    return DirectedHypotheses(C, box, box_on_morphisms, eta, unit, objects)


def check_directed_hypotheses(C: Category, box: Box, eta: Eta, unit: Any,
                              box_on_morphisms: Optional[BoxOnMorphisms] = None,
                              objects: Optional[Sequence[Any]] = None) -> Dict[str, Any]:
    return directed_hypotheses(C, box, eta, unit, box_on_morphisms, objects).check()


def ainfty_from_directed(C: Category, box: Box, eta: Eta, unit: Any,
                         box_on_morphisms: Optional[BoxOnMorphisms] = None,
                         bound: Optional[int] = None,
                         objects: Optional[Sequence[Any]] = None,
                         verify: bool = True) -> AnData:
    """
    A-infinity data from a directed monoidal category

    mu_i(A_1, ..., A_i) = A_1 box (A_2 box (... box A_i)). The associator
    alpha^{0,b,c} is eta_{B_1, mu(B'), mu(C)} followed by id box alpha^{0,b-1,c},
    and alpha^{a,b,c} is mu_{a+1}(id, ..., id, alpha^{0,b,c}).

    Raises:
        HypothesisViolation: box, eta or the pentagon fail on the object sample
    """
    if bound is None:
        bound = current_setting('WORKING_BOUND')
    if box_on_morphisms is None:
        box_on_morphisms = thin_box_on_morphisms(C, box)

    if verify:
        report = DirectedHypotheses(C, box, box_on_morphisms, eta, unit, objects).check()
        if not report['success']:
            raise HypothesisViolation(f"Directed monoidal hypotheses fail: {report['failure']['kind']}",
                                      report['failure'])
        logger.info(f"Directed hypotheses hold on {report['checked']} instances")

    @lru_cache(maxsize=1 << 16)
    def mu(objs: Objects) -> Any:
        if len(objs) <= 1:
            return objs[0] if objs else unit
        return box(objs[0], mu(objs[1:]))

    def mu_on(mors: Tuple[Any, ...]) -> Any:
        if not mors:
            return C.identity(unit)
        result = mors[-1]
        for f in reversed(mors[:-1]):
            result = box_on_morphisms(f, result)
        return result

    cache: Dict[Tuple[Objects, Objects], Any] = {}

    def alpha_front(b: Objects, c: Objects) -> Any:
        if len(b) <= 1 or not c:
            return C.identity(mu(b + c))
        key = (b, c)
        if key not in cache:
            first = eta(b[0], mu(b[1:]), mu(c))
            rest = box_on_morphisms(C.identity(b[0]), alpha_front(b[1:], c))
            cache[key] = C.compose(rest, first)
        return cache[key]

    def associator(a: Objects, b: Objects, c: Objects) -> Any:
        if len(b) <= 1 or (not a and not c):
            return C.identity(mu(a + b + c))
        return mu_on(tuple(C.identity(x) for x in a) + (alpha_front(b, c),))

    return AnData(C, unit, mu, mu_on, associator, n=None, bound=bound, name='directed')


def check_right_nesting_identities(C: Category, d: AnData, bound: Optional[int] = None,
                                   objects: Optional[Sequence[Any]] = None) -> Dict[str, Any]:
    """
    mu_{a+b}(A, B) = mu_{a+1}(A, mu_b(B)) and
    alpha^{a1+a2,b,c} = mu_{a1+1}(id_{A1}, alpha^{a2,b,c}) as exact equalities
    """
    cap = d.cap if bound is None else min(d.cap, bound)
    sample = list(objects) if objects is not None else C.objects()
    checked = 0

    for sizes in block_shapes(cap, 2):
        for a, b in block_tuples(sample, sizes):
            if len(a) + 1 > cap:
                continue
            checked += 1
            if d.mu(a + b) != d.mu(a + (d.mu(b),)):
                return make_report('right_nesting', checked, witness(
                    'right_nesting_mu', {'blocks': jsonable([a, b])},
                    expected=jsonable(d.mu(a + b)), actual=jsonable(d.mu(a + (d.mu(b),)))))

    for sizes in block_shapes(cap, 4):
        a1, a2, b, c = sizes
        if a1 == 0 or a1 + 1 > cap:
            continue
        for first, second, middle, last in block_tuples(sample, sizes):
            checked += 1
            whole = d.alpha(first + second, middle, last)
            nested = d.mu_on(d.identities(first) + (d.alpha(second, middle, last),))
            if whole != nested:
                return make_report('right_nesting', checked, witness(
                    'right_nesting_alpha', {'blocks': jsonable([first, second, middle, last])},
                    expected=jsonable(nested), actual=jsonable(whole)))

    return make_report('right_nesting', checked)


@register_replay('right_nesting_mu')
def _replay_nesting_mu(instance: Dict[str, Any], data: Optional[AnData] = None, **_) -> bool:
    if data is None:
        raise AssociahedraError("Replaying a right-nesting witness needs the An data")
    a, b = (tuple(block) for block in restore(instance['blocks']))
    return data.mu(a + b) != data.mu(a + (data.mu(b),))


@register_replay('right_nesting_alpha')
def _replay_nesting_alpha(instance: Dict[str, Any], data: Optional[AnData] = None, **_) -> bool:
    if data is None:
        raise AssociahedraError("Replaying a right-nesting witness needs the An data")
    first, second, middle, last = (tuple(block) for block in restore(instance['blocks']))
    nested = data.mu_on(data.identities(first) + (data.alpha(second, middle, last),))
    return data.alpha(first + second, middle, last) != nested
