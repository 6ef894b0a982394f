"""
An-monoidal Coherence

An An-monoidal category carries multiplications mu_k for k <= n with a
strict unit, and directed associators

    alpha^{i,j,k}: mu_{i+1+k}(A, mu_j(B), C) -> mu_{i+j+k}(A, B, C)

subject to unit conditions (1), (2), (i)-(iv) and the exchange squares (v)
and (vi). Such structures are the same thing as actions of the filtered
associahedral operad K^(n); theta_from_an and an_from_theta convert between
the two descriptions.

Everything is finitary: arities are truncated at a working bound N and
object tuples range over the category's object sample.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from config import current_setting

from .categories import Category, check_typed, is_identity
from .cubes import CubeDiagram, check_cube_commutes, failing_face
from .exceptions import (ActionAxiomViolation, ArityMismatchError, AssociahedraError,
                         BoundExceededError, CategoryError, CubeNotCommuting, InvalidWordError,
                         MissingTableEntryError)
from .kposet import (KMorphism, arg_tuples, covers, decompose, enumerate_words, gamma,
                     in_filtration, interval_cube, substitute)
from .reports import make_report, register_replay, witness
from .wordtree import (EmptyTree, ID, IdTree, Leaf, Node, ParenWord, StableTree, ZERO, leaf_range,
                       parse, render, to_tree)

logger = logging.getLogger(__name__)

Objects = Tuple[Any, ...]


def jsonable(x: Any) -> Any:
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return x


def restore(x: Any) -> Any:
    """Inverse of jsonable for object and morphism values"""
    if isinstance(x, list):
        return tuple(restore(v) for v in x)
    return x


@dataclass
class AnData:
    """
    Multiplications and associators of an An-monoidal category

    mu_objects and mu_morphisms take a tuple of any length k <= cap;
    associator takes the three blocks (A, B, C) and returns the component
    alpha^{len A, len B, len C}.
    """
    category: Category
    unit: Any
    mu_objects: Callable[[Objects], Any]
    mu_morphisms: Callable[[Tuple[Any, ...]], Any]
    associator: Callable[[Objects, Objects, Objects], Any]
    n: Optional[int] = None
    bound: int = 6
    name: str = 'an_data'

    @property
    def cap(self) -> int:
        return self.bound if self.n is None else min(self.n, self.bound)

    def _check_arity(self, k: int):
        if k > self.cap:
            raise BoundExceededError(f"Arity {k} is above the working bound {self.cap} of {self.name}")

    def mu(self, objects: Sequence[Any]) -> Any:
        objects = tuple(objects)
        self._check_arity(len(objects))
        return self.mu_objects(objects)

    def mu_on(self, morphisms: Sequence[Any]) -> Any:
        morphisms = tuple(morphisms)
        self._check_arity(len(morphisms))
        return self.mu_morphisms(morphisms)

    def alpha(self, a: Sequence[Any], b: Sequence[Any], c: Sequence[Any]) -> Any:
        a, b, c = tuple(a), tuple(b), tuple(c)
        self._check_arity(len(a) + len(b) + len(c))
        return self.associator(a, b, c)

    def alpha_source(self, a: Objects, b: Objects, c: Objects) -> Any:
        # with B empty, mu_0 is the unit and condition (2) removes it
        if not b:
            return self.mu(a + c)
        return self.mu(a + (self.mu(b),) + c)

    def alpha_target(self, a: Objects, b: Objects, c: Objects) -> Any:
        return self.mu(a + b + c)

    def identities(self, objects: Sequence[Any]) -> Tuple[Any, ...]:
        return tuple(self.category.identity(x) for x in objects)

    @classmethod
    def from_tables(cls, category: Category, unit: Any, mu: Dict[Objects, Any],
                    mu_morphisms: Optional[Dict[Tuple[Any, ...], Any]] = None,
                    alpha: Optional[Dict[Tuple[Objects, Objects, Objects], Any]] = None,
                    n: Optional[int] = None, bound: int = 6, name: str = 'an_tables') -> 'AnData':
        """
        Build AnData from finite tables

        Entries fixed by the axioms may be omitted: mu_0 (the unit), mu_1
        (identity), mu_k on tuples of identities, and the alpha components
        that condition (i) makes identities. Any other missing entry raises
        MissingTableEntryError when it is looked up.
        """
        mu = dict(mu)
        mu_morphisms = dict(mu_morphisms or {})
        alpha = dict(alpha or {})

        def mu_objects(objects: Objects) -> Any:
            if objects in mu:
                return mu[objects]
            if not objects:
                return unit
            if len(objects) == 1:
                return objects[0]
            raise MissingTableEntryError(f"No mu_{len(objects)} entry for {objects!r}")

        def mu_on(morphisms: Tuple[Any, ...]) -> Any:
            if morphisms in mu_morphisms:
                return mu_morphisms[morphisms]
            if not morphisms:
                return category.identity(unit)
            if len(morphisms) == 1:
                return morphisms[0]
            if all(is_identity(category, f) for f in morphisms):
                return category.identity(mu_objects(tuple(category.source(f) for f in morphisms)))
            raise MissingTableEntryError(f"No mu_{len(morphisms)} entry for morphisms {morphisms!r}")

        def associator(a: Objects, b: Objects, c: Objects) -> Any:
            if (a, b, c) in alpha:
                return alpha[(a, b, c)]
            if len(b) <= 1 or (not a and not c):
                return category.identity(mu_objects(a + b + c))
            raise MissingTableEntryError(f"No alpha^{{{len(a)},{len(b)},{len(c)}}} entry for {(a, b, c)!r}")

        return cls(category, unit, mu_objects, mu_on, associator, n=n, bound=bound, name=name)

    def tabulate(self, objects: Optional[Sequence[Any]] = None,
                 morphisms: Optional[Sequence[Any]] = None,
                 include_trivial: bool = False) -> Dict[str, Dict]:
        """
        Materialize mu and alpha over an object sample

        Returns:
            Dictionary with 'mu', 'mu_morphisms' and 'alpha' tables keyed like
            the arguments of from_tables
        """
        objects = list(objects) if objects is not None else self.category.objects()
        morphisms = list(morphisms) if morphisms is not None else self.category.morphisms()
        low = 0 if include_trivial else 2
        tables: Dict[str, Dict] = {'mu': {}, 'mu_morphisms': {}, 'alpha': {}}

        for k in range(low, self.cap + 1):
            for combo in itertools.product(objects, repeat=k):
                tables['mu'][combo] = self.mu(combo)
            for combo in itertools.product(morphisms, repeat=k):
                if include_trivial or not all(is_identity(self.category, f) for f in combo):
                    tables['mu_morphisms'][combo] = self.mu_on(combo)

        for i, j, k in block_shapes(self.cap):
            if not include_trivial and (j <= 1 or (i == 0 and k == 0)):
                continue
            for a, b, c in block_tuples(objects, (i, j, k)):
                tables['alpha'][(a, b, c)] = self.alpha(a, b, c)
        return tables


def block_shapes(total: int, blocks: int = 3) -> Iterator[Tuple[int, ...]]:
    """Every tuple of `blocks` non-negative sizes with sum at most total"""
    for sizes in itertools.product(range(total + 1), repeat=blocks):
        if sum(sizes) <= total:
            yield sizes


def block_tuples(objects: Sequence[Any], sizes: Sequence[int]) -> Iterator[Tuple[Objects, ...]]:
    """Split every object tuple of length sum(sizes) into consecutive blocks"""
    for combo in itertools.product(objects, repeat=sum(sizes)):
        blocks = []
        offset = 0
        for size in sizes:
            blocks.append(tuple(combo[offset:offset + size]))
            offset += size
        yield tuple(blocks)


# Condition evaluators. Each returns None when the instance holds, otherwise
# a dict with the expected and actual values. The checker and the witness
# replay share them.

def _with(objects: Objects, position: int, f: Any, category: Category) -> Tuple[Any, ...]:
    return tuple(f if t == position else category.identity(x) for t, x in enumerate(objects))


def _insert(values: Tuple[Any, ...], position: int, value: Any) -> Tuple[Any, ...]:
    return values[:position] + (value,) + values[position:]


def _mismatch(expected: Any, actual: Any) -> Optional[Dict[str, Any]]:
    if expected == actual:
        return None
    return {'expected': jsonable(expected), 'actual': jsonable(actual)}


def eval_condition_1_object(C: Category, d: AnData, x: Any) -> Optional[Dict[str, Any]]:
    return _mismatch(x, d.mu((x,)))


def eval_condition_1_morphism(C: Category, d: AnData, f: Any) -> Optional[Dict[str, Any]]:
    return _mismatch(f, d.mu_on((f,)))


def eval_functor_identity(C: Category, d: AnData, objects: Objects) -> Optional[Dict[str, Any]]:
    return _mismatch(C.identity(d.mu(objects)), d.mu_on(d.identities(objects)))


def eval_functor_typing(C: Category, d: AnData, objects: Objects, position: int, f: Any) -> Optional[Dict[str, Any]]:
    sources = _insert(objects, position, C.source(f))
    targets = _insert(objects, position, C.target(f))
    image = d.mu_on(_insert(d.identities(objects), position, f))
    problem = check_typed(C, image, d.mu(sources), d.mu(targets))
    if problem:
        return {'expected': jsonable([d.mu(sources), d.mu(targets)]), 'actual': problem}
    return None


def eval_functor_composition(C: Category, d: AnData, objects: Objects, position: int,
                             f: Any, g: Any) -> Optional[Dict[str, Any]]:
    ids = d.identities(objects)
    whole = d.mu_on(_insert(ids, position, C.compose(g, f)))
    parts = C.compose(d.mu_on(_insert(ids, position, g)), d.mu_on(_insert(ids, position, f)))
    return _mismatch(parts, whole)


def _place(values: Tuple[Any, ...], p: int, x: Any, q: int, y: Any) -> Tuple[Any, ...]:
    """Insert x at p and then y at q, p < q, as positions of the result"""
    out = list(values)
    out.insert(p, x)
    out.insert(q, y)
    return tuple(out)


def eval_functor_interchange(C: Category, d: AnData, objects: Objects, p: int, f: Any,
                             q: int, g: Any) -> Optional[Dict[str, Any]]:
    """mu(f at p, g at q) = mu(f at p, id) o mu(id, g at q), p < q"""
    ids = d.identities(objects)
    both = _place(ids, p, f, q, g)
    first = _place(ids, p, C.identity(C.source(f)), q, g)
    second = _place(ids, p, f, q, C.identity(C.target(g)))
    composite = C.compose(d.mu_on(second), d.mu_on(first))
    return _mismatch(composite, d.mu_on(both))


def eval_condition_2_object(C: Category, d: AnData, objects: Objects, position: int) -> Optional[Dict[str, Any]]:
    return _mismatch(d.mu(objects), d.mu(_insert(objects, position, d.unit)))


def eval_condition_2_morphism(C: Category, d: AnData, objects: Objects, at: int, f: Any,
                              position: int) -> Optional[Dict[str, Any]]:
    morphisms = _insert(d.identities(objects), at, f)
    padded = _insert(morphisms, position, C.identity(d.unit))
    return _mismatch(d.mu_on(morphisms), d.mu_on(padded))


def eval_condition_i(C: Category, d: AnData, a: Objects, b: Objects, c: Objects) -> Optional[Dict[str, Any]]:
    return _mismatch(C.identity(d.alpha_target(a, b, c)), d.alpha(a, b, c))


def eval_alpha_typing(C: Category, d: AnData, a: Objects, b: Objects, c: Objects) -> Optional[Dict[str, Any]]:
    component = d.alpha(a, b, c)
    problem = check_typed(C, component, d.alpha_source(a, b, c), d.alpha_target(a, b, c))
    if problem:
        return {'expected': jsonable([d.alpha_source(a, b, c), d.alpha_target(a, b, c)]),
                'actual': problem}
    return None


def eval_naturality(C: Category, d: AnData, a: Objects, b: Objects, c: Objects,
                    position: int, f: Any) -> Optional[Dict[str, Any]]:
    """position indexes the concatenation a + b + c; f replaces that entry"""
    flat = a + b + c
    moved = list(flat)
    before = list(flat)
    before[position] = C.source(f)
    moved[position] = C.target(f)
    sizes = (len(a), len(b), len(c))

    def split(values):
        return (tuple(values[:sizes[0]]), tuple(values[sizes[0]:sizes[0] + sizes[1]]),
                tuple(values[sizes[0] + sizes[1]:]))

    fa, fb, fc = split(_with(tuple(before), position, f, C))
    if fb:
        inner = fa + (d.mu_on(fb),) + fc
    else:
        inner = fa + fc
    left = C.compose(d.alpha(*split(moved)), d.mu_on(inner))
    right = C.compose(d.mu_on(fa + fb + fc), d.alpha(*split(before)))
    return _mismatch(right, left)


def eval_condition_ii(C: Category, d: AnData, a, b, c, e) -> Optional[Dict[str, Any]]:
    return _mismatch(d.alpha(a + b, c, e), d.alpha(a + (d.unit,) + b, c, e))


def eval_condition_iii(C: Category, d: AnData, a, b, c, e) -> Optional[Dict[str, Any]]:
    return _mismatch(d.alpha(a, b, c + e), d.alpha(a, b, c + (d.unit,) + e))


def eval_condition_iv(C: Category, d: AnData, a, b, c, e) -> Optional[Dict[str, Any]]:
    return _mismatch(d.alpha(a, b + c, e), d.alpha(a, b + (d.unit,) + c, e))


def eval_condition_v(C: Category, d: AnData, a, b, c, dd, e) -> Optional[Dict[str, Any]]:
    # the right-hand arrow is typed mu(A,B,C,mu(D),E) -> mu(A,B,C,D,E)
    top = d.alpha(a, b, c + (d.mu(dd),) + e)
    right = d.alpha(a + b + c, dd, e)
    left = d.alpha(a + (d.mu(b),) + c, dd, e)
    bottom = d.alpha(a, b, c + dd + e)
    return _mismatch(C.compose(bottom, left), C.compose(right, top))


def eval_condition_vi(C: Category, d: AnData, a, b, c, dd, e) -> Optional[Dict[str, Any]]:
    top = d.mu_on(d.identities(a) + (d.alpha(b, c, dd),) + d.identities(e))
    right = d.alpha(a, b + c + dd, e)
    left = d.alpha(a, b + (d.mu(c),) + dd, e)
    bottom = d.alpha(a + b, c, dd + e)
    return _mismatch(C.compose(bottom, left), C.compose(right, top))


EVALUATORS = {
    'an_condition_1_object': eval_condition_1_object,
    'an_condition_1_morphism': eval_condition_1_morphism,
    'an_functor_identity': eval_functor_identity,
    'an_functor_typing': eval_functor_typing,
    'an_functor_composition': eval_functor_composition,
    'an_functor_interchange': eval_functor_interchange,
    'an_condition_2_object': eval_condition_2_object,
    'an_condition_2_morphism': eval_condition_2_morphism,
    'an_condition_i': eval_condition_i,
    'an_alpha_typing': eval_alpha_typing,
    'an_naturality': eval_naturality,
    'an_condition_ii': eval_condition_ii,
    'an_condition_iii': eval_condition_iii,
    'an_condition_iv': eval_condition_iv,
    'an_condition_v': eval_condition_v,
    'an_condition_vi': eval_condition_vi
}


def _make_replay(kind: str):
    def replay(instance: Dict[str, Any], category: Category = None, data: AnData = None, **_) -> bool:
        if category is None or data is None:
            raise AssociahedraError(f"Replaying '{kind}' needs the category and the An data")
        args = [restore(x) for x in instance['args']]
        return EVALUATORS[kind](category, data, *args) is not None
    return replay


for _kind in EVALUATORS:
    register_replay(_kind)(_make_replay(_kind))


class _Stop(Exception):
    def __init__(self, failure: Dict[str, Any]):
        self.failure = failure


class AnAxiomChecker:
    """
    Exhaustive An axiom checker

    Conditions run in a fixed order so a failure is attributed to the
    earliest violated hypothesis: condition (1), functoriality of mu,
    condition (2), condition (i), typing of alpha, naturality of alpha,
    (ii)-(iv), then (v) and (vi).

    In a thin category parallel morphisms are equal. Once every component
    is well typed, naturality, (ii)-(vi), composition and interchange for
    mu, and the morphism half of condition (2) hold automatically, so they
    are not instantiated; condition (i) and the typing of alpha then share
    a single pass over the object tuples.
    """

    def __init__(self, category: Category, data: AnData, bound: Optional[int] = None,
                 objects: Optional[Sequence[Any]] = None):
        self.category = category
        self.data = data
        self.cap = data.cap if bound is None else min(data.cap, bound)
        self.objects = list(objects) if objects is not None else category.objects()
        sample = set(self.objects)
        self.generators = [f for f in category.generating_morphisms()
                           if category.source(f) in sample and category.target(f) in sample]
        self.checked = 0

    def _run(self, kind: str, *args):
        self.checked += 1
        result = EVALUATORS[kind](self.category, self.data, *args)
        if result is not None:
            failure = witness(kind, {'args': [jsonable(x) for x in args]},
                              expected=result['expected'], actual=result['actual'])
            raise _Stop(failure)

    def _tuples(self, k: int) -> Iterator[Objects]:
        return itertools.product(self.objects, repeat=k)

    def check(self) -> Dict[str, Any]:
        if self.category.is_thin:
            logger.debug(f"{self.category.name} is thin; naturality and (ii)-(vi) follow from typing")
            steps = [self._condition_1, self._functoriality, self._condition_2, self._thin_associators]
        else:
            steps = [self._condition_1, self._functoriality, self._condition_2, self._condition_i,
                     self._alpha_typing, self._naturality, self._unit_squares, self._exchange_squares]

        try:
            for step in steps:
                step()
        except _Stop as stop:
            return make_report('an_axioms', self.checked, stop.failure)
        return make_report('an_axioms', self.checked)

    def _condition_1(self):
        for x in self.objects:
            self._run('an_condition_1_object', x)
        for f in self.generators:
            self._run('an_condition_1_morphism', f)

    def _functoriality(self):
        for k in range(self.cap + 1):
            for objects in self._tuples(k):
                self._run('an_functor_identity', objects)
        if self.category.is_thin:
            self._thin_functor_typing()
            return
        for k in range(1, self.cap + 1):
            for position in range(k):
                for rest in self._tuples(k - 1):
                    for f in self.generators:
                        self._run('an_functor_typing', rest, position, f)
        composable = [(f, g) for f in self.generators for g in self.generators
                      if self.category.target(f) == self.category.source(g)]
        for k in range(1, self.cap + 1):
            for position in range(k):
                for rest in self._tuples(k - 1):
                    for f, g in composable:
                        self._run('an_functor_composition', rest, position, f, g)
        for k in range(2, self.cap + 1):
            for p in range(k):
                for q in range(p + 1, k):
                    for rest in self._tuples(k - 2):
                        for f in self.generators:
                            for g in self.generators:
                                self._run('an_functor_interchange', rest, p, f, q, g)

    def _thin_functor_typing(self):
        C, d = self.category, self.data
        ends = [(f, C.source(f), C.target(f)) for f in self.generators]
        for k in range(1, self.cap + 1):
            for rest in self._tuples(k - 1):
                ids = d.identities(rest)
                for position in range(k):
                    for f, source, target in ends:
                        self.checked += 1
                        image = d.mu_on(_insert(ids, position, f))
                        if image not in C.hom(d.mu(_insert(rest, position, source)),
                                              d.mu(_insert(rest, position, target))):
                            self._run('an_functor_typing', rest, position, f)

    def _condition_2(self):
        unit_id = self.category.identity(self.data.unit)
        for k in range(1, self.cap + 1):
            for objects in self._tuples(k - 1):
                for position in range(k):
                    self._run('an_condition_2_object', objects, position)
            if self.category.is_thin:
                continue
            for rest in (self._tuples(k - 2) if k >= 2 else []):
                for at in range(k - 1):
                    for f in self.generators + [unit_id]:
                        for position in range(k):
                            self._run('an_condition_2_morphism', rest, at, f, position)

    def _shapes(self) -> Iterator[Tuple[int, ...]]:
        return block_shapes(self.cap)

    def _condition_i(self):
        for i, j, k in self._shapes():
            if j <= 1 or (i == 0 and k == 0):
                for a, b, c in block_tuples(self.objects, (i, j, k)):
                    self._run('an_condition_i', a, b, c)

    def _alpha_typing(self):
        for shape in self._shapes():
            for a, b, c in block_tuples(self.objects, shape):
                self._run('an_alpha_typing', a, b, c)

    def _thin_associators(self):
        """
        Condition (i) and alpha typing in one pass per flat tuple

        A condition (i) failure anywhere is reported ahead of a typing
        failure, matching the order of the general checker.
        """
        C, d = self.category, self.data
        inner: Dict[Objects, Any] = {}
        mistyped = None
        for total in range(self.cap + 1):
            splits = [(i, i + j) for i in range(total + 1) for j in range(total - i + 1)]
            for flat in self._tuples(total):
                target = d.mu(flat)
                for i, end in splits:
                    a, b, c = flat[:i], flat[i:end], flat[end:]
                    self.checked += 1
                    component = d.associator(a, b, c)
                    if end - i <= 1 or (i == 0 and end == total):
                        if component != C.identity(target):
                            self._run('an_condition_i', a, b, c)
                        continue
                    if mistyped is not None:
                        continue
                    value = inner.get(b)
                    if value is None:
                        value = inner[b] = d.mu(b)
                    if component not in C.hom(d.mu(a + (value,) + c), target):
                        mistyped = (a, b, c)
        if mistyped is not None:
            self._run('an_alpha_typing', *mistyped)

    def _naturality(self):
        for shape in self._shapes():
            total = sum(shape)
            if total == 0:
                continue
            for blocks in block_tuples(self.objects, shape):
                flat = blocks[0] + blocks[1] + blocks[2]
                for position in range(total):
                    for f in self.generators:
                        if self.category.source(f) != flat[position]:
                            continue
                        self._run('an_naturality', *blocks, position, f)

    def _unit_squares(self):
        for sizes in block_shapes(self.cap - 1, 4):
            for blocks in block_tuples(self.objects, sizes):
                self._run('an_condition_ii', *blocks)
                self._run('an_condition_iii', *blocks)
                self._run('an_condition_iv', *blocks)

    def _exchange_squares(self):
        for a, b, c, dd, e in block_shapes(self.cap, 5):
            arities_v = [a + c + e + 2, a + b + c + e + 1, a + c + dd + e + 1]
            arities_vi = [a + e + 1, a + b + dd + e + 1, b + c + dd]
            for blocks in block_tuples(self.objects, (a, b, c, dd, e)):
                if max(arities_v) <= self.cap:
                    self._run('an_condition_v', *blocks)
                if max(arities_vi) <= self.cap:
                    self._run('an_condition_vi', *blocks)


def check_an_axioms(C: Category, d: AnData, bound: Optional[int] = None,
                    objects: Optional[Sequence[Any]] = None) -> Dict[str, Any]:
    """Exhaustively instantiate the An axioms over the object sample"""
    return AnAxiomChecker(C, d, bound=bound, objects=objects).check()


# K-algebras

class KAlgebra:
    """
    An action theta of K^(n) on a category

    theta(w, objects) is the object value at a word, theta_morphism(f,
    objects) the value at a morphism of K_m with fixed objects, and
    theta_tuple(w, morphisms) the value at a word with varying morphisms.
    """

    def __init__(self, category: Category, n: Optional[int] = None, bound: int = 6,
                 name: str = 'k_algebra'):
        self.category = category
        self.n = n
        self.bound = bound
        self.name = name

    def _admit(self, w: ParenWord, count: int):
        if count != w.length:
            raise ArityMismatchError(f"{render(w)!r} has arity {w.length}, got {count} arguments")
        if w.length > self.bound:
            raise BoundExceededError(f"Arity {w.length} is above the working bound {self.bound}")
        if not in_filtration(w, self.n):
            raise InvalidWordError(f"{render(w)!r} is outside filtration {self.n}")

    @property
    def unit(self) -> Any:
        return self.theta(ZERO, ())

    def theta(self, w: ParenWord, objects: Sequence[Any]) -> Any:
        raise NotImplementedError

    def theta_morphism(self, f: KMorphism, objects: Sequence[Any]) -> Any:
        raise NotImplementedError

    def theta_tuple(self, w: ParenWord, morphisms: Sequence[Any]) -> Any:
        raise NotImplementedError

    def theta_full(self, f: KMorphism, morphisms: Sequence[Any]) -> Any:
        """Value at (f, morphisms): theta(target, morphisms) after theta(f, sources)"""
        sources = tuple(self.category.source(g) for g in morphisms)
        return self.category.compose(self.theta_tuple(f.target, morphisms),
                                     self.theta_morphism(f, sources))


class AnAlgebra(KAlgebra):
    """The action built from An data by tree recursion"""

    def __init__(self, category: Category, data: AnData, verify_cubes: bool = True):
        super().__init__(category, n=data.n, bound=data.bound, name=f"theta({data.name})")
        self.data = data
        self.verify_cubes = verify_cubes
        self._morphism_cache: Dict[Tuple[KMorphism, Objects], Any] = {}

    def _value(self, tree: StableTree, objects: Objects) -> Any:
        if isinstance(tree, EmptyTree):
            return self.data.unit
        if isinstance(tree, IdTree):
            return objects[0]
        if isinstance(tree, Leaf):
            return objects[tree.index - 1]
        return self.data.mu(tuple(self._value(c, objects) for c in tree.children))

    def _value_on(self, tree: StableTree, morphisms: Tuple[Any, ...]) -> Any:
        if isinstance(tree, EmptyTree):
            return self.category.identity(self.data.unit)
        if isinstance(tree, IdTree):
            return morphisms[0]
        if isinstance(tree, Leaf):
            return morphisms[tree.index - 1]
        return self.data.mu_on(tuple(self._value_on(c, morphisms) for c in tree.children))

    def theta(self, w: ParenWord, objects: Sequence[Any]) -> Any:
        objects = tuple(objects)
        self._admit(w, len(objects))
        return self._value(to_tree(w), objects)

    def theta_tuple(self, w: ParenWord, morphisms: Sequence[Any]) -> Any:
        morphisms = tuple(morphisms)
        self._admit(w, len(morphisms))
        return self._value_on(to_tree(w), morphisms)

    def _shrink(self, tree: Node, interval: Tuple[int, int], objects: Objects) -> Any:
        """Value at the indecomposable morphism contracting the node spanning `interval`"""
        children = tree.children
        for j, child in enumerate(children):
            if not isinstance(child, Node):
                continue
            lo, hi = leaf_range(child)
            if (lo, hi) == interval:
                a = tuple(self._value(c, objects) for c in children[:j])
                b = tuple(self._value(c, objects) for c in child.children)
                c = tuple(self._value(c, objects) for c in children[j + 1:])
                return self.data.alpha(a, b, c)
            if lo <= interval[0] and interval[1] <= hi:
                inner = self._shrink(child, interval, objects)
                parts = tuple(inner if t == j else self.category.identity(self._value(other, objects))
                              for t, other in enumerate(children))
                return self.data.mu_on(parts)
        raise InvalidWordError(f"No node spans {interval}")

    def theta_indecomposable(self, f: KMorphism, objects: Objects) -> Any:
        (interval,) = f.dropped
        return self._shrink(to_tree(f.source), interval, objects)

    def theta_morphism(self, f: KMorphism, objects: Sequence[Any]) -> Any:
        objects = tuple(objects)
        self._admit(f.target, len(objects))
        key = (f, objects)
        if key in self._morphism_cache:
            return self._morphism_cache[key]

        result = self.category.identity(self.theta(f.source, objects))
        for step in decompose(f):
            result = self.category.compose(self.theta_indecomposable(step, objects), result)

        if self.verify_cubes and len(f.dropped) >= 2:
            self._verify_cube(f, objects)

        self._morphism_cache[key] = result
        return result

    def interval_diagram(self, f: KMorphism, objects: Objects) -> CubeDiagram:
        """The cube of theta values over the interval [source, target]"""
        cube = interval_cube(f)
        d = cube.dimension

        def word(vertex):
            return cube.word_for([iv for iv, bit in zip(cube.dropped, vertex) if bit == 0])

        vertices = {}
        edges = {}
        for vertex in itertools.product((0, 1), repeat=d):
            vertices[vertex] = self.theta(word(vertex), objects)
            for i in range(d):
                if vertex[i] == 0:
                    following = vertex[:i] + (1,) + vertex[i + 1:]
                    step = KMorphism(word(vertex), word(following))
                    edges[(vertex, i)] = self.theta_indecomposable(step, objects)
        return CubeDiagram(self.category, d, vertices, edges)

    def _verify_cube(self, f: KMorphism, objects: Objects):
        diagram = self.interval_diagram(f, objects)
        faces_ok, all_paths_equal = check_cube_commutes(diagram)
        if not (faces_ok and all_paths_equal):
            face = failing_face(diagram)
            raise CubeNotCommuting(
                f"Factorizations of {f} disagree on {objects!r}",
                witness('theta_cube', {'source': render(f.source), 'target': render(f.target),
                                       'objects': jsonable(objects),
                                       'face': jsonable(face) if face else None}))


class StrictAlgebra(KAlgebra):
    """
    The action of a strict monoid: every word acts as the full product and
    every morphism of K_m acts as an identity
    """

    def __init__(self, category: Category, product: Callable[[Objects], Any],
                 product_on_morphisms: Optional[Callable[[Tuple[Any, ...]], Any]] = None,
                 n: Optional[int] = None, bound: int = 6, name: str = 'strict'):
        super().__init__(category, n=n, bound=bound, name=name)
        self.product = product
        self.product_on_morphisms = product_on_morphisms

    def theta(self, w: ParenWord, objects: Sequence[Any]) -> Any:
        objects = tuple(objects)
        self._admit(w, len(objects))
        return self.product(objects)

    def theta_morphism(self, f: KMorphism, objects: Sequence[Any]) -> Any:
        objects = tuple(objects)
        self._admit(f.target, len(objects))
        return self.category.identity(self.product(objects))

    def theta_tuple(self, w: ParenWord, morphisms: Sequence[Any]) -> Any:
        morphisms = tuple(morphisms)
        self._admit(w, len(morphisms))
        if self.product_on_morphisms is not None:
            return self.product_on_morphisms(morphisms)
        if not all(is_identity(self.category, g) for g in morphisms):
            raise CategoryError("A strict algebra without a morphism product only acts on identities")
        return self.category.identity(self.product(tuple(self.category.source(g) for g in morphisms)))


def strict_algebra(C: Category, product: Callable[[Objects], Any],
                   product_on_morphisms: Optional[Callable] = None,
                   n: Optional[int] = None, bound: Optional[int] = None) -> StrictAlgebra:
    if bound is None:
        bound = current_setting('WORKING_BOUND')
    return StrictAlgebra(C, product, product_on_morphisms, n=n, bound=bound)


def theta_from_an(C: Category, d: AnData, verify_cubes: Optional[bool] = None) -> AnAlgebra:
    """K^(n)-action from An data; factorization cubes are checked as they are met"""
    if verify_cubes is None:
        verify_cubes = current_setting('VERIFY_THETA_CUBES')
    return AnAlgebra(C, d, verify_cubes=verify_cubes)


def an_from_theta(t: KAlgebra, objects: Optional[Sequence[Any]] = None) -> AnData:
    """
    Restrict an action to terminal words and single-interval drops

    mu_i is theta at x1...xi and alpha^{i,j,k} is theta at the morphism
    dropping [i+1, i+j]. The unit law of the action is checked on the object
    sample first, and each extracted associator is checked against its
    expected source.
    """
    C = t.category
    sample = list(objects) if objects is not None else C.objects()
    for x in sample:
        if t.theta(ID, (x,)) != x:
            raise ActionAxiomViolation(
                f"theta at the identity word moves {x!r}",
                witness('action_unit', {'object': jsonable(x)}, expected=jsonable(x),
                        actual=jsonable(t.theta(ID, (x,)))))

    def mu_objects(objs: Objects) -> Any:
        return t.theta(ParenWord.terminal(len(objs)), objs)

    def mu_morphisms(mors: Tuple[Any, ...]) -> Any:
        return t.theta_tuple(ParenWord.terminal(len(mors)), mors)

    def associator(a: Objects, b: Objects, c: Objects) -> Any:
        i, j, k = len(a), len(b), len(c)
        m = i + j + k
        if j <= 1 or (i == 0 and k == 0):
            return C.identity(mu_objects(a + b + c))
        source = ParenWord(m, ((i + 1, i + j),))
        component = t.theta_morphism(KMorphism(source, ParenWord.terminal(m)), a + b + c)
        expected = mu_objects(a + (mu_objects(b),) + c)
        if C.source(component) != expected:
            raise ActionAxiomViolation(
                f"theta at {render(source)} does not start at mu(A, mu(B), C)",
                witness('action_alpha_source', {'blocks': jsonable([a, b, c])},
                        expected=jsonable(expected), actual=jsonable(C.source(component))))
        return component

    return AnData(C, t.unit, mu_objects, mu_morphisms, associator, n=t.n, bound=t.bound,
                  name=f"restricted({t.name})")


def compare_an_data(first: AnData, second: AnData, objects: Optional[Sequence[Any]] = None,
                    bound: Optional[int] = None) -> Dict[str, Any]:
    """Table equality of mu, mu on generating morphisms, and alpha"""
    C = first.category
    cap = min(first.cap, second.cap) if bound is None else min(first.cap, second.cap, bound)
    sample = list(objects) if objects is not None else C.objects()
    sample_set = set(sample)
    generators = [f for f in C.generating_morphisms()
                  if C.source(f) in sample_set and C.target(f) in sample_set]
    checked = 0

    def differ(what, key, x, y):
        return make_report('an_round_trip', checked, witness(
            'an_tables_differ', {'table': what, 'key': jsonable(key)},
            expected=jsonable(x), actual=jsonable(y)))

    if first.unit != second.unit:
        return differ('unit', [], first.unit, second.unit)

    for k in range(cap + 1):
        for objs in itertools.product(sample, repeat=k):
            checked += 1
            if first.mu(objs) != second.mu(objs):
                return differ('mu', objs, first.mu(objs), second.mu(objs))
            for position in range(k):
                for f in generators:
                    if C.source(f) != objs[position]:
                        continue
                    checked += 1
                    mors = _with(objs, position, f, C)
                    if first.mu_on(mors) != second.mu_on(mors):
                        return differ('mu_morphisms', mors, first.mu_on(mors), second.mu_on(mors))

    for shape in block_shapes(cap):
        for a, b, c in block_tuples(sample, shape):
            checked += 1
            x, y = first.alpha(a, b, c), second.alpha(a, b, c)
            if x != y:
                return differ('alpha', [a, b, c], x, y)

    return make_report('an_round_trip', checked)


def _action_instances(n: Optional[int], bound: int) -> Iterator[Tuple[ParenWord, Tuple[ParenWord, ...]]]:
    """
    Every single-slot substitution s o_i a, then every tuple of positive
    arguments, with the composite inside the bound

    The operad laws write gamma(s; T) as a fold of single-slot compositions,
    so compatibility on these instances and on the unit gives it for all.
    """
    for m in range(1, bound + 1):
        for s in enumerate_words(m, n):
            for i in range(1, m + 1):
                for size in range(bound - m + 2):
                    for a in enumerate_words(size, n):
                        yield s, substitute(m, i, a)
    for m in range(2, bound + 1):
        for s in enumerate_words(m, n):
            for args in arg_tuples(m, bound, min_length=1):
                if all(in_filtration(a, n) for a in args):
                    yield s, args


def check_action_compatibility(t: KAlgebra, bound: int = 5,
                               objects: Optional[Sequence[Any]] = None) -> Dict[str, Any]:
    """
    theta(gamma(s; T), A) = theta(s; theta(T_1, A_1), ...) on objects, plus the
    same compatibility for covers of s and covers of each T_i
    """
    C = t.category
    sample = list(objects) if objects is not None else C.objects()
    bound = min(bound, t.bound)
    checked = 0

    def fail(kind, s, args, objs, x, y):
        return make_report('action_compatibility', checked, witness(
            kind, {'s': render(s), 'args': [render(a) for a in args], 'objects': jsonable(objs)},
            expected=jsonable(x), actual=jsonable(y)))

    for x in sample:
        checked += 1
        if t.theta(ID, (x,)) != x:
            return make_report('action_compatibility', checked, witness(
                'action_unit', {'object': jsonable(x)}, expected=jsonable(x),
                actual=jsonable(t.theta(ID, (x,)))))

    for s, args in _action_instances(t.n, bound):
        m = s.length
        composite = gamma(s, args)
        for objs in itertools.product(sample, repeat=composite.length):
            blocks = _blocks(objs, args)
            inner = tuple(t.theta(a, block) for a, block in zip(args, blocks))
            checked += 1
            lhs, rhs = t.theta(composite, objs), t.theta(s, inner)
            if lhs != rhs:
                return fail('action_objects', s, args, objs, rhs, lhs)

            for f in covers(s):
                if not in_filtration(f.target, t.n):
                    continue
                checked += 1
                g = KMorphism(composite, gamma(f.target, args))
                lhs, rhs = t.theta_morphism(g, objs), t.theta_morphism(f, inner)
                if lhs != rhs:
                    return fail('action_outer_morphism', s, args, objs, rhs, lhs)
            for i, a in enumerate(args):
                for h in covers(a):
                    if not in_filtration(h.target, t.n):
                        continue
                    checked += 1
                    moved = args[:i] + (h.target,) + args[i + 1:]
                    g = KMorphism(composite, gamma(s, moved))
                    mors = tuple(t.theta_morphism(h, blocks[i]) if q == i else C.identity(inner[q])
                                 for q in range(m))
                    lhs, rhs = t.theta_morphism(g, objs), t.theta_tuple(s, mors)
                    if lhs != rhs:
                        return fail('action_inner_morphism', s, args, objs, rhs, lhs)

    logger.info(f"Action compatibility holds up to arity {bound} ({checked} instances)")
    return make_report('action_compatibility', checked)


def _blocks(objs: Objects, args: Sequence[ParenWord]) -> List[Objects]:
    blocks = []
    offset = 0
    for a in args:
        blocks.append(tuple(objs[offset:offset + a.length]))
        offset += a.length
    return blocks


def _replay_action(instance: Dict[str, Any], algebra: KAlgebra = None, **_) -> bool:
    if algebra is None:
        raise AssociahedraError("Replaying an action witness needs the algebra")
    s = parse(instance['s'])
    args = tuple(parse(a) for a in instance['args'])
    objs = restore(instance['objects'])
    blocks = _blocks(objs, args)
    inner = tuple(algebra.theta(a, block) for a, block in zip(args, blocks))
    if algebra.theta(gamma(s, args), objs) != algebra.theta(s, inner):
        return True
    composite = gamma(s, args)
    for f in covers(s):
        if in_filtration(f.target, algebra.n) and \
                algebra.theta_morphism(KMorphism(composite, gamma(f.target, args)), objs) != \
                algebra.theta_morphism(f, inner):
            return True
    for i, a in enumerate(args):
        for h in covers(a):
            if not in_filtration(h.target, algebra.n):
                continue
            moved = args[:i] + (h.target,) + args[i + 1:]
            mors = tuple(algebra.theta_morphism(h, blocks[i]) if q == i
                         else algebra.category.identity(inner[q]) for q in range(len(args)))
            if algebra.theta_morphism(KMorphism(composite, gamma(s, moved)), objs) != \
                    algebra.theta_tuple(s, mors):
                return True
    return False


for _kind in ('action_objects', 'action_outer_morphism', 'action_inner_morphism'):
    register_replay(_kind)(_replay_action)


def _needs_algebra(algebra: Optional[KAlgebra]) -> KAlgebra:
    if algebra is None:
        raise AssociahedraError("Replaying an action witness needs the algebra")
    return algebra


@register_replay('action_unit')
def _replay_action_unit(instance: Dict[str, Any], algebra: KAlgebra = None, **_) -> bool:
    x = restore(instance['object'])
    return _needs_algebra(algebra).theta(ID, (x,)) != x


@register_replay('action_alpha_source')
def _replay_alpha_source(instance: Dict[str, Any], algebra: KAlgebra = None, **_) -> bool:
    t = _needs_algebra(algebra)
    a, b, c = (tuple(block) for block in restore(instance['blocks']))
    m = len(a) + len(b) + len(c)
    source = ParenWord(m, ((len(a) + 1, len(a) + len(b)),))
    component = t.theta_morphism(KMorphism(source, ParenWord.terminal(m)), a + b + c)
    terminal = ParenWord.terminal
    expected = t.theta(terminal(len(a) + 1 + len(c)), a + (t.theta(terminal(len(b)), b),) + c)
    return t.category.source(component) != expected


@register_replay('theta_cube')
def _replay_theta_cube(instance: Dict[str, Any], algebra: KAlgebra = None, **_) -> bool:
    t = _needs_algebra(algebra)
    if not isinstance(t, AnAlgebra):
        raise AssociahedraError("Factorization cubes exist only for actions built from An data")
    f = KMorphism(parse(instance['source']), parse(instance['target']))
    faces_ok, all_paths_equal = check_cube_commutes(t.interval_diagram(f, restore(instance['objects'])))
    return not (faces_ok and all_paths_equal)


@register_replay('an_tables_differ')
def _replay_tables_differ(instance: Dict[str, Any], first: AnData = None, second: AnData = None,
                          **_) -> bool:
    if first is None or second is None:
        raise AssociahedraError("Replaying a table difference needs both An data")
    table, key = instance['table'], restore(instance['key'])
    if table == 'unit':
        return first.unit != second.unit
    if table == 'mu':
        return first.mu(key) != second.mu(key)
    if table == 'mu_morphisms':
        return first.mu_on(key) != second.mu_on(key)
    if table == 'alpha':
        return first.alpha(*key) != second.alpha(*key)
    raise AssociahedraError(f"Unknown table {table!r}")
