"""
Rectification

The bimodule of rooted trees (non-root nodes have at least two inputs, the
root may have any number) carries a right action of the associahedral
operad by grafting that never deletes the root, and a left action of the
associative operad by merging roots. Tensoring it with a K-algebra gives a
strictly monoidal category MC, modelled here in normal form:

- objects are sequences of non-unit objects
- a morphism S -> T splits T into len(S) contiguous, possibly empty blocks
  and gives components S_i -> mu(block_i)
- tensor is concatenation
"""

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from .categories import Category, check_typed, is_identity
from .coherence import KAlgebra, Objects, jsonable, restore
from .cubes import _UnionFind
from .exceptions import ArityMismatchError, CategoryError, InvalidTreeError
from .kposet import (KMorphism, arg_tuples, enumerate_words, fold_partial, graft_spans, partial_law_instances,
                     partial_law_sides, split_compose, substitute)
from .reports import combine_reports, make_report, register_replay, witness
from .wordtree import (EmptyTree, ID, IdTree, Interval, Leaf, Node, ParenWord, ZERO, build_children,
                       canonical_json, canonical_order, from_tree, leaf_count, leaf_range, nodes, parse,
                       relabel, render, to_tree, tree_from_json, tree_to_json)

logger = logging.getLogger(__name__)

Child = Union[Leaf, Node]


def _relabel_forest(children: Sequence[Child]) -> Tuple[Child, ...]:
    out = []
    start = 1
    for child in children:
        out.append(relabel(child, start))
        start += leaf_count(child)
    return tuple(out)


@dataclass(frozen=True)
class RootedKTree:
    """A root together with its ordered children, leaves numbered 1..length"""
    children: Tuple[Child, ...] = ()

    def __post_init__(self):
        children = tuple(self.children)
        object.__setattr__(self, 'children', children)
        for child in children:
            if not isinstance(child, (Leaf, Node)):
                raise InvalidTreeError(f"Root child must be a Leaf or Node, got {child!r}")
        labels = [leaf.index for child in children for leaf in _leaves(child)]
        if labels != list(range(1, len(labels) + 1)):
            raise InvalidTreeError(f"Leaves must be labelled 1..{len(labels)} in order, got {labels}")

    @property
    def length(self) -> int:
        return sum(leaf_count(c) for c in self.children)

    @property
    def intervals(self) -> frozenset:
        """Leaf ranges of the non-root nodes"""
        return frozenset(leaf_range(n) for child in self.children for n in nodes(child))

    def to_json(self) -> Dict[str, Any]:
        return {'root': [tree_to_json(c) for c in self.children]}

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> 'RootedKTree':
        if not isinstance(data, dict) or not isinstance(data.get('root'), list):
            raise InvalidTreeError(f"Expected {{'root': [...]}}, got {data!r}")
        return cls(tuple(tree_from_json(c) for c in data['root']))

    def __str__(self) -> str:
        return canonical_json(self.to_json())


def _leaves(t: Child) -> Iterator[Leaf]:
    if isinstance(t, Leaf):
        yield t
    else:
        for c in t.children:
            yield from _leaves(c)


BARE_ROOT = RootedKTree(())
UNARY_ROOT = RootedKTree((Leaf(1),))


def root_corolla(k: int) -> RootedKTree:
    return RootedKTree(tuple(Leaf(i) for i in range(1, k + 1)))


def root_children(t: RootedKTree) -> Tuple[Child, ...]:
    return t.children


def hat_key(t: RootedKTree) -> str:
    return str(t)


def hat_from_spans(length: int, spans: Iterable[Interval]) -> RootedKTree:
    """The rooted tree whose non-root nodes have exactly the given leaf spans"""
    return RootedKTree(tuple(build_children(1, length, canonical_order(spans))))


@lru_cache(maxsize=1 << 16)
def _right_action(t: RootedKTree, args: Tuple[ParenWord, ...]) -> RootedKTree:
    total, spans = graft_spans(t.intervals, args)
    return hat_from_spans(total, (iv for iv in spans if iv[1] - iv[0] + 1 >= 2))


def right_action(t: RootedKTree, args: Sequence[ParenWord]) -> RootedKTree:
    """Graft args onto the leaves of t; the root survives even with 0 or 1 inputs"""
    args = tuple(args)
    if len(args) != t.length:
        raise ArityMismatchError(f"Right action needs {t.length} arguments, got {len(args)}")
    return _right_action(t, args)


def right_partial(t: RootedKTree, i: int, a: ParenWord) -> RootedKTree:
    """t o_i a: graft a onto leaf i of t"""
    if not 1 <= i <= t.length:
        raise ArityMismatchError(f"Slot {i} is outside 1..{t.length}")
    return right_action(t, substitute(t.length, i, a))


def left_action(parts: Sequence[RootedKTree]) -> RootedKTree:
    """Merge the roots of parts into a single root"""
    return RootedKTree(_relabel_forest([c for p in parts for c in p.children]))


def functor_I(s: ParenWord) -> RootedKTree:
    """Put a unary root below the tree of s"""
    tree = to_tree(s)
    if isinstance(tree, EmptyTree):
        return BARE_ROOT
    if isinstance(tree, IdTree):
        return UNARY_ROOT
    return RootedKTree((tree,))


def functor_E(t: RootedKTree) -> ParenWord:
    """Delete a root with fewer than two inputs and read the result as a stable tree"""
    if not t.children:
        return ZERO
    if len(t.children) == 1:
        child = t.children[0]
        return ID if isinstance(child, Leaf) else from_tree(child)
    return from_tree(Node(t.children))


def contract_root_edge(t: RootedKTree, j: int) -> RootedKTree:
    """Shrink the edge between the root and its j-th child (0-based) into the root"""
    child = t.children[j]
    if not isinstance(child, Node):
        raise InvalidTreeError(f"Child {j} of the root is a leaf; only edges to nodes contract")
    return RootedKTree(t.children[:j] + child.children + t.children[j + 1:])


def leq_hat(a: RootedKTree, b: RootedKTree) -> bool:
    """a <= b iff b comes from a by shrinking edges, root edges included"""
    return a.length == b.length and b.intervals <= a.intervals


def enumerate_hat(k: int) -> List[RootedKTree]:
    """Every rooted tree with k leaves; 2 |K_k| of them for k >= 2"""
    if k == 0:
        return [BARE_ROOT]
    if k == 1:
        return [UNARY_ROOT]
    found = []
    for w in enumerate_words(k):
        tree = to_tree(w)
        found.append(RootedKTree(tree.children))
        found.append(RootedKTree((tree,)))
    return sorted(found, key=hat_key)


def _hat_up_to(bound: int) -> List[RootedKTree]:
    return [t for k in range(bound + 1) for t in enumerate_hat(k)]


def _words(args: Sequence[ParenWord]) -> List[str]:
    return [render(a) for a in args]


def check_bimodule_laws(bound: int = 5) -> Dict[str, Any]:
    """
    Right unit and associativity, left unit and associativity, and the
    exchange law between the two actions, for every tree with at most
    `bound` leaves

    Right associativity is reduced to single-leaf grafting the same way as
    check_operad_laws: each right action must equal the fold of its
    single-leaf graftings, which must satisfy the sequential and parallel
    laws. The exchange law is checked on single-leaf graftings, from which
    the general case follows through the fold.
    """
    checked = 0

    def fail(kind, instance, expected, actual):
        return make_report('bimodule_laws', checked, witness(kind, instance, expected=str(expected),
                                                              actual=str(actual)))

    trees = _hat_up_to(bound)
    by_length: Dict[int, List[RootedKTree]] = {}
    for t in trees:
        by_length.setdefault(t.length, []).append(t)
        checked += 1
        unit_args = [ID] * t.length
        if right_action(t, unit_args) != t:
            return fail('right_unit', {'t': t.to_json()}, t, right_action(t, unit_args))
        checked += 1
        if left_action([t]) != t or left_action([BARE_ROOT, t]) != t or left_action([t, BARE_ROOT]) != t:
            return fail('left_unit', {'t': t.to_json()}, t, left_action([BARE_ROOT, t]))
        checked += 1
        if functor_E(functor_I(functor_E(t))) != functor_E(t):
            return fail('ei_identity', {'t': t.to_json()}, functor_E(t), functor_E(functor_I(functor_E(t))))

    for t in trees:
        for args in arg_tuples(t.length, bound):
            checked += 1
            folded = fold_partial(right_partial, t, args)
            if folded != right_action(t, args):
                return fail('right_decomposition', {'t': t.to_json(), 'args': _words(args)},
                            right_action(t, args), folded)

    for law, x, i, a, k, b in partial_law_instances(enumerate_hat, bound):
        checked += 1
        left, right = partial_law_sides(right_partial, law, x, i, a, k, b)
        if left != right:
            return fail(f"right_{law}", {'t': x.to_json(), 'i': i, 'a': render(a), 'k': k, 'b': render(b)},
                        right, left)

    for t in trees:
        for args in arg_tuples(t.length, bound, min_length=1):
            inner = sum(a.length for a in args)
            for outer in arg_tuples(inner, bound, min_length=1):
                checked += 1
                stepwise = right_action(right_action(t, args), outer)
                direct = right_action(t, split_compose(args, outer))
                if stepwise != direct:
                    return fail('right_associativity', {'t': t.to_json(), 'args': _words(args),
                                                        'outer': _words(outer)}, direct, stepwise)

    def split(total):
        for lp in range(total + 1):
            for p in by_length.get(lp, []):
                for q in by_length.get(total - lp, []):
                    yield p, q

    for total in range(bound + 1):
        for p, q in split(total):
            for lr in range(bound - total + 1):
                for r in by_length.get(lr, []):
                    checked += 1
                    if left_action([left_action([p, q]), r]) != left_action([p, left_action([q, r])]):
                        return fail('left_associativity', {'parts': [p.to_json(), q.to_json(), r.to_json()]},
                                    left_action([p, left_action([q, r])]), left_action([left_action([p, q]), r]))
            for i in range(1, total + 1):
                for size in range(bound - total + 2):
                    for a in enumerate_words(size):
                        checked += 1
                        args = substitute(total, i, a)
                        if exchange_fails(p, q, args):
                            return _exchange_failure(checked, p, q, args)
            for args in arg_tuples(total, bound, min_length=1):
                checked += 1
                if exchange_fails(p, q, args):
                    return _exchange_failure(checked, p, q, args)

    logger.info(f"Bimodule laws hold up to {bound} leaves ({checked} checks)")
    return make_report('bimodule_laws', checked)


def _exchange_failure(checked: int, p: RootedKTree, q: RootedKTree, args: Sequence[ParenWord]) -> Dict[str, Any]:
    expected = left_action([right_action(p, args[:p.length]), right_action(q, args[p.length:])])
    return make_report('bimodule_laws', checked, witness(
        'bimodule_exchange', {'parts': [p.to_json(), q.to_json()], 'args': _words(args)},
        expected=str(expected), actual=str(right_action(left_action([p, q]), args))))


def exchange_fails(p: RootedKTree, q: RootedKTree, args: Sequence[ParenWord]) -> bool:
    """Merging then acting differs from acting on each part then merging"""
    args = list(args)
    merged_first = right_action(left_action([p, q]), args)
    acted_first = left_action([right_action(p, args[:p.length]), right_action(q, args[p.length:])])
    return merged_first != acted_first


def _tree(instance: Dict[str, Any], key: str = 't') -> RootedKTree:
    return RootedKTree.from_json(instance[key])


def _parse_all(texts: Sequence[str]) -> List[ParenWord]:
    return [parse(text) for text in texts]


@register_replay('right_unit')
def _replay_right_unit(instance: Dict[str, Any], **context) -> bool:
    t = _tree(instance)
    return right_action(t, [ID] * t.length) != t


@register_replay('left_unit')
def _replay_left_unit(instance: Dict[str, Any], **context) -> bool:
    t = _tree(instance)
    return left_action([t]) != t or left_action([BARE_ROOT, t]) != t or left_action([t, BARE_ROOT]) != t


@register_replay('ei_identity')
def _replay_ei_identity(instance: Dict[str, Any], **context) -> bool:
    t = _tree(instance)
    return functor_E(functor_I(functor_E(t))) != functor_E(t)


@register_replay('right_decomposition')
def _replay_right_decomposition(instance: Dict[str, Any], **context) -> bool:
    t, args = _tree(instance), _parse_all(instance['args'])
    return fold_partial(right_partial, t, args) != right_action(t, args)


def _replay_right_law(law: str):
    def replay(instance: Dict[str, Any], **context) -> bool:
        left, right = partial_law_sides(right_partial, law, _tree(instance), instance['i'],
                                        parse(instance['a']), instance['k'], parse(instance['b']))
        return left != right
    return replay


for _law in ('sequential', 'parallel'):
    register_replay(f"right_{_law}")(_replay_right_law(_law))


@register_replay('right_associativity')
def _replay_right_associativity(instance: Dict[str, Any], **context) -> bool:
    t, args, outer = _tree(instance), _parse_all(instance['args']), _parse_all(instance['outer'])
    return right_action(right_action(t, args), outer) != right_action(t, split_compose(args, outer))


@register_replay('left_associativity')
def _replay_left_associativity(instance: Dict[str, Any], **context) -> bool:
    p, q, r = (RootedKTree.from_json(part) for part in instance['parts'])
    return left_action([left_action([p, q]), r]) != left_action([p, left_action([q, r])])


@register_replay('bimodule_exchange')
def _replay_exchange(instance: Dict[str, Any], **context) -> bool:
    p, q = (RootedKTree.from_json(part) for part in instance['parts'])
    return exchange_fails(p, q, _parse_all(instance['args']))


# The normal-form category

SeqObject = Tuple[Any, ...]


def normalize(seq: Sequence[Any], unit: Any) -> SeqObject:
    """Strip unit entries"""
    return tuple(x for x in seq if x != unit)


@dataclass(frozen=True)
class MMorphism:
    source: SeqObject
    target: SeqObject
    blocks: Tuple[int, ...]
    components: Tuple[Any, ...]

    def __post_init__(self):
        if len(self.blocks) != len(self.source) or len(self.components) != len(self.source):
            raise CategoryError(f"Need one block and one component per source entry, got "
                                f"{len(self.blocks)} blocks and {len(self.components)} components "
                                f"for {len(self.source)} entries")
        if any(b < 0 for b in self.blocks) or sum(self.blocks) != len(self.target):
            raise CategoryError(f"Blocks {self.blocks} do not partition a target of length {len(self.target)}")

    def block_values(self) -> List[SeqObject]:
        out = []
        offset = 0
        for size in self.blocks:
            out.append(self.target[offset:offset + size])
            offset += size
        return out

    def to_json(self) -> Dict[str, Any]:
        return {'source': jsonable(self.source), 'target': jsonable(self.target),
                'blocks': list(self.blocks), 'components': jsonable(self.components)}

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> 'MMorphism':
        return cls(restore(data['source']), restore(data['target']), tuple(data['blocks']),
                   restore(data['components']))


def weak_compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in weak_compositions(total - first, parts - 1):
            yield (first,) + rest


def block_word(blocks: Sequence[int]) -> ParenWord:
    """The word on sum(blocks) letters grouping each block of size >= 2"""
    length = sum(blocks)
    intervals = []
    offset = 0
    for size in blocks:
        if 2 <= size < length:
            intervals.append((offset + 1, offset + size))
        offset += size
    return ParenWord(length, tuple(intervals))


@dataclass
class Functor:
    name: str
    on_object: Callable[[Any], Any]
    on_morphism: Callable[[Any], Any]


class MonoidalCategory:
    """
    MC in normal form over a K-algebra t on C

    Sequences are bounded by max_len; the algebra's working bound must cover
    every rebracketing evaluated.
    """

    def __init__(self, category: Category, algebra: KAlgebra, max_len: int,
                 objects: Optional[Sequence[Any]] = None):
        self.category = category
        self.algebra = algebra
        self.max_len = max_len
        self.unit = algebra.unit
        sample = list(objects) if objects is not None else category.objects()
        self.letters = [x for x in sample if x != self.unit]
        self._morphisms: Optional[List[MMorphism]] = None

    def mu(self, seq: Sequence[Any]) -> Any:
        seq = tuple(seq)
        return self.algebra.theta(ParenWord.terminal(len(seq)), seq)

    def rebracket(self, blocks: Sequence[int], flat: Sequence[Any]) -> Any:
        """The unique theta-morphism mu(mu(block_1), ...) -> mu(flat)"""
        word = block_word(blocks)
        return self.algebra.theta_morphism(KMorphism(word, ParenWord.terminal(word.length)), tuple(flat))

    def objects(self) -> List[SeqObject]:
        return [seq for k in range(self.max_len + 1)
                for seq in itertools.product(self.letters, repeat=k)]

    def hom(self, source: SeqObject, target: SeqObject) -> List[MMorphism]:
        C = self.category
        found = []
        for blocks in weak_compositions(len(target), len(source)):
            choices = []
            offset = 0
            for x, size in zip(source, blocks):
                choices.append(C.hom(x, self.mu(target[offset:offset + size])))
                offset += size
            for components in itertools.product(*choices):
                found.append(MMorphism(source, target, blocks, tuple(components)))
        return found

    def morphisms(self) -> List[MMorphism]:
        """Every morphism between generated objects"""
        if self._morphisms is None:
            objs = self.objects()
            self._morphisms = [f for s in objs for t in objs for f in self.hom(s, t)]
        return list(self._morphisms)

    def validate_morphism(self, f: MMorphism) -> Optional[str]:
        for x, block, g in zip(f.source, f.block_values(), f.components):
            problem = check_typed(self.category, g, x, self.mu(block))
            if problem:
                return problem
        return None

    def identity(self, seq: SeqObject) -> MMorphism:
        return MMorphism(seq, seq, (1,) * len(seq), tuple(self.category.identity(x) for x in seq))

    def compose(self, g: MMorphism, f: MMorphism) -> MMorphism:
        """g after f"""
        if f.target != g.source:
            raise CategoryError(f"Cannot compose: {f.target!r} != {g.source!r}")
        C = self.category
        g_blocks = list(zip(g.blocks, g.components))
        target_blocks = g.block_values()
        blocks = []
        components = []
        position = 0
        for size, component in zip(f.blocks, f.components):
            chunk = g_blocks[position:position + size]
            pieces = target_blocks[position:position + size]
            position += size
            flat = tuple(x for piece in pieces for x in piece)
            inner = self.algebra.theta_tuple(ParenWord.terminal(len(chunk)), tuple(h for _, h in chunk))
            lengths = [b for b, _ in chunk]
            step = C.compose_path([component, inner, self.rebracket(lengths, flat)])
            blocks.append(len(flat))
            components.append(step)
        return MMorphism(f.source, g.target, tuple(blocks), tuple(components))

    def tensor(self, x: Union[SeqObject, MMorphism], y: Union[SeqObject, MMorphism]):
        if isinstance(x, MMorphism) and isinstance(y, MMorphism):
            return MMorphism(x.source + y.source, x.target + y.target,
                             x.blocks + y.blocks, x.components + y.components)
        if isinstance(x, MMorphism) or isinstance(y, MMorphism):
            raise CategoryError("Tensor needs two objects or two morphisms")
        return tuple(x) + tuple(y)

    # the functors E and I

    def e_object(self, seq: SeqObject) -> Any:
        return self.mu(seq)

    def e_morphism(self, f: MMorphism) -> Any:
        applied = self.algebra.theta_tuple(ParenWord.terminal(len(f.source)), f.components)
        return self.category.compose(self.rebracket(f.blocks, f.target), applied)

    def i_object(self, x: Any) -> SeqObject:
        return normalize((x,), self.unit)

    def i_morphism(self, g: Any) -> MMorphism:
        C = self.category
        source, target = C.source(g), C.target(g)
        if source == self.unit:
            if target == self.unit and is_identity(C, g):
                return self.identity(())
            raise CategoryError(f"{g!r} leaves the unit and has no normal form in MC")
        return MMorphism((source,), self.i_object(target), (len(self.i_object(target)),), (g,))

    def splitting(self, seq: SeqObject) -> MMorphism:
        """The component (mu(seq)) -> seq of the transformation IE => Id"""
        value = self.mu(seq)
        if not seq:
            return self.identity(())
        if value == self.unit:
            raise CategoryError(f"mu{seq!r} is the unit; the splitting has no normal form")
        return MMorphism((value,), seq, (len(seq),), (self.category.identity(value),))

    @property
    def unit_reflecting(self) -> bool:
        """mu of non-units is never the unit and nothing leaves the unit but its identity"""
        C = self.category
        for seq in self.objects():
            if seq and self.mu(seq) == self.unit:
                return False
        if any(C.hom(self.unit, x) for x in self.letters):
            return False
        return all(is_identity(C, g) for g in C.hom(self.unit, self.unit))

    def verification_report(self, strict: bool = False) -> Dict[str, Any]:
        parts = [self.check_ei(), self.check_functor_e(), self.check_composition(),
                 self.check_tensor(), self.check_splitting()]
        if strict:
            parts.append(self.check_e_strict())
        return combine_reports('rectification', parts)

    def check_ei(self) -> Dict[str, Any]:
        C = self.category
        checked = 0
        sample = self.letters + [self.unit]
        for x in sample:
            checked += 1
            if self.e_object(self.i_object(x)) != x:
                return make_report('ei_identity', checked, witness(
                    'ei_object', {'object': jsonable(x)}, expected=jsonable(x),
                    actual=jsonable(self.e_object(self.i_object(x)))))
        for x in sample:
            for y in sample:
                for g in C.hom(x, y):
                    if x == self.unit and not is_identity(C, g):
                        continue
                    checked += 1
                    image = self.e_morphism(self.i_morphism(g))
                    if image != g:
                        return make_report('ei_identity', checked, witness(
                            'ei_morphism', {'morphism': jsonable(g)}, expected=jsonable(g),
                            actual=jsonable(image)))
        return make_report('ei_identity', checked)

    def _composable(self) -> Iterator[Tuple[MMorphism, MMorphism]]:
        by_source: Dict[SeqObject, List[MMorphism]] = {}
        morphisms = self.morphisms()
        for f in morphisms:
            by_source.setdefault(f.source, []).append(f)
        for f in morphisms:
            for g in by_source.get(f.target, []):
                yield f, g

    def check_functor_e(self) -> Dict[str, Any]:
        C = self.category
        checked = 0
        for seq in self.objects():
            checked += 1
            if self.e_morphism(self.identity(seq)) != C.identity(self.e_object(seq)):
                return make_report('functor_e', checked, witness(
                    'e_identity', {'object': jsonable(seq)}))
        for f, g in self._composable():
            checked += 1
            whole = self.e_morphism(self.compose(g, f))
            parts = C.compose(self.e_morphism(g), self.e_morphism(f))
            if whole != parts:
                return make_report('functor_e', checked, witness(
                    'e_composition', {'f': f.to_json(), 'g': g.to_json()},
                    expected=jsonable(parts), actual=jsonable(whole)))
        return make_report('functor_e', checked)

    def check_composition(self) -> Dict[str, Any]:
        checked = 0
        pairs = list(self._composable())
        by_source: Dict[SeqObject, List[MMorphism]] = {}
        for f in self.morphisms():
            by_source.setdefault(f.source, []).append(f)

        for f, g in pairs:
            checked += 1
            composite = self.compose(g, f)
            problem = self.validate_morphism(composite)
            if problem:
                return make_report('mc_composition', checked, witness(
                    'mc_typing', {'f': f.to_json(), 'g': g.to_json()}, actual=problem))
            if self.compose(self.identity(f.target), f) != f or self.compose(f, self.identity(f.source)) != f:
                return make_report('mc_composition', checked, witness('mc_unit', {'f': f.to_json()}))
            for h in by_source.get(g.target, []):
                checked += 1
                left = self.compose(h, composite)
                right = self.compose(self.compose(h, g), f)
                if left != right:
                    return make_report('mc_composition', checked, witness(
                        'mc_associativity', {'f': f.to_json(), 'g': g.to_json(), 'h': h.to_json()},
                        expected=left.to_json(), actual=right.to_json()))
        return make_report('mc_composition', checked)

    def check_tensor(self) -> Dict[str, Any]:
        checked = 0
        objs = [s for s in self.objects() if len(s) <= 2]
        for x, y, z in itertools.product(objs, repeat=3):
            checked += 1
            if self.tensor(self.tensor(x, y), z) != self.tensor(x, self.tensor(y, z)):
                return make_report('tensor_strictness', checked, witness('tensor_associativity',
                                                                         {'objects': jsonable([x, y, z])}))
            if self.tensor((), x) != x or self.tensor(x, ()) != x:
                return make_report('tensor_strictness', checked, witness('tensor_unit', {'object': jsonable(x)}))
        morphisms = self.morphisms()
        unit_id = self.identity(())
        for f in morphisms:
            checked += 1
            if self.tensor(f, unit_id) != f or self.tensor(unit_id, f) != f:
                return make_report('tensor_strictness', checked, witness('tensor_unit_morphism', {'f': f.to_json()}))
        for f, g, h in itertools.product(morphisms, repeat=3):
            if len(f.source) + len(g.source) + len(h.source) > self.max_len:
                continue
            checked += 1
            if self.tensor(self.tensor(f, g), h) != self.tensor(f, self.tensor(g, h)):
                return make_report('tensor_strictness', checked, witness(
                    'tensor_morphisms', {'f': f.to_json(), 'g': g.to_json(), 'h': h.to_json()}))
        return make_report('tensor_strictness', checked)

    def check_splitting(self) -> Dict[str, Any]:
        """sigma_T o I(E(f)) = f o sigma_S for every generated f: S -> T"""
        if not self.unit_reflecting:
            report = make_report('splitting_naturality', 0)
            report['skipped'] = 'mu of non-units reaches the unit, or the unit has outgoing morphisms'
            return report
        checked = 0
        for f in self.morphisms():
            checked += 1
            left = self.compose(self.splitting(f.target), self.i_morphism(self.e_morphism(f)))
            right = self.compose(f, self.splitting(f.source))
            if left != right:
                return make_report('splitting_naturality', checked, witness(
                    'splitting', {'f': f.to_json()}, expected=right.to_json(), actual=left.to_json()))
        return make_report('splitting_naturality', checked)

    def check_e_strict(self) -> Dict[str, Any]:
        """E(S tensor T) = mu_2(E S, E T) exactly, on objects and morphisms"""
        checked = 0
        objs = self.objects()
        for x, y in itertools.product(objs, repeat=2):
            if len(x) + len(y) > self.max_len:
                continue
            checked += 1
            if self.e_object(self.tensor(x, y)) != self.mu((self.e_object(x), self.e_object(y))):
                return make_report('e_strict_monoidal', checked, witness(
                    'e_tensor_object', {'objects': jsonable([x, y])}))
        morphisms = self.morphisms()
        for f, g in itertools.product(morphisms, repeat=2):
            if len(f.target) + len(g.target) > self.max_len:
                continue
            checked += 1
            whole = self.e_morphism(self.tensor(f, g))
            parts = self.algebra.theta_tuple(ParenWord.terminal(2), (self.e_morphism(f), self.e_morphism(g)))
            if whole != parts:
                return make_report('e_strict_monoidal', checked, witness(
                    'e_tensor_morphism', {'f': f.to_json(), 'g': g.to_json()},
                    expected=jsonable(parts), actual=jsonable(whole)))
        return make_report('e_strict_monoidal', checked)

    def summary(self) -> Dict[str, Any]:
        objs = self.objects()
        sizes = {}
        for s in objs:
            for t in objs:
                count = len(self.hom(s, t))
                if count:
                    sizes[f"{canonical_json(jsonable(s))}->{canonical_json(jsonable(t))}"] = count
        return {'objects': [jsonable(s) for s in objs], 'hom_sizes': sizes,
                'unit_reflecting': self.unit_reflecting}


def build_MC(C: Category, t: KAlgebra, max_len: Optional[int] = None,
             objects: Optional[Sequence[Any]] = None) -> MonoidalCategory:
    if max_len is None:
        max_len = min(4, t.bound)
    if max_len > t.bound:
        raise CategoryError(f"max_len {max_len} exceeds the algebra's working bound {t.bound}")
    logger.info(f"Building MC over {C.name} with sequences up to length {max_len}")
    return MonoidalCategory(C, t, max_len, objects)


def functor_E_cat(M: MonoidalCategory) -> Functor:
    return Functor('E', M.e_object, M.e_morphism)


def functor_I_cat(M: MonoidalCategory) -> Functor:
    return Functor('I', M.i_object, M.i_morphism)


def coend_quotient_oracle(C: Category, t: KAlgebra, max_arity: int = 4,
                          objects: Optional[Sequence[Any]] = None) -> Dict[str, Any]:
    """
    Brute-force quotient of the pairs (T, A) by (T o S, A) ~ (T, theta(S, A)),
    compared with the normal form obtained by evaluating each root child and
    stripping units
    """
    sample = list(objects) if objects is not None else C.objects()
    known = set(sample)
    unit = t.unit
    classes = _UnionFind()
    elements = []
    for k in range(max_arity + 1):
        for tree in enumerate_hat(k):
            for objs in itertools.product(sample, repeat=k):
                elements.append((tree, objs))
                classes.find((hat_key(tree), objs))

    relations = 0
    for tree in _hat_up_to(max_arity):
        for args in arg_tuples(tree.length, max_arity):
            composite = right_action(tree, args)
            total = composite.length
            for objs in itertools.product(sample, repeat=total):
                values = []
                offset = 0
                for a in args:
                    values.append(t.theta(a, objs[offset:offset + a.length]))
                    offset += a.length
                if not all(v in known for v in values):
                    continue
                relations += 1
                classes.union((hat_key(composite), objs), (hat_key(tree), tuple(values)))

    def normal_form(tree: RootedKTree, objs: Objects) -> SeqObject:
        values = []
        offset = 0
        for child in tree.children:
            size = leaf_count(child)
            word = ID if isinstance(child, Leaf) else from_tree(relabel(child))
            values.append(t.theta(word, objs[offset:offset + size]))
            offset += size
        return normalize(values, unit)

    forms: Dict[Any, SeqObject] = {}
    checked = 0
    for tree, objs in elements:
        checked += 1
        root = classes.find((hat_key(tree), objs))
        form = normal_form(tree, objs)
        if forms.setdefault(root, form) != form:
            return make_report('coend_quotient', checked, witness(
                'quotient_not_well_defined', {'tree': tree.to_json(), 'objects': jsonable(objs),
                                              'max_arity': max_arity, 'sample': jsonable(sample)},
                expected=jsonable(forms[root]), actual=jsonable(form)))

    distinct = set(forms.values())
    report = make_report('coend_quotient', checked, None if len(distinct) == len(forms) else witness(
        'quotient_merges_too_little', {'classes': len(forms), 'normal_forms': len(distinct),
                                       'max_arity': max_arity, 'sample': jsonable(sample)}))
    report['classes'] = len(forms)
    report['relations'] = relations
    logger.debug(f"Coend quotient: {len(forms)} classes from {len(elements)} pairs")
    return report


# Replays of MC witnesses; they need the MonoidalCategory as context `mc`

def _morphism(instance: Dict[str, Any], key: str) -> MMorphism:
    return MMorphism.from_json(instance[key])


def _ei_object(M: MonoidalCategory, instance: Dict[str, Any]) -> bool:
    x = restore(instance['object'])
    return M.e_object(M.i_object(x)) != x


def _ei_morphism(M: MonoidalCategory, instance: Dict[str, Any]) -> bool:
    g = restore(instance['morphism'])
    return M.e_morphism(M.i_morphism(g)) != g


def _e_identity(M: MonoidalCategory, instance: Dict[str, Any]) -> bool:
    seq = restore(instance['object'])
    return M.e_morphism(M.identity(seq)) != M.category.identity(M.e_object(seq))


def _e_composition(M: MonoidalCategory, instance: Dict[str, Any]) -> bool:
    f, g = _morphism(instance, 'f'), _morphism(instance, 'g')
    return M.e_morphism(M.compose(g, f)) != M.category.compose(M.e_morphism(g), M.e_morphism(f))


def _mc_typing(M: MonoidalCategory, instance: Dict[str, Any]) -> bool:
    f, g = _morphism(instance, 'f'), _morphism(instance, 'g')
    return M.validate_morphism(M.compose(g, f)) is not None


def _mc_unit(M: MonoidalCategory, instance: Dict[str, Any]) -> bool:
    f = _morphism(instance, 'f')
    return M.compose(M.identity(f.target), f) != f or M.compose(f, M.identity(f.source)) != f


def _mc_associativity(M: MonoidalCategory, instance: Dict[str, Any]) -> bool:
    f, g, h = (_morphism(instance, key) for key in ('f', 'g', 'h'))
    return M.compose(h, M.compose(g, f)) != M.compose(M.compose(h, g), f)


def _tensor_associativity(M: MonoidalCategory, instance: Dict[str, Any]) -> bool:
    x, y, z = restore(instance['objects'])
    return M.tensor(M.tensor(x, y), z) != M.tensor(x, M.tensor(y, z))


def _tensor_unit(M: MonoidalCategory, instance: Dict[str, Any]) -> bool:
    x = restore(instance['object'])
    return M.tensor((), x) != x or M.tensor(x, ()) != x


def _tensor_unit_morphism(M: MonoidalCategory, instance: Dict[str, Any]) -> bool:
    f, unit_id = _morphism(instance, 'f'), M.identity(())
    return M.tensor(f, unit_id) != f or M.tensor(unit_id, f) != f


def _tensor_morphisms(M: MonoidalCategory, instance: Dict[str, Any]) -> bool:
    f, g, h = (_morphism(instance, key) for key in ('f', 'g', 'h'))
    return M.tensor(M.tensor(f, g), h) != M.tensor(f, M.tensor(g, h))


def _splitting(M: MonoidalCategory, instance: Dict[str, Any]) -> bool:
    f = _morphism(instance, 'f')
    return M.compose(M.splitting(f.target), M.i_morphism(M.e_morphism(f))) != M.compose(f, M.splitting(f.source))


def _e_tensor_object(M: MonoidalCategory, instance: Dict[str, Any]) -> bool:
    x, y = restore(instance['objects'])
    return M.e_object(M.tensor(x, y)) != M.mu((M.e_object(x), M.e_object(y)))


def _e_tensor_morphism(M: MonoidalCategory, instance: Dict[str, Any]) -> bool:
    f, g = _morphism(instance, 'f'), _morphism(instance, 'g')
    parts = M.algebra.theta_tuple(ParenWord.terminal(2), (M.e_morphism(f), M.e_morphism(g)))
    return M.e_morphism(M.tensor(f, g)) != parts


MC_EVALUATORS: Dict[str, Callable[[MonoidalCategory, Dict[str, Any]], bool]] = {
    'ei_object': _ei_object,
    'ei_morphism': _ei_morphism,
    'e_identity': _e_identity,
    'e_composition': _e_composition,
    'mc_typing': _mc_typing,
    'mc_unit': _mc_unit,
    'mc_associativity': _mc_associativity,
    'tensor_associativity': _tensor_associativity,
    'tensor_unit': _tensor_unit,
    'tensor_unit_morphism': _tensor_unit_morphism,
    'tensor_morphisms': _tensor_morphisms,
    'splitting': _splitting,
    'e_tensor_object': _e_tensor_object,
    'e_tensor_morphism': _e_tensor_morphism
}


def _make_mc_replay(kind: str):
    evaluate = MC_EVALUATORS[kind]

    def replay(instance: Dict[str, Any], mc: Optional[MonoidalCategory] = None, **context) -> bool:
        if mc is None:
            raise CategoryError(f"Replaying {kind} needs the MonoidalCategory as context 'mc'")
        return evaluate(mc, instance)
    return replay


for _kind in MC_EVALUATORS:
    register_replay(_kind)(_make_mc_replay(_kind))


def _make_quotient_replay(kind: str):
    def replay(instance: Dict[str, Any], category: Optional[Category] = None,
               algebra: Optional[KAlgebra] = None, **context) -> bool:
        if category is None or algebra is None:
            raise CategoryError(f"Replaying {kind} needs 'category' and 'algebra' as context")
        report = coend_quotient_oracle(category, algebra, max_arity=instance['max_arity'],
                                       objects=restore(instance['sample']))
        return not report['success'] and report['failure']['kind'] == kind
    return replay


for _kind in ('quotient_not_well_defined', 'quotient_merges_too_little'):
    register_replay(_kind)(_make_quotient_replay(_kind))
