"""
Tamari Lattice and the Binarization Map

L_m is the poset of planar binary trees with m leaves under right rotation
(A.B).C -> A.(B.C). Lambda sends a parenthesized word to the binary tree
obtained by expanding every k-ary node into a right comb; it is a surjective
operad map whose fibers have a least and a greatest element.

Binary trees reuse the StableTree types: Unit is EmptyTree and Var is IdTree.
"""

import itertools
import json
import logging
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Dict, FrozenSet, Iterator, List, Tuple

from config import current_setting

from .exceptions import ArityMismatchError, CapExceededError, CoherenceViolation, InvalidTreeError
from .kposet import KMorphism, covers, enumerate_words, gamma, leq
from .reports import make_report, register_replay, witness
from .wordtree import (EMPTY_TREE, ID, ID_TREE, ZERO, EmptyTree, IdTree, Leaf, Node, ParenWord,
                       StableTree, canonical_json, compose_trees, from_tree, leaf_count, leaf_range,
                       parse, relabel, render, to_tree, tree_from_json, tree_to_json)

logger = logging.getLogger(__name__)

LObject = StableTree
Path = Tuple[int, ...]

# the generating arrow of L_3
ETA_SOURCE = Node((Node((Leaf(1), Leaf(2))), Leaf(3)))
ETA_TARGET = Node((Leaf(1), Node((Leaf(2), Leaf(3)))))


@dataclass(frozen=True)
class LMorphism:
    source: LObject
    target: LObject

    def __post_init__(self):
        if not tamari_leq(self.source, self.target):
            raise InvalidTreeError(
                f"No Tamari morphism {render_binary(self.source)} -> {render_binary(self.target)}")


def is_binary(t: StableTree) -> bool:
    if isinstance(t, (Leaf, IdTree, EmptyTree)):
        return True
    return len(t.children) == 2 and all(is_binary(c) for c in t.children)


def render_binary(t: LObject) -> str:
    return render(from_tree(t))


def binary_key(t: LObject) -> str:
    return canonical_json(tree_to_json(t))


def read_binary(text: str) -> LObject:
    """A binary tree from its JSON form or from a fully bracketed word"""
    stripped = text.strip()
    if stripped[:1] in ("[", "{"):
        tree = tree_from_json(json.loads(stripped))
    else:
        tree = to_tree(parse(stripped))
    if isinstance(tree, Leaf):
        tree = ID_TREE
    if not is_binary(tree):
        raise InvalidTreeError(f"{text!r} is not a binary tree")
    return tree


@lru_cache(maxsize=None)
def _shapes(m: int) -> Tuple[StableTree, ...]:
    if m == 1:
        return (Leaf(0),)
    shapes = []
    for k in range(1, m):
        for left in _shapes(k):
            for right in _shapes(m - k):
                shapes.append(Node((left, right)))
    return tuple(shapes)


def binary_trees(m: int) -> List[LObject]:
    """All objects of L_m in canonical order"""
    cap = current_setting('MAX_M')
    if m > cap:
        raise CapExceededError(f"m={m} is above the enumeration cap {cap}")
    if m == 0:
        return [EMPTY_TREE]
    if m == 1:
        return [ID_TREE]
    return sorted((relabel(s) for s in _shapes(m)), key=binary_key)


def _rotations(t: StableTree, path: Path = ()) -> Iterator[Tuple[Path, StableTree]]:
    """(path to the rotated node, rotated tree) for every right rotation"""
    if not isinstance(t, Node):
        return
    left, right = t.children
    if isinstance(left, Node):
        a, b = left.children
        yield path, Node((a, Node((b, right))))
    for rotated_path, rotated in _rotations(left, path + (0,)):
        yield rotated_path, Node((rotated, right))
    for rotated_path, rotated in _rotations(right, path + (1,)):
        yield rotated_path, Node((left, rotated))


@lru_cache(maxsize=None)
def _covers(t: LObject) -> Tuple[LObject, ...]:
    return tuple(rotated for _, rotated in _rotations(t))


def rotation_covers(t: LObject) -> List[LObject]:
    return list(_covers(t))


@lru_cache(maxsize=None)
def up_set(t: LObject) -> FrozenSet[LObject]:
    """Everything reachable from t by right rotations, t included"""
    seen = {t}
    queue = deque([t])
    while queue:
        current = queue.popleft()
        for nxt in _covers(current):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return frozenset(seen)


def tamari_leq(s: LObject, t: LObject) -> bool:
    if leaf_count(s) != leaf_count(t):
        raise ArityMismatchError(f"Cannot compare trees with {leaf_count(s)} and {leaf_count(t)} leaves")
    return t in up_set(s)


def _comb(t: StableTree) -> StableTree:
    if not isinstance(t, Node):
        return t
    parts = [_comb(c) for c in t.children]
    result = parts[-1]
    for part in reversed(parts[:-1]):
        result = Node((part, result))
    return result


def lambda_obj(w: ParenWord) -> LObject:
    return _comb(to_tree(w))


def lambda_mor(f: KMorphism) -> LMorphism:
    source, target = lambda_obj(f.source), lambda_obj(f.target)
    if not tamari_leq(source, target):
        raise CoherenceViolation(
            f"Lambda is not functorial on {f}",
            witness('lambda_functorial', {'source': render(f.source), 'target': render(f.target)}))
    return LMorphism(source, target)


def fiber(t: LObject) -> List[ParenWord]:
    return [w for w in enumerate_words(leaf_count(t)) if lambda_obj(w) == t]


def min_preimage(t: LObject) -> ParenWord:
    return from_tree(t)


def _splice_right(t: StableTree) -> StableTree:
    if not isinstance(t, Node):
        return t
    children = [_splice_right(c) for c in t.children]
    while isinstance(children[-1], Node):
        children = children[:-1] + list(children[-1].children)
    return Node(tuple(children))


def max_preimage(t: LObject) -> ParenWord:
    """Contract every rightmost incoming edge that is not a leaf"""
    return from_tree(_splice_right(t))


def _validate_abc(m: int, a: int, b: int, c: int):
    if m < 3 or not (1 <= a < b < c <= m):
        raise ArityMismatchError(f"Need 1 <= a < b < c <= m, got a={a} b={b} c={c} m={m}")


def project_abc(w: ParenWord, a: int, b: int, c: int) -> ParenWord:
    _validate_abc(w.length, a, b, c)
    return gamma(w, [ID if i in (a, b, c) else ZERO for i in range(1, w.length + 1)])


def project_binary(t: LObject, a: int, b: int, c: int) -> LObject:
    """The same projection computed with gamma on binary trees"""
    m = leaf_count(t)
    _validate_abc(m, a, b, c)
    return compose_trees(t, [ID_TREE if i in (a, b, c) else EMPTY_TREE for i in range(1, m + 1)])


def _projections(m: int) -> List[Tuple[int, int, int]]:
    return list(itertools.combinations(range(1, m + 1), 3))


def check_embedding(m: int) -> Dict[str, Any]:
    """
    Projections to length 3 separate objects and reflect the order

    Runs on K_m with leq and on L_m with tamari_leq.
    """
    cap = current_setting('EMBEDDING_MAX_M')
    if m > cap:
        raise CapExceededError(f"m={m} is above the embedding cap {cap}")
    triples = _projections(m)
    checked = 0

    words = enumerate_words(m)
    trees = binary_trees(m)
    sides = [
        ('K', words, project_abc, leq, render),
        ('L', trees, project_binary, tamari_leq, render_binary)
    ]

    for label, objects, project, order, show in sides:
        images = {x: tuple(project(x, *abc) for abc in triples) for x in objects}
        seen: Dict[Tuple, Any] = {}
        for x in objects:
            checked += 1
            other = seen.setdefault(images[x], x)
            if other != x:
                return make_report('embedding', checked, witness(
                    'embedding_injective', {'side': label, 'm': m, 'x': show(other), 'y': show(x)},
                    expected='distinct projections', actual=[show(p) for p in images[x]]))
        for x in objects:
            for y in objects:
                checked += 1
                direct = order(x, y)
                projected = all(order(px, py) for px, py in zip(images[x], images[y]))
                if direct != projected:
                    return make_report('embedding', checked, witness(
                        'embedding_full', {'side': label, 'm': m, 'x': show(x), 'y': show(y)},
                        expected=direct, actual=projected))

    return make_report('embedding', checked)


def _read_side(side: str, text: str):
    return parse(text) if side == 'K' else read_binary(text)


@register_replay('embedding_injective')
def _replay_injective(instance: Dict[str, Any], **_) -> bool:
    x, y = _read_side(instance['side'], instance['x']), _read_side(instance['side'], instance['y'])
    project = project_abc if instance['side'] == 'K' else project_binary
    triples = _projections(instance['m'])
    return x != y and all(project(x, *abc) == project(y, *abc) for abc in triples)


@register_replay('embedding_full')
def _replay_full(instance: Dict[str, Any], **_) -> bool:
    x, y = _read_side(instance['side'], instance['x']), _read_side(instance['side'], instance['y'])
    project = project_abc if instance['side'] == 'K' else project_binary
    order = leq if instance['side'] == 'K' else tamari_leq
    triples = _projections(instance['m'])
    return order(x, y) != all(order(project(x, *abc), project(y, *abc)) for abc in triples)


def check_poset(m: int) -> Dict[str, Any]:
    """Antisymmetry of the rotation order on L_m"""
    trees = binary_trees(m)
    checked = 0
    for s in trees:
        for t in up_set(s):
            checked += 1
            if t != s and s in up_set(t):
                return make_report('tamari_poset', checked, witness(
                    'tamari_antisymmetry', {'s': render_binary(s), 't': render_binary(t)},
                    expected='no 2-cycle', actual='s <= t and t <= s'))
    return make_report('tamari_poset', checked)


@register_replay('tamari_antisymmetry')
def _replay_antisymmetry(instance: Dict[str, Any], **_) -> bool:
    s, t = read_binary(instance['s']), read_binary(instance['t'])
    return s != t and tamari_leq(s, t) and tamari_leq(t, s)


def check_surjectivity(m: int) -> Dict[str, Any]:
    """Lambda hits every object and every rotation cover of L_m"""
    words = enumerate_words(m)
    images = {lambda_obj(w) for w in words}
    image_covers = set()
    for w in words:
        for f in covers(w):
            image_covers.add((lambda_obj(f.source), lambda_obj(f.target)))

    checked = 0
    for t in binary_trees(m):
        checked += 1
        if t not in images:
            return make_report('lambda_surjective', checked, witness(
                'lambda_object_missed', {'t': render_binary(t)}, expected='a preimage', actual=None))
        for u in rotation_covers(t):
            checked += 1
            if (t, u) not in image_covers:
                return make_report('lambda_surjective', checked, witness(
                    'lambda_cover_missed', {'s': render_binary(t), 't': render_binary(u)},
                    expected='a preimage cover', actual=None))
    return make_report('lambda_surjective', checked)


@register_replay('lambda_object_missed')
def _replay_object_missed(instance: Dict[str, Any], **_) -> bool:
    return not fiber(read_binary(instance['t']))


@register_replay('lambda_cover_missed')
def _replay_cover_missed(instance: Dict[str, Any], **_) -> bool:
    s, t = read_binary(instance['s']), read_binary(instance['t'])
    return not any(lambda_obj(f.target) == t for w in fiber(s) for f in covers(w))


def check_fibers(m: int) -> Dict[str, Any]:
    """Fibers partition K_m and min/max preimages are their extremes"""
    checked = 0
    total = 0
    for t in binary_trees(m):
        members = fiber(t)
        total += len(members)
        low, high = min_preimage(t), max_preimage(t)
        for w in members:
            checked += 1
            if not (leq(low, w) and leq(w, high)):
                return make_report('lambda_fibers', checked, witness(
                    'fiber_extremes', {'t': render_binary(t), 'w': render(w)},
                    expected=[render(low), render(high)], actual=render(w)))
        checked += 1
        if low not in members or high not in members:
            return make_report('lambda_fibers', checked, witness(
                'fiber_extremes', {'t': render_binary(t), 'w': None},
                expected='min and max inside the fiber', actual=[render(low), render(high)]))

    checked += 1
    expected = len(enumerate_words(m))
    if total != expected:
        return make_report('lambda_fibers', checked, witness(
            'fiber_partition', {'m': m}, expected=expected, actual=total))
    return make_report('lambda_fibers', checked)


@register_replay('fiber_extremes')
def _replay_fiber_extremes(instance: Dict[str, Any], **_) -> bool:
    t = read_binary(instance['t'])
    members = fiber(t)
    low, high = min_preimage(t), max_preimage(t)
    if instance['w'] is None:
        return low not in members or high not in members
    w = parse(instance['w'])
    return not (leq(low, w) and leq(w, high))


@register_replay('fiber_partition')
def _replay_fiber_partition(instance: Dict[str, Any], **_) -> bool:
    m = instance['m']
    return sum(len(fiber(t)) for t in binary_trees(m)) != len(enumerate_words(m))


def check_monotone(m: int) -> Dict[str, Any]:
    """leq(a, b) implies tamari_leq(Lambda a, Lambda b)"""
    words = enumerate_words(m)
    checked = 0
    for a in words:
        for b in words:
            if leq(a, b):
                checked += 1
                if not tamari_leq(lambda_obj(a), lambda_obj(b)):
                    return make_report('lambda_monotone', checked, witness(
                        'lambda_functorial', {'source': render(a), 'target': render(b)},
                        expected=True, actual=False))
    return make_report('lambda_monotone', checked)


@register_replay('lambda_functorial')
def _replay_functorial(instance: Dict[str, Any], **_) -> bool:
    a, b = parse(instance['source']), parse(instance['target'])
    return not tamari_leq(lambda_obj(a), lambda_obj(b))


def check_projection_square(m: int) -> Dict[str, Any]:
    """Lambda commutes with every projection to length 3"""
    checked = 0
    for w in enumerate_words(m):
        for abc in _projections(m):
            checked += 1
            left = lambda_obj(project_abc(w, *abc))
            right = project_binary(lambda_obj(w), *abc)
            if left != right:
                return make_report('projection_square', checked, witness(
                    'projection_square', {'w': render(w), 'abc': list(abc)},
                    expected=render_binary(right), actual=render_binary(left)))
    return make_report('projection_square', checked)


@register_replay('projection_square')
def _replay_projection_square(instance: Dict[str, Any], **_) -> bool:
    w = parse(instance['w'])
    abc = instance['abc']
    return lambda_obj(project_abc(w, *abc)) != project_binary(lambda_obj(w), *abc)


def _subtree(t: StableTree, path: Path) -> StableTree:
    for step in path:
        t = t.children[step]
    return t


def _replace(t: StableTree, path: Path, replacement: StableTree) -> StableTree:
    if not path:
        return replacement
    children = list(t.children)
    children[path[0]] = _replace(children[path[0]], path[1:], replacement)
    return Node(tuple(children))


def express_cover(s: LObject, t: LObject) -> Dict[str, Any]:
    """
    Write the cover s -> t as gamma(P; id, ..., eta(A, B, C), ..., id)

    Returns:
        Dictionary with the outer tree P, the 1-based slot holding the
        rotated subtree, and the three argument trees A, B, C
    """
    for path, rotated in _rotations(s):
        if rotated != t:
            continue
        node = _subtree(s, path)
        slot = leaf_range(node)[0]
        outer = relabel(_replace(s, path, Leaf(0)))
        (a, b), c = node.children[0].children, node.children[1]
        args = [relabel(x) if isinstance(x, Node) else ID_TREE for x in (a, b, c)]
        return {'outer': outer, 'slot': slot, 'args': args}
    raise InvalidTreeError(f"{render_binary(t)} is not a rotation cover of {render_binary(s)}")


def _assemble(found: Dict[str, Any], generator: StableTree) -> StableTree:
    outer = found['outer']
    inner = compose_trees(generator, found['args'])
    slots = [ID_TREE] * leaf_count(outer)
    slots[found['slot'] - 1] = inner
    return compose_trees(outer, slots)


def check_generators(m: int) -> Dict[str, Any]:
    """Every cover of L_m is an operadic composite of the single arrow of L_3"""
    checked = 0
    for s in binary_trees(m):
        for t in rotation_covers(s):
            checked += 1
            found = express_cover(s, t)
            if _assemble(found, ETA_SOURCE) != s or _assemble(found, ETA_TARGET) != t:
                return make_report('tamari_generators', checked, witness(
                    'tamari_generator', {'s': render_binary(s), 't': render_binary(t)},
                    expected=[render_binary(s), render_binary(t)],
                    actual=[render_binary(_assemble(found, ETA_SOURCE)),
                            render_binary(_assemble(found, ETA_TARGET))]))
    return make_report('tamari_generators', checked)


@register_replay('tamari_generator')
def _replay_generator(instance: Dict[str, Any], **_) -> bool:
    s, t = read_binary(instance['s']), read_binary(instance['t'])
    found = express_cover(s, t)
    return _assemble(found, ETA_SOURCE) != s or _assemble(found, ETA_TARGET) != t
