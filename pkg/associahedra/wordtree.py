"""
Parenthesized Words and Stable Trees

A parenthesized word of length m is the string x1...xm together with a
laminar family of index intervals [a, b], each of size at least 2 and less
than m. Stable rooted trees (every node has at least two children) are the
dual picture: each interval is the leaf range of a non-root node.

The two degenerate words are ZERO (m = 0) and ID (m = 1); they correspond to
EmptyTree and IdTree.
"""

import json
import logging
import re
from dataclasses import dataclass, field
from typing import Any, Iterator, List, Optional, Sequence, Tuple, Union

from .exceptions import InvalidTreeError, InvalidWordError, ParseError

logger = logging.getLogger(__name__)

Interval = Tuple[int, int]


@dataclass(frozen=True)
class Leaf:
    index: int


@dataclass(frozen=True)
class Node:
    children: Tuple['StableTree', ...]

    def __post_init__(self):
        children = tuple(self.children)
        object.__setattr__(self, 'children', children)
        if len(children) < 2:
            raise InvalidTreeError(f"Node needs at least 2 children, got {len(children)}")
        for child in children:
            if not isinstance(child, (Leaf, Node)):
                raise InvalidTreeError(f"Node child must be a Leaf or Node, got {child!r}")


@dataclass(frozen=True)
class IdTree:
    """The single edge with no nodes"""


@dataclass(frozen=True)
class EmptyTree:
    """The empty tree"""


StableTree = Union[Leaf, Node, IdTree, EmptyTree]

ID_TREE = IdTree()
EMPTY_TREE = EmptyTree()


def validate_intervals(length: int, intervals: Sequence[Interval]) -> Tuple[bool, List[str]]:
    """
    Validate an interval family for a word of the given length

    Returns:
        Tuple of (is_valid: bool, errors: List[str])
    """
    errors = []

    if length < 0:
        errors.append(f"Length must be non-negative, got {length}")
        return False, errors

    seen = set()
    for interval in intervals:
        a, b = interval
        if (a, b) in seen:
            errors.append(f"Duplicate interval [{a},{b}]")
        seen.add((a, b))
        if a < 1 or b > length:
            errors.append(f"Interval [{a},{b}] outside 1..{length}")
        size = b - a + 1
        if size < 2:
            errors.append(f"Interval [{a},{b}] has fewer than 2 elements")
        if size >= length:
            errors.append(f"Interval [{a},{b}] must be smaller than the whole word of length {length}")

    ordered = sorted(seen)
    for i, (a1, b1) in enumerate(ordered):
        for a2, b2 in ordered[i + 1:]:
            if a2 > b1:
                break
            nested = (a1 <= a2 and b2 <= b1) or (a2 <= a1 and b1 <= b2)
            if not nested:
                errors.append(f"Intervals [{a1},{b1}] and [{a2},{b2}] cross")

    return len(errors) == 0, errors


def canonical_order(intervals) -> Tuple[Interval, ...]:
    """Sort by start ascending, end descending, so parents precede children"""
    return tuple(sorted((tuple(iv) for iv in intervals), key=lambda iv: (iv[0], -iv[1])))


@dataclass(frozen=True)
class ParenWord:
    length: int
    intervals: Tuple[Interval, ...] = field(default=())

    def __post_init__(self):
        raw = [tuple(iv) for iv in self.intervals]
        is_valid, errors = validate_intervals(self.length, raw)
        if not is_valid:
            raise InvalidWordError('; '.join(errors))
        object.__setattr__(self, 'intervals', canonical_order(raw))

    @classmethod
    def terminal(cls, m: int) -> 'ParenWord':
        """x1x2...xm with no parentheses"""
        return cls(m, ())

    @property
    def is_zero(self) -> bool:
        return self.length == 0

    @property
    def is_identity(self) -> bool:
        return self.length == 1

    def __str__(self) -> str:
        return render(self)


ZERO = ParenWord(0, ())
ID = ParenWord(1, ())


def render(w: ParenWord) -> str:
    opens = [0] * (w.length + 2)
    closes = [0] * (w.length + 2)
    for a, b in w.intervals:
        opens[a] += 1
        closes[b] += 1

    parts = []
    for i in range(1, w.length + 1):
        parts.append('(' * opens[i] + f"x{i}" + ')' * closes[i])
    return ''.join(parts)


_TOKEN = re.compile(r'\s*(?:(\()|(\))|x(\d+))')


def parse(text: str) -> ParenWord:
    """
    Read a parenthesized word such as "x1((x2x3x4)(x5x6))"

    Variables must be exactly x1...xm in order. Groups of a single variable,
    groups spanning the whole word and repeated groups are rejected.
    """
    position = 0
    expected = 1
    stack: List[int] = []
    groups: List[Interval] = []
    stripped = text.strip()

    while position < len(stripped):
        match = _TOKEN.match(stripped, position)
        if not match or match.end() == position:
            raise ParseError(f"Unexpected character at offset {position}: {stripped[position:position + 10]!r}")
        position = match.end()

        if match.group(1):
            stack.append(expected)
        elif match.group(2):
            if not stack:
                raise ParseError(f"Unbalanced ')' at offset {position - 1}")
            start = stack.pop()
            end = expected - 1
            if end < start:
                raise ParseError(f"Empty parenthesis group at offset {position - 1}")
            groups.append((start, end))
        else:
            index = int(match.group(3))
            if index != expected:
                raise ParseError(f"Expected x{expected}, found x{index}")
            expected += 1

    if stack:
        raise ParseError(f"{len(stack)} unclosed '('")

    length = expected - 1
    if len(set(groups)) != len(groups):
        raise ParseError("Redundant parentheses: a group is repeated")
    for a, b in groups:
        if b == a:
            raise ParseError(f"Group around the single variable x{a}")
        if b - a + 1 == length:
            raise ParseError("Group around the whole word")

    try:
        return ParenWord(length, tuple(groups))
    except InvalidWordError as e:
        raise ParseError(str(e)) from e


def leaf_count(t: StableTree) -> int:
    if isinstance(t, EmptyTree):
        return 0
    if isinstance(t, (IdTree, Leaf)):
        return 1
    return sum(leaf_count(c) for c in t.children)


def leaves(t: StableTree) -> Iterator[Leaf]:
    if isinstance(t, Leaf):
        yield t
    elif isinstance(t, Node):
        for child in t.children:
            yield from leaves(child)


def nodes(t: StableTree) -> Iterator[Node]:
    """All nodes, root first"""
    if isinstance(t, Node):
        yield t
        for child in t.children:
            yield from nodes(child)


def leaf_range(t: Union[Leaf, Node]) -> Interval:
    if isinstance(t, Leaf):
        return (t.index, t.index)
    return (leaf_range(t.children[0])[0], leaf_range(t.children[-1])[1])


def relabel(t: StableTree, start: int = 1) -> StableTree:
    """Renumber leaves left to right starting at `start`"""
    if isinstance(t, (IdTree, EmptyTree)):
        return t
    counter = iter(range(start, start + leaf_count(t)))

    def walk(node):
        if isinstance(node, Leaf):
            return Leaf(next(counter))
        return Node(tuple(walk(c) for c in node.children))

    return walk(t)


def build_children(lo: int, hi: int, intervals: Sequence[Interval]) -> List[StableTree]:
    """Subtrees hanging directly below a node spanning [lo, hi]; intervals in canonical order"""
    children: List[StableTree] = []
    p = lo
    while p <= hi:
        top = next((iv for iv in intervals if iv[0] == p), None)
        if top is None:
            children.append(Leaf(p))
            p += 1
        else:
            inner = [iv for iv in intervals if iv != top and top[0] <= iv[0] and iv[1] <= top[1]]
            children.append(_build(top[0], top[1], inner))
            p = top[1] + 1
    return children


def _build(lo: int, hi: int, intervals: Sequence[Interval]) -> Node:
    return Node(tuple(build_children(lo, hi, intervals)))


def to_tree(w: ParenWord) -> StableTree:
    if w.is_zero:
        return EMPTY_TREE
    if w.is_identity:
        return ID_TREE
    return _build(1, w.length, w.intervals)


def from_tree(t: StableTree) -> ParenWord:
    """
    Inverse of to_tree

    Leaves must be labelled 1..m from left to right; use relabel first for
    trees assembled from pieces.
    """
    if isinstance(t, EmptyTree):
        return ZERO
    if isinstance(t, IdTree):
        return ID
    if isinstance(t, Leaf):
        if t.index != 1:
            raise InvalidTreeError(f"A lone leaf must carry label 1, got {t.index}")
        return ID

    labels = [leaf.index for leaf in leaves(t)]
    if labels != list(range(1, len(labels) + 1)):
        raise InvalidTreeError(f"Leaves must be labelled 1..{len(labels)} in order, got {labels}")

    intervals = [leaf_range(node) for node in nodes(t)][1:]
    return ParenWord(len(labels), tuple(intervals))


def graft(t: Union[Leaf, Node], args: Sequence[StableTree]) -> Optional[StableTree]:
    """
    Graft args[i - 1] onto leaf i of t and prune

    An IdTree argument leaves its leaf alone and an EmptyTree argument
    deletes it. A node left with no inputs is deleted; a node left with one
    input is replaced by that input. Returns None when everything is deleted.
    Leaf labels of the result are not normalized.
    """
    if isinstance(t, Leaf):
        arg = args[t.index - 1]
        if isinstance(arg, EmptyTree):
            return None
        if isinstance(arg, IdTree):
            return Leaf(0)
        return arg

    kept = [g for g in (graft(c, args) for c in t.children) if g is not None]
    if not kept:
        return None
    if len(kept) == 1:
        return kept[0]
    return Node(tuple(kept))


def compose_trees(s: StableTree, args: Sequence[StableTree]) -> StableTree:
    """Operad composition on trees, result relabelled 1..m"""
    if isinstance(s, IdTree):
        return args[0]
    if isinstance(s, EmptyTree):
        return EMPTY_TREE

    result = graft(s, args)
    if result is None:
        return EMPTY_TREE
    if isinstance(result, Leaf):
        return ID_TREE
    if isinstance(result, IdTree):
        return ID_TREE
    return relabel(result)


def valences(t: StableTree) -> List[int]:
    return [len(n.children) for n in nodes(t)]


def tree_to_json(t: StableTree) -> Any:
    if isinstance(t, EmptyTree):
        return {'empty': True}
    if isinstance(t, IdTree):
        return {'id': True}
    if isinstance(t, Leaf):
        return t.index
    return [tree_to_json(c) for c in t.children]


def tree_from_json(data: Any) -> StableTree:
    if isinstance(data, dict):
        if data.get('empty') is True:
            return EMPTY_TREE
        if data.get('id') is True:
            return ID_TREE
        raise InvalidTreeError(f"Unknown degenerate tree form {data!r}")
    if isinstance(data, bool):
        raise InvalidTreeError("Booleans are not tree forms")
    if isinstance(data, int):
        return Leaf(data)
    if isinstance(data, list):
        return Node(tuple(tree_from_json(c) for c in data))
    raise InvalidTreeError(f"Cannot read tree form {data!r}")


def word_to_json(w: ParenWord) -> Any:
    return tree_to_json(to_tree(w))


def word_from_json(data: Any) -> ParenWord:
    return from_tree(tree_from_json(data))


def canonical_json(data: Any) -> str:
    return json.dumps(data, separators=(',', ':'), sort_keys=True)


def word_key(w: ParenWord) -> str:
    """Sort key used for every canonical ordering of words"""
    return canonical_json(word_to_json(w))


def read_word(text: str) -> ParenWord:
    """Accept either a rendered word or its JSON tree form"""
    stripped = text.strip()
    if stripped[:1] in ('[', '{') or stripped.isdigit():
        try:
            return word_from_json(json.loads(stripped))
        except json.JSONDecodeError as e:
            raise ParseError(f"Invalid JSON tree: {e}") from e
    return parse(stripped)
