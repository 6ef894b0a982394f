"""
The Associahedral Poset and Operad

K_m is the poset of parenthesized words of length m, ordered by reverse
inclusion of interval sets: a <= b when b is obtained from a by dropping
parentheses. gamma grafts words into the letters of an outer word. The
valence filtration K^(n) keeps the words whose trees have nodes of input
valence at most n.
"""

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from config import current_setting

from .exceptions import ArityMismatchError, CapExceededError, InvalidWordError
from .reports import make_report, register_replay, witness
from .wordtree import (ID, ZERO, Interval, ParenWord, compose_trees, from_tree, parse, render,
                       to_tree, valences, word_key)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class KMorphism:
    """The unique arrow source -> target in K_m"""
    source: ParenWord
    target: ParenWord

    def __post_init__(self):
        if self.source.length != self.target.length:
            raise InvalidWordError(
                f"Morphism ends have lengths {self.source.length} and {self.target.length}")
        if not set(self.target.intervals) <= set(self.source.intervals):
            raise InvalidWordError(f"No morphism {render(self.source)} -> {render(self.target)}")

    @property
    def dropped(self) -> Tuple[Interval, ...]:
        kept = set(self.target.intervals)
        return tuple(iv for iv in self.source.intervals if iv not in kept)

    @property
    def is_identity(self) -> bool:
        return self.source == self.target

    def __str__(self) -> str:
        return f"{render(self.source)} -> {render(self.target)}"


@dataclass(frozen=True)
class CubeIso:
    """Order isomorphism between the subsets of `dropped` and [source, target]"""
    source: ParenWord
    target: ParenWord
    dropped: Tuple[Interval, ...]

    @property
    def dimension(self) -> int:
        return len(self.dropped)

    def word_for(self, retained: Sequence[Interval]) -> ParenWord:
        """The word keeping exactly `retained` from the dropped list"""
        return ParenWord(self.target.length, self.target.intervals + tuple(retained))

    def vertices(self) -> Iterator[Tuple[Tuple[Interval, ...], ParenWord]]:
        for size in range(self.dimension + 1):
            for retained in itertools.combinations(self.dropped, size):
                yield retained, self.word_for(retained)


def _check_cap(m: int):
    cap = current_setting('MAX_M')
    if m > cap:
        raise CapExceededError(f"m={m} is above the enumeration cap {cap} (raise ASSOC_MAX_M)")
    if m < 0:
        raise InvalidWordError(f"m must be non-negative, got {m}")


def leq(a: ParenWord, b: ParenWord) -> bool:
    if a.length != b.length:
        raise ArityMismatchError(f"Cannot compare words of lengths {a.length} and {b.length}")
    return set(b.intervals) <= set(a.intervals)


@lru_cache(maxsize=None)
def _families(lo: int, hi: int) -> Tuple[Tuple[Interval, ...], ...]:
    """Interval sets strictly inside a node spanning [lo, hi]"""
    results = []
    size = hi - lo + 1
    # a composition of the span into at least two consecutive parts
    for cuts in range(1, size):
        for positions in itertools.combinations(range(lo + 1, hi + 1), cuts):
            bounds = (lo,) + positions + (hi + 1,)
            parts = [(bounds[i], bounds[i + 1] - 1) for i in range(len(bounds) - 1)]
            choices = []
            for a, b in parts:
                if a == b:
                    choices.append([()])
                else:
                    choices.append([((a, b),) + inner for inner in _families(a, b)])
            for combo in itertools.product(*choices):
                results.append(tuple(iv for piece in combo for iv in piece))
    return tuple(results)


@lru_cache(maxsize=None)
def _enumerate(m: int) -> Tuple[ParenWord, ...]:
    if m == 0:
        return (ZERO,)
    if m == 1:
        return (ID,)
    words = [ParenWord(m, family) for family in _families(1, m)]
    words.sort(key=word_key)
    logger.debug(f"Enumerated {len(words)} words of length {m}")
    return tuple(words)


def enumerate_words(m: int, n: Optional[int] = None) -> List[ParenWord]:
    """
    All objects of K_m (or of K^(n)_m) in canonical order

    Args:
        m: word length, at most the configured cap
        n: optional filtration bound; None means no bound
    """
    _check_cap(m)
    words = _enumerate(m)
    if n is None:
        return list(words)
    return [w for w in words if filtration_level(w) <= n]


def graft_spans(intervals: Iterable[Interval], args: Sequence[ParenWord]) -> Tuple[int, Set[Interval]]:
    """
    Leaf spans of the nodes of an outer tree with args grafted on, before pruning

    Nodes of arg i sit over positions offset_i + 1 .. offset_i + len(arg i);
    an outer node over [lo, hi] sits over the positions of args lo..hi. Spans
    of size 0 or 1 are nodes the pruning deletes, and repeated spans are the
    chains of unary nodes it collapses.
    """
    offsets = [0]
    for a in args:
        offsets.append(offsets[-1] + a.length)
    spans = set()
    for a, offset in zip(args, offsets):
        spans.add((offset + 1, offset + a.length))
        spans.update((lo + offset, hi + offset) for lo, hi in a.intervals)
    spans.update((offsets[lo - 1] + 1, offsets[hi]) for lo, hi in intervals)
    return offsets[-1], spans


@lru_cache(maxsize=1 << 16)
def _gamma(s: ParenWord, args: Tuple[ParenWord, ...]) -> ParenWord:
    total, spans = graft_spans(s.intervals, args)
    return ParenWord(total, tuple(iv for iv in spans if 2 <= iv[1] - iv[0] + 1 < total))


def gamma(s: ParenWord, args: Sequence[ParenWord]) -> ParenWord:
    args = tuple(args)
    if len(args) != s.length:
        raise ArityMismatchError(f"gamma needs {s.length} arguments, got {len(args)}")
    return _gamma(s, args)


def gamma_by_trees(s: ParenWord, args: Sequence[ParenWord]) -> ParenWord:
    """gamma computed by grafting and pruning stable trees"""
    return from_tree(compose_trees(to_tree(s), [to_tree(a) for a in args]))


def substitute(length: int, i: int, w: Any, unit: Any = ID) -> Tuple[Any, ...]:
    """`length` copies of unit with w in slot i (1-based)"""
    return (unit,) * (i - 1) + (w,) + (unit,) * (length - i)


def partial_compose(s: ParenWord, i: int, t: ParenWord) -> ParenWord:
    """s o_i t: graft t into letter i of s"""
    if not 1 <= i <= s.length:
        raise ArityMismatchError(f"Slot {i} is outside 1..{s.length}")
    return gamma(s, substitute(s.length, i, t))


def fold_partial(act: Callable[[Any, int, ParenWord], Any], x: Any,
                 args: Sequence[ParenWord]) -> Any:
    """
    gamma(x; args) rebuilt from single-slot compositions

    ZERO slots are removed first, right to left, then the remaining
    non-identity slots are filled right to left, so no intermediate result
    is longer than the final one.
    """
    args = list(args)
    for i in reversed(range(len(args))):
        if args[i].is_zero:
            x = act(x, i + 1, ZERO)
            del args[i]
    for i in reversed(range(len(args))):
        if not args[i].is_identity:
            x = act(x, i + 1, args[i])
    return x


LawInstance = Tuple[str, Any, int, ParenWord, int, ParenWord]


def partial_law_instances(domain: Callable[[int], Sequence[Any]], bound: int) -> Iterator[LawInstance]:
    """
    Instances of the sequential and parallel laws for single-slot composition

    Yields (law, x, i, t, k, u) with x drawn from domain(p). For the
    sequential law k is a slot of t; for the parallel law k is a slot of x
    to the right of i. Every word the two sides pass through has length at
    most bound.
    """
    for p in range(1, bound + 1):
        for x in domain(p):
            for i in range(1, p + 1):
                for q in range(bound + 1):
                    if p + q - 1 > bound:
                        break
                    for t in enumerate_words(q):
                        for r in range(bound + 1):
                            if p + q + r - 2 > bound:
                                break
                            for u in enumerate_words(r):
                                for j in range(1, q + 1):
                                    yield 'sequential', x, i, t, j, u
                                if p + r - 1 <= bound:
                                    for k in range(i + 1, p + 1):
                                        yield 'parallel', x, i, t, k, u


def partial_law_sides(act: Callable[[Any, int, ParenWord], Any], law: str, x: Any, i: int,
                      t: ParenWord, k: int, u: ParenWord) -> Tuple[Any, Any]:
    """
    Both sides of one law instance

    sequential: (x o_i t) o_(i-1+k) u = x o_i (t o_k u)
    parallel:   (x o_i t) o_(k-1+|t|) u = (x o_k u) o_i t, for i < k
    """
    if law == 'sequential':
        return act(act(x, i, t), i - 1 + k, u), act(x, i, partial_compose(t, k, u))
    return act(act(x, i, t), k - 1 + t.length, u), act(act(x, k, u), i, t)


def gamma_morphism(f: KMorphism, args: Sequence[KMorphism]) -> KMorphism:
    """gamma on morphisms, defined componentwise on sources and targets"""
    return KMorphism(gamma(f.source, [g.source for g in args]),
                     gamma(f.target, [g.target for g in args]))


def covers(w: ParenWord) -> List[KMorphism]:
    """Indecomposable morphisms out of w, one per dropped interval"""
    return [KMorphism(w, ParenWord(w.length, tuple(iv for iv in w.intervals if iv != drop)))
            for drop in w.intervals]


def decompose(f: KMorphism) -> List[KMorphism]:
    """Factor f into indecomposables, dropping intervals in `dropped` order"""
    steps = []
    current = f.source
    for drop in f.dropped:
        following = ParenWord(current.length, tuple(iv for iv in current.intervals if iv != drop))
        steps.append(KMorphism(current, following))
        current = following
    return steps


def interval_cube(f: KMorphism) -> CubeIso:
    return CubeIso(f.source, f.target, f.dropped)


def interval_elements(f: KMorphism) -> List[ParenWord]:
    """Every w with source <= w <= target, found by filtering K_m"""
    return [w for w in enumerate_words(f.source.length) if leq(f.source, w) and leq(w, f.target)]


def filtration_level(w: ParenWord) -> int:
    if w.is_zero:
        return 0
    if w.is_identity:
        return 1
    return max(valences(to_tree(w)))


def in_filtration(w: ParenWord, n: Optional[int]) -> bool:
    return n is None or filtration_level(w) <= n


def cell_dim(w: ParenWord) -> int:
    if w.length < 2:
        raise InvalidWordError(f"cell_dim is undefined for the degenerate word of length {w.length}")
    return sum(v - 2 for v in valences(to_tree(w)))


@dataclass(frozen=True)
class FVector:
    m: int
    n: Optional[int]
    counts: Tuple[int, ...]

    @property
    def euler(self) -> int:
        return sum((-1) ** d * c for d, c in enumerate(self.counts))

    def to_dict(self) -> Dict[str, Any]:
        return {'m': self.m, 'n': self.n, 'counts': list(self.counts), 'euler': self.euler}


def f_vector(m: int, n: Optional[int] = None) -> FVector:
    """Counts of K^(n)_m by cell dimension 0..m-2, plus the Euler characteristic"""
    _check_cap(m)
    if m < 2:
        raise InvalidWordError(f"f_vector needs m >= 2, got {m}")
    counts = [0] * (m - 1)
    for w in enumerate_words(m, n):
        counts[cell_dim(w)] += 1
    return FVector(m, n, tuple(counts))


def skeleton_excess(m: int, n: int) -> List[ParenWord]:
    """Elements of K^(n)_m whose cell is above dimension n - 2"""
    return [w for w in enumerate_words(m, n) if cell_dim(w) > n - 2]


def maximal_cubes(m: int) -> List[KMorphism]:
    """Morphisms from each vertex (binary word) to the terminal word"""
    terminal = ParenWord.terminal(m)
    return [KMorphism(w, terminal) for w in enumerate_words(m) if cell_dim(w) == 0]


# Checks

def check_interval_lemma(m: int) -> Dict[str, Any]:
    """Every interval [source, target] of K_m is the cube on its dropped intervals"""
    words = enumerate_words(m)
    checked = 0
    for source in words:
        for target in words:
            if not leq(source, target):
                continue
            checked += 1
            f = KMorphism(source, target)
            cube = interval_cube(f)
            by_subset = dict(cube.vertices())
            brute = interval_elements(f)
            if sorted(map(word_key, by_subset.values())) != sorted(map(word_key, brute)):
                return make_report('interval_lemma', checked, witness(
                    'interval_cube', {'source': render(source), 'target': render(target)},
                    expected=2 ** cube.dimension, actual=len(brute)))
            for r1, w1 in by_subset.items():
                for r2, w2 in by_subset.items():
                    if leq(w1, w2) != set(r2).issubset(r1):
                        return make_report('interval_lemma', checked, witness(
                            'interval_cube', {'source': render(source), 'target': render(target)},
                            expected='subset order', actual=[render(w1), render(w2)]))
    return make_report('interval_lemma', checked)


@register_replay('interval_cube')
def _replay_interval_cube(instance: Dict[str, Any], **_) -> bool:
    f = KMorphism(parse(instance['source']), parse(instance['target']))
    cube = interval_cube(f)
    words = [w for _, w in cube.vertices()]
    brute = interval_elements(f)
    if sorted(map(word_key, words)) != sorted(map(word_key, brute)):
        return True
    return any(leq(w1, w2) != set(r2).issubset(r1)
               for r1, w1 in cube.vertices() for r2, w2 in cube.vertices())


def check_skeleton(m: int) -> Dict[str, Any]:
    """Every cell of dimension <= n - 2 lies in K^(n)_m, for all n"""
    checked = 0
    for n in range(2, m + 1):
        for w in enumerate_words(m):
            checked += 1
            if cell_dim(w) <= n - 2 and filtration_level(w) > n:
                return make_report('skeleton', checked, witness(
                    'skeleton', {'word': render(w), 'n': n},
                    expected=f"level <= {n}", actual=filtration_level(w)))
    return make_report('skeleton', checked)


@register_replay('skeleton')
def _replay_skeleton(instance: Dict[str, Any], **_) -> bool:
    w = parse(instance['word'])
    return cell_dim(w) <= instance['n'] - 2 and filtration_level(w) > instance['n']


def check_downward_closure(m: int) -> Dict[str, Any]:
    """leq(a, b) and b in K^(n) imply a in K^(n)"""
    words = enumerate_words(m)
    checked = 0
    for a in words:
        for b in words:
            if leq(a, b):
                checked += 1
                if filtration_level(a) > filtration_level(b):
                    return make_report('downward_closure', checked, witness(
                        'downward_closure', {'a': render(a), 'b': render(b)},
                        expected=f"<= {filtration_level(b)}", actual=filtration_level(a)))
    return make_report('downward_closure', checked)


@register_replay('downward_closure')
def _replay_downward_closure(instance: Dict[str, Any], **_) -> bool:
    a, b = parse(instance['a']), parse(instance['b'])
    return leq(a, b) and filtration_level(a) > filtration_level(b)


def arg_tuples(length: int, max_total: int, min_length: int = 0) -> Iterator[Tuple[ParenWord, ...]]:
    """Tuples of `length` words, each at least min_length long, whose lengths sum to at most max_total"""
    def extend(prefix, remaining, budget):
        if remaining == 0:
            yield tuple(prefix)
            return
        for k in range(min_length, budget - min_length * (remaining - 1) + 1):
            for w in enumerate_words(k):
                yield from extend(prefix + [w], remaining - 1, budget - k)

    yield from extend([], length, max_total)


def split_compose(inner: Sequence[ParenWord], outer: Sequence[ParenWord]) -> List[ParenWord]:
    """gamma(inner[i]; the block of outer sitting over inner[i]), for each i"""
    composed = []
    offset = 0
    for t in inner:
        composed.append(gamma(t, outer[offset:offset + t.length]))
        offset += t.length
    return composed


def _render_all(words: Sequence[ParenWord]) -> List[str]:
    return [render(w) for w in words]


def _law_instance(x: ParenWord, i: int, t: ParenWord, k: int, u: ParenWord) -> Dict[str, Any]:
    return {'x': render(x), 'i': i, 't': render(t), 'k': k, 'u': render(u)}


def check_operad_laws(max_total: int = 5) -> Dict[str, Any]:
    """
    Exhaustive check of the operad laws for gamma up to total length max_total

    Unit laws, arity bookkeeping and monotonicity in every slot run over all
    (s, args). Associativity is checked in two ways: every gamma(s; args)
    must equal the fold of its single-slot compositions, and the single-slot
    compositions must satisfy the sequential and parallel laws. Together
    with the unit laws these give associativity of gamma on every instance
    within the bound. The nested law is also checked directly on arguments
    of positive length.
    """
    checked = 0

    for m in range(max_total + 1):
        for s in enumerate_words(m):
            checked += 2
            if gamma(s, [ID] * m) != s:
                return make_report('operad_laws', checked, witness(
                    'gamma_unit_right', {'s': render(s)}, expected=render(s),
                    actual=render(gamma(s, [ID] * m))))
            if gamma(ID, [s]) != s:
                return make_report('operad_laws', checked, witness(
                    'gamma_unit_left', {'s': render(s)}, expected=render(s),
                    actual=render(gamma(ID, [s]))))

    for m in range(max_total + 1):
        for s in enumerate_words(m):
            for args in arg_tuples(m, max_total):
                checked += 2
                result = gamma(s, args)
                total = sum(a.length for a in args)
                if result.length != total:
                    return make_report('operad_laws', checked, witness(
                        'gamma_arity', {'s': render(s), 'args': _render_all(args)},
                        expected=total, actual=result.length))
                folded = fold_partial(partial_compose, s, args)
                if folded != result:
                    return make_report('operad_laws', checked, witness(
                        'gamma_decomposition', {'s': render(s), 'args': _render_all(args)},
                        expected=render(result), actual=render(folded)))
                for f in covers(s):
                    checked += 1
                    if not leq(result, gamma(f.target, args)):
                        return make_report('operad_laws', checked, witness(
                            'gamma_monotone_outer',
                            {'s': render(s), 't': render(f.target), 'args': _render_all(args)},
                            expected='leq', actual=[render(result), render(gamma(f.target, args))]))
                for i, a in enumerate(args):
                    for g in covers(a):
                        checked += 1
                        moved = args[:i] + (g.target,) + args[i + 1:]
                        if not leq(result, gamma(s, moved)):
                            return make_report('operad_laws', checked, witness(
                                'gamma_monotone_arg',
                                {'s': render(s), 'args': _render_all(args), 'position': i,
                                 'replacement': render(g.target)},
                                expected='leq', actual=[render(result), render(gamma(s, moved))]))

    for law, x, i, t, k, u in partial_law_instances(enumerate_words, max_total):
        checked += 1
        left, right = partial_law_sides(partial_compose, law, x, i, t, k, u)
        if left != right:
            return make_report('operad_laws', checked, witness(
                f"gamma_{law}", _law_instance(x, i, t, k, u),
                expected=render(right), actual=render(left)))

    for m in range(1, max_total + 1):
        for s in enumerate_words(m):
            for inner in arg_tuples(m, max_total, min_length=1):
                middle = gamma(s, inner)
                for outer in arg_tuples(middle.length, max_total, min_length=1):
                    checked += 1
                    left = gamma(middle, outer)
                    right = gamma(s, split_compose(inner, outer))
                    if left != right:
                        return make_report('operad_laws', checked, witness(
                            'gamma_associativity',
                            {'s': render(s), 'inner': _render_all(inner), 'outer': _render_all(outer)},
                            expected=render(right), actual=render(left)))

    logger.info(f"Operad laws hold up to total length {max_total} ({checked} checks)")
    return make_report('operad_laws', checked)


@register_replay('gamma_unit_right')
def _replay_unit_right(instance: Dict[str, Any], **_) -> bool:
    s = parse(instance['s'])
    return gamma(s, [ID] * s.length) != s


@register_replay('gamma_unit_left')
def _replay_unit_left(instance: Dict[str, Any], **_) -> bool:
    s = parse(instance['s'])
    return gamma(ID, [s]) != s


@register_replay('gamma_arity')
def _replay_arity(instance: Dict[str, Any], **_) -> bool:
    args = [parse(a) for a in instance['args']]
    return gamma(parse(instance['s']), args).length != sum(a.length for a in args)


@register_replay('gamma_decomposition')
def _replay_decomposition(instance: Dict[str, Any], **_) -> bool:
    s = parse(instance['s'])
    args = [parse(a) for a in instance['args']]
    return fold_partial(partial_compose, s, args) != gamma(s, args)


@register_replay('gamma_monotone_outer')
def _replay_monotone_outer(instance: Dict[str, Any], **_) -> bool:
    args = [parse(a) for a in instance['args']]
    return not leq(gamma(parse(instance['s']), args), gamma(parse(instance['t']), args))


@register_replay('gamma_monotone_arg')
def _replay_monotone_arg(instance: Dict[str, Any], **_) -> bool:
    s = parse(instance['s'])
    args = [parse(a) for a in instance['args']]
    moved = list(args)
    moved[instance['position']] = parse(instance['replacement'])
    return not leq(gamma(s, args), gamma(s, moved))


def _replay_partial_law(law: str):
    def replay(instance: Dict[str, Any], **_) -> bool:
        left, right = partial_law_sides(partial_compose, law, parse(instance['x']), instance['i'],
                                        parse(instance['t']), instance['k'], parse(instance['u']))
        return left != right
    return replay


for _law in ('sequential', 'parallel'):
    register_replay(f"gamma_{_law}")(_replay_partial_law(_law))


@register_replay('gamma_associativity')
def _replay_associativity(instance: Dict[str, Any], **_) -> bool:
    s = parse(instance['s'])
    inner = [parse(a) for a in instance['inner']]
    outer = [parse(a) for a in instance['outer']]
    return gamma(gamma(s, inner), outer) != gamma(s, split_compose(inner, outer))
