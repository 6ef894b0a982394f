"""
Finite Category Models

The coherence checker runs against three kinds of category:

- FinCat: explicit object, morphism, identity and composition tables
- DiscreteCategory: a FinCat whose only morphisms are identities
- PosetCategory: the natural numbers under <=, thin and implicit, with a
  finite sample of objects used to instantiate checks

compose(g, f) always means "g after f".
"""

import logging
from typing import Any, Dict, Iterable, List, Optional, Tuple

from .exceptions import CategoryError, MissingTableEntryError

logger = logging.getLogger(__name__)


class Category:
    """Interface shared by every category model"""

    name = 'category'
    is_thin = False

    def objects(self) -> List[Any]:
        """The finite sample of objects checks instantiate over"""
        raise NotImplementedError

    def morphisms(self) -> List[Any]:
        raise NotImplementedError

    def is_object(self, x: Any) -> bool:
        raise NotImplementedError

    def is_morphism(self, f: Any) -> bool:
        raise NotImplementedError

    def source(self, f: Any) -> Any:
        raise NotImplementedError

    def target(self, f: Any) -> Any:
        raise NotImplementedError

    def identity(self, x: Any) -> Any:
        raise NotImplementedError

    def compose(self, g: Any, f: Any) -> Any:
        raise NotImplementedError

    def hom(self, a: Any, b: Any) -> List[Any]:
        raise NotImplementedError

    def generating_morphisms(self) -> List[Any]:
        """Non-identity morphisms used for naturality and functoriality sweeps"""
        return [f for f in self.morphisms() if f != self.identity(self.source(f))]

    def compose_path(self, path: Iterable[Any]) -> Any:
        """Compose morphisms listed in the order they are traversed"""
        path = list(path)
        if not path:
            raise CategoryError("Empty path has no composite; use identity")
        result = path[0]
        for f in path[1:]:
            result = self.compose(f, result)
        return result


class FinCat(Category):
    """
    A finite category given by tables

    Args:
        objects: object identifiers
        morphisms: morphism id -> (source, target)
        identities: object -> identity morphism id
        composition: (g, f) -> g after f, for every composable pair
        validate: check typing, totality, unit and associativity laws
    """

    def __init__(self, objects: Iterable[Any], morphisms: Dict[Any, Tuple[Any, Any]],
                 identities: Dict[Any, Any], composition: Dict[Tuple[Any, Any], Any],
                 name: str = 'fincat', validate: bool = True):
        self.name = name
        self._objects = list(objects)
        self._object_set = set(self._objects)
        self._morphisms = dict(morphisms)
        self._identities = dict(identities)
        self._composition = dict(composition)
        self._homs: Dict[Tuple[Any, Any], List[Any]] = {}
        for f, (a, b) in self._morphisms.items():
            self._homs.setdefault((a, b), []).append(f)
        self.is_thin = all(len(fs) <= 1 for fs in self._homs.values())

        if validate:
            is_valid, errors = self.validate()
            if not is_valid:
                raise CategoryError(f"Invalid category '{name}': " + '; '.join(errors[:5]))

    def validate(self) -> Tuple[bool, List[str]]:
        """
        Check the category axioms on the tables

        Returns:
            Tuple of (is_valid: bool, errors: List[str])
        """
        errors = []

        for f, (a, b) in self._morphisms.items():
            if a not in self._object_set or b not in self._object_set:
                errors.append(f"Morphism {f} has an unknown end {a} -> {b}")

        for x in self._objects:
            i = self._identities.get(x)
            if i is None:
                errors.append(f"Object {x} has no identity")
            elif self._morphisms.get(i) != (x, x):
                errors.append(f"Identity {i} of {x} is not an endomorphism of {x}")
        if errors:
            return False, errors

        for f, (a, b) in self._morphisms.items():
            for g, (c, d) in self._morphisms.items():
                if c != b:
                    continue
                h = self._composition.get((g, f))
                if h is None:
                    errors.append(f"Missing composite {g} o {f}")
                elif self._morphisms.get(h) != (a, d):
                    errors.append(f"Composite {g} o {f} = {h} has the wrong type")
            if self._composition.get((self._identities[b], f)) != f:
                errors.append(f"Left unit law fails at {f}")
            if self._composition.get((f, self._identities[a])) != f:
                errors.append(f"Right unit law fails at {f}")
        if errors:
            return False, errors

        for f, (a, b) in self._morphisms.items():
            for g in self._homs_from(b):
                for h in self._homs_from(self._morphisms[g][1]):
                    left = self._composition[(h, self._composition[(g, f)])]
                    right = self._composition[(self._composition[(h, g)], f)]
                    if left != right:
                        errors.append(f"Associativity fails at ({h}, {g}, {f})")
                        return False, errors

        return True, errors

    def _homs_from(self, a: Any) -> List[Any]:
        return [f for f, (src, _) in self._morphisms.items() if src == a]

    def objects(self) -> List[Any]:
        return list(self._objects)

    def morphisms(self) -> List[Any]:
        return list(self._morphisms)

    def is_object(self, x: Any) -> bool:
        return x in self._object_set

    def is_morphism(self, f: Any) -> bool:
        try:
            return f in self._morphisms
        except TypeError:
            return False

    def source(self, f: Any) -> Any:
        try:
            return self._morphisms[f][0]
        except (KeyError, TypeError):
            raise MissingTableEntryError(f"Unknown morphism {f!r} in {self.name}")

    def target(self, f: Any) -> Any:
        try:
            return self._morphisms[f][1]
        except (KeyError, TypeError):
            raise MissingTableEntryError(f"Unknown morphism {f!r} in {self.name}")

    def identity(self, x: Any) -> Any:
        try:
            return self._identities[x]
        except (KeyError, TypeError):
            raise MissingTableEntryError(f"Unknown object {x!r} in {self.name}")

    def compose(self, g: Any, f: Any) -> Any:
        if self.target(f) != self.source(g):
            raise CategoryError(f"Cannot compose {g} after {f}: {self.target(f)} != {self.source(g)}")
        return self._composition[(g, f)]

    def hom(self, a: Any, b: Any) -> List[Any]:
        return list(self._homs.get((a, b), []))

    def tables(self) -> Dict[str, Any]:
        """Raw tables, for serialization"""
        return {
            'objects': list(self._objects),
            'morphisms': dict(self._morphisms),
            'identities': dict(self._identities),
            'composition': dict(self._composition)
        }


class DiscreteCategory(FinCat):
    """Objects with identity morphisms only; identity ids are 'id_<object>'"""

    def __init__(self, objects: Iterable[Any], name: str = 'discrete'):
        objects = list(objects)
        morphisms = {f"id_{x}": (x, x) for x in objects}
        identities = {x: f"id_{x}" for x in objects}
        composition = {(f"id_{x}", f"id_{x}"): f"id_{x}" for x in objects}
        super().__init__(objects, morphisms, identities, composition, name=name, validate=False)


class PosetCategory(Category):
    """
    The natural numbers under <=

    Morphisms are pairs (a, b) with a <= b. Every natural number is an
    object; sample_max only bounds which objects checks instantiate over.
    """

    is_thin = True

    def __init__(self, sample_max: int = 8, name: str = 'poset'):
        self.name = name
        self.sample_max = sample_max

    def objects(self) -> List[int]:
        return list(range(self.sample_max + 1))

    def morphisms(self) -> List[Tuple[int, int]]:
        sample = self.objects()
        return [(a, b) for a in sample for b in sample if a <= b]

    def generating_morphisms(self) -> List[Tuple[int, int]]:
        return [(a, a + 1) for a in range(self.sample_max)]

    def is_object(self, x: Any) -> bool:
        return isinstance(x, int) and not isinstance(x, bool) and x >= 0

    def is_morphism(self, f: Any) -> bool:
        return (isinstance(f, tuple) and len(f) == 2
                and self.is_object(f[0]) and self.is_object(f[1]) and f[0] <= f[1])

    def source(self, f: Tuple[int, int]) -> int:
        if not self.is_morphism(f):
            raise CategoryError(f"{f!r} is not a morphism of {self.name}")
        return f[0]

    def target(self, f: Tuple[int, int]) -> int:
        if not self.is_morphism(f):
            raise CategoryError(f"{f!r} is not a morphism of {self.name}")
        return f[1]

    def identity(self, x: int) -> Tuple[int, int]:
        return (x, x)

    def compose(self, g: Tuple[int, int], f: Tuple[int, int]) -> Tuple[int, int]:
        if self.target(f) != self.source(g):
            raise CategoryError(f"Cannot compose {g} after {f}")
        return (f[0], g[1])

    def hom(self, a: int, b: int) -> List[Tuple[int, int]]:
        return [(a, b)] if a <= b else []


def is_identity(category: Category, f: Any) -> bool:
    return f == category.identity(category.source(f))


def check_typed(category: Category, f: Any, source: Any, target: Any) -> Optional[str]:
    """None if f is a morphism source -> target, else a description of the mismatch"""
    if not category.is_morphism(f):
        return f"{f!r} is not a morphism"
    actual = (category.source(f), category.target(f))
    if actual != (source, target):
        return f"{f!r} has type {actual[0]!r} -> {actual[1]!r}, expected {source!r} -> {target!r}"
    return None
