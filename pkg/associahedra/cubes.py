"""
Cubical Diagrams

A cube diagram of dimension d places an object at each vertex of {0,1}^d
and a morphism on each edge v -> v + e_i. It commutes when every pair of
monotone edge paths between two vertices composes to the same morphism;
that happens exactly when every 2-dimensional face commutes.
"""

import itertools
import logging
import random
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Set, Tuple

from .categories import Category, FinCat, check_typed
from .exceptions import CategoryError
from .reports import make_report, register_replay, witness

logger = logging.getLogger(__name__)

Vertex = Tuple[int, ...]
Face = Tuple[Vertex, int, int]


def _step(v: Vertex, i: int) -> Vertex:
    return v[:i] + (1,) + v[i + 1:]


def cube_vertices(d: int) -> List[Vertex]:
    return list(itertools.product((0, 1), repeat=d))


def cube_faces(d: int) -> List[Face]:
    """(base vertex, i, j) with i < j and both coordinates 0 at the base"""
    return [(v, i, j) for v in cube_vertices(d)
            for i in range(d) for j in range(i + 1, d) if v[i] == 0 and v[j] == 0]


@dataclass
class CubeDiagram:
    category: Category
    dimension: int
    vertices: Dict[Vertex, Any]
    edges: Dict[Tuple[Vertex, int], Any] = field(default_factory=dict)

    def __post_init__(self):
        for v in cube_vertices(self.dimension):
            if v not in self.vertices:
                raise CategoryError(f"Cube vertex {v} has no object")
        for v in cube_vertices(self.dimension):
            for i in range(self.dimension):
                if v[i] == 1:
                    continue
                if (v, i) not in self.edges:
                    raise CategoryError(f"Cube edge from {v} along {i} has no morphism")
                problem = check_typed(self.category, self.edges[(v, i)],
                                      self.vertices[v], self.vertices[_step(v, i)])
                if problem:
                    raise CategoryError(f"Cube edge from {v} along {i}: {problem}")

    def path_composite(self, start: Vertex, order: Tuple[int, ...]) -> Any:
        if not order:
            return self.category.identity(self.vertices[start])
        morphisms = []
        v = start
        for i in order:
            morphisms.append(self.edges[(v, i)])
            v = _step(v, i)
        return self.category.compose_path(morphisms)


def check_cube_commutes(diagram: CubeDiagram) -> Tuple[bool, bool]:
    """
    Returns:
        (faces_ok, all_paths_equal)
    """
    faces_ok = True
    for v, i, j in cube_faces(diagram.dimension):
        if diagram.path_composite(v, (i, j)) != diagram.path_composite(v, (j, i)):
            faces_ok = False
            break

    all_paths_equal = True
    for u in cube_vertices(diagram.dimension):
        free = [i for i in range(diagram.dimension) if u[i] == 0]
        for size in range(2, len(free) + 1):
            for coords in itertools.combinations(free, size):
                composites = {repr(diagram.path_composite(u, order))
                              for order in itertools.permutations(coords)}
                if len(composites) > 1:
                    all_paths_equal = False
                    break
            if not all_paths_equal:
                break
        if not all_paths_equal:
            break

    return faces_ok, all_paths_equal


class _UnionFind:
    def __init__(self):
        self.parent: Dict[Any, Any] = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def _vertex_name(v: Vertex) -> str:
    return ''.join(map(str, v))


def free_cube_category(d: int, imposed: Set[Face]) -> Tuple[FinCat, CubeDiagram]:
    """
    The free category on the d-cube graph modulo some 2-face relations

    A morphism u -> v is a class of monotone edge paths; two paths are
    identified when one becomes the other by swapping adjacent steps i, j
    taken at a base vertex w with (w, i, j) in `imposed`.
    """
    imposed = {(w, min(i, j), max(i, j)) for w, i, j in imposed}
    vertices = cube_vertices(d)
    morphisms: Dict[str, Tuple[str, str]] = {}
    identities: Dict[str, str] = {}
    class_of: Dict[Tuple[Vertex, Tuple[int, ...]], str] = {}

    for u in vertices:
        for v in vertices:
            if any(a > b for a, b in zip(u, v)):
                continue
            coords = [i for i in range(d) if u[i] != v[i]]
            paths = list(itertools.permutations(coords))
            classes = _UnionFind()
            for path in paths:
                classes.find(path)
                w = u
                for t in range(len(path) - 1):
                    i, j = path[t], path[t + 1]
                    if (w, min(i, j), max(i, j)) in imposed:
                        swapped = path[:t] + (j, i) + path[t + 2:]
                        classes.union(path, swapped)
                    w = _step(w, i)
            for path in paths:
                name = f"{_vertex_name(u)}>{_vertex_name(v)}:{''.join(map(str, classes.find(path)))}"
                class_of[(u, path)] = name
                morphisms[name] = (_vertex_name(u), _vertex_name(v))
            if u == v:
                identities[_vertex_name(u)] = class_of[(u, ())]

    def path_of(name: str) -> Tuple[int, ...]:
        return tuple(int(c) for c in name.split(':')[1])

    def start_of(name: str) -> Vertex:
        return tuple(int(c) for c in name.split('>')[0])

    composition = {}
    for f, (a, b) in morphisms.items():
        for g, (c, _) in morphisms.items():
            if c == b:
                composition[(g, f)] = class_of[(start_of(f), path_of(f) + path_of(g))]

    category = FinCat([_vertex_name(v) for v in vertices], morphisms, identities, composition,
                      name=f"free_cube_{d}")
    edges = {(v, i): class_of[(v, (i,))] for v in vertices for i in range(d) if v[i] == 0}
    diagram = CubeDiagram(category, d, {v: _vertex_name(v) for v in vertices}, edges)
    return category, diagram


def random_cube_trials(count: int = 1000, seed: int = 0, max_dim: int = 4) -> Dict[str, Any]:
    """Sample quotient cubes and confirm faces_ok implies all_paths_equal"""
    rng = random.Random(seed)
    commuting = 0
    for trial in range(count):
        d = rng.randint(2, max_dim)
        faces = cube_faces(d)
        density = rng.choice([0.5, 0.8, 1.0, 1.0])
        imposed = {face for face in faces if rng.random() < density}
        _, diagram = free_cube_category(d, imposed)
        faces_ok, all_paths_equal = check_cube_commutes(diagram)
        if faces_ok:
            commuting += 1
        if faces_ok and not all_paths_equal:
            return make_report('cubical_lemma', trial + 1, witness(
                'cube_lemma', {'dimension': d, 'imposed': _faces_json(imposed)},
                expected='all paths equal', actual='paths differ'))
    logger.info(f"Cube trials: {commuting} of {count} samples had commuting faces")
    return make_report('cubical_lemma', count)


def _faces_json(faces: Set[Face]) -> List[List[Any]]:
    return sorted([list(v), i, j] for v, i, j in faces)


@register_replay('cube_lemma')
def _replay_cube_lemma(instance: Dict[str, Any], **_) -> bool:
    imposed = {(tuple(v), i, j) for v, i, j in instance['imposed']}
    _, diagram = free_cube_category(instance['dimension'], imposed)
    faces_ok, all_paths_equal = check_cube_commutes(diagram)
    return faces_ok and not all_paths_equal


def failing_face(diagram: CubeDiagram) -> Optional[Face]:
    for v, i, j in cube_faces(diagram.dimension):
        if diagram.path_composite(v, (i, j)) != diagram.path_composite(v, (j, i)):
            return (v, i, j)
    return None
