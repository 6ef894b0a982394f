"""
JSON Documents

Pydantic schemas for every document the CLI reads or writes, plus loaders
that turn category, An and directed documents into live objects. Output is
canonical: sorted keys, compact separators, one trailing newline.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from config import current_setting

from .categories import FinCat, is_identity
from .coherence import AnData
from .directed import thin_box_on_morphisms
from .exceptions import AssociahedraError, MissingTableEntryError

logger = logging.getLogger(__name__)


def _schema_version() -> str:
    return current_setting('SCHEMA_VERSION')


class Document(BaseModel):
    schema_version: str = Field(default_factory=_schema_version)


# Output documents

class WordListDocument(Document):
    m: int
    n: Optional[int] = None
    count: int
    words: List[str]
    trees: List[Any]


class FVectorDocument(Document):
    m: int
    n: Optional[int] = None
    counts: List[int]
    euler: int


class HasseDocument(Document):
    name: str
    nodes: List[str]
    edges: List[List[str]]


class ComposeDocument(Document):
    outer: str
    args: List[str]
    word: str
    tree: Any


class LambdaDocument(Document):
    word: str
    tree: str
    binary: Any


class FiberDocument(Document):
    tree: str
    size: int
    fiber: List[str]
    min: str
    max: str


class ProjectDocument(Document):
    source: str
    abc: List[int]
    word: str
    tree: Any


class ReportDocument(Document):
    model_config = ConfigDict(extra='allow')

    success: bool
    check: str
    checked: int
    failure: Optional[Dict[str, Any]] = None
    parts: Optional[List[Dict[str, Any]]] = None
    skipped: Optional[str] = None


class RectifyDocument(Document):
    fixture: str
    max_len: int
    objects: List[List[Any]]
    hom_sizes: Dict[str, int]
    unit_reflecting: bool
    report: Dict[str, Any]


# Category, An and directed documents

class MorphismEntry(BaseModel):
    id: str
    src: str
    dst: str


class IdentityEntry(BaseModel):
    object: str
    morphism: str


class CompositionEntry(BaseModel):
    """g after f"""
    g: str
    f: str
    result: str


class CategoryDocument(BaseModel):
    name: str = 'fincat'
    objects: List[str]
    morphisms: List[MorphismEntry]
    identities: List[IdentityEntry]
    composition: List[CompositionEntry] = Field(default_factory=list)


class MuEntry(BaseModel):
    args: List[str]
    value: str


class MuMorphismEntry(BaseModel):
    args: List[str]
    value: str


class AlphaEntry(BaseModel):
    a: List[str]
    b: List[str]
    c: List[str]
    value: str


class AnDocument(Document):
    category: CategoryDocument
    unit: str
    n: Optional[int] = None
    bound: Optional[int] = None
    mu: List[MuEntry] = Field(default_factory=list)
    mu_morphisms: List[MuMorphismEntry] = Field(default_factory=list)
    alpha: List[AlphaEntry] = Field(default_factory=list)


class BoxEntry(BaseModel):
    left: str
    right: str
    value: str


class BoxMorphismEntry(BaseModel):
    left: str
    right: str
    value: str


class EtaEntry(BaseModel):
    a: str
    b: str
    c: str
    value: str


class DirectedDocument(Document):
    category: CategoryDocument
    unit: str
    bound: Optional[int] = None
    box: List[BoxEntry] = Field(default_factory=list)
    box_morphisms: List[BoxMorphismEntry] = Field(default_factory=list)
    eta: List[EtaEntry] = Field(default_factory=list)


def dump_json(document: Union[BaseModel, Dict[str, Any], List[Any]]) -> str:
    data = document.model_dump(exclude_none=True) if isinstance(document, BaseModel) else document
    return json.dumps(data, sort_keys=True, separators=(',', ':'), ensure_ascii=False) + '\n'


def _read(path: Union[str, Path]) -> Dict[str, Any]:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except OSError as e:
        raise AssociahedraError(f"Cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise AssociahedraError(f"{path} is not valid JSON: {e}") from e


def _validate(model, data: Dict[str, Any], path: Union[str, Path]):
    try:
        return model.model_validate(data)
    except ValidationError as e:
        raise AssociahedraError(f"{path} is not a valid {model.__name__}: {e.errors()[0]['msg']}") from e


def category_from_document(doc: CategoryDocument) -> FinCat:
    """Composites with an identity may be left out of the document"""
    morphisms = {m.id: (m.src, m.dst) for m in doc.morphisms}
    identities = {i.object: i.morphism for i in doc.identities}
    composition = {(c.g, c.f): c.result for c in doc.composition}
    for f, (a, b) in morphisms.items():
        if b in identities:
            composition.setdefault((identities[b], f), f)
        if a in identities:
            composition.setdefault((f, identities[a]), f)
    return FinCat(doc.objects, morphisms, identities, composition, name=doc.name)


def category_document(C: FinCat) -> CategoryDocument:
    tables = C.tables()
    identity_ids = set(tables['identities'].values())
    return CategoryDocument(
        name=C.name,
        objects=[str(x) for x in tables['objects']],
        morphisms=[MorphismEntry(id=f, src=a, dst=b) for f, (a, b) in sorted(tables['morphisms'].items())],
        identities=[IdentityEntry(object=x, morphism=i) for x, i in sorted(tables['identities'].items())],
        composition=[CompositionEntry(g=g, f=f, result=h)
                     for (g, f), h in sorted(tables['composition'].items())
                     if g not in identity_ids and f not in identity_ids]
    )


def an_from_document(doc: AnDocument) -> Tuple[FinCat, AnData]:
    C = category_from_document(doc.category)
    bound = doc.bound if doc.bound is not None else current_setting('WORKING_BOUND')
    d = AnData.from_tables(
        C, doc.unit,
        mu={tuple(e.args): e.value for e in doc.mu},
        mu_morphisms={tuple(e.args): e.value for e in doc.mu_morphisms},
        alpha={(tuple(e.a), tuple(e.b), tuple(e.c)): e.value for e in doc.alpha},
        n=doc.n, bound=bound, name=doc.category.name)
    return C, d


def an_document(C: FinCat, d: AnData) -> AnDocument:
    """Tables over every object and morphism of C, trivial entries left implicit"""
    tables = d.tabulate()
    return AnDocument(
        category=category_document(C),
        unit=d.unit,
        n=d.n,
        bound=d.bound,
        mu=[MuEntry(args=list(k), value=v) for k, v in sorted(tables['mu'].items())],
        mu_morphisms=[MuMorphismEntry(args=list(k), value=v)
                      for k, v in sorted(tables['mu_morphisms'].items())],
        alpha=[AlphaEntry(a=list(a), b=list(b), c=list(c), value=v)
               for (a, b, c), v in sorted(tables['alpha'].items())]
    )


def load_an_document(path: Union[str, Path]) -> Tuple[FinCat, AnData]:
    doc = _validate(AnDocument, _read(path), path)
    C, d = an_from_document(doc)
    logger.info(f"Loaded An data for {C.name} from {path}")
    return C, d


class DirectedData:
    """box, box on morphisms and eta read from tables"""

    def __init__(self, C: FinCat, unit: str, bound: int, box: Dict[Tuple[str, str], str],
                 box_morphisms: Dict[Tuple[str, str], str], eta: Dict[Tuple[str, str, str], str]):
        self.category = C
        self.unit = unit
        self.bound = bound
        self._box = box
        self._box_morphisms = box_morphisms
        self._eta = eta
        self._thin = thin_box_on_morphisms(C, self.box) if C.is_thin else None

    def box(self, x: str, y: str) -> str:
        if (x, y) in self._box:
            return self._box[(x, y)]
        if x == self.unit:
            return y
        if y == self.unit:
            return x
        raise MissingTableEntryError(f"No box entry for ({x}, {y})")

    def box_on_morphisms(self, f: str, g: str) -> str:
        C = self.category
        if (f, g) in self._box_morphisms:
            return self._box_morphisms[(f, g)]
        if is_identity(C, f) and is_identity(C, g):
            return C.identity(self.box(C.source(f), C.source(g)))
        if f == C.identity(self.unit):
            return g
        if g == C.identity(self.unit):
            return f
        if self._thin is not None:
            return self._thin(f, g)
        raise MissingTableEntryError(f"No box entry for morphisms ({f}, {g})")

    def eta(self, a: str, b: str, c: str) -> str:
        C = self.category
        if (a, b, c) in self._eta:
            return self._eta[(a, b, c)]
        source = self.box(self.box(a, b), c)
        target = self.box(a, self.box(b, c))
        if self.unit in (a, b, c):
            return C.identity(target)
        if C.is_thin and C.hom(source, target):
            return C.hom(source, target)[0]
        raise MissingTableEntryError(f"No eta entry for ({a}, {b}, {c})")


def directed_from_document(doc: DirectedDocument) -> DirectedData:
    C = category_from_document(doc.category)
    bound = doc.bound if doc.bound is not None else current_setting('WORKING_BOUND')
    return DirectedData(
        C, doc.unit, bound,
        box={(e.left, e.right): e.value for e in doc.box},
        box_morphisms={(e.left, e.right): e.value for e in doc.box_morphisms},
        eta={(e.a, e.b, e.c): e.value for e in doc.eta})


def load_directed_document(path: Union[str, Path]) -> DirectedData:
    doc = _validate(DirectedDocument, _read(path), path)
    data = directed_from_document(doc)
    logger.info(f"Loaded directed monoidal data for {data.category.name} from {path}")
    return data


def report_document(report: Dict[str, Any]) -> ReportDocument:
    return ReportDocument.model_validate(report)
