"""
Documents - JSON files for complexes and chains

A complex document is one object {"name": ..., "cubes": [[vertex, ...], ...]}
listing top cubes in vertex order; the closure is regenerated on load. A
chain document is {"kind": "chain" | "cochain", "degree": k,
"terms": [[[vertex, ...], coefficient], ...]}. Canonical output sorts
cubes lexicographically and terms by vertex set.
"""

import json
import logging
from dataclasses import dataclass, field
from typing import Any, List, Tuple, Union

from core.chain_algebra import Chain, Cochain, coefficient_modulus
from core.cubical_complex import CubicalComplex, build_and_validate
from core.errors import (
    DocumentSemanticError,
    DocumentSyntaxError,
    UnknownFaceError,
    WrongDegreeError,
)

logger = logging.getLogger(__name__)

CHAIN_KINDS = {"chain": Chain, "cochain": Cochain}


@dataclass
class ComplexDocument:
    name: str = ""
    cubes: List[List[str]] = field(default_factory=list)

    def canonical(self) -> "ComplexDocument":
        return ComplexDocument(self.name, sorted(list(cube) for cube in self.cubes))


@dataclass
class ChainDocument:
    kind: str
    degree: int
    terms: List[Tuple[List[str], int]] = field(default_factory=list)

    def canonical(self) -> "ChainDocument":
        merged = {}
        for vertices, value in self.terms:
            key = tuple(sorted(vertices))
            merged[key] = merged.get(key, 0) + value
        return ChainDocument(self.kind, self.degree, [(list(k), v) for k, v in sorted(merged.items()) if v])


def _load_json(data: Union[bytes, str]) -> Any:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as e:
            prefix = data[:e.start]
            line = prefix.count(b"\n") + 1
            column = e.start - (prefix.rfind(b"\n") + 1) + 1
            raise DocumentSyntaxError("Input is not UTF-8", line, column) from None
    try:
        return json.loads(data)
    except json.JSONDecodeError as e:
        raise DocumentSyntaxError(e.msg, e.lineno, e.colno) from None


def _is_vertex_list(value: Any) -> bool:
    return isinstance(value, list) and all(isinstance(v, str) for v in value)


def parse_complex(data: Union[bytes, str]) -> ComplexDocument:
    """
    Parse a complex document

    Raises:
        DocumentSyntaxError: If the text is not JSON, with line and column
        DocumentSemanticError: If the structure is wrong, naming the cube
    """
    obj = _load_json(data)
    if not isinstance(obj, dict):
        raise DocumentSemanticError("Complex document must be a JSON object")
    if "cubes" not in obj:
        raise DocumentSemanticError("Complex document has no \"cubes\" list")
    name = obj.get("name", "")
    if not isinstance(name, str):
        raise DocumentSemanticError("Complex name must be a string")
    cubes = obj["cubes"]
    if not isinstance(cubes, list):
        raise DocumentSemanticError("\"cubes\" must be a list")
    for index, cube in enumerate(cubes):
        if not _is_vertex_list(cube):
            raise DocumentSemanticError(f"Cube {index} ({json.dumps(cube)}) is not a list of vertex names")
    return ComplexDocument(name, [list(cube) for cube in cubes])


def write_complex(doc: ComplexDocument) -> bytes:
    """Canonical UTF-8 serialization, one cube per line"""
    canonical = doc.canonical()
    lines = ["{", f'  "name": {json.dumps(canonical.name, ensure_ascii=False)},']
    if canonical.cubes:
        lines.append('  "cubes": [')
        body = [f"    {json.dumps(cube, ensure_ascii=False)}" for cube in canonical.cubes]
        lines.append(",\n".join(body))
        lines.append("  ]")
    else:
        lines.append('  "cubes": []')
    lines.append("}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def document_to_complex(doc: ComplexDocument) -> CubicalComplex:
    return build_and_validate(doc.cubes, name=doc.name)


def complex_to_document(complex_: CubicalComplex) -> ComplexDocument:
    """Top cubes only, in their own vertex order"""
    return ComplexDocument(complex_.name, [list(spec.vertices) for spec in complex_.top_specs()]).canonical()


def load_complex(data: Union[bytes, str]) -> CubicalComplex:
    return document_to_complex(parse_complex(data))


def parse_chain(data: Union[bytes, str]) -> ChainDocument:
    """
    Parse a chain or cochain document

    Raises:
        DocumentSyntaxError: If the text is not JSON
        DocumentSemanticError: If the structure is wrong, naming the term
    """
    obj = _load_json(data)
    if not isinstance(obj, dict):
        raise DocumentSemanticError("Chain document must be a JSON object")
    kind = obj.get("kind", "chain")
    if kind not in CHAIN_KINDS:
        raise DocumentSemanticError(f"Unknown kind {kind!r}, expected chain or cochain")
    degree = obj.get("degree")
    if not isinstance(degree, int) or isinstance(degree, bool) or degree < 0:
        raise DocumentSemanticError("\"degree\" must be a non-negative integer")
    terms = obj.get("terms", [])
    if not isinstance(terms, list):
        raise DocumentSemanticError("\"terms\" must be a list")
    parsed = []
    for index, term in enumerate(terms):
        if (
            not isinstance(term, list) or len(term) != 2 or not _is_vertex_list(term[0])
            or not isinstance(term[1], int) or isinstance(term[1], bool)
        ):
            raise DocumentSemanticError(f"Term {index} ({json.dumps(term)}) is not [[vertex, ...], integer]")
        parsed.append((list(term[0]), term[1]))
    return ChainDocument(kind, degree, parsed)


def chain_json(doc: ChainDocument) -> str:
    """Single-line canonical JSON text"""
    canonical = doc.canonical()
    obj = {"kind": canonical.kind, "degree": canonical.degree, "terms": [[v, c] for v, c in canonical.terms]}
    return json.dumps(obj, ensure_ascii=False)


def write_chain(doc: ChainDocument) -> bytes:
    return (chain_json(doc) + "\n").encode("utf-8")


def chain_to_document(element: Union[Chain, Cochain]) -> ChainDocument:
    kind = "cochain" if isinstance(element, Cochain) else "chain"
    return ChainDocument(kind, element.degree, [(sorted(face), value) for face, value in element.sorted_terms()])


def document_to_chain(doc: ChainDocument, complex_: CubicalComplex, coeff: str = "z") -> Union[Chain, Cochain]:
    """
    Resolve a chain document against a complex

    Raises:
        DocumentSemanticError: If a term is not a face of the stated degree
    """
    modulus = coefficient_modulus(coeff)
    kind = CHAIN_KINDS[doc.kind]
    for vertices, _ in doc.terms:
        try:
            face = complex_.spec(vertices)
        except UnknownFaceError:
            raise DocumentSemanticError(f"Term {vertices} is not a face of the complex") from None
        if face.dim != doc.degree:
            raise DocumentSemanticError(f"Term {vertices} has dimension {face.dim}, not {doc.degree}")
    try:
        return kind(complex_, doc.degree, {frozenset(v): c for v, c in doc.canonical().terms}, modulus)
    except (UnknownFaceError, WrongDegreeError) as e:
        raise DocumentSemanticError(str(e)) from None
