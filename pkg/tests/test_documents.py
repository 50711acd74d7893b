import pytest

from core.chain_algebra import Chain, Cochain
from core.errors import DocumentSemanticError, DocumentSyntaxError
from core.generators import circle
from utils.documents import (
    ChainDocument,
    ComplexDocument,
    chain_json,
    chain_to_document,
    complex_to_document,
    document_to_chain,
    load_complex,
    parse_chain,
    parse_complex,
    write_complex,
)


def test_point_document():
    doc = parse_complex('{"name": "pt", "cubes": [["v"]]}')
    assert doc == ComplexDocument("pt", [["v"]])
    assert write_complex(doc) == b'{\n  "name": "pt",\n  "cubes": [\n    ["v"]\n  ]\n}\n'
    assert load_complex(write_complex(doc)).face_counts() == [1]


def test_canonical_output_sorts_cubes():
    doc = ComplexDocument("two", [["b", "c"], ["a", "b"]])
    assert write_complex(doc).decode().splitlines()[3:5] == ['    ["a", "b"],', '    ["b", "c"]']


def test_empty_complex_document():
    assert write_complex(ComplexDocument()) == b'{\n  "name": "",\n  "cubes": []\n}\n'


def test_complex_survives_writing(torus):
    assert load_complex(write_complex(complex_to_document(torus))) == torus


def test_syntax_error_position():
    with pytest.raises(DocumentSyntaxError) as info:
        parse_complex('{\n "cubes": x\n}')
    assert (info.value.line, info.value.column) == (2, 11)


def test_invalid_utf8():
    with pytest.raises(DocumentSyntaxError) as info:
        parse_complex(b'{"name": "\xff"}')
    assert (info.value.line, info.value.column) == (1, 11)


@pytest.mark.parametrize("text", [
    "[]",
    '{"name": "x"}',
    '{"cubes": 3}',
    '{"name": 4, "cubes": []}',
    '{"cubes": [["a", 1]]}',
])
def test_semantic_errors(text):
    with pytest.raises(DocumentSemanticError):
        parse_complex(text)


def test_semantic_error_names_the_cube():
    with pytest.raises(DocumentSemanticError, match="Cube 1"):
        parse_complex('{"cubes": [["a"], "b"]}')


def test_chain_document_is_canonical():
    doc = parse_chain('{"kind": "cochain", "degree": 1, "terms": [[["b", "a"], 2], [["a", "b"], 1], [["c", "d"], 0]]}')
    assert doc.canonical() == ChainDocument("cochain", 1, [(["a", "b"], 3)])
    assert chain_json(doc) == '{"kind": "cochain", "degree": 1, "terms": [[["a", "b"], 3]]}'


@pytest.mark.parametrize("text", [
    '{"kind": "vector", "degree": 0}',
    '{"degree": -1}',
    '{"degree": true}',
    '{"degree": 0, "terms": [[["a"], 1.5]]}',
    '{"degree": 0, "terms": [["a", 1]]}',
])
def test_bad_chain_documents(text):
    with pytest.raises(DocumentSemanticError):
        parse_chain(text)


def test_chain_resolution(triangle):
    doc = parse_chain('{"kind": "chain", "degree": 1, "terms": [[["v1", "v0"], 4]]}')
    chain = document_to_chain(doc, triangle)
    assert isinstance(chain, Chain)
    assert chain[["v0", "v1"]] == 4
    assert document_to_chain(doc, triangle, "z2").is_zero()
    cochain = document_to_chain(ChainDocument("cochain", 0, [(["v2"], 1)]), triangle)
    assert isinstance(cochain, Cochain)


def test_chain_resolution_errors(triangle):
    with pytest.raises(DocumentSemanticError, match="not a face"):
        document_to_chain(ChainDocument("chain", 1, [(["v0", "x"], 1)]), triangle)
    with pytest.raises(DocumentSemanticError, match="dimension 0"):
        document_to_chain(ChainDocument("chain", 1, [(["v0"], 1)]), triangle)


def test_chain_to_document():
    complex_ = circle(3)
    chain = Chain(complex_, 1, {frozenset({"v1", "v2"}): -1, frozenset({"v0", "v1"}): 2})
    assert chain_to_document(chain) == ChainDocument("chain", 1, [(["v0", "v1"], 2), (["v1", "v2"], -1)])
