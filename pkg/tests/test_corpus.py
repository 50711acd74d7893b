import pytest

from core.errors import ComplexValidationError, ParamTooSmallError, UnknownCorpusEntryError
from core.generators import circle, cube_boundary, path, standard_cube, torus_grid
from utils import corpus
from utils.corpus import corpus_load, corpus_names
from utils.documents import complex_to_document, write_complex


@pytest.mark.parametrize("name, expected", [
    ("interval", path(1)),
    ("square", standard_cube(2)),
    ("path-3", path(3)),
    ("circle-5", circle(5)),
    ("cube-3", standard_cube(3)),
    ("cube-boundary-4", cube_boundary(4)),
    ("torus-4", torus_grid(4, 4)),
    ("torus-3x5", torus_grid(3, 5)),
])
def test_named_entries(name, expected):
    assert corpus_load(name) == expected


def test_klein_is_closed():
    klein = corpus_load("klein")
    assert klein.name == "klein"
    assert klein.euler_characteristic() == 0


@pytest.mark.parametrize("name", ["nope", "torus", "cube-", "circle-3x3"])
def test_unknown_entries(name):
    with pytest.raises(UnknownCorpusEntryError):
        corpus_load(name)


def test_size_is_checked():
    with pytest.raises(ParamTooSmallError):
        corpus_load("torus-2")


def test_names_are_listed():
    assert "klein" in corpus_names()


def test_klein_resource_is_checked(tmp_path, monkeypatch):
    (tmp_path / "klein.json").write_bytes(write_complex(complex_to_document(cube_boundary(3))))
    monkeypatch.setattr(corpus, "RESOURCE_DIR", tmp_path)
    with pytest.raises(ComplexValidationError, match="Euler characteristic 2"):
        corpus_load("klein")
