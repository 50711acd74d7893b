import pytest

from core.cubical_complex import CubeSpec, build_and_validate, cube_intervals, is_well_formed_name, product
from core.errors import (
    ComplexValidationError,
    DuplicateVertexSetError,
    MalformedSpecError,
    PosetCycleError,
    UnknownFaceError,
)
from core.generators import path, torus_grid_specs

SQUARE = ["a", "b", "c", "d"]


def test_square_closure():
    square = build_and_validate([SQUARE], name="sq")
    assert square.face_counts() == [4, 4, 1]
    assert square.euler_characteristic() == 1
    assert square.dim == 2
    assert square.top_cubes() == [frozenset(SQUARE)]
    assert len(square.faces(SQUARE)) == 9


def test_face_orientation_follows_vertex_order():
    square = build_and_validate([SQUARE])
    assert square.spec(["a", "b"]).vertices == ("a", "b")
    assert square.spec(["b", "d"]).vertices == ("b", "d")
    assert square.spec(["a", "c"]).vertices == ("a", "c")


@pytest.mark.parametrize("n, count", [(0, 1), (1, 3), (2, 9), (3, 27)])
def test_cube_intervals(n, count):
    assert len(cube_intervals(n)) == count


def test_interval_and_partition():
    cube = CubeSpec(tuple(f"v{k}" for k in range(8)))
    face = cube.face((1, 5))
    assert face.vertices == ("v1", "v5")
    assert cube.interval_of(face.vertices) == (1, 5)
    assert cube.partition((1, 5)) == ([2], [3], [1])
    with pytest.raises(UnknownFaceError):
        cube.interval_of(["v0", "v3"])


@pytest.mark.parametrize("vertices", [["a", "b", "c"], ["a", "a"], ["a b", "c"], []])
def test_malformed_cubes(vertices):
    with pytest.raises(MalformedSpecError):
        build_and_validate([vertices])


def test_repeated_vertex_set_is_rejected():
    with pytest.raises(DuplicateVertexSetError):
        build_and_validate([["a", "b"], ["b", "a"]])


def test_two_by_two_torus_is_rejected():
    with pytest.raises(DuplicateVertexSetError):
        build_and_validate(torus_grid_specs(2, 2))


def test_inconsistent_shared_face():
    with pytest.raises(ComplexValidationError):
        build_and_validate([SQUARE, ["b", "a", "e", "f"]])


def test_poset_cycle():
    with pytest.raises(PosetCycleError):
        build_and_validate([["a", "b"], ["b", "c"], ["c", "a"]])


def test_components_and_cofaces():
    complex_ = build_and_validate([["a", "b"], ["c", "d"], ["b", "e"]])
    assert complex_.connected_components() == [["a", "b", "e"], ["c", "d"]]
    assert complex_.cofaces(["b"]) == [frozenset("ab"), frozenset("be")]
    assert complex_.containing_tops(["b"]) == [frozenset("ab"), frozenset("be")]
    assert complex_.is_pure()
    assert not build_and_validate([SQUARE, ["d", "x"]]).is_pure()


def test_unknown_face():
    with pytest.raises(UnknownFaceError):
        build_and_validate([SQUARE]).spec(["a", "d"])


def test_product_of_intervals_is_a_square():
    square = product(path(1), path(1))
    assert square.face_counts() == [4, 4, 1]
    assert "(p0,p1)" in square.vertices


@pytest.mark.parametrize("name", ["a,b", "x(1)", "[a]", "(a,b,c)", "[a+]", "(a,b)c", "+"])
def test_reserved_characters_in_names(name):
    with pytest.raises(MalformedSpecError):
        build_and_validate([[name, "z"]])


@pytest.mark.parametrize("name", ["p0", "(p0,p1)", "((a,b),c)", "[a+b+c]", "([a+b],c)", "v_1.x"])
def test_built_names_are_well_formed(name):
    assert is_well_formed_name(name)


def test_product_names_stay_distinct():
    with pytest.raises(MalformedSpecError):
        build_and_validate([["a,b", "c"]])
    first = build_and_validate([["a", "b"]])
    second = build_and_validate([["(x,y)", "z"]])
    square = product(first, second)
    assert "(a,(x,y))" in square.vertices
    assert len(square.vertices) == 4


def test_complexes_compare_by_structure():
    assert build_and_validate([SQUARE]) == build_and_validate([SQUARE])
    assert build_and_validate([SQUARE]) != build_and_validate([["a", "c", "b", "d"]])
