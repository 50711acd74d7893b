import pytest

from core.errors import ParamTooSmallError
from core.generators import (
    circle,
    cube_boundary,
    fuzz,
    path,
    point,
    standard_cube,
    torus_grid,
)
from utils.corpus import corpus_load


@pytest.mark.parametrize("complex_, counts, euler", [
    (point(), [1], 1),
    (path(5), [6, 5], 1),
    (circle(3), [3, 3], 0),
    (circle(6), [6, 6], 0),
    (torus_grid(3, 3), [9, 18, 9], 0),
    (torus_grid(4, 5), [20, 40, 20], 0),
    (standard_cube(3), [8, 12, 6, 1], 1),
    (cube_boundary(3), [8, 12, 6], 2),
    (cube_boundary(2), [4, 4], 0),
])
def test_face_counts(complex_, counts, euler):
    assert complex_.face_counts() == counts
    assert complex_.euler_characteristic() == euler


def test_standard_cube_zero_is_a_point():
    assert standard_cube(0).face_counts() == [1]


def test_klein_corpus():
    klein = corpus_load("klein")
    assert klein.face_counts() == [36, 72, 36]
    assert klein.euler_characteristic() == 0
    assert klein.is_pure()


@pytest.mark.parametrize("build", [
    lambda: path(0),
    lambda: circle(2),
    lambda: torus_grid(2, 3),
    lambda: torus_grid(3, 2),
    lambda: cube_boundary(0),
    lambda: standard_cube(-1),
])
def test_parameters_below_minimum(build):
    with pytest.raises(ParamTooSmallError):
        build()


@pytest.mark.parametrize("seed", range(6))
def test_fuzz_is_seeded_and_valid(seed):
    first = fuzz(seed)
    assert first == fuzz(seed)
    assert 1 <= first.dim <= 3
    assert first.top_cubes()
