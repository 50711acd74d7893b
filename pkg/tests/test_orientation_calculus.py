import numpy as np
import pytest

from core.errors import CodomainMismatchError, NotTransverseError
from core.exact_linalg import fraction_array, rational_det_sign
from core.orientation_calculus import (
    CoorientedMap,
    LinearMap,
    OrientedSubspace,
    Subspace,
    cooriented_fiber_product,
    exterior_product,
    fiber_projections,
    fiber_subspace,
    induced_coorientation,
    induced_orientation,
    is_transverse,
    normal_orientation,
    orientation_ratio,
    oriented_fiber_product,
    quillen_factorization,
)


def linear(rows, domain_dim, codomain_dim):
    return LinearMap.from_array(
        Subspace.coordinate(domain_dim),
        Subspace.coordinate(codomain_dim),
        fraction_array(rows, shape=(codomain_dim, domain_dim)),
    )


def oriented(n, sign=1):
    return OrientedSubspace(Subspace.coordinate(n), sign)


def test_coordinate_axes_meet_negatively():
    x_axis = linear([[1], [0]], 1, 2)
    y_axis = linear([[0], [1]], 1, 2)
    product = oriented_fiber_product(x_axis, oriented(1), y_axis, oriented(1), oriented(2))
    assert product.space.dim == 0
    assert product.sign == -1


@pytest.mark.parametrize("sv, sw", [(1, 1), (1, -1), (-1, 1), (-1, -1)])
def test_base_point_gives_concatenation(sv, sw):
    f = linear([], 2, 0)
    g = linear([], 1, 0)
    product = oriented_fiber_product(f, oriented(2, sv), g, oriented(1, sw), oriented(0))
    assert product.canonical_equals(oriented(3, sv * sw))


@pytest.mark.parametrize("sv", [1, -1])
def test_identity_factor_preserves_orientation(sv):
    identity = linear([[1]], 1, 1)
    product = oriented_fiber_product(identity, oriented(1, sv), identity, oriented(1), oriented(1))
    to_v, _ = fiber_projections(identity, identity, product.space)
    assert product.sign * rational_det_sign(to_v.array()) == sv


def test_explicit_splitting_gives_same_orientation():
    f = linear([[1, 0, 2], [0, 1, 1]], 3, 2)
    g = linear([[1], [1]], 1, 2)
    default = oriented_fiber_product(f, oriented(3), g, oriented(1), oriented(2))
    splitting = fraction_array([[0, 0], [-1, 1], [0, 0], [-1, 0]])
    other = oriented_fiber_product(f, oriented(3), g, oriented(1), oriented(2), splitting=splitting)
    assert default.canonical_equals(other)


def test_bad_splitting_is_rejected():
    f = linear([[1]], 1, 1)
    with pytest.raises(ValueError):
        oriented_fiber_product(f, oriented(1), f, oriented(1), oriented(1), splitting=fraction_array([[2], [0]]))


def test_transversality():
    x_axis = linear([[1], [0]], 1, 2)
    assert not is_transverse(x_axis, x_axis)
    with pytest.raises(NotTransverseError):
        fiber_subspace(x_axis, x_axis)
    with pytest.raises(CodomainMismatchError):
        is_transverse(x_axis, linear([[1]], 1, 1))


def test_fiber_dimension():
    f = linear([[1, 0, 2], [0, 1, 1]], 3, 2)
    g = linear([[1, 0], [0, 1]], 2, 2)
    assert fiber_subspace(f, g).dim == 3


def test_orientation_ratio():
    basis = fraction_array([[1, 0], [0, 1], [0, 0]])
    swapped = fraction_array([[0, 1], [1, 0], [0, 0]])
    assert orientation_ratio(basis, basis) == 1
    assert orientation_ratio(basis, swapped) == -1
    with pytest.raises(ValueError):
        orientation_ratio(basis, fraction_array([[1, 0], [0, 0], [0, 1]]))


def test_reordering_keeps_the_oriented_subspace():
    space = oriented(3, -1)
    assert space.reordered([2, 0, 1]).canonical_equals(space)
    assert space.reordered([1, 0, 2]).canonical_equals(space)
    assert not space.flipped().canonical_equals(space)
    assert space.with_basis_flipped().canonical_equals(space)


def test_quillen_normal_completes_the_embedding():
    f = CoorientedMap(linear([[1, 1]], 2, 1), -1)
    data = quillen_factorization(f)
    assert data.stabilization_dim == 2
    assert data.normal.space.dim == 1
    frame = np.hstack([data.embedding.array(), data.normal.space.matrix()])
    assert rational_det_sign(frame) * data.normal.sign == f.omega


def test_minimal_stabilization_needs_injective_map():
    with pytest.raises(ValueError):
        quillen_factorization(CoorientedMap(linear([[1, 1]], 2, 1), 1), minimal=True)


def test_normal_inside_the_other_plane():
    xy_plane = CoorientedMap(linear([[1, 0], [0, 1], [0, 0]], 2, 3), 1)
    yz_plane = CoorientedMap(linear([[0, 0], [1, 0], [0, 1]], 2, 3), -1)
    normal_v = normal_orientation(xy_plane, within=yz_plane.map)
    normal_w = normal_orientation(yz_plane, within=xy_plane.map)
    assert normal_v.space.basis == ((0, 0, 1),)
    assert normal_w.space.basis == ((1, 0, 0),)
    assert normal_v.sign == 1
    assert normal_w.sign == -1


def test_normal_needs_a_transverse_partner():
    x_axis = CoorientedMap(linear([[1], [0], [0]], 1, 3), 1)
    with pytest.raises(NotTransverseError):
        normal_orientation(x_axis, within=linear([[0], [1], [0]], 1, 3))


@pytest.mark.parametrize("omega_v, omega_w", [(1, 1), (1, -1), (-1, 1), (-1, -1)])
def test_axes_intersection_follows_normal_frame(omega_v, omega_w):
    # nu_V = e_y with sign omega_v, nu_W = e_x with sign -omega_w, frame (e_y, e_x)
    x_axis = CoorientedMap(linear([[1], [0]], 1, 2), omega_v)
    y_axis = CoorientedMap(linear([[0], [1]], 1, 2), omega_w)
    normal_v = normal_orientation(x_axis, within=y_axis.map)
    normal_w = normal_orientation(y_axis, within=x_axis.map)
    assert (normal_v.sign, normal_w.sign) == (omega_v, -omega_w)
    frame = np.hstack([normal_v.space.matrix(), normal_w.space.matrix()])
    assert rational_det_sign(frame) == -1
    assert cooriented_fiber_product(x_axis, y_axis).omega == omega_v * omega_w


def test_exterior_product_sign():
    point_in_line = CoorientedMap(linear([], 0, 1), 1)
    line = CoorientedMap.tautological(Subspace.coordinate(1))
    assert exterior_product(point_in_line, line).omega == -1
    assert exterior_product(line, point_in_line).omega == 1


def test_induced_orientations_round_trip():
    f = linear([[1, 0]], 2, 1)
    beta_v, beta_m = oriented(2, -1), oriented(1, 1)
    cooriented = induced_coorientation(f, beta_v, beta_m)
    assert induced_orientation(cooriented, beta_m) == beta_v
