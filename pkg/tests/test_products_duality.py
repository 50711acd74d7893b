import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from core.chain_algebra import (
    Chain,
    Cochain,
    boundary,
    class_of,
    coboundary,
    cohomology,
    fundamental_class,
    homology,
)
from core.cubical_complex import CubeSpec, build_and_validate
from core.errors import (
    DegreeMismatchError,
    NonOrientableError,
    NotClosedError,
    NotCocycleError,
    NotCycleError,
    NotInDualBasisError,
)
from core.generators import circle, cube_boundary, path, point, standard_cube, torus_grid
from core.products_duality import (
    DualChain,
    cap,
    cap_adjunction_holds,
    cross,
    cup,
    degree_sign,
    diagonal_coassociativity,
    duality_matrix,
    external_boundary,
    intersect_check,
    intersection_map,
    internal_boundary,
    kronecker,
    kunneth_check,
    kunneth_prediction,
    local_diagonal,
    pd_check,
    poincare_dual,
    psi_dual,
    serre_diagonal,
    uct_check,
)
from core.subdivision import subdivide

TORUS = torus_grid(3, 3)


def face(*names):
    return frozenset(names)


def unit(complex_):
    return Cochain(complex_, 0, {v: 1 for v in complex_.basis(0)})


def cochains(complex_, degree):
    size = len(complex_.basis(degree))
    return st.lists(st.integers(-2, 2), min_size=size, max_size=size).map(
        lambda values: Cochain.from_vector(complex_, degree, values)
    )


def test_local_diagonal_signs():
    assert local_diagonal(0) == ((0, 1),)
    assert local_diagonal(2) == ((0, 1), (1, 1), (2, -1), (3, 1))


def test_diagonal_of_a_vertex():
    terms = serre_diagonal(point(), ["v"])
    assert [(t.front, t.back, t.sign) for t in terms] == [(face("v"), face("v"), 1)]


def test_diagonal_of_an_edge():
    terms = serre_diagonal(path(1), ["p0", "p1"])
    assert [(t.front, t.back, t.sign) for t in terms] == [
        (face("p0"), face("p0", "p1"), 1),
        (face("p0", "p1"), face("p1"), 1),
    ]


def test_diagonal_of_a_square():
    square = standard_cube(2)
    terms = serre_diagonal(square, ["c00", "c10", "c01", "c11"])
    assert [(t.front, t.back, t.sign) for t in terms] == [
        (face("c00"), face("c00", "c10", "c01", "c11"), 1),
        (face("c00", "c10"), face("c10", "c11"), 1),
        (face("c00", "c01"), face("c01", "c11"), -1),
        (face("c00", "c10", "c01", "c11"), face("c11"), 1),
    ]
    assert terms[2].front_coordinates == (2,)
    assert terms[2].back_coordinates == (1,)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_diagonal_is_coassociative(n):
    cube = standard_cube(n)
    for key in cube.cubes:
        left, right = diagonal_coassociativity(cube, key)
        assert left == right


def test_units(cube3):
    one = unit(cube3)
    for degree in range(4):
        for key in cube3.basis(degree):
            star = Cochain.basis_element(cube3, key)
            assert cup(one, star) == star
            assert cup(star, one) == star
            chain = Chain.basis_element(cube3, key)
            assert cap(one, chain) == chain


def test_cup_leibniz_on_basis(cube3):
    for p in range(3):
        for q in range(3 - p):
            for a in cube3.basis(p):
                for b in cube3.basis(q):
                    alpha = Cochain.basis_element(cube3, a)
                    beta = Cochain.basis_element(cube3, b)
                    left = coboundary(cup(alpha, beta))
                    right = cup(coboundary(alpha), beta) + (-1) ** p * cup(alpha, coboundary(beta))
                    assert left == right


@settings(max_examples=25, deadline=None)
@given(cochains(TORUS, 1), cochains(TORUS, 1))
def test_cup_leibniz_on_torus(alpha, beta):
    assert coboundary(cup(alpha, beta)) == cup(coboundary(alpha), beta) - cup(alpha, coboundary(beta))


@settings(max_examples=25, deadline=None)
@given(cochains(TORUS, 1), cochains(TORUS, 1), st.lists(st.integers(-2, 2), min_size=9, max_size=9))
def test_cap_adjunction(alpha, beta, values):
    chain = Chain.from_vector(TORUS, 2, values)
    assert cap_adjunction_holds(alpha, beta, chain)


def test_cap_adjunction_degrees():
    alpha = Cochain(TORUS, 1, {})
    with pytest.raises(DegreeMismatchError):
        cap_adjunction_holds(alpha, alpha, Chain(TORUS, 1, {}))


def test_cap_below_zero_is_empty():
    alpha = Cochain.basis_element(TORUS, TORUS.basis(2)[0])
    result = cap(alpha, Chain.basis_element(TORUS, TORUS.basis(1)[0]))
    assert result.degree == -1
    assert result.is_zero()


def test_torus_cup_product_pairs_generators():
    h1 = cohomology(TORUS, 1)
    h2 = cohomology(TORUS, 2)
    a, b = h1.free_generators
    assert abs(class_of(h2, cup(a, b))[0][0]) == 1
    assert class_of(h2, cup(a, a))[0] == (0,)
    assert class_of(h2, cup(a, b) + cup(b, a))[0] == (0,)


def test_mixed_rings_are_rejected():
    alpha = Cochain(TORUS, 1, {}, 2)
    with pytest.raises(ValueError):
        cup(alpha, Cochain(TORUS, 1, {}))


def test_cross_of_edges():
    first, second = path(1), path(1)
    e = Chain.basis_element(first, ["p0", "p1"])
    square = cross(e, e)
    assert square.degree == 2
    assert list(square.terms.values()) == [1]
    (key,) = square.terms
    assert square.complex.spec(key).vertices == ("(p0,p0)", "(p1,p0)", "(p0,p1)", "(p1,p1)")
    assert len(boundary(square).terms) == 4


@pytest.mark.parametrize("left_face, right_face", [
    (["p0", "p1"], ["c00", "c10", "c01", "c11"]),
    (["p0"], ["c00", "c10"]),
    (["p0", "p1"], ["c11"]),
])
def test_cross_leibniz(left_face, right_face):
    a = Chain.basis_element(path(1), left_face)
    b = Chain.basis_element(standard_cube(2), right_face)
    expected = cross(boundary(a), b) + (-1) ** a.degree * cross(a, boundary(b))
    assert boundary(cross(a, b)) == expected


def test_degree_sign():
    assert [degree_sign(2, p) for p in range(3)] == [-1, -1, 1]
    assert degree_sign(3, 3) == 1


def test_dual_of_a_top_cube_is_its_center():
    sd = subdivide(TORUS)
    fc = fundamental_class(TORUS)
    for top in TORUS.basis(2):
        dual = psi_dual(Cochain.basis_element(TORUS, top))
        assert dual.terms == {sd.center(top): fc[top]}


def test_dual_of_a_vertex_covers_its_star():
    vertex = TORUS.basis(0)[0]
    dual = psi_dual(Cochain.basis_element(TORUS, vertex))
    assert dual.degree == 2
    assert len(dual.terms) == 4
    assert [pair[0] for pair, _ in dual.pair_terms()] == [vertex] * 4


def test_dual_boundary_is_internal():
    for degree in range(3):
        for key in TORUS.basis(degree):
            star = Cochain.basis_element(TORUS, key)
            dual = psi_dual(star)
            assert external_boundary(dual).is_zero()
            assert internal_boundary(dual).terms == psi_dual(coboundary(star)).terms


@pytest.mark.parametrize("complex_, coeff", [
    (TORUS, "z"),
    (cube_boundary(3), "z"),
    (circle(3), "z"),
])
def test_intersect_check(complex_, coeff):
    report = intersect_check(complex_, coeff)
    assert report.passed
    assert report.faces == sum(complex_.face_counts())
    assert report.render().endswith("psi chain map: PASS\nI o psi = id: PASS\n")


def test_intersect_check_klein_mod_two(klein):
    assert intersect_check(klein, "z2").passed


def test_intersect_check_klein_needs_orientation(klein):
    with pytest.raises(NonOrientableError):
        intersect_check(klein)


def test_intersection_map_inverts_psi():
    f, g = TORUS.basis(1)[:2]
    alpha = Cochain(TORUS, 1, {f: 2, g: -1})
    assert intersection_map(psi_dual(alpha), TORUS) == alpha


def test_intersection_map_rejects_stray_cells():
    sd = subdivide(TORUS)
    edge = TORUS.basis(1)[0]
    (first, _), _ = psi_dual(Cochain.basis_element(TORUS, edge)).pair_terms()
    half = DualChain(sd.complex, 1, {sd.cell(*first): 1}, 0, sd)
    with pytest.raises(NotInDualBasisError):
        intersection_map(half, TORUS)
    vertex = TORUS.basis(0)[0]
    open_cell = sd.cell(vertex, TORUS.cofaces(vertex)[0])
    with pytest.raises(NotInDualBasisError):
        intersection_map(DualChain(sd.complex, 1, {open_cell: 1}, 0, sd), TORUS)


def test_dual_needs_a_closed_complex():
    disk = standard_cube(2)
    with pytest.raises(NotClosedError):
        psi_dual(Cochain.basis_element(disk, disk.basis(0)[0]))


def test_poincare_dual_of_unit_is_fundamental_class(sphere):
    assert poincare_dual(unit(sphere)) == fundamental_class(sphere)


def test_duality_matrix_shape(sphere):
    assert duality_matrix(sphere, 0).rows == len(sphere.basis(2))
    assert duality_matrix(sphere, 0).cols == len(sphere.basis(0))
    assert duality_matrix(sphere, 3).cols == 0


@pytest.mark.parametrize("complex_", [TORUS, cube_boundary(3), circle(4)])
def test_poincare_duality_holds(complex_):
    report = pd_check(complex_)
    assert report.passed
    assert report.render().endswith(f"PD: iso in degrees 0..{complex_.dim}\n")


def test_poincare_duality_mod_two(klein):
    assert pd_check(klein, "z2").passed
    with pytest.raises(NonOrientableError):
        pd_check(klein)


def wedge_with_sphere(base):
    """base and a 2-sphere glued at one vertex"""
    sphere = cube_boundary(3)
    rename = {name: f"s{name}" for name in sphere.vertices}
    rename["c000"] = min(base.vertices)
    specs = [base.spec(top) for top in base.basis(base.dim)]
    specs += [CubeSpec(tuple(rename[v] for v in sphere.spec(top).vertices)) for top in sphere.basis(2)]
    return build_and_validate(specs, name="wedge")


@pytest.mark.parametrize("coeff", ["z", "z2"])
def test_duality_is_decided_per_degree(coeff):
    # H^0 -> H_2 is not onto, which must not spoil the verdict in degree 1
    report = pd_check(wedge_with_sphere(TORUS), coeff)
    assert [row.iso for row in report.degrees] == [False, True, False]
    assert report.render().endswith("PD: fails in degrees 0, 2\n")


def test_poincare_duality_needs_closed():
    with pytest.raises(NotClosedError):
        pd_check(path(3))


def test_kronecker_errors():
    edge = TORUS.basis(1)[0]
    star = Cochain.basis_element(TORUS, edge)
    chain = Chain.basis_element(TORUS, edge)
    cycle = homology(TORUS, 1).free_generators[0]
    cocycle = cohomology(TORUS, 1).free_generators[0]
    with pytest.raises(DegreeMismatchError):
        kronecker(star, Chain(TORUS, 2, {}))
    with pytest.raises(NotCocycleError):
        kronecker(star, cycle)
    with pytest.raises(NotCycleError):
        kronecker(cocycle, chain)
    assert kronecker(cocycle, cycle) == cocycle.evaluate(cycle)


def test_uct_torus():
    report = uct_check(TORUS, 1)
    assert report.passed
    assert abs(report.pairing_det) == 1
    assert report.render().endswith("UCT: PASS\n")


def test_uct_klein(klein):
    top = uct_check(klein, 2)
    assert top.passed
    assert top.cohomology == "Z/2"
    assert top.hom_rank == 0
    assert top.ext == (2,)
    assert uct_check(klein, 1).passed


def test_kunneth_prediction_with_torsion():
    klein = [(1, ()), (1, (2,)), (0, ())]
    assert kunneth_prediction(klein, klein) == [
        (1, ()),
        (2, (2, 2)),
        (1, (2, 2, 2)),
        (0, (2,)),
        (0, ()),
    ]


def test_kunneth_prediction_of_circles():
    circle_homology = [(1, ()), (1, ())]
    assert kunneth_prediction(circle_homology, circle_homology) == [(1, ()), (2, ()), (1, ())]


@pytest.mark.parametrize("first, second", [
    (circle(3), circle(3)),
    (circle(3), cube_boundary(3)),
    (path(2), circle(4)),
])
def test_kunneth_check(first, second):
    report = kunneth_check(first, second)
    assert report.passed
    assert report.render().endswith("Kunneth: PASS\n")


@pytest.mark.slow
def test_kunneth_klein_times_circle(klein):
    assert kunneth_check(klein, circle(3)).passed
