"""
Sign Suite - Randomized checks of the orientation sign rules

Draws random transverse configurations of integer maps and asserts the
sign identities of the orientation calculus: commutativity and
associativity of fiber products, exterior products, pullback
naturality and the comparison between oriented and co-oriented
products. Every instance and property gets its own generator seeded by
(seed, instance, property), so reports are reproducible and independent
of the worker count.
"""

import logging
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from core.exact_linalg import block_diagonal, matmul, rational_det_sign
from core.orientation_calculus import (
    CoorientedMap,
    LinearMap,
    OrientedSubspace,
    Subspace,
    cap_orientation,
    compare_coorientations,
    compare_orientations,
    cooriented_fiber_product,
    cooriented_pullback,
    exterior_product,
    fiber_subspace,
    hstack,
    identity_array,
    induced_coorientation,
    induced_orientation,
    is_transverse,
    normal_orientation,
    oriented_fiber_product,
    parity_sign,
    splitting_matrix,
    vstack,
    zeros_array,
)

logger = logging.getLogger(__name__)

MAX_DIM_LIMIT = 6
MAX_ATTEMPTS = 500
MAX_REPORTED_FAILURES = 20

Check = Callable[["InstanceSampler"], Optional[str]]


class InstanceSampler:
    """Random integer maps, signs and dimensions for one property check"""

    def __init__(self, rng: np.random.Generator, max_dim: int):
        self.rng = rng
        self.max_dim = max_dim
        self.discards = 0

    @property
    def half(self) -> int:
        """Dimension cap for checks that multiply several factors"""
        return max(1, (self.max_dim + 1) // 2)

    def dim(self, low: int = 0, high: Optional[int] = None) -> int:
        high = self.max_dim if high is None else high
        return int(self.rng.integers(low, max(low, high) + 1))

    def sign(self) -> int:
        return 1 if self.rng.integers(0, 2) else -1

    def integers(self, rows: int, cols: int) -> np.ndarray:
        """Exact array with entries in [-3, 3]"""
        result = zeros_array(rows, cols)
        for (i, j), value in np.ndenumerate(self.rng.integers(-3, 4, size=(rows, cols))):
            result[i, j] += int(value)
        return result

    def map(self, v: int, m: int) -> LinearMap:
        return LinearMap.from_array(Subspace.coordinate(v), Subspace.coordinate(m), self.integers(m, v))

    def cooriented(self, v: int, m: int) -> CoorientedMap:
        return CoorientedMap(self.map(v, m), self.sign())

    def orientation(self, space: Subspace) -> OrientedSubspace:
        return OrientedSubspace(space, self.sign())

    def draw(self, make: Callable[[], tuple], accept: Callable[..., bool]) -> tuple:
        """Call make until accept(*candidate) holds, counting rejected draws"""
        for _ in range(MAX_ATTEMPTS):
            candidate = make()
            if accept(*candidate):
                return candidate
            self.discards += 1
        raise RuntimeError(f"No acceptable configuration after {MAX_ATTEMPTS} draws")

    def pair_dims(self, top: Optional[int] = None) -> Tuple[int, int, int]:
        """(m, v, w) with 1 <= m <= v + w"""
        top = self.max_dim if top is None else top
        m = self.dim(1, top)
        v = self.dim(0, top)
        w = self.dim(max(0, m - v), top)
        return m, v, w

    def transverse_pair(self, top: Optional[int] = None) -> Tuple[CoorientedMap, CoorientedMap]:
        """Transverse co-oriented maps V -> M <- W"""
        def make():
            m, v, w = self.pair_dims(top)
            return self.cooriented(v, m), self.cooriented(w, m)
        return self.draw(make, lambda f, g: is_transverse(f.map, g.map))


def _mismatch(label: str, actual: int, expected: int) -> Optional[str]:
    if actual == expected:
        return None
    return f"{label}: got {actual:+d}, expected {expected:+d}"


def _grid(*rows: Sequence[np.ndarray]) -> np.ndarray:
    """Assemble a block matrix from rows of blocks"""
    return vstack(*(hstack(*row) for row in rows))


def _swap_blocks(basis: np.ndarray, first: int) -> np.ndarray:
    """Reorder coordinates (a, b) -> (b, a) where a has length first"""
    return vstack(basis[first:, :], basis[:first, :])


def _leg(fiber: Subspace, start: int, stop: int, h: LinearMap) -> LinearMap:
    """h applied to the coordinates start:stop of a fiber subspace"""
    return LinearMap.from_array(fiber, h.codomain, matmul(h.array(), fiber.matrix()[start:stop, :]))


def _transverse(*pairs: Tuple[LinearMap, LinearMap]) -> bool:
    return all(is_transverse(a, b) for a, b in pairs)


# Core identities

def check_splitting_independence(s: InstanceSampler) -> Optional[str]:
    f, g = s.transverse_pair()
    bv, bw, bm = s.orientation(f.domain), s.orientation(g.domain), s.orientation(f.codomain)
    base = oriented_fiber_product(f.map, bv, g.map, bw, bm)
    shift = s.integers(base.space.dim, f.codomain.dim)
    splitting = splitting_matrix(f.map, g.map) + matmul(base.space.matrix(), shift)
    other = oriented_fiber_product(f.map, bv, g.map, bw, bm, splitting=splitting)
    return _mismatch("sign with a shifted splitting", other.sign, base.sign)


def check_stabilization_independence(s: InstanceSampler) -> Optional[str]:
    f, g = s.transverse_pair()
    omegas = [cooriented_pullback(f, g.map, extra=e).omega for e in (0, 1, 2)]
    if f.map.is_injective():
        omegas += [cooriented_pullback(f, g.map, extra=e, minimal=True).omega for e in (0, 1)]
    if len(set(omegas)) == 1:
        return None
    return f"pullback signs differ across stabilizations: {omegas}"


def check_oriented_commutativity(s: InstanceSampler) -> Optional[str]:
    f, g = s.transverse_pair()
    m, v, w = f.codomain.dim, f.domain.dim, g.domain.dim
    bv, bw, bm = s.orientation(f.domain), s.orientation(g.domain), s.orientation(f.codomain)
    forward = oriented_fiber_product(f.map, bv, g.map, bw, bm)
    backward = oriented_fiber_product(g.map, bw, f.map, bv, bm)
    relative = compare_orientations(
        forward.sign, forward.space.matrix(), backward.sign, _swap_blocks(backward.space.matrix(), w)
    )
    return _mismatch("V x W against W x V", relative, parity_sign((m - v) * (m - w)))


def check_cooriented_commutativity(s: InstanceSampler) -> Optional[str]:
    f, g = s.transverse_pair()
    m, v, w = f.codomain.dim, f.domain.dim, g.domain.dim
    forward = cooriented_fiber_product(f, g)
    backward = cooriented_fiber_product(g, f)
    relative = compare_coorientations(
        forward.omega, forward.domain.matrix(), backward.omega, _swap_blocks(backward.domain.matrix(), w)
    )
    return _mismatch("V x W against W x V", relative, parity_sign((m - v) * (m - w)))


def check_oriented_associativity(s: InstanceSampler) -> Optional[str]:
    # V -> M <- W -> N <- Z
    top = s.half

    def make():
        m, n = s.dim(1, top), s.dim(1, top)
        v, w, z = s.dim(), s.dim(), s.dim()
        return s.map(v, m), s.map(w, m), s.map(w, n), s.map(z, n)

    def accept(f, g, h, k):
        if not _transverse((f, g), (h, k)):
            return False
        v, w = f.domain.dim, g.domain.dim
        left = _leg(fiber_subspace(f, g), v, v + w, h)
        right = _leg(fiber_subspace(h, k), 0, w, g)
        return _transverse((left, k), (f, right))

    f, g, h, k = s.draw(make, accept)
    v, w, z = f.domain.dim, g.domain.dim, k.domain.dim
    bv, bw, bz = s.orientation(f.domain), s.orientation(g.domain), s.orientation(k.domain)
    bm, bn = s.orientation(f.codomain), s.orientation(h.codomain)

    first = oriented_fiber_product(f, bv, g, bw, bm)
    left = oriented_fiber_product(_leg(first.space, v, v + w, h), first, k, bz, bn)
    second = oriented_fiber_product(h, bw, k, bz, bn)
    right = oriented_fiber_product(f, bv, _leg(second.space, 0, w, g), second, bm)

    left_basis = matmul(block_diagonal(first.space.matrix(), identity_array(z)), left.space.matrix())
    right_basis = matmul(block_diagonal(identity_array(v), second.space.matrix()), right.space.matrix())
    relative = compare_orientations(left.sign, left_basis, right.sign, right_basis)
    return _mismatch("(V x W) x Z against V x (W x Z)", relative, 1)


def check_cooriented_associativity(s: InstanceSampler) -> Optional[str]:
    top = s.half

    def make():
        m = s.dim(1, top)
        return s.cooriented(s.dim(), m), s.cooriented(s.dim(), m), s.cooriented(s.dim(), m)

    def accept(f, g, h):
        if not _transverse((f.map, g.map), (g.map, h.map)):
            return False
        v, w, x = f.domain.dim, g.domain.dim, h.domain.dim
        first = _leg(fiber_subspace(f.map, g.map), v, v + w, g.map)
        second = _leg(fiber_subspace(g.map, h.map), w, w + x, h.map)
        return _transverse((first, h.map), (f.map, second))

    f, g, h = s.draw(make, accept)
    v, x = f.domain.dim, h.domain.dim
    first = cooriented_fiber_product(f, g)
    left = cooriented_fiber_product(first, h)
    second = cooriented_fiber_product(g, h)
    right = cooriented_fiber_product(f, second)

    left_basis = matmul(block_diagonal(first.domain.matrix(), identity_array(x)), left.domain.matrix())
    right_basis = matmul(block_diagonal(identity_array(v), second.domain.matrix()), right.domain.matrix())
    relative = compare_coorientations(left.omega, left_basis, right.omega, right_basis)
    return _mismatch("(V x W) x X against V x (W x X)", relative, 1)


def check_cross_to_cup(s: InstanceSampler) -> Optional[str]:
    f, g = s.transverse_pair(s.half)
    m, v, w = f.codomain.dim, f.domain.dim, g.domain.dim
    cross = exterior_product(f, g)
    diagonal = LinearMap.from_array(f.codomain, cross.codomain, vstack(identity_array(m), identity_array(m)))
    pulled = cooriented_pullback(cross, diagonal)
    cup = cooriented_fiber_product(f, g)
    relative = compare_coorientations(
        pulled.omega, pulled.domain.matrix()[:v + w, :], cup.omega, cup.domain.matrix()
    )
    return _mismatch("diagonal pullback of V x W against V x_M W", relative, 1)


def check_criss_cross(s: InstanceSampler) -> Optional[str]:
    top = s.half
    f, g = s.transverse_pair(top)
    h, k = s.transverse_pair(top)
    m, n = f.codomain.dim, h.codomain.dim
    v, w, x, y = f.domain.dim, g.domain.dim, h.domain.dim, k.domain.dim

    left = cooriented_fiber_product(exterior_product(f, h), exterior_product(g, k))
    first = cooriented_fiber_product(f, g)
    second = cooriented_fiber_product(h, k)
    right = exterior_product(first, second)

    p, q = first.domain.matrix(), second.domain.matrix()
    realized = _grid(
        (p[:v, :], zeros_array(v, q.shape[1])),
        (zeros_array(x, p.shape[1]), q[:x, :]),
        (p[v:, :], zeros_array(w, q.shape[1])),
        (zeros_array(y, p.shape[1]), q[x:, :]),
    )
    relative = compare_coorientations(
        left.omega, left.domain.matrix(), right.omega, realized
    )
    return _mismatch("(V x X) x (W x Y) against (V x W) x (X x Y)", relative, parity_sign((m - w) * (n - x)))


def check_cap_cross(s: InstanceSampler) -> Optional[str]:
    top = s.half
    f, g = s.transverse_pair(top)
    h, k = s.transverse_pair(top)
    m, n = f.codomain.dim, h.codomain.dim
    v, w, x, y = f.domain.dim, g.domain.dim, h.domain.dim, k.domain.dim
    bw, by = s.orientation(g.domain), s.orientation(k.domain)

    crossed = exterior_product(f, h)
    base = LinearMap.from_array(
        g.domain.direct_sum(k.domain), crossed.codomain, block_diagonal(g.map.array(), k.map.array())
    )
    left = cap_orientation(crossed, base, OrientedSubspace(base.domain, bw.sign * by.sign)).orientation
    first = cap_orientation(f, g.map, bw).orientation
    second = cap_orientation(h, k.map, by).orientation

    p, q = first.space.matrix(), second.space.matrix()
    realized = _grid(
        (p[:v, :], zeros_array(v, q.shape[1])),
        (zeros_array(x, p.shape[1]), q[:x, :]),
        (p[v:, :], zeros_array(w, q.shape[1])),
        (zeros_array(y, p.shape[1]), q[x:, :]),
    )
    relative = compare_orientations(left.sign, left.space.matrix(), first.sign * second.sign, realized)
    return _mismatch("(V x X) cap (W x Y) against (V cap W) x (X cap Y)", relative, parity_sign((x + y - n) * (m - v)))


def check_mixed_associativity(s: InstanceSampler) -> Optional[str]:
    top = s.half

    def make():
        m = s.dim(1, top)
        return s.cooriented(s.dim(), m), s.cooriented(s.dim(), m), s.map(s.dim(), m)

    def accept(f, g, h):
        if not _transverse((f.map, g.map), (g.map, h)):
            return False
        v, w, z = f.domain.dim, g.domain.dim, h.domain.dim
        first = _leg(fiber_subspace(f.map, g.map), v, v + w, g.map)
        second = _leg(fiber_subspace(g.map, h), w, w + z, h)
        return _transverse((first, h), (f.map, second))

    f, g, h = s.draw(make, accept)
    v, w, z = f.domain.dim, g.domain.dim, h.domain.dim
    bz = s.orientation(h.domain)

    first = cooriented_fiber_product(f, g)
    left = cap_orientation(first, h, bz).orientation
    second = cap_orientation(g, h, bz).orientation
    right = cap_orientation(f, _leg(second.space, w, w + z, h), second).orientation

    left_basis = matmul(block_diagonal(first.domain.matrix(), identity_array(z)), left.space.matrix())
    right_basis = matmul(block_diagonal(identity_array(v), second.space.matrix()), right.space.matrix())
    relative = compare_orientations(left.sign, left_basis, right.sign, right_basis)
    return _mismatch("(V x W) cap Z against V cap (W cap Z)", relative, 1)


def check_comparison(s: InstanceSampler) -> Optional[str]:
    f, g = s.transverse_pair()
    m, v, w = f.codomain.dim, f.domain.dim, g.domain.dim
    bv, bw, bm = s.orientation(f.domain), s.orientation(g.domain), s.orientation(f.codomain)
    oriented = oriented_fiber_product(f.map, bv, g.map, bw, bm)
    product = cooriented_fiber_product(
        induced_coorientation(f.map, bv, bm), induced_coorientation(g.map, bw, bm)
    )
    induced = induced_orientation(product, bm)
    relative = compare_orientations(oriented.sign, oriented.space.matrix(), induced.sign, induced.space.matrix())
    return _mismatch("oriented against co-oriented product", relative, parity_sign((m - v) * (m - w)))


def check_normal_pullback(s: InstanceSampler) -> Optional[str]:
    def make():
        m = s.dim(1)
        v = s.dim(0, m)
        return s.cooriented(v, m), s.cooriented(s.dim(m - v, m), m)

    f, g = s.draw(
        make,
        lambda f, g: f.map.is_injective() and g.map.is_injective() and is_transverse(f.map, g.map),
    )
    v = f.domain.dim
    # normals taken inside the other image: M = nu_W + f(P) + nu_V
    normal_v, normal_w = normal_orientation(f, within=g.map), normal_orientation(g, within=f.map)
    product = cooriented_fiber_product(f, g)
    image = matmul(f.map.array(), product.domain.matrix()[:v, :])
    frame = hstack(image, normal_v.space.matrix(), normal_w.space.matrix())
    expected = rational_det_sign(frame) * normal_v.sign * normal_w.sign
    return _mismatch("fiber product against normal frame", product.omega, expected)


def check_functoriality(s: InstanceSampler) -> Optional[str]:
    def make():
        m = s.dim(1)
        w = s.dim(0)
        f = s.cooriented(s.dim(), m)
        return f, s.map(w, m), s.map(s.dim(), w)

    def accept(f, g, h):
        return is_transverse(f.map, g.compose(h)) and is_transverse(f.map, g) and is_transverse(
            _leg(fiber_subspace(f.map, g), f.domain.dim, f.domain.dim + g.domain.dim, LinearMap.identity(g.domain)), h
        )

    f, g, h = s.draw(make, accept)
    v, w, x = f.domain.dim, g.domain.dim, h.domain.dim
    direct = cooriented_pullback(f, g.compose(h))
    step = cooriented_pullback(f, g)
    stepped = cooriented_pullback(step, h)

    direct_basis = matmul(
        _grid(
            (identity_array(v), zeros_array(v, x)),
            (zeros_array(w, v), h.array()),
            (zeros_array(x, v), identity_array(x)),
        ),
        direct.domain.matrix(),
    )
    stepped_basis = matmul(block_diagonal(step.domain.matrix(), identity_array(x)), stepped.domain.matrix())
    relative = compare_coorientations(direct.omega, direct_basis, stepped.omega, stepped_basis)
    return _mismatch("(g h)^* V against h^* g^* V", relative, 1)


def check_equivalence_sanity(s: InstanceSampler) -> Optional[str]:
    f, g = s.transverse_pair()
    if f.domain.dim == 0:
        f, g = g, f

    product = cooriented_fiber_product(f, g)
    flipped = cooriented_fiber_product(f.with_domain_flipped(), g)
    basis = matmul(block_diagonal(f.domain.matrix(), g.domain.matrix()), product.domain.matrix())
    flipped_domain = block_diagonal(f.with_domain_flipped().domain.matrix(), g.domain.matrix())
    flipped_basis = matmul(flipped_domain, flipped.domain.matrix())
    problem = _mismatch(
        "domain basis flip", compare_coorientations(product.omega, basis, flipped.omega, flipped_basis), 1
    )
    if problem:
        return problem

    # codomain flipped on both inputs: omega' relates to omega through -beta_M
    f_flip, g_flip = f.with_codomain_flipped(), g.with_codomain_flipped()
    reflected = cooriented_fiber_product(f_flip, g_flip)
    relative = compare_coorientations(
        product.omega, product.domain.matrix(), -reflected.omega, reflected.domain.matrix()
    )
    problem = _mismatch("codomain basis flip", relative, 1)
    if problem:
        return problem

    bv, bw, bm = s.orientation(f.domain), s.orientation(g.domain), s.orientation(f.codomain)
    oriented = oriented_fiber_product(f.map, bv, g.map, bw, bm)
    reoriented = oriented_fiber_product(f_flip.map, bv, g_flip.map, bw, bm.with_basis_flipped())
    relative = compare_orientations(
        oriented.sign, oriented.space.matrix(), reoriented.sign, reoriented.space.matrix()
    )
    return _mismatch("oriented codomain basis flip", relative, 1)


# Extended identities

def check_oriented_basics(s: InstanceSampler) -> Optional[str]:
    v, w = s.dim(), s.dim()
    point = Subspace.coordinate(0)
    f, g = s.map(v, 0), s.map(w, 0)
    bv, bw, bm = s.orientation(f.domain), s.orientation(g.domain), OrientedSubspace(point, 1)
    over_point = oriented_fiber_product(f, bv, g, bw, bm)
    relative = compare_orientations(over_point.sign, over_point.space.matrix(), bv.sign * bw.sign, identity_array(v + w))
    problem = _mismatch("fiber product over a point", relative, 1)
    if problem:
        return problem

    m = s.dim(1)
    f = s.map(v, m)
    bv, bm = s.orientation(f.domain), s.orientation(f.codomain)
    identity = LinearMap.identity(f.codomain)
    right_unit = oriented_fiber_product(f, bv, identity, bm, bm)
    relative = compare_orientations(right_unit.sign, right_unit.space.matrix()[:v, :], bv.sign, identity_array(v))
    problem = _mismatch("V x_M M", relative, 1)
    if problem:
        return problem
    left_unit = oriented_fiber_product(identity, bm, f, bv, bm)
    relative = compare_orientations(left_unit.sign, left_unit.space.matrix()[m:, :], bv.sign, identity_array(v))
    return _mismatch("M x_M V", relative, 1)


def check_exterior_unit(s: InstanceSampler) -> Optional[str]:
    f = s.cooriented(s.dim(), s.dim())
    unit = CoorientedMap.tautological(Subspace.coordinate(0))
    problem = _mismatch("V x point", exterior_product(f, unit).omega, f.omega)
    return problem or _mismatch("point x V", exterior_product(unit, f).omega, f.omega)


def check_exterior_associativity(s: InstanceSampler) -> Optional[str]:
    top = s.half
    f, g, h = (s.cooriented(s.dim(0, top), s.dim(0, top)) for _ in range(3))
    left = exterior_product(exterior_product(f, g), h)
    right = exterior_product(f, exterior_product(g, h))
    return _mismatch("(V x W) x X against V x (W x X)", left.omega, right.omega)


def check_exterior_commutativity(s: InstanceSampler) -> Optional[str]:
    top = s.half
    m, n = s.dim(0, top), s.dim(0, top)
    f, g = s.cooriented(s.dim(0, top), m), s.cooriented(s.dim(0, top), n)
    v, w = f.domain.dim, g.domain.dim
    crossed = exterior_product(f, g)
    swapped = exterior_product(g, f)
    twist = LinearMap.from_array(
        swapped.codomain, crossed.codomain,
        _grid((zeros_array(m, n), identity_array(m)), (identity_array(n), zeros_array(n, m))),
    )
    pulled = cooriented_pullback(crossed, twist)
    basis = pulled.domain.matrix()
    realized = vstack(basis[v:v + w, :], basis[:v, :])
    relative = compare_coorientations(pulled.omega, realized, swapped.omega, identity_array(v + w))
    return _mismatch("twist pullback of V x W against W x V", relative, parity_sign((m - v) * (n - w)))


def check_projection_pullbacks(s: InstanceSampler) -> Optional[str]:
    top = s.half
    m, n = s.dim(0, top), s.dim(0, top)
    f = s.cooriented(s.dim(0, top), m)
    v = f.domain.dim
    fibre = CoorientedMap.tautological(Subspace.coordinate(n))
    total = Subspace.coordinate(m + n)

    first = LinearMap.from_array(total, f.codomain, hstack(identity_array(m), zeros_array(m, n)))
    pulled = cooriented_pullback(f, first)
    product = exterior_product(f, fibre)
    basis = pulled.domain.matrix()
    realized = vstack(basis[:v, :], basis[v + m:, :])
    problem = _mismatch(
        "projection pullback against V x N",
        compare_coorientations(pulled.omega, realized, product.omega, identity_array(v + n)),
        1,
    )
    if problem:
        return problem

    second = LinearMap.from_array(total, f.codomain, hstack(zeros_array(m, n), identity_array(m)))
    pulled = cooriented_pullback(f, second)
    product = exterior_product(fibre, f)
    basis = pulled.domain.matrix()
    realized = vstack(basis[v:v + n, :], basis[:v, :])
    return _mismatch(
        "projection pullback against N x V",
        compare_coorientations(pulled.omega, realized, product.omega, identity_array(n + v)),
        1,
    )


def check_natural_exterior(s: InstanceSampler) -> Optional[str]:
    top = s.half
    f, h = s.transverse_pair(top)
    g, k = s.transverse_pair(top)
    h, k = h.map, k.map
    v, w, x, y = f.domain.dim, g.domain.dim, h.domain.dim, k.domain.dim
    crossed = exterior_product(f, g)
    base = LinearMap.from_array(
        h.domain.direct_sum(k.domain), crossed.codomain, block_diagonal(h.array(), k.array())
    )
    left = cooriented_pullback(crossed, base)
    first, second = cooriented_pullback(f, h), cooriented_pullback(g, k)
    right = exterior_product(first, second)
    p, q = first.domain.matrix(), second.domain.matrix()
    realized = _grid(
        (p[:v, :], zeros_array(v, q.shape[1])),
        (zeros_array(w, p.shape[1]), q[:w, :]),
        (p[v:, :], zeros_array(x, q.shape[1])),
        (zeros_array(y, p.shape[1]), q[w:, :]),
    )
    relative = compare_coorientations(
        left.omega, left.domain.matrix(), right.omega, realized
    )
    return _mismatch("(h x k)^*(V x W) against h^*V x k^*W", relative, 1)


def check_cross_is_cup(s: InstanceSampler) -> Optional[str]:
    top = s.half
    m, n = s.dim(0, top), s.dim(0, top)
    f, g = s.cooriented(s.dim(0, top), m), s.cooriented(s.dim(0, top), n)
    v, w = f.domain.dim, g.domain.dim
    total = Subspace.coordinate(m + n)
    first = cooriented_pullback(f, LinearMap.from_array(total, f.codomain, hstack(identity_array(m), zeros_array(m, n))))
    second = cooriented_pullback(g, LinearMap.from_array(total, g.codomain, hstack(zeros_array(n, m), identity_array(n))))
    cup = cooriented_fiber_product(first, second)
    p, q = first.domain.matrix(), second.domain.matrix()
    realized = _grid(
        (p[:v, :], zeros_array(v, q.shape[1])),
        (zeros_array(w, p.shape[1]), q[:w, :]),
    )
    cross = exterior_product(f, g)
    relative = compare_coorientations(
        cup.omega, matmul(realized, cup.domain.matrix()), cross.omega, identity_array(v + w)
    )
    return _mismatch("pulled-back cup against V x W", relative, 1)


def check_fiber_natural_pullback(s: InstanceSampler) -> Optional[str]:
    top = s.half

    def make():
        m = s.dim(1, top)
        return s.cooriented(s.dim(), m), s.cooriented(s.dim(), m), s.map(s.dim(0, top), m)

    def accept(f, g, h):
        if not _transverse((f.map, g.map), (f.map, h), (g.map, h)):
            return False
        v, w = f.domain.dim, g.domain.dim
        product = _leg(fiber_subspace(f.map, g.map), v, v + w, g.map)
        first = _leg(fiber_subspace(f.map, h), v, v + h.domain.dim, LinearMap.identity(h.domain))
        second = _leg(fiber_subspace(g.map, h), w, w + h.domain.dim, LinearMap.identity(h.domain))
        return _transverse((product, h), (first, second))

    f, g, h = s.draw(make, accept)
    v, w, n = f.domain.dim, g.domain.dim, h.domain.dim
    product = cooriented_fiber_product(f, g)
    left = cooriented_pullback(product, h)
    first, second = cooriented_pullback(f, h), cooriented_pullback(g, h)
    right = cooriented_fiber_product(first, second)

    left_basis = matmul(block_diagonal(product.domain.matrix(), identity_array(n)), left.domain.matrix())
    p, q = first.domain.matrix(), second.domain.matrix()
    realized = _grid(
        (p[:v, :], zeros_array(v, q.shape[1])),
        (zeros_array(w, p.shape[1]), q[:w, :]),
        (p[v:, :], zeros_array(n, q.shape[1])),
    )
    relative = compare_coorientations(left.omega, left_basis, right.omega, matmul(realized, right.domain.matrix()))
    return _mismatch("h^*(V x_M W) against h^*V x_N h^*W", relative, 1)


def check_reversal(s: InstanceSampler) -> Optional[str]:
    f, g = s.transverse_pair()
    omega = cooriented_fiber_product(f, g).omega
    problem = _mismatch("reversed first factor", cooriented_fiber_product(f.flipped(), g).omega, -omega)
    return problem or _mismatch("reversed second factor", cooriented_fiber_product(f, g.flipped()).omega, -omega)


def check_cup_with_identity(s: InstanceSampler) -> Optional[str]:
    m = s.dim(1)
    f = s.cooriented(s.dim(), m)
    v = f.domain.dim
    unit = CoorientedMap.tautological(f.codomain)
    right = cooriented_fiber_product(f, unit)
    problem = _mismatch(
        "V x_M M against V",
        compare_coorientations(right.omega, right.domain.matrix()[:v, :], f.omega, identity_array(v)),
        1,
    )
    if problem:
        return problem
    left = cooriented_fiber_product(unit, f)
    return _mismatch(
        "M x_M V against V",
        compare_coorientations(left.omega, left.domain.matrix()[m:, :], f.omega, identity_array(v)),
        1,
    )


def check_cap_units(s: InstanceSampler) -> Optional[str]:
    m = s.dim(1)
    g = s.map(s.dim(), m)
    w = g.domain.dim
    bw = s.orientation(g.domain)
    unit = CoorientedMap.tautological(g.codomain)
    capped = cap_orientation(unit, g, bw).orientation
    problem = _mismatch(
        "M cap W against W",
        compare_orientations(capped.sign, capped.space.matrix()[m:, :], bw.sign, identity_array(w)),
        1,
    )
    if problem:
        return problem

    f = s.cooriented(s.dim(), m)
    v = f.domain.dim
    bm = s.orientation(f.codomain)
    capped = cap_orientation(f, LinearMap.identity(f.codomain), bm).orientation
    induced = induced_orientation(f, bm)
    return _mismatch(
        "V cap M against induced orientation",
        compare_orientations(capped.sign, capped.space.matrix()[:v, :], induced.sign, identity_array(v)),
        1,
    )


def check_natural_cap(s: InstanceSampler) -> Optional[str]:
    top = s.half

    def make():
        m = s.dim(1, top)
        n = s.dim(0, top)
        return s.cooriented(s.dim(), m), s.map(n, m), s.map(s.dim(), n)

    def accept(f, h, g):
        if not _transverse((f.map, h), (f.map, h.compose(g))):
            return False
        v = f.domain.dim
        pulled = _leg(fiber_subspace(f.map, h), v, v + h.domain.dim, LinearMap.identity(h.domain))
        return is_transverse(pulled, g)

    f, h, g = s.draw(make, accept)
    v, n, w = f.domain.dim, h.domain.dim, g.domain.dim
    bw = s.orientation(g.domain)
    pulled = cooriented_pullback(f, h)
    left = cap_orientation(pulled, g, bw).orientation
    right = cap_orientation(f, h.compose(g), bw).orientation

    p = pulled.domain.matrix()
    left_basis = matmul(
        _grid(
            (p[:v, :], zeros_array(v, w)),
            (p[v:, :], zeros_array(n, w)),
            (zeros_array(w, p.shape[1]), identity_array(w)),
        ),
        left.space.matrix(),
    )
    right_basis = matmul(
        _grid(
            (identity_array(v), zeros_array(v, w)),
            (zeros_array(n, v), g.array()),
            (zeros_array(w, v), identity_array(w)),
        ),
        right.space.matrix(),
    )
    relative = compare_orientations(left.sign, left_basis, right.sign, right_basis)
    return _mismatch("(h^*V) cap W against V cap W", relative, 1)


def check_same_induced(s: InstanceSampler) -> Optional[str]:
    f, g = s.transverse_pair()
    bw, bm = s.orientation(g.domain), s.orientation(f.codomain)
    capped = cap_orientation(f, g.map, bw).orientation
    product = cooriented_fiber_product(f, induced_coorientation(g.map, bw, bm))
    induced = induced_orientation(product, bm)
    relative = compare_orientations(capped.sign, capped.space.matrix(), induced.sign, induced.space.matrix())
    return _mismatch("cap against induced fiber product", relative, 1)


CORE_PROPERTIES: Dict[str, Check] = {
    "splitting_independence": check_splitting_independence,
    "stabilization_independence": check_stabilization_independence,
    "oriented_commutativity": check_oriented_commutativity,
    "cooriented_commutativity": check_cooriented_commutativity,
    "oriented_associativity": check_oriented_associativity,
    "cooriented_associativity": check_cooriented_associativity,
    "cross_to_cup": check_cross_to_cup,
    "criss_cross": check_criss_cross,
    "cap_cross": check_cap_cross,
    "mixed_associativity": check_mixed_associativity,
    "comparison": check_comparison,
    "normal_pullback": check_normal_pullback,
    "functoriality": check_functoriality,
    "equivalence_sanity": check_equivalence_sanity,
}

EXTENDED_PROPERTIES: Dict[str, Check] = {
    "oriented_basics": check_oriented_basics,
    "exterior_unit": check_exterior_unit,
    "exterior_associativity": check_exterior_associativity,
    "exterior_commutativity": check_exterior_commutativity,
    "projection_pullbacks": check_projection_pullbacks,
    "natural_exterior": check_natural_exterior,
    "cross_is_cup": check_cross_is_cup,
    "fiber_natural_pullback": check_fiber_natural_pullback,
    "reversal": check_reversal,
    "cup_with_identity": check_cup_with_identity,
    "cap_units": check_cap_units,
    "natural_cap": check_natural_cap,
    "same_induced": check_same_induced,
}

ALL_PROPERTIES: Dict[str, Check] = {**CORE_PROPERTIES, **EXTENDED_PROPERTIES}
PROPERTY_INDEX = {name: position for position, name in enumerate(ALL_PROPERTIES)}


@dataclass
class PropertyTally:
    """Pass and fail counts of one property"""
    name: str
    passed: int = 0
    failed: int = 0


@dataclass
class SuiteFailure:
    """One failing (instance, property) pair"""
    instance: int
    prop: str
    detail: str


@dataclass
class SignSuiteReport:
    """Result of a sign suite run, assembled in instance order"""
    seed: int
    instances: int
    max_dim: int
    tallies: Dict[str, PropertyTally] = field(default_factory=dict)
    discards: int = 0
    failures: List[SuiteFailure] = field(default_factory=list)
    failure_count: int = 0

    @property
    def all_passed(self) -> bool:
        return self.failure_count == 0

    def render(self) -> str:
        lines = [f"sign suite: seed={self.seed} instances={self.instances} max_dim={self.max_dim}"]
        if not self.tallies:
            lines.append("no instances run")
        width = max((len(name) for name in self.tallies), default=0)
        for tally in self.tallies.values():
            total = tally.passed + tally.failed
            status = "ok" if tally.failed == 0 else "FAIL"
            lines.append(f"  {tally.name.ljust(width)}  {tally.passed}/{total}  {status}")
        lines.append(f"discarded draws: {self.discards}")
        for failure in self.failures:
            lines.append(f"  instance {failure.instance} {failure.prop}: {failure.detail}")
        if self.failure_count > len(self.failures):
            lines.append(f"  ... {self.failure_count - len(self.failures)} more failures")
        lines.append("all properties: PASS" if self.all_passed else f"failures: {self.failure_count}")
        return "\n".join(lines) + "\n"


def run_property(name: str, seed: int, instance: int, max_dim: int) -> Tuple[Optional[str], int]:
    """
    Run one property on one instance

    Returns:
        (failure detail or None, discarded draws)
    """
    rng = np.random.default_rng([seed, instance, PROPERTY_INDEX[name]])
    sampler = InstanceSampler(rng, max_dim)
    try:
        detail = ALL_PROPERTIES[name](sampler)
    except Exception as e:
        detail = f"{type(e).__name__}: {e}"
    return detail, sampler.discards


def _run_instance(task: Tuple[int, int, int, Tuple[str, ...]]) -> List[Tuple[str, Optional[str], int]]:
    seed, instance, max_dim, names = task
    return [(name, *run_property(name, seed, instance, max_dim)) for name in names]


def run_sign_suite(
    seed: int,
    instances: int,
    max_dim: int,
    extended: bool = False,
    properties: Optional[Sequence[str]] = None,
    workers: int = 1,
) -> SignSuiteReport:
    """
    Check the sign identities on random configurations

    Args:
        seed: Base seed; identical seeds give identical reports
        instances: Number of random instances per property
        max_dim: Largest space dimension drawn (1..6)
        extended: Include the extended identities
        properties: Explicit property names, overriding extended
        workers: Worker processes for instance evaluation

    Returns:
        SignSuiteReport in instance order

    Raises:
        ValueError: If arguments are out of range or a property is unknown
    """
    if not 1 <= max_dim <= MAX_DIM_LIMIT:
        raise ValueError(f"max_dim must be between 1 and {MAX_DIM_LIMIT}, got {max_dim}")
    if instances < 0:
        raise ValueError(f"instances must be non-negative, got {instances}")
    if properties is None:
        names = tuple(ALL_PROPERTIES if extended else CORE_PROPERTIES)
    else:
        unknown = [name for name in properties if name not in ALL_PROPERTIES]
        if unknown:
            raise ValueError(f"Unknown properties: {', '.join(unknown)}")
        names = tuple(properties)

    report = SignSuiteReport(seed=seed, instances=instances, max_dim=max_dim)
    if instances == 0:
        return report
    report.tallies = {name: PropertyTally(name) for name in names}

    tasks = [(seed, instance, max_dim, names) for instance in range(instances)]
    logger.info(f"Running sign suite: {len(names)} properties x {instances} instances, {workers} workers")
    if workers > 1:
        with Pool(workers) as pool:
            results = pool.map(_run_instance, tasks)
    else:
        results = [_run_instance(task) for task in tasks]

    for instance, outcomes in enumerate(results):
        for name, detail, discards in outcomes:
            report.discards += discards
            tally = report.tallies[name]
            if detail is None:
                tally.passed += 1
                continue
            tally.failed += 1
            report.failure_count += 1
            if len(report.failures) < MAX_REPORTED_FAILURES:
                report.failures.append(SuiteFailure(instance, name, detail))
            logger.warning(f"Sign suite failure: instance {instance} {name}: {detail}")
    return report
