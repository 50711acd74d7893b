"""
Orientation Calculus - Orientations and co-orientations of linear maps

Fiber products, pullbacks, exterior products and cap orientations for
transverse linear maps between finite-dimensional rational spaces. A
space is stored with an ordered basis; orientations and co-orientations
are signs relative to the listed bases.

Coordinates: a Subspace lists its basis in ambient coordinates, while a
LinearMap works in intrinsic coordinates (images of domain basis vectors
written in the codomain basis). Fiber subspaces live in the intrinsic
coordinates of the direct sum of their factors.
"""

import logging
from dataclasses import InitVar, dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np

from core.errors import CodomainMismatchError, NotTransverseError
from core.exact_linalg import (
    block_diagonal,
    columns_array,
    fraction_array,
    matmul,
    permutation_sign,
    rational_det_sign,
    rational_kernel_basis,
    rational_rank,
    rational_solve,
)

logger = logging.getLogger(__name__)

RationalVector = Tuple[Fraction, ...]


def parity_sign(exponent: int) -> int:
    """(-1) ** exponent"""
    return -1 if exponent % 2 else 1


def identity_array(n: int) -> np.ndarray:
    return fraction_array([[int(i == j) for j in range(n)] for i in range(n)], shape=(n, n))


def zeros_array(rows: int, cols: int) -> np.ndarray:
    return fraction_array([[0] * cols] * rows, shape=(rows, cols))


def hstack(*arrays: np.ndarray) -> np.ndarray:
    height = arrays[0].shape[0]
    width = sum(a.shape[1] for a in arrays)
    if width == 0:
        return zeros_array(height, 0)
    return np.hstack(arrays)


def vstack(*arrays: np.ndarray) -> np.ndarray:
    width = arrays[0].shape[1]
    height = sum(a.shape[0] for a in arrays)
    if height == 0:
        return zeros_array(0, width)
    return np.vstack(arrays)


@dataclass(frozen=True)
class Subspace:
    """
    Subspace of R^ambient_dim with an ordered basis

    The basis must be linearly independent; pass check=False only for
    bases that are independent by construction.
    """
    ambient_dim: int
    basis: Tuple[RationalVector, ...]
    check: InitVar[bool] = True

    def __post_init__(self, check: bool):
        basis = tuple(tuple(Fraction(x) for x in vector) for vector in self.basis)
        object.__setattr__(self, "basis", basis)
        for vector in basis:
            if len(vector) != self.ambient_dim:
                raise ValueError(
                    f"Basis vector of length {len(vector)} in ambient dimension {self.ambient_dim}"
                )
        if len(basis) > self.ambient_dim:
            raise ValueError(f"{len(basis)} vectors cannot be independent in R^{self.ambient_dim}")
        if check and basis and rational_rank(self.matrix()) != len(basis):
            raise ValueError("Basis vectors are linearly dependent")

    @classmethod
    def coordinate(cls, n: int) -> "Subspace":
        """R^n with its standard basis"""
        return cls(n, tuple(tuple(int(i == j) for i in range(n)) for j in range(n)), check=False)

    @classmethod
    def from_columns(cls, array: np.ndarray, check: bool = True) -> "Subspace":
        return cls(array.shape[0], tuple(tuple(array[:, j]) for j in range(array.shape[1])), check=check)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def matrix(self) -> np.ndarray:
        """Basis vectors as the columns of an ambient_dim x dim array"""
        return columns_array(self.basis, self.ambient_dim)

    def direct_sum(self, other: "Subspace") -> "Subspace":
        """Block direct sum inside R^(ambient + other.ambient)"""
        return Subspace.from_columns(block_diagonal(self.matrix(), other.matrix()), check=False)

    def with_basis_flipped(self) -> "Subspace":
        """Same span, first basis vector negated"""
        if not self.basis:
            raise ValueError("A 0-dimensional space has no basis vector to flip")
        first = tuple(-x for x in self.basis[0])
        return Subspace(self.ambient_dim, (first,) + self.basis[1:], check=False)


@dataclass(frozen=True)
class OrientedSubspace:
    """A subspace whose listed basis is positively (sign=+1) or negatively oriented"""
    space: Subspace
    sign: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"Orientation sign must be +1 or -1, got {self.sign}")

    def flipped(self) -> "OrientedSubspace":
        return OrientedSubspace(self.space, -self.sign)

    def with_basis_flipped(self) -> "OrientedSubspace":
        """Equivalent value: first basis vector negated together with the sign"""
        return OrientedSubspace(self.space.with_basis_flipped(), -self.sign)

    def reordered(self, perm: Sequence[int]) -> "OrientedSubspace":
        """Equivalent value with the basis listed in the order given by perm"""
        basis = tuple(self.space.basis[k] for k in perm)
        space = Subspace(self.space.ambient_dim, basis, check=False)
        return OrientedSubspace(space, self.sign * permutation_sign(perm))

    def canonical_equals(self, other: "OrientedSubspace") -> bool:
        """True when both describe the same oriented subspace of the same ambient"""
        if self.space.ambient_dim != other.space.ambient_dim or self.space.dim != other.space.dim:
            return False
        try:
            ratio = orientation_ratio(self.space.matrix(), other.space.matrix())
        except ValueError:
            return False
        return self.sign * other.sign * ratio == 1


@dataclass(frozen=True)
class LinearMap:
    """Linear map given by its matrix in the domain and codomain bases"""
    domain: Subspace
    codomain: Subspace
    matrix: Tuple[RationalVector, ...]

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in row) for row in self.matrix)
        object.__setattr__(self, "matrix", rows)
        if len(rows) != self.codomain.dim or any(len(row) != self.domain.dim for row in rows):
            raise ValueError(
                f"Matrix shape does not match {self.codomain.dim}x{self.domain.dim}"
            )

    @classmethod
    def from_array(cls, domain: Subspace, codomain: Subspace, array: np.ndarray) -> "LinearMap":
        return cls(domain, codomain, tuple(tuple(row) for row in array))

    @classmethod
    def identity(cls, space: Subspace) -> "LinearMap":
        return cls.from_array(space, space, identity_array(space.dim))

    @classmethod
    def inclusion(cls, sub: Subspace, sup: Subspace) -> "LinearMap":
        """Inclusion of sub into sup, both in the same ambient coordinates"""
        if sub.ambient_dim != sup.ambient_dim:
            raise ValueError("Inclusion needs a common ambient space")
        big = sup.matrix()
        columns = [rational_solve(big, vector) for vector in sub.basis]
        return cls.from_array(sub, sup, columns_array(columns, sup.dim))

    def array(self) -> np.ndarray:
        return fraction_array(self.matrix, shape=(self.codomain.dim, self.domain.dim))

    def compose(self, inner: "LinearMap") -> "LinearMap":
        """self after inner"""
        if inner.codomain != self.domain:
            raise CodomainMismatchError("Composite maps do not line up")
        return LinearMap.from_array(inner.domain, self.codomain, matmul(self.array(), inner.array()))

    def rank(self) -> int:
        return rational_rank(self.array()) if self.domain.dim and self.codomain.dim else 0

    def is_injective(self) -> bool:
        return self.rank() == self.domain.dim


@dataclass(frozen=True)
class CoorientedMap:
    """A linear map with co-orientation sign omega relative to its listed bases"""
    map: LinearMap
    omega: int

    def __post_init__(self):
        if self.omega not in (1, -1):
            raise ValueError(f"Co-orientation sign must be +1 or -1, got {self.omega}")

    @classmethod
    def tautological(cls, space: Subspace) -> "CoorientedMap":
        """Identity map co-oriented by (beta, beta)"""
        return cls(LinearMap.identity(space), 1)

    @property
    def domain(self) -> Subspace:
        return self.map.domain

    @property
    def codomain(self) -> Subspace:
        return self.map.codomain

    def flipped(self) -> "CoorientedMap":
        """The opposite co-orientation"""
        return CoorientedMap(self.map, -self.omega)

    def with_domain_flipped(self) -> "CoorientedMap":
        """Equivalent value: first domain basis vector negated together with omega"""
        array = self.map.array()
        array[:, 0] = -array[:, 0]
        flipped = LinearMap.from_array(self.domain.with_basis_flipped(), self.codomain, array)
        return CoorientedMap(flipped, -self.omega)

    def with_codomain_flipped(self) -> "CoorientedMap":
        """Equivalent value: first codomain basis vector negated together with omega"""
        array = self.map.array()
        array[0, :] = -array[0, :]
        flipped = LinearMap.from_array(self.domain, self.codomain.with_basis_flipped(), array)
        return CoorientedMap(flipped, -self.omega)


@dataclass(frozen=True)
class QuillenData:
    """
    Factorization V -> codomain + R^a -> codomain with an oriented normal

    The embedding is e(x) = (f(x), j(x)); the normal complement is
    oriented so that beta_V ^ beta_normal = omega * beta_M ^ beta_E.
    """
    stabilization_dim: int
    embedding: LinearMap
    normal: OrientedSubspace


@dataclass(frozen=True)
class CapOrientation:
    """Oriented fiber subspace together with its map to the oriented factor"""
    orientation: OrientedSubspace
    to_base: LinearMap


def orientation_ratio(first: np.ndarray, second: np.ndarray) -> int:
    """
    Compare two ordered bases of one subspace

    Args:
        first: Basis vectors as columns
        second: Another basis of the same span, as columns

    Returns:
        Sign of the transition determinant, +1 when the orientations agree

    Raises:
        ValueError: If the bases do not span the same subspace
    """
    if first.shape != second.shape:
        raise ValueError(f"Bases of shapes {first.shape} and {second.shape} cannot be compared")
    if first.shape[1] == 0:
        return 1
    try:
        transition = [rational_solve(first, second[:, j]) for j in range(second.shape[1])]
    except Exception as e:
        raise ValueError(f"Bases span different subspaces: {e}") from e
    sign = rational_det_sign(columns_array(transition, first.shape[1]))
    if sign == 0:
        raise ValueError("Second basis is degenerate")
    return sign


def compare_orientations(sign: int, basis: np.ndarray, other_sign: int, other_basis: np.ndarray) -> int:
    """+1 when (sign, basis) and (other_sign, other_basis) orient the same span alike"""
    return sign * other_sign * orientation_ratio(basis, other_basis)


def compare_coorientations(omega: int, basis: np.ndarray, other_omega: int, other_basis: np.ndarray) -> int:
    """
    Compare two co-orientations of maps onto a common codomain basis

    Args:
        omega, basis: First co-orientation sign and its domain basis realized
            in a common ambient
        other_omega, other_basis: Second co-orientation and its realized basis

    Returns:
        +1 when equal, -1 when opposite
    """
    return omega * other_omega * orientation_ratio(basis, other_basis)


def _check_codomains(f: LinearMap, g: LinearMap):
    if f.codomain != g.codomain:
        raise CodomainMismatchError(
            f"Maps into spaces of dimension {f.codomain.dim} and {g.codomain.dim} do not share a codomain"
        )


def difference_matrix(f: LinearMap, g: LinearMap) -> np.ndarray:
    """Matrix of (x, y) -> f(x) - g(y) on V + W"""
    return hstack(f.array(), -g.array())


def is_transverse(f: LinearMap, g: LinearMap) -> bool:
    """
    Check whether im f + im g is the whole common codomain

    Raises:
        CodomainMismatchError: If the codomains differ
    """
    _check_codomains(f, g)
    m = f.codomain.dim
    if m == 0:
        return True
    return rational_rank(hstack(f.array(), g.array())) == m


def fiber_subspace(f: LinearMap, g: LinearMap) -> Subspace:
    """
    Fiber product {(x, y) : f(x) = g(y)} inside V + W

    Returns:
        Subspace of dimension v + w - m with a primitive integer basis

    Raises:
        NotTransverseError: If f and g are not transverse
    """
    if not is_transverse(f, g):
        raise NotTransverseError(
            f"Maps of ranks {f.rank()} and {g.rank()} do not span R^{f.codomain.dim}"
        )
    total = f.domain.dim + g.domain.dim
    kernel = rational_kernel_basis(difference_matrix(f, g))
    logger.debug(f"Fiber subspace of dimension {len(kernel)} in R^{total}")
    return Subspace(total, tuple(kernel), check=False)


def fiber_projections(f: LinearMap, g: LinearMap, fiber: Subspace) -> Tuple[LinearMap, LinearMap]:
    """Projections of a fiber subspace to the V and W factors"""
    v = f.domain.dim
    basis = fiber.matrix()
    return (
        LinearMap.from_array(fiber, f.domain, basis[:v, :]),
        LinearMap.from_array(fiber, g.domain, basis[v:, :]),
    )


def splitting_matrix(f: LinearMap, g: LinearMap) -> np.ndarray:
    """Right inverse s of the difference map, one exact solve per codomain vector"""
    difference = difference_matrix(f, g)
    m = f.codomain.dim
    columns = [rational_solve(difference, [int(i == k) for i in range(m)]) for k in range(m)]
    return columns_array(columns, difference.shape[1])


def oriented_fiber_product(
    f: LinearMap,
    beta_v: OrientedSubspace,
    g: LinearMap,
    beta_w: OrientedSubspace,
    beta_m: OrientedSubspace,
    splitting: Optional[np.ndarray] = None,
) -> OrientedSubspace:
    """
    Orient the fiber product of transverse maps between oriented spaces

    P + M is identified with V + W by the inclusion on P and a splitting s
    of (x, y) -> f(x) - g(y) on M; the orientation of P is chosen so that
    the two sides differ by (-1)^(w*m).

    Args:
        f: Map V -> M
        beta_v: Orientation of V (its space must be f.domain)
        g: Map W -> M
        beta_w: Orientation of W
        beta_m: Orientation of M
        splitting: Optional explicit (v+w) x m right inverse of the difference map

    Returns:
        OrientedSubspace of V + W

    Raises:
        NotTransverseError: If f and g are not transverse
    """
    if beta_v.space != f.domain or beta_w.space != g.domain or beta_m.space != f.codomain:
        raise ValueError("Orientations must be given on the domains and the common codomain")
    fiber = fiber_subspace(f, g)
    if splitting is None:
        splitting = splitting_matrix(f, g)
    else:
        m = f.codomain.dim
        if splitting.shape != (fiber.ambient_dim, m) or not all(
            value == int(i == j)
            for (i, j), value in np.ndenumerate(matmul(difference_matrix(f, g), splitting))
        ):
            raise ValueError("Splitting is not a right inverse of the difference map")
    phi = hstack(fiber.matrix(), splitting)
    sign = (
        rational_det_sign(phi)
        * beta_m.sign * beta_v.sign * beta_w.sign
        * parity_sign(g.domain.dim * f.codomain.dim)
    )
    return OrientedSubspace(fiber, sign)


def _complete_to_basis(columns: np.ndarray, candidates: Optional[np.ndarray] = None) -> np.ndarray:
    """Greedy completion of independent columns by candidate columns, standard basis by default"""
    n = columns.shape[0]
    if candidates is None:
        candidates = identity_array(n)
    current = columns
    chosen = []
    for k in range(candidates.shape[1]):
        if current.shape[1] == n:
            break
        column = candidates[:, k:k + 1]
        candidate = hstack(current, column)
        if rational_rank(candidate) == candidate.shape[1]:
            current = candidate
            chosen.append(column)
    return hstack(zeros_array(n, 0), *chosen)


def quillen_factorization(f: CoorientedMap, extra: int = 0, minimal: bool = False) -> QuillenData:
    """
    Factor a co-oriented map as an embedding followed by a projection

    By default j is the coordinate injection of the whole domain, so
    a = dim V + extra. With minimal=True and f injective, j is zero on the
    first a = extra coordinates.

    Args:
        f: Co-oriented map V -> M
        extra: Additional stabilization dimensions
        minimal: Use the smallest stabilization available for injective f

    Returns:
        QuillenData with the oriented normal complement
    """
    v, m = f.domain.dim, f.codomain.dim
    if minimal:
        if not f.map.is_injective():
            raise ValueError("Minimal stabilization needs an injective map")
        a = extra
        padding = zeros_array(a, v)
    else:
        a = v + extra
        padding = vstack(identity_array(v), zeros_array(extra, v))
    embedded = vstack(f.map.array(), padding)
    normal = _complete_to_basis(embedded)
    sign = f.omega * rational_det_sign(hstack(embedded, normal))
    target = Subspace.coordinate(m + a)
    return QuillenData(
        stabilization_dim=a,
        embedding=LinearMap.from_array(f.domain, target, embedded),
        normal=OrientedSubspace(Subspace.from_columns(normal, check=False), sign),
    )


def normal_orientation(f: CoorientedMap, within: Optional[LinearMap] = None) -> OrientedSubspace:
    """
    Quillen normal of an injective co-oriented map, inside the codomain

    Args:
        f: Injective co-oriented map V -> M
        within: Optional map W -> M transverse to f; the normal is then
            spanned by image vectors of W, so that for a transverse pair of
            embeddings it complements the intersection inside W

    Returns:
        OrientedSubspace of M with beta_V ^ beta_normal = omega * beta_M

    Raises:
        NotTransverseError: If within is not transverse to f
    """
    if within is None:
        return quillen_factorization(f, minimal=True).normal
    if not f.map.is_injective():
        raise ValueError("Normal orientation needs an injective map")
    if not is_transverse(f.map, within):
        raise NotTransverseError(
            f"Images of dimensions {f.map.rank()} and {within.rank()} do not span R^{f.codomain.dim}"
        )
    image = f.map.array()
    normal = _complete_to_basis(image, within.array())
    sign = f.omega * rational_det_sign(hstack(image, normal))
    return OrientedSubspace(Subspace.from_columns(normal, check=False), sign)


def cooriented_pullback(
    f: CoorientedMap, g: LinearMap, extra: int = 0, minimal: bool = False
) -> CoorientedMap:
    """
    Pull a co-oriented map back along a transverse map

    The Quillen normal of f is pulled back along g + id to a complement of
    P inside W + R^a; omega is +1 exactly when beta_P ^ beta_pulled_normal
    agrees with beta_W ^ beta_E.

    Args:
        f: Co-oriented map V -> M
        g: Map W -> M
        extra: Stabilization dimensions beyond the default
        minimal: Use the minimal stabilization (f injective)

    Returns:
        Co-oriented projection P -> W, P inside V + W

    Raises:
        NotTransverseError: If f and g are not transverse
    """
    fiber = fiber_subspace(f.map, g)
    quillen = quillen_factorization(f, extra=extra, minimal=minimal)
    v, w, m = f.domain.dim, g.domain.dim, f.codomain.dim
    a = quillen.stabilization_dim
    embedded = quillen.embedding.array()
    padding = embedded[m:, :]
    basis = fiber.matrix()
    fiber_in_stable = vstack(basis[v:, :], matmul(padding, basis[:v, :]))
    stable_g = block_diagonal(g.array(), identity_array(a))
    system = hstack(stable_g, -embedded)
    normal = quillen.normal.space.matrix()
    lifted = []
    for k in range(normal.shape[1]):
        solution = rational_solve(system, list(normal[:, k]))
        lifted.append(solution[:w + a])
    frame = hstack(fiber_in_stable, columns_array(lifted, w + a))
    omega = quillen.normal.sign * rational_det_sign(frame)
    logger.debug(f"Pullback co-orientation {omega:+d} with stabilization {a}")
    return CoorientedMap(LinearMap.from_array(fiber, g.domain, basis[v:, :]), omega)


def cooriented_fiber_product(f: CoorientedMap, g: CoorientedMap) -> CoorientedMap:
    """
    Co-oriented fiber product P -> M

    The pullback co-orientation of f along g composed with that of g.

    Raises:
        NotTransverseError: If f and g are not transverse
    """
    pulled = cooriented_pullback(f, g.map)
    return CoorientedMap(g.map.compose(pulled.map), pulled.omega * g.omega)


def exterior_product(f: CoorientedMap, g: CoorientedMap) -> CoorientedMap:
    """Product map V + W -> M + N with sign (-1)^((m-v)w)"""
    v, w, m = f.domain.dim, g.domain.dim, f.codomain.dim
    product = LinearMap.from_array(
        f.domain.direct_sum(g.domain),
        f.codomain.direct_sum(g.codomain),
        block_diagonal(f.map.array(), g.map.array()),
    )
    return CoorientedMap(product, parity_sign((m - v) * w) * f.omega * g.omega)


def cap_orientation(f: CoorientedMap, g: LinearMap, beta_w: OrientedSubspace) -> CapOrientation:
    """
    Orientation of V x_M W with (beta_P, beta_W) the pullback co-orientation

    Raises:
        NotTransverseError: If f and g are not transverse
    """
    if beta_w.space != g.domain:
        raise ValueError("Orientation must be given on the domain of g")
    pulled = cooriented_pullback(f, g)
    orientation = OrientedSubspace(pulled.domain, pulled.omega * beta_w.sign)
    return CapOrientation(orientation=orientation, to_base=pulled.map)


def induced_coorientation(f: LinearMap, beta_v: OrientedSubspace, beta_m: OrientedSubspace) -> CoorientedMap:
    """Co-orientation (beta_V, beta_M) of a map between oriented spaces"""
    return CoorientedMap(f, beta_v.sign * beta_m.sign)


def induced_orientation(f: CoorientedMap, beta_m: OrientedSubspace) -> OrientedSubspace:
    """Orientation beta_V with (beta_V, beta_M) the co-orientation of f"""
    return OrientedSubspace(f.domain, f.omega * beta_m.sign)
