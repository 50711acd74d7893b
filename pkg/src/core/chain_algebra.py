"""
Chain Algebra - Cubical chains, cochains and their homology

Boundary matrices from the cube boundary formula
d(s) = sum_i (-1)^i (s d_i^0 - s d_i^1), coboundaries by transposition,
homology and cohomology over Z (Smith normal form, with generators) or
Z/2 (GF(2) ranks), fundamental classes and augmentation.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Tuple

import networkx as nx

from core.cubical_complex import CubicalComplex, FaceKey, sort_key
from core.errors import (
    ComplexMismatchError,
    NonOrientableError,
    NotClosedError,
    NotCycleError,
    UnknownFaceError,
    WrongDegreeError,
)
from core.exact_linalg import (
    IntMatrix,
    columns_array,
    det_sign,
    rank_mod2,
    rational_solve,
    smith_normal_form,
)

logger = logging.getLogger(__name__)

COEFFICIENTS = {"z": 0, "z2": 2}


def coefficient_modulus(coeff: str) -> int:
    try:
        return COEFFICIENTS[coeff]
    except KeyError:
        raise ValueError(f"Unknown coefficient ring {coeff!r}, expected one of {sorted(COEFFICIENTS)}") from None


@dataclass
class _Graded:
    """Sparse integer combination of faces of one degree"""
    complex: CubicalComplex
    degree: int
    terms: Dict[FaceKey, int] = field(default_factory=dict)
    modulus: int = 0

    def __post_init__(self):
        index = self.complex.index(self.degree) if self.degree >= 0 else {}
        cleaned = {}
        for face, value in self.terms.items():
            key = frozenset(face)
            if key not in index:
                if key in self.complex:
                    raise WrongDegreeError(
                        f"Face {sorted(key)} has dimension {len(key).bit_length() - 1}, not {self.degree}"
                    )
                raise UnknownFaceError(f"{sorted(key)} is not a face of the complex")
            value = int(value) % self.modulus if self.modulus else int(value)
            if value:
                cleaned[key] = value
        self.terms = cleaned

    def _check(self, other: "_Graded"):
        if type(other) is not type(self):
            raise TypeError(f"Cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.complex != self.complex:
            raise ComplexMismatchError("Operands live on different complexes")
        if other.degree != self.degree or other.modulus != self.modulus:
            raise WrongDegreeError(
                f"Operands of degree {self.degree} and {other.degree} cannot be added"
            )

    def _new(self, terms: Dict[FaceKey, int]):
        return type(self)(self.complex, self.degree, terms, self.modulus)

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for face, value in other.terms.items():
            terms[face] = terms.get(face, 0) + value
        return self._new(terms)

    def __neg__(self):
        return self._new({face: -value for face, value in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, scalar: int):
        return self._new({face: scalar * value for face, value in self.terms.items()})

    def __getitem__(self, face) -> int:
        return self.terms.get(frozenset(face), 0)

    def is_zero(self) -> bool:
        return not self.terms

    def vector(self) -> List[int]:
        """Coefficients in basis order"""
        return [self.terms.get(face, 0) for face in self.complex.basis(self.degree)]

    @classmethod
    def from_vector(cls, complex_: CubicalComplex, degree: int, vector: Iterable[int], modulus: int = 0):
        basis = complex_.basis(degree)
        return cls(complex_, degree, {face: value for face, value in zip(basis, vector)}, modulus)

    @classmethod
    def basis_element(cls, complex_: CubicalComplex, face: Iterable[str], modulus: int = 0):
        key = frozenset(face)
        return cls(complex_, len(key).bit_length() - 1, {key: 1}, modulus)

    def sorted_terms(self) -> List[Tuple[FaceKey, int]]:
        return sorted(self.terms.items(), key=lambda item: sort_key(item[0]))


class Chain(_Graded):
    """Element of K_*(X)"""
    pass


class Cochain(_Graded):
    """Element of K^*(X); F^* is the cochain with terms {F: 1}"""

    def evaluate(self, chain: Chain) -> int:
        """Kronecker evaluation on a chain of the same degree"""
        if chain.complex != self.complex:
            raise ComplexMismatchError("Cochain and chain live on different complexes")
        if chain.degree != self.degree:
            raise WrongDegreeError(f"Cannot evaluate a {self.degree}-cochain on a {chain.degree}-chain")
        total = sum(value * chain.terms.get(face, 0) for face, value in self.terms.items())
        return total % self.modulus if self.modulus else total


@dataclass(frozen=True)
class ChainComplexData:
    """
    Graded bases and boundary matrices

    boundaries[k] maps degree k to degree k - 1 (boundaries[0] has no rows).
    """
    complex: CubicalComplex
    modulus: int
    bases: Tuple[Tuple[FaceKey, ...], ...]
    boundaries: Tuple[IntMatrix, ...]

    def boundary(self, k: int) -> IntMatrix:
        """d_k, including the empty maps outside 0..dim"""
        if 0 <= k < len(self.boundaries):
            return self.boundaries[k]
        return IntMatrix.zeros(self.size(k - 1), self.size(k))

    def coboundary(self, k: int) -> IntMatrix:
        """d^k: degree k to k + 1, the transpose of d_(k+1)"""
        return self.boundary(k + 1).transpose()

    def size(self, k: int) -> int:
        return len(self.bases[k]) if 0 <= k < len(self.bases) else 0


def cube_boundary_terms(complex_: CubicalComplex, face: FaceKey) -> List[Tuple[FaceKey, int]]:
    """Faces of the boundary of one cube with their coefficients"""
    spec = complex_.spec(face)
    full = spec.full
    terms = []
    for i in range(1, spec.dim + 1):
        bit = 1 << (i - 1)
        sign = -1 if i % 2 else 1
        terms.append((spec.face((0, full & ~bit)).key, sign))
        terms.append((spec.face((bit, full)).key, -sign))
    return terms


@lru_cache(maxsize=64)
def boundary_matrices(complex_: CubicalComplex, coeff: str = "z") -> ChainComplexData:
    """
    Boundary matrices of the cubical chain complex

    Args:
        complex_: Validated complex
        coeff: "z" or "z2"

    Returns:
        ChainComplexData with d_k for k = 0..dim
    """
    modulus = coefficient_modulus(coeff)
    top = complex_.dim
    bases = tuple(tuple(complex_.basis(k)) for k in range(top + 1))
    boundaries = [IntMatrix.zeros(0, len(bases[0]) if bases else 0)]
    for k in range(1, top + 1):
        index = complex_.index(k - 1)
        rows = [[0] * len(bases[k]) for _ in bases[k - 1]]
        for j, face in enumerate(bases[k]):
            for sub, sign in cube_boundary_terms(complex_, face):
                rows[index[sub]][j] += sign
        matrix = IntMatrix.from_rows(rows, cols=len(bases[k]))
        boundaries.append(matrix.reduce(modulus) if modulus else matrix)
    logger.debug(f"Boundary matrices for sizes {[len(b) for b in bases]}")
    return ChainComplexData(complex_, modulus, bases, tuple(boundaries))


def boundary(chain: Chain) -> Chain:
    if chain.degree <= 0:
        return Chain(chain.complex, chain.degree - 1, {}, chain.modulus)
    terms: Dict[FaceKey, int] = {}
    for face, value in chain.terms.items():
        for sub, sign in cube_boundary_terms(chain.complex, face):
            terms[sub] = terms.get(sub, 0) + sign * value
    return Chain(chain.complex, chain.degree - 1, terms, chain.modulus)


def coboundary(cochain: Cochain) -> Cochain:
    """(d alpha)(s) = alpha(d s), no further sign"""
    complex_ = cochain.complex
    degree = cochain.degree + 1
    terms: Dict[FaceKey, int] = {}
    for face in complex_.basis(degree):
        value = sum(sign * cochain.terms.get(sub, 0) for sub, sign in cube_boundary_terms(complex_, face))
        if value:
            terms[face] = value
    return Cochain(complex_, degree, terms, cochain.modulus)


def is_cycle(chain: Chain) -> bool:
    return boundary(chain).is_zero()


def is_cocycle(cochain: Cochain) -> bool:
    return coboundary(cochain).is_zero()


@dataclass(frozen=True)
class GroupResult:
    """Homology of one position of an integer complex, with a cycle basis"""
    betti: int
    torsion: Tuple[int, ...]
    cycle_basis: IntMatrix
    orders: Tuple[int, ...]

    @property
    def free_columns(self) -> List[int]:
        return [i for i, order in enumerate(self.orders) if order == 0]

    @property
    def torsion_columns(self) -> List[int]:
        return [i for i, order in enumerate(self.orders) if order > 1]


def matrix_homology(outgoing: IntMatrix, incoming: IntMatrix) -> GroupResult:
    """
    Homology ker(outgoing) / im(incoming) over Z

    The cycle lattice comes from the trailing columns of the right SNF
    transform of outgoing; boundaries are rewritten in those coordinates
    and reduced again, so the final cycle basis is adapted to the
    boundary sublattice.

    Args:
        outgoing: Map out of the position (rows: next position)
        incoming: Map into the position (columns: previous position)

    Returns:
        GroupResult with orders 0 for free generators, d > 1 for torsion,
        and 1 for cycles that bound
    """
    n = outgoing.cols
    snf = smith_normal_form(outgoing)
    r = snf.rank
    cycles = IntMatrix.from_columns([snf.right.column(j) for j in range(r, n)], rows=n)
    z = n - r
    coordinates = snf.right_inverse @ incoming
    reduced = IntMatrix.from_rows([coordinates.row(i) for i in range(r, n)], cols=incoming.cols)
    second = smith_normal_form(reduced)
    adapted = cycles @ second.left_inverse
    orders = tuple(list(second.factors) + [0] * (z - second.rank))
    betti = z - second.rank
    torsion = tuple(d for d in second.factors if d > 1)
    return GroupResult(betti, torsion, adapted, orders)


def format_group(betti: int, torsion: Tuple[int, ...] = (), coeff: str = "z") -> str:
    """Z^2 ⊕ Z/2 style name of a finitely generated group"""
    if coeff == "z2":
        return "0" if betti == 0 else "Z/2" if betti == 1 else f"(Z/2)^{betti}"
    parts = ["Z" if betti == 1 else f"Z^{betti}"] if betti else []
    parts += [f"Z/{t}" for t in sorted(torsion)]
    return " ⊕ ".join(parts) or "0"


@dataclass(frozen=True)
class HomologyResult:
    """
    Homology or cohomology group in one degree

    Generators are recorded for integer coefficients only.
    """
    degree: int
    coeff: str
    betti: int
    torsion: Tuple[int, ...] = ()
    free_generators: Tuple[Chain, ...] = ()
    torsion_generators: Tuple[Chain, ...] = ()
    group: Optional[GroupResult] = None
    cohomological: bool = False

    @property
    def generators(self) -> Tuple[Chain, ...]:
        return self.free_generators + self.torsion_generators

    @property
    def label(self) -> str:
        return format_group(self.betti, self.torsion, self.coeff)

    @property
    def is_zero(self) -> bool:
        return self.betti == 0 and not self.torsion


def _group_generators(complex_: CubicalComplex, degree: int, group: GroupResult, kind) -> Tuple[tuple, tuple]:
    free, torsion = [], []
    for i in group.free_columns:
        free.append(kind.from_vector(complex_, degree, group.cycle_basis.column(i)))
    for i in group.torsion_columns:
        torsion.append(kind.from_vector(complex_, degree, group.cycle_basis.column(i)))
    return tuple(free), tuple(torsion)


def _mod2_betti(outgoing: IntMatrix, incoming: IntMatrix) -> int:
    return outgoing.cols - rank_mod2(outgoing) - rank_mod2(incoming)


def homology(complex_: CubicalComplex, degree: int, coeff: str = "z") -> HomologyResult:
    """
    Homology group H_degree(X; coeff)

    Args:
        complex_: Validated complex
        degree: Any integer; degrees outside 0..dim give the zero group
        coeff: "z" or "z2"

    Returns:
        HomologyResult with Betti number, torsion and integer generators
    """
    data = boundary_matrices(complex_, coeff)
    outgoing, incoming = data.boundary(degree), data.boundary(degree + 1)
    if data.modulus:
        return HomologyResult(degree, coeff, _mod2_betti(outgoing, incoming))
    group = matrix_homology(outgoing, incoming)
    free, torsion = _group_generators(complex_, degree, group, Chain) if data.size(degree) else ((), ())
    logger.debug(f"H_{degree}: betti {group.betti}, torsion {group.torsion}")
    return HomologyResult(degree, coeff, group.betti, group.torsion, free, torsion, group)


def cohomology(complex_: CubicalComplex, degree: int, coeff: str = "z") -> HomologyResult:
    """Cohomology H^degree(X; coeff) of the transposed complex"""
    data = boundary_matrices(complex_, coeff)
    outgoing, incoming = data.coboundary(degree), data.coboundary(degree - 1)
    if data.modulus:
        return HomologyResult(degree, coeff, _mod2_betti(outgoing, incoming), cohomological=True)
    group = matrix_homology(outgoing, incoming)
    free, torsion = _group_generators(complex_, degree, group, Cochain) if data.size(degree) else ((), ())
    logger.debug(f"H^{degree}: betti {group.betti}, torsion {group.torsion}")
    return HomologyResult(degree, coeff, group.betti, group.torsion, free, torsion, group, cohomological=True)


def class_of(result: HomologyResult, element: Chain) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """
    Coordinates of a cycle (or cocycle) class in the recorded basis

    Returns:
        (free coordinates, torsion residues); the class is zero exactly
        when both are all zero

    Raises:
        NotCycleError: If element is not closed
    """
    if result.group is None:
        raise ValueError("Class coordinates need integer coefficients")
    closed = is_cocycle(element) if result.cohomological else is_cycle(element)
    if not closed:
        raise NotCycleError("Element is not closed")
    group = result.group
    if not group.orders:
        return (), ()
    basis = columns_array(group.cycle_basis.columns(), group.cycle_basis.rows)
    coordinates = rational_solve(basis, element.vector())
    values = [int(Fraction(x)) for x in coordinates]
    free = tuple(values[i] for i in group.free_columns)
    residues = tuple(values[i] % group.orders[i] for i in group.torsion_columns)
    return free, residues


def is_homologous_to_zero(result: HomologyResult, element: Chain) -> bool:
    free, residues = class_of(result, element)
    return not any(free) and not any(residues)


def betti_numbers(complex_: CubicalComplex, coeff: str = "z") -> List[int]:
    return [homology(complex_, k, coeff).betti for k in range(complex_.dim + 1)]


def euler_characteristic_from_betti(complex_: CubicalComplex) -> int:
    return sum((-1) ** k * b for k, b in enumerate(betti_numbers(complex_)))


def augmentation(chain: Chain) -> int:
    """
    Sum of the coefficients of a 0-chain

    Raises:
        WrongDegreeError: If the chain is not of degree 0
    """
    if chain.degree != 0:
        raise WrongDegreeError(f"Augmentation needs a 0-chain, got degree {chain.degree}")
    total = sum(chain.terms.values())
    return total % chain.modulus if chain.modulus else total


def fundamental_class(complex_: CubicalComplex, coeff: str = "z") -> Chain:
    """
    Signed sum of top cubes with zero boundary

    Signs are propagated breadth-first across shared facets; the first
    top cube of every connected piece gets +1.

    Raises:
        NotClosedError: If X is not pure or a facet lies in other than two top cubes
        NonOrientableError: If the propagated signs contradict each other
    """
    modulus = coefficient_modulus(coeff)
    m = complex_.dim
    tops = complex_.basis(m)
    if not complex_.is_pure():
        raise NotClosedError("Complex is not pure")
    if m == 0:
        return Chain(complex_, 0, {top: 1 for top in tops}, modulus)

    graph = nx.Graph()
    graph.add_nodes_from(tops)
    incidence: Dict[FaceKey, List[Tuple[FaceKey, int]]] = {}
    signs: Dict[Tuple[FaceKey, FaceKey], int] = {}
    for top in tops:
        for facet, sign in cube_boundary_terms(complex_, top):
            incidence.setdefault(facet, []).append((top, sign))
            signs[(top, facet)] = sign
    for facet in complex_.basis(m - 1):
        entries = incidence.get(facet, [])
        if len(entries) != 2:
            raise NotClosedError(f"Facet {sorted(facet)} lies in {len(entries)} top cubes")
        graph.add_edge(entries[0][0], entries[1][0], facet=facet)

    if modulus:
        return Chain(complex_, m, {top: 1 for top in tops}, modulus)

    coefficients: Dict[FaceKey, int] = {}
    components = sorted((sorted(c, key=sort_key) for c in nx.connected_components(graph)), key=lambda c: sort_key(c[0]))
    for component in components:
        root = component[0]
        coefficients[root] = 1
        for parent, child in nx.bfs_edges(graph, root, sort_neighbors=lambda nodes: sorted(nodes, key=sort_key)):
            facet = graph.edges[parent, child]["facet"]
            coefficients[child] = -coefficients[parent] * signs[(parent, facet)] * signs[(child, facet)]

    for facet, entries in incidence.items():
        total = sum(coefficients[top] * sign for top, sign in entries)
        if total:
            raise NonOrientableError(f"Orientations disagree across facet {sorted(facet)}")
    logger.info(f"Fundamental class over {len(tops)} top cubes")
    return Chain(complex_, m, coefficients, modulus)


def cube_face_boundary_sign(n: int, i: int, j: int) -> int:
    """
    Orientation of the face x_i = j of I^n by the outward normal rule

    The outward normal followed by the face's coordinate basis is compared
    with the standard basis of R^n.

    Returns:
        +1 or -1, which equals (-1)^(i+j)
    """
    if not 1 <= i <= n or j not in (0, 1):
        raise ValueError(f"No face x_{i} = {j} on I^{n}")
    columns = [[(1 if j else -1) * int(k == i - 1) for k in range(n)]]
    columns += [[int(k == c) for k in range(n)] for c in range(n) if c != i - 1]
    return det_sign(IntMatrix.from_columns(columns, rows=n))

