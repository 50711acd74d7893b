"""
Products and Duality - Cup, cap and cross products, dual blocks and Poincare duality

Products come from the diagonal E -> sum rho A_H (x) B_K, where A_H binds
the coordinates in K to 0 and B_K binds the coordinates in H to 1. The
dual map sends F^* to signed cells (F, B) of the central subdivision, one
per top cube B containing F. Poincare duality, universal coefficients
and Kunneth are decided exactly with Smith normal forms.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from core.chain_algebra import (
    Chain,
    Cochain,
    HomologyResult,
    augmentation,
    boundary,
    boundary_matrices,
    class_of,
    coboundary,
    coefficient_modulus,
    cohomology,
    format_group,
    fundamental_class,
    homology,
    is_cocycle,
    is_cycle,
    matrix_homology,
)
from core.cubical_complex import (
    CubicalComplex,
    FaceKey,
    bit_positions,
    product,
    product_spec,
    sort_key,
)
from core.errors import (
    ComplexMismatchError,
    DegreeMismatchError,
    NotClosedError,
    NotCocycleError,
    NotCycleError,
    NotInDualBasisError,
)
from core.exact_linalg import (
    IntMatrix,
    determinant,
    invariant_factors,
    permutation_sign,
    rank_mod2,
    smith_normal_form,
)
from core.subdivision import Pair, SubdividedComplex, cell_coordinates, subdivide

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DiagonalTerm:
    """One summand rho A_H (x) B_K of the diagonal of a face"""
    front: FaceKey
    back: FaceKey
    sign: int
    front_coordinates: Tuple[int, ...]
    back_coordinates: Tuple[int, ...]


@lru_cache(maxsize=None)
def local_diagonal(n: int) -> Tuple[Tuple[int, int], ...]:
    """(H as a bit mask, rho) for every subset H of the n coordinates"""
    terms = []
    for h in range(1 << n):
        inversions = sum(
            1 for a in range(n) if h >> a & 1 for b in range(a) if not h >> b & 1
        )
        terms.append((h, -1 if inversions % 2 else 1))
    return tuple(terms)


def serre_diagonal(complex_: CubicalComplex, face) -> List[DiagonalTerm]:
    """
    Diagonal expansion of a face

    Args:
        complex_: Validated complex
        face: Vertex set of a face

    Returns:
        One DiagonalTerm per subset H of the free coordinates, with
        coordinates reported 1-based
    """
    spec = complex_.spec(face)
    full = spec.full
    terms = []
    for h, sign in local_diagonal(spec.dim):
        terms.append(DiagonalTerm(
            front=spec.face((0, h)).key,
            back=spec.face((h, full)).key,
            sign=sign,
            front_coordinates=tuple(c + 1 for c in bit_positions(h)),
            back_coordinates=tuple(c + 1 for c in bit_positions(full & ~h)),
        ))
    return terms


def diagonal_coassociativity(complex_: CubicalComplex, face) -> Tuple[Dict, Dict]:
    """
    Both iterated diagonals of a face as {(A, B, C): coefficient}

    The first expands the front factor, the second the back factor.
    """
    left: Counter = Counter()
    right: Counter = Counter()
    for term in serre_diagonal(complex_, face):
        for inner in serre_diagonal(complex_, term.front):
            left[(inner.front, inner.back, term.back)] += term.sign * inner.sign
        for inner in serre_diagonal(complex_, term.back):
            right[(term.front, inner.front, inner.back)] += term.sign * inner.sign
    return (
        {key: value for key, value in left.items() if value},
        {key: value for key, value in right.items() if value},
    )


def _same_ring(first, second):
    if first.complex != second.complex:
        raise ComplexMismatchError("Operands live on different complexes")
    if first.modulus != second.modulus:
        raise ValueError("Operands use different coefficient rings")


def cup(alpha: Cochain, beta: Cochain) -> Cochain:
    """
    Cup product (alpha u beta)(E) = sum rho alpha(A_H) beta(B_K)

    Raises:
        ComplexMismatchError: If the cochains live on different complexes
    """
    _same_ring(alpha, beta)
    complex_ = alpha.complex
    degree = alpha.degree + beta.degree
    terms: Dict[FaceKey, int] = {}
    for face in complex_.basis(degree):
        value = 0
        for term in serre_diagonal(complex_, face):
            if len(term.front_coordinates) == alpha.degree:
                value += term.sign * alpha[term.front] * beta[term.back]
        if value:
            terms[face] = value
    return Cochain(complex_, degree, terms, alpha.modulus)


def cap(alpha: Cochain, chain: Chain) -> Chain:
    """
    Cap product alpha n E = sum rho alpha(B_K) A_H, extended linearly

    A cochain of higher degree than the chain gives the zero chain of
    negative degree.

    Raises:
        ComplexMismatchError: If the operands live on different complexes
    """
    _same_ring(alpha, chain)
    complex_ = chain.complex
    degree = chain.degree - alpha.degree
    terms: Dict[FaceKey, int] = {}
    if degree >= 0:
        for face, coefficient in chain.terms.items():
            for term in serre_diagonal(complex_, face):
                if len(term.back_coordinates) != alpha.degree:
                    continue
                value = alpha[term.back]
                if value:
                    terms[term.front] = terms.get(term.front, 0) + term.sign * value * coefficient
    return Chain(complex_, degree, terms, chain.modulus)


def cap_adjunction_holds(alpha: Cochain, beta: Cochain, chain: Chain) -> bool:
    """a((alpha u beta) n c) = a(alpha n (beta n c)) for deg c = deg alpha + deg beta"""
    if chain.degree != alpha.degree + beta.degree:
        raise DegreeMismatchError(
            f"Chain of degree {chain.degree} does not match cochains of degrees {alpha.degree}, {beta.degree}"
        )
    return augmentation(cap(cup(alpha, beta), chain)) == augmentation(cap(alpha, cap(beta, chain)))


def cross(first: Chain, second: Chain) -> Chain:
    """Cross product on product(X, Y); E (x) F goes to the product cube"""
    if first.modulus != second.modulus:
        raise ValueError("Operands use different coefficient rings")
    target = product(first.complex, second.complex)
    terms: Dict[FaceKey, int] = {}
    for a, x in first.terms.items():
        spec_a = first.complex.spec(a)
        for b, y in second.terms.items():
            key = product_spec(spec_a, second.complex.spec(b)).key
            terms[key] = terms.get(key, 0) + x * y
    return Chain(target, first.degree + second.degree, terms, first.modulus)


# Dual blocks


@dataclass
class DualChain(Chain):
    """Chain on sd(X) whose cells are read as pairs (E, G)"""
    subdivision: Optional[SubdividedComplex] = None

    def _new(self, terms: Dict[FaceKey, int]):
        return DualChain(self.complex, self.degree, terms, self.modulus, self.subdivision)

    def pair_terms(self) -> List[Tuple[Pair, int]]:
        pairs = [(self.subdivision.pair_of(cell), value) for cell, value in self.terms.items()]
        return sorted(pairs, key=lambda item: (sort_key(item[0][0]), sort_key(item[0][1])))


def degree_sign(m: int, p: int) -> int:
    """t_p = (-1)^((m-p)(m-p+1)/2)"""
    q = m - p
    return -1 if (q * (q + 1) // 2) % 2 else 1


@lru_cache(maxsize=16)
def _dual_coefficients(complex_: CubicalComplex, modulus: int) -> Dict[Pair, int]:
    """Coefficient of every cell (F, B), B a top cube, in psi(F^*)"""
    if not complex_.is_pure():
        raise NotClosedError("Dual blocks need a pure complex")
    m = complex_.dim
    if modulus:
        orientation = {top: 1 for top in complex_.basis(m)}
    else:
        orientation = fundamental_class(complex_).terms
    coefficients = {}
    for top in complex_.basis(m):
        for face, interval in complex_.faces(top):
            u, w = interval
            order = cell_coordinates(m, interval) + bit_positions(w & ~u)
            p = len(bit_positions(w & ~u))
            coefficients[(face, top)] = degree_sign(m, p) * orientation[top] * permutation_sign(order)
    logger.debug(f"Dual block signs for {len(coefficients)} cells")
    return coefficients


def psi_dual(alpha: Cochain) -> DualChain:
    """
    Dual chain of a cochain in the central subdivision

    psi(F^*) = sum over top cubes B containing F of the signed cell (F, B);
    over Z the signs follow the fundamental class, so that
    boundary(psi(a)) = psi(coboundary(a)).

    Raises:
        NotClosedError: If X is not pure, or over Z not closed
        NonOrientableError: Over Z, if X has no fundamental class
    """
    complex_ = alpha.complex
    coefficients = _dual_coefficients(complex_, alpha.modulus)
    sd = subdivide(complex_)
    terms: Dict[FaceKey, int] = {}
    for face, value in alpha.terms.items():
        for _, top in sd.dual_cells(face):
            cell = sd.cell(face, top)
            terms[cell] = terms.get(cell, 0) + value * coefficients[(face, top)]
    return DualChain(sd.complex, complex_.dim - alpha.degree, terms, alpha.modulus, sd)


def _split_boundary(chain: DualChain, internal: bool) -> DualChain:
    sd = chain.subdivision
    terms: Dict[FaceKey, int] = {}
    for cell, value in chain.terms.items():
        for pair, sign, is_internal in sd.boundary_pairs(sd.pair_of(cell)):
            if is_internal == internal:
                target = sd.cell(*pair)
                terms[target] = terms.get(target, 0) + sign * value
    return DualChain(chain.complex, chain.degree - 1, terms, chain.modulus, sd)


def internal_boundary(chain: DualChain) -> DualChain:
    """Boundary faces that keep the top cube and enlarge the dual face"""
    return _split_boundary(chain, True)


def external_boundary(chain: DualChain) -> DualChain:
    """Boundary faces lying on the boundary of a cube"""
    return _split_boundary(chain, False)


def dual_basis(complex_: CubicalComplex, degree: int, coeff: str = "z") -> List[Tuple[FaceKey, DualChain]]:
    """psi(F^*) for every face F of the given degree"""
    modulus = coefficient_modulus(coeff)
    return [
        (face, psi_dual(Cochain.basis_element(complex_, face, modulus)))
        for face in complex_.basis(degree)
    ]


def intersection_map(chain: DualChain, base: CubicalComplex) -> Cochain:
    """
    Cochain intersecting a dual chain, with I(psi(F^*), F) = +1

    Args:
        chain: Dual chain that is a combination of the psi(F^*)
        base: The complex X that was subdivided

    Raises:
        NotInDualBasisError: If the chain is not such a combination
    """
    coefficients = _dual_coefficients(base, chain.modulus)
    sd = subdivide(base)
    degree = base.dim - chain.degree
    found: Dict[FaceKey, int] = {}
    for cell, value in chain.terms.items():
        pair = sd.pair_of(cell)
        if pair not in coefficients:
            raise NotInDualBasisError(f"Cell {sorted(pair[0])} in {sorted(pair[1])} is not in a dual block")
        face = pair[0]
        # coefficients are units, so dividing is multiplying
        found.setdefault(face, value * coefficients[pair])
    cochain = Cochain(base, degree, found, chain.modulus)
    if psi_dual(cochain).terms != chain.terms:
        raise NotInDualBasisError("Dual chain is not a combination of dual blocks")
    return cochain


@dataclass
class IntersectReport:
    """Chain-map and inverse checks of the dual map over all faces"""
    faces: int = 0
    chain_map_failures: List[FaceKey] = field(default_factory=list)
    identity_failures: List[FaceKey] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.chain_map_failures and not self.identity_failures

    def render(self) -> str:
        lines = [f"faces checked: {self.faces}"]
        for label, failures in (("psi chain map", self.chain_map_failures), ("I o psi = id", self.identity_failures)):
            lines.append(f"{label}: {'PASS' if not failures else f'FAIL ({len(failures)})'}")
            for face in failures[:5]:
                lines.append(f"  {' '.join(sort_key(face))}")
        return "\n".join(lines) + "\n"


def intersect_check(complex_: CubicalComplex, coeff: str = "z") -> IntersectReport:
    """Check boundary(psi(F^*)) = psi(dF^*) and I(psi(F^*)) = F^* for every face"""
    modulus = coefficient_modulus(coeff)
    report = IntersectReport()
    for degree in range(complex_.dim + 1):
        for face in complex_.basis(degree):
            report.faces += 1
            star = Cochain.basis_element(complex_, face, modulus)
            dual = psi_dual(star)
            if boundary(dual).terms != psi_dual(coboundary(star)).terms:
                report.chain_map_failures.append(face)
            if intersection_map(dual, complex_).terms != star.terms:
                report.identity_failures.append(face)
    logger.info(f"Intersection check: {report.faces} faces, passed={report.passed}")
    return report


# Poincare duality


def poincare_dual(alpha: Cochain) -> Chain:
    """alpha n [M]"""
    coeff = "z2" if alpha.modulus else "z"
    return cap(alpha, fundamental_class(alpha.complex, coeff))


def duality_matrix(complex_: CubicalComplex, p: int, coeff: str = "z") -> IntMatrix:
    """Matrix of t_p (F^* n [M]) from K^p to K_(m-p), basis order on both sides"""
    modulus = coefficient_modulus(coeff)
    m = complex_.dim
    rows, cols = len(complex_.basis(m - p)), len(complex_.basis(p))
    if not 0 <= p <= m:
        return IntMatrix.zeros(rows, cols)
    fundamental = fundamental_class(complex_, coeff)
    sign = degree_sign(m, p)
    columns = [
        (sign * cap(Cochain.basis_element(complex_, face, modulus), fundamental)).vector()
        for face in complex_.basis(p)
    ]
    return IntMatrix.from_columns(columns, rows=rows)


@dataclass(frozen=True)
class DualityDegree:
    degree: int
    cohomology: str
    homology: str
    iso: bool


@dataclass(frozen=True)
class PdReport:
    """Verdict of the duality map H^(m-k) -> H_k in each degree k"""
    dim: int
    coeff: str
    degrees: Tuple[DualityDegree, ...]

    @property
    def passed(self) -> bool:
        return all(row.iso for row in self.degrees)

    def render(self) -> str:
        lines = [
            f"  k={row.degree}: H^{self.dim - row.degree} = {row.cohomology} -> H_{row.degree} = {row.homology}  "
            f"{'iso' if row.iso else 'NOT iso'}"
            for row in self.degrees
        ]
        if self.passed:
            lines.append(f"PD: iso in degrees 0..{self.dim}")
        else:
            failed = ", ".join(str(row.degree) for row in self.degrees if not row.iso)
            lines.append(f"PD: fails in degrees {failed}")
        return "\n".join(lines) + "\n"


def _cone_boundary(complex_: CubicalComplex, k: int, coeff: str) -> IntMatrix:
    """
    Mapping cone boundary from cone_k = K^(m-k+1) + K_k to cone_(k-1)

    The block matrix is [[-d, 0], [psi, boundary]].
    """
    data = boundary_matrices(complex_, coeff)
    m = complex_.dim
    p = m - k + 1
    coboundary_block = data.coboundary(p)
    matrix = IntMatrix.block([
        [-coboundary_block, IntMatrix.zeros(data.size(p + 1), data.size(k))],
        [duality_matrix(complex_, p, coeff), data.boundary(k)],
    ])
    return matrix.reduce(data.modulus) if data.modulus else matrix


def _cone_vanishes(complex_: CubicalComplex, k: int, coeff: str) -> bool:
    outgoing = _cone_boundary(complex_, k, coeff)
    incoming = _cone_boundary(complex_, k + 1, coeff)
    if coeff == "z2":
        return outgoing.cols - rank_mod2(outgoing) - rank_mod2(incoming) == 0
    group = matrix_homology(outgoing, incoming)
    return group.betti == 0 and not group.torsion


def _induced_rank_mod2(complex_: CubicalComplex, k: int) -> int:
    """
    Rank of the map H^(m-k) -> H_k over GF(2)

    With D the coboundary out of degree m - k, the block matrix
    [[D, 0], [psi, boundary]] has rank rank(D) + dim(psi(ker D) + im boundary).
    """
    data = boundary_matrices(complex_, "z2")
    p = complex_.dim - k
    coboundary_block = data.coboundary(p)
    incoming = data.boundary(k + 1)
    stacked = IntMatrix.block([
        [coboundary_block, IntMatrix.zeros(data.size(p + 1), data.size(k + 1))],
        [duality_matrix(complex_, p, "z2"), incoming],
    ])
    return rank_mod2(stacked) - rank_mod2(coboundary_block) - rank_mod2(incoming)


def _induced_surjective(source: HomologyResult, target: HomologyResult) -> bool:
    """Whether the images of the generators of source, with the torsion relations, generate target"""
    group = target.group
    orders = [group.orders[i] for i in group.torsion_columns]
    free = len(group.free_columns)
    rows = free + len(orders)
    if rows == 0:
        return True
    columns = []
    for generator in source.generators:
        coordinates, residues = class_of(target, poincare_dual(generator))
        columns.append(list(coordinates) + list(residues))
    for j, order in enumerate(orders):
        columns.append([order if i == free + j else 0 for i in range(rows)])
    snf = smith_normal_form(IntMatrix.from_columns(columns, rows=rows))
    return snf.rank == rows and all(factor == 1 for factor in snf.factors)


def duality_iso(complex_: CubicalComplex, k: int, coeff: str = "z") -> bool:
    """
    Whether n [M] induces an isomorphism H^(m-k) -> H_k

    An acyclic mapping cone in degrees k and k + 1 settles it at once.
    Otherwise the groups must agree and the induced map must be onto,
    which suffices for finitely generated abelian groups.
    """
    if _cone_vanishes(complex_, k, coeff) and _cone_vanishes(complex_, k + 1, coeff):
        return True
    source = cohomology(complex_, complex_.dim - k, coeff)
    target = homology(complex_, k, coeff)
    if (source.betti, sorted(source.torsion)) != (target.betti, sorted(target.torsion)):
        return False
    if coeff == "z2":
        return _induced_rank_mod2(complex_, k) == target.betti
    return _induced_surjective(source, target)


def pd_check(complex_: CubicalComplex, coeff: str = "z") -> PdReport:
    """
    Decide whether capping with [M] is an isomorphism H^(m-k) -> H_k

    Each degree is decided on its own, see duality_iso.

    Raises:
        NotClosedError: If X is not a closed pseudomanifold
        NonOrientableError: Over Z, if X has no fundamental class
    """
    fundamental_class(complex_, coeff)
    m = complex_.dim
    degrees = []
    for k in range(m + 1):
        degrees.append(DualityDegree(
            k,
            cohomology(complex_, m - k, coeff).label,
            homology(complex_, k, coeff).label,
            duality_iso(complex_, k, coeff),
        ))
    logger.info(f"Poincare duality check on {complex_.name or 'complex'}: {[d.iso for d in degrees]}")
    return PdReport(m, coeff, tuple(degrees))


# Universal coefficients and Kunneth


def kronecker(alpha: Cochain, chain: Chain) -> int:
    """
    Kronecker pairing a(alpha n c) of a cocycle and a cycle

    Raises:
        DegreeMismatchError: If the degrees differ
        NotCocycleError: If alpha is not a cocycle
        NotCycleError: If c is not a cycle
    """
    if alpha.degree != chain.degree:
        raise DegreeMismatchError(f"Cannot pair a {alpha.degree}-cochain with a {chain.degree}-chain")
    if not is_cocycle(alpha):
        raise NotCocycleError("Cochain is not a cocycle")
    if not is_cycle(chain):
        raise NotCycleError("Chain is not a cycle")
    return augmentation(cap(alpha, chain))


@dataclass(frozen=True)
class UctReport:
    """Comparison of H^k with Hom(H_k, Z) + Ext(H_(k-1), Z)"""
    degree: int
    cohomology: str
    hom_rank: int
    ext: Tuple[int, ...]
    betti_match: bool
    torsion_match: bool
    pairing: Tuple[Tuple[int, ...], ...]
    pairing_det: int

    @property
    def passed(self) -> bool:
        return self.betti_match and self.torsion_match and abs(self.pairing_det) == 1

    def render(self) -> str:
        ext = format_group(0, self.ext)
        lines = [
            f"H^{self.degree} = {self.cohomology}",
            f"Hom(H_{self.degree}, Z) = {format_group(self.hom_rank)}",
            f"Ext(H_{self.degree - 1}, Z) = {ext}",
            f"pairing determinant: {self.pairing_det}",
            f"UCT: {'PASS' if self.passed else 'FAIL'}",
        ]
        return "\n".join(lines) + "\n"


def uct_check(complex_: CubicalComplex, degree: int) -> UctReport:
    """
    Check the universal coefficient sequence in one degree over Z

    The free parts must have equal rank with a unimodular Kronecker
    pairing between the recorded generators, and the torsion of H^k must
    equal the torsion of H_(k-1).
    """
    upper = cohomology(complex_, degree)
    lower = homology(complex_, degree)
    previous = homology(complex_, degree - 1)
    pairing: Tuple[Tuple[int, ...], ...] = ()
    det = 0
    if upper.betti == lower.betti:
        pairing = tuple(
            tuple(kronecker(alpha, c) for c in lower.free_generators) for alpha in upper.free_generators
        )
        det = determinant(IntMatrix.from_rows(pairing, cols=lower.betti))
    return UctReport(
        degree,
        upper.label,
        lower.betti,
        previous.torsion,
        upper.betti == lower.betti,
        upper.torsion == previous.torsion,
        pairing,
        det,
    )


GroupSummary = Tuple[int, Tuple[int, ...]]


def kunneth_prediction(first: Sequence[GroupSummary], second: Sequence[GroupSummary]) -> List[GroupSummary]:
    """
    Homology of a product from the homology of its factors

    H_n(X x Y) = sum_(i+j=n) H_i (x) H_j + sum_(i+j=n-1) Tor(H_i, H_j).

    Args:
        first: (betti, torsion) of X in degrees 0..dim X
        second: (betti, torsion) of Y in degrees 0..dim Y

    Returns:
        (betti, invariant factors) in degrees 0..dim X + dim Y
    """
    top = len(first) + len(second) - 1
    betti = [0] * top
    orders: List[List[int]] = [[] for _ in range(top)]
    for i, (b1, t1) in enumerate(first):
        for j, (b2, t2) in enumerate(second):
            n = i + j
            betti[n] += b1 * b2
            orders[n] += [t for t in t2 for _ in range(b1)]
            orders[n] += [t for t in t1 for _ in range(b2)]
            orders[n] += [gcd(s, t) for s in t1 for t in t2]
            if n + 1 < top:
                orders[n + 1] += [gcd(s, t) for s in t1 for t in t2]
    return [(b, invariant_factors(o)) for b, o in zip(betti, orders)]


@dataclass(frozen=True)
class KunnethReport:
    predicted: Tuple[GroupSummary, ...]
    computed: Tuple[GroupSummary, ...]

    @property
    def passed(self) -> bool:
        return self.predicted == self.computed

    def render(self) -> str:
        lines = []
        for n, (expected, actual) in enumerate(zip(self.predicted, self.computed)):
            status = "ok" if expected == actual else "MISMATCH"
            lines.append(f"H_{n}: predicted {format_group(*expected)}, computed {format_group(*actual)}  {status}")
        lines.append(f"Kunneth: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"


def _summaries(complex_: CubicalComplex) -> List[GroupSummary]:
    results: List[HomologyResult] = [homology(complex_, k) for k in range(complex_.dim + 1)]
    return [(result.betti, result.torsion) for result in results]


def kunneth_check(first: CubicalComplex, second: CubicalComplex) -> KunnethReport:
    """Compare the predicted homology of X x Y with the computed one"""
    predicted = kunneth_prediction(_summaries(first), _summaries(second))
    computed = _summaries(product(first, second))
    return KunnethReport(tuple(predicted), tuple(computed))
