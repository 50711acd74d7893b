"""
Subdivision - Central subdivision of a cubical complex

The faces of sd(X) are the pairs (E, G) with E a face of G. Inside G the
cell (E, G) keeps the coordinates free in E at 1/2, the coordinates
bound in G at their values, and lets each coordinate that G frees and E
binds run between E's value and 1/2. Its vertices are the centers of the
faces F with E <= F <= G.
"""

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Dict, List, Tuple

from core.cubical_complex import (
    CubeSpec,
    CubicalComplex,
    FaceKey,
    Interval,
    sort_key,
)
from core.errors import ComplexValidationError, UnknownFaceError

logger = logging.getLogger(__name__)

Pair = Tuple[FaceKey, FaceKey]


@dataclass(frozen=True)
class LocalFace:
    """One boundary face of a cell in the local model of G = I^n"""
    sign: int
    internal: bool
    coordinate: int
    # interval of the new E inside G, and of the new G inside G
    face_interval: Interval
    cube_interval: Interval


def center_name(face: FaceKey) -> str:
    """Vertex of sd(X) at the center of a face"""
    if len(face) == 1:
        return next(iter(face))
    return "[" + "+".join(sorted(face)) + "]"


def cell_coordinates(n: int, interval: Interval) -> List[int]:
    """Coordinates of I^n that are free in I^n and bound in the face"""
    u, w = interval
    free = w & ~u
    return [c for c in range(n) if not free >> c & 1]


def cell_vertex_intervals(n: int, interval: Interval) -> List[Interval]:
    """Intervals of the faces F, listed by cell position, with E <= F <= I^n"""
    u, w = interval
    coordinates = cell_coordinates(n, interval)
    result = []
    for k in range(1 << len(coordinates)):
        fu, fw = u, w
        for index, c in enumerate(coordinates):
            bit = 1 << c
            upper = k >> index & 1
            if w & bit and u & bit:
                # bound to 1 in E: the lower end is the free state
                if not upper:
                    fu &= ~bit
            elif upper:
                fw |= bit
        result.append((fu, fw))
    return result


@lru_cache(maxsize=None)
def local_boundary(n: int, interval: Interval) -> Tuple[LocalFace, ...]:
    """
    Boundary faces of the cell (E, I^n) with their incidence signs

    Coordinate index i (1-based within the cell) contributes (-1)^i on its
    lower end and -(-1)^i on its upper end. For a coordinate E binds to 0
    the lower end leaves the cube (external) and the upper end frees the
    coordinate in E (internal); for one bound to 1 it is the other way.
    """
    u, w = interval
    full = (1 << n) - 1
    faces = []
    for i, c in enumerate(cell_coordinates(n, interval), start=1):
        bit = 1 << c
        lower = -1 if i % 2 else 1
        if u & bit:
            faces.append(LocalFace(lower, True, c, (u & ~bit, w), (0, full)))
            faces.append(LocalFace(-lower, False, c, (u, w), (bit, full)))
        else:
            faces.append(LocalFace(lower, False, c, (u, w), (0, full & ~bit)))
            faces.append(LocalFace(-lower, True, c, (u, w | bit), (0, full)))
    return tuple(faces)


class SubdividedComplex:
    """
    Central subdivision sd(X) of a validated complex

    Keeps the pairs (E, G), the cubical complex sd(X) whose vertices are
    named after the faces of X, and the translation between the two.
    """

    def __init__(self, base: CubicalComplex):
        self.base = base
        self._cells: Dict[Pair, CubeSpec] = {}
        self._pairs: Dict[FaceKey, Pair] = {}
        centers: Dict[str, FaceKey] = {}
        for face_key in base.cubes:
            owner = centers.setdefault(center_name(face_key), face_key)
            if owner != face_key:
                raise ComplexValidationError(
                    f"Faces {sorted(owner)} and {sorted(face_key)} share the center name {center_name(face_key)!r}"
                )
        for top_key, top in base.cubes.items():
            for face_key, interval in base.faces(top_key):
                spec = CubeSpec(tuple(
                    center_name(top.face(vertex_interval).key)
                    for vertex_interval in cell_vertex_intervals(top.dim, interval)
                ))
                self._cells[(face_key, top_key)] = spec
                self._pairs[spec.key] = (face_key, top_key)
        self.complex = CubicalComplex.from_cubes(self._cells.values(), name=f"sd({base.name})" if base.name else "")
        logger.info(f"Subdivision initialized: {len(self._cells)} cells")

    @property
    def pairs(self) -> List[Pair]:
        return sorted(self._cells, key=lambda pair: (sort_key(pair[0]), sort_key(pair[1])))

    def cell(self, face: FaceKey, cube: FaceKey) -> FaceKey:
        """Vertex set in sd(X) of the cell (E, G)"""
        try:
            return self._cells[(frozenset(face), frozenset(cube))].key
        except KeyError:
            raise UnknownFaceError(f"{sorted(face)} is not a face of {sorted(cube)}") from None

    def pair_of(self, cell: FaceKey) -> Pair:
        try:
            return self._pairs[frozenset(cell)]
        except KeyError:
            raise UnknownFaceError(f"{sorted(cell)} is not a cell of the subdivision") from None

    def center(self, face: FaceKey) -> FaceKey:
        """The vertex (F, F)"""
        return self.cell(face, face)

    def dimension(self, pair: Pair) -> int:
        face, cube = pair
        return self.base.spec(cube).dim - self.base.spec(face).dim

    @cached_property
    def _top_set(self) -> frozenset:
        return frozenset(self.base.top_cubes())

    def dual_cells(self, face: FaceKey) -> List[Pair]:
        """The pieces F^v_B = (F, B) of the dual block of F, one per top cube B"""
        return [(frozenset(face), top) for top in self.base.containing_tops(face)]

    def is_internal(self, pair: Pair) -> bool:
        """True when the cell lies in the interior of a top cube"""
        return pair[1] in self._top_set

    def boundary_pairs(self, pair: Pair) -> List[Tuple[Pair, int, bool]]:
        """
        Boundary of a cell as (pair, sign, internal) triples

        Internal faces keep G and enlarge E; external faces keep E and
        shrink G.
        """
        face, cube = pair
        spec = self.base.spec(cube)
        interval = spec.interval_of(face)
        result = []
        for local in local_boundary(spec.dim, interval):
            cube_spec = spec.face(local.cube_interval)
            face_key = spec.face(local.face_interval).key
            result.append(((face_key, cube_spec.key), local.sign, local.internal))
        return result


@lru_cache(maxsize=16)
def subdivide(base: CubicalComplex) -> SubdividedComplex:
    return SubdividedComplex(base)

