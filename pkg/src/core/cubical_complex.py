"""
Cubical Complex - Ordered cubical complexes and their face lattice

A cube is a list of 2^n distinct vertex names; position k holds the
vertex whose coordinate subset has binary encoding k (bit i stands for
coordinate i + 1). Cubes are determined by their vertex sets, so the
complex is keyed by frozensets of names.
"""

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

import networkx as nx

from core.errors import (
    DuplicateVertexSetError,
    IntervalClosureError,
    MalformedSpecError,
    PosetCycleError,
    UnknownFaceError,
)

logger = logging.getLogger(__name__)

VertexId = str
FaceKey = FrozenSet[VertexId]
Interval = Tuple[int, int]


# Product vertices are "(x,y)" and subdivision centers "[a+b+...]"; plain
# names may not contain these characters, so built names never collide.
RESERVED_CHARACTERS = "()[],+"
COMPOUND_FORMS = {"(": (",", ")"), "[": ("+", "]")}


def _name_end(name: str, start: int) -> int:
    """Index just past the vertex name that starts at start, -1 if there is none"""
    if start >= len(name):
        return -1
    opening = name[start]
    if opening in COMPOUND_FORMS:
        separator, closing = COMPOUND_FORMS[opening]
        parts = 0
        position = start + 1
        while True:
            position = _name_end(name, position)
            if position < 0 or position >= len(name):
                return -1
            parts += 1
            if name[position] == closing:
                break
            if name[position] != separator:
                return -1
            position += 1
        if parts < 2 or (opening == "(" and parts != 2):
            return -1
        return position + 1
    position = start
    while position < len(name) and name[position] not in RESERVED_CHARACTERS:
        position += 1
    return position if position > start else -1


def is_well_formed_name(name: str) -> bool:
    """A plain name, or a product or center name built from well-formed names"""
    return _name_end(name, 0) == len(name)


def expand_bits(subset: int, positions: Sequence[int]) -> int:
    """Spread the bits of subset onto the given coordinate positions"""
    result = 0
    for index, position in enumerate(positions):
        if subset >> index & 1:
            result |= 1 << position
    return result


def bit_positions(mask: int) -> List[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


@lru_cache(maxsize=None)
def cube_intervals(n: int) -> Tuple[Interval, ...]:
    """All 3^n intervals [u, w] of the subset lattice of n coordinates"""
    full = (1 << n) - 1
    intervals = []
    for w in range(full + 1):
        u = w
        while True:
            intervals.append((u, w))
            if u == 0:
                break
            u = (u - 1) & w
    return tuple(sorted(intervals, key=lambda uw: (bin(uw[1] & ~uw[0]).count("1"), uw[1], uw[0])))


@dataclass(frozen=True)
class CubeSpec:
    """Vertices of one cube listed by coordinate subset"""
    vertices: Tuple[VertexId, ...]

    def __post_init__(self):
        vertices = tuple(self.vertices)
        object.__setattr__(self, "vertices", vertices)
        count = len(vertices)
        if count == 0 or count & (count - 1):
            raise MalformedSpecError(f"Cube {list(vertices)} has {count} vertices, not a power of two")
        if len(set(vertices)) != count:
            raise MalformedSpecError(f"Cube {list(vertices)} repeats a vertex")
        for name in vertices:
            if not isinstance(name, str) or any(ch.isspace() for ch in name) or not is_well_formed_name(name):
                raise MalformedSpecError(f"Invalid vertex name {name!r} in cube {list(vertices)}")

    @property
    def dim(self) -> int:
        return len(self.vertices).bit_length() - 1

    @property
    def key(self) -> FaceKey:
        return frozenset(self.vertices)

    @property
    def full(self) -> int:
        return (1 << self.dim) - 1

    def position(self, name: VertexId) -> int:
        return self.vertices.index(name)

    def face(self, interval: Interval) -> "CubeSpec":
        """
        Face of the cube spanned by the subsets between u and w

        Args:
            interval: (u, w) with u a subset of w, as bit masks

        Returns:
            CubeSpec of dimension |w - u| with coordinates in ascending order
        """
        u, w = interval
        if u & ~w:
            raise ValueError(f"Interval ({u}, {w}) is empty")
        free = bit_positions(w & ~u)
        return CubeSpec(tuple(self.vertices[u | expand_bits(s, free)] for s in range(1 << len(free))))

    def interval_of(self, face: Iterable[VertexId]) -> Interval:
        """
        Interval [u, w] whose face has the given vertex set

        Raises:
            UnknownFaceError: If the vertices do not form a face of this cube
        """
        key = frozenset(face)
        try:
            positions = [self.position(name) for name in key]
        except ValueError:
            raise UnknownFaceError(f"{sorted(key)} is not a face of {list(self.vertices)}") from None
        u = w = positions[0]
        for p in positions[1:]:
            u &= p
            w |= p
        if self.face((u, w)).key != key:
            raise UnknownFaceError(f"{sorted(key)} is not a face of {list(self.vertices)}")
        return u, w

    def partition(self, interval: Interval) -> Tuple[List[int], List[int], List[int]]:
        """Coordinates (bound to 0, free, bound to 1) of a face, 1-based"""
        u, w = interval
        zero = [c + 1 for c in range(self.dim) if not w >> c & 1]
        free = [c + 1 for c in range(self.dim) if (w & ~u) >> c & 1]
        one = [c + 1 for c in range(self.dim) if u >> c & 1]
        return zero, free, one


def sort_key(face: Iterable[VertexId]) -> Tuple[VertexId, ...]:
    """Basis order: lexicographic on sorted vertex names"""
    return tuple(sorted(face))


class CubicalComplex:
    """
    Validated ordered cubical complex

    Instances are immutable; build them through build_and_validate or
    from_cubes.
    """

    def __init__(self, cubes: Dict[FaceKey, CubeSpec], name: str = ""):
        self.cubes = dict(cubes)
        self.name = name
        self.vertices = frozenset(v for key in self.cubes for v in key if len(key) == 1)
        self._identity = frozenset((key, spec.vertices) for key, spec in self.cubes.items())
        logger.debug(f"Cubical complex {name!r} with {len(self.cubes)} cubes")

    @classmethod
    def from_cubes(cls, specs: Iterable[CubeSpec], name: str = "") -> "CubicalComplex":
        """Build from a face-closed list of cubes and validate it"""
        cubes = {}
        for spec in specs:
            existing = cubes.get(spec.key)
            if existing is not None and existing != spec:
                raise DuplicateVertexSetError(
                    f"Cubes {list(existing.vertices)} and {list(spec.vertices)} share a vertex set"
                )
            cubes[spec.key] = spec
        complex_ = cls(cubes, name)
        complex_.validate()
        return complex_

    def __eq__(self, other) -> bool:
        return isinstance(other, CubicalComplex) and self._identity == other._identity

    def __hash__(self) -> int:
        return hash(self._identity)

    def __repr__(self) -> str:
        return f"CubicalComplex({self.name!r}, counts={self.face_counts()})"

    @cached_property
    def poset(self) -> nx.DiGraph:
        """Transitive closure of the vertex order generated by all cubes"""
        graph = nx.DiGraph()
        graph.add_nodes_from(sorted(self.vertices))
        for spec in self.cubes.values():
            for k in range(len(spec.vertices)):
                for i in range(spec.dim):
                    if not k >> i & 1:
                        graph.add_edge(spec.vertices[k], spec.vertices[k | 1 << i])
        if not nx.is_directed_acyclic_graph(graph):
            cycle = nx.find_cycle(graph)
            raise PosetCycleError(f"Vertex order has a cycle through {[edge[0] for edge in cycle]}")
        return nx.transitive_closure_dag(graph)

    def validate(self):
        """
        Check face closure, the commuting characteristic maps and the poset

        Raises:
            IntervalClosureError: If a face is missing or disagrees with its cube
            PosetCycleError: If the cube orders are inconsistent
        """
        for spec in self.cubes.values():
            for interval in cube_intervals(spec.dim):
                face = spec.face(interval)
                found = self.cubes.get(face.key)
                if found is None:
                    raise IntervalClosureError(
                        f"Face {list(face.vertices)} of cube {list(spec.vertices)} is missing"
                    )
                if found != face:
                    raise IntervalClosureError(
                        f"Face {list(found.vertices)} disagrees with cube {list(spec.vertices)}"
                    )
        self.poset

    @property
    def dim(self) -> int:
        return max((spec.dim for spec in self.cubes.values()), default=-1)

    @cached_property
    def _bases(self) -> Dict[int, List[FaceKey]]:
        bases: Dict[int, List[FaceKey]] = {}
        for key, spec in self.cubes.items():
            bases.setdefault(spec.dim, []).append(key)
        return {k: sorted(keys, key=sort_key) for k, keys in bases.items()}

    def basis(self, k: int) -> List[FaceKey]:
        """Faces of dimension k in basis order"""
        return self._bases.get(k, [])

    @lru_cache(maxsize=None)
    def index(self, k: int) -> Dict[FaceKey, int]:
        return {key: i for i, key in enumerate(self.basis(k))}

    def spec(self, face: Iterable[VertexId]) -> CubeSpec:
        key = frozenset(face)
        try:
            return self.cubes[key]
        except KeyError:
            raise UnknownFaceError(f"{sorted(key)} is not a face of {self.name or 'the complex'}") from None

    def __contains__(self, face) -> bool:
        return frozenset(face) in self.cubes

    def faces(self, face: Iterable[VertexId]) -> List[Tuple[FaceKey, Interval]]:
        """
        All faces of a cube with their defining intervals

        Raises:
            UnknownFaceError: If face is not a cube of the complex
        """
        spec = self.spec(face)
        return [(spec.face(interval).key, interval) for interval in cube_intervals(spec.dim)]

    def face_counts(self) -> List[int]:
        return [len(self.basis(k)) for k in range(self.dim + 1)]

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * count for k, count in enumerate(self.face_counts()))

    @cached_property
    def _cofaces(self) -> Dict[FaceKey, List[FaceKey]]:
        """Cubes one dimension up that contain each face"""
        cofaces: Dict[FaceKey, List[FaceKey]] = {key: [] for key in self.cubes}
        for key, spec in self.cubes.items():
            full = spec.full
            for i in range(spec.dim):
                bit = 1 << i
                for interval in ((0, full & ~bit), (bit, full)):
                    cofaces[spec.face(interval).key].append(key)
        return {key: sorted(found, key=sort_key) for key, found in cofaces.items()}

    def cofaces(self, face: Iterable[VertexId]) -> List[FaceKey]:
        return self._cofaces[frozenset(face)]

    @cached_property
    def _tops(self) -> List[FaceKey]:
        tops = [key for key in self.cubes if not self._cofaces[key]]
        return sorted(tops, key=lambda key: (-len(key), sort_key(key)))

    def top_cubes(self) -> List[FaceKey]:
        """Maximal cubes, largest first, then in basis order"""
        return list(self._tops)

    def containing_tops(self, face: Iterable[VertexId]) -> List[FaceKey]:
        """Maximal cubes having face as a face, in basis order"""
        key = frozenset(face)
        found = []
        for top in self._tops:
            if key <= top:
                try:
                    self.cubes[top].interval_of(key)
                except UnknownFaceError:
                    continue
                found.append(top)
        return sorted(found, key=sort_key)

    def is_pure(self) -> bool:
        return all(len(top) == 1 << self.dim for top in self.top_cubes())

    def connected_components(self) -> List[List[VertexId]]:
        """Vertex sets of the components of the 1-skeleton, each sorted"""
        graph = nx.Graph()
        graph.add_nodes_from(self.vertices)
        graph.add_edges_from(tuple(key) for key in self.basis(1))
        components = [sorted(component) for component in nx.connected_components(graph)]
        return sorted(components)

    def top_specs(self) -> List[CubeSpec]:
        return [self.cubes[key] for key in self.top_cubes()]


def build_and_validate(specs: Iterable[Sequence[VertexId]], name: str = "") -> CubicalComplex:
    """
    Generate the face closure of a list of cubes and validate it

    Args:
        specs: Vertex lists, or CubeSpec values
        name: Optional label carried by the complex

    Returns:
        Validated CubicalComplex

    Raises:
        MalformedSpecError: If a vertex list is not a cube
        DuplicateVertexSetError: If two listed cubes, or two distinct faces,
            share a vertex set
        PosetCycleError: If the cube orders are inconsistent
    """
    closure: Dict[FaceKey, CubeSpec] = {}
    listed: Dict[FaceKey, CubeSpec] = {}
    for raw in specs:
        spec = raw if isinstance(raw, CubeSpec) else CubeSpec(tuple(raw))
        if spec.key in listed:
            raise DuplicateVertexSetError(
                f"Cubes {list(listed[spec.key].vertices)} and {list(spec.vertices)} share a vertex set"
            )
        listed[spec.key] = spec
        for interval in cube_intervals(spec.dim):
            face = spec.face(interval)
            existing = closure.get(face.key)
            if existing is None:
                closure[face.key] = face
            elif existing != face:
                raise DuplicateVertexSetError(
                    f"Cubes {list(existing.vertices)} and {list(face.vertices)} share a vertex set"
                )
    complex_ = CubicalComplex(closure, name)
    complex_.validate()
    logger.info(f"Validated complex {name!r}: face counts {complex_.face_counts()}")
    return complex_


def product_name(x: VertexId, y: VertexId) -> VertexId:
    return f"({x},{y})"


def product_spec(first: CubeSpec, second: CubeSpec) -> CubeSpec:
    """Product cube with the first factor's coordinates in the low bits"""
    n = first.dim
    mask = first.full
    return CubeSpec(tuple(
        product_name(first.vertices[k & mask], second.vertices[k >> n])
        for k in range(len(first.vertices) * len(second.vertices))
    ))


@lru_cache(maxsize=32)
def product(first: CubicalComplex, second: CubicalComplex) -> CubicalComplex:
    """
    Product cubulation with vertices named (x,y)

    Every pair of cubes gives a cube; first-factor coordinates come first.
    """
    name = f"{first.name}x{second.name}" if first.name and second.name else ""
    specs = [product_spec(a, b) for a in first.cubes.values() for b in second.cubes.values()]
    return CubicalComplex.from_cubes(specs, name)
