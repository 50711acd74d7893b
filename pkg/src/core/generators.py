"""
Generators - Built-in cubical complexes

Points, paths, circles, tori, cubes and cube boundaries, plus seeded
random subcomplexes of grids for property testing. Wraparound cubes are
listed with their poset-minimal vertex first so the vertex order stays
acyclic.
"""

import logging
from typing import List

import numpy as np

from core.cubical_complex import (
    CubeSpec,
    CubicalComplex,
    build_and_validate,
    product,
    product_spec,
)
from core.errors import ParamTooSmallError

logger = logging.getLogger(__name__)


def _require(value: int, minimum: int, label: str):
    if value < minimum:
        raise ParamTooSmallError(f"{label} must be at least {minimum}, got {value}")


def _names(prefix: str, count: int) -> List[str]:
    width = len(str(max(count - 1, 0)))
    return [f"{prefix}{i:0{width}d}" for i in range(count)]


def point() -> CubicalComplex:
    return build_and_validate([["v"]], name="point")


def path(k: int) -> CubicalComplex:
    """Subdivided interval with k edges"""
    _require(k, 1, "path length")
    names = _names("p", k + 1)
    return build_and_validate([[names[i], names[i + 1]] for i in range(k)], name=f"path-{k}")


def circle_specs(k: int) -> List[CubeSpec]:
    """Edges of a k-gon; the seam edge runs from v0 to the last vertex"""
    names = _names("v", k)
    edges = [CubeSpec((names[i], names[i + 1])) for i in range(k - 1)]
    edges.append(CubeSpec((names[0], names[k - 1])))
    return edges


def circle(k: int) -> CubicalComplex:
    _require(k, 3, "circle size")
    return build_and_validate(circle_specs(k), name=f"circle-{k}")


def torus_grid_specs(p: int, q: int) -> List[CubeSpec]:
    """Raw p x q wraparound squares, without size checks"""
    return [product_spec(a, b) for a in circle_specs(p) for b in circle_specs(q)]


def torus_grid(p: int, q: int) -> CubicalComplex:
    """
    Torus cubulated by a p x q grid of squares

    Raises:
        ParamTooSmallError: If p or q is below 3
    """
    _require(p, 3, "torus width")
    _require(q, 3, "torus height")
    return build_and_validate(torus_grid_specs(p, q), name=f"torus-{p}x{q}")


def _cube_vertices(n: int) -> List[str]:
    return ["c" + "".join(str(k >> i & 1) for i in range(n)) for k in range(1 << n)]


def standard_cube(n: int) -> CubicalComplex:
    """I^n with all its faces; vertices are named by coordinates"""
    _require(n, 0, "cube dimension")
    return build_and_validate([_cube_vertices(n)], name=f"cube-{n}")


def cube_boundary(n: int) -> CubicalComplex:
    """The 2n facets of I^n, an (n-1)-sphere"""
    _require(n, 1, "cube dimension")
    cube = CubeSpec(tuple(_cube_vertices(n)))
    full = cube.full
    facets = []
    for i in range(n):
        bit = 1 << i
        facets.append(cube.face((0, full & ~bit)))
        facets.append(cube.face((bit, full)))
    return build_and_validate(facets, name=f"cube-boundary-{n}")


def fuzz(seed: int, size: int = 3) -> CubicalComplex:
    """
    Seeded random subcomplex of a grid of paths

    The grid has dimension 1 to 3 and side length size; each top cube is
    kept with probability one half, and at least one is kept.
    """
    _require(size, 1, "grid size")
    rng = np.random.default_rng(seed)
    dimension = int(rng.integers(1, 4))
    grid = path(size)
    for _ in range(dimension - 1):
        grid = product(grid, path(size))
    tops = grid.top_specs()
    keep = rng.random(len(tops)) < 0.5
    chosen = [spec for spec, flag in zip(tops, keep) if flag] or [tops[int(rng.integers(len(tops)))]]
    logger.debug(f"Fuzzed complex seed={seed}: {len(chosen)} of {len(tops)} {dimension}-cubes")
    return build_and_validate(chosen, name=f"fuzz-{seed}")

