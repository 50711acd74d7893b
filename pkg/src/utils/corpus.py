"""
Corpus - Named built-in complexes

Names: point, interval, square, path-K, circle-K, cube-N, cube-boundary-N,
torus-P, torus-PxQ and klein, the last read from resources/klein.json.
"""

import logging
import re
from pathlib import Path
from typing import Callable, Dict, List

from core.cubical_complex import CubicalComplex
from core.errors import ComplexValidationError, UnknownCorpusEntryError
from core.generators import circle, cube_boundary, path, point, standard_cube, torus_grid
from utils.documents import load_complex

logger = logging.getLogger(__name__)

RESOURCE_DIR = Path(__file__).parent.parent / "resources"


def _load_klein() -> CubicalComplex:
    """Shipped Klein bottle, checked to be a closed surface of Euler characteristic 0"""
    klein = load_complex((RESOURCE_DIR / "klein.json").read_bytes())
    chi = klein.euler_characteristic()
    if klein.dim != 2 or chi != 0:
        raise ComplexValidationError(
            f"Resource klein.json is not a Klein bottle: dimension {klein.dim}, Euler characteristic {chi}"
        )
    return klein


_FIXED: Dict[str, Callable[[], CubicalComplex]] = {
    "point": point,
    "interval": lambda: path(1),
    "square": lambda: standard_cube(2),
    "klein": _load_klein,
}

_PATTERNS = [
    (re.compile(r"path-(\d+)"), lambda m: path(int(m[1]))),
    (re.compile(r"circle-(\d+)"), lambda m: circle(int(m[1]))),
    (re.compile(r"cube-(\d+)"), lambda m: standard_cube(int(m[1]))),
    (re.compile(r"cube-boundary-(\d+)"), lambda m: cube_boundary(int(m[1]))),
    (re.compile(r"torus-(\d+)"), lambda m: torus_grid(int(m[1]), int(m[1]))),
    (re.compile(r"torus-(\d+)x(\d+)"), lambda m: torus_grid(int(m[1]), int(m[2]))),
]


def corpus_names() -> List[str]:
    """Representative names, for help texts"""
    return list(_FIXED) + ["path-K", "circle-K", "cube-N", "cube-boundary-N", "torus-P", "torus-PxQ"]


def corpus_load(name: str) -> CubicalComplex:
    """
    Load a built-in complex by name

    Raises:
        UnknownCorpusEntryError: If the name matches no entry
        ParamTooSmallError: If a size parameter is below its minimum
    """
    if name in _FIXED:
        logger.debug(f"Loading corpus entry {name}")
        return _FIXED[name]()
    for pattern, build in _PATTERNS:
        match = pattern.fullmatch(name)
        if match:
            logger.debug(f"Loading corpus entry {name}")
            return build(match)
    raise UnknownCorpusEntryError(f"Unknown corpus entry {name!r}; known: {', '.join(corpus_names())}")
