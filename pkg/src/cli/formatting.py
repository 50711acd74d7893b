"""
Formatting - Text tables for command output

Every function returns the full text of a command result, ending in a
newline, so identical inputs give identical bytes.
"""

from typing import List, Sequence, Tuple

from core.chain_algebra import HomologyResult
from core.cubical_complex import CubicalComplex, FaceKey, sort_key
from core.products_duality import DualChain
from utils.documents import chain_json, chain_to_document


def face_text(face: FaceKey) -> str:
    return "[" + " ".join(sort_key(face)) + "]"


def signed(value: int) -> str:
    return f"+{value}" if value > 0 else str(value)


def complex_summary(complex_: CubicalComplex) -> str:
    counts = complex_.face_counts()
    lines = [
        f"valid: {complex_.name or '(unnamed)'}",
        f"dimension: {complex_.dim}",
        f"face counts: {' '.join(str(c) for c in counts)}",
        f"top cubes: {len(complex_.top_cubes())}",
        f"euler characteristic: {complex_.euler_characteristic()}",
    ]
    return "\n".join(lines) + "\n"


def homology_lines(results: Sequence[HomologyResult], generators: bool = False) -> str:
    """Lines "H_k = Z^b ⊕ Z/t" (or "H^k = ..."), generators below each group"""
    lines: List[str] = []
    for result in results:
        mark = "^" if result.cohomological else "_"
        lines.append(f"H{mark}{result.degree} = {result.label}")
        if generators and result.group is not None:
            for element in result.free_generators:
                lines.append(f"  free {chain_json(chain_to_document(element))}")
            for element, order in zip(result.torsion_generators, sorted(result.torsion)):
                lines.append(f"  order {order} {chain_json(chain_to_document(element))}")
    return "\n".join(lines) + "\n"


def euler_lines(complex_: CubicalComplex, betti: Sequence[int]) -> str:
    from_betti = sum((-1) ** k * b for k, b in enumerate(betti))
    lines = [
        f"face counts: {' '.join(str(c) for c in complex_.face_counts())}",
        f"betti numbers: {' '.join(str(b) for b in betti)}",
        f"chi = {complex_.euler_characteristic()} (faces), {from_betti} (betti)",
    ]
    return "\n".join(lines) + "\n"


def dual_lines(entries: Sequence[Tuple[FaceKey, DualChain]]) -> str:
    """One line per face F: the signed cells (F, B) of psi(F^*)"""
    lines = []
    for face, dual in entries:
        cells = " ".join(f"{signed(value)} {face_text(cube)}" for (_, cube), value in dual.pair_terms())
        lines.append(f"{face_text(face)} -> {cells}" if cells else f"{face_text(face)} -> 0")
    return "\n".join(lines) + "\n" if lines else "no faces\n"
