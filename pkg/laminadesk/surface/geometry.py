"""Hyperbolic model of a closed surface group.

The fundamental domain is the regular 4g-gon with interior angle 2pi/4g,
centred at i in the upper half-plane. Side k faces direction
phi_k = 2 pi k / 4g as seen from the centre.
"""

import logging
import math
from functools import lru_cache

import numpy as np

from laminadesk.config import Config
from laminadesk.errors import PreconditionError, SurfaceModelError
from laminadesk.presentation import words
from laminadesk.presentation.models import Presentation
from laminadesk.surface.models import CurveClass, SurfaceData

logger = logging.getLogger(__name__)


def rotation(theta: float) -> np.ndarray:
    """Rotation about i by angle theta."""
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, s], [-s, c]])


def translation(length: float) -> np.ndarray:
    """Translation along the imaginary axis by hyperbolic distance `length`."""
    return np.array([[math.exp(length / 2), 0.0], [0.0, math.exp(-length / 2)]])


def side_pairing(phi_from: float, phi_to: float, length: float) -> np.ndarray:
    """Isometry taking the side at phi_from onto the side at phi_to."""
    return rotation(phi_to) @ translation(length) @ rotation(math.pi) @ rotation(-phi_from)


def is_plus_minus_identity(m: np.ndarray, tol: float = Config.MATRIX_TOLERANCE) -> bool:
    eye = np.eye(2)
    return bool(np.allclose(m, eye, atol=tol) or np.allclose(m, -eye, atol=tol))


def _evaluate(matrices: dict[str, np.ndarray], word: str) -> np.ndarray:
    m = np.eye(2)
    for ch in word:
        m = m @ matrices[ch]
    return m


def vertex_cycle_relation(reading: str) -> str:
    """Relation satisfied by the side pairings of a polygon labelled by `reading`.

    Side k runs counterclockwise from vertex k to vertex k+1 and carries
    reading[k]. The pairing out of side j is named by the swapped label of
    side j; it sends the start of side j to the end of its partner, so the
    walk moves from side j to the side after its partner. The product of
    the pairings met, last one leftmost, is the identity when the polygon
    has a single vertex class.
    """
    n = len(reading)
    position = {ch: i for i, ch in enumerate(reading)}
    met: list[str] = []
    side = 0
    while True:
        label = reading[side]
        met.append(label.swapcase())
        side = (position[label.swapcase()] + 1) % n
        if side == 0:
            break
    if len(met) != n:
        raise SurfaceModelError(f"polygon {reading} has more than one vertex class")
    return "".join(reversed(met))


def _renaming(relation: str, relator: str) -> tuple[dict[str, str], str] | None:
    """Signed renaming carrying a rotation of the relation or its inverse onto the relator."""
    n = len(relator)
    for label, candidate in (("direct", relation), ("inverted", words.inverse(relation))):
        for r in range(n):
            rotated = candidate[r:] + candidate[:r]
            mapping: dict[str, str] = {}
            for src, dst in zip(rotated, relator):
                for s, d in ((src, dst), (src.swapcase(), dst.swapcase())):
                    if mapping.setdefault(s, d) != d:
                        break
                else:
                    continue
                break
            else:
                if len(set(mapping.values())) == len(mapping):
                    return mapping, f"{label} vertex cycle, rotation {r}"
    return None


@lru_cache(maxsize=8)
def build_surface(presentation: Presentation) -> SurfaceData:
    """Fit the polygon model to a standard one-relator surface presentation.

    Sides are labelled by the relator. Each generator is the side pairing
    that the renamed vertex-cycle relation assigns to it, so every letter
    carries the polygon across exactly one of its sides.
    """
    genus = presentation.genus
    if genus is None or genus < 2:
        raise PreconditionError("surface model needs the standard relator of a genus >= 2 surface")
    n = 4 * genus
    relator = presentation.relators[0]
    length = 2 * math.acosh(1 / math.tan(math.pi / n))
    angles = [2 * math.pi * k / n for k in range(n)]
    position = {ch: k for k, ch in enumerate(relator)}

    pairings: dict[str, np.ndarray] = {}
    for ch, k in position.items():
        if ch.islower():
            mat = side_pairing(angles[position[ch.upper()]], angles[k], length)
            pairings[ch] = mat
            pairings[ch.upper()] = np.linalg.inv(mat)

    found = _renaming(vertex_cycle_relation(relator), relator)
    if found is None:
        raise SurfaceModelError(f"vertex-cycle relation of {relator} is not a renaming of it")
    mapping, convention = found
    matrices = {mapping[ch]: mat for ch, mat in pairings.items()}
    # pairing ch carries P across the side labelled ch
    sides = {mapping[ch]: position[ch] for ch in pairings}
    pairing = {position[ch]: position[ch.swapcase()] for ch in pairings}

    if not is_plus_minus_identity(_evaluate(matrices, relator)):
        raise SurfaceModelError("relator does not evaluate to +-I in the polygon model")
    for ch, mat in matrices.items():
        if abs(np.linalg.det(mat) - 1) > Config.MATRIX_TOLERANCE:
            raise SurfaceModelError(f"generator {ch} is not unimodular")
    logger.info(f"✅ Surface model for genus {genus}: {convention}, tile spacing {length:.4f}")
    return SurfaceData(
        genus=genus,
        presentation=presentation,
        matrices=matrices,
        side_angles=angles,
        sides=sides,
        pairing=pairing,
        center_distance=length,
        convention=convention,
        vertex_order=vertex_cyclic_order(relator),
    )


def vertex_cyclic_order(relator: str) -> list[str]:
    """Cyclic order of half-edges at the single vertex of the polygon.

    A half-edge is named by the letter leaving the vertex along it. The
    corner after side x_j joins the incoming end of x_j (half-edge x_j^-1)
    to x_{j+1}; for abABcdCD this reads a, B, A, b, c, D, C, d.
    """
    n = len(relator)
    position = {ch: i for i, ch in enumerate(relator)}
    order = [relator[0]]
    for _ in range(n - 1):
        j = position[order[-1].swapcase()]
        order.append(relator[(j + 1) % n])
    return order


def word_matrix(surface: SurfaceData, word: str) -> np.ndarray:
    return _evaluate(surface.matrices, word)


def trace_of(surface: SurfaceData, word: str) -> float:
    return float(np.trace(word_matrix(surface, word)))


def model_length(surface: SurfaceData, curve: CurveClass | str) -> float:
    """Translation length 2 arccosh(|tr|/2) of a hyperbolic class."""
    letters = curve.letters if isinstance(curve, CurveClass) else words.cyclic_reduce(curve)
    if not letters:
        raise SurfaceModelError("the trivial class has no geodesic")
    tr = abs(trace_of(surface, letters))
    if tr <= 2 + Config.MATRIX_TOLERANCE:
        raise SurfaceModelError(f"class {letters} has |trace| {tr:.6f} <= 2 (not hyperbolic)")
    return 2 * math.acosh(tr / 2)


def fingerprint(matrix: np.ndarray, step: float = Config.FINGERPRINT_STEP) -> tuple[int, int]:
    """Grid cell of the image of i, insensitive to the sign of the matrix.

    For g = [[a, b], [c, d]], g(i) = (ac + bd + i) / (c^2 + d^2).
    """
    a, b = matrix[0]
    c, d = matrix[1]
    return (round((a * c + b * d) / step), round(math.log(c * c + d * d) / step))
