"""Length, normalisation and the intersection pairing of currents."""

import logging
import math
from fractions import Fraction
from itertools import product

from laminadesk.config import Config
from laminadesk.currents.models import Current
from laminadesk.errors import PreconditionError, ZeroCurrentError
from laminadesk.surface.geometry import model_length
from laminadesk.surface.intersection import intersection_number

logger = logging.getLogger(__name__)


def length(c: Current) -> float:
    """Total model length: sum of weight times length of each component."""
    return c.scale * sum(float(w) * model_length(c.surface, curve) for curve, w in c.components)


def normalize(c: Current) -> Current:
    if c.is_zero or c.scale == 0:
        raise ZeroCurrentError("cannot normalize the zero current")
    raw = sum(float(w) * model_length(c.surface, curve) for curve, w in c.components)
    logger.debug(f"normalize: total length {raw:.6f} over {len(c.components)} component(s)")
    return Current(c.surface, c.multicurve, 1.0 / raw, unit=True)


def _integer_pairing(c1: Current, c2: Current) -> Fraction:
    total = Fraction(0)
    for (u, wu), (v, wv) in product(c1.components, c2.components):
        total += wu * wv * intersection_number(c1.surface, u, v)
    return total


def pair(c1: Current, c2: Current) -> float:
    """Bilinear extension of intersection numbers; int(c, c) counts each double point twice."""
    if c1.surface.presentation != c2.surface.presentation:
        raise PreconditionError("currents live on different surfaces")
    return c1.scale * c2.scale * float(_integer_pairing(c1, c2))


def is_lamination(c: Current) -> bool:
    """Zero self-pairing: every component simple and the components disjoint."""
    return _integer_pairing(c, c) == 0


def is_unit(c: Current) -> bool:
    return math.isclose(length(c), 1.0, abs_tol=Config.LENGTH_TOLERANCE)
