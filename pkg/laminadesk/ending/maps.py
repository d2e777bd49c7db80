"""Lengths of carried laminations and tightening of adapted maps."""

import logging
from fractions import Fraction

from laminadesk.ending.models import AdaptedMap
from laminadesk.errors import PreconditionError
from laminadesk.traintrack.models import Weighting
from laminadesk.traintrack.validation import check_switch

logger = logging.getLogger(__name__)


def lamination_image_length(m: AdaptedMap, weights: Weighting | None = None) -> Fraction:
    """Sum over branches of weight times image length."""
    w = m.track.measure(weights)
    if not check_switch(m.track, w):
        raise PreconditionError("weights violate the switch conditions")
    return sum((w[b] * m.length(b) for b in m.track.branches), Fraction(0))


def tighten(m: AdaptedMap) -> AdaptedMap:
    """Replace every branch image by a minimal edge-path with the same endpoints.

    Closed branches go to minimal loops in their class. Branches whose
    minimality cannot be certified keep the shortened image with
    `tight[b]` unset.
    """
    images, tight = {}, {}
    for b in sorted(m.track.branches):
        if m.track.is_closed(b):
            images[b], _, tight[b] = m.metric.minimal_loop(m.images[b])
        else:
            images[b], tight[b] = m.metric.geodesic(m.images[b])
    shortened = [b for b in images if len(images[b]) < m.length(b)]
    if shortened:
        logger.debug(f"tightened {shortened}")
    uncertified = [b for b, ok in tight.items() if not ok]
    if uncertified:
        logger.debug(f"minimality uncertified for {uncertified}")
    return m.replace(images=images, tight=tight)
