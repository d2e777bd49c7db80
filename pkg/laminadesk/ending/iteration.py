"""The straightening iteration: lengthen, find shortcuts, straighten a maximal family, tighten."""

import logging
from fractions import Fraction

from laminadesk.config import Config
from laminadesk.ending.family import maximal_shortcut_family
from laminadesk.ending.maps import lamination_image_length, tighten
from laminadesk.ending.models import AdaptedMap, IterationState
from laminadesk.ending.shortcuts import find_shortcuts
from laminadesk.errors import LaminadeskError, StepError
from laminadesk.traintrack.lengthening import lengthen_branches

logger = logging.getLogger(__name__)


def start(m: AdaptedMap, eps: int, t: float = 0.5, delta=None) -> IterationState:
    """Step 0. The map is taken as given; tightening happens inside each step."""
    return IterationState(
        n=0,
        map=m,
        eps=eps,
        t=t,
        delta=None if delta is None else Fraction(delta).limit_denominator(1000),
        history=[lamination_image_length(m)],
    )


def _lengthened(m: AdaptedMap, bound: int) -> AdaptedMap:
    target = Fraction(2 * bound)
    # Annuli are never split by lengthening
    lengths = {b: (v if b in m.open_branches else max(v, target + 1)) for b, v in m.lengths.items()}
    result = lengthen_branches(m.track, target, lengths=lengths)
    logger.info(f"📏 Lengthened {m.track.name or 'track'} past 2A = {target} in {len(result.moves)} moves")
    return m.pulled_back(result.track, result.pullback())


def _advance(state: IterationState) -> IterationState:
    m = state.map
    search = find_shortcuts(m, state.eps)
    if not search.shortcuts:
        logger.info(f"✅ Step {state.n + 1}: no {state.eps}-shortcuts, fixpoint")
        return IterationState(
            n=state.n + 1,
            map=m,
            eps=state.eps,
            t=state.t,
            delta=state.delta,
            history=[*state.history, state.length],
            shortcut_counts=[*state.shortcut_counts, 0],
            previous_map=m,
        )

    # Longer images can carry longer shortcuts, so re-measure after each lengthening
    for _ in range(Config.MAX_LENGTHEN_PASSES):
        if min((m.length(b) for b in m.open_branches), default=2 * search.max_image_length + 1) > 2 * search.max_image_length:
            break
        m = _lengthened(m, search.max_image_length)
        search = find_shortcuts(m, state.eps)

    family = maximal_shortcut_family(m, search)
    new_map = tighten(family.map)
    length = lamination_image_length(new_map)
    logger.info(
        f"🔧 Step {state.n + 1}: {len(search)} shortcuts, family of {len(family.family)}, "
        f"length {state.length} -> {length}"
    )
    return IterationState(
        n=state.n + 1,
        map=new_map,
        eps=state.eps,
        t=state.t,
        delta=state.delta,
        history=[*state.history, length],
        shortcut_counts=[*state.shortcut_counts, len(search)],
        family=family.family,
        previous_map=m,
    )


def straighten_step(state: IterationState) -> IterationState:
    """One step of the iteration; `state` is left untouched.

    Any failure, including a length increase, raises StepError carrying
    the state the step started from.
    """
    try:
        nxt = _advance(state)
    except LaminadeskError as e:
        logger.error(f"❌ Step {state.n + 1} failed: {e}")
        raise StepError(f"straightening step {state.n + 1} failed: {e}", state=state, cause=e) from e
    if nxt.length > state.length:
        raise StepError(
            f"length went up at step {nxt.n}: {state.length} -> {nxt.length}", state=state
        )
    return nxt


def run_until_stable(
    state: IterationState,
    max_steps: int = Config.MAX_STRAIGHTEN_STEPS,
    stable_steps: int = Config.STABLE_STEPS,
) -> list[IterationState]:
    """Iterate until the length is unchanged over `stable_steps` recorded steps; returns every state."""
    states = [state]
    while not state.stable(stable_steps):
        if state.n >= max_steps:
            logger.warning(f"⚠️ No stable length after {max_steps} steps (last {state.length})")
            break
        state = straighten_step(state)
        states.append(state)
    return states
