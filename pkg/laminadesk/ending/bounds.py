"""Length bounds on the classes of a loop partition, evaluated on one instance.

Every inequality is recorded with both sides. For the lower bounds the
sides are swapped so that a positive slack always means PASS.
"""

import logging
from fractions import Fraction

from laminadesk.ending.models import IterationState, Letter, LoopArc, LoopPartition
from laminadesk.reports.models import Report

logger = logging.getLogger(__name__)

AREA_NOTE = (
    "annular diagrams are reduction traces, so K is fitted to upper bounds on area; "
    "a PASS under them is stronger than the bound requires"
)


def _count_runs(seq: list[Letter], target: list[Letter], cyclic: bool) -> int:
    n, k = len(seq), len(target)
    if k == 0 or k > n:
        return 0
    hay = seq + seq[: k - 1] if cyclic else seq
    count, i, stop = 0, 0, n if cyclic else n - k + 1
    while i < stop:
        if hay[i : i + k] == target:
            count += 1
            i += k
        else:
            i += 1
    return count


def loop_letters(state: IterationState, loop: list[LoopArc]) -> list[list[Letter]]:
    """Letters of the current map read by each on-track piece of the loop."""
    m = state.map
    out = []
    for piece in loop:
        if piece.on_track:
            run = []
            for b, d in piece.steps:
                n = m.length(b)
                run += m.letters(b, 0, n) if d > 0 else m.letters(b, n, 0)
            out.append(run)
    return out


def next_length_bound(state: IterationState, after: IterationState, loop: list[LoopArc]) -> int | None:
    """Upper bound on the loop's length under the next map: straighten every family run it reads.

    None when the family lives on a lengthened track, whose letters the loop
    does not read directly.
    """
    before = sum(len(state.map.path_image(list(p.steps))) for p in loop if p.on_track)
    if not after.family:
        return before
    if after.previous_map is None or after.previous_map.track is not state.map.track:
        return None
    pieces = loop_letters(state, loop)
    cyclic = len(loop) == 1
    saved = 0
    for s in after.family:
        forward = s.letters(state.map)
        backward = [(b, i, -d) for b, i, d in reversed(forward)]
        hits = sum(_count_runs(p, forward, cyclic) + _count_runs(p, backward, cyclic) for p in pieces)
        saved += hits * (s.image_length - s.straightened_length)
    return before - saved


def bounds_report(
    state: IterationState,
    loop: list[LoopArc],
    partition: LoopPartition,
    after: IterationState | None = None,
    K: float | None = None,
    c1: float | None = None,
    t_list: list[float] | None = None,
    report: Report | None = None,
) -> Report:
    """Evaluate the four class-length bounds and the final ratio inequality for each t.

    Missing constants skip the inequalities that need them, with the reason.
    """
    if report is None:
        report = Report(subcommand="bounds", config={"eps": partition.eps, "t_list": t_list})
    m = state.map
    eps = partition.eps
    sizes = partition.class_lengths
    total = len(partition)
    phi_len = sum(len(m.path_image(list(p.steps))) for p in loop if p.on_track)
    off = [m.metric.geodesic(p.word)[0] for p in loop if not p.on_track]
    crossings = sum(1 for p in loop for b, _ in p.steps if not m.track.is_closed(b))
    volume = m.metric.ball_volume(eps)
    c_n = max((len(w) for w in off), default=0) + 2
    d_n = 2 * partition.span
    threshold = state.threshold_length
    label = f"eps={eps}"
    values: dict = {
        "length": total,
        "phi_length": phi_len,
        "class_lengths": sizes,
        "V_eps": volume,
        "c_n": c_n,
        "d_n": d_n,
        "off_track_arcs": len(off),
        "non_annular_crossings": crossings,
        "L": None if threshold is None else float(threshold),
        "area_note": AREA_NOTE,
    }

    # Shortcut class against the length lost in one step
    if after is None:
        report.skip(f"class1_{label}", "no next step supplied")
    elif volume is None:
        report.skip(f"class1_{label}", f"ball too small to count V_{eps}")
    else:
        nxt = next_length_bound(state, after, loop)
        if nxt is None:
            report.skip(f"class1_{label}", "the step lengthened the track first")
        else:
            rhs = 2 * volume * (phi_len - nxt + eps * crossings)
            values["next_phi_length_bound"] = nxt
            report.add_check(f"class1_{label}", sizes[1] <= rhs, sizes[1], rhs, "l(g1) <= 2V(l_n - l_n+1 + eps * crossings)")

    # Off-track class costs at most c_n per arc
    lower = phi_len - c_n * len(off)
    report.add_check(
        f"class0_{label}", total - sizes[0] >= lower, lower, total - sizes[0],
        "l(g - g0) >= l_n - c_n * #off (sides swapped)",
    )

    # Escapes to class 0
    report.add_check(f"class3_{label}", sizes[3] <= d_n * sizes[0], sizes[3], d_n * sizes[0], "l(g3) <= d_n l(g0)")

    # Long class-2 runs against the area bound
    long_runs = [r for r in partition.runs(2) if threshold is not None and r >= threshold]
    values["long_class2"] = sum(long_runs)
    if K is None or c1 is None or threshold is None:
        missing = [n for n, v in (("K", K), ("c1", c1), ("delta", threshold)) if v is None]
        report.skip(f"long_class2_{label}", f"missing constants: {', '.join(missing)}")
    else:
        decay = 2.0 ** (-eps / 2)
        rhs = 4 * K / c1 * total * decay
        report.add_check(f"long_class2_{label}", sum(long_runs) <= rhs, sum(long_runs), rhs, "l(L) <= (4K/c1) l(g) 2^(-eps/2)")

        ratio = Fraction(sizes[4], phi_len) if phi_len else Fraction(0)
        values["class4_ratio"] = float(ratio)
        for t in t_list or [state.t]:
            floor = t - 8 * K / c1 * decay
            report.add_check(
                f"final_{label}_t={t}", float(ratio) > floor, floor, float(ratio),
                "l(g4)/l_n > t - (8K/c1) 2^(-eps/2) (sides swapped)",
            )

    report.results.setdefault("bounds", {})[label] = values
    logger.info(f"📊 Bounds at {label}: classes {sizes}, {report.failures} failing checks so far")
    return report
