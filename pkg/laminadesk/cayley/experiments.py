"""Experiment harnesses: divergence, neighbourhood, projection and intersection bounds."""

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from tqdm import tqdm

from laminadesk.cayley.models import Ball, QuotientBall
from laminadesk.cayley.quotient import minimal_edge_loop
from laminadesk.errors import CapacityError, NotConjugateError, UncertifiedError
from laminadesk.presentation import words
from laminadesk.presentation.dehn import are_conjugate, conjugacy_minimal
from laminadesk.presentation.fibered import FiberedGroup, apply_power
from laminadesk.presentation.models import FiberedPresentation, Presentation
from laminadesk.rate_limited_logger import RateLimitedLogger
from laminadesk.reports.models import ConstantEntry

logger = logging.getLogger(__name__)
diagnostics = RateLimitedLogger("experiments", logger)


def clamp_delta(delta: float) -> float:
    """Delta used in exponents and bounds; estimates below 1 are raised to 1."""
    if delta < 1:
        diagnostics.warning("delta_clamp", f"delta estimate {delta} clamped to 1")
        return 1.0
    return float(delta)


@dataclass
class ProjectionReport:
    association: list[int]
    hits: list[int]
    max_gap: int
    distance: float
    bound: float
    precondition_ok: bool
    within_bound: bool
    skipped: list[int] = field(default_factory=list)


def _ball_distance(ball: Ball, p: str, q: str) -> int | None:
    return ball.word_length(words.inverse(p) + q)


def coarse_projection(ball: Ball, sigma: list[str], sigma_star: list[str], delta: float) -> ProjectionReport:
    """Nearest-point association from a path to a geodesic and the longest run of geodesic vertices it misses.

    Paths are lists of vertex words. The standing assumption is that the
    path stays more than 2 delta away from the geodesic; when it does not,
    the data is still returned with `precondition_ok` unset.
    """
    association, skipped, nearest = [], [], []
    for i, p in enumerate(sigma):
        best, best_j = None, -1
        for j, q in enumerate(sigma_star):
            d = _ball_distance(ball, p, q)
            if d is not None and (best is None or d < best):
                best, best_j = d, j
        if best is None:
            skipped.append(i)
            diagnostics.uncertified("projection point", p or "e")
            continue
        association.append(best_j)
        nearest.append(best)

    hits = sorted(set(association))
    max_gap = max((b - a - 1 for a, b in zip(hits, hits[1:])), default=0)
    distance = float(min(nearest, default=math.inf))
    precondition_ok = distance > 2 * delta
    if not precondition_ok:
        diagnostics.warning("projection_precondition", f"path within {distance} <= 2 delta of the geodesic")
    bound = 7 * delta
    return ProjectionReport(
        association=association,
        hits=hits,
        max_gap=max_gap,
        distance=distance,
        bound=bound,
        precondition_ok=precondition_ok,
        within_bound=max_gap <= bound,
        skipped=skipped,
    )


def divergence_experiment(
    fibered: FiberedPresentation,
    instances: int,
    delta: float,
    seed: int = 0,
    depths: tuple[int, ...] = (1, 2, 3),
    max_word: int = 4,
) -> tuple[list[dict], ConstantEntry]:
    """Loops of one class pushed D levels away from its minimal level.

    The minimal loop sits at level k*; the same class read at level k* +- D
    is a homotopic loop at distance D. Fits c1 in
    len_sigma >= c1 * 2^(D / delta) * len_min and the exponential base of
    len_sigma / len_min in D.
    """
    group = FiberedGroup(fibered)
    quotient = QuotientBall(radius=max(depths) + 2, fibered=fibered)
    d_eff = clamp_delta(delta)
    rng = np.random.default_rng(seed)
    letters = fibered.fiber.alphabet.letters

    samples = []
    for i in tqdm(range(instances), desc="diverge", disable=instances < 20):
        c = words.random_cyclic_word(rng, letters, int(rng.integers(1, max_word + 1)))
        D = depths[i % len(depths)]
        try:
            loop, certified = minimal_edge_loop(quotient, c)
            if not certified:
                diagnostics.skipped(f"class {c}", "minimal loop not certified")
                continue
            direction = 1 if rng.random() < 0.5 else -1
            level = loop.level + direction * D
            len_sigma = len(conjugacy_minimal(fibered.fiber, group.level_word(c, level)).word)
        except CapacityError as e:
            diagnostics.skipped(f"class {c}", str(e))
            continue
        samples.append({"instance": i, "class": c, "D": D, "level": level, "len_sigma": len_sigma, "len_min": len(loop)})

    scale = [2 ** (s["D"] / d_eff) for s in samples]
    ratios = [s["len_sigma"] / s["len_min"] for s in samples]
    c1 = min((r / g for r, g in zip(ratios, scale)), default=0.0)
    rows = []
    for s, r, g in zip(samples, ratios, scale):
        rows.append({**s, "delta_est": float(delta), "residual": r - c1 * g})

    base = None
    ds = [s["D"] for s in samples]
    if len(set(ds)) > 1:
        slope, _ = np.polyfit(ds, np.log(ratios), 1)
        base = float(math.exp(slope))
    by_depth = {
        str(d): float(np.mean([r for r, x in zip(ratios, ds) if x == d]))
        for d in sorted(set(ds))
    }
    entry = ConstantEntry(
        name="c1",
        value=c1,
        inequality="len_sigma >= c1 * 2^(D/delta) * len_min",
        worst_residual=min((row["residual"] for row in rows), default=0.0),
        sample_size=len(rows),
        provenance=f"divergence over {len(rows)} fibered instances, delta {d_eff}",
        extra={"base": base, "mean_ratio_by_depth": by_depth, "delta_used": d_eff},
    )
    return rows, entry


def _power(word: str, j: int) -> str:
    return word * j if j >= 0 else words.inverse(word) * -j


def periodic_line(word: str, shift: str, periods: int) -> list[str]:
    """Vertices of shift . word^j . prefix for |j| <= periods."""
    return [
        words.free_reduce(shift + _power(word, j) + word[:i])
        for j in range(-periods, periods + 1)
        for i in range(len(word))
    ]


def hausdorff_check(
    presentation: Presentation,
    ball: Ball,
    loop1: str,
    loop2: str,
    conjugator: str | None = None,
    segments: int = 1,
    c2: float | None = None,
    periods: int = 2,
) -> int:
    """One-sided Hausdorff distance from the lift of loop1 to the lift of loop2.

    The lift of loop2 is translated by y with y . loop2 . y^-1 = loop1 so
    both lines share the axis of loop1; one period of loop1 suffices.
    """
    if conjugator is None:
        ok, conjugator = are_conjugate(presentation, loop2, loop1)
        if not ok:
            raise NotConjugateError("not conjugate within search radius")
    targets = periodic_line(loop2, conjugator, periods)
    worst = 0
    for i in range(len(loop1)):
        p = loop1[:i]
        lengths = [_ball_distance(ball, p, q) for q in targets]
        lengths = [d for d in lengths if d is not None]
        if not lengths:
            raise UncertifiedError("uncertified: endpoints too near boundary")
        worst = max(worst, min(lengths))
    if c2 is not None and worst > segments * c2:
        diagnostics.warning("nbhd_violation", f"distance {worst} exceeds {segments} * c2 = {segments * c2}")
    return worst


def neighborhood_suite(
    presentation: Presentation,
    ball: Ball,
    classes: int,
    max_length: int,
    delta: float,
    seed: int = 0,
    max_reps: int = 8,
) -> tuple[list[dict], ConstantEntry]:
    """Pairwise distances between minimal representatives of random classes; fits c2."""
    rng = np.random.default_rng(seed)
    letters = presentation.alphabet.letters
    rows = []
    for i in tqdm(range(classes), desc="nbhd", disable=classes < 20):
        c = words.random_cyclic_word(rng, letters, int(rng.integers(1, max_length + 1)))
        result = conjugacy_minimal(presentation, c)
        reps = sorted(result.representatives.items())[:max_reps]
        for r1, x1 in reps:
            for r2, x2 in reps:
                y = words.free_reduce(x1 + words.inverse(x2))
                try:
                    d = hausdorff_check(presentation, ball, r1, r2, conjugator=y)
                except UncertifiedError as e:
                    diagnostics.skipped(f"pair ({r1}, {r2})", str(e))
                    continue
                rows.append({"instance": i, "class": c, "rep1": r1, "rep2": r2, "distance": d})

    c2 = max((r["distance"] for r in rows), default=0)
    entry = ConstantEntry(
        name="c2",
        value=float(c2),
        inequality="d_Haus(sigma*, sigma) <= n * c2 for sigma made of n geodesics",
        worst_residual=float(min((c2 - r["distance"] for r in rows), default=0)),
        sample_size=len(rows),
        radius=ball.radius,
        provenance=f"minimal representatives of {classes} classes up to length {max_length}",
        extra={"bound": 4 * float(delta) + 2},
    )
    return rows, entry


SIMPLE_SEEDS = ("a", "b", "c", "d", "ab", "aB", "cd", "cD", "abAB")


def intersection_bound_suite(
    fibered: FiberedPresentation,
    pairs: int,
    seed: int = 0,
    max_power: int = 2,
) -> tuple[list[dict], ConstantEntry]:
    """int(a1, a2) against C * l(a1) l(a2) 2^-D for drifted simple curves.

    Curves are mu^n of short simple curves, so their minimal loops sit at
    level n; D is the smaller of the two drift distances and l is the
    level-0 loop length.
    """
    from laminadesk.surface import build_surface, intersection_number

    surface = build_surface(fibered.fiber)
    quotient = QuotientBall(radius=max_power + 2, fibered=fibered)
    rng = np.random.default_rng(seed)
    seeds = [s for s in SIMPLE_SEEDS if all(ch.lower() in fibered.fiber.alphabet.names for ch in s)]
    rows = []
    for i in tqdm(range(pairs), desc="intbound", disable=pairs < 20):
        curves = []
        for _ in range(2):
            beta = seeds[int(rng.integers(len(seeds)))]
            n = int(rng.integers(1, max_power + 1)) * (1 if rng.random() < 0.5 else -1)
            alpha = words.cyclic_reduce(apply_power(fibered.monodromy, beta, n))
            loop, _ = minimal_edge_loop(quotient, alpha)
            length = len(conjugacy_minimal(fibered.fiber, alpha).word)
            curves.append((alpha, loop.level, length))
        (a1, k1, l1), (a2, k2, l2) = curves
        D = min(abs(k1), abs(k2))
        if D < 1:
            diagnostics.skipped(f"pair {i}", "drift D < 1")
            continue
        rows.append(
            {
                "instance": i,
                "alpha1": a1,
                "alpha2": a2,
                "k1": k1,
                "k2": k2,
                "D": D,
                "len1": l1,
                "len2": l2,
                "int": intersection_number(surface, a1, a2),
            }
        )

    C = max((r["int"] * 2 ** r["D"] / (r["len1"] * r["len2"]) for r in rows), default=0.0)
    for r in rows:
        r["bound"] = C * r["len1"] * r["len2"] * 2 ** -r["D"]
        r["residual"] = r["bound"] - r["int"]
    entry = ConstantEntry(
        name="C",
        value=C,
        inequality="int(a1, a2) <= C * l(a1) * l(a2) * 2^-D",
        worst_residual=min((r["residual"] for r in rows), default=0.0),
        sample_size=len(rows),
        provenance=f"{len(rows)} pairs of drifted simple curves",
    )
    return rows, entry
