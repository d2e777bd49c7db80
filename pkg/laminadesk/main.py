"""laminadesk command line: one subcommand per experiment, each writing a versioned JSON report."""

import argparse
import asyncio
import json
import logging
import math
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

import pandas as pd

from laminadesk.cayley import (
    build_ball,
    build_quotient_ball,
    divergence_experiment,
    edge_lines,
    estimate_delta,
    intersection_bound_suite,
    minimal_edge_loop,
    neighborhood_suite,
    oracle_is_identity,
    word_problem_suite,
)
from laminadesk.config import Config, ExperimentConfig, load_config
from laminadesk.currents import TestSet, limit_diagnostics, load_current, pair
from laminadesk.ending import (
    AdaptedMap,
    LoopArc,
    PathMetric,
    bounds_report,
    compose_exit_curve,
    infiniteness_scan,
    leave_compact_check,
    partition_loop,
    run_until_stable,
    smallest_threshold,
    start,
    straighten_step,
)
from laminadesk.errors import LaminadeskError, ParseError
from laminadesk.presentation import (
    FiberedPresentation,
    Presentation,
    conjugacy_minimal,
    get_solver,
    isoperimetric_suite,
    load_fibered,
    load_group,
    parse_word,
)
from laminadesk.presentation.fibered import apply_power
from laminadesk.rate_limited_logger import RateLimitedLogger
from laminadesk.reports import (
    ConstantEntry,
    ExperimentRun,
    Report,
    RunDB,
    append_rows,
    append_summary,
    write_ball,
    write_matrix,
    write_report,
)
from laminadesk.surface import build_surface, cross_validation_suite, intersection_matrix, is_simple, self_intersection
from laminadesk.traintrack import (
    Corner,
    CornerArc,
    SplittingMove,
    check_switch,
    corner_to_midpoint_move,
    lengthen_branches,
    load_track,
    split,
    train_paths,
    validate,
)

logging.basicConfig(
    level=logging.INFO, format="%(asctime)s - %(levelname)s - %(message)s"
)
logger = logging.getLogger(__name__)

# Suppress noisy third-party library logs
logging.getLogger("aiosqlite").setLevel(logging.WARNING)
logging.getLogger("sqlalchemy.engine").setLevel(logging.WARNING)


@dataclass
class Outcome:
    """A report plus the side files written next to it."""

    report: Report
    rows: list[dict] = field(default_factory=list)
    matrices: dict[str, pd.DataFrame] = field(default_factory=dict)
    ball_lines: list[str] | None = None


# Input helpers


def _report(cfg: ExperimentConfig) -> Report:
    return Report(subcommand=cfg.subcommand, config=cfg.echo())


def _presentation(cfg: ExperimentConfig, index: int = 0) -> Presentation:
    group = load_group(cfg.input_path(index))
    return group.fiber if isinstance(group, FiberedPresentation) else group


def _fibered(cfg: ExperimentConfig, index: int = 0) -> FiberedPresentation:
    return load_fibered(cfg.input_path(index))


def _words(cfg: ExperimentConfig, presentation: Presentation) -> list[str]:
    return [parse_word(presentation.alphabet, w) for w in cfg.words]


def _int_list(text: str | None, default: list[int]) -> list[int]:
    if not text:
        return default
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as e:
        raise ParseError(f"expected comma-separated integers, got {text!r}") from e


def _curve_file(path: Path) -> list[str]:
    lines = [line.split("#", 1)[0].strip() for line in path.read_text().splitlines()]
    return [line for line in lines if line]


def parse_arc(text: str) -> CornerArc:
    """`switch:side:index`, optionally `/branch,branch@exit` with exit a fraction."""
    head, _, tail = text.partition("/")
    try:
        switch, side, index = head.split(":")
        corner = Corner(switch, side, int(index))
    except ValueError as e:
        raise ParseError(f"bad corner {head!r}; expected switch:side:index") from e
    if not tail:
        return CornerArc(corner)
    path, _, exit_text = tail.partition("@")
    try:
        exit_at = Fraction(exit_text) if exit_text else None
    except ValueError as e:
        raise ParseError(f"bad exit position {exit_text!r}") from e
    return CornerArc(corner, path=tuple(b for b in path.split(",") if b), exit=exit_at)


def parse_loop(text: str) -> list[LoopArc]:
    """Tokens `b+` / `b-` are train-path steps, `~word` an off-track piece."""
    loop, steps = [], []
    for token in text.split():
        if token.startswith("~"):
            if steps:
                loop.append(LoopArc(steps=tuple(steps)))
                steps = []
            loop.append(LoopArc(word=token[1:]))
        elif len(token) >= 2 and token[-1] in "+-":
            steps.append((token[:-1], 1 if token[-1] == "+" else -1))
        else:
            raise ParseError(f"bad loop token {token!r}; use b+, b- or ~word")
    if steps:
        loop.append(LoopArc(steps=tuple(steps)))
    return loop


def _loop(track, text: str | None) -> list[LoopArc]:
    if text:
        return parse_loop(text)
    if track.weights is None:
        raise ParseError("partition needs --loop or a weighted track")
    paths = train_paths(track, track.weights)
    if not paths:
        raise ParseError("the track weights carry no closed train path; pass --loop")
    return [LoopArc(steps=tuple(paths[0]))]


def _delta(args, presentation: Presentation, cfg: ExperimentConfig, ball=None) -> float:
    """--delta when given, else the exhaustive estimate on the ball of --radius."""
    if getattr(args, "delta", None) is not None:
        return float(args.delta)
    if ball is None:
        ball = build_ball(presentation, cfg.radius, cfg.cap_vertices)
    return float(estimate_delta(ball, seed=cfg.seed).delta)


def _fraction_dict(values: dict) -> dict:
    return {k: str(v) for k, v in sorted(values.items())}


# Subcommands


def cmd_wordproblem(cfg: ExperimentConfig, args) -> Outcome:
    """Dehn verdicts against the ball oracle on words of length <= radius."""
    presentation = _presentation(cfg)
    report = _report(cfg)
    given = _words(cfg, presentation)
    max_length = max((len(w) for w in given), default=cfg.radius)
    ball = build_ball(presentation, (max_length + 1) // 2, cfg.cap_vertices)
    if given:
        solver = get_solver(presentation)
        rows = []
        for i, w in enumerate(given):
            dehn, oracle = solver.is_identity(w), oracle_is_identity(ball, w)
            rows.append({"instance": i, "word": w, "dehn": dehn, "oracle": oracle, "agree": dehn == oracle})
    else:
        rows = word_problem_suite(presentation, ball, cfg.instances or 1000, max_length, cfg.seed)

    disagree = sum(1 for r in rows if not r["agree"])
    report.results.update(
        instances=len(rows),
        identities=sum(1 for r in rows if r["oracle"]),
        disagreements=[r["word"] for r in rows if not r["agree"]],
        ball_radius=ball.radius,
        max_length=max_length,
    )
    report.add_check("oracle_agreement", disagree == 0, disagree, 0, "Dehn identity verdict equals the ball oracle")
    return Outcome(report, rows=rows)


def cmd_minloop(cfg: ExperimentConfig, args) -> Outcome:
    """Minimal edge-loops in a fibered quotient, or minimal representatives and the c2 fit."""
    report = _report(cfg)
    group = load_group(cfg.input_path())
    if isinstance(group, FiberedPresentation):
        quotient = build_quotient_ball(cfg.radius, group)
        classes = _words(cfg, group.fiber) or list(group.fiber.alphabet.names)
        rows = []
        for c in classes:
            loop, certified = minimal_edge_loop(quotient, c)
            rows.append(
                {
                    "class": c,
                    "level": loop.level,
                    "loop": loop.word,
                    "length": len(loop),
                    "certified": certified,
                    "periodic": loop.periodic,
                    "pruned": len(loop.pruned),
                }
            )
            if not certified:
                report.skip(f"certified_{c}", "minimal level not certified inside the quotient ball")
        report.results.update(instances=len(rows), loops=rows)
        return Outcome(report, rows=rows)

    presentation = group
    ball = build_ball(presentation, cfg.radius, cfg.cap_vertices)
    delta = _delta(args, presentation, cfg, ball)
    representatives = {}
    for w in _words(cfg, presentation):
        result = conjugacy_minimal(presentation, w)
        representatives[w] = {
            "minimal": str(result.word),
            "certified": result.certified,
            "representatives": sorted(result.representatives),
        }
    rows, c2 = neighborhood_suite(presentation, ball, cfg.instances or 50, args.max_length, delta, seed=cfg.seed)
    report.constants["c2"] = c2
    report.results.update(instances=len(rows), delta=delta, representatives=representatives)
    report.add_check("nbhd_violations", c2.worst_residual >= 0, 0, c2.worst_residual, "d_Haus <= c2 on every pair")
    bound = c2.extra["bound"]
    report.add_check("c2_bound", c2.value <= bound, c2.value, bound, "c2 <= 4 delta + 2")
    return Outcome(report, rows=rows)


def cmd_delta(cfg: ExperimentConfig, args) -> Outcome:
    presentation = _presentation(cfg)
    report = _report(cfg)
    radii = _int_list(args.radii, [cfg.radius])
    estimates, ball = {}, None
    for r in radii:
        ball = build_ball(presentation, r, cfg.cap_vertices)
        estimates[r] = estimate_delta(ball, mode=args.mode, seed=cfg.seed)

    last = estimates[radii[-1]]
    report.constants["delta_est"] = ConstantEntry(
        name="delta_est",
        value=float(last.delta),
        inequality="every geodesic triangle of the ball is delta-slim",
        sample_size=last.triangles,
        radius=last.radius_used,
        provenance=f"{last.method} scan of ball radius {radii[-1]}",
    )
    report.results.update(
        delta=float(last.delta),
        instances=last.triangles,
        estimates={str(r): e.as_dict() for r, e in estimates.items()},
        sphere_sizes=ball.sphere_sizes(),
    )
    if args.increasing and len(radii) > 1:
        values = [float(estimates[r].delta) for r in radii]
        flat = sum(1 for a, b in zip(values, values[1:]) if b <= a)
        report.add_check("delta_increasing", flat == 0, flat, 0, f"delta strictly increasing over radii {radii}")
    return Outcome(report, ball_lines=edge_lines(ball) if args.export_ball else None)


def cmd_diverge(cfg: ExperimentConfig, args) -> Outcome:
    fibered = _fibered(cfg)
    report = _report(cfg)
    delta = _delta(args, fibered.fiber, cfg)
    rows, c1 = divergence_experiment(fibered, cfg.instances or 50, delta, seed=cfg.seed)
    report.constants["c1"] = c1
    report.results.update(instances=len(rows), delta=delta)
    report.add_check("c1_positive", c1.value > 0, 0, c1.value, "fitted c1 > 0")
    report.add_check("divergence_violations", c1.worst_residual >= 0, 0, c1.worst_residual, c1.inequality)
    base = c1.extra.get("base")
    if args.control:
        if base is None:
            report.skip("flat_base", "a single depth gives no exponential fit")
        else:
            report.add_check("flat_base", abs(base - 1) <= 0.1, abs(base - 1), 0.1, "fitted base within [0.9, 1.1]")
    return Outcome(report, rows=rows)


def cmd_annulus(cfg: ExperimentConfig, args) -> Outcome:
    presentation = _presentation(cfg)
    report = _report(cfg)
    rows, K = isoperimetric_suite(presentation, cfg.instances or 100, seed=cfg.seed)
    report.constants["K"] = K
    report.results.update(instances=len(rows))
    report.add_check("area_bound", K.worst_residual >= 0, 0, K.worst_residual, K.inequality)
    spread = K.extra["relative_spread"]
    report.add_check("K_stable", spread <= 0.2, spread, 0.2, "K fitted on the two halves agrees within 20%")
    return Outcome(report, rows=rows)


def cmd_intbound(cfg: ExperimentConfig, args) -> Outcome:
    fibered = _fibered(cfg)
    report = _report(cfg)
    rows, C = intersection_bound_suite(fibered, cfg.instances or 20, seed=cfg.seed)
    report.constants["C"] = C
    report.results.update(instances=len(rows))
    report.add_check("drifted_pairs", bool(rows), 1, len(rows), "at least one pair with D >= 1")
    report.add_check("intersection_bound", C.worst_residual >= 0, 0, C.worst_residual, C.inequality)
    return Outcome(report, rows=rows)


def cmd_intersect(cfg: ExperimentConfig, args) -> Outcome:
    """Intersection matrix of curves, self-intersections, current pairings and the oracle cross-check."""
    presentation = _presentation(cfg)
    surface = build_surface(presentation)
    report = _report(cfg)
    outcome = Outcome(report)

    curves = _words(cfg, presentation)
    current_paths = []
    for path in (Path(p) for p in cfg.inputs[1:]):
        if not path.exists():
            raise ParseError(f"Input file not found: {path}")
        if path.suffix == ".current":
            current_paths.append(path)
        else:
            curves += [parse_word(presentation.alphabet, w) for w in _curve_file(path)]

    if curves:
        matrix = intersection_matrix(surface, curves)
        outcome.matrices["intersections"] = matrix
        report.results["self_intersection"] = {c: self_intersection(surface, c) for c in curves}
        report.results["simple"] = {c: is_simple(surface, c) for c in curves}
        report.results["matrix"] = matrix.to_dict(orient="split")
        if len(curves) >= 2:
            report.results["int"] = int(matrix.iloc[0, 1])

    if current_paths:
        currents = {p.stem: load_current(p, surface) for p in current_paths}
        names = sorted(currents)
        pairing = pd.DataFrame(
            [[pair(currents[u], currents[v]) for v in names] for u in names], index=names, columns=names
        )
        outcome.matrices["pairings"] = pairing
        report.results["pairings"] = pairing.to_dict(orient="split")

    if cfg.instances:
        rows = cross_validation_suite(surface, cfg.instances, max_length=args.max_length, seed=cfg.seed)
        disagree = sum(1 for r in rows if not r["agree"])
        report.add_check("oracle_agreement", disagree == 0, disagree, 0, "combinatorial count equals the hyperbolic oracle")
        outcome.rows = rows
    report.results["instances"] = len(outcome.rows) or len(curves)
    return outcome


def cmd_track_split(cfg: ExperimentConfig, args) -> Outcome:
    track = load_track(cfg.input_path())
    report = _report(cfg)
    move = SplittingMove(tuple(parse_arc(a) for a in args.arc)) if args.arc else corner_to_midpoint_move(track)
    new, pullback = split(track, move)
    problems = validate(new)
    report.results.update(
        instances=1,
        arcs=[str(a.corner) for a in move.arcs],
        branches={b: list(ends) for b, ends in sorted(new.branches.items())},
        lengths=_fraction_dict(new.lengths),
        weights=None if new.weights is None else _fraction_dict(new.weights.values),
        switches=len(new.switches),
        problems=problems,
    )
    report.add_check("legal", not problems, len(problems), 0, "split track passes validation")
    if new.weights is None:
        report.skip("switch_conditions", "track carries no weights")
        report.skip("pullback", "track carries no weights")
    else:
        report.add_check("switch_conditions", check_switch(new, new.weights), detail="weights balance at every switch")
        report.add_check("pullback", pullback(new.weights) == track.weights, detail="pulled-back weights equal the original")
    return Outcome(report)


def cmd_track_lengthen(cfg: ExperimentConfig, args) -> Outcome:
    track = load_track(cfg.input_path())
    report = _report(cfg)
    target = Fraction(args.target) if args.target else 2 * track.min_length
    result = lengthen_branches(track, target)
    report.results.update(instances=len(result.passes), target=str(target), **result.as_dict())
    for record in result.passes:
        ok = record.growth >= Config.GROWTH_FACTOR or record.min_after > target
        report.add_check(
            f"pass_{record.index}_growth", ok, float(Config.GROWTH_FACTOR), float(record.growth),
            "minimum length grows by 3/2 per pass until the target",
        )
    report.add_check("target_reached", result.track.min_length > target, float(target), float(result.track.min_length))
    problems = validate(result.track)
    report.add_check("legal", not problems, len(problems), 0, "lengthened track passes validation")
    return Outcome(report)


def _adapted_map(cfg: ExperimentConfig, args) -> tuple[AdaptedMap, Presentation]:
    presentation = _presentation(cfg, 0)
    track = load_track(cfg.input_path(1))
    ball = build_ball(presentation, args.ball_radius, cfg.cap_vertices) if args.ball_radius else None
    return AdaptedMap.from_track(track, PathMetric(presentation, ball)), presentation


def cmd_straighten(cfg: ExperimentConfig, args) -> Outcome:
    m, _ = _adapted_map(cfg, args)
    report = _report(cfg)
    runs = {}
    for eps in cfg.eps_list:
        states = run_until_stable(start(m, eps, cfg.t, args.delta), max_steps=args.max_steps)
        final = states[-1]
        history = final.history
        rises = sum(1 for a, b in zip(history, history[1:]) if b > a)
        runs[f"eps={eps}"] = {
            "steps": final.n,
            "history": [str(x) for x in history],
            "shortcuts": final.shortcut_counts,
            "final": final.as_dict(),
        }
        report.add_check(f"monotone_eps={eps}", rises == 0, rises, 0, "l(phi_n+1(a)) <= l(phi_n(a)) at every step")
        report.add_check(f"fixpoint_eps={eps}", final.stable(Config.STABLE_STEPS), final.n, args.max_steps, "length stable")
    report.results.update(instances=len(runs), runs=runs)
    return Outcome(report)


def cmd_partition(cfg: ExperimentConfig, args) -> Outcome:
    m, _ = _adapted_map(cfg, args)
    report = _report(cfg)
    loop = _loop(m.track, args.loop)
    partitions = {}
    for eps in cfg.eps_list:
        state = start(m, eps, cfg.t, args.delta)
        after = straighten_step(state)
        partition = partition_loop(state, loop, eps)
        report.add_check(
            f"complete_eps={eps}", sum(partition.class_lengths.values()) == len(partition),
            sum(partition.class_lengths.values()), len(partition), "class lengths sum to l(gamma_n)",
        )
        bounds_report(state, loop, partition, after=after, K=args.K, c1=args.c1, t_list=[cfg.t], report=report)
        entry = partition.as_dict()
        threshold = state.threshold_length
        if threshold is not None:
            t_min = smallest_threshold(len(partition), math.ceil(threshold))
            entry["smallest_threshold"] = None if t_min is None else str(t_min)
        partitions[f"eps={eps}"] = entry

    slacks = [
        v.slack for eps in cfg.eps_list for v in report.verdicts
        if v.check == f"long_class2_eps={eps}" and v.slack is not None
    ]
    if len(slacks) == len(cfg.eps_list) > 1:
        up = all(a <= b for a, b in zip(slacks, slacks[1:]))
        down = all(a >= b for a, b in zip(slacks, slacks[1:]))
        report.add_check("long_class2_slack_monotone", up or down, detail=f"slacks {slacks}")
    report.results.update(instances=len(partitions), partitions=partitions)
    return Outcome(report)


def cmd_fibered_demo(cfg: ExperimentConfig, args) -> Outcome:
    fibered = _fibered(cfg)
    report = _report(cfg)
    given = _words(cfg, fibered.fiber)
    seed = given[0] if given else fibered.fiber.alphabet.names[0]
    radii = _int_list(args.radii, [2, 4, 6, 8, 10])
    scan = infiniteness_scan(fibered, seed, radii, cfg.instances or max(radii) + 1)
    report.results.update(instances=len(scan.entries), drift_table=scan.as_dict())

    if args.control:
        drifted = sum(1 for r in radii if scan.drift.get(r) is not None)
        report.add_check("no_drift", drifted == 0, drifted, 0, "periodic monodromy keeps loops in a compact set")
    else:
        for r in radii:
            report.add_check(f"escapes_R={r}", scan.drift.get(r) is not None, detail="a certified minimal loop lies outside ball(R)")

    if len(given) >= 3:
        quotient = build_quotient_ball(cfg.radius, fibered)
        curve = compose_exit_curve(quotient, given[1], given[2], delta=args.delta, c2=args.c2)
        report.results["exit_curve"] = curve.as_dict()
        report.add_check("exit_curve", curve.accepted, detail=curve.reason)
    return Outcome(report, rows=[asdict(e) for e in scan.entries])


def cmd_leave_check(cfg: ExperimentConfig, args) -> Outcome:
    fibered = _fibered(cfg)
    report = _report(cfg)
    surface = build_surface(fibered.fiber)
    given = _words(cfg, fibered.fiber)
    radii = _int_list(args.radii, [1, 2])
    if len(given) > 1:
        sequence = given
    else:
        seed = given[0] if given else fibered.fiber.alphabet.names[0]
        sequence = [apply_power(fibered.monodromy, seed, -i) for i in range(cfg.instances or 4)]

    check = leave_compact_check(fibered, sequence, radii, surface=surface)
    test_set = TestSet(surface, list(args.probe)) if args.probe else None
    diagnostics = limit_diagnostics(surface, sequence, test_set, distances=[None if k is None else abs(k) for k in check.levels])
    report.results.update(instances=len(sequence), leave=check.as_dict(), currents=diagnostics.as_dict())
    for r, escapes in check.escapes.items():
        report.add_check(f"leaves_R={r}", escapes, detail="the sequence eventually leaves ball(R)")
    outcome = Outcome(report, rows=diagnostics.rows)
    if not diagnostics.probes.empty:
        outcome.matrices["probes"] = diagnostics.probes
    return outcome


COMMANDS = {
    "wordproblem": (cmd_wordproblem, "Dehn algorithm against the ball oracle"),
    "minloop": (cmd_minloop, "minimal loops and the neighbourhood constant"),
    "delta": (cmd_delta, "hyperbolicity constant of a ball"),
    "diverge": (cmd_diverge, "exponential divergence suite"),
    "annulus": (cmd_annulus, "annular isoperimetry suite"),
    "intbound": (cmd_intbound, "intersection bound suite over fibered instances"),
    "intersect": (cmd_intersect, "intersection numbers and current pairings"),
    "track-split": (cmd_track_split, "split a train track along corner arcs"),
    "track-lengthen": (cmd_track_lengthen, "lengthen every branch past a target"),
    "straighten": (cmd_straighten, "run the straightening iteration"),
    "partition": (cmd_partition, "partition a loop and evaluate the class bounds"),
    "fibered-demo": (cmd_fibered_demo, "drift of minimal loops in a fibered quotient"),
    "leave-check": (cmd_leave_check, "whether a sequence of curves leaves every compact set"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", nargs="+", action="extend", help="input files")
    common.add_argument("--output", help="report path (default reports/<subcommand>.json)")
    common.add_argument("--radius", type=int, default=5)
    common.add_argument("--eps-list", default="4,6,8")
    common.add_argument("--t", type=float, default=0.5)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--cap-vertices", type=int, default=None)
    common.add_argument("--words", nargs="*", default=[])
    common.add_argument("--instances", type=int, default=None)
    common.add_argument("--db", default=None, help=f"run database (default {Config.DEFAULT_DB_PATH})")
    common.add_argument("--summary", default=None, help=f"summary CSV (default {Config.DEFAULT_SUMMARY_CSV})")

    parser = argparse.ArgumentParser(prog="laminadesk", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    parsers = {name: sub.add_parser(name, parents=[common], help=text) for name, (_, text) in COMMANDS.items()}

    parsers["minloop"].add_argument("--delta", type=float, default=None)
    parsers["minloop"].add_argument("--max-length", type=int, default=6)
    parsers["delta"].add_argument("--radii", default=None, help="comma-separated radii")
    parsers["delta"].add_argument("--mode", choices=["exhaustive", "sampled"], default="exhaustive")
    parsers["delta"].add_argument("--increasing", action="store_true", help="require delta to grow with the radius")
    parsers["delta"].add_argument("--export-ball", action="store_true", help="write the ball's edges next to the report")
    parsers["diverge"].add_argument("--delta", type=float, default=None)
    parsers["diverge"].add_argument("--control", action="store_true", help="flat control: base must be near 1")
    parsers["intersect"].add_argument("--max-length", type=int, default=6)
    parsers["track-split"].add_argument("--arc", action="append", default=[], help="switch:side:index[/b1,b2@exit]")
    parsers["track-lengthen"].add_argument("--target", default=None, help="target length (default twice the minimum)")
    for name in ("straighten", "partition"):
        parsers[name].add_argument("--delta", type=float, default=None)
        parsers[name].add_argument("--ball-radius", type=int, default=None)
        parsers[name].add_argument("--max-steps", type=int, default=Config.MAX_STRAIGHTEN_STEPS)
    parsers["partition"].add_argument("--loop", default=None, help="e.g. 'x+ y+ ~bb'")
    parsers["partition"].add_argument("--K", type=float, default=None)
    parsers["partition"].add_argument("--c1", type=float, default=None)
    for name in ("fibered-demo", "leave-check"):
        parsers[name].add_argument("--radii", default=None, help="comma-separated radii")
    parsers["fibered-demo"].add_argument("--delta", type=float, default=None)
    parsers["fibered-demo"].add_argument("--c2", type=float, default=None)
    parsers["fibered-demo"].add_argument("--control", action="store_true", help="expect no drift")
    parsers["leave-check"].add_argument("--probe", action="append", default=[], help="probe curve for the currents")
    return parser


async def _write_outcome(outcome: Outcome, cfg: ExperimentConfig) -> Path:
    path = cfg.default_output()
    stem = path.with_suffix("")
    if outcome.rows:
        await append_rows(outcome.rows, f"{stem}_rows.csv")
    for name, matrix in outcome.matrices.items():
        write_matrix(matrix, f"{stem}_{name}.csv")
    if outcome.ball_lines is not None:
        await write_ball(outcome.ball_lines, f"{stem}_ball.txt")
    await write_report(outcome.report, path)
    await append_summary(outcome.report, cfg.summary_csv, path)
    return path


async def run(args) -> int:
    """Run one subcommand, persist its report and record it. Returns the exit code."""
    try:
        cfg = load_config(args)
    except LaminadeskError as e:
        logger.error(f"❌ {e}")
        return 1

    logger.info(f"🚀 {cfg.subcommand} (seed {cfg.seed})")
    db = RunDB(cfg.db_path)
    await db.initialize()
    run_id = await db.record_run(
        ExperimentRun(
            subcommand=cfg.subcommand,
            config_json=json.dumps(cfg.echo(), sort_keys=True),
            seed=cfg.seed,
        )
    )

    handler, _ = COMMANDS[cfg.subcommand]
    report, path, error, exit_code = None, None, None, 1
    RateLimitedLogger.reset_all()
    try:
        loop = asyncio.get_running_loop()
        outcome = await loop.run_in_executor(None, handler, cfg, args)
        report = outcome.report
        report.logger_stats = RateLimitedLogger.collect_stats()
        path = await _write_outcome(outcome, cfg)
        exit_code = 2 if report.failures else 0
        status = "✅" if exit_code == 0 else "❌"
        logger.info(f"{status} {cfg.subcommand}: {report.verdict} ({report.failures} failing checks)")
    except LaminadeskError as e:
        logger.error(f"❌ {cfg.subcommand} failed: {e}")
        error = str(e)
    finally:
        await db.finish_run(run_id, exit_code, report, None if path is None else str(path), error)
        await db.close()
    return exit_code


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return asyncio.run(run(args))
    except KeyboardInterrupt:
        logger.info("🛑 Interrupted")
        return 130


def cli():
    sys.exit(main())


if __name__ == "__main__":
    cli()
