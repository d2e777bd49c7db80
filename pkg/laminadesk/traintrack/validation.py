"""Legality of tracks and switch conditions of weightings."""

import logging
from collections import Counter
from fractions import Fraction

import networkx as nx

from laminadesk.errors import PreconditionError, TrackError
from laminadesk.traintrack.models import Corner, HalfBranch, TrainTrack, Weighting, opposite
from laminadesk.traintrack.ties import flips

logger = logging.getLogger(__name__)


def check_structure(track: TrainTrack) -> None:
    """Raise TrackError unless every half-branch sits on exactly one switch side."""
    attached = track.attachments
    for b, (start, end) in track.branches.items():
        if (start is None) != (end is None):
            raise TrackError(f"branch {b} has exactly one free end")
        if b not in track.lengths or track.lengths[b] <= 0:
            raise TrackError(f"branch {b} needs a positive length")
        for e, switch in ((0, start), (1, end)):
            half = HalfBranch(b, e)
            if switch is None:
                if half in attached:
                    raise TrackError(f"closed branch {b} appears at switch {attached[half][0]}")
                continue
            if half not in attached:
                raise TrackError(f"half-branch {half} is not attached to any switch")
            if attached[half][0] != switch:
                raise TrackError(f"half-branch {half} sits at {attached[half][0]}, not {switch}")
    for half in attached:
        if half.branch not in track.branches:
            raise TrackError(f"switch lists unknown branch {half.branch}")
    for sw in track.switches.values():
        if not sw.a or not sw.b:
            raise TrackError(f"switch {sw.name} has an empty side")
    if track.regions is not None:
        known = set(track.corners)
        seen = Counter(c for r in track.regions for c in r.corners)
        for corner, count in seen.items():
            if corner not in known:
                raise TrackError(f"region census names unknown corner {corner}")
            if count > 1:
                raise TrackError(f"corner {corner} listed in {count} regions")


def _edge_at(track: TrainTrack, half: HalfBranch, high: bool) -> str:
    """Which edge of a branch (L or R) meets the low or high end of its tie interval."""
    _, side, _ = track.attachment(half)
    flip = flips(side, half.end)
    return ("L" if flip else "R") if high else ("R" if flip else "L")


def _walk(track: TrainTrack, branch: str, start_edge: str, visited: set) -> list[Corner]:
    corners = []
    b, edge, e = branch, start_edge, 1
    for _ in range(2 * len(track.branches) + 2):
        visited.add((b, edge))
        switch, side, i = track.attachment(HalfBranch(b, e))
        high = (edge == "R") != flips(side, e)
        halves = track.switches[switch].side(side)
        if high and i < len(halves) - 1:
            corners.append(Corner(switch, side, i))
            nxt, nxt_high = halves[i + 1], False
        elif not high and i > 0:
            corners.append(Corner(switch, side, i - 1))
            nxt, nxt_high = halves[i - 1], True
        else:
            other = track.switches[switch].side(opposite(side))
            nxt, nxt_high = (other[-1] if high else other[0]), high
        b, edge, e = nxt.branch, _edge_at(track, nxt, nxt_high), 1 - nxt.end
        if (b, edge) == (branch, start_edge):
            return corners
    raise TrackError(f"frontier walk from {branch}.{start_edge} does not close")


def frontier_cycles(track: TrainTrack) -> list[list[Corner]]:
    """Boundary components of the track neighbourhood, each as its list of cusps.

    Each branch has a left edge L and a right edge R. A walk runs along an
    edge to a switch, then either turns back at a cusp or passes smoothly
    around an extreme half-branch to the other side.
    """
    visited: set[tuple[str, str]] = set()
    cycles = []
    for b in sorted(track.branches):
        for edge in ("L", "R"):
            if (b, edge) in visited:
                continue
            if track.is_closed(b):
                visited.add((b, edge))
                cycles.append([])
                continue
            cycles.append(_walk(track, b, edge, visited))
    return cycles


def census_problems(track: TrainTrack) -> list[str]:
    """Inconsistencies between the region census and the track itself."""
    problems = []
    region_of = {c: r.name for r in track.regions for c in r.corners}
    for corner in track.corners:
        if corner not in region_of:
            problems.append(f"corner {corner} lies in no region")
    cycles = frontier_cycles(track)
    for cycle in cycles:
        owners = {region_of.get(c) for c in cycle}
        if len(owners) > 1:
            problems.append(f"frontier cycle through {cycle[0]} split across regions {sorted(map(str, owners))}")
    if all(r.sides is not None for r in track.regions):
        sides = sum(r.sides - r.boundary for r in track.regions)
        if sides != len(cycles):
            problems.append(f"census lists {sides} boundary components, the track has {len(cycles)}")
    if track.surface_euler is not None:
        total = track.euler + sum(r.euler for r in track.regions)
        if total != track.surface_euler:
            problems.append(f"Euler count {total} does not match the surface ({track.surface_euler})")
    return problems


def region_violations(track: TrainTrack) -> list[str]:
    out = []
    for r in track.regions or ():
        if r.is_disk and len(r.corners) <= 2:
            out.append(f"region {r.name}: disk with {len(r.corners)} corners (two or fewer)")
        elif r.is_annulus and not r.corners:
            out.append(f"region {r.name}: annulus with no corners")
    return out


def validate(track: TrainTrack) -> list[str]:
    """Every violated legality rule; empty iff the track is legal.

    Structural problems (dangling or doubly attached half-branches) raise
    TrackError instead. Census checks run only when regions are supplied.
    """
    check_structure(track)
    if track.regions is None:
        return []
    violations = region_violations(track) + census_problems(track)
    for v in violations:
        logger.debug(f"{track.name}: {v}")
    return violations


def switch_defects(track: TrainTrack, weights: Weighting) -> dict[str, Fraction]:
    """Side A total minus side B total, per switch."""
    return {
        name: sum((weights[h.branch] for h in sw.a), Fraction(0))
        - sum((weights[h.branch] for h in sw.b), Fraction(0))
        for name, sw in track.switches.items()
    }


def check_switch(track: TrainTrack, weights: Weighting) -> bool:
    """True iff every switch balances exactly."""
    negative = [b for b, w in weights.values.items() if w < 0]
    if negative:
        raise PreconditionError(f"negative weights on {negative}")
    return not any(switch_defects(track, weights).values())


def annular_components(track: TrainTrack) -> list[list[str]]:
    """Connected components of the track that are annuli: closed branches or bivalent cycles."""
    graph = nx.Graph()
    for b, (start, end) in track.branches.items():
        graph.add_node(("b", b))
        for s in (start, end):
            if s is not None:
                graph.add_edge(("b", b), ("s", s))
    out = []
    for component in nx.connected_components(graph):
        switches = [n[1] for n in component if n[0] == "s"]
        if all(track.switches[s].is_bivalent for s in switches):
            out.append(sorted(n[1] for n in component if n[0] == "b"))
    return sorted(out)
