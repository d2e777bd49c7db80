"""Plain-text track files.

    [surface]
    euler -2
    [branches]
    x s s
    core - -
    [switches]
    s A: x.1 y.1 | B: y.0 x.0
    [regions]
    R sides=1 genus=1 corners=s:A:0,s:B:0 annulus=no
    P sides=3 genus=0 boundary=1
    [lengths]
    x 3/2
    [weights]
    x 2
    [words]
    x a

Branches name their start and end switches, `-` for a closed branch.
Missing lengths default to 1.
"""

import logging
from fractions import Fraction
from pathlib import Path

from laminadesk.errors import ParseError, TrackError
from laminadesk.traintrack.models import Corner, HalfBranch, Region, Switch, TrainTrack, Weighting

logger = logging.getLogger(__name__)

SECTIONS = ("surface", "branches", "switches", "regions", "lengths", "weights", "words")


def _fraction(value: str, lineno: int) -> Fraction:
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"line {lineno}: expected a rational number, got {value!r}") from None


def _half(token: str, lineno: int) -> HalfBranch:
    branch, _, end = token.rpartition(".")
    if not branch or end not in ("0", "1"):
        raise ParseError(f"line {lineno}: half-branch must be branch.0 or branch.1, got {token!r}")
    return HalfBranch(branch, int(end))


def _parse_switch(line: str, lineno: int) -> Switch:
    name, _, rest = line.partition(" ")
    sides = {}
    for part in rest.split("|"):
        label, _, halves = part.partition(":")
        label = label.strip().upper()
        if label not in ("A", "B"):
            raise ParseError(f"line {lineno}: switch side must be A or B, got {label!r}")
        sides[label] = tuple(_half(t, lineno) for t in halves.split())
    if set(sides) != {"A", "B"}:
        raise ParseError(f"line {lineno}: switch {name} needs both sides")
    return Switch(name, sides["A"], sides["B"])


def _parse_region(line: str, lineno: int) -> Region:
    name, *fields = line.split()
    data = {}
    for f in fields:
        key, _, value = f.partition("=")
        data[key] = value
    sides = int(data.get("sides", 1))
    genus = int(data.get("genus", 0))
    euler = 2 - 2 * genus - sides
    corners = []
    for token in filter(None, data.get("corners", "").split(",")):
        parts = token.split(":")
        if len(parts) != 3:
            raise ParseError(f"line {lineno}: corner must be switch:side:index, got {token!r}")
        corners.append(Corner(parts[0], parts[1].upper(), int(parts[2])))
    if "annulus" in data:
        flagged = data["annulus"].lower() in ("yes", "true", "1")
        if flagged != (euler == 0):
            raise ParseError(f"line {lineno}: region {name} annulus flag disagrees with sides/genus")
    boundary = int(data.get("boundary", 0))
    if not 0 <= boundary <= sides:
        raise ParseError(f"line {lineno}: region {name} has {boundary} boundary sides out of {sides}")
    return Region(name, euler, tuple(corners), sides, boundary)


def parse_track_text(text: str, name: str = "") -> TrainTrack:
    section = None
    branches: dict[str, tuple[str | None, str | None]] = {}
    switches: dict[str, Switch] = {}
    regions: list[Region] = []
    lengths: dict[str, Fraction] = {}
    weights: dict[str, Fraction] = {}
    chart: dict[str, str] = {}
    surface_euler = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip().lower()
            if section not in SECTIONS:
                raise ParseError(f"line {lineno}: unknown section [{section}]")
            continue
        if section is None:
            raise ParseError(f"line {lineno}: data before the first section")
        fields = line.split()
        if section == "surface":
            if fields[0] != "euler" or len(fields) != 2:
                raise ParseError(f"line {lineno}: expected 'euler <int>'")
            surface_euler = int(fields[1])
        elif section == "branches":
            if len(fields) != 3:
                raise ParseError(f"line {lineno}: expected 'name start end'")
            b, start, end = fields
            branches[b] = (None if start == "-" else start, None if end == "-" else end)
        elif section == "switches":
            sw = _parse_switch(line, lineno)
            switches[sw.name] = sw
        elif section == "regions":
            regions.append(_parse_region(line, lineno))
        elif section in ("lengths", "weights"):
            if len(fields) != 2:
                raise ParseError(f"line {lineno}: expected 'branch value'")
            target = lengths if section == "lengths" else weights
            target[fields[0]] = _fraction(fields[1], lineno)
        elif section == "words":
            chart[fields[0]] = fields[1] if len(fields) > 1 else ""

    for b in branches:
        lengths.setdefault(b, Fraction(1))
    unknown = (set(lengths) | set(weights) | set(chart)) - set(branches)
    if unknown:
        raise ParseError(f"values given for unknown branches {sorted(unknown)}")
    if any(w < 0 for w in weights.values()):
        raise ParseError("weights must be nonnegative")

    track = TrainTrack(
        branches=branches,
        switches=switches,
        lengths=lengths,
        regions=tuple(regions) if regions else None,
        weights=Weighting({b: weights.get(b, Fraction(0)) for b in branches}) if weights else None,
        words=chart,
        surface_euler=surface_euler,
        name=name,
    )
    try:
        track.attachments
    except TrackError as e:
        raise ParseError(str(e)) from e
    return track


def load_track(path: str | Path) -> TrainTrack:
    path = Path(path)
    if not path.exists():
        raise ParseError(f"Input file not found: {path}")
    track = parse_track_text(path.read_text(), name=path.stem)
    logger.info(f"📄 Loaded track {path.name}: {len(track.branches)} branches, {len(track.switches)} switches")
    return track
