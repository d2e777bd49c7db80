"""Current files: one `weight word` pair per line, `#` starts a comment."""

import logging
from fractions import Fraction
from pathlib import Path

from laminadesk.currents.models import Current
from laminadesk.errors import ParseError, PreconditionError
from laminadesk.presentation.parser import parse_word
from laminadesk.surface.models import SurfaceData

logger = logging.getLogger(__name__)


def parse_current_text(text: str, surface: SurfaceData) -> Current:
    components = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 2:
            raise ParseError(f"line {lineno}: expected 'weight word', got {line!r}")
        try:
            weight = Fraction(fields[0])
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"line {lineno}: bad weight {fields[0]!r}") from None
        if weight < 0:
            raise ParseError(f"line {lineno}: negative weight {weight}")
        word = parse_word(surface.presentation.alphabet, fields[1])
        components.append((word, weight))
    try:
        return Current.of(surface, components)
    except PreconditionError as e:
        raise ParseError(str(e)) from e


def load_current(path: str | Path, surface: SurfaceData) -> Current:
    path = Path(path)
    if not path.exists():
        raise ParseError(f"Input file not found: {path}")
    current = parse_current_text(path.read_text(), surface)
    logger.info(f"📄 Loaded current {path.name}: {len(current.components)} component(s)")
    return current
