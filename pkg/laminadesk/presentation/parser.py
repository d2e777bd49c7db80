"""Plain-text presentation and fibered-group files.

    # genus 2
    gens: a b c d
    rel: abABcdCD
    dehn: true

Fibered files add `stable: t`, `monodromy: a -> aba` and, unless every
image is a single letter, `inverse: a -> aB`.
"""

import logging
from pathlib import Path

from laminadesk.errors import ParseError
from laminadesk.presentation import words
from laminadesk.presentation.models import (
    Automorphism,
    FiberedPresentation,
    GeneratorAlphabet,
    Presentation,
)

logger = logging.getLogger(__name__)


def _parse_map(value: str, lineno: int) -> tuple[str, str]:
    if "->" not in value:
        raise ParseError(f"line {lineno}: expected 'x -> word', got {value!r}")
    src, dst = (part.strip() for part in value.split("->", 1))
    if len(src) != 1 or not src.islower():
        raise ParseError(f"line {lineno}: map source must be one generator, got {src!r}")
    return src, "" if dst in ("", "e", "1") else dst


def _derive_inverse(images: dict[str, str]) -> dict[str, str] | None:
    """Invert a signed permutation of generators."""
    if not all(len(img) == 1 for img in images.values()):
        return None
    inverse = {}
    for src, img in images.items():
        target = img.lower()
        inverse[target] = src if img.islower() else src.upper()
    return inverse if set(inverse) == set(images) else None


def parse_group_text(text: str, name: str = "") -> Presentation | FiberedPresentation:
    gens: list[str] | None = None
    relators: list[str] = []
    dehn = False
    stable = None
    images: dict[str, str] = {}
    inverse_images: dict[str, str] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ParseError(f"line {lineno}: expected 'key: value', got {raw!r}")
        key, value = (part.strip() for part in line.split(":", 1))
        key = key.lower()
        if key == "gens":
            gens = value.split()
        elif key == "rel":
            relators.append(value.replace(" ", ""))
        elif key == "dehn":
            dehn = value.lower() in ("true", "yes", "1")
        elif key == "stable":
            stable = value
        elif key == "monodromy":
            src, dst = _parse_map(value, lineno)
            images[src] = dst
        elif key == "inverse":
            src, dst = _parse_map(value, lineno)
            inverse_images[src] = dst
        elif key == "name":
            name = value
        else:
            raise ParseError(f"line {lineno}: unknown key {key!r}")

    if gens is None:
        raise ParseError("missing 'gens:' line")
    alphabet = GeneratorAlphabet(tuple(gens))
    for rel in relators:
        alphabet.check(rel)
    presentation = Presentation(alphabet, tuple(relators), dehn, name)

    if stable is None:
        if images:
            raise ParseError("monodromy given without 'stable:' letter")
        return presentation

    if len(stable) != 1 or not stable.islower() or stable in gens:
        raise ParseError(f"stable letter must be a fresh lowercase letter, got {stable!r}")
    for src in gens:
        images.setdefault(src, src)
    for img in list(images.values()) + list(inverse_images.values()):
        alphabet.check(img)
    if not inverse_images:
        derived = _derive_inverse(images)
        if derived is None:
            raise ParseError("monodromy is not a letter permutation; supply 'inverse:' lines")
        inverse_images = derived
    for src in gens:
        inverse_images.setdefault(src, src)
    return FiberedPresentation(presentation, Automorphism(images, inverse_images), stable)


def load_group(path: str | Path) -> Presentation | FiberedPresentation:
    path = Path(path)
    if not path.exists():
        raise ParseError(f"Input file not found: {path}")
    group = parse_group_text(path.read_text(), name=path.stem)
    logger.info(f"📄 Loaded {path.name}")
    return group


def load_presentation(path: str | Path) -> Presentation:
    """Load a file as a plain presentation (the fiber of a fibered file)."""
    group = load_group(path)
    return group.fiber if isinstance(group, FiberedPresentation) else group


def load_fibered(path: str | Path) -> FiberedPresentation:
    group = load_group(path)
    if not isinstance(group, FiberedPresentation):
        raise ParseError(f"{path} has no 'stable:' line")
    return group


def parse_word(alphabet: GeneratorAlphabet, text: str) -> str:
    """CLI word: letters, case is inversion, 'e' alone is the identity."""
    text = text.strip().replace(" ", "")
    if text in ("1", "") or (text == "e" and "e" not in alphabet.names):
        return ""
    return words.free_reduce(alphabet.check(text))
