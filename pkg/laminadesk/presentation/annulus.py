"""Annular diagrams from reduction traces and the isoperimetric fit."""

import logging

import numpy as np

from laminadesk.errors import NotConjugateError
from laminadesk.presentation import words
from laminadesk.presentation.dehn import conjugacy_minimal
from laminadesk.presentation.models import AnnularDiagram, CyclicWord, Presentation
from laminadesk.reports.models import ConstantEntry

logger = logging.getLogger(__name__)


def build_annular_diagram(
    presentation: Presentation, outer: CyclicWord | str, inner: CyclicWord | str
) -> AnnularDiagram:
    """Annulus with boundary outer and inner.

    Both loops are carried to a common minimal representative; every Dehn
    replacement and half-relator swap on the way becomes one face. The area
    is an upper bound for the minimal area.
    """
    outer_c = outer if isinstance(outer, CyclicWord) else CyclicWord.of(outer)
    inner_c = inner if isinstance(inner, CyclicWord) else CyclicWord.of(inner)

    ro = conjugacy_minimal(presentation, outer_c)
    ri = conjugacy_minimal(presentation, inner_c)
    best = None
    for canon, xo in ro.representatives.items():
        if canon not in ri.representatives:
            continue
        cells = (
            ro.faces
            + ro.swap_paths.get(canon, [])
            + ri.faces
            + ri.swap_paths.get(canon, [])
        )
        if best is None or len(cells) < len(best[0]):
            xi = ri.representatives[canon]
            best = (cells, words.free_reduce(words.inverse(xi) + xo))
    if best is None:
        raise NotConjugateError("not conjugate within search radius")

    cells, conjugator = best
    return AnnularDiagram(
        boundary_outer=outer_c,
        boundary_inner=inner_c,
        conjugator=conjugator,
        cells=list(cells),
    )


def random_annulus_instance(
    presentation: Presentation, rng: np.random.Generator, max_word: int = 4, max_relators: int = 2
) -> tuple[str, str]:
    """An (outer, inner) conjugate pair with some relator material to cancel.

    outer is a random cyclic word with up to `max_relators` rotated relators
    spliced in at random positions; inner is its minimal representative.
    """
    letters = presentation.alphabet.letters
    while True:
        w = words.random_cyclic_word(rng, letters, int(rng.integers(1, max_word + 1)))
        for _ in range(int(rng.integers(1, max_relators + 1))):
            rel = presentation.relators[int(rng.integers(len(presentation.relators)))]
            if rng.integers(2):
                rel = words.inverse(rel)
            shift = int(rng.integers(len(rel)))
            rel = rel[shift:] + rel[:shift]
            pos = int(rng.integers(len(w) + 1))
            w = w[:pos] + rel + w[pos:]
        outer = words.cyclic_reduce(w)
        if not outer:
            continue
        inner = conjugacy_minimal(presentation, outer).word.letters
        if inner:
            return outer, inner


def fit_isoperimetric_constant(diagrams: list[AnnularDiagram], radius: int | None = None) -> ConstantEntry:
    """K = max area / perimeter, with the two sample halves fitted separately."""
    ratios = [d.area / d.perimeter for d in diagrams if d.perimeter]
    k_fit = max(ratios, default=0.0)
    half = len(ratios) // 2
    first = max(ratios[:half], default=0.0)
    second = max(ratios[half:], default=0.0)
    spread = abs(first - second) / max(first, second) if max(first, second) > 0 else 0.0
    residual = min((k_fit * d.perimeter - d.area for d in diagrams), default=0.0)
    return ConstantEntry(
        name="K",
        value=k_fit,
        inequality="area(A) <= K * (l(outer) + l(inner))",
        worst_residual=residual,
        sample_size=len(diagrams),
        radius=radius,
        provenance="reduction-trace annular diagrams (area upper bounds)",
        extra={"first_half": first, "second_half": second, "relative_spread": spread},
    )


def isoperimetric_suite(presentation: Presentation, instances: int, seed: int = 0) -> tuple[list[dict], ConstantEntry]:
    """Random conjugate pairs, their diagrams and the fitted K."""
    rng = np.random.default_rng(seed)
    rows, diagrams = [], []
    for i in range(instances):
        outer, inner = random_annulus_instance(presentation, rng)
        diagram = build_annular_diagram(presentation, outer, inner)
        diagrams.append(diagram)
        rows.append(
            {
                "instance": i,
                "outer": outer,
                "inner": inner,
                "area": diagram.area,
                "perimeter": diagram.perimeter,
            }
        )
    entry = fit_isoperimetric_constant(diagrams)
    logger.info(f"📊 K_fit={entry.value:.3f} over {instances} annuli (spread {entry.extra['relative_spread']:.2%})")
    return rows, entry
