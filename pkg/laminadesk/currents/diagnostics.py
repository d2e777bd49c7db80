"""Does a sequence of curves look like it converges to a lamination?

For each term the curve is normalised to unit length and its self-pairing
recorded; the probe vector pair(term, probe) over a test set shows whether
the normalised terms settle projectively.
"""

import logging
from dataclasses import dataclass, field

import pandas as pd
from tqdm import tqdm

from laminadesk.config import Config
from laminadesk.currents.models import Current, TestSet
from laminadesk.currents.operations import normalize, pair
from laminadesk.surface.geometry import model_length
from laminadesk.surface.intersection import intersection_number
from laminadesk.surface.models import CurveClass, SurfaceData

logger = logging.getLogger(__name__)

LAMINATION_LIKE = "lamination-like"
UNDETERMINED = "undetermined"


def trend_label(values: list[float], threshold: float = Config.LAMINATION_TREND_THRESHOLD) -> str:
    """lamination-like if all zero, or non-increasing and ending below `threshold`."""
    if not values:
        return UNDETERMINED
    if all(v == 0 for v in values):
        return LAMINATION_LIKE
    tol = Config.LENGTH_TOLERANCE
    decreasing = all(b <= a + tol for a, b in zip(values, values[1:]))
    if decreasing and values[-1] < threshold:
        return LAMINATION_LIKE
    return UNDETERMINED


@dataclass
class LimitDiagnostics:
    rows: list[dict] = field(default_factory=list)
    probes: pd.DataFrame = field(default_factory=pd.DataFrame)
    trend: str = UNDETERMINED

    @property
    def normalized_self_pairings(self) -> list[float]:
        return [r["normalized_self_pairing"] for r in self.rows]

    def as_dict(self) -> dict:
        return {
            "trend": self.trend,
            "terms": self.rows,
            "probe_matrix": self.probes.to_dict(orient="split"),
        }


def limit_diagnostics(
    surface: SurfaceData,
    sequence: list[CurveClass | str],
    test_set: TestSet | None = None,
    distances: list[int] | None = None,
    threshold: float = Config.LAMINATION_TREND_THRESHOLD,
    progress: bool = False,
) -> LimitDiagnostics:
    """Normalised self-pairings int(a, a) / l(a)^2, probe evaluations and a trend label."""
    curves = [CurveClass.of(c) if isinstance(c, str) else c for c in sequence]
    probe_currents = [Current.curve(surface, p.letters) for p in test_set.probes] if test_set else []
    rows, matrix, previous = [], [], None
    for i, curve in enumerate(tqdm(curves, desc="terms", disable=not progress)):
        ell = model_length(surface, curve)
        self_pairing = intersection_number(surface, curve, curve)
        unit = normalize(Current.curve(surface, curve.letters))
        probe_values = [pair(unit, p) for p in probe_currents]
        row = {
            "index": i,
            "word": str(curve),
            "length": ell,
            "self_pairing": self_pairing,
            "normalized_self_pairing": self_pairing / ell**2,
        }
        if distances is not None and i < len(distances):
            row["distance"] = distances[i]
        if probe_values:
            row["probe_change"] = (
                None if previous is None else max(abs(a - b) for a, b in zip(probe_values, previous))
            )
            matrix.append(probe_values)
            previous = probe_values
        rows.append(row)

    probes = pd.DataFrame(matrix, columns=test_set.labels if test_set else None)
    if matrix:
        probes.index = [r["word"] for r in rows]
    result = LimitDiagnostics(rows, probes, trend_label([r["normalized_self_pairing"] for r in rows], threshold))
    logger.info(f"📊 {len(rows)} terms, trend {result.trend}")
    return result
