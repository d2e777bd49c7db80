from laminadesk.surface.geometry import build_surface, fingerprint, model_length, trace_of, word_matrix
from laminadesk.surface.intersection import (
    intersection_matrix,
    intersection_number,
    is_simple,
    self_intersection,
)
from laminadesk.surface.models import CurveClass, Multicurve, SurfaceData
from laminadesk.surface.oracle import cross_validation_suite, intersection_oracle

__all__ = [
    "CurveClass",
    "Multicurve",
    "SurfaceData",
    "build_surface",
    "cross_validation_suite",
    "fingerprint",
    "intersection_matrix",
    "intersection_number",
    "intersection_oracle",
    "is_simple",
    "model_length",
    "self_intersection",
    "trace_of",
    "word_matrix",
]
