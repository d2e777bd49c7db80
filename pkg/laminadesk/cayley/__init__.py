from laminadesk.cayley.ball import (
    build_ball,
    distance,
    edge_lines,
    geodesic,
    oracle_is_identity,
    to_networkx,
    word_problem_suite,
)
from laminadesk.cayley.experiments import (
    clamp_delta,
    coarse_projection,
    divergence_experiment,
    hausdorff_check,
    intersection_bound_suite,
    neighborhood_suite,
)
from laminadesk.cayley.hyperbolicity import estimate_delta
from laminadesk.cayley.models import Ball, ConstantsLedger, EdgeLoop, HyperbolicityEstimate, QuotientBall
from laminadesk.cayley.quotient import build_quotient_ball, minimal_edge_loop

__all__ = [
    "Ball",
    "ConstantsLedger",
    "EdgeLoop",
    "HyperbolicityEstimate",
    "QuotientBall",
    "build_ball",
    "build_quotient_ball",
    "clamp_delta",
    "coarse_projection",
    "distance",
    "divergence_experiment",
    "edge_lines",
    "estimate_delta",
    "geodesic",
    "hausdorff_check",
    "intersection_bound_suite",
    "minimal_edge_loop",
    "neighborhood_suite",
    "oracle_is_identity",
    "to_networkx",
    "word_problem_suite",
]
