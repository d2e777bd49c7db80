"""Configuration loader."""

import os
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

from laminadesk.errors import ParseError


class Config:
    """Application configuration constants."""

    # Word problem and conjugacy search
    CONJUGACY_SEARCH_RADIUS = 6
    KB_MAX_RULES = 200  # Knuth-Bendix completion gives up past this
    KB_MAX_PASSES = 20
    MAX_HALF_SWAP_REPS = 512  # Minimal representatives explored per class

    # Balls
    VERTEX_CAP = 200_000
    CAP_ENV_VAR = "LAMINADESK_CAP"
    TRIANGLE_PAIR_CAP = 20_000  # Exhaustive delta scans at most this many (y, z)
    FINGERPRINT_STEP = 1e-4  # Grid of the SL2R bucket key
    DELTA_SAMPLE_TRIANGLES = 2_000
    FOUR_POINT_SAMPLES = 5_000

    # Fibered quotient
    LEVEL_WORD_CAP = 4_000  # Levels with longer words are pruned
    PERIOD_SEARCH = 12  # Powers tried when looking for a periodic class

    # Surface model
    MATRIX_TOLERANCE = 1e-9
    TRANSVERSALITY_MARGIN = 1e-6
    TRANSVERSALITY_RETRIES = 3
    AXIS_WALK_MAX_TILES = 20_000

    # Train tracks
    GROWTH_FACTOR = Fraction(3, 2)
    MAX_EXTRA_ROUNDS = 8
    MAX_LENGTHEN_PASSES = 40
    MAX_CUT_STEPS = 10_000  # Branch traversals per cutting arc

    # Ending iteration
    SHORTCUT_BRANCH_BOUND = 3
    SHORTCUT_IMAGE_FACTOR = 4  # Arc images longer than this times eps are not followed
    MAX_SHORTCUTS = 5_000
    MAX_STRAIGHTEN_STEPS = 25
    STABLE_STEPS = 3

    # Currents
    LAMINATION_TREND_THRESHOLD = 0.05
    LENGTH_TOLERANCE = 1e-9

    # Monitoring
    LOGGER_WINDOW = 10.0
    SUMMARY_INTERVAL = 60.0

    # Output
    SCHEMA_VERSION = "v1"
    DEFAULT_DB_PATH = "data/runs.db"
    DEFAULT_SUMMARY_CSV = "reports/summary.csv"


@dataclass
class ExperimentConfig:
    """Parameters of one CLI run, echoed verbatim into its report."""

    subcommand: str
    inputs: list[str] = field(default_factory=list)
    output: str | None = None
    radius: int = 5
    eps_list: list[int] = field(default_factory=lambda: [4, 6, 8])
    t: float = 0.5
    seed: int = 0
    cap_vertices: int = Config.VERTEX_CAP
    words: list[str] = field(default_factory=list)
    instances: int | None = None
    db_path: str = Config.DEFAULT_DB_PATH
    summary_csv: str = Config.DEFAULT_SUMMARY_CSV
    options: dict = field(default_factory=dict)  # Subcommand-specific flags

    def echo(self) -> dict:
        """Return the JSON-ready echo of this configuration."""
        return asdict(self)

    def input_path(self, index: int = 0) -> Path:
        """Return the index-th input file, validating that it exists."""
        if index >= len(self.inputs):
            raise ParseError(
                f"{self.subcommand} needs at least {index + 1} --input file(s)"
            )
        path = Path(self.inputs[index])
        if not path.exists():
            raise ParseError(f"Input file not found: {path}")
        return path

    def default_output(self) -> Path:
        """Report path used when --output is not given."""
        if self.output:
            return Path(self.output)
        return Path("reports") / f"{self.subcommand}.json"


def effective_cap(requested: int | None = None) -> int:
    """Vertex cap after applying the environment override."""
    env = os.environ.get(Config.CAP_ENV_VAR)
    if env:
        try:
            return int(env)
        except ValueError as e:
            raise ParseError(f"{Config.CAP_ENV_VAR}={env!r} is not an integer") from e
    return requested if requested is not None else Config.VERTEX_CAP


COMMON_FLAGS = {
    "command",
    "input",
    "output",
    "radius",
    "eps_list",
    "t",
    "seed",
    "cap_vertices",
    "words",
    "instances",
    "db",
    "summary",
}


def load_config(args) -> ExperimentConfig:
    """Build the experiment configuration from parsed CLI arguments."""
    try:
        eps_list = [int(e) for e in str(args.eps_list).split(",") if e.strip()]
    except ValueError as e:
        raise ParseError(f"--eps-list must be comma-separated integers: {args.eps_list}") from e
    options = {k: v for k, v in sorted(vars(args).items()) if k not in COMMON_FLAGS}
    return ExperimentConfig(
        subcommand=args.command,
        inputs=list(args.input or []),
        output=args.output,
        radius=args.radius,
        eps_list=eps_list,
        t=args.t,
        seed=args.seed,
        cap_vertices=effective_cap(args.cap_vertices),
        words=list(getattr(args, "words", None) or []),
        instances=getattr(args, "instances", None),
        db_path=getattr(args, "db", None) or Config.DEFAULT_DB_PATH,
        summary_csv=getattr(args, "summary", None) or Config.DEFAULT_SUMMARY_CSV,
        options=options,
    )
