from datetime import datetime, timezone
from typing import Any, Literal, Optional

from pydantic import BaseModel, Field as PydanticField, computed_field
from sqlmodel import Field, SQLModel

from laminadesk.config import Config


class ExperimentRun(SQLModel, table=True):
    """One CLI invocation and its outcome."""

    __tablename__ = "experiment_runs"  # pyright: ignore[reportAssignmentType]

    id: int = Field(default=None, primary_key=True)
    started_at: datetime = Field(default_factory=lambda: datetime.now(timezone.utc), index=True)
    finished_at: Optional[datetime] = None

    subcommand: str = Field(index=True)
    config_json: str  # Echo of ExperimentConfig
    seed: int = 0

    # Outcome
    verdict: str = Field(default="running", index=True)  # PASS, FAIL, ERROR
    exit_code: Optional[int] = None
    report_path: Optional[str] = None
    error_message: Optional[str] = None

    # Headline numbers for quick queries
    delta_est: Optional[float] = None
    instances: int = Field(default=0)
    violations: int = Field(default=0)


class ConstantEntry(BaseModel):
    """A fitted constant together with the inequality it was fitted to."""

    name: str
    value: float
    inequality: str
    worst_residual: float = 0.0  # Minimum slack over the sample; negative means violation
    sample_size: int = 0
    radius: Optional[int] = None
    provenance: str = ""
    extra: dict[str, Any] = PydanticField(default_factory=dict)


class Verdict(BaseModel):
    """PASS/FAIL for one checked property."""

    check: str
    status: Literal["PASS", "FAIL", "SKIP"]
    lhs: Optional[float] = None
    rhs: Optional[float] = None
    detail: str = ""

    @computed_field
    def slack(self) -> Optional[float]:
        if self.lhs is None or self.rhs is None:
            return None
        return self.rhs - self.lhs


class Report(BaseModel):
    """JSON report written by every subcommand."""

    schema_version: str = Config.SCHEMA_VERSION
    subcommand: str
    config: dict[str, Any]
    constants: dict[str, ConstantEntry] = PydanticField(default_factory=dict)
    results: dict[str, Any] = PydanticField(default_factory=dict)
    verdicts: list[Verdict] = PydanticField(default_factory=list)
    logger_stats: dict[str, int] = PydanticField(default_factory=dict)
    timestamp: str = PydanticField(
        default_factory=lambda: datetime.now(timezone.utc).isoformat()
    )

    @computed_field
    def failures(self) -> int:
        return sum(1 for v in self.verdicts if v.status == "FAIL")

    @computed_field
    def verdict(self) -> str:
        return "FAIL" if self.failures else "PASS"

    def add_check(self, check: str, passed: bool, lhs=None, rhs=None, detail: str = "") -> Verdict:
        verdict = Verdict(
            check=check,
            status="PASS" if passed else "FAIL",
            lhs=None if lhs is None else float(lhs),
            rhs=None if rhs is None else float(rhs),
            detail=detail,
        )
        self.verdicts.append(verdict)
        return verdict

    def skip(self, check: str, reason: str) -> None:
        self.verdicts.append(Verdict(check=check, status="SKIP", detail=reason))
