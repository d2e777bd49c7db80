"""Report files: JSON reports, the CSV run summary, matrices and ball exports."""

import json
import logging
from pathlib import Path

import aiocsv
import aiofiles
import pandas as pd

from laminadesk.reports.models import Report

logger = logging.getLogger(__name__)

SUMMARY_FIELDS = [
    "timestamp",
    "subcommand",
    "verdict",
    "failures",
    "skipped",
    "instances",
    "seed",
    "report_path",
]


def report_json(report: Report) -> str:
    """Sorted-key JSON; values without a JSON type (Fraction, tuples of them) are written as strings."""
    return json.dumps(report.model_dump(), sort_keys=True, indent=2, default=str) + "\n"


async def write_report(report: Report, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    async with aiofiles.open(path, "w") as f:
        await f.write(report_json(report))
    logger.info(f"💾 Report written to {path} ({report.verdict})")
    return path


def summary_row(report: Report, report_path: str | Path | None = None) -> dict:
    return {
        "timestamp": report.timestamp,
        "subcommand": report.subcommand,
        "verdict": report.verdict,
        "failures": report.failures,
        "skipped": sum(1 for v in report.verdicts if v.status == "SKIP"),
        "instances": report.results.get("instances", ""),
        "seed": report.config.get("seed", ""),
        "report_path": "" if report_path is None else str(report_path),
    }


async def append_summary(report: Report, filepath: str | Path, report_path: str | Path | None = None) -> None:
    """Append one row per run; the header goes in when the file is new."""
    filepath = Path(filepath)
    filepath.parent.mkdir(parents=True, exist_ok=True)
    file_exists = filepath.exists()

    async with aiofiles.open(filepath, "a", newline="") as f:
        writer = aiocsv.AsyncDictWriter(f, fieldnames=SUMMARY_FIELDS, extrasaction="ignore")
        if not file_exists:
            await writer.writeheader()
        await writer.writerow(summary_row(report, report_path))


async def append_rows(rows: list[dict], filepath: str | Path) -> int:
    """Per-instance rows of a suite; the columns are those of the first row."""
    if not rows:
        return 0
    filepath = Path(filepath)
    filepath.parent.mkdir(parents=True, exist_ok=True)
    file_exists = filepath.exists()
    async with aiofiles.open(filepath, "a", newline="") as f:
        writer = aiocsv.AsyncDictWriter(f, fieldnames=list(rows[0]), extrasaction="ignore")
        if not file_exists:
            await writer.writeheader()
        await writer.writerows(rows)
    return len(rows)


def write_matrix(matrix: pd.DataFrame, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    matrix.to_csv(path)
    return path


async def write_ball(lines: list[str], path: str | Path) -> Path:
    """Ball edges as `u s v` lines."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    async with aiofiles.open(path, "w") as f:
        await f.write("".join(line + "\n" for line in lines))
    return path
