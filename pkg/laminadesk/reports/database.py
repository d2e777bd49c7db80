from contextlib import asynccontextmanager
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional
import logging

from sqlalchemy import text
from sqlalchemy.ext.asyncio import AsyncEngine, create_async_engine
from sqlalchemy.pool import StaticPool
from sqlmodel import SQLModel, func, select
from sqlmodel.ext.asyncio.session import AsyncSession

from laminadesk.config import Config
from laminadesk.reports.models import ExperimentRun, Report

logger = logging.getLogger(__name__)


class RunDB:
    """Async run log: one row per CLI invocation."""

    def __init__(self, db_path: str = Config.DEFAULT_DB_PATH):
        self.db_path = Path(db_path)
        self.db_path.parent.mkdir(parents=True, exist_ok=True)

        self.engine: AsyncEngine = create_async_engine(
            f"sqlite+aiosqlite:///{self.db_path}",
            echo=False,
            future=True,
            pool_pre_ping=True,
            poolclass=StaticPool,
            connect_args={
                "check_same_thread": False,
                "timeout": 30,
            },
        )

    @asynccontextmanager
    async def session(self):
        """Session that commits on exit and rolls back on error."""
        async with AsyncSession(self.engine, expire_on_commit=False) as session:
            try:
                yield session
                await session.commit()
            except Exception:
                await session.rollback()
                raise

    async def initialize(self):
        async with self.engine.begin() as conn:
            await conn.run_sync(SQLModel.metadata.create_all)
            await conn.execute(text("PRAGMA journal_mode=WAL"))
            await conn.execute(text("PRAGMA synchronous=NORMAL"))
        logger.info(f"💾 Run database ready at {self.db_path}")

    async def record_run(self, run: ExperimentRun) -> int:
        """Insert a run and return its ID."""
        async with self.session() as session:
            session.add(run)
            await session.flush()
            return run.id

    async def finish_run(
        self,
        run_id: int,
        exit_code: int,
        report: Optional[Report] = None,
        report_path: Optional[str] = None,
        error: Optional[str] = None,
    ) -> ExperimentRun:
        """Stamp the outcome of a run; the verdict is ERROR when no report was produced."""
        async with self.session() as session:
            run = await session.get(ExperimentRun, run_id)
            if not run:
                raise ValueError(f"Run {run_id} not found")

            run.finished_at = datetime.now(timezone.utc)
            run.exit_code = exit_code
            run.report_path = report_path
            run.error_message = error
            if report is None:
                run.verdict = "ERROR"
            else:
                run.verdict = report.verdict
                run.violations = report.failures
                run.instances = int(report.results.get("instances", 0) or 0)
                delta = report.constants.get("delta_est")
                run.delta_est = None if delta is None else delta.value
            session.add(run)
            return run

    async def get_run(self, run_id: int) -> Optional[ExperimentRun]:
        async with self.session() as session:
            return await session.get(ExperimentRun, run_id)

    async def recent_runs(self, limit: int = 20, subcommand: Optional[str] = None) -> list[ExperimentRun]:
        """Most recent runs first."""
        async with self.session() as session:
            query = select(ExperimentRun)
            if subcommand:
                query = query.where(ExperimentRun.subcommand == subcommand)
            result = await session.exec(
                query.order_by(ExperimentRun.started_at.desc(), ExperimentRun.id.desc()).limit(limit)  # pyright: ignore
            )
            return list(result.all())

    async def verdict_counts(self) -> dict[str, int]:
        async with self.session() as session:
            result = await session.exec(
                select(ExperimentRun.verdict, func.count()).group_by(ExperimentRun.verdict)
            )
            return {verdict: int(n) for verdict, n in result.all()}

    async def close(self):
        await self.engine.dispose()
