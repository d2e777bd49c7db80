"""Rate-limited diagnostics for long experiment sweeps.

A suite may hit the same uncertified geodesic or skipped instance thousands
of times; each category is logged at most once per window with the number
of repeats folded into the message, and every occurrence is still counted
for the report.
"""

import logging
import time
from collections import defaultdict
from dataclasses import dataclass, field

from laminadesk.config import Config


@dataclass
class LogStats:
    """Occurrences of one (level, category) pair."""

    first_seen: float
    last_seen: float
    pending: int = 0  # Repeats since the last emitted line
    total: int = 0
    last_logged: float = 0.0
    samples: list[str] = field(default_factory=list)
    max_samples: int = 3

    def record(self, message: str, now: float):
        self.pending += 1
        self.total += 1
        self.last_seen = now
        if len(self.samples) < self.max_samples:
            self.samples.append(message)


class RateLimitedLogger:
    """Per-module diagnostics channel; `collect_stats` merges every channel for a report."""

    _registry: dict[str, "RateLimitedLogger"] = {}

    def __init__(
        self,
        name: str,
        base_logger: logging.Logger,
        window: float = Config.LOGGER_WINDOW,
        summary_interval: float = Config.SUMMARY_INTERVAL,
    ):
        self.name = name
        self.base_logger = base_logger
        self.window = window
        self.summary_interval = summary_interval
        self._stats: dict[tuple[int, str], LogStats] = defaultdict(self._fresh)
        self._last_summary = time.time()
        RateLimitedLogger._registry[name] = self

    @staticmethod
    def _fresh() -> LogStats:
        now = time.time()
        return LogStats(first_seen=now, last_seen=now)

    def _emit(self, level: int, category: str, message: str):
        stats = self._stats[(level, category)]
        now = time.time()
        stats.record(message, now)

        due = stats.last_logged == 0 or now - stats.last_logged >= self.window
        if due:
            if stats.pending > 1:
                elapsed = now - stats.last_logged
                rate = stats.pending / elapsed if elapsed > 0 else 0
                message = f"{message} (x{stats.pending} in last {elapsed:.1f}s, {rate:.1f}/s)"
            self.base_logger.log(level, f"[{category}] {message}")
            stats.pending = 0
            stats.last_logged = now

        if now - self._last_summary >= self.summary_interval:
            self.log_summary()
            self._last_summary = now

    def log_summary(self):
        if not self._stats:
            return
        lines = [f"📊 {self.name} diagnostics:"]
        ranked = sorted(self._stats.items(), key=lambda item: -item[1].total)
        for (_, category), stats in ranked:
            lines.append(f"  • {category}: {stats.total}")
            if stats.samples:
                lines.append(f"    e.g. {stats.samples[0][:100]}")
        self.base_logger.info("\n".join(lines))

    def uncertified(self, what: str, detail: str = ""):
        """A result that could not be certified inside the ball."""
        suffix = f": {detail}" if detail else ""
        self._emit(logging.WARNING, f"{self.name}_uncertified", f"⚠️ uncertified {what}{suffix}")

    def skipped(self, what: str, reason: str):
        """An instance a suite had to leave out."""
        self._emit(logging.WARNING, f"{self.name}_skipped", f"skipped {what}: {reason}")

    def warning(self, category: str, message: str):
        self._emit(logging.WARNING, f"{self.name}_{category}", message)

    def info(self, message: str):
        self.base_logger.info(f"[{self.name}] {message}")

    def debug(self, message: str):
        self.base_logger.debug(f"[{self.name}] {message}")

    def get_stats(self) -> dict[str, int]:
        """Total occurrences per category."""
        counts: dict[str, int] = {}
        for (_, category), stats in self._stats.items():
            counts[category] = counts.get(category, 0) + stats.total
        return counts

    def reset(self):
        self._stats.clear()

    @classmethod
    def collect_stats(cls) -> dict[str, int]:
        merged: dict[str, int] = {}
        for channel in cls._registry.values():
            for category, total in channel.get_stats().items():
                merged[category] = merged.get(category, 0) + total
        return dict(sorted(merged.items()))

    @classmethod
    def reset_all(cls):
        for channel in cls._registry.values():
            channel.reset()
