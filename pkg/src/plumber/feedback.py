"""Per-triple user verdicts and their effect on selection scores.

Verdicts land in an append-only JSONL log and aggregate into per-pipeline
accept/reject counters; a later verdict on the same (run, triple)
overwrites the earlier one. At selection time the acceptance rate is
Laplace-smoothed and mixed into the model score, so a single verdict can
nudge but never saturate a pipeline's ranking.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from .errors import PlumberError
from .runner import RunResult, UnknownRun

DEFAULT_BETA = 0.3

VERDICTS = ("accept", "reject")


class IndexOutOfRange(PlumberError):
    code = "index_out_of_range"

    def __init__(self, run_id: str, index: int, count: int):
        super().__init__(f"run {run_id!r} has {count} triples, index {index} is out of range")
        self.index = index


class InvalidVerdict(PlumberError):
    code = "invalid_verdict"


@dataclass(frozen=True)
class FeedbackRecord:
    run_id: str
    triple_index: int
    verdict: str  # "accept" | "reject"
    pipeline_id: str
    timestamp: int  # UTC seconds

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise InvalidVerdict(f"verdict must be one of {VERDICTS}, got {self.verdict!r}")


@dataclass(frozen=True)
class FeedbackStats:
    pipeline_id: str
    accepts: int = 0
    rejects: int = 0


def blend(score: float, stats: FeedbackStats, beta: float = DEFAULT_BETA) -> float:
    """Mix a model score with the smoothed acceptance rate.

    No verdicts (or beta 0) leaves the score untouched; otherwise the
    rate (a+1)/(a+r+2) contributes with weight beta.
    """
    total = stats.accepts + stats.rejects
    if total == 0 or beta == 0:
        return score
    rate = (stats.accepts + 1) / (total + 2)
    return (1 - beta) * score + beta * rate


class FeedbackStore:
    """Durable verdict log with replay-derived per-pipeline counters.

    Appends serialize through a lock; reads return immutable snapshots.
    Malformed trailing log lines (torn writes) are skipped on replay,
    matching the acknowledged-record semantics.
    """

    def __init__(self, path: str | Path, run_lookup: Callable[[str], RunResult] | None = None):
        self.path = Path(path)
        self._run_lookup = run_lookup
        self._lock = threading.Lock()
        self._latest: dict[tuple[str, int], FeedbackRecord] = {}
        self._replay()

    def _replay(self) -> None:
        if not self.path.is_file():
            return
        for line in self.path.read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                record = FeedbackRecord(
                    run_id=obj["run_id"],
                    triple_index=int(obj["triple_index"]),
                    verdict=obj["verdict"],
                    pipeline_id=obj["pipeline_id"],
                    timestamp=int(obj["timestamp"]),
                )
            except (json.JSONDecodeError, KeyError, TypeError, ValueError, PlumberError):
                continue
            self._latest[(record.run_id, record.triple_index)] = record

    def record_feedback(
        self,
        run_id: str,
        triple_index: int,
        verdict: str,
        pipeline_id: str | None = None,
        timestamp: int | None = None,
    ) -> FeedbackRecord:
        run = None
        if self._run_lookup is not None:
            run = self._run_lookup(run_id)  # raises UnknownRun
            if not 0 <= triple_index < len(run.triples):
                raise IndexOutOfRange(run_id, triple_index, len(run.triples))
        if pipeline_id is None:
            if run is None:
                raise UnknownRun(run_id)
            pipeline_id = run.pipeline.id
        record = FeedbackRecord(
            run_id=run_id,
            triple_index=triple_index,
            verdict=verdict,
            pipeline_id=pipeline_id,
            timestamp=int(time.time()) if timestamp is None else timestamp,
        )
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(
                    json.dumps(
                        {
                            "run_id": record.run_id,
                            "triple_index": record.triple_index,
                            "verdict": record.verdict,
                            "pipeline_id": record.pipeline_id,
                            "timestamp": record.timestamp,
                        }
                    )
                    + "\n"
                )
            self._latest[(record.run_id, record.triple_index)] = record
        return record

    def stats_for(self, pipeline_id: str) -> FeedbackStats:
        with self._lock:
            accepts = sum(
                1
                for r in self._latest.values()
                if r.pipeline_id == pipeline_id and r.verdict == "accept"
            )
            rejects = sum(
                1
                for r in self._latest.values()
                if r.pipeline_id == pipeline_id and r.verdict == "reject"
            )
        return FeedbackStats(pipeline_id=pipeline_id, accepts=accepts, rejects=rejects)

    def all_stats(self) -> dict[str, FeedbackStats]:
        with self._lock:
            records = list(self._latest.values())
        stats: dict[str, FeedbackStats] = {}
        for record in records:
            current = stats.get(record.pipeline_id, FeedbackStats(record.pipeline_id))
            stats[record.pipeline_id] = FeedbackStats(
                pipeline_id=record.pipeline_id,
                accepts=current.accepts + (record.verdict == "accept"),
                rejects=current.rejects + (record.verdict == "reject"),
            )
        return stats
