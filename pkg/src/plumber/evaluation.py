"""Micro precision/recall/F1 scoring and pipeline benchmarking.

A predicted triple matches a gold triple position-wise: IRI gold demands
the exact IRI (an unlinked prediction never matches), surface gold
demands equal normalized surfaces. Matching is greedy in prediction
order with each gold consumed at most once; with exact predicates and
deduplicated predictions this equals the optimal assignment. Counts are
summed across the corpus before the ratios (micro averaging).
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .errors import InvalidValue
from .model import AlignedTriple, Document, LinkedTerm, normalize_surface
from .registry import Pipeline
from .runner import PipelineRunner, RunResult


@dataclass(frozen=True)
class GoldTerm:
    iri: str | None = None
    surface: str | None = None

    def __post_init__(self):
        if (self.iri is None) == (self.surface is None):
            raise InvalidValue("gold term must carry exactly one of iri/surface")
        if not (self.iri or self.surface):
            raise InvalidValue("gold term must be non-empty")


@dataclass(frozen=True)
class GoldTriple:
    subject: GoldTerm
    predicate: GoldTerm
    object: GoldTerm


@dataclass(frozen=True)
class EvaluationReport:
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    f1: float

    @staticmethod
    def from_counts(tp: int, fp: int, fn: int) -> "EvaluationReport":
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = (
            2 * precision * recall / (precision + recall)
            if precision + recall
            else 0.0
        )
        return EvaluationReport(tp=tp, fp=fp, fn=fn, precision=precision, recall=recall, f1=f1)


@dataclass(frozen=True)
class PipelineProfile:
    pipeline_id: str
    per_document_f1: tuple[float, ...]
    report: EvaluationReport
    mean_latency_ms: float


def _term_matches(predicted: LinkedTerm, gold: GoldTerm) -> bool:
    if gold.iri is not None:
        return predicted.ref is not None and predicted.ref.iri == gold.iri
    return normalize_surface(predicted.mention.surface) == normalize_surface(gold.surface)


def _triple_matches(predicted: AlignedTriple, gold: GoldTriple) -> bool:
    return (
        _term_matches(predicted.subject, gold.subject)
        and _term_matches(predicted.predicate, gold.predicate)
        and _term_matches(predicted.object, gold.object)
    )


def match_triples(
    predicted: Sequence[AlignedTriple], gold: Sequence[GoldTriple]
) -> tuple[int, int, int]:
    """Greedy one-to-one matching; returns (tp, fp, fn)."""
    consumed = [False] * len(gold)
    tp = 0
    for p in predicted:
        for i, g in enumerate(gold):
            if consumed[i]:
                continue
            if _triple_matches(p, g):
                consumed[i] = True
                tp += 1
                break
    return tp, len(predicted) - tp, len(gold) - tp


def micro_metrics(counts: Sequence[tuple[int, int, int]]) -> EvaluationReport:
    tp = sum(c[0] for c in counts)
    fp = sum(c[1] for c in counts)
    fn = sum(c[2] for c in counts)
    return EvaluationReport.from_counts(tp, fp, fn)


def document_f1(predicted: Sequence[AlignedTriple], gold: Sequence[GoldTriple]) -> float:
    return EvaluationReport.from_counts(*match_triples(predicted, gold)).f1


def benchmark(
    runner: PipelineRunner,
    pipelines: Sequence[Pipeline],
    corpus: Sequence[tuple[Document, list[GoldTriple]]],
    parallelism: int | None = None,
) -> list[PipelineProfile]:
    """Run every pipeline over every document and aggregate micro metrics.

    A failed run scores as zero predictions for its document (f1 = 0)
    rather than aborting the benchmark.
    """
    if not corpus:
        raise InvalidValue("benchmark corpus must be non-empty")
    workers = parallelism or os.cpu_count() or 4

    def execute(pair: tuple[int, int]) -> tuple[tuple[int, int], RunResult]:
        p_idx, d_idx = pair
        return pair, runner.run_pipeline(pipelines[p_idx], corpus[d_idx][0], mode="manual")

    pairs = [(p, d) for p in range(len(pipelines)) for d in range(len(corpus))]
    results: dict[tuple[int, int], RunResult] = {}
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for pair, run in pool.map(execute, pairs):
            results[pair] = run

    profiles = []
    for p_idx, pipeline in enumerate(pipelines):
        counts = []
        f1s = []
        latencies = []
        for d_idx, (_, gold) in enumerate(corpus):
            run = results[(p_idx, d_idx)]
            predicted = () if run.failed else run.triples
            c = match_triples(predicted, gold)
            counts.append(c)
            f1s.append(EvaluationReport.from_counts(*c).f1)
            latencies.append(sum(t.latency_ms for t in run.trace))
        profiles.append(
            PipelineProfile(
                pipeline_id=pipeline.id,
                per_document_f1=tuple(f1s),
                report=micro_metrics(counts),
                mean_latency_ms=sum(latencies) / len(latencies),
            )
        )
    return profiles


# ---------------------------------------------------------------------------
# corpus and profile files
# ---------------------------------------------------------------------------

def gold_term_from_dict(obj: dict) -> GoldTerm:
    if not isinstance(obj, dict):
        raise InvalidValue(f"gold term must be an object, got {obj!r}")
    return GoldTerm(iri=obj.get("iri"), surface=obj.get("surface"))


def load_corpus(path: str | Path) -> list[tuple[Document, list[GoldTriple]]]:
    """Read a JSON-Lines corpus: {"id", "text", "gold": [{"subject": ...}]}."""
    corpus = []
    for line_no, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise InvalidValue(f"{path}:{line_no}: {exc.msg}") from exc
        doc = Document(id=str(obj["id"]), text=obj["text"])
        gold = [
            GoldTriple(
                subject=gold_term_from_dict(g["subject"]),
                predicate=gold_term_from_dict(g["predicate"]),
                object=gold_term_from_dict(g["object"]),
            )
            for g in obj.get("gold", [])
        ]
        corpus.append((doc, gold))
    return corpus


def profile_to_dict(profile: PipelineProfile) -> dict:
    return {
        "pipeline_id": profile.pipeline_id,
        "per_document_f1": list(profile.per_document_f1),
        "report": {
            "tp": profile.report.tp,
            "fp": profile.report.fp,
            "fn": profile.report.fn,
            "precision": profile.report.precision,
            "recall": profile.report.recall,
            "f1": profile.report.f1,
        },
        "mean_latency_ms": profile.mean_latency_ms,
    }


def profile_from_dict(obj: dict) -> PipelineProfile:
    report = obj["report"]
    return PipelineProfile(
        pipeline_id=obj["pipeline_id"],
        per_document_f1=tuple(obj["per_document_f1"]),
        report=EvaluationReport(
            tp=report["tp"],
            fp=report["fp"],
            fn=report["fn"],
            precision=report["precision"],
            recall=report["recall"],
            f1=report["f1"],
        ),
        mean_latency_ms=obj["mean_latency_ms"],
    )


def save_profiles(path: str | Path, profiles: Sequence[PipelineProfile]) -> None:
    Path(path).write_text(
        json.dumps([profile_to_dict(p) for p in profiles], indent=2), encoding="utf-8"
    )


def load_profiles(path: str | Path) -> list[PipelineProfile]:
    return [profile_from_dict(o) for o in json.loads(Path(path).read_text(encoding="utf-8"))]
