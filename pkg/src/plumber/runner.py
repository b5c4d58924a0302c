"""Pipeline execution: stage orchestration, result cache, run store.

Stages run in the canonical order coref -> extraction -> linking (entity
then relation, or joint). Both linkers consume the extractor's triples;
the runner merges subject/object links from the entity linker with
predicate links from the relation linker. A stage failure aborts the
remaining stages but still yields a persisted RunResult whose trace ends
with the failed entry, so concurrent runs are never affected.
"""

from __future__ import annotations

import hashlib
import json
import threading
import time
import uuid
from collections import OrderedDict
from dataclasses import dataclass
from pathlib import Path

from .errors import PlumberError
from .model import AlignedTriple, Document, LinkedTerm, TextTriple, normalize_surface
from .registry import Pipeline, Registry, TaskKind
from .remote import RemoteInvoker
from .native.runtime import NativeRuntime
from .wire import (
    InvocationPayload,
    aligned_from_wire,
    aligned_to_wire,
    serialize_payload,
    serialize_result_body,
    triple_from_wire,
    validate_result_body,
)

DEFAULT_CACHE_BUDGET_BYTES = 256 * 1024 * 1024


class InvalidPipeline(PlumberError):
    code = "invalid_pipeline"


class UnknownRun(PlumberError):
    code = "unknown_run"

    def __init__(self, run_id: str):
        super().__init__(f"no run with id {run_id!r}")
        self.run_id = run_id


class StageFailure(PlumberError):
    code = "stage_failure"

    def __init__(self, component_id: str, cause: Exception):
        super().__init__(f"stage {component_id!r} failed: {cause}")
        self.component_id = component_id
        self.cause = cause


@dataclass(frozen=True)
class StageTrace:
    component_id: str
    task: TaskKind
    latency_ms: int
    status: str  # "ok" | "failed" | "cache_hit"
    payload_hash_in: str
    payload_hash_out: str


@dataclass(frozen=True)
class RunResult:
    run_id: str
    pipeline: Pipeline
    input_hash: str
    triples: tuple[AlignedTriple, ...]
    trace: tuple[StageTrace, ...]
    mode: str  # "manual" | "automatic"

    @property
    def failed(self) -> bool:
        return any(t.status == "failed" for t in self.trace)


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


class ResultCache:
    """Content-addressed stage-result cache with LRU byte-budget eviction.

    Keys are (component_id, version, payload_hash); values are canonical
    result-body bytes, so concurrent writers racing on one key write the
    same content and last-write-wins is safe. All I/O failures degrade to
    a miss.
    """

    def __init__(self, root: str | Path, budget_bytes: int = DEFAULT_CACHE_BUDGET_BYTES):
        self.root = Path(root)
        self.budget_bytes = budget_bytes
        self._lock = threading.Lock()
        self._index: OrderedDict[tuple[str, str, str], int] = OrderedDict()
        self._load_index()

    def _load_index(self) -> None:
        try:
            entries = []
            for file in self.root.glob("*/*/*"):
                if file.is_file():
                    component, version, digest = file.parts[-3:]
                    entries.append((file.stat().st_mtime, (component, version, digest), file.stat().st_size))
            for _, key, size in sorted(entries):
                self._index[key] = size
        except OSError:
            pass

    def _path(self, key: tuple[str, str, str]) -> Path:
        return self.root.joinpath(*key)

    def lookup(self, component_id: str, version: str, payload_hash: str) -> bytes | None:
        key = (component_id, version, payload_hash)
        try:
            data = self._path(key).read_bytes()
        except OSError:
            return None
        with self._lock:
            if key in self._index:
                self._index.move_to_end(key)
        return data

    def store(self, component_id: str, version: str, payload_hash: str, data: bytes) -> None:
        key = (component_id, version, payload_hash)
        try:
            path = self._path(key)
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_bytes(data)
        except OSError:
            return
        with self._lock:
            self._index[key] = len(data)
            self._index.move_to_end(key)
            total = sum(self._index.values())
            while total > self.budget_bytes and len(self._index) > 1:
                old_key, old_size = self._index.popitem(last=False)
                total -= old_size
                try:
                    self._path(old_key).unlink()
                except OSError:
                    pass

    def keys(self) -> list[tuple[str, str, str]]:
        with self._lock:
            return list(self._index)


class RunStore:
    """Append-only directory of per-run JSON files."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def save(self, result: RunResult) -> None:
        path = self.root / f"{result.run_id}.json"
        path.write_text(json.dumps(run_result_to_dict(result), indent=2), encoding="utf-8")

    def get(self, run_id: str) -> RunResult:
        path = self.root / f"{run_id}.json"
        if not path.is_file():
            raise UnknownRun(run_id)
        return run_result_from_dict(json.loads(path.read_text(encoding="utf-8")))

    def list_ids(self) -> list[str]:
        return sorted(p.stem for p in self.root.glob("*.json"))


class PipelineRunner:
    def __init__(
        self,
        registry: Registry,
        native_runtime: NativeRuntime,
        remote_invoker: RemoteInvoker | None = None,
        cache: ResultCache | None = None,
        run_store: RunStore | None = None,
    ):
        self.registry = registry
        self.native = native_runtime
        self.remote = remote_invoker or RemoteInvoker()
        self.cache = cache
        self.run_store = run_store

    def run_pipeline(self, pipeline: Pipeline, doc: Document, mode: str = "manual") -> RunResult:
        try:
            self.registry.validate_manual_selection(
                pipeline.coref, pipeline.extractor, pipeline.linking_ids, pipeline.kg
            )
        except PlumberError as exc:
            raise InvalidPipeline(f"pipeline {pipeline.id!r}: {exc.message}") from exc

        trace: list[StageTrace] = []
        triples: tuple[AlignedTriple, ...] = ()
        try:
            coref_body, entry = self._invoke(
                pipeline.coref,
                InvocationPayload(task=TaskKind.COREF, text=doc.text),
            )
            trace.append(entry)

            extract_body, entry = self._invoke(
                pipeline.extractor,
                InvocationPayload(task=TaskKind.TRIPLE_EXTRACTION, text=coref_body["text"]),
            )
            trace.append(entry)
            text_triples = tuple(
                triple_from_wire(t, f"triples[{i}]")
                for i, t in enumerate(extract_body["triples"])
            )

            if pipeline.is_joint:
                joint_body, entry = self._invoke(
                    pipeline.joint_linker,
                    InvocationPayload(
                        task=TaskKind.JOINT_LINKING, triples=text_triples, kg=pipeline.kg
                    ),
                )
                trace.append(entry)
                aligned = [
                    aligned_from_wire(t, pipeline.kg, f"aligned[{i}]")
                    for i, t in enumerate(joint_body["aligned"])
                ]
            else:
                el_body, entry = self._invoke(
                    pipeline.entity_linker,
                    InvocationPayload(
                        task=TaskKind.ENTITY_LINKING, triples=text_triples, kg=pipeline.kg
                    ),
                )
                trace.append(entry)
                rl_body, entry = self._invoke(
                    pipeline.relation_linker,
                    InvocationPayload(
                        task=TaskKind.RELATION_LINKING, triples=text_triples, kg=pipeline.kg
                    ),
                )
                trace.append(entry)
                aligned = self._merge_linking(
                    pipeline, text_triples, el_body["aligned"], rl_body["aligned"]
                )
            triples = _deduplicate(aligned)
        except StageFailure as failure:
            trace.append(failure.trace_entry)  # type: ignore[attr-defined]
            triples = ()

        result = RunResult(
            run_id=uuid.uuid4().hex,
            pipeline=pipeline,
            input_hash=_sha256(doc.text.encode("utf-8")),
            triples=triples,
            trace=tuple(trace),
            mode=mode,
        )
        if self.run_store is not None:
            self.run_store.save(result)
        return result

    def _merge_linking(
        self,
        pipeline: Pipeline,
        text_triples: tuple[TextTriple, ...],
        el_aligned: list,
        rl_aligned: list,
    ) -> list[AlignedTriple]:
        if len(el_aligned) != len(text_triples) or len(rl_aligned) != len(text_triples):
            cause = PlumberError("linker did not return one aligned triple per input triple")
            raise self._failure(pipeline.relation_linker, TaskKind.RELATION_LINKING, cause)
        merged = []
        for i in range(len(text_triples)):
            el = aligned_from_wire(el_aligned[i], pipeline.kg, f"el[{i}]")
            rl = aligned_from_wire(rl_aligned[i], pipeline.kg, f"rl[{i}]")
            merged.append(
                AlignedTriple(subject=el.subject, predicate=rl.predicate, object=el.object)
            )
        return merged

    def _invoke(
        self, component_id: str, payload: InvocationPayload
    ) -> tuple[dict, StageTrace]:
        desc = self.registry.get(component_id)
        payload_bytes = serialize_payload(payload)
        hash_in = _sha256(payload_bytes)

        if self.cache is not None:
            cached = self.cache.lookup(desc.id, desc.version, hash_in)
            if cached is not None:
                try:
                    body = validate_result_body(payload.task, json.loads(cached.decode("utf-8")))
                except (PlumberError, ValueError, UnicodeDecodeError):
                    body = None  # corrupt cache entry degrades to a miss
                if body is not None:
                    return body, StageTrace(
                        component_id=desc.id,
                        task=payload.task,
                        latency_ms=0,
                        status="cache_hit",
                        payload_hash_in=hash_in,
                        payload_hash_out=_sha256(cached),
                    )

        started = time.perf_counter()
        try:
            if desc.target.kind == "native":
                body = self.native.invoke(desc.target.ref, payload)
                body = validate_result_body(payload.task, body)
            else:
                result = self.remote.invoke(desc, payload, desc.timeout_ms)
                body = result.result
        except PlumberError as exc:
            latency_ms = int((time.perf_counter() - started) * 1000)
            raise self._failure(desc.id, payload.task, exc, latency_ms, hash_in)
        latency_ms = int((time.perf_counter() - started) * 1000)

        body_bytes = serialize_result_body(body)
        if self.cache is not None:
            self.cache.store(desc.id, desc.version, hash_in, body_bytes)
        return body, StageTrace(
            component_id=desc.id,
            task=payload.task,
            latency_ms=latency_ms,
            status="ok",
            payload_hash_in=hash_in,
            payload_hash_out=_sha256(body_bytes),
        )

    @staticmethod
    def _failure(
        component_id: str,
        task: TaskKind,
        cause: Exception,
        latency_ms: int = 0,
        hash_in: str = "",
    ) -> StageFailure:
        failure = StageFailure(component_id, cause)
        failure.trace_entry = StageTrace(  # type: ignore[attr-defined]
            component_id=component_id,
            task=task,
            latency_ms=latency_ms,
            status="failed",
            payload_hash_in=hash_in,
            payload_hash_out="",
        )
        return failure


def _term_key(term: LinkedTerm) -> str:
    return term.ref.iri if term.ref is not None else normalize_surface(term.mention.surface)


def _deduplicate(aligned: list[AlignedTriple]) -> tuple[AlignedTriple, ...]:
    seen = set()
    out = []
    for triple in aligned:
        key = (_term_key(triple.subject), _term_key(triple.predicate), _term_key(triple.object))
        if key in seen:
            continue
        seen.add(key)
        out.append(triple)
    return tuple(out)


# ---------------------------------------------------------------------------
# persistence
# ---------------------------------------------------------------------------

def pipeline_to_dict(p: Pipeline) -> dict:
    return {
        "id": p.id,
        "coref": p.coref,
        "extractor": p.extractor,
        "entity_linker": p.entity_linker,
        "relation_linker": p.relation_linker,
        "joint_linker": p.joint_linker,
        "kg": p.kg,
    }


def pipeline_from_dict(obj: dict) -> Pipeline:
    return Pipeline(
        id=obj["id"],
        coref=obj["coref"],
        extractor=obj["extractor"],
        entity_linker=obj.get("entity_linker"),
        relation_linker=obj.get("relation_linker"),
        joint_linker=obj.get("joint_linker"),
        kg=obj["kg"],
    )


def run_result_to_dict(result: RunResult) -> dict:
    return {
        "run_id": result.run_id,
        "pipeline": pipeline_to_dict(result.pipeline),
        "input_hash": result.input_hash,
        "triples": [aligned_to_wire(t) for t in result.triples],
        "trace": [
            {
                "component_id": t.component_id,
                "task": t.task.value,
                "latency_ms": t.latency_ms,
                "status": t.status,
                "payload_hash_in": t.payload_hash_in,
                "payload_hash_out": t.payload_hash_out,
            }
            for t in result.trace
        ],
        "mode": result.mode,
    }


def run_result_from_dict(obj: dict) -> RunResult:
    pipeline = pipeline_from_dict(obj["pipeline"])
    return RunResult(
        run_id=obj["run_id"],
        pipeline=pipeline,
        input_hash=obj["input_hash"],
        triples=tuple(
            aligned_from_wire(t, pipeline.kg, f"triples[{i}]")
            for i, t in enumerate(obj["triples"])
        ),
        trace=tuple(
            StageTrace(
                component_id=t["component_id"],
                task=TaskKind(t["task"]),
                latency_ms=t["latency_ms"],
                status=t["status"],
                payload_hash_in=t["payload_hash_in"],
                payload_hash_out=t["payload_hash_out"],
            )
            for t in obj["trace"]
        ),
        mode=obj["mode"],
    )
