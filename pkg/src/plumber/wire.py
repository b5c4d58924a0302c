"""Wire protocol for component invocation (version 1).

Every component — native baselines included — consumes an invocation
payload and produces a task-specific result body. Serialization is
canonical: keys sorted, no insignificant whitespace, UTF-8. That makes
payload bytes stable under field reordering, so they double as cache
keys.

Task result bodies:
  coref             {"text": str, "substitutions": [{"pronoun_start", "pronoun_end",
                     "antecedent", "out_start", "out_end"}]}
  triple_extraction {"triples": [{"subject": {"surface","start","end"}, "predicate": {...},
                     "object": {...}}]}
  *_linking         {"aligned": [{"subject": {"surface","start","end"[,"iri"],"confidence"},
                     ...}]}; a missing "iri" marks an unlinked term.

Offsets are Unicode scalar (character) offsets; component authors must
not report byte offsets.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import PlumberError
from .model import AlignedTriple, KGRef, LinkedTerm, Mention, Span, TextTriple
from .registry import LINKING_TASKS, TaskKind

PROTOCOL_VERSION = 1

_TEXT_TASKS = (TaskKind.COREF, TaskKind.TRIPLE_EXTRACTION)


class SchemaViolation(PlumberError):
    code = "schema_violation"

    def __init__(self, path: str, message: str = "invalid value"):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass(frozen=True)
class InvocationPayload:
    task: TaskKind
    text: str | None = None
    triples: tuple[TextTriple, ...] | None = None
    kg: str | None = None
    version: int = PROTOCOL_VERSION

    def __post_init__(self):
        if self.version != PROTOCOL_VERSION:
            raise SchemaViolation("version", f"unsupported protocol version {self.version}")
        if self.task in _TEXT_TASKS:
            if self.text is None:
                raise SchemaViolation("text", f"{self.task.value} payload requires text")
            if self.triples is not None or self.kg is not None:
                raise SchemaViolation("triples", f"{self.task.value} payload carries text only")
        else:
            if self.triples is None or self.kg is None:
                raise SchemaViolation("triples", f"{self.task.value} payload requires triples and kg")
            if self.text is not None:
                raise SchemaViolation("text", f"{self.task.value} payload must not carry text")


@dataclass(frozen=True)
class InvocationResult:
    status: str  # "ok" | "error"
    result: dict | None = None
    message: str | None = None
    latency_ms: int = 0

    def __post_init__(self):
        if self.status == "ok" and self.result is None:
            raise SchemaViolation("result", "ok result requires a body")
        if self.status == "error" and not self.message:
            raise SchemaViolation("message", "error result requires a message")
        if self.latency_ms < 0:
            raise SchemaViolation("latency_ms", "latency must be non-negative")


def canonical_bytes(obj) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode("utf-8")


# ---------------------------------------------------------------------------
# model <-> wire conversion
# ---------------------------------------------------------------------------

def mention_to_wire(m: Mention) -> dict:
    return {"surface": m.surface, "start": m.span.start, "end": m.span.end}


def triple_to_wire(t: TextTriple) -> dict:
    return {
        "subject": mention_to_wire(t.subject),
        "predicate": mention_to_wire(t.predicate),
        "object": mention_to_wire(t.object),
    }


def linked_term_to_wire(term: LinkedTerm) -> dict:
    out = mention_to_wire(term.mention)
    out["confidence"] = term.confidence
    if term.ref is not None:
        out["iri"] = term.ref.iri
    return out


def aligned_to_wire(t: AlignedTriple) -> dict:
    return {
        "subject": linked_term_to_wire(t.subject),
        "predicate": linked_term_to_wire(t.predicate),
        "object": linked_term_to_wire(t.object),
    }


def mention_from_wire(obj: dict, path: str) -> Mention:
    surface = _expect(obj, "surface", str, path)
    start = _expect(obj, "start", int, path)
    end = _expect(obj, "end", int, path)
    if not surface:
        raise SchemaViolation(f"{path}.surface", "surface must be non-empty")
    if start < 0 or start >= end:
        raise SchemaViolation(f"{path}.start", f"bad span [{start}, {end})")
    return Mention(surface=surface, span=Span(start, end))


def triple_from_wire(obj: dict, path: str) -> TextTriple:
    if not isinstance(obj, dict):
        raise SchemaViolation(path, "triple must be an object")
    return TextTriple(
        subject=mention_from_wire(_expect(obj, "subject", dict, path), f"{path}.subject"),
        predicate=mention_from_wire(_expect(obj, "predicate", dict, path), f"{path}.predicate"),
        object=mention_from_wire(_expect(obj, "object", dict, path), f"{path}.object"),
    )


def linked_term_from_wire(obj: dict, kg: str, path: str) -> LinkedTerm:
    mention = mention_from_wire(obj, path)
    confidence = obj.get("confidence", 0)
    if not isinstance(confidence, (int, float)) or isinstance(confidence, bool):
        raise SchemaViolation(f"{path}.confidence", "confidence must be a number")
    confidence = float(confidence)
    if not 0.0 <= confidence <= 1.0:
        raise SchemaViolation(f"{path}.confidence", f"confidence {confidence} outside [0, 1]")
    iri = obj.get("iri")
    if iri is None:
        if confidence != 0.0:
            raise SchemaViolation(f"{path}.confidence", "unlinked term must have confidence 0")
        return LinkedTerm.unlinked(mention)
    if not isinstance(iri, str):
        raise SchemaViolation(f"{path}.iri", "iri must be a string")
    try:
        ref = KGRef(iri=iri, kg=kg)
    except PlumberError as exc:
        raise SchemaViolation(f"{path}.iri", exc.message) from exc
    return LinkedTerm(mention=mention, ref=ref, confidence=confidence)


def aligned_from_wire(obj: dict, kg: str, path: str) -> AlignedTriple:
    if not isinstance(obj, dict):
        raise SchemaViolation(path, "aligned triple must be an object")
    return AlignedTriple(
        subject=linked_term_from_wire(_expect(obj, "subject", dict, path), kg, f"{path}.subject"),
        predicate=linked_term_from_wire(_expect(obj, "predicate", dict, path), kg, f"{path}.predicate"),
        object=linked_term_from_wire(_expect(obj, "object", dict, path), kg, f"{path}.object"),
    )


# ---------------------------------------------------------------------------
# payload serialization
# ---------------------------------------------------------------------------

def payload_to_dict(payload: InvocationPayload) -> dict:
    out = {"version": payload.version, "task": payload.task.value}
    if payload.text is not None:
        out["text"] = payload.text
    if payload.triples is not None:
        out["triples"] = [triple_to_wire(t) for t in payload.triples]
    if payload.kg is not None:
        out["kg"] = payload.kg
    return out


def serialize_payload(payload: InvocationPayload) -> bytes:
    return canonical_bytes(payload_to_dict(payload))


def parse_payload(data: bytes) -> InvocationPayload:
    obj = _parse_json(data)
    version = _expect(obj, "version", int, "")
    task_name = _expect(obj, "task", str, "")
    try:
        task = TaskKind(task_name)
    except ValueError:
        raise SchemaViolation("task", f"unknown task {task_name!r}") from None
    text = obj.get("text")
    if text is not None and not isinstance(text, str):
        raise SchemaViolation("text", "text must be a string")
    triples = None
    if "triples" in obj:
        raw = obj["triples"]
        if not isinstance(raw, list):
            raise SchemaViolation("triples", "triples must be an array")
        triples = tuple(
            triple_from_wire(t, f"triples[{i}]") for i, t in enumerate(raw)
        )
    kg = obj.get("kg")
    if kg is not None and not isinstance(kg, str):
        raise SchemaViolation("kg", "kg must be a string")
    return InvocationPayload(task=task, text=text, triples=triples, kg=kg, version=version)


# ---------------------------------------------------------------------------
# result validation
# ---------------------------------------------------------------------------

def validate_result_body(task: TaskKind, body: dict) -> dict:
    """Check a result body against the task schema; returns the body."""
    if not isinstance(body, dict):
        raise SchemaViolation("result", "result must be an object")
    if task is TaskKind.COREF:
        _expect(body, "text", str, "result")
        subs = _expect(body, "substitutions", list, "result")
        for i, sub in enumerate(subs):
            path = f"result.substitutions[{i}]"
            if not isinstance(sub, dict):
                raise SchemaViolation(path, "substitution must be an object")
            _expect(sub, "antecedent", str, path)
            for key in ("pronoun_start", "pronoun_end", "out_start", "out_end"):
                value = _expect(sub, key, int, path)
                if value < 0:
                    raise SchemaViolation(f"{path}.{key}", "offset must be non-negative")
            if sub["pronoun_start"] >= sub["pronoun_end"] or sub["out_start"] >= sub["out_end"]:
                raise SchemaViolation(path, "substitution spans must be non-empty")
    elif task is TaskKind.TRIPLE_EXTRACTION:
        raw = _expect(body, "triples", list, "result")
        for i, t in enumerate(raw):
            triple_from_wire(t, f"result.triples[{i}]")
    elif task in LINKING_TASKS:
        raw = _expect(body, "aligned", list, "result")
        for i, t in enumerate(raw):
            # kg is irrelevant to shape validation; IRIs must still be absolute
            aligned_from_wire(t, "wire", f"result.aligned[{i}]")
    else:  # pragma: no cover - TaskKind is closed
        raise SchemaViolation("task", f"unknown task {task}")
    return body


def serialize_result_body(body: dict) -> bytes:
    return canonical_bytes(body)


def parse_result(data: bytes, task: TaskKind, latency_ms: int = 0) -> InvocationResult:
    obj = _parse_json(data)
    status = obj.get("status")
    if status not in ("ok", "error"):
        raise SchemaViolation("status", "status must be 'ok' or 'error'")
    if status == "error":
        message = obj.get("message")
        if not isinstance(message, str) or not message:
            raise SchemaViolation("message", "error response requires a message")
        return InvocationResult(status="error", message=message, latency_ms=latency_ms)
    result = obj.get("result")
    if not isinstance(result, dict):
        raise SchemaViolation("result", "ok response requires a result object")
    validate_result_body(task, result)
    return InvocationResult(status="ok", result=result, latency_ms=latency_ms)


def _parse_json(data: bytes) -> dict:
    try:
        obj = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise SchemaViolation("body", f"not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise SchemaViolation("body", "top-level value must be an object")
    return obj


def _expect(obj: dict, key: str, kind, path: str):
    prefix = f"{path}.{key}" if path else key
    if key not in obj:
        raise SchemaViolation(prefix, "missing field")
    value = obj[key]
    if kind is int and isinstance(value, bool):
        raise SchemaViolation(prefix, "expected an integer")
    if not isinstance(value, kind):
        raise SchemaViolation(prefix, f"expected {kind.__name__}")
    return value
