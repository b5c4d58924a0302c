import json
import random

import pytest

from plumber.model import Mention, Span, TextTriple
from plumber.registry import TaskKind
from plumber.wire import (
    InvocationPayload,
    InvocationResult,
    SchemaViolation,
    parse_payload,
    parse_result,
    serialize_payload,
    validate_result_body,
)


def make_triple(a="Einstein", b="developed", c="relativity"):
    text = f"{a} {b} {c}"
    return TextTriple(
        subject=Mention.at(text, 0, len(a)),
        predicate=Mention.at(text, len(a) + 1, len(a) + 1 + len(b)),
        object=Mention.at(text, len(a) + len(b) + 2, len(text)),
    )


def random_payload(rng) -> InvocationPayload:
    task = rng.choice(list(TaskKind))
    if task in (TaskKind.COREF, TaskKind.TRIPLE_EXTRACTION):
        words = ["Einstein", "developed", "relativity", "Ulm", "wrote", "ideas", "中文"]
        text = " ".join(rng.choice(words) for _ in range(rng.randrange(1, 12)))
        return InvocationPayload(task=task, text=text)
    triples = tuple(
        make_triple(rng.choice(["Einstein", "Curie"]), rng.choice(["developed", "won"]),
                    rng.choice(["relativity", "polonium", "prizes"]))
        for _ in range(rng.randrange(0, 4))
    )
    return InvocationPayload(task=task, triples=triples, kg=rng.choice(["toykg", "dbpedia"]))


class TestPayloadInvariants:
    def test_coref_requires_text(self):
        with pytest.raises(SchemaViolation):
            InvocationPayload(task=TaskKind.COREF)

    def test_text_tasks_reject_triples(self):
        with pytest.raises(SchemaViolation):
            InvocationPayload(task=TaskKind.COREF, text="x", triples=(make_triple(),))

    def test_linking_requires_triples_and_kg(self):
        with pytest.raises(SchemaViolation):
            InvocationPayload(task=TaskKind.ENTITY_LINKING, triples=(make_triple(),))

    def test_unknown_version_rejected(self):
        with pytest.raises(SchemaViolation) as err:
            InvocationPayload(task=TaskKind.COREF, text="x", version=2)
        assert "version" in err.value.path


class TestCanonicalSerialization:
    def test_round_trip_identity(self):
        rng = random.Random(19)
        for _ in range(200):
            payload = random_payload(rng)
            assert parse_payload(serialize_payload(payload)) == payload

    def test_field_order_does_not_change_bytes(self):
        payload = InvocationPayload(
            task=TaskKind.ENTITY_LINKING, triples=(make_triple(),), kg="toykg"
        )
        canonical = serialize_payload(payload)
        obj = json.loads(canonical.decode())
        shuffled = json.dumps(obj, sort_keys=False, indent=3).encode()
        reparsed = parse_payload(shuffled)
        assert serialize_payload(reparsed) == canonical

    def test_no_insignificant_whitespace_and_sorted_keys(self):
        payload = InvocationPayload(task=TaskKind.COREF, text="a b")
        raw = serialize_payload(payload).decode()
        assert " " not in raw.replace("a b", "")
        obj = json.loads(raw)
        assert list(obj) == sorted(obj)

    def test_distinct_payloads_distinct_bytes(self):
        rng = random.Random(29)
        seen = {}
        for _ in range(200):
            payload = random_payload(rng)
            data = serialize_payload(payload)
            if data in seen:
                assert seen[data] == payload
            seen[data] = payload


class TestResultParsing:
    def test_ok_extraction(self):
        body = {"status": "ok", "result": {"triples": []}}
        result = parse_result(json.dumps(body).encode(), TaskKind.TRIPLE_EXTRACTION, 12)
        assert result.status == "ok"
        assert result.latency_ms == 12

    def test_missing_status(self):
        with pytest.raises(SchemaViolation) as err:
            parse_result(b'{"result": {}}', TaskKind.COREF)
        assert "status" in err.value.path

    def test_error_requires_message(self):
        with pytest.raises(SchemaViolation):
            parse_result(b'{"status": "error"}', TaskKind.COREF)
        result = parse_result(b'{"status": "error", "message": "boom"}', TaskKind.COREF)
        assert result.message == "boom"

    def test_confidence_out_of_bounds(self):
        body = {
            "status": "ok",
            "result": {
                "aligned": [
                    {
                        "subject": {"surface": "a", "start": 0, "end": 1, "confidence": 1.5},
                        "predicate": {"surface": "b", "start": 2, "end": 3, "confidence": 0},
                        "object": {"surface": "c", "start": 4, "end": 5, "confidence": 0},
                    }
                ]
            },
        }
        with pytest.raises(SchemaViolation) as err:
            parse_result(json.dumps(body).encode(), TaskKind.ENTITY_LINKING)
        assert "confidence" in err.value.path

    def test_unlinked_with_nonzero_confidence_rejected(self):
        term = {"surface": "a", "start": 0, "end": 1, "confidence": 0.4}
        body = {"aligned": [{"subject": term, "predicate": term, "object": term}]}
        with pytest.raises(SchemaViolation):
            validate_result_body(TaskKind.JOINT_LINKING, body)

    def test_not_json(self):
        with pytest.raises(SchemaViolation):
            parse_result(b"<html>oops</html>", TaskKind.COREF)

    def test_coref_substitution_schema(self):
        good = {
            "text": "x",
            "substitutions": [
                {"pronoun_start": 0, "pronoun_end": 2, "antecedent": "A",
                 "out_start": 0, "out_end": 1}
            ],
        }
        validate_result_body(TaskKind.COREF, good)
        bad = {"text": "x", "substitutions": [{"pronoun_start": 0}]}
        with pytest.raises(SchemaViolation):
            validate_result_body(TaskKind.COREF, bad)

    def test_result_invariants(self):
        with pytest.raises(SchemaViolation):
            InvocationResult(status="ok", result=None)
        with pytest.raises(SchemaViolation):
            InvocationResult(status="error", message=None)
        with pytest.raises(SchemaViolation):
            InvocationResult(status="ok", result={}, latency_ms=-1)
