import time

import pytest

from plumber.registry import ComponentDescriptor, Target, TaskKind
from plumber.remote import (
    ComponentError,
    ConnectionFailed,
    RemoteInvoker,
    Timeout,
)
from plumber.wire import SchemaViolation, InvocationPayload

from test_wire import make_triple


def remote_desc(endpoint, task=TaskKind.ENTITY_LINKING, timeout_ms=None):
    kgs = frozenset({"toykg"}) if task.value.endswith("linking") else frozenset()
    return ComponentDescriptor(
        id="remote-under-test",
        name="remote",
        task=task,
        kgs=kgs,
        target=Target(kind="remote", ref=endpoint),
        timeout_ms=timeout_ms,
    )


def linking_payload():
    return InvocationPayload(
        task=TaskKind.ENTITY_LINKING, triples=(make_triple(),), kg="toykg"
    )


class TestInvokeRemote:
    def test_echo_round_trips_triples(self, mock_server):
        invoker = RemoteInvoker()
        payload = linking_payload()
        result = invoker.invoke(remote_desc(mock_server.endpoint("echo")), payload)
        assert result.status == "ok"
        aligned = result.result["aligned"]
        assert len(aligned) == 1
        assert aligned[0]["subject"]["surface"] == payload.triples[0].subject.surface
        assert "iri" not in aligned[0]["subject"]
        assert result.latency_ms >= 0

    def test_component_error_surfaces(self, mock_server):
        invoker = RemoteInvoker()
        with pytest.raises(ComponentError, match="injected failure"):
            invoker.invoke(remote_desc(mock_server.endpoint("error")), linking_payload())

    def test_timeout_not_retried(self, mock_server):
        invoker = RemoteInvoker()
        started = time.perf_counter()
        with pytest.raises(Timeout):
            invoker.invoke(
                remote_desc(mock_server.endpoint("slow"), timeout_ms=300),
                linking_payload(),
            )
        elapsed = time.perf_counter() - started
        assert elapsed < 2.0  # one attempt only; no retry doubling

    def test_malformed_response(self, mock_server):
        invoker = RemoteInvoker()
        with pytest.raises(SchemaViolation):
            invoker.invoke(remote_desc(mock_server.endpoint("malformed")), linking_payload())

    def test_missing_status_field(self, mock_server):
        invoker = RemoteInvoker()
        with pytest.raises(SchemaViolation) as err:
            invoker.invoke(remote_desc(mock_server.endpoint("nostatus")), linking_payload())
        assert "status" in err.value.path

    def test_confidence_bound_enforced(self, mock_server):
        invoker = RemoteInvoker()
        with pytest.raises(SchemaViolation) as err:
            invoker.invoke(remote_desc(mock_server.endpoint("badconfidence")), linking_payload())
        assert "confidence" in err.value.path

    def test_connection_refused_after_retry(self):
        invoker = RemoteInvoker()
        with pytest.raises(ConnectionFailed):
            invoker.invoke(
                remote_desc("http://127.0.0.1:9", timeout_ms=500), linking_payload()
            )

    def test_single_retry_recovers_one_drop(self, mock_server):
        mock_server.reset()
        invoker = RemoteInvoker()
        result = invoker.invoke(remote_desc(mock_server.endpoint("flaky1")), linking_payload())
        assert result.status == "ok"

    def test_single_retry_does_not_recover_two_drops(self, mock_server):
        mock_server.reset()
        invoker = RemoteInvoker()
        with pytest.raises(ConnectionFailed):
            invoker.invoke(remote_desc(mock_server.endpoint("flaky2")), linking_payload())

    def test_rejects_native_descriptor(self):
        desc = ComponentDescriptor(
            id="native-x",
            name="x",
            task=TaskKind.COREF,
            kgs=frozenset(),
            target=Target(kind="native", ref="coref-identity"),
        )
        with pytest.raises(ValueError):
            RemoteInvoker().invoke(desc, InvocationPayload(task=TaskKind.COREF, text="x"))
