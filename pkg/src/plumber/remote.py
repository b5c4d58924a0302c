"""HTTP invocation of out-of-process components.

Components run behind `POST {endpoint}/invoke` with JSON bodies; a failing
component can only ever surface here as a typed error, never as partial
framework state. Connection failures are retried exactly once; timeouts
and malformed responses are not, since slow NLP services are the common
failure mode and a retry just doubles the wait.
"""

from __future__ import annotations

import threading
import time

import requests

from .errors import PlumberError
from .registry import ComponentDescriptor
from .wire import InvocationPayload, InvocationResult, parse_result, serialize_payload

DEFAULT_TIMEOUT_MS = 30_000
CONNECT_BUDGET_MS = 5_000
MAX_CONCURRENT_PER_ENDPOINT = 8


class Timeout(PlumberError):
    code = "timeout"

    def __init__(self, timeout_ms: int):
        super().__init__(f"component did not answer within {timeout_ms} ms")
        self.timeout_ms = timeout_ms


class ConnectionFailed(PlumberError):
    code = "connection_failed"


class ComponentError(PlumberError):
    code = "component_error"


class RemoteInvoker:
    def __init__(
        self,
        session: requests.Session | None = None,
        max_concurrent_per_endpoint: int = MAX_CONCURRENT_PER_ENDPOINT,
    ):
        self._session = session or requests.Session()
        self._max_concurrent = max_concurrent_per_endpoint
        self._semaphores: dict[str, threading.Semaphore] = {}
        self._lock = threading.Lock()

    def invoke(
        self,
        desc: ComponentDescriptor,
        payload: InvocationPayload,
        timeout_ms: int | None = None,
    ) -> InvocationResult:
        if desc.target.kind != "remote":
            raise ValueError(f"component {desc.id!r} is not remote")
        timeout_ms = timeout_ms or desc.timeout_ms or DEFAULT_TIMEOUT_MS
        url = desc.target.ref.rstrip("/") + "/invoke"
        body = serialize_payload(payload)
        read_s = timeout_ms / 1000.0
        connect_s = min(read_s, CONNECT_BUDGET_MS / 1000.0)

        with self._semaphore(url):
            started = time.perf_counter()
            attempts = 0
            while True:
                attempts += 1
                try:
                    response = self._session.post(
                        url,
                        data=body,
                        headers={"Content-Type": "application/json"},
                        timeout=(connect_s, read_s),
                    )
                    break
                except requests.exceptions.Timeout as exc:
                    raise Timeout(timeout_ms) from exc
                except requests.exceptions.ConnectionError as exc:
                    if attempts > 1:
                        raise ConnectionFailed(f"cannot reach {url}: {exc}") from exc
                    # retry exactly once on connection failure
            latency_ms = int((time.perf_counter() - started) * 1000)

        result = parse_result(response.content, payload.task, latency_ms=latency_ms)
        if result.status == "error":
            raise ComponentError(result.message)
        return result

    def _semaphore(self, url: str) -> threading.Semaphore:
        with self._lock:
            if url not in self._semaphores:
                self._semaphores[url] = threading.Semaphore(self._max_concurrent)
            return self._semaphores[url]


_default_invoker: RemoteInvoker | None = None


def invoke_remote(
    desc: ComponentDescriptor,
    payload: InvocationPayload,
    timeout_ms: int | None = None,
) -> InvocationResult:
    global _default_invoker
    if _default_invoker is None:
        _default_invoker = RemoteInvoker()
    return _default_invoker.invoke(desc, payload, timeout_ms)
