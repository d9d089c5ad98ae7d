"""Text-generation backends.

Two implementations share one interface, ``complete(request) -> response``:
:class:`HTTPBackend` speaks the generic chat-completion protocol, and
:class:`MockBackend` returns scripted responses for tests and demos.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import socket
import time
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from typing import Mapping, Optional, Protocol, Sequence, Union

from .errors import (
    BackendError,
    BackendTimeout,
    EmptyCompletion,
    RateLimited,
    Transport,
)

logger = logging.getLogger(__name__)

DEFAULT_API_KEY_ENV = "TABTX_API_KEY"


@dataclass(frozen=True)
class GenerationParams:
    temperature: float = 0.0
    max_tokens: int = 512
    stop_sequences: tuple[str, ...] = ()
    timeout: float = 60.0
    retries: int = 2

    def __post_init__(self):
        if self.max_tokens < 1:
            raise ValueError("max_tokens must be positive")
        if self.retries < 0:
            raise ValueError("retries must be non-negative")


@dataclass(frozen=True)
class BackendRequest:
    prompt: str
    params: GenerationParams = field(default_factory=GenerationParams)
    # routing hints, used by the mock backend and for logging
    document_id: Optional[str] = None
    step: Optional[str] = None
    attempt: int = 0

    @property
    def prompt_hash(self) -> str:
        return hashlib.sha256(self.prompt.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class BackendResponse:
    text: str
    prompt_tokens: int = 0
    completion_tokens: int = 0
    latency: float = 0.0


class Backend(Protocol):
    def complete(self, request: BackendRequest) -> BackendResponse: ...


def complete_with_retries(
    backend: Backend, request: BackendRequest, backoff: float = 0.5
) -> BackendResponse:
    """Call ``backend`` up to ``1 + request.params.retries`` times.

    Only transient failures (timeouts, rate limits, transport errors) are
    retried; the last error is re-raised once attempts run out.
    """
    if not request.prompt.strip():
        raise ValueError("empty prompt")
    attempts = request.params.retries + 1
    for i in range(attempts):
        try:
            return backend.complete(request)
        except BackendError as exc:
            if not exc.retryable or i == attempts - 1:
                raise
            logger.warning("backend attempt %d/%d failed: %s", i + 1, attempts, exc)
            if backoff:
                time.sleep(backoff * 2**i)
    raise AssertionError("unreachable")


# -- scripted mock ---------------------------------------------------------------

Scripted = Union[str, Sequence[str]]


class MockBackend:
    """Deterministic backend answering from a response map.

    Lookup order for a request: the flat key ``"<doc id>/<step>"``; the
    document id, whose value is either a ``{step: response}`` mapping or a
    plain response used for the generation step; then the sha256 of the
    prompt. A response may be a list, indexed by ``request.attempt`` (the
    last item repeats). With no match the backend falls back to
    ``fallback``: ``"echo"`` returns the last non-empty prompt line,
    ``"error"`` raises EmptyCompletion.
    """

    def __init__(self, responses: Optional[Mapping[str, Scripted]] = None, fallback: str = "echo"):
        if fallback not in ("echo", "error"):
            raise ValueError("fallback must be 'echo' or 'error'")
        self.responses = dict(responses or {})
        self.fallback = fallback

    @classmethod
    def from_file(cls, path, fallback: str = "echo") -> "MockBackend":
        with open(path, encoding="utf-8") as fh:
            return cls(json.load(fh), fallback)

    def _lookup(self, request: BackendRequest) -> Optional[Scripted]:
        doc, step = request.document_id, request.step
        if doc is not None:
            if step and f"{doc}/{step}" in self.responses:
                return self.responses[f"{doc}/{step}"]
            entry = self.responses.get(doc)
            if isinstance(entry, Mapping):
                if step in entry:
                    return entry[step]
            elif entry is not None and step in (None, "generation"):
                return entry
        return self.responses.get(request.prompt_hash)

    def complete(self, request: BackendRequest) -> BackendResponse:
        scripted = self._lookup(request)
        if scripted is None:
            if self.fallback == "error":
                raise EmptyCompletion(f"no scripted response for {request.document_id}/{request.step}")
            lines = [ln for ln in request.prompt.splitlines() if ln.strip()]
            text = lines[-1].strip() if lines else ""
        elif isinstance(scripted, str):
            text = scripted
        else:
            text = scripted[min(request.attempt, len(scripted) - 1)]
        if not text.strip():
            raise EmptyCompletion("scripted response is empty")
        return BackendResponse(
            text=text,
            prompt_tokens=len(request.prompt.split()),
            completion_tokens=len(text.split()),
        )


# -- HTTP chat completion -------------------------------------------------------


class HTTPBackend:
    """POST ``{model, messages, temperature, max_tokens}`` to a chat endpoint."""

    def __init__(
        self,
        endpoint: str,
        model: str,
        api_key_env: str = DEFAULT_API_KEY_ENV,
        system_prompt: Optional[str] = None,
    ):
        self.endpoint = endpoint
        self.model = model
        self.api_key_env = api_key_env
        self.system_prompt = system_prompt

    def payload(self, request: BackendRequest) -> dict:
        messages = []
        if self.system_prompt:
            messages.append({"role": "system", "content": self.system_prompt})
        messages.append({"role": "user", "content": request.prompt})
        body = {
            "model": self.model,
            "messages": messages,
            "temperature": request.params.temperature,
            "max_tokens": request.params.max_tokens,
        }
        if request.params.stop_sequences:
            body["stop"] = list(request.params.stop_sequences)
        return body

    def _headers(self) -> dict[str, str]:
        headers = {"Content-Type": "application/json"}
        token = os.environ.get(self.api_key_env)
        if token:
            headers["Authorization"] = f"Bearer {token}"
        return headers

    def complete(self, request: BackendRequest) -> BackendResponse:
        data = json.dumps(self.payload(request)).encode("utf-8")
        req = urllib.request.Request(self.endpoint, data=data, headers=self._headers(), method="POST")
        start = time.monotonic()
        try:
            with urllib.request.urlopen(req, timeout=request.params.timeout) as resp:
                raw = resp.read()
        except urllib.error.HTTPError as exc:
            if exc.code == 429:
                raise RateLimited(f"{self.endpoint}: HTTP 429") from None
            raise Transport(f"{self.endpoint}: HTTP {exc.code}") from None
        except (socket.timeout, TimeoutError) as exc:
            raise BackendTimeout(f"{self.endpoint}: {exc}") from None
        except urllib.error.URLError as exc:
            if isinstance(exc.reason, (socket.timeout, TimeoutError)):
                raise BackendTimeout(f"{self.endpoint}: {exc.reason}") from None
            raise Transport(f"{self.endpoint}: {exc.reason}") from None
        except OSError as exc:
            raise Transport(f"{self.endpoint}: {exc}") from None
        latency = time.monotonic() - start

        try:
            body = json.loads(raw)
            choice = body["choices"][0]
            text = (choice.get("message") or {}).get("content")
            if text is None:
                text = choice.get("text", "")
        except (ValueError, KeyError, IndexError, TypeError, AttributeError):
            raise Transport(f"{self.endpoint}: unexpected response shape") from None
        if not text or not text.strip():
            raise EmptyCompletion(f"{self.endpoint}: empty completion")
        usage = body.get("usage") or {}
        return BackendResponse(
            text=text,
            prompt_tokens=int(usage.get("prompt_tokens", 0)),
            completion_tokens=int(usage.get("completion_tokens", 0)),
            latency=latency,
        )
