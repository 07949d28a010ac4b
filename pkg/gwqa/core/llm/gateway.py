# Copyright (c) 2026, Fundacion Dr. Manuel Sadosky
# All rights reserved.
#
# Use of this source code is governed by the BSD 2-Clause license found in
# the LICENSE file.

"""
LLM Gateway.

A uniform chat-completion interface over two providers:

    http : the chat-completions HTTP JSON protocol (messages, temperature,
           max_tokens), e.g. `POST {endpoint}/chat/completions`
    stub : a deterministic scripted provider, keyed by request fingerprint

Transient failures (rate limits, timeouts) are retried with exponential
backoff; every other provider error surfaces immediately.

"""
import hashlib
import json
import logging
import threading
import time

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import httpx

from tenacity import Retrying
from tenacity import before_sleep_log
from tenacity import retry_if_exception_type
from tenacity import stop_after_attempt
from tenacity import wait_exponential
from tenacity import wait_random

from gwqa.config import DEFAULT_MAX_IN_FLIGHT
from gwqa.config import DEFAULT_MAX_RETRIES
from gwqa.config import DEFAULT_TEMPERATURE
from gwqa.config import ProviderConfigError
from gwqa.core.context.tokens import ApproximateTokenCounter

logger = logging.getLogger(__name__)

DEFAULT_STUB_RESPONSE = "FINAL ANSWER: I don't know"


class GatewayError(Exception):
    pass


class AuthenticationError(GatewayError):
    pass


class RateLimitError(GatewayError):
    pass


class ProviderTimeoutError(GatewayError):
    pass


class ProviderUnavailableError(GatewayError):
    pass


class ProtocolError(GatewayError):
    pass


RETRYABLE_ERRORS = (RateLimitError, ProviderTimeoutError, ProviderUnavailableError)


def fingerprint(model, system, user):
    """Return the fingerprint of a request: sha256 of model and prompt text.
    """
    data = "\x1f".join([model or "", system or "", user or ""]).encode("utf-8")

    return hashlib.sha256(data).hexdigest()


@dataclass(frozen=True)
class ChatRequest:
    bundle: object
    model: str
    temperature: float = DEFAULT_TEMPERATURE
    max_output_tokens: int = None

    def __post_init__(self):
        if self.temperature < 0:
            raise ValueError("temperature must be non-negative")

    @property
    def output_limit(self):
        if self.max_output_tokens is not None:
            return self.max_output_tokens

        return self.bundle.max_output_tokens

    @property
    def fingerprint(self):
        return fingerprint(self.model, self.bundle.system, self.bundle.user)


@dataclass(frozen=True)
class ChatResponse:
    text: str
    prompt_tokens: int
    completion_tokens: int
    latency_ms: int
    provider: str


class ChatProvider(object):
    """Chat provider base class.
    """

    name = "base"

    def send(self, request):
        """Send a request and return a ChatResponse. Raise a GatewayError
        subclass on failure.
        """
        raise NotImplementedError()

    def close(self):
        pass


class HttpChatProvider(ChatProvider):
    """Chat-completions HTTP JSON provider.
    """

    name = "http"

    def __init__(self, settings, transport=None):
        super(HttpChatProvider, self).__init__()

        if not settings.endpoint:
            raise ProviderConfigError("no provider endpoint configured")

        headers = {"Content-Type": "application/json"}

        if settings.api_key:
            headers["Authorization"] = "Bearer " + settings.api_key

        self._settings = settings
        self._client = httpx.Client(
            base_url=settings.endpoint.rstrip("/"),
            headers=headers,
            timeout=settings.timeout,
            transport=transport,
        )

    def send(self, request):
        payload = {
            "model": request.model,
            "messages": request.bundle.messages(),
            "temperature": request.temperature,
            "max_tokens": request.output_limit,
        }

        start = time.monotonic()

        try:
            reply = self._client.post("/chat/completions", json=payload)
        except httpx.TimeoutException as e:
            raise ProviderTimeoutError(str(e)) from e
        except httpx.NetworkError as e:
            raise ProviderUnavailableError("provider unreachable: {}".format(e)) from e
        except httpx.TransportError as e:
            raise ProtocolError("transport error: {}".format(e)) from e

        latency_ms = int((time.monotonic() - start) * 1000)

        if reply.status_code in (401, 403):
            raise AuthenticationError("provider rejected credentials (HTTP {})".format(reply.status_code))

        if reply.status_code == 429:
            raise RateLimitError("rate limited (HTTP 429)")

        if reply.status_code in (408, 504):
            raise ProviderTimeoutError("provider timeout (HTTP {})".format(reply.status_code))

        if reply.status_code in (500, 502, 503):
            raise ProviderUnavailableError("provider unavailable (HTTP {})".format(reply.status_code))

        if reply.status_code != 200:
            raise ProtocolError("unexpected HTTP status {}: {}".format(reply.status_code, reply.text[:200]))

        return self._parse_reply(reply, latency_ms)

    def _parse_reply(self, reply, latency_ms):
        try:
            data = reply.json()
            text = data["choices"][0]["message"]["content"]
            usage = data.get("usage") or {}

            prompt_tokens = int(usage.get("prompt_tokens", 0))
            completion_tokens = int(usage.get("completion_tokens", 0))
        except (ValueError, KeyError, IndexError, TypeError) as e:
            raise ProtocolError("malformed provider reply: {}".format(e)) from e

        if not isinstance(text, str) or prompt_tokens < 0 or completion_tokens < 0:
            raise ProtocolError("malformed provider reply")

        return ChatResponse(text, prompt_tokens, completion_tokens, latency_ms, self.name)

    def close(self):
        self._client.close()


@dataclass(frozen=True)
class StubCall:
    fingerprint: str
    variant: str
    start: float
    end: float


class StubProvider(ChatProvider):
    """Deterministic scripted provider.

    Responses are looked up by request fingerprint; unscripted requests get
    the default response. A `responder` callable, when given, is consulted
    before the default. Calls are recorded with their timestamps.
    """

    name = "stub"

    def __init__(self, script=None, default_response=DEFAULT_STUB_RESPONSE, responder=None,
                 counter=None, delay=0.0):
        super(StubProvider, self).__init__()

        self._script = dict(script or {})
        self._default_response = default_response
        self._responder = responder
        self._counter = counter if counter is not None else ApproximateTokenCounter()
        self._delay = delay

        self._lock = threading.Lock()
        self._calls = []
        self._in_flight = 0
        self._max_in_flight = 0

    @property
    def calls(self):
        with self._lock:
            return list(self._calls)

    @property
    def max_concurrency(self):
        """Concurrent-call high-water mark.
        """
        with self._lock:
            return self._max_in_flight

    def response_for(self, request):
        key = request.fingerprint

        if key in self._script:
            return self._script[key]

        if self._responder is not None:
            text = self._responder(request)

            if text is not None:
                return text

        return self._default_response

    def send(self, request):
        with self._lock:
            self._in_flight += 1
            self._max_in_flight = max(self._max_in_flight, self._in_flight)

        start = time.monotonic()

        try:
            if self._delay:
                time.sleep(self._delay)

            text = self.response_for(request)
        finally:
            end = time.monotonic()

            with self._lock:
                self._in_flight -= 1
                self._calls.append(StubCall(request.fingerprint, request.bundle.variant, start, end))

        prompt_tokens = self._counter.count(request.bundle.system + "\n" + request.bundle.user)
        completion_tokens = self._counter.count(text)

        return ChatResponse(text, prompt_tokens, completion_tokens, int((end - start) * 1000), self.name)

    @classmethod
    def from_file(cls, path, **kwargs):
        """Load a stub script from a JSONL file of {"fingerprint", "response"}.
        """
        script = {}

        with open(path, "r", encoding="utf-8") as f:
            for line in f:
                if line.strip():
                    record = json.loads(line)
                    script[record["fingerprint"]] = record["response"]

        logger.info("Loaded %d scripted responses from %s", len(script), path)

        return cls(script, **kwargs)

    @classmethod
    def from_transcripts(cls, path, **kwargs):
        """Build a stub that replays a recorded transcript log.
        """
        return cls.from_file(path, **kwargs)


class RunAccounting(object):
    """Thread-safe per-run call and token totals.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._calls = 0
        self._prompt_tokens = 0
        self._completion_tokens = 0
        self._by_variant = {}

    def add(self, variant, response):
        with self._lock:
            self._calls += 1
            self._prompt_tokens += response.prompt_tokens
            self._completion_tokens += response.completion_tokens
            self._by_variant[variant] = self._by_variant.get(variant, 0) + 1

    @property
    def calls(self):
        return self._calls

    @property
    def prompt_tokens(self):
        return self._prompt_tokens

    @property
    def completion_tokens(self):
        return self._completion_tokens

    def to_dict(self, settings=None):
        with self._lock:
            totals = {
                "calls": self._calls,
                "prompt_tokens": self._prompt_tokens,
                "completion_tokens": self._completion_tokens,
                "calls_by_variant": dict(sorted(self._by_variant.items())),
            }

        if settings is not None:
            totals["cost"] = settings.cost(totals["prompt_tokens"], totals["completion_tokens"])

        return totals


class TranscriptLog(object):
    """Append-only transcripts.jsonl writer.
    """

    def __init__(self, path):
        self._path = path
        self._lock = threading.Lock()

        open(path, "w", encoding="utf-8").close()

    @property
    def path(self):
        return self._path

    def record(self, request, response):
        record = {
            "fingerprint": request.fingerprint,
            "model": request.model,
            "prompt": {"system": request.bundle.system, "user": request.bundle.user},
            "response": response.text,
            "prompt_tokens": response.prompt_tokens,
            "completion_tokens": response.completion_tokens,
        }

        line = json.dumps(record, ensure_ascii=False) + "\n"

        with self._lock:
            with open(self._path, "a", encoding="utf-8") as f:
                f.write(line)


class LlmGateway(object):
    """Retrying, accounting front end of a chat provider. Shareable across
    threads.
    """

    def __init__(self, provider, max_retries=DEFAULT_MAX_RETRIES, wait=None, transcripts=None):
        self._provider = provider
        self._max_retries = max_retries
        # 1s, 2s, 4s plus up to half a second of jitter.
        self._wait = wait if wait is not None else wait_exponential(multiplier=1, min=1, max=4) + wait_random(0, 0.5)
        self._transcripts = transcripts
        self._accounting = RunAccounting()

    @property
    def provider(self):
        return self._provider

    @property
    def accounting(self):
        return self._accounting

    def complete(self, request):
        """Send one request, retrying transient failures.
        """
        retrying = Retrying(
            stop=stop_after_attempt(self._max_retries + 1),
            wait=self._wait,
            retry=retry_if_exception_type(RETRYABLE_ERRORS),
            before_sleep=before_sleep_log(logger, logging.WARNING),
            reraise=True,
        )

        logger.debug("Request %s (%s)", request.fingerprint[:12], request.bundle.variant)

        for attempt in retrying:
            with attempt:
                response = self._provider.send(request)

        self._accounting.add(request.bundle.variant, response)

        if self._transcripts is not None:
            self._transcripts.record(request, response)

        return response

    def complete_batch(self, requests, max_in_flight=DEFAULT_MAX_IN_FLIGHT):
        """Send requests concurrently. Return responses in request order;
        a failed request's slot holds its exception.
        """
        if max_in_flight < 1:
            raise ValueError("max_in_flight must be at least 1")

        requests = list(requests)

        if not requests:
            return []

        with ThreadPoolExecutor(max_workers=max_in_flight) as executor:
            futures = [executor.submit(self.complete, request) for request in requests]

        results = []

        for future in futures:
            try:
                results.append(future.result())
            except Exception as e:
                logger.error("Batch request failed: %s", e, exc_info=True)

                results.append(e)

        return results

    def close(self):
        self._provider.close()
