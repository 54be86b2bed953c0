"""Provider-agnostic text generation with a deterministic offline mock.

Providers expose ``generate(request) -> GenerationResponse`` and a
``provider_id`` attribute. ``MockTextProvider`` makes every pipeline stage
runnable without network access: its output is a pure function of
(prompt, seed), so whole pipeline runs are byte-reproducible.
"""

from __future__ import annotations

import hashlib
import random
import re
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import requests

from . import prompts
from .errors import AuthError, ProviderError, ProviderTimeout

DEFAULT_MAX_OUTPUT_TOKENS = 1024
DEFAULT_MAX_RETRIES = 3


@dataclass(frozen=True)
class GenerationRequest:
    prompt: str
    temperature: float = 0.7
    max_output_tokens: int = DEFAULT_MAX_OUTPUT_TOKENS
    seed: int | None = None  # honored only by the mock provider

    def __post_init__(self):
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError(f"temperature out of range [0, 2]: {self.temperature}")
        if self.max_output_tokens <= 0:
            raise ValueError("max_output_tokens must be positive")


@dataclass(frozen=True)
class GenerationResponse:
    text: str
    provider_id: str
    latency_ms: int = 0


def _stable_digest(*parts: str) -> str:
    h = hashlib.sha256()
    for part in parts:
        h.update(part.encode("utf-8"))
        h.update(b"\x1f")
    return h.hexdigest()


class MockTextProvider:
    """Deterministic stand-in for an LLM, configured per pipeline stage.

    stage="query_gen": emits a seeded window of the document text plus a
      (prompt, seed)-specific marker token, so synthetic queries share terms
      with their source document and with nothing else.
    stage="intent": echoes the query's sentence segments, one per line.
    stage="hyde": emits a small JSON-ish document built from the query.
    """

    def __init__(self, stage: str = "query_gen"):
        if stage not in ("query_gen", "intent", "hyde"):
            raise ValueError(f"unknown mock stage: {stage!r}")
        self.stage = stage
        self.provider_id = f"mock:{stage}"

    def generate(self, request: GenerationRequest) -> GenerationResponse:
        seed = request.seed if request.seed is not None else 0
        if self.stage == "query_gen":
            text = self._query_gen(request.prompt, seed)
        elif self.stage == "intent":
            text = self._intent(request.prompt)
        else:
            text = self._hyde(request.prompt, seed)
        return GenerationResponse(text=text, provider_id=self.provider_id, latency_ms=0)

    def _query_gen(self, prompt: str, seed: int) -> str:
        doc = prompts.extract_document_slot(prompt)
        if doc is None:
            doc = prompt
        words = doc.split()
        rng = random.Random(int(_stable_digest(prompt, str(seed))[:16], 16))
        if len(words) > 12:
            start = rng.randrange(0, len(words) - 8)
            span = rng.randint(6, min(24, len(words) - start))
            words = words[start:start + span]
        marker = "q" + _stable_digest(prompt, str(seed))[:8]
        return " ".join(words + [marker])

    def _intent(self, prompt: str) -> str:
        query = prompts.extract_query_slot(prompt)
        if query is None:
            query = prompt
        segments = [s.strip() for s in re.split(r"(?<=[.!?;])\s+", query)]
        segments = [s.rstrip(".!?;").strip() for s in segments]
        segments = [s for s in segments if s]
        return "\n".join(segments)

    def _hyde(self, prompt: str, seed: int) -> str:
        query = prompts.extract_query_slot(prompt)
        if query is None:
            query = prompt
        marker = "h" + _stable_digest(prompt, str(seed))[:8]
        return (
            "{\n"
            f'    "api_name": "hypothetical_{marker}",\n'
            f'    "api_description": "Handle the request: {query}"\n'
            "}"
        )


class HttpTextProvider:
    """Chat-completions style HTTP client with bounded retries.

    Transient failures (timeouts, connection errors, 429/5xx) are retried up
    to ``max_retries`` times with exponential backoff; authentication errors
    (401/403) are never retried.
    """

    def __init__(self, endpoint: str, model: str, api_key: str | None = None,
                 timeout_s: float = 60.0, max_retries: int = DEFAULT_MAX_RETRIES,
                 backoff_s: float = 0.5, min_interval_s: float = 0.0):
        self.endpoint = endpoint
        self.model = model
        self.api_key = api_key
        self.timeout_s = timeout_s
        self.max_retries = max_retries
        self.backoff_s = backoff_s
        self.provider_id = f"http:{model}"
        self._session = requests.Session()
        # crude rate limiter shared across threads
        self._min_interval_s = min_interval_s
        self._last_call = 0.0
        self._lock = threading.Lock()

    def _throttle(self):
        if self._min_interval_s <= 0:
            return
        with self._lock:
            wait = self._last_call + self._min_interval_s - time.monotonic()
            if wait > 0:
                time.sleep(wait)
            self._last_call = time.monotonic()

    def generate(self, request: GenerationRequest) -> GenerationResponse:
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        body = {
            "model": self.model,
            "messages": [{"role": "user", "content": request.prompt}],
            "temperature": request.temperature,
            "max_tokens": request.max_output_tokens,
        }
        start = time.monotonic()
        last_error: Exception | None = None
        for attempt in range(self.max_retries + 1):
            if attempt:
                time.sleep(self.backoff_s * 2 ** (attempt - 1))
            self._throttle()
            try:
                resp = self._session.post(self.endpoint, json=body, headers=headers,
                                          timeout=self.timeout_s)
            except requests.Timeout as exc:
                last_error = ProviderTimeout(f"request timed out: {exc}")
                continue
            except requests.RequestException as exc:
                last_error = ProviderError(f"request failed: {exc}")
                continue
            if resp.status_code in (401, 403):
                raise AuthError(f"authentication failed (HTTP {resp.status_code})")
            if resp.status_code == 429 or resp.status_code >= 500:
                last_error = ProviderError(f"HTTP {resp.status_code}: {resp.text[:200]}")
                continue
            if resp.status_code != 200:
                raise ProviderError(f"HTTP {resp.status_code}: {resp.text[:200]}")
            try:
                text = resp.json()["choices"][0]["message"]["content"]
            except (ValueError, KeyError, IndexError, TypeError) as exc:
                raise ProviderError(f"malformed response body: {exc}") from exc
            latency = int((time.monotonic() - start) * 1000)
            return GenerationResponse(text=text or "", provider_id=self.provider_id,
                                      latency_ms=latency)
        raise last_error if last_error is not None else ProviderError("no attempt made")


def generate(request: GenerationRequest, provider) -> GenerationResponse:
    """Run one completion through the given provider."""
    return provider.generate(request)


@dataclass
class BatchResult:
    """Order-preserving batch outcome: responses[i] answers requests[i]."""

    responses: list[GenerationResponse | None]
    failures: dict[int, str] = field(default_factory=dict)

    @property
    def failed_indices(self) -> list[int]:
        return sorted(self.failures)

    def raise_on_failure(self):
        if self.failures:
            detail = "; ".join(f"[{i}] {msg}" for i, msg in sorted(self.failures.items()))
            raise ProviderError(f"{len(self.failures)} request(s) failed: {detail}")


def generate_many(requests_: list[GenerationRequest], provider,
                  parallelism: int = 4) -> BatchResult:
    """Run a batch of completions with bounded in-flight requests.

    Responses come back in request order regardless of completion order;
    failures are reported per index instead of aborting the batch.
    """
    if parallelism < 1:
        raise ValueError("parallelism must be >= 1")
    result = BatchResult(responses=[None] * len(requests_))
    if not requests_:
        return result
    with ThreadPoolExecutor(max_workers=parallelism) as pool:
        futures = {pool.submit(provider.generate, req): i
                   for i, req in enumerate(requests_)}
        for future, i in futures.items():
            try:
                result.responses[i] = future.result()
            except Exception as exc:  # noqa: BLE001 - collected per index
                result.failures[i] = f"{type(exc).__name__}: {exc}"
    return result
