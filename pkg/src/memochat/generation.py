"""Text-generation providers and strict parsing of their output.

Providers speak one wire grammar: one suggestion per line as
``<level>|<text>``, optionally followed by a trailing ``tags: a, b, c``
line. A deterministic mock provider covers all automated testing; the HTTP
provider talks to any chat-completion style JSON endpoint. Completion calls
retry transient failures with exponential backoff and respect an optional
token-bucket rate limit.
"""

from __future__ import annotations

import hashlib
import logging
import os
import threading
import time
from dataclasses import dataclass
from typing import Callable, Protocol

import httpx

from .errors import (
    InvalidArgument,
    ProviderOverloaded,
    ProviderRefusal,
    ProviderTimeout,
    RetriesExhausted,
    UnparseableOutput,
)
from .model import Closeness, Suggestion, SuggestionSet
from .prompts import PromptBundle, PromptTask

logger = logging.getLogger(__name__)

TOKEN_ENV_VAR = "SOCIALIZE_PROVIDER_TOKEN"
MAX_SUGGESTIONS = 4
MAX_TAGS = 6

_LEVEL_ALIASES = {
    "average": Closeness.AVERAGE,
    "familiar": Closeness.FAMILIAR,
    "veryfamiliar": Closeness.VERY_FAMILIAR,
}


@dataclass(frozen=True)
class ProviderConfig:
    kind: str = "mock"                  # "mock" | "http"
    base_url: str = ""
    model: str = ""
    timeout_s: float = 30.0
    max_retries: int = 2
    rpm: int | None = None              # requests per minute; None = unlimited
    backoff_s: float = 0.5

    def __post_init__(self):
        if self.timeout_s <= 0:
            raise InvalidArgument("provider timeout must be > 0")
        if self.max_retries < 0:
            raise InvalidArgument("max retries must be >= 0")


class Provider(Protocol):
    def send(self, bundle: PromptBundle) -> str: ...


# -- output parsing ----------------------------------------------------------


def _parse_level(label: str) -> Closeness | None:
    return _LEVEL_ALIASES.get(label.strip().casefold().replace(" ", "").replace("_", "").replace("-", ""))


def parse_suggestions(raw: str | bytes, expected: int | None = None) -> SuggestionSet:
    """Parse provider output into a SuggestionSet.

    Lenient by design: live providers drift, and one bad line should not
    destroy an otherwise usable set. Unknown labels and empty texts are
    skipped with a warning; only zero valid lines is a hard error.
    """
    if isinstance(raw, bytes):
        raw = raw.decode("utf-8", errors="replace")
    suggestions: list[Suggestion] = []
    tags: tuple[str, ...] = ()
    overflow = False
    for line in raw.splitlines():
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.casefold().startswith("tags:"):
            tags = _parse_tags(stripped[len("tags:"):])
            continue
        if "|" not in stripped:
            continue
        label, _, text = stripped.partition("|")
        level = _parse_level(label)
        if level is None:
            logger.warning("skipping suggestion line with unknown level: %.60r", stripped)
            continue
        text = text.strip()
        if not text:
            logger.warning("skipping suggestion line with empty text")
            continue
        if len(suggestions) == MAX_SUGGESTIONS:
            overflow = True
            logger.warning("more than %d suggestion lines; keeping the first %d",
                           MAX_SUGGESTIONS, MAX_SUGGESTIONS)
            continue
        suggestions.append(Suggestion(text=text, closeness_label=level))
    if not suggestions:
        raise UnparseableOutput("no valid suggestion lines in provider output")
    degraded = overflow or (expected is not None and len(suggestions) != expected)
    if expected == 4 and len({s.closeness_label for s in suggestions}) == len(suggestions):
        logger.warning("provider returned 4 suggestions with all-distinct levels")
    return SuggestionSet(
        suggestions=tuple(suggestions), adjustment_tags=tags, degraded=degraded
    )


def _parse_tags(raw: str) -> tuple[str, ...]:
    seen: set[str] = set()
    tags: list[str] = []
    for piece in raw.split(","):
        tag = piece.strip()
        if not tag or tag in seen:
            continue
        seen.add(tag)
        tags.append(tag)
    if len(tags) > MAX_TAGS:
        logger.warning("provider returned %d tags; keeping the first %d", len(tags), MAX_TAGS)
        tags = tags[:MAX_TAGS]
    return tuple(tags)


# -- deterministic mock ------------------------------------------------------

_GENERIC_REPLIES = (
    "Sure, that sounds nice.",
    "Yes, gladly.",
    "Of course, thank you for asking.",
    "That would be lovely.",
)

_ADJUSTMENT_PREFIXES = {
    "agree": "Yes, certainly.",
    "disagree": "No, I don't think so.",
    "hesitant": "Well, maybe. I am not sure yet.",
    "considerate": "Only if it's no trouble for you.",
}

_MOCK_TAGS = ("Agree", "Disagree", "Hesitant", "Considerate")


def record_fragment(text: str, max_len: int = 40) -> str:
    """A stable, recognizable excerpt of a record: its first clause,
    clipped to ``max_len`` characters. Always a substring of ``text``."""
    clause = text
    for i, ch in enumerate(text):
        if ch in ".!?;\n。！？；…":
            clause = text[:i]
            break
    clause = clause[:max_len].strip().rstrip(",:，：、 ")
    return clause if clause else text[:max_len].strip()


def _bundle_seed(bundle: PromptBundle) -> int:
    digest = hashlib.sha256(bundle.render().encode("utf-8")).hexdigest()
    return int(digest[:12], 16)


class MockProvider:
    """Offline stand-in that honors the per-level detail rules: Average says
    nothing from the records, Familiar quotes one excerpt, VeryFamiliar
    quotes one and asks a question back."""

    def send(self, bundle: PromptBundle) -> str:
        if bundle.task is PromptTask.RESPONSE:
            return self._response(bundle)
        if bundle.task is PromptTask.STARTER:
            return self._starter(bundle)
        return self._adjustment(bundle)

    def _response(self, bundle: PromptBundle) -> str:
        seed = _bundle_seed(bundle)
        fragments = [record_fragment(t) for t in bundle.context.record_texts]
        generic = _GENERIC_REPLIES[seed % len(_GENERIC_REPLIES)]
        lines = [f"{Closeness.AVERAGE.value}|{generic}"]
        for i in range(2):
            if fragments:
                frag = fragments[(seed + i) % len(fragments)]
                text = f"Yes. I remember {frag}, those were good days."
            else:
                text = _GENERIC_REPLIES[(seed + i + 1) % len(_GENERIC_REPLIES)]
            lines.append(f"{Closeness.FAMILIAR.value}|{text}")
        if fragments:
            frag = fragments[seed % len(fragments)]
            text = f"Gladly! I often think of {frag}. Would you come along with me next time?"
        else:
            text = "Gladly! Could you tell me more about it?"
        lines.append(f"{Closeness.VERY_FAMILIAR.value}|{text}")
        lines.append("tags: " + ", ".join(_MOCK_TAGS))
        return "\n".join(lines)

    def _starter(self, bundle: PromptBundle) -> str:
        seed = _bundle_seed(bundle)
        level = bundle.context.active_closeness.value
        openers = (
            "I was just thinking about",
            "I'd love to tell you about",
            "Do you remember",
            "Lately I keep thinking of",
        )
        lines = []
        for i, text in enumerate(bundle.context.record_texts):
            opener = openers[(seed + i) % len(openers)]
            lines.append(f"{level}|{opener} {record_fragment(text)}.")
        lines.append("tags: " + ", ".join(_MOCK_TAGS))
        return "\n".join(lines)

    def _adjustment(self, bundle: PromptBundle) -> str:
        original = bundle.context.original_text or ""
        tag = (bundle.context.adjustment_tag or "").strip()
        prefix = _ADJUSTMENT_PREFIXES.get(
            tag.casefold(), f"Putting it another way ({tag}):"
        )
        base = original
        for lead in ("sure, ", "yes, ", "of course, "):
            if base.casefold().startswith(lead):
                base = base[len(lead):]
                break
        if base:
            base = base[0].upper() + base[1:]
        level = bundle.context.active_closeness.value
        return f"{level}|{prefix} {base}".rstrip()


def mock_complete(bundle: PromptBundle) -> str:
    return MockProvider().send(bundle)


# -- HTTP provider -----------------------------------------------------------


class HttpProvider:
    """Chat-completion style JSON endpoint. Auth token, when required, comes
    from the SOCIALIZE_PROVIDER_TOKEN environment variable."""

    def __init__(self, config: ProviderConfig, client: httpx.Client | None = None):
        if not config.base_url:
            raise InvalidArgument("http provider requires a base_url")
        self._config = config
        self._client = client or httpx.Client()

    def send(self, bundle: PromptBundle) -> str:
        headers = {}
        token = os.environ.get(TOKEN_ENV_VAR)
        if token:
            headers["Authorization"] = f"Bearer {token}"
        payload = {
            "model": self._config.model,
            "messages": [{"role": "user", "content": bundle.render()}],
        }
        try:
            response = self._client.post(
                self._config.base_url,
                json=payload,
                headers=headers,
                timeout=self._config.timeout_s,
            )
        except httpx.TimeoutException as exc:
            raise ProviderTimeout(f"provider did not answer within "
                                  f"{self._config.timeout_s}s") from exc
        except httpx.HTTPError as exc:
            raise ProviderOverloaded(f"transport failure: {exc}") from exc
        if response.status_code == 408:
            raise ProviderTimeout("provider reported a timeout")
        if response.status_code == 429 or response.status_code >= 500:
            raise ProviderOverloaded(f"provider overloaded (HTTP {response.status_code})")
        if response.status_code >= 400:
            raise ProviderRefusal(f"provider refused the request (HTTP {response.status_code})")
        try:
            body = response.json()
            return body["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise UnparseableOutput(f"malformed provider response body: {exc}") from exc


# -- rate limiting and the retrying client -----------------------------------


class RateLimiter:
    """Token bucket: ``rpm`` requests per minute with burst up to ``rpm``."""

    def __init__(self, rpm: int, clock: Callable[[], float] = time.monotonic,
                 sleep: Callable[[float], None] = time.sleep):
        if rpm < 1:
            raise InvalidArgument("rpm must be >= 1")
        self._capacity = float(rpm)
        self._rate = rpm / 60.0
        self._tokens = float(rpm)
        self._clock = clock
        self._sleep = sleep
        self._updated = clock()
        self._lock = threading.Lock()

    def acquire(self) -> None:
        while True:
            with self._lock:
                now = self._clock()
                self._tokens = min(self._capacity, self._tokens + (now - self._updated) * self._rate)
                self._updated = now
                if self._tokens >= 1.0:
                    self._tokens -= 1.0
                    return
                wait = (1.0 - self._tokens) / self._rate
            self._sleep(wait)


class GenerationClient:
    """Wraps a provider with retry, backoff, and rate limiting.

    Transient failures (timeouts, overload) are retried up to
    ``max_retries`` times with exponential backoff; refusals are not. With
    retries configured, exhaustion surfaces as RetriesExhausted; with
    ``max_retries=0`` the underlying error propagates untouched.
    """

    def __init__(
        self,
        provider: Provider,
        config: ProviderConfig,
        sleep: Callable[[float], None] = time.sleep,
        rate_limiter: RateLimiter | None = None,
    ):
        self._provider = provider
        self._config = config
        self._sleep = sleep
        self._limiter = rate_limiter
        if rate_limiter is None and config.rpm:
            self._limiter = RateLimiter(config.rpm)

    def complete(self, bundle: PromptBundle) -> str:
        attempts = self._config.max_retries + 1
        last: Exception | None = None
        for attempt in range(attempts):
            if self._limiter is not None:
                self._limiter.acquire()
            try:
                return self._provider.send(bundle)
            except (ProviderTimeout, ProviderOverloaded) as exc:
                last = exc
                if attempt + 1 < attempts:
                    delay = self._config.backoff_s * (2 ** attempt)
                    logger.warning("transient provider failure (attempt %d/%d), "
                                   "retrying in %.2fs: %s", attempt + 1, attempts, delay, exc)
                    self._sleep(delay)
        assert last is not None
        if self._config.max_retries == 0:
            raise last
        raise RetriesExhausted(
            f"provider still failing after {self._config.max_retries} retries: {last}"
        ) from last


def make_provider(config: ProviderConfig) -> Provider:
    if config.kind == "mock":
        return MockProvider()
    if config.kind == "http":
        return HttpProvider(config)
    raise InvalidArgument(f"unknown provider kind: {config.kind!r}")
