"""Uniform completion interface over judge/refiner backends.

Two backends are provided: a remote chat-completion backend driven over
HTTPS, and a deterministic scripted backend for tests, which resolves
each request from a rule-based fixture file. Both return k ordered path
samples per request; paths are fully independent.
"""

import hashlib
import json
import time
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Optional

import requests


class BackendUnavailable(Exception):
    """The backend could not be reached after exhausting the retry policy."""


class MalformedResponse(Exception):
    """A sample came back without a usable final-answer channel."""


class Effort(Enum):
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"


@dataclass(frozen=True)
class PromptRequest:
    """One completion request.

    stage and item_id identify the pipeline step and the item under
    analysis; the scripted backend keys on them, the remote backend
    ignores them.
    """

    system_prompt: str
    user_content: str
    k: int = 1
    effort: Effort = Effort.HIGH
    stage: str = ""
    item_id: str = ""

    def __post_init__(self) -> None:
        if not self.system_prompt:
            raise ValueError("system_prompt must be non-empty")
        if self.k < 1:
            raise ValueError("k must be >= 1")


@dataclass(frozen=True)
class PathSample:
    reasoning_trace: str
    final_text: str
    path_index: int


class Backend:
    """Interface shared by all backends."""

    def sample_paths(self, request: PromptRequest) -> list:
        """Return exactly request.k samples ordered by path_index."""
        raise NotImplementedError

    def complete(self, request: PromptRequest) -> PathSample:
        """Single-shot call; the request must have k == 1."""
        if request.k != 1:
            raise ValueError("complete() requires k == 1")
        return self.sample_paths(request)[0]


def _content_hash(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


class ScriptedBackend(Backend):
    """Deterministic backend resolving samples from a fixture.

    The fixture is a dict (or JSON file) of the form::

        {
          "rules": [
            {"stage": "check", "item_id": "p1", "final": ["1", "0", "1"],
             "trace": "..."},
            {"stage": "refine", "contains": "WRITE", "final": "..."}
          ],
          "default": {"final": "1", "trace": ""}
        }

    A rule matches when all of its selector keys match the request:
    "stage" and "item_id" compare equal, "path_index" compares equal,
    and "contains" must be a substring of the user content. The first
    matching rule wins. "final" and "trace" may be strings or lists
    indexed by path_index (clamped to the last element).

    Replies may embed the placeholders {hash8}, {item_id}, {stage} and
    {path_index}; {hash8} expands to the first 8 hex digits of the
    SHA-256 of the user content, so replies stay a pure function of the
    request while still varying with its content.
    """

    def __init__(self, fixture) -> None:
        if isinstance(fixture, (str, Path)):
            with open(fixture, "r", encoding="utf-8") as fh:
                fixture = json.load(fh)
        self._rules = list(fixture.get("rules", []))
        self._default = fixture.get("default")

    def sample_paths(self, request: PromptRequest) -> list:
        return [self._resolve(request, i) for i in range(request.k)]

    def _resolve(self, request: PromptRequest, path_index: int) -> PathSample:
        rule = self._match(request, path_index)
        if rule is None:
            raise MalformedResponse(
                f"no scripted rule matches stage={request.stage!r} "
                f"item_id={request.item_id!r} path={path_index}"
            )
        final = self._pick(rule.get("final"), path_index)
        trace = self._pick(rule.get("trace", ""), path_index)
        final = self._substitute(final, request, path_index)
        trace = self._substitute(trace, request, path_index)
        if not final:
            raise MalformedResponse(
                f"scripted reply for stage={request.stage!r} "
                f"item_id={request.item_id!r} path={path_index} has no final text"
            )
        return PathSample(reasoning_trace=trace, final_text=final,
                          path_index=path_index)

    def _match(self, request: PromptRequest, path_index: int) -> Optional[dict]:
        for rule in self._rules:
            if "stage" in rule and rule["stage"] != request.stage:
                continue
            if "item_id" in rule and rule["item_id"] != request.item_id:
                continue
            if "path_index" in rule and rule["path_index"] != path_index:
                continue
            if "contains" in rule and rule["contains"] not in request.user_content:
                continue
            return rule
        return self._default

    @staticmethod
    def _pick(value, path_index: int):
        if isinstance(value, list):
            if not value:
                return ""
            return value[min(path_index, len(value) - 1)]
        return value

    @staticmethod
    def _substitute(text, request: PromptRequest, path_index: int) -> str:
        if text is None:
            return ""
        return (
            str(text)
            .replace("{hash8}", _content_hash(request.user_content)[:8])
            .replace("{item_id}", request.item_id)
            .replace("{stage}", request.stage)
            .replace("{path_index}", str(path_index))
        )


@dataclass
class RetryPolicy:
    max_attempts: int = 3
    backoff_seconds: float = 1.0
    backoff_factor: float = 2.0


class RemoteBackend(Backend):
    """Chat-completion backend over HTTPS.

    Credentials come from the environment variable named by api_key_env.
    The k paths are issued as k independent calls; the effort level is
    passed through as the request's reasoning-effort field.
    """

    def __init__(
        self,
        endpoint: str,
        model: str,
        api_key: Optional[str] = None,
        retry: Optional[RetryPolicy] = None,
        timeout: float = 120.0,
        session: Optional[requests.Session] = None,
    ) -> None:
        self.endpoint = endpoint
        self.model = model
        self.api_key = api_key
        self.retry = retry or RetryPolicy()
        self.timeout = timeout
        self._session = session or requests.Session()

    def sample_paths(self, request: PromptRequest) -> list:
        return [self._call(request, i) for i in range(request.k)]

    def _call(self, request: PromptRequest, path_index: int) -> PathSample:
        payload = {
            "model": self.model,
            "messages": [
                {"role": "system", "content": request.system_prompt},
                {"role": "user", "content": request.user_content},
            ],
            "reasoning_effort": request.effort.value,
        }
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"

        last_error: Optional[Exception] = None
        delay = self.retry.backoff_seconds
        for attempt in range(self.retry.max_attempts):
            if attempt:
                time.sleep(delay)
                delay *= self.retry.backoff_factor
            try:
                response = self._session.post(
                    self.endpoint, json=payload, headers=headers,
                    timeout=self.timeout,
                )
            except requests.RequestException as exc:
                last_error = exc
                continue
            if response.status_code >= 500:
                last_error = BackendUnavailable(
                    f"server error {response.status_code}"
                )
                continue
            if response.status_code != 200:
                raise BackendUnavailable(
                    f"request failed with status {response.status_code}: "
                    f"{response.text[:200]}"
                )
            return self._parse(response.json(), path_index)
        raise BackendUnavailable(
            f"backend unreachable after {self.retry.max_attempts} attempts: "
            f"{last_error}"
        )

    @staticmethod
    def _parse(body: Any, path_index: int) -> PathSample:
        try:
            message = body["choices"][0]["message"]
            content = message["content"]
        except (KeyError, IndexError, TypeError) as exc:
            raise MalformedResponse(f"unexpected response shape: {exc}") from exc
        final = (content or "").strip()
        if not final:
            raise MalformedResponse("response has empty content")
        trace = message.get("reasoning") or message.get("reasoning_content") or ""
        return PathSample(reasoning_trace=trace, final_text=final,
                          path_index=path_index)


class BackendKind(Enum):
    REMOTE = "remote"
    SCRIPTED = "scripted"


@dataclass
class BackendConfig:
    """Declarative backend selection; exactly one kind's fields apply."""

    kind: BackendKind
    endpoint: str = ""
    model: str = ""
    api_key_env: str = "SVALIGN_API_KEY"
    fixture_path: str = ""
    retry: RetryPolicy = field(default_factory=RetryPolicy)

    def __post_init__(self) -> None:
        if self.kind is BackendKind.SCRIPTED and not self.fixture_path:
            raise ValueError("scripted backend requires fixture_path")
        if self.kind is BackendKind.REMOTE and not self.endpoint:
            raise ValueError("remote backend requires endpoint")

    def build(self) -> Backend:
        import os

        if self.kind is BackendKind.SCRIPTED:
            return ScriptedBackend(self.fixture_path)
        return RemoteBackend(
            endpoint=self.endpoint,
            model=self.model,
            api_key=os.environ.get(self.api_key_env),
            retry=self.retry,
        )
