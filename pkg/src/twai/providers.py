"""Uniform client over generative-AI providers with concurrent fan-out.

The registry abstracts over a roster of chat providers behind one
``generate`` call. The deterministic mock provider is the reference
backend: it answers from a fixture table so the whole workbench runs
offline and every test is reproducible. A thin remote adapter exists
for real HTTP backends but is never exercised by the test suite.
"""

from __future__ import annotations

import hashlib
import os
import time
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from threading import Lock
from typing import Any

from .errors import (
    DuplicateProvider,
    EmptyPrompt,
    InvalidConfig,
    ProviderUnavailable,
    UnknownProvider,
)

DEFAULT_TIMEOUT_S = 30.0


def utc_now_iso() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass(frozen=True)
class ProviderSpec:
    """Registry entry describing one provider backend."""

    id: str
    display_name: str
    kind: str  # "remote" | "mock"
    endpoint_config: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "display_name": self.display_name,
            "kind": self.kind,
            "endpoint_config": dict(self.endpoint_config),
        }


@dataclass(frozen=True)
class GenerationResponse:
    """One provider's answer to a prompt within a session turn."""

    id: str
    provider_id: str
    prompt_text: str
    text: str
    created_at: str
    latency_ms: int

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "provider_id": self.provider_id,
            "prompt_text": self.prompt_text,
            "text": self.text,
            "created_at": self.created_at,
            "latency_ms": self.latency_ms,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "GenerationResponse":
        return cls(
            id=raw["id"],
            provider_id=raw["provider_id"],
            prompt_text=raw["prompt_text"],
            text=raw["text"],
            created_at=raw["created_at"],
            latency_ms=raw["latency_ms"],
        )


@dataclass(frozen=True)
class FanOutResult:
    """Per-provider outcome of a fan-out; exactly one of the two is set."""

    provider_id: str
    response: GenerationResponse | None = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.response is not None


def _stable_choice(prompt: str, history_len: int, n: int) -> int:
    """Stable index into a fixture list, independent of process or run."""
    digest = hashlib.sha256(f"{prompt}\x1f{history_len}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") % n


class MockProvider:
    """Deterministic offline backend answering from a fixture table.

    ``fixtures`` maps a prompt pattern to a list of response texts.
    Lookup order: exact prompt match, then the first case-insensitive
    substring pattern (longest pattern first), then the ``*`` entry.
    With several candidate texts the pick is a stable hash of
    (prompt, history length), so distinct mocks can disagree on
    purpose while each stays deterministic.

    ``endpoint_config`` knobs: ``delay_ms`` simulates latency,
    ``fail`` makes every call raise ProviderUnavailable.
    """

    def __init__(self, spec: ProviderSpec):
        self.spec = spec
        cfg = spec.endpoint_config
        self.fixtures: dict[str, list[str]] = {
            str(k): list(v) if isinstance(v, list) else [str(v)]
            for k, v in (cfg.get("fixtures") or {}).items()
        }
        self.delay_ms = int(cfg.get("delay_ms", 0))
        self.fail = bool(cfg.get("fail", False))

    def _lookup(self, prompt: str, history_len: int) -> str:
        if self.fail:
            raise ProviderUnavailable(
                f"mock provider '{self.spec.id}' configured to fail"
            )
        texts = self.fixtures.get(prompt)
        if texts is None:
            lowered = prompt.lower()
            for pattern in sorted(self.fixtures, key=len, reverse=True):
                if pattern != "*" and pattern.lower() in lowered:
                    texts = self.fixtures[pattern]
                    break
        if texts is None:
            texts = self.fixtures.get("*")
        if not texts:
            return f"[{self.spec.id}] {prompt}"
        return texts[_stable_choice(prompt, history_len, len(texts))]

    def generate(self, prompt: str, history: list) -> str:
        if self.delay_ms:
            time.sleep(self.delay_ms / 1000.0)
        return self._lookup(prompt, len(history))


class RemoteProvider:
    """Minimal HTTP adapter; outside the offline acceptance path.

    Posts ``{"prompt": ..., "history": ...}`` to the configured URL.
    The credential is read from the environment variable named in
    ``endpoint_config["credential_env"]`` at call time and never
    stored.
    """

    def __init__(self, spec: ProviderSpec):
        if not spec.endpoint_config.get("url"):
            raise InvalidConfig(f"remote provider '{spec.id}' has no endpoint URL")
        self.spec = spec

    def generate(self, prompt: str, history: list) -> str:
        import httpx

        cfg = self.spec.endpoint_config
        headers = {}
        env_name = cfg.get("credential_env")
        if env_name:
            credential = os.environ.get(env_name)
            if credential:
                headers["Authorization"] = f"Bearer {credential}"
        payload: dict[str, Any] = {"prompt": prompt, "history": history}
        if cfg.get("model"):
            payload["model"] = cfg["model"]
        try:
            resp = httpx.post(
                cfg["url"],
                json=payload,
                headers=headers,
                timeout=float(cfg.get("timeout_s", DEFAULT_TIMEOUT_S)),
            )
            resp.raise_for_status()
            return resp.json()["text"]
        except Exception as exc:  # network errors become a uniform failure
            raise ProviderUnavailable(f"{self.spec.id}: {exc}") from exc


class ProviderRegistry:
    """Read-mostly roster of providers; fan-out runs them concurrently."""

    def __init__(self, timeout_s: float = DEFAULT_TIMEOUT_S):
        self.timeout_s = timeout_s
        self._providers: dict[str, MockProvider | RemoteProvider] = {}
        self._specs: dict[str, ProviderSpec] = {}
        self._lock = Lock()

    def register_provider(self, spec: ProviderSpec) -> "ProviderRegistry":
        with self._lock:
            if spec.id in self._providers:
                raise DuplicateProvider(f"provider '{spec.id}' already registered")
            if spec.kind == "mock":
                backend: MockProvider | RemoteProvider = MockProvider(spec)
            elif spec.kind == "remote":
                backend = RemoteProvider(spec)
            else:
                raise InvalidConfig(f"unknown provider kind '{spec.kind}'")
            self._providers[spec.id] = backend
            self._specs[spec.id] = spec
        return self

    def specs(self) -> list[ProviderSpec]:
        return [self._specs[pid] for pid in sorted(self._specs)]

    def _backend(self, provider_id: str) -> MockProvider | RemoteProvider:
        try:
            return self._providers[provider_id]
        except KeyError:
            raise UnknownProvider(f"no provider '{provider_id}'") from None

    def generate(
        self, provider_id: str, prompt: str, history: list | None = None
    ) -> GenerationResponse:
        if not prompt or not prompt.strip():
            raise EmptyPrompt("prompt must be non-empty")
        backend = self._backend(provider_id)
        started = time.monotonic()
        text = backend.generate(prompt, history or [])
        if not text:
            raise ProviderUnavailable(f"provider '{provider_id}' returned empty text")
        latency_ms = int((time.monotonic() - started) * 1000)
        return GenerationResponse(
            id=uuid.uuid4().hex,
            provider_id=provider_id,
            prompt_text=prompt,
            text=text,
            created_at=utc_now_iso(),
            latency_ms=latency_ms,
        )

    def fan_out(
        self,
        prompt: str,
        provider_ids: list[str],
        history: list | None = None,
        timeout_s: float | None = None,
    ) -> list[FanOutResult]:
        """One entry per requested provider, in request order.

        Individual failures are captured per entry and never abort the
        batch. Unknown ids are rejected before anything is dispatched.
        """
        if not provider_ids:
            raise UnknownProvider("fan_out requires at least one provider id")
        if not prompt or not prompt.strip():
            raise EmptyPrompt("prompt must be non-empty")
        for pid in provider_ids:
            self._backend(pid)  # raises UnknownProvider before dispatch

        deadline = timeout_s if timeout_s is not None else self.timeout_s
        results: list[FanOutResult] = []
        with ThreadPoolExecutor(max_workers=len(provider_ids)) as pool:
            futures = [
                pool.submit(self.generate, pid, prompt, history)
                for pid in provider_ids
            ]
            for pid, future in zip(provider_ids, futures):
                try:
                    results.append(
                        FanOutResult(provider_id=pid, response=future.result(timeout=deadline))
                    )
                except Exception as exc:
                    results.append(FanOutResult(provider_id=pid, error=str(exc)))
        return results


def load_provider_specs(raw: list[dict]) -> list[ProviderSpec]:
    """Parse a providers config document (list of spec objects)."""
    specs = []
    for item in raw:
        specs.append(
            ProviderSpec(
                id=item["id"],
                display_name=item.get("display_name", item["id"]),
                kind=item.get("kind", "mock"),
                endpoint_config=item.get("endpoint_config", {}),
            )
        )
    return specs
