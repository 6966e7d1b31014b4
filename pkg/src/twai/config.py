"""Workbench configuration with flags > environment > file precedence."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Mapping

from .compare import DEFAULT_MIN_SUPPORT, DEFAULT_TAU_CLUSTER, DEFAULT_THETA_CMP_PASS
from .decision import DEFAULT_WEIGHTS
from .double_check import DEFAULT_TAU_DC, DEFAULT_THETA_DC_PASS
from .providers import DEFAULT_TIMEOUT_S
from .source import (
    DEFAULT_CHUNK_OVERLAP,
    DEFAULT_MAX_CHUNK_TOKENS,
    DEFAULT_TAU_SOURCE,
    DEFAULT_THETA_SOURCE_PASS,
    DEFAULT_TOP_K,
)

ENV_WORKSPACE = "TWAI_WORKSPACE"


@dataclass
class WorkbenchConfig:
    workspace: str = ".twai"
    host: str = "127.0.0.1"
    port: int = 8321
    providers_file: str | None = None
    search_fixture_file: str | None = None
    metrics_file: str | None = None
    stopwords_file: str | None = None
    hedging_file: str | None = None
    tau_source: float = DEFAULT_TAU_SOURCE
    theta_source_pass: float = DEFAULT_THETA_SOURCE_PASS
    tau_dc: float = DEFAULT_TAU_DC
    theta_dc_pass: float = DEFAULT_THETA_DC_PASS
    tau_cluster: float = DEFAULT_TAU_CLUSTER
    min_support: int = DEFAULT_MIN_SUPPORT
    theta_cmp_pass: float = DEFAULT_THETA_CMP_PASS
    top_k: int = DEFAULT_TOP_K
    max_chunk_tokens: int = DEFAULT_MAX_CHUNK_TOKENS
    chunk_overlap: int = DEFAULT_CHUNK_OVERLAP
    timeout_s: float = DEFAULT_TIMEOUT_S
    weights: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_WEIGHTS))

    @property
    def workspace_path(self) -> Path:
        return Path(self.workspace)


def load_config(
    config_file: str | Path | None = None,
    env: Mapping[str, str] | None = None,
    overrides: dict[str, Any] | None = None,
) -> WorkbenchConfig:
    """Merge a JSON config file, environment, and explicit overrides.

    Later sources win: file < environment < overrides (CLI flags).
    Unknown file keys are rejected so typos fail loudly.
    """
    env = os.environ if env is None else env
    merged: dict[str, Any] = {}
    if config_file:
        raw = json.loads(Path(config_file).read_text(encoding="utf-8"))
        known = {f.name for f in fields(WorkbenchConfig)}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        merged.update(raw)
    if env.get(ENV_WORKSPACE):
        merged["workspace"] = env[ENV_WORKSPACE]
    for key, value in (overrides or {}).items():
        if value is not None:
            merged[key] = value
    return WorkbenchConfig(**merged)
