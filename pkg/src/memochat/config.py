"""Application configuration: dataclasses plus a TOML/JSON file loader.

The file mirrors the dotted config keys one section per module, e.g.::

    [retrieval]
    neighbor_k = 40

    [provider]
    kind = "mock"
"""

from __future__ import annotations

import json

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from dataclasses import dataclass, field
from pathlib import Path

from .generation import ProviderConfig
from .prompts import DEFAULT_HISTORY_TURNS
from .retrieval import DEFAULT_NEIGHBOR_K, DEFAULT_STARTER_MAX, DEFAULT_TOP_N


@dataclass(frozen=True)
class RetrievalConfig:
    neighbor_k: int = DEFAULT_NEIGHBOR_K
    top_n: int = DEFAULT_TOP_N
    starter_max: int = DEFAULT_STARTER_MAX


@dataclass(frozen=True)
class PromptConfig:
    history_turns: int = DEFAULT_HISTORY_TURNS


@dataclass(frozen=True)
class ApiConfig:
    cors_origins: tuple[str, ...] = ()
    bearer_token: str | None = None


@dataclass(frozen=True)
class AppConfig:
    retrieval: RetrievalConfig = field(default_factory=RetrievalConfig)
    prompt: PromptConfig = field(default_factory=PromptConfig)
    provider: ProviderConfig = field(default_factory=ProviderConfig)
    api: ApiConfig = field(default_factory=ApiConfig)


def load_config(path: str | Path | None) -> AppConfig:
    """Load configuration from a .toml or .json file; None gives defaults."""
    if path is None:
        return AppConfig()
    path = Path(path)
    if path.suffix == ".toml":
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    else:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    retrieval = RetrievalConfig(**raw.get("retrieval", {}))
    prompt = PromptConfig(**raw.get("prompt", {}))
    provider_raw = dict(raw.get("provider", {}))
    provider = ProviderConfig(**provider_raw)
    api_raw = dict(raw.get("api", {}))
    if "cors_origins" in api_raw:
        api_raw["cors_origins"] = tuple(api_raw["cors_origins"])
    api = ApiConfig(**api_raw)
    return AppConfig(retrieval=retrieval, prompt=prompt, provider=provider, api=api)
