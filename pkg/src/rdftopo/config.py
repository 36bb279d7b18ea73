"""Runtime settings with config-file and environment overrides.

Precedence, lowest to highest: built-in defaults, JSON config file,
``RDFTOPO_*`` environment variables, explicit keyword overrides (CLI flags).
"""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

ENV_PREFIX = "RDFTOPO_"


@dataclass(frozen=True)
class Settings:
    hash_seed: int = 0
    damping: float = 0.85
    pagerank_tol: float = 1e-8
    pagerank_max_iter: int = 200
    workers_prepare: int = 28
    workers_analyze: int = 12
    min_tail: int = 10
    http_timeout: float = 10.0
    # Command templates with an {input} placeholder; both must write
    # N-Triples to stdout and exit 0 on success.
    converter_cmd: str | None = None
    extractor_cmd: str | None = None

    def replace(self, **changes: Any) -> "Settings":
        return dataclasses.replace(self, **changes)


def _coerce(name: str, raw: str, target_type: type) -> Any:
    if target_type is int:
        return int(raw)
    if target_type is float:
        return float(raw)
    return raw


def load_settings(
    config_path: Path | str | None = None,
    env: Mapping[str, str] | None = None,
    **overrides: Any,
) -> Settings:
    """Build a Settings value from file, environment, and explicit overrides."""
    if env is None:
        env = os.environ
    values: dict[str, Any] = {}
    fields = {f.name: f for f in dataclasses.fields(Settings)}

    if config_path is not None:
        with open(config_path, "r", encoding="utf-8") as source:
            loaded = json.load(source)
        if not isinstance(loaded, dict):
            raise ValueError(f"{config_path}: config must be a JSON object")
        for key, value in loaded.items():
            if key not in fields:
                raise ValueError(f"{config_path}: unknown setting {key!r}")
            values[key] = value

    for name, spec in fields.items():
        raw = env.get(ENV_PREFIX + name.upper())
        if raw is not None:
            base = type(spec.default) if spec.default is not None else str
            values[name] = _coerce(name, raw, base)

    for key, value in overrides.items():
        if key not in fields:
            raise ValueError(f"unknown setting {key!r}")
        if value is not None:
            values[key] = value

    return Settings(**values)
