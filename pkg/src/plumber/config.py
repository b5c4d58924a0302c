"""Configuration file and environment overrides.

config.json keys: port, data_dir, cache.{enabled, budget_bytes},
selector.{blend_feedback, beta}, ui_origin. Environment variables
PLUMBER_CONFIG (config path), PLUMBER_DATA_DIR, and PLUMBER_COMPONENTS
(registry bootstrap) override file settings.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import PlumberError
from .runner import DEFAULT_CACHE_BUDGET_BYTES

CONFIG_ENV_VAR = "PLUMBER_CONFIG"
DATA_DIR_ENV_VAR = "PLUMBER_DATA_DIR"


class ConfigInvalid(PlumberError):
    code = "config_invalid"

    def __init__(self, key: str, message: str):
        super().__init__(f"config key {key!r}: {message}")
        self.key = key


@dataclass(frozen=True)
class CacheConfig:
    enabled: bool = True
    budget_bytes: int = DEFAULT_CACHE_BUDGET_BYTES


@dataclass(frozen=True)
class SelectorConfig:
    blend_feedback: bool = True
    beta: float = 0.3


@dataclass(frozen=True)
class AppConfig:
    port: int = 8080
    data_dir: Path = Path("plumber-data")
    cache: CacheConfig = field(default_factory=CacheConfig)
    selector: SelectorConfig = field(default_factory=SelectorConfig)
    ui_origin: str = "*"


def _check(obj: dict, key: str, kind, path: str):
    value = obj[key]
    if kind is int and isinstance(value, bool):
        raise ConfigInvalid(path, "expected an integer")
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        return float(value)
    if not isinstance(value, kind):
        raise ConfigInvalid(path, f"expected {kind.__name__}")
    return value


def load_config(path: str | Path | None = None) -> AppConfig:
    """Load config.json; a missing file yields the defaults."""
    path = os.environ.get(CONFIG_ENV_VAR) or path
    raw: dict = {}
    if path is not None:
        file = Path(path)
        if not file.is_file():
            raise ConfigInvalid(str(path), "config file does not exist")
        try:
            raw = json.loads(file.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigInvalid(str(path), f"not valid JSON: {exc.msg}") from exc
        if not isinstance(raw, dict):
            raise ConfigInvalid(str(path), "config must be a JSON object")

    known = {"port", "data_dir", "cache", "selector", "ui_origin"}
    for key in raw:
        if key not in known:
            raise ConfigInvalid(key, "unknown key")

    cfg = AppConfig()
    port = _check(raw, "port", int, "port") if "port" in raw else cfg.port
    data_dir = Path(_check(raw, "data_dir", str, "data_dir")) if "data_dir" in raw else cfg.data_dir
    ui_origin = _check(raw, "ui_origin", str, "ui_origin") if "ui_origin" in raw else cfg.ui_origin

    cache = cfg.cache
    if "cache" in raw:
        sub = _check(raw, "cache", dict, "cache")
        for key in sub:
            if key not in {"enabled", "budget_bytes"}:
                raise ConfigInvalid(f"cache.{key}", "unknown key")
        cache = CacheConfig(
            enabled=_check(sub, "enabled", bool, "cache.enabled") if "enabled" in sub else cache.enabled,
            budget_bytes=_check(sub, "budget_bytes", int, "cache.budget_bytes")
            if "budget_bytes" in sub
            else cache.budget_bytes,
        )
        if cache.budget_bytes <= 0:
            raise ConfigInvalid("cache.budget_bytes", "must be positive")

    selector = cfg.selector
    if "selector" in raw:
        sub = _check(raw, "selector", dict, "selector")
        for key in sub:
            if key not in {"blend_feedback", "beta"}:
                raise ConfigInvalid(f"selector.{key}", "unknown key")
        beta = (
            _check(sub, "beta", float, "selector.beta") if "beta" in sub else selector.beta
        )
        if not 0.0 <= beta <= 1.0:
            raise ConfigInvalid("selector.beta", "must lie in [0, 1]")
        selector = SelectorConfig(
            blend_feedback=_check(sub, "blend_feedback", bool, "selector.blend_feedback")
            if "blend_feedback" in sub
            else selector.blend_feedback,
            beta=beta,
        )

    if not 0 < port < 65536:
        raise ConfigInvalid("port", "must be a valid TCP port")

    env_dir = os.environ.get(DATA_DIR_ENV_VAR)
    if env_dir:
        data_dir = Path(env_dir)

    return AppConfig(
        port=port, data_dir=data_dir, cache=cache, selector=selector, ui_origin=ui_origin
    )


def default_components_path() -> Path:
    return Path(str(resources.files("plumber.resources").joinpath("components.json")))


def default_snapshot_path() -> Path:
    return Path(str(resources.files("plumber.resources").joinpath("toykg.json")))
