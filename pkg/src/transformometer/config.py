"""Application configuration: defaults plus an optional YAML file.

The file is a mapping with up to three sections (tai, stability,
ingestion); flat dotted keys like "tai.immediacy_min" are accepted too.
Unknown keys fail loudly rather than being silently ignored.

Example:

    tai:
      immediacy_min: 4
      composite_min: 70
      require_ai_tag: true
    stability:
      noise_p: 0.1
      trials: 1000
      seed: 0
    ingestion:
      base_url: https://en.wikipedia.org
      user_agent: my-project/1.0 (contact@example.org)
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path

import yaml

from .analysis import LevelNoise, TaiAlertConfig
from .ingestion import IngestionConfig


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class StabilityConfig:
    noise_p: float = 0.1
    trials: int = 1000
    seed: int = 0

    @property
    def noise(self) -> LevelNoise:
        return LevelNoise(flip_prob=self.noise_p)


@dataclass(frozen=True)
class AppConfig:
    tai: TaiAlertConfig
    stability: StabilityConfig
    ingestion: IngestionConfig

    @classmethod
    def defaults(cls) -> "AppConfig":
        return cls(
            tai=TaiAlertConfig(),
            stability=StabilityConfig(),
            ingestion=IngestionConfig(),
        )


_SECTIONS = {
    "tai": TaiAlertConfig,
    "stability": StabilityConfig,
    "ingestion": IngestionConfig,
}


def load_config(path: str | Path | None) -> AppConfig:
    """Load AppConfig from a YAML file; None gives pure defaults."""
    if path is None:
        return AppConfig.defaults()
    raw = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
    if raw is None:
        return AppConfig.defaults()
    if not isinstance(raw, dict):
        raise ConfigError(f"config root must be a mapping, got {type(raw).__name__}")

    sections: dict[str, dict] = {name: {} for name in _SECTIONS}
    for key, value in raw.items():
        if key in _SECTIONS:
            if not isinstance(value, dict):
                raise ConfigError(f"section {key!r} must be a mapping")
            sections[key].update(value)
        elif isinstance(key, str) and "." in key:
            section, _, option = key.partition(".")
            if section not in _SECTIONS:
                raise ConfigError(f"unknown config section {section!r}")
            sections[section][option] = value
        else:
            raise ConfigError(f"unknown config key {key!r}")

    built = {}
    for name, cls in _SECTIONS.items():
        known = {f.name for f in fields(cls)}
        options = sections[name]
        unknown = sorted(set(options) - known)
        if unknown:
            raise ConfigError(f"unknown keys in section {name!r}: {', '.join(unknown)}")
        if "fixture_dir" in options and options["fixture_dir"] is not None:
            options["fixture_dir"] = Path(options["fixture_dir"])
        if "cache_dir" in options and options["cache_dir"] is not None:
            options["cache_dir"] = Path(options["cache_dir"])
        built[name] = cls(**options)
    return AppConfig(tai=built["tai"], stability=built["stability"], ingestion=built["ingestion"])
