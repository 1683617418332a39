"""Flat key-value experiment configuration.

The format is INI-style without sections: one ``key = value`` per line,
``#`` comments, keys namespaced by dots with units explicit in the name
(``grid.h``, ``exp.p``).  Values stay strings until a typed accessor pulls
them, so configs are diff-friendly and language-agnostic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

__all__ = ["ExperimentConfig", "parse_config", "load_config"]

EXPERIMENTS = (
    "exponents",
    "poisson",
    "truncation",
    "staircase",
    "celliptic",
    "divergence",
    "sweep",
)


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    experiment: str
    values: dict

    def get(self, key: str, default=None) -> str | None:
        return self.values.get(key, default)

    def get_float(self, key: str, default: float | None = None) -> float:
        raw = self.values.get(key)
        if raw is None:
            if default is None:
                raise ConfigError(f"missing required key {key}")
            return default
        if raw.strip().lower() in ("inf", "infinity"):
            return math.inf
        try:
            return float(raw)
        except ValueError as e:
            raise ConfigError(f"{key} = {raw!r} is not a number") from e

    def get_int(self, key: str, default: int | None = None) -> int:
        raw = self.values.get(key)
        if raw is None:
            if default is None:
                raise ConfigError(f"missing required key {key}")
            return default
        try:
            return int(raw)
        except ValueError as e:
            raise ConfigError(f"{key} = {raw!r} is not an integer") from e

    def get_list(self, key: str, default: str | None = None) -> list[float]:
        raw = self.values.get(key, default)
        if raw is None:
            raise ConfigError(f"missing required key {key}")
        out = []
        for part in raw.split(","):
            part = part.strip()
            if part:
                out.append(math.inf if part.lower() == "inf" else float(part))
        return out

    def get_str_list(self, key: str, default: str = "") -> list[str]:
        raw = self.values.get(key, default)
        return [p.strip() for p in raw.split(",") if p.strip()]

    @property
    def seed(self) -> int:
        return self.get_int("seed", 0)

    def hard_checks(self) -> set[str]:
        """Names of checks whose failure makes the run exit nonzero.

        Default: every check the experiment marks as hard itself.
        """
        return set(self.get_str_list("hard"))


def parse_config(text: str, experiment: str | None = None) -> ExperimentConfig:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected `key = value`, got {raw!r}")
        key, val = line.split("=", 1)
        key, val = key.strip(), val.strip()
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key}")
        values[key] = val
    named = values.get("experiment")
    if experiment is None:
        if named is None:
            raise ConfigError("config must name an `experiment` (or pass one)")
        experiment = named
    elif named is not None and named != experiment:
        raise ConfigError(
            f"config names experiment {named!r} but {experiment!r} was requested"
        )
    if experiment not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {experiment!r}; one of {EXPERIMENTS}")
    return ExperimentConfig(experiment, values)


def load_config(path, experiment: str | None = None) -> ExperimentConfig:
    with open(path) as f:
        return parse_config(f.read(), experiment)
