"""Experiment configuration and its flat ``key=value`` file format."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .catalog import CATALOG
from .grammar import parse_measure_spec

FORMATS = ("csv", "json")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class WStrategy:
    """How the generating point ``w_n`` is chosen for each degree.

    ``fixed``: ``w_n = exp(i value)``; ``rotate``: ``w_n = exp(i n value)``;
    ``pseudorandom``: uniform angle from a generator seeded by ``(seed, n)``.
    """

    kind: str
    value: float = 0.0

    def __post_init__(self):
        if self.kind not in ("fixed", "rotate", "pseudorandom"):
            raise ConfigError(f"unknown w strategy {self.kind!r}")
        if not math.isfinite(self.value):
            raise ConfigError("w strategy parameter must be finite")

    def angle(self, n: int, seed: int | None) -> float:
        if self.kind == "fixed":
            theta = self.value
        elif self.kind == "rotate":
            theta = n * self.value
        else:
            theta = float(np.random.default_rng([seed, n]).uniform(0.0, 2 * math.pi))
        return theta % (2 * math.pi)

    def point(self, n: int, seed: int | None) -> complex:
        theta = self.angle(n, seed)
        return complex(math.cos(theta), math.sin(theta))

    def render(self) -> str:
        return self.kind if self.kind == "pseudorandom" else f"{self.kind}:{self.value!r}"

    @classmethod
    def parse(cls, text: str) -> "WStrategy":
        kind, _, value = text.strip().partition(":")
        if kind == "pseudorandom":
            if value:
                raise ConfigError("pseudorandom takes its seed from the seed field")
            return cls(kind)
        if kind not in ("fixed", "rotate") or not value:
            raise ConfigError(f"w strategy must be fixed:<theta>, rotate:<step> or pseudorandom, got {text!r}")
        try:
            return cls(kind, float(value))
        except ValueError:
            raise ConfigError(f"bad w strategy parameter {value!r}") from None


@dataclass(frozen=True)
class ExperimentConfig:
    measure: str
    f: str
    w: WStrategy
    degrees: tuple[int, ...]
    p: tuple[float, ...]
    format: str = "csv"
    seed: int | None = None
    resolution: int | None = None

    def __post_init__(self):
        parse_measure_spec(self.measure)
        if self.f not in CATALOG:
            raise ConfigError(f"unknown function {self.f!r}")
        if not self.degrees:
            raise ConfigError("degree list is empty")
        if any(d < 0 for d in self.degrees) or any(b <= a for a, b in zip(self.degrees, self.degrees[1:])):
            raise ConfigError("degrees must be nonnegative and strictly increasing")
        if not self.p or any(not 0 < q <= 2 for q in self.p):
            raise ConfigError("every exponent p must lie in (0, 2]")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}")
        if self.w.kind == "pseudorandom" and self.seed is None:
            raise ConfigError("pseudorandom w strategy needs a seed")
        if self.resolution is not None and self.resolution < 16:
            raise ConfigError("resolution must be at least 16")


_KEYS = ("measure", "f", "w", "degrees", "p", "format", "seed", "resolution")


def render_config(cfg: ExperimentConfig) -> str:
    fields = {
        "measure": cfg.measure,
        "f": cfg.f,
        "w": cfg.w.render(),
        "degrees": ",".join(str(d) for d in cfg.degrees),
        "p": ",".join(repr(float(q)) for q in cfg.p),
        "format": cfg.format,
        "seed": "" if cfg.seed is None else str(cfg.seed),
        "resolution": "" if cfg.resolution is None else str(cfg.resolution),
    }
    return "".join(f"{k}={fields[k]}\n" for k in _KEYS)


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(",") if x.strip())


def _float_list(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in text.split(",") if x.strip())


def parse_config(text: str) -> ExperimentConfig:
    """Parse ``key=value`` lines; blank lines and ``#`` comments are ignored."""
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep:
            raise ConfigError(f"line {lineno}: expected key=value")
        if key not in _KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in raw:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        raw[key] = value.strip()
    missing = [k for k in ("measure", "f", "degrees", "p") if k not in raw]
    if missing:
        raise ConfigError(f"missing keys: {', '.join(missing)}")
    try:
        return ExperimentConfig(
            measure=raw["measure"],
            f=raw["f"],
            w=WStrategy.parse(raw.get("w", "fixed:0.0")),
            degrees=_int_list(raw["degrees"]),
            p=_float_list(raw["p"]),
            format=raw.get("format") or "csv",
            seed=int(raw["seed"]) if raw.get("seed") else None,
            resolution=int(raw["resolution"]) if raw.get("resolution") else None,
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc
