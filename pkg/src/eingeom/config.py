"""Numerical settings shared by the library and the CLI."""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace
from typing import Any

from dotenv import load_dotenv

DEFAULT_EPS = 1e-9
DEFAULT_SLOPE_THRESHOLD = 0.05
DEFAULT_LIMIT_TOL = 1e-6
DEFAULT_POWER_DEPTH = 40
DEFAULT_WORD_LENGTH = 4
DEFAULT_SAMPLES = 1_000_000
DEFAULT_SEED = 0
DEFAULT_WORKERS = 1
DEFAULT_FORM = "hyp2"

_ENV_PREFIX = "EINGEOM_"


@dataclass(frozen=True)
class Settings:
    """Tolerances and budgets for a run.

    Attributes:
        eps: Null/degeneracy tolerance used by every predicate
        slope_threshold: Regression slope below which an exponent trace counts as bounded
        limit_tol: Cauchy tolerance for normalized limits of sequences
        power_depth: Number of powers g^n used to classify a cyclic sequence
        word_length: Default maximal reduced word length for group enumeration
        samples: Monte-Carlo sample count for the disjointness oracle
        seed: Seed for every random generator
        workers: Thread count for word enumeration (1 disables the pool)
        form: Default ambient form convention tag
    """

    eps: float = DEFAULT_EPS
    slope_threshold: float = DEFAULT_SLOPE_THRESHOLD
    limit_tol: float = DEFAULT_LIMIT_TOL
    power_depth: int = DEFAULT_POWER_DEPTH
    word_length: int = DEFAULT_WORD_LENGTH
    samples: int = DEFAULT_SAMPLES
    seed: int = DEFAULT_SEED
    workers: int = DEFAULT_WORKERS
    form: str = DEFAULT_FORM

    def __post_init__(self) -> None:
        from eingeom.forms import Convention

        if self.eps <= 0:
            raise ValueError(f"eps must be positive, got {self.eps!r}")
        if self.power_depth < 2:
            raise ValueError(f"power_depth must be at least 2, got {self.power_depth!r}")
        if self.workers < 1:
            raise ValueError(f"workers must be at least 1, got {self.workers!r}")
        if self.form not in set(Convention):
            choices = ", ".join(Convention)
            raise ValueError(f"form must be one of {choices}, got {self.form!r}")

    @classmethod
    def from_env(cls, dotenv_path: str | None = None) -> Settings:
        load_dotenv(dotenv_path)
        values: dict[str, Any] = {}
        for f in fields(cls):
            raw = os.getenv(_ENV_PREFIX + f.name.upper())
            if raw is None:
                continue
            caster = type(getattr(cls, f.name))
            try:
                values[f.name] = caster(raw)
            except ValueError as exc:
                raise ValueError(f"Invalid {_ENV_PREFIX}{f.name.upper()}={raw!r}") from exc
        return cls(**values)

    def with_overrides(self, **overrides: Any) -> Settings:
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def to_dict(self) -> dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self)}
