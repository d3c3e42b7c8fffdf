"""Numerical tolerances, computation budgets and the CLI configuration."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

from .exceptions import SpecValidationError


@dataclass(frozen=True)
class Tolerances:
    # relative to max(1, |z|); below this float64 cannot separate double roots
    root: float = 1e-8
    # chordal metric
    cycle_merge: float = 1e-7
    # chordal; how far R(z_i) may sit from z_{i+1} in a supplied cycle
    orbit: float = 1e-6
    unit_circle: float = 1e-9
    rational_snap: float = 1e-9
    superattracting: float = 1e-8
    max_snap_denominator: int = 64
    # assumed error in a rotation number; bounds how deep a continued fraction is trusted
    rotation_angle: float = 1e-12
    cf_depth: int = 20
    cf_bound: int = 10
    # consecutive-revisit distance that triggers a parabolic certification attempt
    tail_trigger: float = 1e-3

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) <= 0:
                raise SpecValidationError(f"tolerance {f.name} must be positive")


@dataclass(frozen=True)
class Budget:
    max_iter: int = 10_000
    # longest cycle the orbit-tail detector looks for
    max_period: int = 64
    # d**n cap for periodic-point solving
    periodic_points_cap: int = 20_000
    # periods scanned for Siegel candidates when a critical orbit stays undecided
    siegel_search_period: int = 4
    shift_level_cap: int = 12
    # exact orbit arithmetic gives up once a coordinate denominator exceeds 2**bits
    exact_bits: int = 64

    def __post_init__(self):
        if self.max_iter < 1:
            raise SpecValidationError("max_iter must be at least 1")
        if self.max_period < 1 or self.periodic_points_cap < 2 or self.exact_bits < 8:
            raise SpecValidationError("budget below documented minimum")
        if not 1 <= self.shift_level_cap <= 12:
            raise SpecValidationError("shift_level_cap must lie in 1..12")


@dataclass(frozen=True)
class Config:
    tolerances: Tolerances = field(default_factory=Tolerances)
    budget: Budget = field(default_factory=Budget)
    escape_radius: float = 2.0
    pretty: bool = False

    @classmethod
    def from_dict(cls, data: dict) -> "Config":
        unknown = set(data) - {"tolerances", "budget", "escape_radius", "pretty"}
        if unknown:
            raise SpecValidationError(f"unknown config keys: {sorted(unknown)}")
        try:
            tol = Tolerances(**data.get("tolerances", {}))
            budget = Budget(**data.get("budget", {}))
        except TypeError as exc:
            raise SpecValidationError(str(exc)) from None
        radius = float(data.get("escape_radius", 2.0))
        if radius <= 0:
            raise SpecValidationError("escape_radius must be positive")
        return cls(tol, budget, radius, bool(data.get("pretty", False)))

    @classmethod
    def load(cls, path: str | Path) -> "Config":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def with_max_iter(self, max_iter: int) -> "Config":
        return replace(self, budget=replace(self.budget, max_iter=max_iter))

    def to_dict(self) -> dict:
        return asdict(self)
