# -*- coding: utf-8 -*-
"""
Defaults, tolerances and supported ranges for the sphere spin-structure tools.

Environment overrides (all optional, read when the CLI builds its defaults):
  SPHERE_SPIN_STEPS  loop samples per generator loop (default 256)
  SPHERE_SPIN_SEED   seed for random sampling, decimal or 0x-hex (default 0x5EED)
  SPHERE_SPIN_JOBS   worker processes for table runs (default 1)
"""

import os
from dataclasses import dataclass
from typing import Dict, Tuple

DEFAULT_STEPS = 256
MIN_STEPS = 64
DEFAULT_TOL = 1e-9
DEFAULT_SEED = 0x5EED
DEFAULT_JOBS = 1

UNIT_TOL = 1e-9
PRUNE_TOL = 1e-13
STABILIZER_TOL = 1e-10
LOG_RADIUS = 0.5
SERIES_MAX_TERMS = 200
TRACK_TOL = 1e-6
POLE_TOL = 0.1
RANK_TOL = 1e-8
INVARIANCE_TOL = 1e-8
CHARACTER_TOL = 1e-8
ISOTROPY_TOL = 1e-7
COVER_TOL = 1e-8
CLIFFORD_DIM_MAX = 15

CHARACTER_TRIALS = 100
ISOTROPY_TRIALS = 50

# Row order of the classification table.
FAMILY_ORDER: Tuple[str, ...] = ("SO", "U", "SU", "Sp", "SpSp1", "SpU1", "G2", "Spin7", "Spin9")

# Desk-scale ranges of the family parameter n; exceptional rows have no parameter.
SUPPORTED_RANGES: Dict[str, Tuple[int, int]] = {
    "SO": (2, 8),
    "U": (1, 5),
    "SU": (1, 5),
    "Sp": (1, 3),
    "SpU1": (1, 3),
    "SpSp1": (1, 3),
    "G2": (0, 0),
    "Spin7": (0, 0),
    "Spin9": (0, 0),
}


def env_int(name: str, default: int) -> int:
    """Integer from the environment, accepting 0x-prefixed hex; default when unset or blank."""
    raw = os.getenv(name, "").strip()
    if not raw:
        return default
    try:
        return int(raw, 0)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}")


@dataclass(frozen=True)
class RunConfig:
    steps: int = DEFAULT_STEPS
    tol: float = DEFAULT_TOL
    seed: int = DEFAULT_SEED
    jobs: int = DEFAULT_JOBS

    def __post_init__(self):
        if self.steps < MIN_STEPS:
            raise ValueError(f"steps must be >= {MIN_STEPS}, got {self.steps}")
        if self.steps % 2:
            raise ValueError(f"steps must be even, got {self.steps}")
        if not 0 < self.tol < 1e-3:
            raise ValueError(f"tol must be in (0, 1e-3), got {self.tol}")
        if self.jobs < 1:
            raise ValueError(f"jobs must be >= 1, got {self.jobs}")

    @classmethod
    def from_env(cls) -> "RunConfig":
        return cls(
            steps=env_int("SPHERE_SPIN_STEPS", DEFAULT_STEPS),
            seed=env_int("SPHERE_SPIN_SEED", DEFAULT_SEED),
            jobs=env_int("SPHERE_SPIN_JOBS", DEFAULT_JOBS),
        )
