from __future__ import annotations

from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class SweepConfig:
    """Test families: monomial fields up to ``max_degree`` plus seeded random ones."""

    max_degree: int = 3
    trials: int = 50
    seed: int = 0
    random_degree: int = 3

    def __post_init__(self):
        if self.max_degree < 0 or self.trials < 0 or self.random_degree < 0:
            raise ValueError("degree bounds and trial counts must be non-negative")

    def as_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class AnsatzBounds:
    """Jet order ``S_max`` of the field and derivative order ``U_max`` of the operator."""

    jet: int = 3
    order: int = 2

    def __post_init__(self):
        if self.jet < 0 or self.order < 0:
            raise ValueError("ansatz bounds must be non-negative")

    def as_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class MC2Config:
    pairs: int = 10
    seed: int = 0
    max_degree: int = 3
    max_attempts: int = 100

    def as_dict(self):
        return asdict(self)
