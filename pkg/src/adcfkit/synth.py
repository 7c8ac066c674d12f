"""Seeded synthetic Gaussian score generation for tests and benchmarks.

Reproducibility contract: scores are drawn from the Philox 4x64-10
counter-based generator (numpy's ``np.random.Philox``) keyed by the
seed, consumed as raw 64-bit words in a single documented order. Each
word becomes a uniform double in (0, 1) via ``((raw >> 11) + 0.5) *
2**-53`` and a standard normal via the inverse normal CDF
(``scipy.special.ndtri``). Identical (seed, parameters) therefore yield
bit-identical scores on every platform, independent of numpy's default
bit generator or normal-sampling algorithm.

Draw order: classes in (tar, non, spf) order; for dual generation the
ASV column of a class is drawn before its CM column.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from .errors import InputError
from .trialdata import DualScoreSet, PairedScores, ScoreSet

_U53 = 2.0 ** -53


@dataclass(frozen=True)
class ClassDistribution:
    """Gaussian score distribution of one trial class."""

    mean: float
    stddev: float
    count: int

    def __post_init__(self) -> None:
        if not np.isfinite(self.mean):
            raise InputError(f"mean must be finite, got {self.mean!r}")
        if not (np.isfinite(self.stddev) and self.stddev > 0):
            raise InputError(f"stddev must be positive, got {self.stddev!r}")
        if self.count < 1:
            raise InputError(f"count must be at least 1, got {self.count!r}")


@dataclass(frozen=True)
class DualClassDistribution:
    """Bivariate Gaussian (ASV, CM) score distribution of one class.

    ``rho`` is the within-class correlation of the two columns; 0 gives
    class-conditionally independent columns.
    """

    asv_mean: float
    asv_stddev: float
    cm_mean: float
    cm_stddev: float
    count: int
    rho: float = 0.0

    def __post_init__(self) -> None:
        for name in ("asv_mean", "cm_mean"):
            if not np.isfinite(getattr(self, name)):
                raise InputError(f"{name} must be finite")
        for name in ("asv_stddev", "cm_stddev"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise InputError(f"{name} must be positive, got {v!r}")
        if self.count < 1:
            raise InputError(f"count must be at least 1, got {self.count!r}")
        if not (np.isfinite(self.rho) and -1.0 < self.rho < 1.0):
            raise InputError(f"rho must lie in (-1, 1), got {self.rho!r}")


class _NormalStream:
    def __init__(self, seed: int):
        self._bitgen = np.random.Philox(key=np.uint64(seed))

    def draw(self, n: int) -> np.ndarray:
        raw = self._bitgen.random_raw(n)
        u = ((raw >> np.uint64(11)) + 0.5) * _U53  # uniform in (0, 1)
        return ndtri(u)


def generate_single(
    seed: int, tar: ClassDistribution, non: ClassDistribution, spf: ClassDistribution
) -> ScoreSet:
    """Deterministic per-class Gaussian scores for a single-score system."""
    stream = _NormalStream(seed)
    cols = [d.mean + d.stddev * stream.draw(d.count) for d in (tar, non, spf)]
    return ScoreSet(tar=cols[0], non=cols[1], spf=cols[2])


def generate_dual(
    seed: int,
    tar: DualClassDistribution,
    non: DualClassDistribution,
    spf: DualClassDistribution,
) -> DualScoreSet:
    """Deterministic paired (ASV, CM) Gaussian scores for a tandem system."""
    stream = _NormalStream(seed)
    pairs = []
    for d in (tar, non, spf):
        z_asv = stream.draw(d.count)
        z_cm = stream.draw(d.count)
        if d.rho != 0.0:
            z_cm = d.rho * z_asv + np.sqrt(1.0 - d.rho * d.rho) * z_cm
        pairs.append(
            PairedScores(
                asv=d.asv_mean + d.asv_stddev * z_asv,
                cm=d.cm_mean + d.cm_stddev * z_cm,
            )
        )
    return DualScoreSet(tar=pairs[0], non=pairs[1], spf=pairs[2])
