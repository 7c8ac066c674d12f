"""Three-class single-score detection cost: pointwise, normalized, minimum.

The cost at threshold ``t`` is

    c_miss*pi_tar*P_miss(t) + c_fa_non*pi_non*P_fa_non(t)
        + c_fa_spf*pi_spf*P_fa_spf(t)

normalized by the cost of the better of the two default systems
(accept-everything / reject-everything). The minimum of the normalized
cost over all thresholds always lies in [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO

import numpy as np

from .errcurves import candidates_from_pool, counts_below, format_threshold
from .errors import DegenerateModelError, EmptyClassError, RangeError
from .trialdata import CostModel, ScoreSet, validate_cost_model

Rates = tuple[float, float, float]


def _check_rates(rates: Rates) -> Rates:
    p_miss, p_fa_non, p_fa_spf = rates
    for name, v in (("p_miss", p_miss), ("p_fa_non", p_fa_non), ("p_fa_spf", p_fa_spf)):
        if not (0.0 <= v <= 1.0):
            raise RangeError(f"{name} must lie in [0, 1], got {v!r}")
    return rates


def adcf_at(m: CostModel, rates: Rates) -> float:
    """Unnormalized detection cost at one operating point."""
    p_miss, p_fa_non, p_fa_spf = _check_rates(rates)
    return (
        m.c_miss * m.pi_tar * p_miss
        + m.c_fa_non * m.pi_non * p_fa_non
        + m.c_fa_spf * m.pi_spf * p_fa_spf
    )


def adcf_default(m: CostModel) -> float:
    """Cost of the cheaper default system (accept-all vs reject-all)."""
    validate_cost_model(m)
    default = min(m.c_miss * m.pi_tar, m.c_fa_non * m.pi_non + m.c_fa_spf * m.pi_spf)
    if default == 0.0:
        raise DegenerateModelError(
            "both default systems are free under this model; normalization is undefined"
        )
    return default


def adcf_norm_at(m: CostModel, rates: Rates) -> float:
    """Normalized cost at one operating point; may exceed 1."""
    return adcf_at(m, rates) / adcf_default(m)


@dataclass(frozen=True)
class CostCurve:
    """Per-threshold unnormalized and normalized cost values."""

    thresholds: np.ndarray
    adcf: np.ndarray
    adcf_norm: np.ndarray

    def __len__(self) -> int:
        return self.thresholds.size


@dataclass(frozen=True)
class AdcfResult:
    """Outcome of the minimum-cost threshold sweep."""

    min_norm_adcf: float
    argmin_threshold: float
    default_cost: float
    curve: CostCurve | None = None

    def __post_init__(self) -> None:
        if not (0.0 <= self.min_norm_adcf <= 1.0):
            raise RangeError(
                f"minimum normalized cost must lie in [0, 1], got {self.min_norm_adcf!r}"
            )
        if not self.default_cost > 0.0:
            raise DegenerateModelError("default cost must be positive")


def _norm_cost_over(m: CostModel, s: ScoreSet, ts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(adcf, adcf_norm) arrays over the given thresholds.

    A class may be empty only when its cost weight is zero; its term then
    contributes exactly 0, matching :func:`adcf_at` bit for bit.
    """
    default = adcf_default(m)
    weights = (m.c_miss * m.pi_tar, m.c_fa_non * m.pi_non, m.c_fa_spf * m.pi_spf)
    terms = []
    for name, w, rejecting in (("tar", weights[0], False),
                               ("non", weights[1], True),
                               ("spf", weights[2], True)):
        arr = getattr(s, name)
        if arr.size == 0:
            if w != 0.0:
                raise EmptyClassError(name)
            terms.append(0.0)
            continue
        below = counts_below(np.sort(arr), ts)
        counts = (arr.size - below) if rejecting else below
        terms.append(w * (counts / arr.size))
    total = terms[0] + terms[1] + terms[2]
    return total, total / default


def min_adcf(m: CostModel, s: ScoreSet, *, keep_curve: bool = False) -> AdcfResult:
    """Minimum normalized cost over all thresholds, with its argmin.

    The sweep runs over the exact candidate set of
    :func:`adcfkit.errcurves.candidate_thresholds`; ties break toward the
    smallest threshold. The result is always in [0, 1] because the
    candidate set contains both default systems.
    """
    validate_cost_model(m)
    ts = candidates_from_pool(s.pooled())
    total, norm = _norm_cost_over(m, s, ts)
    idx = int(np.argmin(norm))  # first occurrence == smallest threshold
    return AdcfResult(
        min_norm_adcf=float(norm[idx]),
        argmin_threshold=float(ts[idx]),
        default_cost=adcf_default(m),
        curve=CostCurve(ts, total, norm) if keep_curve else None,
    )


def write_cost_curve_csv(curve: CostCurve, fh: IO[str]) -> None:
    # full-precision values: the minimum of the exported column must
    # reproduce the reported minimum exactly
    fh.write("threshold,adcf,adcf_norm\n")
    raw = curve.adcf.tolist()
    norm = curve.adcf_norm.tolist()
    for i in range(len(curve)):
        fh.write(f"{format_threshold(curve.thresholds[i])},{raw[i]!r},{norm[i]!r}\n")
