"""General K-class Bayes detection cost and its two-class specialization.

The total cost of a classifier is ``sum_{q,k} costs[q,k] * P[q,k] *
priors[k]`` where ``P[q,k]`` is the probability of deciding class ``q``
when the truth is class ``k``. The familiar two-class detection cost
function and the three-class single-score cost are both instances of
this form (see :mod:`adcfkit.adcf` for the latter).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    CountMismatchError,
    DimensionMismatchError,
    EmptyClassError,
    RangeError,
    ZeroClassCountError,
)
from .trialdata import GeneralCostSpec, CostModel, ScoreSet

#: Tolerance on conditional-probability column sums (mirrors the
#: prior-sum tolerance).
COLUMN_SUM_TOL = 1e-9


@dataclass(frozen=True)
class ConditionalMatrix:
    """Matrix of classifier conditional probabilities.

    ``probs[q, k] = Pr(decide a_q | truth a_k)``; every column sums to 1.
    """

    probs: np.ndarray

    def __post_init__(self) -> None:
        probs = np.asarray(self.probs, dtype=np.float64)
        if probs.ndim != 2 or probs.shape[0] != probs.shape[1]:
            raise DimensionMismatchError(f"expected a square matrix, got shape {probs.shape}")
        if not np.all(np.isfinite(probs)) or np.any(probs < 0) or np.any(probs > 1):
            raise RangeError("conditional probabilities must lie in [0, 1]")
        col_sums = probs.sum(axis=0)
        bad = np.abs(col_sums - 1.0) > COLUMN_SUM_TOL
        if bad.any():
            k = int(np.argmax(bad))
            raise CountMismatchError(
                f"column {k} sums to {col_sums[k]!r}, expected 1 within {COLUMN_SUM_TOL}"
            )
        probs.flags.writeable = False
        object.__setattr__(self, "probs", probs)

    @property
    def k(self) -> int:
        return self.probs.shape[0]


def empirical_conditional_matrix(counts, totals) -> ConditionalMatrix:
    """Estimate ``P[q, k] = N_qk / N_k`` from integer decision counts.

    ``counts[q, k]`` is the number of class-``k`` trials decided as class
    ``q``; ``totals[k]`` is the number of class-``k`` trials. Column sums
    of ``counts`` must equal ``totals`` exactly.
    """
    counts = np.asarray(counts, dtype=np.int64)
    totals = np.asarray(totals, dtype=np.int64).reshape(-1)
    k = totals.size
    if counts.shape != (k, k):
        raise DimensionMismatchError(
            f"counts must be {k}x{k} to match {k} totals, got shape {counts.shape}"
        )
    if np.any(totals <= 0):
        raise ZeroClassCountError(f"every class total must be positive, got {totals.tolist()}")
    if np.any(counts < 0):
        raise CountMismatchError("decision counts must be non-negative")
    col = counts.sum(axis=0)
    if np.any(col != totals):
        raise CountMismatchError(
            f"column sums {col.tolist()} do not match class totals {totals.tolist()}"
        )
    return ConditionalMatrix(counts / totals)


def binary_conditional_matrix(s: ScoreSet, t: float) -> ConditionalMatrix:
    """3x3 conditional matrix of the accept/reject rule ``s >= t``.

    A single-score system cannot split rejections between the nontarget
    and spoof decisions, so all rejection mass sits in the 'decide
    nontarget' row and the 'decide spoof' row is zero.
    """
    for name in ("tar", "non", "spf"):
        if getattr(s, name).size == 0:
            raise EmptyClassError(name)
    accept = []
    reject = []
    for arr in (s.tar, s.non, s.spf):
        n = arr.size
        acc = int(np.count_nonzero(arr >= t))
        accept.append(acc / n)
        reject.append((n - acc) / n)
    return ConditionalMatrix(np.array([accept, reject, [0.0, 0.0, 0.0]]))


def total_cost(spec: GeneralCostSpec, p: ConditionalMatrix) -> float:
    """Expected decision cost ``sum_{q,k} costs[q,k] * P[q,k] * priors[k]``."""
    if spec.k != p.k:
        raise DimensionMismatchError(f"cost spec has K={spec.k} but matrix has K={p.k}")
    return float(np.sum(spec.costs * p.probs * spec.priors[np.newaxis, :]))


def cost_spec_from_model(m: CostModel) -> GeneralCostSpec:
    """Three-class cost spec equivalent to a single-score CostModel.

    Rows/columns are ordered (target, nontarget, spoof); both rejection
    decisions of a target cost ``c_miss``, and nontarget/spoof confusions
    are free because the binary system never tells them apart.
    """
    costs = np.array(
        [
            [0.0, m.c_fa_non, m.c_fa_spf],
            [m.c_miss, 0.0, 0.0],
            [m.c_miss, 0.0, 0.0],
        ]
    )
    return GeneralCostSpec(priors=[m.pi_tar, m.pi_non, m.pi_spf], costs=costs)


def _check_rate(name: str, v: float) -> float:
    if not (0.0 <= v <= 1.0):
        raise RangeError(f"{name} must lie in [0, 1], got {v!r}")
    return float(v)


def dcf(c_miss: float, c_fa: float, pi_tar: float, p_miss: float, p_fa: float) -> float:
    """Two-class detection cost ``c_miss*pi_tar*p_miss + c_fa*(1-pi_tar)*p_fa``."""
    _check_rate("pi_tar", pi_tar)
    _check_rate("p_miss", p_miss)
    _check_rate("p_fa", p_fa)
    return c_miss * pi_tar * p_miss + c_fa * (1.0 - pi_tar) * p_fa
