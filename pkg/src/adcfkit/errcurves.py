"""Step-function detection-error-rate curves over candidate thresholds.

Decision convention used everywhere in this package: a trial is accepted
iff its score ``s >= t``. Under that convention every achievable
operating point is realized on the finite candidate set
``{-inf} | {distinct finite scores} | {max score + 1}``, so sweeping that
set is an exact minimization, not an approximation.

All rates are exact ratios of integer counts; no floating-point
accumulation happens during counting.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import IO

import numpy as np

from .errors import EmptyClassError
from .trialdata import ScoreSet

NEG_INF = float("-inf")


def candidates_from_pool(pool: np.ndarray) -> np.ndarray:
    """Candidate thresholds for a pooled score sample.

    Returns the strictly increasing array ``[-inf, s_1, ..., s_m, past]``
    where ``s_i`` are the distinct finite pooled scores and ``past`` lies
    strictly above the maximum (all-reject operating point).
    """
    pool = np.asarray(pool, dtype=np.float64)
    if pool.size == 0:
        raise EmptyClassError("pooled", "cannot build thresholds from an empty score pool")
    finite = pool[np.isfinite(pool)]
    if finite.size == 0:
        # all scores are the -inf sentinel; any finite threshold rejects all
        return np.array([NEG_INF, 0.0])
    uniq = np.unique(finite)
    past = uniq[-1] + 1.0
    if not past > uniq[-1]:  # magnitude so large that +1 is absorbed
        past = np.nextafter(uniq[-1], np.inf)
    return np.concatenate([[NEG_INF], uniq, [past]])


def candidate_thresholds(s: ScoreSet) -> np.ndarray:
    """Candidate thresholds covering every operating point of ``s``."""
    return candidates_from_pool(s.pooled())


def counts_below(scores_sorted: np.ndarray, thresholds: np.ndarray) -> np.ndarray:
    """Number of scores strictly below each threshold (rejected trials)."""
    return np.searchsorted(scores_sorted, thresholds, side="left")


def rate_at(scores, rejecting: bool, t: float) -> Fraction:
    """Single detection error rate at threshold ``t``, as an exact ratio.

    With ``rejecting=False`` the class should be accepted and the miss
    rate (fraction of scores below ``t``) is returned; with
    ``rejecting=True`` the false-alarm rate (fraction of scores at or
    above ``t``) is returned.
    """
    arr = np.asarray(scores, dtype=np.float64).reshape(-1)
    if arr.size == 0:
        raise EmptyClassError("scores", "cannot compute a rate over an empty class")
    n = arr.size
    below = int(np.count_nonzero(arr < t))
    return Fraction(n - below, n) if rejecting else Fraction(below, n)


@dataclass(frozen=True)
class RateCurve:
    """Exact step-function error rates of a ScoreSet at every candidate.

    Rates are stored as integer numerators over per-class denominators;
    ``p_miss`` is non-decreasing in the threshold, both false-alarm rates
    are non-increasing. The first row (threshold ``-inf``) is the
    all-accept point ``(0, 1, 1)``; the last row is the all-reject point
    ``(1, 0, 0)``.
    """

    thresholds: np.ndarray
    miss_counts: np.ndarray
    fa_non_counts: np.ndarray
    fa_spf_counts: np.ndarray
    n_tar: int
    n_non: int
    n_spf: int

    def __len__(self) -> int:
        return self.thresholds.size

    @property
    def p_miss(self) -> np.ndarray:
        return self.miss_counts / self.n_tar

    @property
    def p_fa_non(self) -> np.ndarray:
        return self.fa_non_counts / self.n_non

    @property
    def p_fa_spf(self) -> np.ndarray:
        return self.fa_spf_counts / self.n_spf

    def row(self, i: int) -> tuple[float, Fraction, Fraction, Fraction]:
        """(threshold, p_miss, p_fa_non, p_fa_spf) with rates as Fractions."""
        return (
            float(self.thresholds[i]),
            Fraction(int(self.miss_counts[i]), self.n_tar),
            Fraction(int(self.fa_non_counts[i]), self.n_non),
            Fraction(int(self.fa_spf_counts[i]), self.n_spf),
        )


def build_curve(s: ScoreSet) -> RateCurve:
    """Sweep all candidate thresholds once and return the exact rate curve.

    Requires all three class lists to be non-empty; construction is
    O(N log N) in the total score count (sort once, one vectorized sweep).
    """
    for name in ("tar", "non", "spf"):
        if getattr(s, name).size == 0:
            raise EmptyClassError(name)
    ts = candidate_thresholds(s)
    tar = np.sort(s.tar)
    non = np.sort(s.non)
    spf = np.sort(s.spf)
    miss = counts_below(tar, ts)
    fa_non = non.size - counts_below(non, ts)
    fa_spf = spf.size - counts_below(spf, ts)
    return RateCurve(
        thresholds=ts,
        miss_counts=miss,
        fa_non_counts=fa_non,
        fa_spf_counts=fa_spf,
        n_tar=tar.size,
        n_non=non.size,
        n_spf=spf.size,
    )


def format_threshold(t: float) -> str:
    return "-inf" if t == NEG_INF else repr(float(t))


def write_curve_csv(curve: RateCurve, fh: IO[str]) -> None:
    """Export the rate curve as CSV (rates with 12 significant digits)."""
    fh.write("threshold,p_miss,p_fa_non,p_fa_spf\n")
    p_miss, p_fa_non, p_fa_spf = curve.p_miss, curve.p_fa_non, curve.p_fa_spf
    for i in range(len(curve)):
        fh.write(
            f"{format_threshold(curve.thresholds[i])},"
            f"{p_miss[i]:.12g},{p_fa_non[i]:.12g},{p_fa_spf[i]:.12g}\n"
        )
