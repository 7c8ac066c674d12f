"""Equal error rates over the three evaluation protocols.

The two-class kernel finds the point where the piecewise-linear
interpolation of the empirical (P_fa(t), P_miss(t)) operating-point
sequence crosses P_miss = P_fa. Interpolation between adjacent operating
points is a convention (the estimator is otherwise underdetermined); it
is deterministic and the sign test uses exact integer arithmetic, so
results are reproducible to the bit.

The pooled-negatives protocol (``sasv_eer``) depends on the empirical
nontarget/spoof mix of the evaluation data. It is provided for
completeness but reporting it is discouraged; prefer ``sv_eer`` and
``spf_eer`` plus a detection cost.
"""

from __future__ import annotations

import math

from dataclasses import dataclass

import numpy as np

from .errcurves import candidates_from_pool, counts_below
from .errors import EmptyClassError
from .trialdata import ScoreSet


@dataclass(frozen=True)
class EerResult:
    """Equal error rate and the threshold of the crossing point."""

    eer: float
    threshold: float


def eer_two_class(pos, neg) -> EerResult:
    """EER between a positive (accept) and a negative (reject) class.

    If an exact operating point has P_miss == P_fa the smallest such
    threshold is returned; otherwise the crossing is interpolated on the
    segment where P_miss - P_fa changes sign.
    """
    pos = np.sort(np.asarray(pos, dtype=np.float64).reshape(-1))
    neg = np.sort(np.asarray(neg, dtype=np.float64).reshape(-1))
    if pos.size == 0:
        raise EmptyClassError("positive")
    if neg.size == 0:
        raise EmptyClassError("negative")
    n_pos, n_neg = pos.size, neg.size
    ts = candidates_from_pool(np.concatenate([pos, neg]))
    miss = counts_below(pos, ts)
    fa = n_neg - counts_below(neg, ts)
    # sign of P_miss - P_fa without division: miss*n_neg - fa*n_pos
    diff = miss.astype(np.int64) * n_neg - fa.astype(np.int64) * n_pos
    # diff is non-decreasing, starts at -n_pos*n_neg, ends at +n_pos*n_neg
    i = int(np.argmax(diff >= 0))
    if diff[i] == 0:
        return EerResult(eer=int(miss[i]) / n_pos, threshold=float(ts[i]))
    m1, f1 = int(miss[i - 1]) / n_pos, int(fa[i - 1]) / n_neg
    m2, f2 = int(miss[i]) / n_pos, int(fa[i]) / n_neg
    d1, d2 = m1 - f1, m2 - f2
    alpha = d1 / (d1 - d2)
    eer = m1 + alpha * (m2 - m1)
    t1, t2 = float(ts[i - 1]), float(ts[i])
    if math.isfinite(t1):
        threshold = t1 + alpha * (t2 - t1)
    else:
        # crossing on the sentinel segment (possible only with -inf gated
        # scores); report the finite endpoint
        threshold = t2
    return EerResult(eer=float(eer), threshold=threshold)


def sv_eer(s: ScoreSet) -> EerResult:
    """Speaker-verification EER: targets vs nontargets (spoofs ignored)."""
    if s.tar.size == 0:
        raise EmptyClassError("tar")
    if s.non.size == 0:
        raise EmptyClassError("non")
    return eer_two_class(s.tar, s.non)


def spf_eer(s: ScoreSet) -> EerResult:
    """Spoofing EER: bonafide targets vs spoofs (nontargets ignored)."""
    if s.tar.size == 0:
        raise EmptyClassError("tar")
    if s.spf.size == 0:
        raise EmptyClassError("spf")
    return eer_two_class(s.tar, s.spf)


def sasv_eer(s: ScoreSet) -> EerResult:
    """EER of targets vs the pooled nontarget+spoof multiset.

    The value is a function of the empirical class mix (duplicating spoof
    trials moves it); request it explicitly and report it with its
    ``discouraged`` marker.
    """
    if s.tar.size == 0:
        raise EmptyClassError("tar")
    if s.non.size + s.spf.size == 0:
        raise EmptyClassError("non+spf")
    return eer_two_class(s.tar, np.concatenate([s.non, s.spf]))
