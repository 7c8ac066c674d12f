"""Tandem-system evaluation: AND-gate error rates, t-DCF, gated cascade.

A tandem system pairs a speaker detector (ASV, score ``s_asv``) with a
spoof detector (CM, score ``s_cm``) and accepts a trial iff both
sub-systems accept: ``s_asv >= t_asv AND s_cm >= t_cm``. Tandem rates
are computed empirically from the paired per-trial scores by default;
the class-conditional independence composition is a separate operation.

``gate_scores`` converts a two-score system into a single-score system
(score passes through when the gating sub-system accepts, ``-inf``
otherwise), which can then be evaluated with :func:`adcfkit.adcf.min_adcf`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO

import numpy as np

from .adcf import adcf_default
from .errcurves import candidates_from_pool, format_threshold
from .errors import EmptyClassError, InputError, RangeError
from .trialdata import CostModel, DualScoreSet, PairedScores, ScoreSet, validate_cost_model

GATE_ORDERS = ("cm_first", "asv_first")


def _check_rate(name: str, v: float) -> float:
    if not (0.0 <= v <= 1.0):
        raise RangeError(f"{name} must lie in [0, 1], got {v!r}")
    return float(v)


@dataclass(frozen=True)
class TandemRates:
    """Tandem detection error rates at one (t_asv, t_cm) threshold pair."""

    p_miss_tar: float
    p_fa_non: float
    p_fa_spf: float

    def __post_init__(self) -> None:
        for name in ("p_miss_tar", "p_fa_non", "p_fa_spf"):
            _check_rate(name, getattr(self, name))


@dataclass(frozen=True)
class ConstrainedCoeffs:
    """Coefficients of the frozen-ASV cost ``c0 + c1*P_miss_cm + c2*P_fa_cm``.

    ``c1`` may be negative for extreme frozen operating points; it is
    reported unclamped.
    """

    c0: float
    c1: float
    c2: float

    def __post_init__(self) -> None:
        if self.c0 < 0 or self.c2 < 0:
            raise RangeError("c0 and c2 must be non-negative")


@dataclass(frozen=True)
class TdcfResult:
    """Outcome of the tandem cost minimization."""

    min_norm_tdcf: float
    t_asv: float
    t_cm: float
    default_cost: float


def _require_all_classes(d: DualScoreSet) -> None:
    for name in ("tar", "non", "spf"):
        if getattr(d, name).size == 0:
            raise EmptyClassError(name)


def tandem_rates_empirical(d: DualScoreSet, t_asv: float, t_cm: float) -> TandemRates:
    """Tandem rates counted per trial under the AND gate (no independence
    assumption)."""
    _require_all_classes(d)

    def accepted(p: PairedScores) -> int:
        return int(np.count_nonzero((p.asv >= t_asv) & (p.cm >= t_cm)))

    n_tar, n_non, n_spf = d.counts
    return TandemRates(
        p_miss_tar=(n_tar - accepted(d.tar)) / n_tar,
        p_fa_non=accepted(d.non) / n_non,
        p_fa_spf=accepted(d.spf) / n_spf,
    )


def tandem_rates_analytic(
    asv_rates: tuple[float, float, float], cm_rates: tuple[float, float]
) -> TandemRates:
    """Compose sub-system rates under class-conditional independence.

    ``asv_rates`` = (p_miss_asv, p_fa_non_asv, p_fa_spf_asv);
    ``cm_rates`` = (p_miss_cm on bonafide speech, p_fa_cm on spoofed speech).
    """
    p_miss_asv, p_fa_non_asv, p_fa_spf_asv = asv_rates
    p_miss_cm, p_fa_cm = cm_rates
    for name, v in (("p_miss_asv", p_miss_asv), ("p_fa_non_asv", p_fa_non_asv),
                    ("p_fa_spf_asv", p_fa_spf_asv), ("p_miss_cm", p_miss_cm),
                    ("p_fa_cm", p_fa_cm)):
        _check_rate(name, v)
    # p_miss form chosen so a perfect or dummy CM passes the ASV rate
    # through exactly: a + (1-a)*b == 1 - (1-a)(1-b)
    return TandemRates(
        p_miss_tar=p_miss_asv + (1.0 - p_miss_asv) * p_miss_cm,
        p_fa_non=p_fa_non_asv * (1.0 - p_miss_cm),
        p_fa_spf=p_fa_spf_asv * p_fa_cm,
    )


def tdcf_unconstrained(m: CostModel, r: TandemRates) -> float:
    """Tandem detection cost at one operating point (unnormalized)."""
    validate_cost_model(m)
    return (
        m.c_miss * m.pi_tar * r.p_miss_tar
        + m.c_fa_non * m.pi_non * r.p_fa_non
        + m.c_fa_spf * m.pi_spf * r.p_fa_spf
    )


def constrained_coeffs(
    m: CostModel, frozen_asv_rates: tuple[float, float, float]
) -> ConstrainedCoeffs:
    """Coefficients of the cost as a function of the CM operating point,
    with the ASV sub-system frozen at the given marginal rates.

    Obtained by expanding the independence composition inside the tandem
    cost and collecting the P_miss_cm / P_fa_cm terms.
    """
    validate_cost_model(m)
    p_miss_asv, p_fa_non_asv, p_fa_spf_asv = frozen_asv_rates
    for name, v in (("p_miss_asv", p_miss_asv), ("p_fa_non_asv", p_fa_non_asv),
                    ("p_fa_spf_asv", p_fa_spf_asv)):
        _check_rate(name, v)
    return ConstrainedCoeffs(
        c0=m.c_miss * m.pi_tar * p_miss_asv + m.c_fa_non * m.pi_non * p_fa_non_asv,
        c1=m.c_miss * m.pi_tar * (1.0 - p_miss_asv) - m.c_fa_non * m.pi_non * p_fa_non_asv,
        c2=m.c_fa_spf * m.pi_spf * p_fa_spf_asv,
    )


def tdcf_constrained(c: ConstrainedCoeffs, p_miss_cm: float, p_fa_cm: float) -> float:
    """Frozen-ASV tandem cost ``c0 + c1*p_miss_cm + c2*p_fa_cm``."""
    _check_rate("p_miss_cm", p_miss_cm)
    _check_rate("p_fa_cm", p_fa_cm)
    return c.c0 + c.c1 * p_miss_cm + c.c2 * p_fa_cm


def _accept_grid(p: PairedScores, asv_ts: np.ndarray, cm_ts: np.ndarray) -> np.ndarray:
    """accepted[a, c] = #{trials: asv >= asv_ts[a] and cm >= cm_ts[c]}."""
    ia = np.searchsorted(asv_ts, p.asv, side="right")  # thresholds <= score
    ic = np.searchsorted(cm_ts, p.cm, side="right")
    hist = np.zeros((asv_ts.size + 1, cm_ts.size + 1), dtype=np.int64)
    np.add.at(hist, (ia, ic), 1)
    suffix = hist[::-1, ::-1].cumsum(axis=0).cumsum(axis=1)[::-1, ::-1]
    return suffix[1:, 1:]


def min_tdcf(m: CostModel, d: DualScoreSet, frozen_t_asv: float | None = None) -> TdcfResult:
    """Minimum normalized tandem cost over candidate threshold pairs.

    With ``frozen_t_asv`` the minimization is one-dimensional over CM
    candidates; otherwise the full (ASV x CM) candidate grid is swept
    exactly. The normalizer is the same default-system cost used by the
    single-score metric, so the two are comparable on one scale. The
    argmin tie-break is the lexicographically smallest (t_asv, t_cm).
    """
    validate_cost_model(m)
    _require_all_classes(d)
    default = adcf_default(m)
    if frozen_t_asv is None:
        asv_ts = candidates_from_pool(
            np.concatenate([d.tar.asv, d.non.asv, d.spf.asv])
        )
    else:
        asv_ts = np.array([float(frozen_t_asv)])
    cm_ts = candidates_from_pool(np.concatenate([d.tar.cm, d.non.cm, d.spf.cm]))

    n_tar, n_non, n_spf = d.counts
    acc_tar = _accept_grid(d.tar, asv_ts, cm_ts)
    acc_non = _accept_grid(d.non, asv_ts, cm_ts)
    acc_spf = _accept_grid(d.spf, asv_ts, cm_ts)
    total = (
        m.c_miss * m.pi_tar * ((n_tar - acc_tar) / n_tar)
        + m.c_fa_non * m.pi_non * (acc_non / n_non)
        + m.c_fa_spf * m.pi_spf * (acc_spf / n_spf)
    )
    norm = total / default
    flat = int(np.argmin(norm))  # row-major first == lexicographic smallest
    i, j = divmod(flat, cm_ts.size)
    return TdcfResult(
        min_norm_tdcf=float(norm[i, j]),
        t_asv=float(asv_ts[i]),
        t_cm=float(cm_ts[j]),
        default_cost=default,
    )


def tdcf_norm_grid(
    m: CostModel, d: DualScoreSet, frozen_t_asv: float | None = None
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(asv_thresholds, cm_thresholds, normalized-cost grid) for export."""
    validate_cost_model(m)
    _require_all_classes(d)
    default = adcf_default(m)
    if frozen_t_asv is None:
        asv_ts = candidates_from_pool(np.concatenate([d.tar.asv, d.non.asv, d.spf.asv]))
    else:
        asv_ts = np.array([float(frozen_t_asv)])
    cm_ts = candidates_from_pool(np.concatenate([d.tar.cm, d.non.cm, d.spf.cm]))
    n_tar, n_non, n_spf = d.counts
    total = (
        m.c_miss * m.pi_tar * ((n_tar - _accept_grid(d.tar, asv_ts, cm_ts)) / n_tar)
        + m.c_fa_non * m.pi_non * (_accept_grid(d.non, asv_ts, cm_ts) / n_non)
        + m.c_fa_spf * m.pi_spf * (_accept_grid(d.spf, asv_ts, cm_ts) / n_spf)
    )
    return asv_ts, cm_ts, total / default


def write_tdcf_grid_csv(
    asv_ts: np.ndarray, cm_ts: np.ndarray, norm: np.ndarray, fh: IO[str]
) -> None:
    fh.write("t_asv,t_cm,tdcf_norm\n")
    for i in range(asv_ts.size):
        ta = format_threshold(asv_ts[i])
        for j in range(cm_ts.size):
            fh.write(f"{ta},{format_threshold(cm_ts[j])},{norm[i, j]:.12g}\n")


def gate_column(asv: np.ndarray, cm: np.ndarray, order: str, t_gate: float) -> np.ndarray:
    """Apply the soft-decision gate to one pair of score columns.

    ``cm_first``: emit the ASV score when the CM score clears ``t_gate``,
    else ``-inf``; ``asv_first`` is the symmetric form.
    """
    if order not in GATE_ORDERS:
        raise InputError(f"gate order must be one of {GATE_ORDERS}, got {order!r}")
    asv = np.asarray(asv, dtype=np.float64)
    cm = np.asarray(cm, dtype=np.float64)
    if order == "cm_first":
        return np.where(cm >= t_gate, asv, -np.inf)
    return np.where(asv >= t_gate, cm, -np.inf)


def gate_scores(d: DualScoreSet, order: str, t_gate: float) -> ScoreSet:
    """Collapse a dual-score system into a gated single-score system.

    The output feeds directly into :func:`adcfkit.adcf.min_adcf`; class
    labels are preserved.
    """
    return ScoreSet(
        tar=gate_column(d.tar.asv, d.tar.cm, order, t_gate),
        non=gate_column(d.non.asv, d.non.cm, order, t_gate),
        spf=gate_column(d.spf.asv, d.spf.cm, order, t_gate),
    )
