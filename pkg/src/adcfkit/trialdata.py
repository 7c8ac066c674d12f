"""Trial keys, score collections, and cost-model parameters.

This module owns the data model and the text file formats; it never
computes a metric. All types are immutable after construction and safe
to share across threads.

File formats
------------
Trial key file   : ``<trial_id> <label>`` per line, labels ``target`` /
                   ``nontarget`` / ``spoof`` (case-insensitive). Lines
                   starting with ``#`` and blank lines are ignored.
Score file       : ``<trial_id> <score>`` per line. ``-inf`` is accepted
                   (gated-rejection sentinel); ``+inf``/``nan`` are not.
Dual-score file  : ``<trial_id> <asv_score> <cm_score>``, both finite.
Cost config file : flat ``key=value`` lines with keys ``pi_tar, pi_non,
                   pi_spf, c_miss, c_fa_non, c_fa_spf``.
"""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass, fields
from typing import Iterable, Mapping

import numpy as np

from .errors import (
    AllZeroCostError,
    DuplicateTrialError,
    InputError,
    MissingScoreError,
    NegativeValueError,
    ParseError,
    PriorSumError,
    RangeError,
    UnknownTrialError,
)

#: Absolute tolerance on prior sums (decimal configs stay legal, sloppy
#: priors do not).
PRIOR_SUM_TOL = 1e-9


class TrialClass(enum.Enum):
    """Ground-truth label of a trial."""

    TARGET = "target"
    NONTARGET = "nontarget"
    SPOOF = "spoof"

    @classmethod
    def parse(cls, token: str) -> "TrialClass":
        try:
            return cls(token.strip().lower())
        except ValueError:
            raise InputError(
                f"unknown trial label {token!r}; expected one of "
                "'target', 'nontarget', 'spoof'"
            ) from None


@dataclass(frozen=True)
class Trial:
    """A single trial: identifier plus ground-truth class."""

    id: str
    label: TrialClass

    def __post_init__(self) -> None:
        if not self.id:
            raise InputError("trial id must be a non-empty string")


def _score_array(values, name: str, allow_neg_inf: bool) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64).reshape(-1)
    if np.isnan(arr).any():
        raise InputError(f"{name} scores contain NaN")
    if np.isposinf(arr).any():
        raise InputError(f"{name} scores contain +inf")
    if not allow_neg_inf and np.isneginf(arr).any():
        raise InputError(f"{name} scores contain -inf")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class ScoreSet:
    """Per-class detection scores of a single-score system.

    Scores are real numbers; ``-inf`` is admitted as the gated-rejection
    sentinel (it sorts below every finite score and is rejected at every
    finite threshold).
    """

    tar: np.ndarray
    non: np.ndarray
    spf: np.ndarray

    def __post_init__(self) -> None:
        for name in ("tar", "non", "spf"):
            object.__setattr__(
                self, name, _score_array(getattr(self, name), name, allow_neg_inf=True)
            )
        if self.tar.size + self.non.size + self.spf.size == 0:
            raise InputError("ScoreSet must contain at least one score")

    @property
    def counts(self) -> tuple[int, int, int]:
        return self.tar.size, self.non.size, self.spf.size

    def pooled(self) -> np.ndarray:
        return np.concatenate([self.tar, self.non, self.spf])


@dataclass(frozen=True)
class PairedScores:
    """Paired (ASV, CM) scores for the trials of one class."""

    asv: np.ndarray
    cm: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "asv", _score_array(self.asv, "asv", allow_neg_inf=False))
        object.__setattr__(self, "cm", _score_array(self.cm, "cm", allow_neg_inf=False))
        if self.asv.size != self.cm.size:
            raise InputError("asv and cm score columns must have equal length")

    @property
    def size(self) -> int:
        return self.asv.size


@dataclass(frozen=True)
class DualScoreSet:
    """Per-class paired (ASV score, CM score) samples of a tandem system.

    Both columns must be finite at ingestion; sentinels only ever appear
    in gated single-score output.
    """

    tar: PairedScores
    non: PairedScores
    spf: PairedScores

    def __post_init__(self) -> None:
        if self.tar.size + self.non.size + self.spf.size == 0:
            raise InputError("DualScoreSet must contain at least one trial")

    @property
    def counts(self) -> tuple[int, int, int]:
        return self.tar.size, self.non.size, self.spf.size


@dataclass(frozen=True)
class CostModel:
    """Priors and costs of the three-class detection cost.

    ``pi_*`` are the asserted class priors (summing to one); ``c_miss``
    is the cost of rejecting a target, ``c_fa_non``/``c_fa_spf`` the
    costs of accepting a nontarget/spoof.
    """

    pi_tar: float
    pi_non: float
    pi_spf: float
    c_miss: float
    c_fa_non: float
    c_fa_spf: float

    def as_dict(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def validate_cost_model(m: CostModel) -> CostModel:
    """Check all CostModel invariants; return ``m`` unchanged if they hold.

    Raises PriorSumError, NegativeValueError, or AllZeroCostError.
    Validation is idempotent.
    """
    for name in ("pi_tar", "pi_non", "pi_spf", "c_miss", "c_fa_non", "c_fa_spf"):
        v = getattr(m, name)
        if not (isinstance(v, (int, float)) and math.isfinite(v)) or v < 0:
            raise NegativeValueError(f"{name} must be a finite non-negative number, got {v!r}")
    s = m.pi_tar + m.pi_non + m.pi_spf
    if abs(s - 1.0) > PRIOR_SUM_TOL:
        raise PriorSumError(f"priors sum to {s!r}, expected 1 within {PRIOR_SUM_TOL}")
    if m.c_miss == 0 and m.c_fa_non == 0 and m.c_fa_spf == 0:
        raise AllZeroCostError("at least one cost must be positive")
    return m


@dataclass(frozen=True)
class GeneralCostSpec:
    """K-class prior vector plus K x K decision-cost matrix.

    ``costs[q, k]`` is the cost of deciding class ``q`` when the truth is
    class ``k``; the diagonal (correct decisions) must be zero.
    """

    priors: np.ndarray
    costs: np.ndarray

    def __post_init__(self) -> None:
        priors = np.asarray(self.priors, dtype=np.float64).reshape(-1)
        costs = np.asarray(self.costs, dtype=np.float64)
        k = priors.size
        if k < 2:
            raise InputError(f"need at least 2 classes, got {k}")
        if costs.shape != (k, k):
            raise InputError(f"cost matrix must be {k}x{k}, got shape {costs.shape}")
        if not np.all(np.isfinite(priors)) or np.any(priors < 0):
            raise NegativeValueError("priors must be finite and non-negative")
        s = float(np.sum(priors))
        if abs(s - 1.0) > PRIOR_SUM_TOL:
            raise PriorSumError(f"priors sum to {s!r}, expected 1 within {PRIOR_SUM_TOL}")
        if not np.all(np.isfinite(costs)) or np.any(costs < 0):
            raise NegativeValueError("costs must be finite and non-negative")
        if np.any(np.diag(costs) != 0):
            raise RangeError("diagonal costs (correct decisions) must be zero")
        priors.flags.writeable = False
        costs.flags.writeable = False
        object.__setattr__(self, "priors", priors)
        object.__setattr__(self, "costs", costs)

    @property
    def k(self) -> int:
        return self.priors.size


def _check_unique_ids(trials: Iterable[Trial]) -> None:
    seen: set[str] = set()
    for t in trials:
        if t.id in seen:
            raise DuplicateTrialError(f"duplicate trial id {t.id!r}")
        seen.add(t.id)


def partition_scores(trials: list[Trial], scores: Mapping[str, float]) -> ScoreSet:
    """Route each score into the class list matching its trial's label.

    Every keyed trial must be scored and every scored id must be keyed;
    the partition is total (class sizes sum to the trial count).
    """
    _check_unique_ids(trials)
    ids = {t.id for t in trials}
    for sid in scores:
        if sid not in ids:
            raise UnknownTrialError(f"scored trial {sid!r} is not in the trial key")
    buckets: dict[TrialClass, list[float]] = {c: [] for c in TrialClass}
    for t in trials:
        if t.id not in scores:
            raise MissingScoreError(f"no score for trial {t.id!r}")
        buckets[t.label].append(scores[t.id])
    return ScoreSet(
        tar=buckets[TrialClass.TARGET],
        non=buckets[TrialClass.NONTARGET],
        spf=buckets[TrialClass.SPOOF],
    )


def partition_dual_scores(
    trials: list[Trial], scores: Mapping[str, tuple[float, float]]
) -> DualScoreSet:
    """Like :func:`partition_scores` for paired (ASV, CM) scores."""
    _check_unique_ids(trials)
    ids = {t.id for t in trials}
    for sid in scores:
        if sid not in ids:
            raise UnknownTrialError(f"scored trial {sid!r} is not in the trial key")
    asv: dict[TrialClass, list[float]] = {c: [] for c in TrialClass}
    cm: dict[TrialClass, list[float]] = {c: [] for c in TrialClass}
    for t in trials:
        if t.id not in scores:
            raise MissingScoreError(f"no score for trial {t.id!r}")
        a, c = scores[t.id]
        asv[t.label].append(a)
        cm[t.label].append(c)
    return DualScoreSet(
        tar=PairedScores(asv[TrialClass.TARGET], cm[TrialClass.TARGET]),
        non=PairedScores(asv[TrialClass.NONTARGET], cm[TrialClass.NONTARGET]),
        spf=PairedScores(asv[TrialClass.SPOOF], cm[TrialClass.SPOOF]),
    )


# ---------------------------------------------------------------------------
# file I/O


def _content_lines(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            yield lineno, line


def _parse_score_token(token: str, source: str, lineno: int, allow_neg_inf: bool) -> float:
    try:
        v = float(token)
    except ValueError:
        raise ParseError(source, lineno, f"cannot parse score {token!r}") from None
    if math.isnan(v) or v == math.inf or (v == -math.inf and not allow_neg_inf):
        raise ParseError(source, lineno, f"score {token!r} is not admissible here")
    return v


def read_trial_keys(path: str) -> list[Trial]:
    """Load a trial key file into a list of unique trials."""
    trials: list[Trial] = []
    seen: set[str] = set()
    for lineno, line in _content_lines(path):
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(path, lineno, f"expected '<trial_id> <label>', got {line!r}")
        tid, token = parts
        try:
            label = TrialClass.parse(token)
        except InputError as exc:
            raise ParseError(path, lineno, str(exc)) from None
        if tid in seen:
            raise DuplicateTrialError(f"{path}:{lineno}: duplicate trial id {tid!r}")
        seen.add(tid)
        trials.append(Trial(tid, label))
    return trials


def read_scores(path: str) -> dict[str, float]:
    """Load a single-score file (``-inf`` admitted, ``+inf``/``nan`` not)."""
    out: dict[str, float] = {}
    for lineno, line in _content_lines(path):
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(path, lineno, f"expected '<trial_id> <score>', got {line!r}")
        tid, token = parts
        if tid in out:
            raise DuplicateTrialError(f"{path}:{lineno}: duplicate trial id {tid!r}")
        out[tid] = _parse_score_token(token, path, lineno, allow_neg_inf=True)
    return out


def read_dual_scores(path: str) -> dict[str, tuple[float, float]]:
    """Load a dual-score file; both columns must be finite."""
    out: dict[str, tuple[float, float]] = {}
    for lineno, line in _content_lines(path):
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(
                path, lineno, f"expected '<trial_id> <asv_score> <cm_score>', got {line!r}"
            )
        tid, asv_tok, cm_tok = parts
        if tid in out:
            raise DuplicateTrialError(f"{path}:{lineno}: duplicate trial id {tid!r}")
        a = _parse_score_token(asv_tok, path, lineno, allow_neg_inf=False)
        c = _parse_score_token(cm_tok, path, lineno, allow_neg_inf=False)
        out[tid] = (a, c)
    return out


def format_score(v: float) -> str:
    # repr round-trips doubles exactly; -inf renders as '-inf'
    return repr(float(v))


def write_trial_keys(path: str, trials: Iterable[Trial]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for t in trials:
            fh.write(f"{t.id} {t.label.value}\n")


def write_scores(path: str, items: Iterable[tuple[str, float]]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for tid, v in items:
            fh.write(f"{tid} {format_score(v)}\n")


def write_dual_scores(path: str, items: Iterable[tuple[str, float, float]]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for tid, a, c in items:
            fh.write(f"{tid} {format_score(a)} {format_score(c)}\n")


# ---------------------------------------------------------------------------
# cost configs

_CONFIG_KEYS = ("pi_tar", "pi_non", "pi_spf", "c_miss", "c_fa_non", "c_fa_spf")

#: Built-in cost configurations, selectable by name.
COST_PRESETS: dict[str, CostModel] = {
    "adcf1": CostModel(pi_tar=0.94, pi_non=0.01, pi_spf=0.05,
                       c_miss=1.0, c_fa_non=10.0, c_fa_spf=10.0),
    "adcf2": CostModel(pi_tar=0.98, pi_non=0.01, pi_spf=0.01,
                       c_miss=1.0, c_fa_non=10.0, c_fa_spf=10.0),
}


def format_cost_config(m: CostModel) -> str:
    """Serialize a cost model; re-parsing yields bit-identical values."""
    return "".join(f"{k}={format_score(v)}\n" for k, v in m.as_dict().items())


def write_cost_config(path: str, m: CostModel) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_cost_config(m))


def read_cost_config(path: str) -> CostModel:
    """Parse and validate a ``key=value`` cost config file."""
    values: dict[str, float] = {}
    for lineno, line in _content_lines(path):
        if "=" not in line:
            raise ParseError(path, lineno, f"expected 'key=value', got {line!r}")
        key, _, token = line.partition("=")
        key = key.strip()
        if key not in _CONFIG_KEYS:
            raise ParseError(path, lineno, f"unknown config key {key!r}")
        if key in values:
            raise ParseError(path, lineno, f"duplicate config key {key!r}")
        try:
            values[key] = float(token.strip())
        except ValueError:
            raise ParseError(path, lineno, f"cannot parse value {token.strip()!r}") from None
    missing = [k for k in _CONFIG_KEYS if k not in values]
    if missing:
        raise InputError(f"{path}: missing config keys: {', '.join(missing)}")
    return validate_cost_model(CostModel(**values))


def resolve_cost_config(name_or_path: str) -> tuple[str, CostModel]:
    """Resolve a preset name or a config file path to (name, model)."""
    if name_or_path in COST_PRESETS:
        return name_or_path, validate_cost_model(COST_PRESETS[name_or_path])
    if os.path.exists(name_or_path):
        name = os.path.splitext(os.path.basename(name_or_path))[0]
        return name, read_cost_config(name_or_path)
    raise InputError(
        f"unknown cost config {name_or_path!r}: not a preset "
        f"({', '.join(sorted(COST_PRESETS))}) and not an existing file"
    )
