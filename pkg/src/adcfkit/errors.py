"""Exception hierarchy shared by all adcfkit modules.

Two branches matter for the CLI: ``InputError`` (bad files, bad
configuration; exit code 2) and ``MetricDomainError`` (a metric is
undefined on otherwise well-formed data; exit code 1).
"""


class AdcfkitError(Exception):
    """Base class for every error raised by this package."""


class InputError(AdcfkitError):
    """Invalid input data or configuration."""


class ParseError(InputError):
    """A line of an input file could not be parsed."""

    def __init__(self, source: str, lineno: int, message: str):
        super().__init__(f"{source}:{lineno}: {message}")
        self.source = source
        self.lineno = lineno


class DuplicateTrialError(InputError):
    """The same trial id appears more than once."""


class MissingScoreError(InputError):
    """A keyed trial has no score."""


class UnknownTrialError(InputError):
    """A scored trial id is absent from the trial key."""


class PriorSumError(InputError):
    """Class priors do not sum to one within tolerance."""


class NegativeValueError(InputError):
    """A prior or cost is negative (or not a finite number)."""


class AllZeroCostError(InputError):
    """Every cost in the model is zero."""


class RangeError(InputError):
    """A rate, prior, or probability lies outside its admissible range."""


class ZeroClassCountError(InputError):
    """A class has zero trials where a positive count is required."""


class CountMismatchError(InputError):
    """Per-decision counts are inconsistent with per-class totals."""


class DimensionMismatchError(InputError):
    """Matrix/vector dimensions do not agree."""


class MetricDomainError(AdcfkitError):
    """The requested metric is undefined on the given data or model."""


class EmptyClassError(MetricDomainError):
    """A score list required by the metric is empty."""

    def __init__(self, class_name: str, message: str | None = None):
        super().__init__(message or f"class '{class_name}' has no scores")
        self.class_name = class_name


class DegenerateModelError(MetricDomainError):
    """The default-system cost is zero, so normalization is undefined."""
