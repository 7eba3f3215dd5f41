"""Exception hierarchy shared across the package."""


class EvotaxError(Exception):
    """Base class for all package errors."""


class InvalidParams(EvotaxError, ValueError):
    """A parameter violates its documented domain."""


class DegenerateAnchors(InvalidParams):
    """The two audit-probability anchors share an x-coordinate but disagree in value."""


class AmbiguousGame(EvotaxError):
    """One of the classification comparisons is an exact tie.

    Carries the set of tied comparisons, e.g. {"P=S", "T=R"}.
    """

    def __init__(self, ties):
        self.ties = frozenset(ties)
        super().__init__(f"game classification is ambiguous, exact ties: {sorted(self.ties)}")


class UnclassifiedGame(EvotaxError):
    """The payoff ordering falls outside the taxonomy (cannot arise from valid game params)."""


class SizeMismatch(EvotaxError, ValueError):
    """Population arrays and network size disagree."""


class EmptyGraph(EvotaxError, ValueError):
    """Operation requires at least one edge."""


class TooFewSamples(EvotaxError, ValueError):
    """Power-law fitting needs at least 50 samples."""


class TooFewDistinct(EvotaxError, ValueError):
    """Power-law fitting needs at least two distinct values."""


class NonPositiveSample(EvotaxError, ValueError):
    """Degree samples must be positive integers."""


class ParseError(EvotaxError, ValueError):
    """A data file failed to parse; carries the offending line number."""

    def __init__(self, message, line_no=None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class NegativeAmount(EvotaxError, ValueError):
    """Declared amounts must be non-negative."""


class BothZero(EvotaxError, ValueError):
    """Mismatch ratio is undefined when both declarations are zero."""


class EmptyInput(EvotaxError, ValueError):
    """Operation requires a non-empty input collection."""


class UnknownAxis(EvotaxError, ValueError):
    """Sweep axis does not name a tunable parameter."""


class ConfigError(EvotaxError, ValueError):
    """Config file is malformed or contains unknown keys."""
