"""Exception types shared across the package."""


class BenchmarkError(Exception):
    """Base class for all errors raised by this package."""


class UnknownGameError(BenchmarkError):
    """A game identifier is not in the canonical 57-game list."""


class ValidationError(BenchmarkError):
    """Input data violates a hard invariant (bad baseline, bad scale...)."""


class DatasetError(BenchmarkError):
    """A run-record dataset failed to load or is internally inconsistent."""


class MalformedLogError(BenchmarkError):
    """An episode log cannot be interpreted as a valid event stream."""
