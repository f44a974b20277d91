"""Exception hierarchy shared by every tangle module.

The CLI maps the three branches to exit codes: ConfigError -> 1,
DataError -> 2, ConvergenceError -> 3.
"""
from typing import Iterable, Optional


class TangleError(Exception):
    """Base exception for tangle errors"""
    pass


class ConfigError(TangleError):
    """Raised when a run configuration is missing or invalid"""

    def __init__(self, message: str, fields: Optional[Iterable[str]] = None):
        super().__init__(message)
        self.fields = list(fields or [])


class DataError(TangleError):
    """Raised when input data cannot be used for the requested computation"""
    pass


class DimensionError(DataError):
    """Raised when operator dimensions do not agree"""
    pass


class ParseError(DataError):
    """Raised when a text artifact cannot be parsed"""

    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class CoverageError(DataError):
    """Raised when a count table does not cover the required settings"""

    def __init__(self, message: str, missing: Optional[Iterable[str]] = None):
        super().__init__(message)
        self.missing = list(missing or [])


class RankDeficientError(DataError):
    """Raised when measurement settings are not informationally complete"""
    pass


class LikelihoodError(DataError):
    """Raised when the likelihood is undefined for a state"""
    pass


class EmissionError(DataError):
    """Raised when no photon amplitude is available to condition on"""
    pass


class UnderpopulatedBinError(DataError):
    """Raised when a detection-time bin holds too few events"""
    pass


class FitError(DataError):
    """Raised when a fit has a degenerate design"""
    pass


class ConvergenceError(TangleError):
    """Raised when a numerical procedure does not reach its tolerance"""
    pass


class IntegrationError(ConvergenceError):
    """Raised when master-equation integration misses its trace tolerance"""
    pass
