"""
Errors - Exception hierarchy shared by every toolkit module
Each error category maps to one CLI exit code
"""

from typing import Any, Dict, Optional


class ACMRRError(Exception):
    """Base class for all toolkit errors"""

    category = "error"
    exit_code = 1


class UsageError(ACMRRError, ValueError):
    """Bad command, unknown option or unsupported choice"""

    category = "usage"
    exit_code = 2


class ValidationError(ACMRRError, ValueError):
    """Configuration value rejected during validation"""

    category = "validation"
    exit_code = 3

    def __init__(self, message: str, key: Optional[str] = None):
        super().__init__(message)
        self.key = key


class DomainError(ACMRRError, ValueError):
    """Physical input outside a model's validity window"""

    category = "domain"
    exit_code = 3


class CavitySingularityError(DomainError):
    """Ring transfer function denominator vanishes"""


class DataError(ACMRRError, ValueError):
    """Malformed trace, series or data file"""

    category = "data"
    exit_code = 4


class FitError(ACMRRError, RuntimeError):
    """Least-squares fit did not converge"""

    category = "fit"
    exit_code = 5

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class AccuracyError(ACMRRError, RuntimeError):
    """Numerical result not converged in its truncation"""

    category = "accuracy"
    exit_code = 6


EXIT_CODES = {
    "success": 0,
    "unexpected": ACMRRError.exit_code,
    "usage": UsageError.exit_code,
    "validation": ValidationError.exit_code,
    "data": DataError.exit_code,
    "fit": FitError.exit_code,
    "accuracy": AccuracyError.exit_code,
}
