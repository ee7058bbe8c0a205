"""Shared errors and spectrum interchange"""
from .errors import (
    ACMRRError,
    UsageError,
    ValidationError,
    DomainError,
    CavitySingularityError,
    DataError,
    FitError,
    AccuracyError,
    EXIT_CODES,
)
from .spectrum_trace import SpectrumTrace, read_header, read_table, write_table, uniform_grid

__all__ = [
    'ACMRRError',
    'UsageError',
    'ValidationError',
    'DomainError',
    'CavitySingularityError',
    'DataError',
    'FitError',
    'AccuracyError',
    'EXIT_CODES',
    'SpectrumTrace',
    'read_header',
    'read_table',
    'write_table',
    'uniform_grid',
]
