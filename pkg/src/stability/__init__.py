"""Frequency-stability analysis"""
from .allan import (
    FrequencySeries,
    AllanCurve,
    allan_deviation,
    synthesize_noise,
    default_taus,
    load_frequency_series,
    loglog_slope,
)

__all__ = [
    'FrequencySeries',
    'AllanCurve',
    'allan_deviation',
    'synthesize_noise',
    'default_taus',
    'load_frequency_series',
    'loglog_slope',
]
