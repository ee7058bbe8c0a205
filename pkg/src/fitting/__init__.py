"""Nonlinear least-squares engine and the spectrum / saturation fits"""
from .least_squares import FitModel, FitResult, LeastSquaresFitter, ParameterEstimate
from .spectrum_fits import (
    LorentzianDip,
    InteractionFactorModel,
    fit_lorentzian,
    fit_interaction_factor,
    synthesize_clad_trace,
)
from .saturation_fit import SaturationLaw, fit_saturation, fit_power_ladder
from .vapor_fit import VaporTemperatureModel, fit_vapor_temperature, synthesize_free_space_trace

__all__ = [
    'FitModel',
    'FitResult',
    'LeastSquaresFitter',
    'ParameterEstimate',
    'LorentzianDip',
    'InteractionFactorModel',
    'fit_lorentzian',
    'fit_interaction_factor',
    'synthesize_clad_trace',
    'SaturationLaw',
    'fit_saturation',
    'fit_power_ladder',
    'VaporTemperatureModel',
    'fit_vapor_temperature',
    'synthesize_free_space_trace',
]
