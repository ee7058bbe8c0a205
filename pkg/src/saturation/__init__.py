"""Coupled-oscillator saturation model"""
from .oscillator_model import (
    OscillatorSystem,
    SaturationCurve,
    steady_state_amplitudes,
    single_atom_cooperativity,
    saturation_input,
    saturation_power,
    saturation_power_ratio,
    saturation_photon_number,
    interaction_factor_law,
)

__all__ = [
    'OscillatorSystem',
    'SaturationCurve',
    'steady_state_amplitudes',
    'single_atom_cooperativity',
    'saturation_input',
    'saturation_power',
    'saturation_power_ratio',
    'saturation_photon_number',
    'interaction_factor_law',
]
