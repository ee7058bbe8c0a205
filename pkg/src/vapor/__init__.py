"""Rubidium vapor: line data, density, Doppler statistics and susceptibility"""
from .rubidium_line import HyperfineComponent, RbD2Line, load_line_data, default_line
from .vapor_model import (
    VaporState,
    vapor_pressure,
    density_from_temperature,
    doppler_fwhm,
    doppler_sigma,
    sample_doppler_detuning,
    susceptibility,
    refractive_index,
    absorption_coefficient,
    free_space_transmission,
)

__all__ = [
    'HyperfineComponent',
    'RbD2Line',
    'load_line_data',
    'default_line',
    'VaporState',
    'vapor_pressure',
    'density_from_temperature',
    'doppler_fwhm',
    'doppler_sigma',
    'sample_doppler_detuning',
    'susceptibility',
    'refractive_index',
    'absorption_coefficient',
    'free_space_transmission',
]
