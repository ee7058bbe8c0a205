"""Microring resonator physics and evanescent mode coupling"""
from .ring_resonator import (
    RingParams,
    kappa_from_q,
    free_spectral_range,
    cavity_detuning,
    round_trip_phase,
    transfer_function,
    transmission,
    intracavity_photons,
    ring_from_measurement,
)
from .mode_field import (
    ModeField,
    default_decay_length,
    surface_distance,
    coupling_profile,
    coupling_at_position,
    atoms_in_mode,
)

__all__ = [
    'RingParams',
    'kappa_from_q',
    'free_spectral_range',
    'cavity_detuning',
    'round_trip_phase',
    'transfer_function',
    'transmission',
    'intracavity_photons',
    'ring_from_measurement',
    'ModeField',
    'default_decay_length',
    'surface_distance',
    'coupling_profile',
    'coupling_at_position',
    'atoms_in_mode',
]
