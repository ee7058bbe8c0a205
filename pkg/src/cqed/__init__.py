"""Many-atom cavity QED: ensembles, weak-drive spectra and the master-equation oracle"""
from .ensemble import AtomEnsemble, AtomCountSpec, InteractionRegion, place_atoms
from .spectrum import (
    EnsembleScenario,
    weak_drive_transmission,
    weak_drive_spectrum,
    simulate_ensemble_spectrum,
    average_spectra,
    extract_splitting,
    anticrossing_map,
)
from .cooperativity import CooperativityReport, cooperativity_report, g0_bar_from_splitting
from .master_equation import SteadyStateResult, lindblad_steady_state, lindblad_spectrum

__all__ = [
    'AtomEnsemble',
    'AtomCountSpec',
    'InteractionRegion',
    'place_atoms',
    'EnsembleScenario',
    'weak_drive_transmission',
    'weak_drive_spectrum',
    'simulate_ensemble_spectrum',
    'average_spectra',
    'extract_splitting',
    'anticrossing_map',
    'CooperativityReport',
    'cooperativity_report',
    'g0_bar_from_splitting',
    'SteadyStateResult',
    'lindblad_steady_state',
    'lindblad_spectrum',
]
