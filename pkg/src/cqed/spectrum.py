"""
Spectrum - Weak-drive transmission of the atom-cavity system
Coupled-oscillator spectra, seeded Monte-Carlo averaging and normal-mode splitting
"""

import sys
from pathlib import Path

# Add project root to Python path
project_root = Path(__file__).resolve().parent.parent.parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from functools import partial
from typing import List, Optional, Sequence

import numpy as np
from scipy.signal import find_peaks
from tqdm import tqdm

from config.settings import settings
from src.cavity.mode_field import ModeField
from src.cavity.ring_resonator import RingParams
from src.cqed.ensemble import AtomCountSpec, AtomEnsemble, InteractionRegion, place_atoms
from src.utils.errors import DomainError
from src.utils.spectrum_trace import SpectrumTrace
from src.vapor.rubidium_line import RbD2Line
from src.vapor.vapor_model import VaporState


def weak_drive_transmission(
    couplings: np.ndarray,
    atom_detunings: np.ndarray,
    kappa: float,
    gamma: float,
    detunings: np.ndarray,
    escape_ratio: float = 0.5,
    cavity_detuning: float = 0.0,
) -> np.ndarray:
    """
    Linear-response transmission of a ring loaded by N two-level atoms

    t = 1 - 2 eta kappa / (kappa + i(D - Dc) + sum_j g_j^2 / (gamma + i(D - d_j)))

    All rates in Hz; the common 2pi cancels.

    Returns:
        |t|^2 clipped to [0, 1]
    """
    if kappa <= 0 or gamma <= 0:
        raise DomainError(f"kappa and gamma must be positive (kappa={kappa}, gamma={gamma})")
    if not 0.0 <= escape_ratio <= 1.0:
        raise DomainError(f"Escape ratio must lie in [0, 1], got {escape_ratio}")

    delta = np.asarray(detunings, dtype=float)
    g2 = np.asarray(couplings, dtype=float) ** 2
    denominator = kappa + 1j * (delta - cavity_detuning)
    if g2.size:
        atomic = gamma + 1j * (delta[:, None] - np.asarray(atom_detunings, dtype=float)[None, :])
        denominator = denominator + np.sum(g2[None, :] / atomic, axis=1)
    field = 1.0 - 2.0 * escape_ratio * kappa / denominator
    return np.clip(np.abs(field) ** 2, 0.0, 1.0)


def weak_drive_spectrum(
    ensemble: AtomEnsemble,
    kappa: float,
    gamma: float,
    detunings: np.ndarray,
    escape_ratio: float = 0.5,
    cavity_detuning: float = 0.0,
) -> SpectrumTrace:
    """
    Transmission spectrum of one atom configuration

    Args:
        ensemble: Atoms with couplings and detunings
        kappa: Cavity half linewidth in Hz
        gamma: Atomic coherence decay in Hz
        detunings: Probe detunings in Hz
        escape_ratio: kappa_e / kappa of the bus coupling
        cavity_detuning: Cavity resonance minus reference transition in Hz

    Returns:
        SpectrumTrace on the given grid
    """
    values = weak_drive_transmission(
        ensemble.couplings, ensemble.detunings, kappa, gamma, detunings, escape_ratio, cavity_detuning
    )
    metadata = {
        "n_atoms": len(ensemble),
        "kappa_Hz": float(kappa),
        "gamma_Hz": float(gamma),
        "escape_ratio": float(escape_ratio),
        "cavity_detuning_Hz": float(cavity_detuning),
    }
    return SpectrumTrace(np.asarray(detunings, dtype=float), values, metadata)


@dataclass(frozen=True)
class EnsembleScenario:
    """Everything one Monte-Carlo configuration needs, picklable for worker processes"""

    vapor: VaporState
    ring: RingParams
    mode: ModeField
    region: InteractionRegion
    count: AtomCountSpec
    detunings: np.ndarray
    seed: int = settings.DEFAULT_SEED
    gamma: Optional[float] = None
    cavity_detuning: float = 0.0
    line: Optional[RbD2Line] = None

    @property
    def kappa(self) -> float:
        return self.ring.cavity_kappa

    @property
    def atomic_dephasing(self) -> float:
        return self.vapor.transit_broadening if self.gamma is None else self.gamma

    @classmethod
    def build(
        cls,
        vapor: VaporState,
        ring: RingParams,
        mode: ModeField,
        detunings: np.ndarray,
        seed: int = settings.DEFAULT_SEED,
        depth_decay_lengths: float = settings.REGION_DEPTH_DECAY_LENGTHS,
        count_mode: str = "fixed",
        atom_count: Optional[float] = None,
        **kwargs,
    ) -> "EnsembleScenario":
        """Scenario whose region holds density * V_int atoms on average unless atom_count is given"""
        region = InteractionRegion.for_mode(mode, ring, depth_decay_lengths)
        mean = vapor.density * region.volume(ring) if atom_count is None else atom_count
        return cls(
            vapor=vapor,
            ring=ring,
            mode=mode,
            region=region,
            count=AtomCountSpec(float(mean), count_mode),
            detunings=np.asarray(detunings, dtype=float),
            seed=int(seed),
            **kwargs,
        )

    def configuration_seed(self, index: int) -> np.random.SeedSequence:
        return np.random.SeedSequence(self.seed, spawn_key=(index,))


def simulate_ensemble_spectrum(scenario: EnsembleScenario, index: int) -> np.ndarray:
    """
    Transmission of configuration `index`; depends only on (scenario, index)

    Args:
        scenario: Shared Monte-Carlo scenario
        index: Configuration number

    Returns:
        Transmission values on scenario.detunings
    """
    ensemble = place_atoms(
        scenario.count,
        scenario.region,
        scenario.vapor,
        scenario.mode,
        scenario.ring,
        scenario.configuration_seed(index),
        scenario.line,
    )
    return weak_drive_transmission(
        ensemble.couplings,
        ensemble.detunings,
        scenario.kappa,
        scenario.atomic_dephasing,
        scenario.detunings,
        scenario.ring.escape_ratio,
        scenario.cavity_detuning,
    )


def average_spectra(
    scenario: EnsembleScenario,
    n_configs: int = settings.DEFAULT_N_CONFIGS,
    workers: int = 1,
    show_progress: bool = False,
) -> SpectrumTrace:
    """
    Mean transmission over independently seeded configurations

    Rows are collected in configuration order and reduced with one vstack/mean,
    so the result is identical for any worker count.

    Args:
        scenario: Monte-Carlo scenario
        n_configs: Number of configurations (>= 1)
        workers: Worker processes (1 runs in-process)
        show_progress: Show a tqdm bar

    Returns:
        SpectrumTrace with the standard error of the mean as uncertainty
    """
    if n_configs < 1:
        raise DomainError(f"n_configs must be at least 1, got {n_configs}")

    worker = partial(simulate_ensemble_spectrum, scenario)
    indices = range(n_configs)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            rows = list(tqdm(executor.map(worker, indices), total=n_configs,
                             desc="Configurations", disable=not show_progress))
    else:
        rows = [worker(i) for i in tqdm(indices, desc="Configurations", disable=not show_progress)]

    stack = np.vstack(rows)
    mean = stack.mean(axis=0)
    if n_configs > 1:
        stderr = stack.std(axis=0, ddof=1) / np.sqrt(n_configs)
    else:
        stderr = np.zeros_like(mean)

    metadata = {
        "seed": scenario.seed,
        "n_configs": n_configs,
        "mean_atoms": scenario.count.mean,
        "temperature_K": scenario.vapor.temperature,
        "kappa_Hz": scenario.kappa,
        "gamma_Hz": scenario.atomic_dephasing,
        "cavity_detuning_Hz": scenario.cavity_detuning,
    }
    return SpectrumTrace(scenario.detunings, mean, metadata, stderr)


def extract_splitting(trace: SpectrumTrace, prominence: float = settings.SPLITTING_PROMINENCE) -> Optional[float]:
    """
    Separation of the two deepest transmission minima

    Args:
        trace: Spectrum on a strictly increasing grid
        prominence: Minimum dip prominence in transmission units

    Returns:
        Splitting in Hz, or None when no two prominent minima with a maximum between exist
    """
    trace.require_monotone()
    values = trace.transmission
    minima, _ = find_peaks(-values, prominence=prominence)
    if minima.size < 2:
        return None

    deepest = minima[np.argsort(values[minima], kind="stable")[:2]]
    low, high = np.sort(deepest)
    if values[low:high + 1].max() <= max(values[low], values[high]):
        return None
    return float(trace.detunings[high] - trace.detunings[low])


def anticrossing_map(
    scenario: EnsembleScenario,
    cavity_detunings: Sequence[float],
    n_configs: int = settings.DEFAULT_N_CONFIGS,
    workers: int = 1,
    show_progress: bool = False,
) -> List[SpectrumTrace]:
    """Averaged spectrum for each cavity-atom detuning of a normal-mode scan"""
    traces = []
    for detuning in cavity_detunings:
        shifted = replace(scenario, cavity_detuning=float(detuning))
        traces.append(average_spectra(shifted, n_configs, workers, show_progress))
    return traces
