"""
Ring Resonator - All-pass microring transmission with an atomic cladding
Transfer function, linewidth bookkeeping and (r, tau) recovery from measured spectra
"""

import sys
from pathlib import Path

# Add project root to Python path
project_root = Path(__file__).resolve().parent.parent.parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from dataclasses import dataclass, replace
from typing import Optional, Union

import numpy as np
from scipy.constants import c, hbar

from config.settings import settings
from src.utils.errors import CavitySingularityError, DomainError, UsageError
from src.vapor.rubidium_line import D2_CENTER_FREQUENCY

ArrayLike = Union[float, complex, np.ndarray]

COUPLING_REGIMES = ("under", "over")
SINGULARITY_THRESHOLD = 1e-12


@dataclass(frozen=True)
class RingParams:
    """
    Microring geometry and loss.

    r is the self-coupling of the bus waveguide, tau the single-pass field
    amplitude. kappa is the field-decay half linewidth in Hz (ordinary
    frequency, not angular). loaded_q and kappa are optional; when both are
    set they must agree within settings.KAPPA_Q_TOLERANCE.
    """

    r: float
    tau: float
    radius: float = settings.RING_RADIUS_M
    n_eff: float = 1.6
    resonance_wavelength: float = c / D2_CENTER_FREQUENCY
    loaded_q: Optional[float] = None
    kappa: Optional[float] = None
    waveguide_width: float = settings.WAVEGUIDE_WIDTH_M
    waveguide_thickness: float = settings.WAVEGUIDE_THICKNESS_M

    def __post_init__(self):
        if not 0.0 < self.r < 1.0:
            raise DomainError(f"Coupling coefficient r must lie in (0, 1), got {self.r}")
        if not 0.0 < self.tau <= 1.0:
            raise DomainError(f"Round-trip amplitude tau must lie in (0, 1], got {self.tau}")
        if self.radius <= 0 or self.resonance_wavelength <= 0:
            raise DomainError("Ring radius and resonance wavelength must be positive")
        if self.n_eff <= 1.0:
            raise DomainError(f"Effective index must exceed 1 for a guided mode, got {self.n_eff}")
        if self.waveguide_width <= 0 or self.waveguide_thickness <= 0:
            raise DomainError("Waveguide cross-section must be positive")
        if self.loaded_q is not None and self.loaded_q <= 0:
            raise DomainError("Loaded Q must be positive")
        if self.kappa is not None and self.kappa <= 0:
            raise DomainError("kappa must be positive")
        if self.loaded_q is not None and self.kappa is not None:
            expected = kappa_from_q(self.loaded_q, self.resonance_frequency)
            if abs(self.kappa - expected) > settings.KAPPA_Q_TOLERANCE * expected:
                raise DomainError(
                    f"kappa = {self.kappa:.6g} Hz inconsistent with Q = {self.loaded_q:.6g} "
                    f"(expected {expected:.6g} Hz)"
                )

    @property
    def length(self) -> float:
        return 2.0 * np.pi * self.radius

    @property
    def resonance_frequency(self) -> float:
        return c / self.resonance_wavelength

    @property
    def mode_number(self) -> int:
        return max(1, int(round(self.n_eff * self.length / self.resonance_wavelength)))

    @property
    def resonant_index(self) -> float:
        """n_eff snapped so a mode sits exactly at resonance_wavelength"""
        return self.mode_number * self.resonance_wavelength / self.length

    @property
    def free_spectral_range(self) -> float:
        return c / (self.resonant_index * self.length)

    @property
    def derived_kappa(self) -> float:
        """Half linewidth implied by (r, tau)"""
        rt = self.r * self.tau
        x = (1.0 - rt) / (2.0 * np.sqrt(rt))
        if x >= 1.0:
            raise DomainError("Round-trip loss too large for a resolved resonance")
        return float(self.free_spectral_range / np.pi * np.arcsin(x))

    @property
    def cavity_kappa(self) -> float:
        """kappa as configured, else from Q, else from (r, tau)"""
        if self.kappa is not None:
            return self.kappa
        if self.loaded_q is not None:
            return kappa_from_q(self.loaded_q, self.resonance_frequency)
        return self.derived_kappa

    @property
    def escape_ratio(self) -> float:
        """kappa_e / kappa, matching the exact on-resonance depth"""
        return 0.5 * (1.0 - (self.r - self.tau) / (1.0 - self.r * self.tau))

    @property
    def contrast(self) -> float:
        """On-resonance dip depth 1 - T_min of the bare ring"""
        return 1.0 - ((self.r - self.tau) / (1.0 - self.r * self.tau)) ** 2

    def detuned(self, cavity_detuning: float, reference_frequency: float = D2_CENTER_FREQUENCY) -> "RingParams":
        """Copy tuned so the resonance sits cavity_detuning Hz from the reference"""
        return replace(self, resonance_wavelength=c / (reference_frequency + cavity_detuning))


def kappa_from_q(loaded_q: float, center_frequency: float) -> float:
    """
    Cavity field decay rate from the loaded quality factor

    Args:
        loaded_q: Loaded Q
        center_frequency: Resonance frequency in Hz

    Returns:
        kappa = nu0 / (2 Q) in Hz
    """
    if loaded_q <= 0:
        raise DomainError(f"Loaded Q must be positive, got {loaded_q}")
    return center_frequency / (2.0 * loaded_q)


def free_spectral_range(ring: RingParams) -> float:
    return ring.free_spectral_range


def cavity_detuning(ring: RingParams, reference_frequency: float = D2_CENTER_FREQUENCY) -> float:
    """Ring resonance minus the atomic reference frequency, in Hz"""
    return ring.resonance_frequency - reference_frequency


def round_trip_phase(
    detuning: ArrayLike,
    ring: RingParams,
    n_rb: ArrayLike = 1.0,
    interaction_factor: float = 0.0,
    center_frequency: float = D2_CENTER_FREQUENCY,
) -> np.ndarray:
    """Complex phase k*L accumulated per round trip at each probe detuning"""
    wavelength = c / (center_frequency + np.asarray(detuning, dtype=float))
    index = (np.asarray(n_rb, dtype=complex) - 1.0) * interaction_factor + ring.resonant_index
    return 2.0 * np.pi * index * ring.length / wavelength


def transfer_function(
    detuning: ArrayLike,
    ring: RingParams,
    n_rb: ArrayLike = 1.0,
    interaction_factor: float = 0.0,
    center_frequency: float = D2_CENTER_FREQUENCY,
) -> np.ndarray:
    """
    Output field of the atomically-clad all-pass ring

    Args:
        detuning: Probe detuning from the atomic line centre in Hz
        ring: Ring parameters
        n_rb: Complex vapor refractive index at each detuning
        interaction_factor: Fraction of the vapor index seen by the mode (IF >= 0)
        center_frequency: Frequency the detuning is measured from

    Returns:
        Complex E_out with |E_in| = 1
    """
    if interaction_factor < 0:
        raise DomainError(f"Interaction factor must be non-negative, got {interaction_factor}")

    phase = np.exp(1j * round_trip_phase(detuning, ring, n_rb, interaction_factor, center_frequency))
    denominator = 1.0 - ring.r * ring.tau * phase
    if np.any(np.abs(denominator) < SINGULARITY_THRESHOLD):
        raise CavitySingularityError("Ring transfer function denominator vanishes")
    return (ring.r - ring.tau * phase) / denominator


def transmission(
    detuning: ArrayLike,
    ring: RingParams,
    n_rb: ArrayLike = 1.0,
    interaction_factor: float = 0.0,
    center_frequency: float = D2_CENTER_FREQUENCY,
) -> np.ndarray:
    """Power transmission |E_out|^2"""
    return np.abs(transfer_function(detuning, ring, n_rb, interaction_factor, center_frequency)) ** 2


def intracavity_photons(contrast: float, input_power: float, loaded_q: float, center_frequency: float) -> float:
    """
    Mean intracavity photon number of an undercoupled ring on resonance

    Args:
        contrast: Measured dip depth Delta T in [0, 1]
        input_power: Bus power in W
        loaded_q: Loaded Q
        center_frequency: Resonance frequency in Hz

    Returns:
        n_cav = dT P Q / ((1 + sqrt(1 - dT)) hbar w0^2)
    """
    if not 0.0 <= contrast <= 1.0:
        raise DomainError(f"Contrast must lie in [0, 1], got {contrast}")
    if input_power < 0:
        raise DomainError(f"Input power must be non-negative, got {input_power}")
    omega0 = 2.0 * np.pi * center_frequency
    return contrast * input_power * loaded_q / ((1.0 + np.sqrt(1.0 - contrast)) * hbar * omega0 ** 2)


def ring_from_measurement(
    loaded_q: float,
    contrast: float,
    radius: float = settings.RING_RADIUS_M,
    n_eff: float = 1.6,
    wavelength: float = c / D2_CENTER_FREQUENCY,
    coupling_regime: str = "under",
    **geometry,
) -> RingParams:
    """
    Recover (r, tau) from a measured loaded Q and dip contrast

    The all-pass linewidth fixes r*tau and the on-resonance depth fixes
    |r - tau|; the regime flag picks r > tau (under) or r < tau (over).

    Args:
        loaded_q: Loaded Q of the bare resonance
        contrast: Dip depth Delta T in (0, 1]
        radius: Ring radius in m
        n_eff: Effective index
        wavelength: Resonance wavelength in m
        coupling_regime: 'under' or 'over'
        **geometry: waveguide_width / waveguide_thickness overrides

    Returns:
        RingParams carrying loaded_q
    """
    if coupling_regime not in COUPLING_REGIMES:
        raise UsageError(f"coupling_regime must be one of {COUPLING_REGIMES}, got '{coupling_regime}'")
    if not 0.0 < contrast <= 1.0:
        raise DomainError(f"Contrast must lie in (0, 1], got {contrast}")

    probe = RingParams(r=0.5, tau=0.5, radius=radius, n_eff=n_eff, resonance_wavelength=wavelength, **geometry)
    kappa = kappa_from_q(loaded_q, probe.resonance_frequency)
    x = np.sin(np.pi * kappa / probe.free_spectral_range)
    product = (np.sqrt(x ** 2 + 1.0) - x) ** 2
    difference = (1.0 - product) * np.sqrt(1.0 - contrast)

    large = 0.5 * (difference + np.sqrt(difference ** 2 + 4.0 * product))
    small = product / large
    r, tau = (large, small) if coupling_regime == "under" else (small, large)
    return replace(probe, r=float(r), tau=float(tau), loaded_q=loaded_q)
