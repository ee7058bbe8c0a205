"""
Mode Field - Evanescent coupling profile of the ring mode
Exponential g(d) above the waveguide surface and atom-number bookkeeping
"""

import sys
from pathlib import Path

# Add project root to Python path
project_root = Path(__file__).resolve().parent.parent.parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.constants import c

from config.settings import settings
from src.cavity.ring_resonator import RingParams
from src.utils.errors import DomainError
from src.vapor.rubidium_line import D2_CENTER_FREQUENCY


def default_decay_length(n_eff: float, wavelength: float = c / D2_CENTER_FREQUENCY) -> float:
    """Evanescent decay length lambda / (4 pi sqrt(n_eff^2 - 1)) in m"""
    if n_eff <= 1.0:
        raise DomainError(f"Effective index must exceed 1, got {n_eff}")
    return wavelength / (4.0 * np.pi * np.sqrt(n_eff ** 2 - 1.0))


@dataclass(frozen=True)
class ModeField:
    """Simplified cavity-mode coupling: peak g0 at the surface, exponential tail"""

    peak_coupling: float = settings.G0_HZ  # Hz
    decay_length: float = default_decay_length(1.6)  # m
    interaction_volume: float = settings.INTERACTION_VOLUME_M3  # m^3

    def __post_init__(self):
        if self.peak_coupling <= 0:
            raise DomainError("Peak coupling g0 must be positive")
        if self.decay_length <= 0:
            raise DomainError("Decay length must be positive")
        if self.interaction_volume <= 0:
            raise DomainError("Interaction volume must be positive")

    @classmethod
    def for_ring(
        cls,
        ring: RingParams,
        peak_coupling: float = settings.G0_HZ,
        decay_length: Optional[float] = None,
        interaction_volume: float = settings.INTERACTION_VOLUME_M3,
    ) -> "ModeField":
        """Mode with the decay length derived from the ring's effective index unless given"""
        if decay_length is None:
            decay_length = default_decay_length(ring.n_eff, ring.resonance_wavelength)
        return cls(peak_coupling, decay_length, interaction_volume)


def surface_distance(positions: np.ndarray, ring: RingParams) -> np.ndarray:
    """
    Distance from each point to the waveguide cross-section

    The guide occupies rho in [R - w/2, R + w/2], z in [-t, 0]; the vapor is z > -t
    outside that rectangle.

    Args:
        positions: (..., 3) Cartesian coordinates in m, ring centred on the z axis
        ring: Ring parameters

    Returns:
        Distances in m with the leading shape of positions
    """
    positions = np.asarray(positions, dtype=float)
    if positions.shape[-1] != 3:
        raise DomainError("Positions must be (x, y, z) triples")
    x, y, z = positions[..., 0], positions[..., 1], positions[..., 2]
    rho = np.hypot(x, y)
    inner = ring.radius - ring.waveguide_width / 2.0
    outer = ring.radius + ring.waveguide_width / 2.0

    if np.any(z < -ring.waveguide_thickness):
        raise DomainError("Position lies in the substrate below the waveguide")
    inside = (rho > inner) & (rho < outer) & (z < 0.0)
    if np.any(inside):
        raise DomainError("Position lies inside the waveguide dielectric")

    d_rho = np.maximum(np.maximum(inner - rho, rho - outer), 0.0)
    d_z = np.maximum(z, 0.0)
    return np.hypot(d_rho, d_z)


def coupling_profile(positions: np.ndarray, mode: ModeField, ring: RingParams) -> np.ndarray:
    """Vectorised g(position) = g0 exp(-d / L_d) in Hz"""
    return mode.peak_coupling * np.exp(-surface_distance(positions, ring) / mode.decay_length)


def coupling_at_position(position: Sequence[float], mode: ModeField, ring: RingParams) -> float:
    """
    Atom-cavity coupling at a point in the vapor

    Args:
        position: (x, y, z) in m
        mode: Mode field
        ring: Ring geometry

    Returns:
        g in Hz
    """
    return float(coupling_profile(np.asarray(position, dtype=float), mode, ring))


def atoms_in_mode(density: float, mode: ModeField) -> float:
    """Mean atom number density * V_int (not rounded)"""
    if density < 0:
        raise DomainError(f"Density must be non-negative, got {density}")
    return density * mode.interaction_volume
