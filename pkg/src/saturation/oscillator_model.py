"""
Oscillator Model - Coupled-oscillator saturation of an atomically-clad cavity
Steady-state amplitudes, saturation input flux/power and the interaction-factor law
"""

import sys
from pathlib import Path

# Add project root to Python path
project_root = Path(__file__).resolve().parent.parent.parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

import numpy as np
import pandas as pd
from scipy.constants import hbar

from src.utils.errors import DataError, DomainError
from src.utils.spectrum_trace import read_header, read_table, write_table
from src.vapor.rubidium_line import D2_CENTER_FREQUENCY

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class OscillatorSystem:
    """
    N identical atoms coupled to one cavity mode, driven on resonance.

    g, kappa and gamma are ordinary frequencies in Hz; a_in is an amplitude
    in sqrt(photons/s).
    """

    n_atoms: float
    g: float
    kappa: float
    gamma: float
    a_in: float = 1.0

    def __post_init__(self):
        if self.n_atoms < 0:
            raise DomainError("Atom number must be non-negative")
        if self.g <= 0 or self.kappa <= 0 or self.gamma <= 0:
            raise DomainError("g, kappa and gamma must be positive")

    @property
    def single_atom_cooperativity(self) -> float:
        return single_atom_cooperativity(self.g, self.kappa, self.gamma)

    @property
    def collective_cooperativity(self) -> float:
        return self.n_atoms * self.single_atom_cooperativity


def single_atom_cooperativity(g: float, kappa: float, gamma: float) -> float:
    """C1 = g^2 / (kappa gamma)"""
    if kappa <= 0 or gamma <= 0:
        raise DomainError("kappa and gamma must be positive")
    return g ** 2 / (kappa * gamma)


def steady_state_amplitudes(system: OscillatorSystem) -> Tuple[complex, np.ndarray]:
    """
    Cavity and atomic amplitudes in steady state

    Args:
        system: Oscillator system (rates in Hz, converted to angular internally)

    Returns:
        (a, b) with b holding floor(N) identical amplitudes, one per whole
        atom; a and C_N use the fractional N (51.2 atoms give 51 entries)
    """
    kappa = 2.0 * np.pi * system.kappa
    gamma = 2.0 * np.pi * system.gamma
    c1 = system.single_atom_cooperativity
    cn = system.collective_cooperativity

    a = np.sqrt(2.0 * kappa) * system.a_in / (kappa * (1.0 + cn))
    b_j = 1j * np.sqrt(2.0 * c1) * system.a_in / (np.sqrt(gamma) * (1.0 + cn))
    b = np.full(int(np.floor(system.n_atoms)), b_j, dtype=complex)
    return complex(a), b


def saturation_input(n_atoms: float, c1: float, gamma: float) -> float:
    """
    Input flux at which each atomic amplitude reaches |b_j| = 1

    Args:
        n_atoms: Atom number N
        c1: Single-atom cooperativity
        gamma: Atomic decay rate, in the units the flux should carry

    Returns:
        |a_in,sat|^2 = (gamma/2) (1 + N C1)^2 / C1
    """
    if c1 <= 0:
        raise DomainError(f"C1 must be positive, got {c1}")
    if n_atoms < 0:
        raise DomainError(f"Atom number must be non-negative, got {n_atoms}")
    return gamma / 2.0 * (1.0 + n_atoms * c1) ** 2 / c1


def saturation_power(
    n_atoms: float, c1: float, gamma: float, center_frequency: float = D2_CENTER_FREQUENCY
) -> float:
    """Saturation input power in W for gamma given in Hz"""
    flux = saturation_input(n_atoms, c1, 2.0 * np.pi * gamma)
    return hbar * 2.0 * np.pi * center_frequency * flux


def saturation_power_ratio(n_high: float, n_low: float, c1: float) -> float:
    """P_sat(N_high) / P_sat(N_low); independent of gamma"""
    return saturation_input(n_high, c1, 1.0) / saturation_input(n_low, c1, 1.0)


def saturation_photon_number(gamma: float, g0: float) -> float:
    """n_sat = gamma^2 / (2 g0^2)"""
    if g0 <= 0:
        raise DomainError(f"g0 must be positive, got {g0}")
    return gamma ** 2 / (2.0 * g0 ** 2)


def interaction_factor_law(power: ArrayLike, alpha0: float, p_sat: float) -> ArrayLike:
    """
    Saturated interaction factor alpha0 / (1 + P / P_sat)

    Args:
        power: Input power(s) in W, >= 0
        alpha0: Unsaturated interaction factor
        p_sat: Saturation power in W, > 0
    """
    if p_sat <= 0:
        raise DomainError(f"P_sat must be positive, got {p_sat}")
    power = np.asarray(power, dtype=float)
    if np.any(power < 0):
        raise DomainError("Powers must be non-negative")
    result = alpha0 / (1.0 + power / p_sat)
    return float(result) if result.ndim == 0 else result


@dataclass
class SaturationCurve:
    """Interaction factor measured (or fitted) at each input power"""

    powers: np.ndarray  # W
    alphas: np.ndarray
    uncertainties: np.ndarray
    alpha0: Optional[float] = None
    p_sat: Optional[float] = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.powers = np.asarray(self.powers, dtype=float).reshape(-1)
        self.alphas = np.asarray(self.alphas, dtype=float).reshape(-1)
        self.uncertainties = np.asarray(self.uncertainties, dtype=float).reshape(-1)
        if not (self.powers.size == self.alphas.size == self.uncertainties.size):
            raise DataError("powers, alphas and uncertainties must have equal length")
        if np.any(self.powers <= 0):
            raise DataError("Powers must be strictly positive")
        if self.powers.size > 1 and not np.all(np.diff(self.powers) > 0):
            raise DataError("Powers must be strictly increasing")
        if np.any(self.alphas < 0):
            raise DataError("Interaction factors must be non-negative")
        if np.any(self.uncertainties < 0):
            raise DataError("Uncertainties must be non-negative")

    def __len__(self) -> int:
        return self.powers.size

    @property
    def points(self) -> List[Tuple[float, float, float]]:
        return list(zip(self.powers.tolist(), self.alphas.tolist(), self.uncertainties.tolist()))

    @classmethod
    def from_points(cls, points, **kwargs) -> "SaturationCurve":
        """Build from (P, alpha, sigma) triples in any order"""
        rows = sorted((float(p), float(a), float(s)) for p, a, s in points)
        if not rows:
            raise DataError("A saturation curve needs at least one point")
        powers, alphas, sigmas = zip(*rows)
        return cls(np.array(powers), np.array(alphas), np.array(sigmas), **kwargs)

    def model(self, power: ArrayLike) -> ArrayLike:
        if self.alpha0 is None or self.p_sat is None:
            raise DataError("Curve has no fitted alpha0 / P_sat")
        return interaction_factor_law(power, self.alpha0, self.p_sat)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "power_W": self.powers,
            "interaction_factor": self.alphas,
            "uncertainty": self.uncertainties,
        })

    def to_csv(self, path: Union[str, Path]) -> Path:
        header = dict(self.metadata)
        header.update({"alpha0": self.alpha0, "p_sat_W": self.p_sat})
        return write_table(Path(path), header, self.to_frame())

    @classmethod
    def from_csv(cls, path: Union[str, Path]) -> "SaturationCurve":
        path = Path(path)
        frame = read_table(path)
        missing = [col for col in ("power_W", "interaction_factor", "uncertainty") if col not in frame.columns]
        if missing:
            raise DataError(f"{path.name} is missing columns: {missing}")
        header = read_header(path)
        alpha0, p_sat = header.pop("alpha0", None), header.pop("p_sat_W", None)
        return cls(
            frame["power_W"].to_numpy(float),
            frame["interaction_factor"].to_numpy(float),
            frame["uncertainty"].to_numpy(float),
            alpha0=alpha0,
            p_sat=p_sat,
            metadata=header,
        )
