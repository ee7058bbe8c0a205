"""
Vapor Model - Rubidium vapor thermodynamics and optical response
Density vs. temperature, Doppler statistics, susceptibility and free-space absorption
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
from scipy.constants import c, k as k_B, torr
from scipy.special import wofz

from config.settings import settings
from src.utils.errors import DomainError, UsageError
from src.vapor.rubidium_line import RbD2Line, default_line

ArrayLike = Union[float, np.ndarray]

TEMPERATURE_WINDOW = (250.0, 500.0)  # K, validity of the vapor-pressure correlations

# log10 P[Torr] = A - B/T + C*T + D*log10(T), liquid rubidium
NESMEYANOV_LIQUID = (15.88253, 4529.635, 0.00058663, -2.99138)
# log10 P[Torr] = 2.881 + A - B/T, liquid rubidium
ALCOCK_LIQUID = (4.312, 4040.0)

VAPOR_PRESSURE_MODELS = ("nesmeyanov", "alcock")


def _check_temperature_window(temperature: float) -> None:
    low, high = TEMPERATURE_WINDOW
    if not (low <= temperature <= high):
        raise DomainError(
            f"Temperature {temperature} K outside the vapor-pressure model window [{low} K, {high} K]"
        )


def vapor_pressure(temperature: float, model: str = "nesmeyanov") -> float:
    """
    Saturated rubidium vapor pressure

    Args:
        temperature: Cell temperature in K
        model: 'nesmeyanov' (four-coefficient) or 'alcock' (two-coefficient)

    Returns:
        Pressure in Pa
    """
    _check_temperature_window(temperature)
    if model == "nesmeyanov":
        a, b, cc, d = NESMEYANOV_LIQUID
        log_p = a - b / temperature + cc * temperature + d * np.log10(temperature)
    elif model == "alcock":
        a, b = ALCOCK_LIQUID
        log_p = 2.881 + a - b / temperature
    else:
        raise UsageError(f"Unknown vapor-pressure model '{model}', expected one of {VAPOR_PRESSURE_MODELS}")
    return float(10.0 ** log_p * torr)


def density_from_temperature(temperature: float, model: str = "nesmeyanov") -> float:
    """
    Saturated-vapor number density

    Args:
        temperature: Cell temperature in K, within [250 K, 500 K]
        model: Vapor-pressure correlation

    Returns:
        Number density in m^-3
    """
    return vapor_pressure(temperature, model) / (k_B * temperature)


def doppler_sigma(temperature: float, line: RbD2Line = None) -> float:
    """Standard deviation of the Doppler shift, nu0*sqrt(kT/(m c^2)), in Hz"""
    line = line or default_line()
    if temperature <= 0:
        raise DomainError(f"Temperature must be positive, got {temperature} K")
    return line.center_frequency * np.sqrt(k_B * temperature / (line.atomic_mass * c ** 2))


def doppler_fwhm(temperature: float, line: RbD2Line = None) -> float:
    """
    Doppler full width at half maximum

    Args:
        temperature: Vapor temperature in K
        line: Transition data (default: shipped 87Rb D2 table)

    Returns:
        FWHM in Hz, nu0*sqrt(8 kT ln2/(m c^2))
    """
    line = line or default_line()
    if temperature <= 0:
        raise DomainError(f"Temperature must be positive, got {temperature} K")
    return line.center_frequency * np.sqrt(8.0 * k_B * temperature * np.log(2.0) / (line.atomic_mass * c ** 2))


def sample_doppler_detuning(
    temperature: float,
    line: RbD2Line = None,
    rng: np.random.Generator = None,
    size: Optional[int] = None,
) -> ArrayLike:
    """
    Draw Doppler detunings from the thermal distribution

    Args:
        temperature: Vapor temperature in K
        line: Transition data
        rng: Seeded numpy Generator (required for reproducibility)
        size: Number of draws (None for a scalar)

    Returns:
        Zero-mean Gaussian detuning(s) in Hz
    """
    if rng is None:
        raise UsageError("sample_doppler_detuning needs a seeded numpy Generator")
    sigma = doppler_sigma(temperature, line)
    return rng.normal(0.0, sigma, size)


@dataclass(frozen=True)
class VaporState:
    """Thermodynamic state of the vapor seen by the optical mode"""

    temperature: float  # K
    density: float  # m^-3
    doppler_fwhm: float  # Hz
    transit_broadening: float = settings.TRANSIT_BROADENING_HZ  # Hz

    def __post_init__(self):
        if self.density < 0:
            raise DomainError("Vapor density must be non-negative")
        if self.doppler_fwhm < 0:
            raise DomainError("Doppler width must be non-negative")
        if self.transit_broadening < 0:
            raise DomainError("Transit broadening must be non-negative")

    @classmethod
    def at_temperature(
        cls,
        temperature: float,
        line: RbD2Line = None,
        transit_broadening: float = settings.TRANSIT_BROADENING_HZ,
        density_override: Optional[float] = None,
        model: str = "nesmeyanov",
    ) -> "VaporState":
        """Build the equilibrium state at a cell temperature"""
        density = density_from_temperature(temperature, model) if density_override is None else density_override
        return cls(
            temperature=temperature,
            density=float(density),
            doppler_fwhm=float(doppler_fwhm(temperature, line)),
            transit_broadening=float(transit_broadening),
        )

    def with_density(self, density: float) -> "VaporState":
        return replace(self, density=float(density))

    @property
    def doppler_sigma(self) -> float:
        return self.doppler_fwhm / (2.0 * np.sqrt(2.0 * np.log(2.0)))

    def homogeneous_halfwidth(self, line: RbD2Line) -> float:
        """Lorentzian half-width: natural HWHM plus transit dephasing"""
        return line.natural_linewidth / 2.0 + self.transit_broadening


def susceptibility(detuning: ArrayLike, vapor: VaporState, line: RbD2Line = None) -> np.ndarray:
    """
    Complex electric susceptibility of the vapor

    Weak-probe sum of Voigt profiles over the hyperfine components, evaluated
    with the Faddeeva function. Sign convention: Im(chi) >= 0 (absorbing).

    Args:
        detuning: Probe detuning from the line centre in Hz (scalar or array)
        vapor: Vapor state
        line: Transition data

    Returns:
        Complex chi with the shape of `detuning`
    """
    line = line or default_line()
    delta = np.asarray(detuning, dtype=float)

    # Two-level dipole from the natural width: n d^2/(eps0 hbar) = 3 n lambda^3 Gamma / (8 pi^2)
    prefactor = 3.0 * vapor.density * line.wavelength ** 3 / (8.0 * np.pi ** 2)
    prefactor *= line.dipole_factor * line.natural_linewidth
    halfwidth = vapor.homogeneous_halfwidth(line)

    x = delta[..., None] - line.offsets
    if vapor.doppler_fwhm > 0:
        scale = np.sqrt(2.0) * vapor.doppler_sigma
        profile = 1j * np.sqrt(np.pi) * wofz((x + 1j * halfwidth) / scale) / scale
    else:
        profile = 1.0 / (-x - 1j * halfwidth)

    chi = prefactor * np.sum(line.strengths * profile, axis=-1)
    return chi


def refractive_index(
    detuning: ArrayLike, vapor: VaporState, line: RbD2Line = None, linearized: bool = False
) -> np.ndarray:
    """Complex refractive index sqrt(1 + chi), or 1 + chi/2 when linearized"""
    chi = susceptibility(detuning, vapor, line)
    if linearized:
        return 1.0 + chi / 2.0
    return np.sqrt(1.0 + chi)


def absorption_coefficient(detuning: ArrayLike, vapor: VaporState, line: RbD2Line = None) -> np.ndarray:
    """Intensity absorption coefficient k0*Im(chi) in m^-1"""
    line = line or default_line()
    k0 = 2.0 * np.pi / line.wavelength
    return k0 * np.imag(susceptibility(detuning, vapor, line))


def free_space_transmission(
    path_length: float, vapor: VaporState, detunings: ArrayLike, line: RbD2Line = None
) -> np.ndarray:
    """
    Beer-Lambert transmission through the cell

    Args:
        path_length: Effective optical path in m (double pass included)
        vapor: Vapor state
        detunings: Probe detunings in Hz
        line: Transition data

    Returns:
        Transmission in [0, 1] per detuning
    """
    if path_length <= 0:
        raise DomainError(f"Path length must be positive, got {path_length} m")
    alpha = absorption_coefficient(detunings, vapor, line)
    return np.clip(np.exp(-alpha * path_length), 0.0, 1.0)


# Testing
if __name__ == "__main__":
    print("=== Testing Vapor Model ===\n")

    for celsius in (50.0, 100.0, 120.0):
        temperature = 273.15 + celsius
        vapor = VaporState.at_temperature(temperature)
        print(f"✅ {celsius:5.1f} °C: n = {vapor.density:.3e} m^-3, Doppler FWHM = {vapor.doppler_fwhm / 1e6:.1f} MHz")

    grid = np.linspace(-6e9, 7e9, 1301)
    trans = free_space_transmission(2e-3, VaporState.at_temperature(323.15), grid)
    print(f"\n✅ Free-space transmission minimum: {trans.min():.3f} at {grid[np.argmin(trans)] / 1e9:.2f} GHz")
