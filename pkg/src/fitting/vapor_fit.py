"""
Vapor Fit - Cell temperature from a free-space absorption spectrum
"""

import sys
from pathlib import Path

# Add project root to Python path
project_root = Path(__file__).resolve().parent.parent.parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from typing import List, Tuple

import numpy as np

from config.settings import settings
from src.fitting.least_squares import FitModel, FitResult, LeastSquaresFitter
from src.utils.errors import DataError, DomainError
from src.utils.spectrum_trace import SpectrumTrace
from src.vapor.rubidium_line import RbD2Line
from src.vapor.vapor_model import TEMPERATURE_WINDOW, VaporState, free_space_transmission

TEMPERATURE_SCAN = np.linspace(TEMPERATURE_WINDOW[0], TEMPERATURE_WINDOW[1], 126)
PATH_LENGTH_BOUNDS = (1e-6, 1.0)  # m


class VaporTemperatureModel(FitModel):
    """Beer-Lambert cell transmission with the temperature free (path length and scale optional)"""

    def __init__(
        self,
        path_length: float,
        fit_path_length: bool = False,
        fit_scale: bool = True,
        line: RbD2Line = None,
        transit_broadening: float = settings.TRANSIT_BROADENING_HZ,
        vapor_pressure_model: str = "nesmeyanov",
    ):
        super().__init__()
        if path_length <= 0:
            raise DomainError(f"Path length must be positive, got {path_length} m")
        self.path_length = float(path_length)
        self.fit_path_length = fit_path_length
        self.fit_scale = fit_scale
        self.line = line
        self.transit_broadening = transit_broadening
        self.vapor_pressure_model = vapor_pressure_model

    @property
    def parameter_names(self) -> List[str]:
        names = ["temperature_K"]
        if self.fit_path_length:
            names.append("path_length_m")
        if self.fit_scale:
            names.append("scale")
        return names

    def _unpack(self, params: np.ndarray) -> Tuple[float, float, float]:
        values = iter(params)
        temperature = float(next(values))
        path_length = float(next(values)) if self.fit_path_length else self.path_length
        scale = float(next(values)) if self.fit_scale else 1.0
        return temperature, path_length, scale

    def shape(self, x: np.ndarray, temperature: float, path_length: float) -> np.ndarray:
        vapor = VaporState.at_temperature(temperature, self.line, self.transit_broadening,
                                          model=self.vapor_pressure_model)
        return free_space_transmission(path_length, vapor, x, self.line)

    def initial_guess(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Best temperature on a coarse scan of the valid window, scale solved at each step"""
        costs, scales = [], []
        for temperature in TEMPERATURE_SCAN:
            shape = self.shape(x, temperature, self.path_length)
            scale = float(np.dot(shape, y) / np.dot(shape, shape)) if self.fit_scale else 1.0
            costs.append(np.sum((scale * shape - y) ** 2))
            scales.append(scale)
        best = int(np.argmin(costs))
        guess = [float(TEMPERATURE_SCAN[best])]
        if self.fit_path_length:
            guess.append(self.path_length)
        if self.fit_scale:
            guess.append(max(scales[best], 1e-6))
        return np.array(guess)

    def bounds(self) -> Tuple[np.ndarray, np.ndarray]:
        lower, upper = [TEMPERATURE_WINDOW[0]], [TEMPERATURE_WINDOW[1]]
        if self.fit_path_length:
            lower.append(PATH_LENGTH_BOUNDS[0])
            upper.append(PATH_LENGTH_BOUNDS[1])
        if self.fit_scale:
            lower.append(0.0)
            upper.append(np.inf)
        return np.array(lower), np.array(upper)

    def evaluate(self, x: np.ndarray, params: np.ndarray) -> np.ndarray:
        temperature, path_length, scale = self._unpack(params)
        return scale * self.shape(x, temperature, path_length)


def fit_vapor_temperature(
    trace: SpectrumTrace,
    path_length: float,
    fit_path_length: bool = False,
    fit_scale: bool = True,
    line: RbD2Line = None,
    transit_broadening: float = settings.TRANSIT_BROADENING_HZ,
    vapor_pressure_model: str = "nesmeyanov",
    fitter: LeastSquaresFitter = None,
) -> FitResult:
    """
    Estimate the cell temperature from a free-space transmission spectrum

    Density follows the vapor-pressure curve, so the absorption depth and the
    Doppler width both pin the temperature.

    Args:
        trace: Free-space spectrum across the D2 manifold
        path_length: Effective optical path in m (start value when fitted)
        fit_path_length: Also fit the path length
        fit_scale: Also fit a multiplicative transmission scale
        line: Transition data
        transit_broadening: Transit dephasing in Hz
        vapor_pressure_model: Density correlation, "nesmeyanov" or "alcock"
        fitter: Engine (default settings)

    Returns:
        FitResult with temperature_K (and path_length_m, scale)
    """
    if len(trace) < 10:
        raise DataError(f"A temperature fit needs at least 10 points, got {len(trace)}")
    fitter = fitter or LeastSquaresFitter()
    model = VaporTemperatureModel(path_length, fit_path_length, fit_scale, line, transit_broadening,
                                  vapor_pressure_model)
    result = fitter.fit(model, trace.detunings, trace.transmission, trace.uncertainty)
    result.model = "VaporTemperature"

    temperature = result.value("temperature_K")
    edge = np.isclose(temperature, TEMPERATURE_WINDOW, rtol=0.0, atol=1e-6)
    if np.any(edge):
        result.add_warning(f"Temperature pinned at the {temperature:.2f} K edge of the valid window",
                           fitter.verbose)
    return result


def synthesize_free_space_trace(
    vapor: VaporState,
    path_length: float,
    detunings: np.ndarray,
    noise_level: float = 0.0,
    seed: int = 0,
    scale: float = 1.0,
    line: RbD2Line = None,
) -> SpectrumTrace:
    """Noisy synthetic cell spectrum, clipped to [0, 1]"""
    detunings = np.asarray(detunings, dtype=float)
    clean = scale * free_space_transmission(path_length, vapor, detunings, line)
    rng = np.random.default_rng(seed)
    noisy = clean + rng.normal(0.0, noise_level, detunings.size) if noise_level > 0 else clean
    header = {"source": "synthetic", "temperature_K": vapor.temperature,
              "path_length_m": float(path_length), "seed": int(seed)}
    return SpectrumTrace(detunings, np.clip(noisy, 0.0, 1.0), header)
