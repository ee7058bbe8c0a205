"""
Spectrum Fits - Bare-cavity Lorentzian and atomically-clad interaction-factor fits
Also generates noisy synthetic clad spectra for scans and tests
"""

import sys
from pathlib import Path

# Add project root to Python path
project_root = Path(__file__).resolve().parent.parent.parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from typing import List, Optional, Tuple

import numpy as np

from src.cavity.ring_resonator import RingParams, transmission
from src.fitting.least_squares import FitModel, FitResult, LeastSquaresFitter, ParameterEstimate, derived_estimate
from src.utils.errors import DataError
from src.utils.spectrum_trace import SpectrumTrace
from src.vapor.rubidium_line import D2_CENTER_FREQUENCY, RbD2Line
from src.vapor.vapor_model import VaporState, refractive_index

GHZ = 1e9
MIN_LORENTZIAN_POINTS = 10
MIN_SPAN_LINEWIDTHS = 3.0
IF_SCAN = np.linspace(0.0, 1.5, 301)


class LorentzianDip(FitModel):
    """baseline - depth / (1 + ((x - center) / hwhm)^2), x in GHz"""

    @property
    def parameter_names(self) -> List[str]:
        return ["center", "hwhm", "depth", "baseline"]

    def initial_guess(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        edge = max(1, x.size // 10)
        baseline = float(np.median(np.concatenate([y[:edge], y[-edge:]])))
        lowest = int(np.argmin(y))
        depth = baseline - float(y[lowest])
        below = x[y < baseline - depth / 2.0]
        hwhm = (below.max() - below.min()) / 2.0 if below.size > 1 else (x[-1] - x[0]) / 20.0
        return np.array([x[lowest], max(hwhm, np.min(np.diff(x))), depth, baseline])

    def evaluate(self, x: np.ndarray, params: np.ndarray) -> np.ndarray:
        center, hwhm, depth, baseline = params
        return baseline - depth / (1.0 + ((x - center) / hwhm) ** 2)


class InteractionFactorModel(FitModel):
    """|E_out|^2 of the clad ring with IF free (and optionally an amplitude scale)"""

    def __init__(
        self,
        ring: RingParams,
        vapor: VaporState,
        fit_scale: bool = True,
        line: RbD2Line = None,
        center_frequency: float = D2_CENTER_FREQUENCY,
    ):
        super().__init__()
        self.ring = ring
        self.vapor = vapor
        self.fit_scale = fit_scale
        self.line = line
        self.center_frequency = center_frequency
        self._x: Optional[np.ndarray] = None
        self._n_rb: Optional[np.ndarray] = None

    @property
    def parameter_names(self) -> List[str]:
        return ["IF", "scale"] if self.fit_scale else ["IF"]

    def prepare(self, x: np.ndarray) -> None:
        self._x = x
        self._n_rb = refractive_index(x, self.vapor, self.line)

    def initial_guess(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Best IF on a coarse scan of IF_SCAN, with the optimal scale at each IF"""
        if self._x is None or x is not self._x:
            self.prepare(x)
        costs, scales = [], []
        for value in IF_SCAN:
            shape = transmission(x, self.ring, self._n_rb, value, self.center_frequency)
            scale = float(np.dot(shape, y) / np.dot(shape, shape)) if self.fit_scale else 1.0
            costs.append(np.sum((scale * shape - y) ** 2))
            scales.append(scale)
        best = int(np.argmin(costs))
        if self.fit_scale:
            return np.array([float(IF_SCAN[best]), max(scales[best], 1e-6)])
        return np.array([float(IF_SCAN[best])])

    def bounds(self) -> Tuple[np.ndarray, np.ndarray]:
        n = len(self.parameter_names)
        return np.zeros(n), np.full(n, np.inf)

    def evaluate(self, x: np.ndarray, params: np.ndarray) -> np.ndarray:
        if self._x is None or x is not self._x:
            self.prepare(x)
        scale = params[1] if self.fit_scale else 1.0
        return scale * transmission(x, self.ring, self._n_rb, float(params[0]), self.center_frequency)


def fit_lorentzian(
    trace: SpectrumTrace,
    center_frequency: float = D2_CENTER_FREQUENCY,
    fitter: LeastSquaresFitter = None,
) -> FitResult:
    """
    Fit a bare-cavity Lorentzian dip

    Args:
        trace: Spectrum with >= 10 points spanning >= 3 linewidths
        center_frequency: Optical frequency the detunings are measured from
        fitter: Engine (default settings)

    Returns:
        FitResult with center_Hz, linewidth_Hz (FWHM), kappa_Hz, depth, baseline and Q
    """
    if len(trace) < MIN_LORENTZIAN_POINTS:
        raise DataError(f"Lorentzian fit needs at least {MIN_LORENTZIAN_POINTS} points, got {len(trace)}")
    fitter = fitter or LeastSquaresFitter()
    raw = fitter.fit(LorentzianDip(), trace.detunings / GHZ, trace.transmission,
                     None if trace.uncertainty is None else trace.uncertainty)

    center = raw["center"]
    hwhm = abs(raw.value("hwhm")) * GHZ
    hwhm_ci = raw["hwhm"].ci95 * GHZ
    fwhm = 2.0 * hwhm
    relative = hwhm_ci / hwhm if hwhm > 0 else np.inf
    q_value = (center_frequency + center.value * GHZ) / fwhm

    result = FitResult(
        model="Lorentzian",
        parameters={
            "center_Hz": ParameterEstimate(center.value * GHZ, center.ci95 * GHZ),
            "linewidth_Hz": ParameterEstimate(fwhm, 2.0 * hwhm_ci),
            "kappa_Hz": ParameterEstimate(hwhm, hwhm_ci),
            "depth": raw["depth"],
            "baseline": raw["baseline"],
            "Q": derived_estimate(q_value, relative),
        },
        residual_norm=raw.residual_norm,
        converged=raw.converged,
        iterations=raw.iterations,
        covariance=raw.covariance,
        covariance_names=["center_GHz", "hwhm_GHz", "depth", "baseline"],
        reduced_chi_square=raw.reduced_chi_square,
        dof=raw.dof,
        warnings=list(raw.warnings),
        flags=dict(raw.flags),
    )
    span = trace.detunings.max() - trace.detunings.min()
    if span < MIN_SPAN_LINEWIDTHS * fwhm:
        result.add_warning(f"Trace spans {span / fwhm:.2f} linewidths, fewer than {MIN_SPAN_LINEWIDTHS:g}",
                           fitter.verbose)
    return result


def fit_interaction_factor(
    trace: SpectrumTrace,
    ring: RingParams,
    vapor: VaporState,
    fit_scale: bool = True,
    line: RbD2Line = None,
    fitter: LeastSquaresFitter = None,
) -> FitResult:
    """
    Fit the interaction factor of an atomically-clad ring spectrum

    Args:
        trace: Measured or synthetic spectrum near the atomic resonance
        ring: Calibrated ring parameters
        vapor: Calibrated vapor state
        fit_scale: Also fit a multiplicative transmission scale (keeps IF independent of the trace normalisation)
        line: Transition data
        fitter: Engine (default settings)

    Returns:
        FitResult with IF (and scale); flags['at_lower_bound'] when IF is pinned at 0
    """
    fitter = fitter or LeastSquaresFitter()
    model = InteractionFactorModel(ring, vapor, fit_scale, line)
    result = fitter.fit(model, trace.detunings, trace.transmission, trace.uncertainty)
    result.model = "InteractionFactor"
    if result.flags.get("at_lower_bound"):
        result.add_warning("Interaction factor pinned at its lower bound 0", fitter.verbose)
    return result


def synthesize_clad_trace(
    ring: RingParams,
    vapor: VaporState,
    interaction_factor: float,
    detunings: np.ndarray,
    noise_level: float = 0.0,
    seed: int = 0,
    scale: float = 1.0,
    line: RbD2Line = None,
    metadata: dict = None,
) -> SpectrumTrace:
    """
    Noisy synthetic spectrum of the atomically-clad ring

    Args:
        ring: Ring parameters
        vapor: Vapor state
        interaction_factor: True IF
        detunings: Probe grid in Hz
        noise_level: Gaussian noise standard deviation (transmission units)
        seed: Noise seed
        scale: Overall transmission scale
        line: Transition data
        metadata: Extra header entries

    Returns:
        SpectrumTrace clipped to [0, 1]
    """
    detunings = np.asarray(detunings, dtype=float)
    n_rb = refractive_index(detunings, vapor, line)
    clean = scale * transmission(detunings, ring, n_rb, interaction_factor)
    rng = np.random.default_rng(seed)
    noisy = clean + rng.normal(0.0, noise_level, detunings.size) if noise_level > 0 else clean
    header = {"source": "synthetic", "interaction_factor": float(interaction_factor),
              "temperature_K": vapor.temperature, "seed": int(seed)}
    header.update(metadata or {})
    return SpectrumTrace(detunings, np.clip(noisy, 0.0, 1.0), header)
