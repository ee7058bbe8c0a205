"""
Saturation Fit - Saturation power from interaction factors across input powers
"""

import sys
from pathlib import Path

# Add project root to Python path
project_root = Path(__file__).resolve().parent.parent.parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from typing import List, Sequence, Tuple, Union

import numpy as np
from tqdm import tqdm

from src.cavity.ring_resonator import RingParams
from src.fitting.least_squares import FitModel, FitResult, LeastSquaresFitter, ParameterEstimate
from src.fitting.spectrum_fits import fit_interaction_factor
from src.saturation.oscillator_model import SaturationCurve
from src.utils.errors import DataError
from src.utils.spectrum_trace import SpectrumTrace
from src.vapor.rubidium_line import RbD2Line
from src.vapor.vapor_model import VaporState

MIN_POINTS = 4
MIN_POWER_SPAN = 5.0


class SaturationLaw(FitModel):
    """alpha0 / (1 + p / p_sat) with powers normalised by their median"""

    @property
    def parameter_names(self) -> List[str]:
        return ["alpha0", "p_sat"]

    def initial_guess(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.array([2.0 * float(np.max(y)) if np.max(y) > 0 else 1.0, 1.0])

    def bounds(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.array([0.0, 1e-12]), np.array([np.inf, np.inf])

    def evaluate(self, x: np.ndarray, params: np.ndarray) -> np.ndarray:
        alpha0, p_sat = params
        return alpha0 / (1.0 + x / p_sat)


def fit_saturation(
    curve: Union[SaturationCurve, Sequence[Tuple[float, float, float]]],
    fitter: LeastSquaresFitter = None,
) -> FitResult:
    """
    Weighted fit of alpha = alpha0 / (1 + P / P_sat)

    Args:
        curve: SaturationCurve or (P, alpha, sigma) triples
        fitter: Engine (default settings)

    Returns:
        FitResult with alpha0 and P_sat (W); flags['ill_conditioned'] and an
        unbounded P_sat interval when all powers sit far below P_sat
    """
    if not isinstance(curve, SaturationCurve):
        curve = SaturationCurve.from_points(curve)
    if len(curve) < 2:
        raise DataError("A saturation fit needs at least 2 points")

    fitter = fitter or LeastSquaresFitter()
    scale = float(np.median(curve.powers))
    result = fitter.fit(SaturationLaw(), curve.powers / scale, curve.alphas, curve.uncertainties)
    result.model = "Saturation"

    p_sat = result["p_sat"]
    result.parameters["p_sat"] = ParameterEstimate(p_sat.value * scale, p_sat.ci95 * scale)
    result.covariance_names = ["alpha0", "p_sat_normalised"]
    result.flags["at_lower_bound"] = False

    span = curve.powers.max() / curve.powers.min()
    if len(curve) < MIN_POINTS or span < MIN_POWER_SPAN:
        result.add_warning(
            f"Saturation fit precondition: {len(curve)} points spanning a factor {span:.3g} "
            f"(want >= {MIN_POINTS} points over >= {MIN_POWER_SPAN:g}x)",
            fitter.verbose,
        )
    if curve.powers.max() < 0.1 * result.value("p_sat"):
        # only a lower bound on P_sat survives when no point bends the curve
        p_sat = result["p_sat"]
        result.parameters["p_sat"] = ParameterEstimate(p_sat.value, np.inf)
        if not result.flags.get("ill_conditioned"):
            result.flags["ill_conditioned"] = True
            result.add_warning("All powers lie far below P_sat; its confidence interval is unbounded",
                               fitter.verbose)
    return result


def fit_power_ladder(
    traces: Sequence[SpectrumTrace],
    ring: RingParams,
    vapor: VaporState,
    fit_scale: bool = True,
    line: RbD2Line = None,
    fitter: LeastSquaresFitter = None,
    show_progress: bool = False,
) -> Tuple[SaturationCurve, FitResult]:
    """
    Fit IF per input power, then P_sat across the ladder

    Args:
        traces: Spectra whose metadata carry power_W
        ring: Calibrated ring
        vapor: Calibrated vapor
        fit_scale: Fit a transmission scale per trace
        line: Transition data
        fitter: Engine
        show_progress: Show a tqdm bar

    Returns:
        (SaturationCurve with fitted alpha0/P_sat, saturation FitResult)
    """
    fitter = fitter or LeastSquaresFitter()
    points = []
    for trace in tqdm(traces, desc="Power ladder", disable=not show_progress):
        if trace.metadata.get("power_W") is None:
            raise DataError("Every ladder trace needs a power_W header entry")
        fit = fit_interaction_factor(trace, ring, vapor, fit_scale, line, fitter)
        estimate = fit["IF"]
        points.append((float(trace.metadata["power_W"]), estimate.value, estimate.ci95))

    curve = SaturationCurve.from_points(points)
    result = fit_saturation(curve, fitter)
    curve.alpha0 = result.value("alpha0")
    curve.p_sat = result.value("p_sat")
    return curve, result
