"""
Least Squares - Abstract fit model and the shared nonlinear least-squares engine
Defines the common model interface, covariance and 95 % confidence intervals
"""

import sys
from pathlib import Path

# Add project root to Python path
project_root = Path(__file__).resolve().parent.parent.parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
import yaml
from scipy import stats
from scipy.optimize import least_squares

from config.settings import settings
from src.utils.errors import DataError, FitError

CONFIDENCE_LEVEL = 0.95
CONDITION_LIMIT = 1e12
NULL_LOADING = 1e-6  # eigenvector component that ties a parameter to a null direction


@dataclass(frozen=True)
class ParameterEstimate:
    value: float
    ci95: float  # half-width, >= 0

    @property
    def interval(self) -> Tuple[float, float]:
        return (self.value - self.ci95, self.value + self.ci95)

    def contains(self, truth: float) -> bool:
        low, high = self.interval
        return low <= truth <= high


@dataclass
class FitResult:
    """Outcome of one least-squares fit"""

    model: str
    parameters: Dict[str, ParameterEstimate]
    residual_norm: float
    converged: bool
    iterations: int
    covariance: Optional[np.ndarray] = None
    covariance_names: List[str] = field(default_factory=list)
    reduced_chi_square: float = 0.0
    dof: int = 0
    warnings: List[str] = field(default_factory=list)
    flags: Dict[str, bool] = field(default_factory=dict)

    def __getitem__(self, name: str) -> ParameterEstimate:
        return self.parameters[name]

    def value(self, name: str) -> float:
        return self.parameters[name].value

    def add_warning(self, message: str, verbose: bool = False) -> None:
        self.warnings.append(message)
        if verbose:
            print(f"⚠️  {message}")

    def to_dict(self) -> Dict[str, Any]:
        """Plain-Python form for YAML output, floats kept at full precision"""
        covariance = None
        if self.covariance is not None:
            covariance = [[float(v) for v in row] for row in np.asarray(self.covariance)]
        return {
            "model": self.model,
            "converged": bool(self.converged),
            "iterations": int(self.iterations),
            "residual_norm": float(self.residual_norm),
            "reduced_chi_square": float(self.reduced_chi_square),
            "dof": int(self.dof),
            "parameters": {
                name: {"value": float(est.value), "ci95": float(est.ci95)}
                for name, est in self.parameters.items()
            },
            "covariance": {"names": list(self.covariance_names), "matrix": covariance},
            "flags": {key: bool(flag) for key, flag in self.flags.items()},
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "FitResult":
        try:
            covariance = data.get("covariance") or {}
            matrix = covariance.get("matrix")
            return cls(
                model=str(data["model"]),
                parameters={
                    name: ParameterEstimate(float(entry["value"]), float(entry["ci95"]))
                    for name, entry in data["parameters"].items()
                },
                residual_norm=float(data["residual_norm"]),
                converged=bool(data["converged"]),
                iterations=int(data["iterations"]),
                covariance=None if matrix is None else np.array(matrix, dtype=float),
                covariance_names=list(covariance.get("names", [])),
                reduced_chi_square=float(data.get("reduced_chi_square", 0.0)),
                dof=int(data.get("dof", 0)),
                warnings=list(data.get("warnings", [])),
                flags=dict(data.get("flags", {})),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise DataError(f"Malformed fit result: {e}")

    def to_yaml(self, path: Union[str, Path], metadata: Dict[str, Any] = None) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        header = {key: value.item() if isinstance(value, np.generic) else value for key, value in (metadata or {}).items()}
        document = {"metadata": header, "fit": self.to_dict()}
        with open(path, "w", encoding="utf-8", newline="") as f:
            yaml.safe_dump(document, f, sort_keys=False, allow_unicode=True)
        return path

    @classmethod
    def from_yaml(cls, path: Union[str, Path]) -> "FitResult":
        path = Path(path)
        if not path.exists():
            raise DataError(f"File not found: {path}")
        with open(path, "r", encoding="utf-8") as f:
            document = yaml.safe_load(f) or {}
        return cls.from_dict(document.get("fit", document))


class FitModel(ABC):
    """
    Abstract base class for every fit model
    """

    def __init__(self):
        self.model_name = self.__class__.__name__

    @property
    @abstractmethod
    def parameter_names(self) -> List[str]:
        """
        Names of the free parameters, in vector order
        Must be implemented by subclasses
        """
        pass

    @abstractmethod
    def initial_guess(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """
        Seed for the optimizer, derived from the data
        Must be implemented by subclasses
        """
        pass

    @abstractmethod
    def evaluate(self, x: np.ndarray, params: np.ndarray) -> np.ndarray:
        """
        Model prediction at x
        Must be implemented by subclasses
        """
        pass

    def bounds(self) -> Tuple[np.ndarray, np.ndarray]:
        n = len(self.parameter_names)
        return np.full(n, -np.inf), np.full(n, np.inf)

    def prepare(self, x: np.ndarray) -> None:
        """Hook for precomputing data-dependent quantities before a fit"""
        return None


class LeastSquaresFitter:
    """
    Damped Gauss-Newton fits with linearised confidence intervals

    Uses Levenberg-Marquardt when the model is unbounded and a trust-region
    reflective method otherwise; Jacobians by finite differences.
    """

    def __init__(
        self,
        max_iterations: int = None,
        diff_step: float = None,
        tolerance: float = 1e-12,
        verbose: bool = False,
    ):
        self.max_iterations = max_iterations or settings.FIT_MAX_ITERATIONS
        self.diff_step = diff_step or settings.FIT_DIFF_STEP
        self.tolerance = tolerance
        self.verbose = verbose

    def fit(
        self,
        model: FitModel,
        x: np.ndarray,
        y: np.ndarray,
        sigma: Optional[np.ndarray] = None,
        initial: Optional[np.ndarray] = None,
    ) -> FitResult:
        """
        Fit a model to data

        Args:
            model: Fit model
            x: Abscissae
            y: Observations
            sigma: One-sigma uncertainties (None or any non-positive value: unweighted)
            initial: Optional starting vector (default: model.initial_guess)

        Returns:
            FitResult with estimates and 95 % half-widths
        """
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if x.shape != y.shape or x.ndim != 1:
            raise DataError("x and y must be 1-D arrays of equal length")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise DataError("Fit data contain NaN or inf")

        notes: List[str] = []
        weights = np.ones_like(y)
        if sigma is not None:
            sigma = np.asarray(sigma, dtype=float)
            if sigma.shape != y.shape:
                raise DataError("sigma must match y")
            if np.all(sigma > 0):
                weights = 1.0 / sigma
            else:
                notes.append("Non-positive uncertainties present; fit is unweighted")

        order = np.argsort(x, kind="stable")
        x, y, weights = x[order], y[order], weights[order]
        model.prepare(x)

        names = list(model.parameter_names)
        lower, upper = model.bounds()
        bounded = bool(np.any(np.isfinite(lower)) or np.any(np.isfinite(upper)))
        start = np.asarray(model.initial_guess(x, y) if initial is None else initial, dtype=float)
        if bounded:
            start = np.clip(start, lower, upper)

        def residuals(params: np.ndarray) -> np.ndarray:
            return (model.evaluate(x, params) - y) * weights

        method = "trf" if bounded or y.size < len(names) else "lm"
        try:
            solution = least_squares(
                residuals,
                start,
                method=method,
                bounds=(lower, upper) if bounded else (-np.inf, np.inf),
                diff_step=self.diff_step,
                xtol=self.tolerance,
                ftol=self.tolerance,
                gtol=self.tolerance,
                max_nfev=self.max_iterations * (len(names) + 1),
            )
        except (ValueError, np.linalg.LinAlgError) as e:
            raise FitError(f"{model.model_name} fit failed: {e}", {"method": method})

        diagnostics = {
            "method": method,
            "status": int(solution.status),
            "message": str(solution.message),
            "nfev": int(solution.nfev),
            "initial": start.tolist(),
        }
        if solution.status <= 0 or not np.all(np.isfinite(solution.x)):
            raise FitError(f"{model.model_name} did not converge: {solution.message}", diagnostics)

        residual = solution.fun
        dof = y.size - len(names)
        chi_square = float(residual @ residual)
        result = FitResult(
            model=model.model_name,
            parameters={},
            residual_norm=float(np.sqrt(chi_square)),
            converged=True,
            iterations=int(solution.nfev),
            covariance_names=names,
            dof=int(dof),
        )
        for note in notes:
            result.add_warning(note, self.verbose)

        jacobian = np.asarray(solution.jac, dtype=float)
        hessian = jacobian.T @ jacobian
        condition = np.linalg.cond(hessian) if hessian.size else np.inf
        unbounded = np.zeros(len(names), dtype=bool)
        if not np.isfinite(condition) or condition > CONDITION_LIMIT:
            result.flags["ill_conditioned"] = True
            result.add_warning(f"Ill-conditioned normal matrix (cond = {condition:.3g})", self.verbose)
            base, unbounded = _null_space_covariance(hessian)
        else:
            result.flags["ill_conditioned"] = False
            base = np.linalg.inv(hessian)

        if dof > 0:
            result.reduced_chi_square = chi_square / dof
            covariance = base * result.reduced_chi_square
            t_factor = stats.t.ppf(0.5 + CONFIDENCE_LEVEL / 2.0, dof)
            half_widths = t_factor * np.sqrt(np.clip(np.diag(covariance), 0.0, None))
            half_widths[unbounded] = np.inf
        else:
            covariance = np.full_like(base, np.inf)
            half_widths = np.full(len(names), np.inf)
            result.add_warning("No residual degrees of freedom; confidence intervals are unbounded", self.verbose)

        result.covariance = covariance
        result.parameters = {
            name: ParameterEstimate(float(value), float(width))
            for name, value, width in zip(names, solution.x, half_widths)
        }
        at_bound = np.isfinite(lower) & np.isclose(solution.x, lower, rtol=0.0, atol=1e-9)
        result.flags["at_lower_bound"] = bool(np.any(at_bound))
        return result


def _null_space_covariance(hessian: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Pseudo-inverse of a near-singular normal matrix

    Returns:
        (covariance on the well-determined subspace, mask of parameters that
        load on a near-null direction and so have unbounded intervals)
    """
    eigenvalues, eigenvectors = np.linalg.eigh(hessian)
    largest = eigenvalues.max() if eigenvalues.size else 0.0
    null = eigenvalues <= largest / CONDITION_LIMIT
    kept = eigenvectors[:, ~null]
    covariance = (kept / eigenvalues[~null]) @ kept.T
    unbounded = np.any(np.abs(eigenvectors[:, null]) > NULL_LOADING, axis=1)
    return covariance, unbounded


def derived_estimate(value: float, relative_width: float) -> ParameterEstimate:
    """Estimate for a quantity proportional to a fitted one"""
    return ParameterEstimate(float(value), float(abs(value) * relative_width))
