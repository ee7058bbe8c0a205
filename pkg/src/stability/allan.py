"""
Allan - Frequency-stability analysis of cavity-lock time series
Overlapping Allan deviation in Hz, synthetic noise and series loading
"""

import sys
from pathlib import Path

# Add project root to Python path
project_root = Path(__file__).resolve().parent.parent.parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Union

import allantools
import numpy as np
import pandas as pd

from src.utils.errors import DataError, DomainError, UsageError
from src.utils.spectrum_trace import read_header, read_table, write_table

NOISE_KINDS = ("white_fm", "random_walk_fm")
MIN_SYNTHETIC_SAMPLES = 16


@dataclass
class FrequencySeries:
    """Evenly sampled frequency offsets from nominal, in Hz"""

    values: np.ndarray
    sample_period: float  # s
    label: str = ""

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float).reshape(-1)
        if self.sample_period <= 0:
            raise DataError(f"Sample period must be positive, got {self.sample_period}")
        if self.values.size < 2:
            raise DataError("A frequency series needs at least 2 values")
        if not np.all(np.isfinite(self.values)):
            raise DataError("Frequency series contains NaN or inf")

    def __len__(self) -> int:
        return self.values.size

    @property
    def span(self) -> float:
        return self.values.size * self.sample_period

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.values.size) * self.sample_period


@dataclass
class AllanCurve:
    taus: np.ndarray  # s
    deviations: np.ndarray  # Hz
    errors: np.ndarray  # Hz, one sigma
    n_samples: np.ndarray
    label: str = ""
    warnings: List[str] = field(default_factory=list)

    def __len__(self) -> int:
        return self.taus.size

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "tau_s": self.taus,
            "allan_deviation_Hz": self.deviations,
            "error_Hz": self.errors,
            "n_samples": self.n_samples.astype(int),
        })

    def to_csv(self, path: Union[str, Path], metadata: dict = None) -> Path:
        header = {"label": self.label or "none"}
        header.update(metadata or {})
        return write_table(Path(path), header, self.to_frame())


def default_taus(series: FrequencySeries) -> np.ndarray:
    """Octave-spaced taus from the sample period up to span / 3"""
    limit = series.span / 3.0
    octaves = int(np.floor(np.log2(limit / series.sample_period))) if limit >= series.sample_period else -1
    if octaves < 0:
        raise DomainError("Series too short for any Allan tau")
    return series.sample_period * 2.0 ** np.arange(octaves + 1)


def allan_deviation(
    series: FrequencySeries,
    taus: Optional[Sequence[float]] = None,
    verbose: bool = False,
) -> AllanCurve:
    """
    Overlapping Allan deviation of absolute frequency offsets (allantools.oadev)

    Args:
        series: Frequency series in Hz
        taus: Averaging times in s (default: octave grid); non-multiples of the
              sample period are rounded down with a warning
        verbose: Print warnings as they occur

    Returns:
        AllanCurve in Hz with per-tau sample counts
    """
    tau0 = series.sample_period
    requested = default_taus(series) if taus is None else np.asarray(taus, dtype=float).reshape(-1)
    if requested.size == 0:
        raise DomainError("No averaging times requested")

    warnings: List[str] = []
    multiples = []
    for tau in requested:
        m = int(np.floor(tau / tau0 + 1e-9))
        if m < 1:
            raise DomainError(f"tau = {tau:g} s is shorter than the sample period {tau0:g} s")
        if not np.isclose(m * tau0, tau, rtol=1e-9, atol=0.0):
            message = f"tau = {tau:g} s is not a multiple of {tau0:g} s; using {m * tau0:g} s"
            warnings.append(message)
            if verbose:
                print(f"⚠️  {message}")
        if m * tau0 > series.span / 3.0 * (1.0 + 1e-12):
            raise DomainError(f"tau = {m * tau0:g} s exceeds a third of the record ({series.span:g} s)")
        multiples.append(m)

    multiples = np.unique(multiples)
    # allantools takes floor(tau * rate); half-sample offsets keep that exact
    _, deviations, errors, counts = allantools.oadev(
        series.values,
        rate=1.0 / tau0,
        data_type="freq",
        taus=(multiples + 0.5) * tau0,
    )
    if len(deviations) != multiples.size:
        raise DomainError(f"Allan deviation returned {len(deviations)} of {multiples.size} requested taus")

    return AllanCurve(
        taus=multiples * tau0,
        deviations=np.asarray(deviations, dtype=float),
        errors=np.asarray(errors, dtype=float),
        n_samples=np.asarray(counts, dtype=int),
        label=series.label,
        warnings=warnings,
    )


def synthesize_noise(
    kind: str,
    level: float,
    n: int,
    sample_period: float,
    seed: int = 0,
) -> FrequencySeries:
    """
    Deterministic synthetic frequency noise

    Args:
        kind: 'white_fm' (independent offsets) or 'random_walk_fm' (integrated steps)
        level: Standard deviation of each sample (white) or step (random walk), Hz
        n: Number of samples (>= 16)
        sample_period: Sample period in s
        seed: RNG seed

    Returns:
        FrequencySeries labelled with the kind
    """
    if kind not in NOISE_KINDS:
        raise UsageError(f"Unknown noise kind '{kind}', expected one of {NOISE_KINDS}")
    if n < MIN_SYNTHETIC_SAMPLES:
        raise DomainError(f"Synthetic series need at least {MIN_SYNTHETIC_SAMPLES} samples, got {n}")
    if level < 0:
        raise DomainError("Noise level must be non-negative")

    rng = np.random.default_rng(seed)
    draws = level * rng.standard_normal(int(n))
    values = draws if kind == "white_fm" else np.cumsum(draws)
    return FrequencySeries(values, sample_period, label=kind)


def load_frequency_series(path: Union[str, Path], sample_period: Optional[float] = None) -> FrequencySeries:
    """
    Read a frequency series

    Two columns (time_s, offset_Hz) give the sample period from the time
    stamps; a single column needs sample_period (argument or header entry).
    """
    path = Path(path)
    frame = read_table(path)
    header = read_header(path)
    label = str(header.get("label", path.stem))

    if frame.shape[1] >= 2:
        times = frame["time_s"].to_numpy(float) if "time_s" in frame.columns else frame.iloc[:, 0].to_numpy(float)
        values = frame["offset_Hz"].to_numpy(float) if "offset_Hz" in frame.columns else frame.iloc[:, 1].to_numpy(float)
        steps = np.diff(times)
        if steps.size == 0 or np.any(steps <= 0):
            raise DataError(f"{path.name}: time stamps must be strictly increasing")
        period = float(np.median(steps))
        if not np.allclose(steps, period, rtol=1e-6, atol=0.0):
            raise DataError(f"{path.name}: samples are not evenly spaced")
        return FrequencySeries(values, period, label)

    period = sample_period if sample_period is not None else header.get("sample_period_s")
    if period is None:
        raise DataError(f"{path.name}: single-column series need a sample period")
    return FrequencySeries(frame.iloc[:, 0].to_numpy(float), float(period), label)


def loglog_slope(curve: AllanCurve, tau_min: float = None, tau_max: float = None) -> float:
    """Least-squares slope of log(sigma) against log(tau) inside [tau_min, tau_max]"""
    mask = np.ones(curve.taus.size, dtype=bool)
    if tau_min is not None:
        mask &= curve.taus >= tau_min
    if tau_max is not None:
        mask &= curve.taus <= tau_max
    mask &= curve.deviations > 0
    if mask.sum() < 2:
        raise DataError("Need at least two positive deviations to fit a slope")
    slope, _ = np.polyfit(np.log(curve.taus[mask]), np.log(curve.deviations[mask]), 1)
    return float(slope)
