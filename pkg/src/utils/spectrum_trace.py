"""
Spectrum Trace - Detuning grid plus transmission values with provenance
Shared by the simulation, fitting and CLI layers; CSV interchange lives here
"""

import sys
from pathlib import Path

# Add project root to Python path
project_root = Path(__file__).resolve().parent.parent.parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Union
import io

import numpy as np
import pandas as pd

from src.utils.errors import DataError

FLOAT_FORMAT = "%.17g"


def format_header_value(value: Any) -> str:
    """Render one metadata value with full round-trip precision"""
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def parse_header_value(text: str) -> Any:
    """Inverse of format_header_value"""
    text = text.strip()
    if text == "none":
        return None
    if text in ("true", "false"):
        return text == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def write_header(handle, metadata: Dict[str, Any]) -> None:
    for key, value in metadata.items():
        handle.write(f"# {key}: {format_header_value(value)}\n")


def read_header(path: Path) -> Dict[str, Any]:
    """Collect `# key: value` lines from the top of a file"""
    metadata: Dict[str, Any] = {}
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            if not line.startswith("#"):
                break
            body = line[1:].strip()
            if ":" not in body:
                continue
            key, value = body.split(":", 1)
            metadata[key.strip()] = parse_header_value(value)
    return metadata


def write_table(path: Path, metadata: Dict[str, Any], frame: pd.DataFrame) -> Path:
    """Write a `#`-headed CSV deterministically"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    buffer = io.StringIO()
    write_header(buffer, metadata)
    frame.to_csv(buffer, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(buffer.getvalue())
    return path


def read_table(path: Path) -> pd.DataFrame:
    path = Path(path)
    if not path.exists():
        raise DataError(f"File not found: {path}")
    try:
        return pd.read_csv(path, comment="#", float_precision="round_trip")
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise DataError(f"Could not parse {path}: {e}")


@dataclass
class SpectrumTrace:
    """
    Transmission spectrum on a detuning grid.

    Detunings are in Hz relative to the model's reference transition; metadata
    carries provenance (scenario, seed, power_W, temperature_K, source).
    """

    detunings: np.ndarray
    transmission: np.ndarray
    metadata: Dict[str, Any] = field(default_factory=dict)
    uncertainty: Optional[np.ndarray] = None

    def __post_init__(self):
        self.detunings = np.asarray(self.detunings, dtype=float)
        self.transmission = np.asarray(self.transmission, dtype=float)
        if self.detunings.ndim != 1 or self.detunings.shape != self.transmission.shape:
            raise DataError("detunings and transmission must be 1-D arrays of equal length")
        if self.uncertainty is not None:
            self.uncertainty = np.asarray(self.uncertainty, dtype=float)
            if self.uncertainty.shape != self.detunings.shape:
                raise DataError("uncertainty must match the detuning grid")

    def __len__(self) -> int:
        return self.detunings.size

    @property
    def is_monotone(self) -> bool:
        return bool(self.detunings.size < 2 or np.all(np.diff(self.detunings) > 0))

    def require_monotone(self) -> None:
        if not self.is_monotone:
            raise DataError("Detuning grid must be strictly increasing")

    def sorted(self) -> "SpectrumTrace":
        """Copy with points ordered by detuning"""
        order = np.argsort(self.detunings, kind="stable")
        uncertainty = None if self.uncertainty is None else self.uncertainty[order]
        return SpectrumTrace(
            self.detunings[order], self.transmission[order], dict(self.metadata), uncertainty
        )

    def with_metadata(self, **updates) -> "SpectrumTrace":
        metadata = dict(self.metadata)
        metadata.update(updates)
        return SpectrumTrace(self.detunings, self.transmission, metadata, self.uncertainty)

    def to_frame(self) -> pd.DataFrame:
        columns = {"detuning_Hz": self.detunings, "transmission": self.transmission}
        if self.uncertainty is not None:
            columns["transmission_stderr"] = self.uncertainty
        return pd.DataFrame(columns)

    def to_csv(self, path: Union[str, Path]) -> Path:
        """Write the interchange CSV with a `#` metadata header"""
        self.require_monotone()
        if np.any(self.transmission < 0.0) or np.any(self.transmission > 1.0):
            raise DataError("Transmission values must lie in [0, 1]")
        return write_table(Path(path), self.metadata, self.to_frame())

    @classmethod
    def from_csv(cls, path: Union[str, Path]) -> "SpectrumTrace":
        """Read an interchange CSV written by to_csv (or a measured trace)"""
        path = Path(path)
        frame = read_table(path)
        missing = [c for c in ("detuning_Hz", "transmission") if c not in frame.columns]
        if missing:
            raise DataError(f"{path.name} is missing columns: {missing}")
        uncertainty = None
        if "transmission_stderr" in frame.columns:
            uncertainty = frame["transmission_stderr"].to_numpy(dtype=float)
        trace = cls(
            frame["detuning_Hz"].to_numpy(dtype=float),
            frame["transmission"].to_numpy(dtype=float),
            read_header(path),
            uncertainty,
        )
        trace.require_monotone()
        return trace


def uniform_grid(start: float, stop: float, points: int) -> np.ndarray:
    """Evenly spaced detuning grid in Hz"""
    if points < 2 or not stop > start:
        raise DataError("Detuning grid needs at least 2 points and stop > start")
    return np.linspace(start, stop, int(points))

