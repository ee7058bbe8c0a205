"""
Rubidium Line - 87Rb D2 transition data
Loads the versioned hyperfine table shipped in data/
"""

import sys
from pathlib import Path

# Add project root to Python path
project_root = Path(__file__).resolve().parent.parent.parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Tuple, Union

import numpy as np
from scipy.constants import c

from config.settings import settings
from src.utils.errors import DataError
from src.utils.spectrum_trace import read_header, read_table

D2_CENTER_FREQUENCY = 384.2304844685e12  # Hz
D2_NATURAL_LINEWIDTH = 6.0666e6  # Hz, FWHM (Gamma/2pi)
RB87_MASS = 1.443160648e-25  # kg

# (2J'+1)/(3(2J+1)) for J=1/2 -> J'=3/2: isotropic share of the two-level dipole
D2_DIPOLE_FACTOR = 2.0 / 3.0


@dataclass(frozen=True)
class HyperfineComponent:
    label: str
    offset: float  # Hz from the line centre
    strength: float


@dataclass(frozen=True)
class RbD2Line:
    """
    87Rb D2 transition parameters.

    Component strengths are normalised to sum to 1 (ground-state population
    weight times relative transition strength); `dipole_factor` scales the
    two-level dipole to the isotropic D2 value.
    """

    center_frequency: float = D2_CENTER_FREQUENCY
    natural_linewidth: float = D2_NATURAL_LINEWIDTH
    atomic_mass: float = RB87_MASS
    hyperfine_components: Tuple[HyperfineComponent, ...] = field(default_factory=tuple)
    dipole_factor: float = D2_DIPOLE_FACTOR
    version: str = "builtin"

    def __post_init__(self):
        components = self.hyperfine_components
        if not components:
            raise DataError("A line needs at least one hyperfine component")
        strengths = np.array([comp.strength for comp in components])
        offsets = np.array([comp.offset for comp in components])
        if np.any(strengths <= 0):
            raise DataError("Hyperfine strengths must be positive")
        if offsets.size > 1 and not np.all(np.diff(offsets) > 0):
            raise DataError("Hyperfine offsets must be strictly increasing")
        if not np.isclose(strengths.sum(), 1.0, rtol=1e-9, atol=0):
            raise DataError(f"Hyperfine strengths sum to {strengths.sum():.12g}, expected 1")

    @property
    def wavelength(self) -> float:
        return c / self.center_frequency

    @property
    def offsets(self) -> np.ndarray:
        return np.array([comp.offset for comp in self.hyperfine_components])

    @property
    def strengths(self) -> np.ndarray:
        return np.array([comp.strength for comp in self.hyperfine_components])

    def manifold(self, prefix: str) -> List[HyperfineComponent]:
        """Components whose label starts with prefix, e.g. 'F2'"""
        return [comp for comp in self.hyperfine_components if comp.label.startswith(prefix)]

    def centroid(self, prefix: str) -> float:
        """Strength-weighted centre of one ground-state manifold"""
        comps = self.manifold(prefix)
        if not comps:
            raise DataError(f"No components labelled {prefix}")
        weights = np.array([comp.strength for comp in comps])
        offsets = np.array([comp.offset for comp in comps])
        return float(np.sum(weights * offsets) / np.sum(weights))

    @classmethod
    def single_component(cls, offset: float = 0.0, **kwargs) -> "RbD2Line":
        """Two-level line at `offset`, used for oracle comparisons"""
        return cls(hyperfine_components=(HyperfineComponent("two-level", offset, 1.0),), **kwargs)


def load_line_data(path: Union[str, Path] = None) -> RbD2Line:
    """
    Load the hyperfine table

    Args:
        path: CSV with columns label, offset_Hz, strength (default: shipped table)

    Returns:
        RbD2Line with the tabulated components
    """
    path = Path(path or settings.LINE_DATA_FILE)
    frame = read_table(path)
    missing = [col for col in ("label", "offset_Hz", "strength") if col not in frame.columns]
    if missing:
        raise DataError(f"{path.name} is missing columns: {missing}")

    frame = frame.sort_values("offset_Hz", kind="stable")
    components = tuple(
        HyperfineComponent(str(row.label), float(row.offset_Hz), float(row.strength))
        for row in frame.itertuples(index=False)
    )
    version = str(read_header(path).get("version", "unversioned"))
    return RbD2Line(hyperfine_components=components, version=version)


@lru_cache(maxsize=1)
def default_line() -> RbD2Line:
    """Shipped 87Rb D2 table, loaded once"""
    return load_line_data()
