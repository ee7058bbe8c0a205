"""
Ensemble - Random atom configurations in the evanescent field
Seeded positions, Doppler detunings and per-atom couplings
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

from config.settings import settings
from src.cavity.mode_field import ModeField, coupling_profile
from src.cavity.ring_resonator import RingParams
from src.utils.errors import DomainError, UsageError
from src.vapor.rubidium_line import RbD2Line
from src.vapor.vapor_model import VaporState, sample_doppler_detuning

SeedLike = Union[int, np.random.SeedSequence]

ATOM_COUNT_MODES = ("fixed", "poisson")


@dataclass(frozen=True)
class InteractionRegion:
    """
    Annular slab of vapor sitting on the ring's top surface.

    Spans rho in [R - width/2, R + width/2] and z in [0, depth].
    """

    depth: float  # m
    width: float  # m

    def __post_init__(self):
        if self.depth <= 0 or self.width <= 0:
            raise DomainError(f"Interaction region is empty (depth={self.depth}, width={self.width})")

    def volume(self, ring: RingParams) -> float:
        return 2.0 * np.pi * ring.radius * self.width * self.depth

    @classmethod
    def for_mode(
        cls,
        mode: ModeField,
        ring: RingParams,
        depth_decay_lengths: float = settings.REGION_DEPTH_DECAY_LENGTHS,
    ) -> "InteractionRegion":
        """Slab `depth_decay_lengths` deep whose volume equals the mode interaction volume"""
        if depth_decay_lengths <= 0:
            raise DomainError("Region depth must be a positive number of decay lengths")
        depth = depth_decay_lengths * mode.decay_length
        width = mode.interaction_volume / (2.0 * np.pi * ring.radius * depth)
        return cls(depth=depth, width=width)


@dataclass(frozen=True)
class AtomCountSpec:
    """Atoms per configuration: round(mean), or Poisson(mean)"""

    mean: float
    mode: str = "fixed"

    def __post_init__(self):
        if self.mean < 0:
            raise DomainError("Mean atom count must be non-negative")
        if self.mode not in ATOM_COUNT_MODES:
            raise UsageError(f"atom_count_mode must be one of {ATOM_COUNT_MODES}, got '{self.mode}'")

    @classmethod
    def fixed(cls, count: int) -> "AtomCountSpec":
        return cls(float(count), "fixed")

    def draw(self, rng: np.random.Generator) -> int:
        if self.mode == "poisson":
            return int(rng.poisson(self.mean))
        return int(round(self.mean))


@dataclass
class AtomEnsemble:
    """One random configuration of atoms"""

    positions: np.ndarray  # (N, 3) m
    detunings: np.ndarray  # (N,) Hz
    couplings: np.ndarray  # (N,) Hz
    seed: Optional[SeedLike] = None
    temperature: float = 0.0
    region: Optional[InteractionRegion] = field(default=None, repr=False)

    def __post_init__(self):
        self.positions = np.asarray(self.positions, dtype=float).reshape(-1, 3)
        self.detunings = np.asarray(self.detunings, dtype=float).reshape(-1)
        self.couplings = np.asarray(self.couplings, dtype=float).reshape(-1)
        n = self.positions.shape[0]
        if self.detunings.size != n or self.couplings.size != n:
            raise DomainError("positions, detunings and couplings must describe the same atoms")
        if np.any(self.couplings < 0):
            raise DomainError("Atom couplings must be non-negative")

    def __len__(self) -> int:
        return self.couplings.size

    @property
    def atoms(self) -> List[Tuple[np.ndarray, float, float]]:
        return list(zip(self.positions, self.detunings, self.couplings))

    @property
    def collective_coupling(self) -> float:
        """sqrt(sum g_j^2)"""
        return float(np.sqrt(np.sum(self.couplings ** 2)))

    @classmethod
    def from_couplings(cls, couplings, detunings=None) -> "AtomEnsemble":
        """Ensemble with prescribed couplings, positions unset (origin)"""
        couplings = np.atleast_1d(np.asarray(couplings, dtype=float))
        detunings = np.zeros_like(couplings) if detunings is None else detunings
        return cls(np.zeros((couplings.size, 3)), detunings, couplings)


def place_atoms(
    count: AtomCountSpec,
    region: InteractionRegion,
    vapor: VaporState,
    mode: ModeField,
    ring: RingParams,
    seed: SeedLike,
    line: RbD2Line = None,
) -> AtomEnsemble:
    """
    Draw one atom configuration

    Positions are uniform in the region volume, Doppler shifts come from the
    thermal distribution and couplings from the mode profile.

    Args:
        count: Atom-count rule
        region: Interaction region above the ring
        vapor: Vapor state (temperature sets the Doppler width)
        mode: Mode field
        ring: Ring geometry
        seed: Integer or SeedSequence
        line: Transition data

    Returns:
        AtomEnsemble, identical for identical seeds
    """
    rng = np.random.default_rng(seed)
    n_atoms = count.draw(rng)

    phi = rng.uniform(0.0, 2.0 * np.pi, n_atoms)
    rho_in = ring.radius - region.width / 2.0
    rho_out = ring.radius + region.width / 2.0
    rho = np.sqrt(rng.uniform(rho_in ** 2, rho_out ** 2, n_atoms))
    z = rng.uniform(0.0, region.depth, n_atoms)
    positions = np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])

    if vapor.doppler_fwhm > 0 and n_atoms:
        detunings = sample_doppler_detuning(vapor.temperature, line, rng, n_atoms)
    else:
        detunings = np.zeros(n_atoms)

    couplings = coupling_profile(positions, mode, ring) if n_atoms else np.zeros(0)
    return AtomEnsemble(positions, detunings, couplings, seed, vapor.temperature, region)
