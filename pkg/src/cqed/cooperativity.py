"""
Cooperativity - Collective and single-atom cooperativity bookkeeping
"""

import sys
from pathlib import Path

# Add project root to Python path
project_root = Path(__file__).resolve().parent.parent.parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.utils.errors import DomainError, UsageError


@dataclass(frozen=True)
class CooperativityReport:
    g_collective: float  # Hz
    g0_bar: float  # Hz
    C: float
    C0: float
    N: float

    def as_dict(self) -> dict:
        return {
            "g_collective_Hz": self.g_collective,
            "g0_bar_Hz": self.g0_bar,
            "C": self.C,
            "C0": self.C0,
            "N": self.N,
        }


def cooperativity_report(
    kappa: float,
    gamma: float,
    g: Optional[float] = None,
    g0: Optional[float] = None,
    n_atoms: float = 1.0,
) -> CooperativityReport:
    """
    Cooperativity from a collective coupling g, or from g0 and N

    Args:
        kappa: Cavity half linewidth in Hz
        gamma: Atomic coherence decay in Hz
        g: Collective coupling in Hz (exclusive with g0)
        g0: Single-atom coupling in Hz
        n_atoms: Atom number N

    Returns:
        CooperativityReport with C = g^2/(2 kappa gamma) and C = N C0
    """
    if (g is None) == (g0 is None):
        raise UsageError("Give exactly one of g (collective) or g0 (single atom)")
    if kappa <= 0 or gamma <= 0 or n_atoms <= 0:
        raise DomainError("kappa, gamma and N must be positive")

    if g is None:
        if g0 <= 0:
            raise DomainError("g0 must be positive")
        g = np.sqrt(n_atoms) * g0
    elif g <= 0:
        raise DomainError("g must be positive")

    cooperativity = g ** 2 / (2.0 * kappa * gamma)
    return CooperativityReport(
        g_collective=float(g),
        g0_bar=float(g / np.sqrt(n_atoms)),
        C=float(cooperativity),
        C0=float(cooperativity / n_atoms),
        N=float(n_atoms),
    )


def g0_bar_from_splitting(splitting: float, n_atoms: float) -> float:
    """Position-averaged single-atom coupling (splitting / 2) / sqrt(N)"""
    if splitting <= 0 or n_atoms <= 0:
        raise DomainError("Splitting and atom number must be positive")
    return splitting / 2.0 / np.sqrt(n_atoms)
