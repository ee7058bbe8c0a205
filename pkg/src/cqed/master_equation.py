"""
Master Equation - Driven dissipative Tavis-Cummings steady state for one or two atoms
Numerically exact oracle for the linear and saturation models
"""

import sys
from pathlib import Path

# Add project root to Python path
project_root = Path(__file__).resolve().parent.parent.parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from dataclasses import dataclass
from typing import List, Sequence

import numpy as np
from qutip import destroy, expect, qeye, steadystate, tensor

from src.cqed.spectrum import weak_drive_transmission
from src.utils.errors import AccuracyError, DomainError, UsageError

MAX_ATOMS = 2
MIN_TRUNCATION = 3
CONVERGENCE_TOLERANCE = 1e-3


@dataclass(frozen=True)
class SteadyStateResult:
    photon_number: float
    transmission: float
    cavity_field: complex
    truncation: int


def _operators(truncation: int, n_atoms: int):
    """Cavity annihilator and atomic lowering operators on the joint space"""
    dims = [truncation] + [2] * n_atoms

    def embed(op, slot: int):
        factors = [qeye(d) for d in dims]
        factors[slot] = op
        return tensor(factors)

    a = embed(destroy(truncation), 0)
    sigmas = [embed(destroy(2), j + 1) for j in range(n_atoms)]
    return a, sigmas


def _solve(
    truncation: int,
    couplings: np.ndarray,
    atom_detunings: np.ndarray,
    kappa: float,
    gamma: float,
    drive: float,
    probe_detuning: float,
    cavity_detuning: float,
    escape_ratio: float,
) -> SteadyStateResult:
    # Work in units of kappa
    g = couplings / kappa
    delta_atoms = atom_detunings / kappa
    k, gam, eps = 1.0, gamma / kappa, drive / kappa
    probe, cav = probe_detuning / kappa, cavity_detuning / kappa

    a, sigmas = _operators(truncation, g.size)
    hamiltonian = (cav - probe) * a.dag() * a + 1j * eps * (a.dag() - a)
    collapse = [np.sqrt(2.0 * k) * a]
    for g_j, d_j, sigma in zip(g, delta_atoms, sigmas):
        hamiltonian += (d_j - probe) * sigma.dag() * sigma
        hamiltonian += g_j * (a.dag() * sigma + a * sigma.dag())
        collapse.append(np.sqrt(2.0 * gam) * sigma)

    rho = steadystate(hamiltonian, collapse)
    field = complex(expect(a, rho))
    photons = float(np.real(expect(a.dag() * a, rho)))

    kappa_e = escape_ratio * k
    transmission = 1.0 - 4.0 * kappa_e * field.real / eps + 4.0 * kappa_e ** 2 * photons / eps ** 2
    return SteadyStateResult(photons, float(np.clip(transmission, 0.0, 1.0)), field, truncation)


def lindblad_steady_state(
    couplings: Sequence[float],
    atom_detunings: Sequence[float],
    kappa: float,
    gamma: float,
    drive: float,
    probe_detuning: float = 0.0,
    cavity_detuning: float = 0.0,
    escape_ratio: float = 0.5,
    photon_truncation: int = 8,
    check_convergence: bool = True,
) -> SteadyStateResult:
    """
    Steady state of the driven atom-cavity master equation

    H = (Dc - D) a'a + sum (d_j - D) s_j's_j + sum g_j (a's_j + a s_j') + i eps (a' - a),
    collapse operators sqrt(2 kappa) a and sqrt(2 gamma) s_j.

    Args:
        couplings: g_j in Hz (at most two atoms)
        atom_detunings: d_j in Hz
        kappa: Cavity half linewidth in Hz
        gamma: Atomic coherence decay in Hz
        drive: Drive amplitude eps in Hz (eps = sqrt(2 kappa_e) a_in)
        probe_detuning: Probe detuning D in Hz
        cavity_detuning: Cavity detuning Dc in Hz
        escape_ratio: kappa_e / kappa
        photon_truncation: Fock-space size of the cavity mode (>= 3)
        check_convergence: Re-solve at truncation + 2 and compare

    Returns:
        SteadyStateResult with photon number and power transmission
    """
    couplings = np.atleast_1d(np.asarray(couplings, dtype=float))
    atom_detunings = np.atleast_1d(np.asarray(atom_detunings, dtype=float))
    if couplings.size > MAX_ATOMS:
        raise UsageError(f"The master-equation oracle handles at most {MAX_ATOMS} atoms")
    if couplings.size != atom_detunings.size:
        raise DomainError("couplings and atom_detunings must have equal length")
    if photon_truncation < MIN_TRUNCATION:
        raise DomainError(f"photon_truncation must be at least {MIN_TRUNCATION}")
    if kappa <= 0 or gamma <= 0:
        raise DomainError("kappa and gamma must be positive")
    if drive < 0:
        raise DomainError("Drive amplitude must be non-negative")

    if drive == 0:
        linear = weak_drive_transmission(
            couplings, atom_detunings, kappa, gamma, np.array([probe_detuning]), escape_ratio, cavity_detuning
        )
        return SteadyStateResult(0.0, float(linear[0]), 0j, photon_truncation)

    args = (couplings, atom_detunings, kappa, gamma, drive, probe_detuning, cavity_detuning, escape_ratio)
    result = _solve(photon_truncation, *args)
    if check_convergence:
        reference = _solve(photon_truncation + 2, *args)
        for name, floor in (("photon_number", 1e-9), ("transmission", 1e-6)):
            value, ref = getattr(result, name), getattr(reference, name)
            if abs(value - ref) > CONVERGENCE_TOLERANCE * max(abs(ref), floor):
                raise AccuracyError(
                    f"{name} not converged at truncation {photon_truncation}: {value:.6g} vs {ref:.6g}"
                )
    return result


def lindblad_spectrum(
    couplings: Sequence[float],
    atom_detunings: Sequence[float],
    kappa: float,
    gamma: float,
    drive: float,
    detunings: Sequence[float],
    **kwargs,
) -> List[SteadyStateResult]:
    """Steady states across a probe-detuning grid"""
    return [
        lindblad_steady_state(couplings, atom_detunings, kappa, gamma, drive, probe_detuning=float(d), **kwargs)
        for d in detunings
    ]
