"""
Tests for the ring resonator and mode field
"""

import sys
from pathlib import Path

# Add project root to path
project_root = Path(__file__).resolve().parent
sys.path.insert(0, str(project_root))

import numpy as np
import pytest

from src.cavity.mode_field import ModeField, atoms_in_mode, coupling_at_position, default_decay_length
from src.cavity.ring_resonator import (
    RingParams,
    intracavity_photons,
    kappa_from_q,
    ring_from_measurement,
    transfer_function,
    transmission,
)
from src.utils.errors import DomainError, UsageError
from src.vapor.rubidium_line import D2_CENTER_FREQUENCY
from src.vapor.vapor_model import VaporState, refractive_index


def test_lossless_ring_is_all_pass():
    ring = RingParams(r=0.9, tau=1.0)
    grid = np.linspace(-20e9, 20e9, 2001)
    assert np.allclose(np.abs(transfer_function(grid, ring)), 1.0, rtol=1e-9)


def test_critical_coupling_extinguishes():
    ring = RingParams(r=0.99, tau=0.99)
    assert transmission(0.0, ring) < 1e-12


def test_measured_ring_linewidth():
    ring = ring_from_measurement(4.3e5, 0.8)
    kappa = kappa_from_q(4.3e5, ring.resonance_frequency)
    grid = np.linspace(-2 * kappa, 2 * kappa, 20001)
    trans = transmission(grid, ring)

    assert trans.min() == pytest.approx(0.2, abs=1e-6)
    below = grid[trans <= 1.0 - 0.8 / 2.0]
    fwhm = below.max() - below.min()
    assert fwhm == pytest.approx(2 * kappa, rel=1e-3)
    assert fwhm == pytest.approx(890e6, rel=0.01)
    assert ring.r > ring.tau


def test_kappa_from_q():
    assert kappa_from_q(4.3e5, 3.842e14) == pytest.approx(4.4674e8, rel=1e-4)
    assert kappa_from_q(8.6e5, 3.842e14) == pytest.approx(kappa_from_q(4.3e5, 3.842e14) / 2, rel=1e-12)
    with pytest.raises(DomainError):
        kappa_from_q(0.0, 3.842e14)


def test_intracavity_photons():
    n_cav = intracavity_photons(0.8, 3e-9, 2.2e5, D2_CENTER_FREQUENCY)
    assert n_cav == pytest.approx(0.5936, rel=1e-3)
    assert intracavity_photons(0.8, 6e-9, 2.2e5, D2_CENTER_FREQUENCY) == pytest.approx(2 * n_cav, rel=1e-12)
    assert intracavity_photons(0.0, 3e-9, 2.2e5, D2_CENTER_FREQUENCY) == 0.0
    with pytest.raises(DomainError):
        intracavity_photons(1.2, 3e-9, 2.2e5, D2_CENTER_FREQUENCY)


def test_coupling_profile():
    ring = RingParams(r=0.9, tau=0.95)
    mode = ModeField.for_ring(ring)
    g0, length = mode.peak_coupling, mode.decay_length
    radius, half_width = ring.radius, ring.waveguide_width / 2

    assert coupling_at_position((radius, 0.0, 0.0), mode, ring) == pytest.approx(g0)
    assert coupling_at_position((0.0, radius, length), mode, ring) == pytest.approx(g0 / np.e)
    assert coupling_at_position((radius, 0.0, 10 * length), mode, ring) == pytest.approx(g0 * np.exp(-10))
    side = (radius + half_width + length, 0.0, -ring.waveguide_thickness / 2)
    assert coupling_at_position(side, mode, ring) == pytest.approx(g0 / np.e)


def test_coupling_rejects_solid_positions():
    ring = RingParams(r=0.9, tau=0.95)
    mode = ModeField.for_ring(ring)
    with pytest.raises(DomainError):
        coupling_at_position((ring.radius, 0.0, -ring.waveguide_thickness / 2), mode, ring)
    with pytest.raises(DomainError):
        coupling_at_position((ring.radius + 2e-6, 0.0, -2 * ring.waveguide_thickness), mode, ring)


def test_mode_bookkeeping():
    assert default_decay_length(1.6) == pytest.approx(49.71e-9, rel=1e-3)
    assert atoms_in_mode(4.7e18, ModeField(interaction_volume=11.2e-18)) == pytest.approx(52.64, rel=1e-4)
    with pytest.raises(DomainError):
        default_decay_length(1.0)
    with pytest.raises(DomainError):
        ModeField(peak_coupling=-1.0)


def test_kappa_q_consistency():
    with pytest.raises(DomainError):
        RingParams(r=0.9, tau=0.95, loaded_q=4.3e5, kappa=5e8)
    ring = RingParams(r=0.9, tau=0.95, loaded_q=4.3e5, kappa=4.45e8)
    assert ring.cavity_kappa == 4.45e8


def test_coupling_regimes():
    with pytest.raises(UsageError):
        ring_from_measurement(4.3e5, 0.8, coupling_regime="critical")
    over = ring_from_measurement(4.3e5, 0.8, coupling_regime="over")
    under = ring_from_measurement(4.3e5, 0.8, coupling_regime="under")
    assert over.r < over.tau
    assert over.r * over.tau == pytest.approx(under.r * under.tau, rel=1e-12)
    assert over.contrast == pytest.approx(0.8, rel=1e-9)


def test_clad_ring():
    ring = ring_from_measurement(4.3e5, 0.8)
    grid = np.linspace(-5e9, 5e9, 1001)
    n_rb = refractive_index(grid, VaporState.at_temperature(373.15))

    with pytest.raises(DomainError):
        transfer_function(grid, ring, n_rb, -0.1)
    field = transfer_function(grid, ring, n_rb, 0.3)
    assert np.all(np.abs(field) <= 1.0 + 1e-12)
    assert np.allclose(transmission(grid, ring, n_rb, 0.0), transmission(grid, ring), rtol=1e-12)


def test_free_spectral_range():
    ring = RingParams(r=0.9, tau=0.95)
    assert ring.free_spectral_range * ring.mode_number == pytest.approx(ring.resonance_frequency, rel=1e-12)
    assert ring.free_spectral_range == pytest.approx(1.49e12, rel=0.01)


def main():
    """Run all tests"""
    print("\n" + "="*60)
    print("🚀 TESTING CAVITY MODULE")
    print("="*60 + "\n")

    tests = [
        test_lossless_ring_is_all_pass,
        test_critical_coupling_extinguishes,
        test_measured_ring_linewidth,
        test_kappa_from_q,
        test_intracavity_photons,
        test_coupling_profile,
        test_coupling_rejects_solid_positions,
        test_mode_bookkeeping,
        test_kappa_q_consistency,
        test_coupling_regimes,
        test_clad_ring,
        test_free_spectral_range,
    ]

    results = {}
    for test in tests:
        try:
            test()
            results[test.__name__] = True
        except Exception as e:
            print(f"❌ {test.__name__}: {e}")
            results[test.__name__] = False

    print("="*60)
    print("📊 TEST SUMMARY")
    print("="*60)
    for name, passed in results.items():
        status = "✅ PASSED" if passed else "❌ FAILED"
        print(f"{name:45} {status}")

    all_passed = all(results.values())
    if all_passed:
        print("\n🎉 ALL TESTS PASSED!\n")
    else:
        print("\n⚠️  Some tests failed. Check errors above.\n")
    return all_passed


if __name__ == "__main__":
    sys.exit(0 if main() else 1)
