"""
Tests for the vapor module
Run with pytest, or directly for a printed summary
"""

import sys
from pathlib import Path

# Add project root to path
project_root = Path(__file__).resolve().parent
sys.path.insert(0, str(project_root))

import numpy as np
import pytest
from scipy import stats
from scipy.signal import find_peaks

from src.utils.errors import DomainError, UsageError
from src.vapor.rubidium_line import RbD2Line, default_line, load_line_data
from src.vapor.vapor_model import (
    VaporState,
    density_from_temperature,
    doppler_fwhm,
    doppler_sigma,
    free_space_transmission,
    sample_doppler_detuning,
    susceptibility,
)


def test_line_table():
    line = default_line()
    assert len(line.hyperfine_components) == 6
    assert line.strengths.sum() == pytest.approx(1.0, abs=1e-12)
    assert line.version == "1"
    assert np.all(np.diff(line.offsets) > 0)


def test_ground_state_centroids():
    line = load_line_data()
    assert line.centroid("F2") == pytest.approx(-2457.1079e6, rel=1e-6)
    assert line.centroid("F1") == pytest.approx(4095.1797e6, rel=1e-6)
    assert line.centroid("F1") - line.centroid("F2") == pytest.approx(6552.29e6, rel=1e-6)
    # Whole table is referenced to the centre of gravity
    assert abs(np.sum(line.strengths * line.offsets)) < 100.0


def test_density_at_100C():
    assert density_from_temperature(373.15) == pytest.approx(4.7e18, rel=0.10)


def test_density_at_50C():
    temperature = 323.15
    log_p = 15.88253 - 4529.635 / temperature + 0.00058663 * temperature - 2.99138 * np.log10(temperature)
    expected = 10.0 ** log_p * 133.322368 / (1.380649e-23 * temperature)
    assert density_from_temperature(temperature) == pytest.approx(expected, rel=1e-6)
    assert density_from_temperature(temperature) == pytest.approx(1.056e17, rel=0.01)


def test_density_increases_with_temperature():
    temperatures = np.linspace(260.0, 490.0, 24)
    densities = [density_from_temperature(t) for t in temperatures]
    assert np.all(np.diff(densities) > 0)

    alcock = [density_from_temperature(t, "alcock") for t in temperatures]
    assert np.all(np.diff(alcock) > 0)


def test_density_outside_window():
    with pytest.raises(DomainError):
        density_from_temperature(200.0)
    with pytest.raises(DomainError):
        density_from_temperature(600.0)
    with pytest.raises(UsageError):
        density_from_temperature(373.15, model="antoine")


def test_doppler_width():
    assert doppler_fwhm(373.15) == pytest.approx(570e6, abs=10e6)
    assert doppler_fwhm(4 * 300.0) == pytest.approx(2 * doppler_fwhm(300.0), rel=1e-12)
    with pytest.raises(DomainError):
        doppler_fwhm(0.0)
    with pytest.raises(DomainError):
        doppler_sigma(-5.0)


def test_doppler_sampling():
    with pytest.raises(UsageError):
        sample_doppler_detuning(373.15)

    rng = np.random.default_rng(11)
    draws = sample_doppler_detuning(373.15, rng=rng, size=200000)
    sigma = doppler_sigma(373.15)
    assert np.std(draws) == pytest.approx(sigma, rel=0.02)
    assert abs(np.mean(draws)) < 0.02 * sigma
    assert stats.kstest(draws / sigma, "norm").pvalue > 1e-3


def test_susceptibility_vanishes_without_atoms():
    vapor = VaporState.at_temperature(373.15, density_override=0.0)
    chi = susceptibility(np.linspace(-5e9, 5e9, 101), vapor)
    assert np.all(chi == 0)


def test_susceptibility_is_absorbing():
    vapor = VaporState.at_temperature(373.15)
    chi = susceptibility(np.linspace(-8e9, 8e9, 1601), vapor)
    assert np.all(chi.imag >= 0)


def test_susceptibility_symmetry():
    line = RbD2Line.single_component(0.0)
    vapor = VaporState.at_temperature(350.0)
    grid = np.linspace(0.0, 3e9, 61)
    assert np.allclose(susceptibility(-grid, vapor, line), -np.conj(susceptibility(grid, vapor, line)),
                       rtol=1e-10, atol=0.0)


def test_zero_doppler_matches_lorentzian():
    line = RbD2Line.single_component(0.0)
    vapor = VaporState(temperature=300.0, density=1e16, doppler_fwhm=0.0, transit_broadening=1e6)
    grid = np.linspace(-2e8, 2e8, 81)
    halfwidth = line.natural_linewidth / 2.0 + 1e6
    prefactor = vapor.density * line.wavelength ** 3 * line.natural_linewidth / (4.0 * np.pi ** 2)
    expected = -prefactor / (grid + 1j * halfwidth)
    assert np.allclose(susceptibility(grid, vapor, line), expected, rtol=1e-6, atol=0.0)


def test_free_space_transmission():
    grid = np.linspace(-6e9, 7e9, 1301)
    empty = VaporState.at_temperature(323.15, transit_broadening=0.0, density_override=0.0)
    assert np.all(free_space_transmission(2e-3, empty, grid) == 1.0)

    vapor = VaporState.at_temperature(323.15, transit_broadening=0.0)
    single = free_space_transmission(2e-3, vapor, grid)
    double = free_space_transmission(4e-3, vapor, grid)
    assert np.allclose(double, single ** 2, rtol=1e-9)

    with pytest.raises(DomainError):
        free_space_transmission(0.0, vapor, grid)


def test_free_space_ground_splitting():
    grid = np.linspace(-6e9, 7e9, 1301)
    vapor = VaporState.at_temperature(323.15, transit_broadening=0.0)
    trans = free_space_transmission(2e-3, vapor, grid)
    minima, _ = find_peaks(-trans, prominence=0.01)
    deepest = np.sort(minima[np.argsort(trans[minima])[:2]])
    separation = grid[deepest[1]] - grid[deepest[0]]
    assert separation == pytest.approx(6552e6, rel=0.02)
    assert separation == pytest.approx(6834e6, rel=0.06)


def main():
    """Run all tests"""
    print("\n" + "="*60)
    print("🚀 TESTING VAPOR MODULE")
    print("="*60 + "\n")

    tests = [
        test_line_table,
        test_ground_state_centroids,
        test_density_at_100C,
        test_density_at_50C,
        test_density_increases_with_temperature,
        test_density_outside_window,
        test_doppler_width,
        test_doppler_sampling,
        test_susceptibility_vanishes_without_atoms,
        test_susceptibility_is_absorbing,
        test_susceptibility_symmetry,
        test_zero_doppler_matches_lorentzian,
        test_free_space_transmission,
        test_free_space_ground_splitting,
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
