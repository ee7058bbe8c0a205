"""
Tests for the least-squares engine and the spectrum / saturation fits
"""

import sys
import tempfile
from pathlib import Path

# Add project root to path
project_root = Path(__file__).resolve().parent
sys.path.insert(0, str(project_root))

from typing import List

import numpy as np
import pytest

from config.run_config import parse_config
from src.cavity.ring_resonator import ring_from_measurement, transmission
from src.fitting.least_squares import FitModel, FitResult, LeastSquaresFitter
from src.fitting.saturation_fit import fit_power_ladder, fit_saturation
from src.fitting.spectrum_fits import fit_interaction_factor, fit_lorentzian, synthesize_clad_trace
from src.fitting.vapor_fit import fit_vapor_temperature, synthesize_free_space_trace
from src.saturation.oscillator_model import interaction_factor_law
from src.utils.errors import DataError, FitError
from src.utils.spectrum_trace import SpectrumTrace
from src.vapor.vapor_model import VaporState

LADDER_W = np.array([1e-9, 2e-9, 5e-9, 1e-8, 2e-8, 5e-8, 1e-7])


def _lorentzian_trace() -> SpectrumTrace:
    x = np.linspace(-3.0, 3.0, 241)
    y = 0.98 - 0.7 / (1.0 + ((x - 0.2) / 0.45) ** 2)
    return SpectrumTrace(x * 1e9, y)


def test_noiseless_lorentzian():
    result = fit_lorentzian(_lorentzian_trace())
    assert result.converged
    assert result.value("center_Hz") == pytest.approx(0.2e9, rel=1e-7)
    assert result.value("linewidth_Hz") == pytest.approx(0.9e9, rel=1e-7)
    assert result.value("kappa_Hz") == pytest.approx(0.45e9, rel=1e-7)
    assert result.value("depth") == pytest.approx(0.7, rel=1e-7)
    assert result.value("baseline") == pytest.approx(0.98, rel=1e-7)
    assert result.warnings == []


def test_lorentzian_needs_points():
    trace = _lorentzian_trace()
    short = SpectrumTrace(trace.detunings[:8], trace.transmission[:8])
    with pytest.raises(DataError):
        fit_lorentzian(short)


def test_bare_ring_linewidth():
    ring = ring_from_measurement(4.3e5, 0.8)
    grid = np.linspace(-4e9, 4e9, 801)
    result = fit_lorentzian(SpectrumTrace(grid, transmission(grid, ring)))
    assert result.value("linewidth_Hz") == pytest.approx(890e6, rel=0.01)
    assert result.value("Q") == pytest.approx(4.3e5, rel=0.01)


def test_interaction_factor_recovery():
    config = parse_config("paper_100C")
    ring, vapor = config.build_ring(), config.build_vapor()
    grid = np.linspace(-5e9, 5e9, 1001)

    trace = synthesize_clad_trace(ring, vapor, 0.30, grid, noise_level=0.01, seed=1)
    result = fit_interaction_factor(trace, ring, vapor)
    assert result.value("IF") == pytest.approx(0.30, rel=0.02)
    assert result["IF"].ci95 > 0

    bare = synthesize_clad_trace(ring, vapor, 0.0, grid, noise_level=0.01, seed=2)
    assert fit_interaction_factor(bare, ring, vapor).value("IF") < 0.005


def test_saturation_interval_coverage():
    rng = np.random.default_rng(2024)
    truth = interaction_factor_law(LADDER_W, 0.3, 1e-8)
    covered = 0
    trials = 200
    for _ in range(trials):
        alphas = truth + rng.normal(0.0, 0.003, truth.size)
        result = fit_saturation(list(zip(LADDER_W, alphas, np.full(truth.size, 0.003))))
        covered += result["p_sat"].contains(1e-8)
    assert covered / trials >= 0.90


def test_two_point_saturation_fit():
    powers = [1e-9, 1e-8]
    points = [(p, interaction_factor_law(p, 0.3, 1e-8), 0.01) for p in powers]
    result = fit_saturation(points)
    assert result.value("alpha0") == pytest.approx(0.3, rel=1e-6)
    assert result.value("p_sat") == pytest.approx(1e-8, rel=1e-6)
    assert any("precondition" in warning for warning in result.warnings)

    with pytest.raises(DataError):
        fit_saturation(points[:1])


def test_saturation_fit_far_below_p_sat():
    powers = np.array([1e-12, 2e-12, 5e-12, 1e-11])
    points = list(zip(powers, interaction_factor_law(powers, 0.3, 1e-8), np.full(4, 0.001)))
    result = fit_saturation(points)
    assert result.flags["ill_conditioned"]
    assert np.isinf(result["p_sat"].ci95)
    assert np.isfinite(result["alpha0"].ci95)


def test_saturation_fit_ignores_point_order():
    rng = np.random.default_rng(5)
    alphas = interaction_factor_law(LADDER_W, 0.3, 1e-8) + rng.normal(0.0, 0.003, LADDER_W.size)
    points = list(zip(LADDER_W, alphas, np.full(LADDER_W.size, 0.003)))
    forward = fit_saturation(points)
    backward = fit_saturation(points[::-1])
    assert forward.value("p_sat") == backward.value("p_sat")
    assert forward.value("alpha0") == backward.value("alpha0")


def test_fit_result_yaml():
    result = fit_lorentzian(_lorentzian_trace())
    with tempfile.TemporaryDirectory() as tmp:
        path = result.to_yaml(Path(tmp) / "fit.yaml", {"scenario": "unit", "seed": np.int64(3)})
        loaded = FitResult.from_yaml(path)
    assert loaded.model == "Lorentzian"
    assert loaded.value("linewidth_Hz") == result.value("linewidth_Hz")
    assert loaded["Q"].ci95 == result["Q"].ci95
    assert loaded.covariance_names == result.covariance_names


class _BrokenModel(FitModel):
    @property
    def parameter_names(self) -> List[str]:
        return ["a"]

    def initial_guess(self, x, y):
        return np.array([1.0])

    def evaluate(self, x, params):
        return np.full_like(x, np.nan)


def test_non_finite_model_raises_fit_error():
    x = np.linspace(0.0, 1.0, 20)
    with pytest.raises(FitError):
        LeastSquaresFitter().fit(_BrokenModel(), x, x)
    with pytest.raises(DataError):
        LeastSquaresFitter().fit(_BrokenModel(), x, np.full_like(x, np.inf))


def test_interaction_factor_ignores_scale():
    config = parse_config("paper_100C")
    ring, vapor = config.build_ring(), config.build_vapor()
    trace = synthesize_clad_trace(ring, vapor, 0.30, config.detuning_grid(), noise_level=0.01, seed=1)
    dimmed = SpectrumTrace(trace.detunings, 0.8 * trace.transmission)

    full = fit_interaction_factor(trace, ring, vapor)
    scaled = fit_interaction_factor(dimmed, ring, vapor)
    assert scaled.value("IF") == pytest.approx(full.value("IF"), rel=1e-4)
    assert scaled.value("scale") / full.value("scale") == pytest.approx(0.8, rel=1e-4)


def test_interaction_factor_ignores_point_order():
    config = parse_config("paper_100C")
    ring, vapor = config.build_ring(), config.build_vapor()
    trace = synthesize_clad_trace(ring, vapor, 0.25, config.detuning_grid(), noise_level=0.01, seed=4)
    order = np.random.default_rng(8).permutation(len(trace))
    shuffled = SpectrumTrace(trace.detunings[order], trace.transmission[order])

    forward = fit_interaction_factor(trace, ring, vapor)
    mixed = fit_interaction_factor(shuffled, ring, vapor)
    assert mixed.value("IF") == forward.value("IF")
    assert mixed["IF"].ci95 == forward["IF"].ci95


def test_lorentzian_noise_study():
    clean = _lorentzian_trace()
    rng = np.random.default_rng(11)
    trials = 100
    centers, widths, covered = [], [], 0
    for _ in range(trials):
        noisy = SpectrumTrace(clean.detunings, clean.transmission + rng.normal(0.0, 0.01, len(clean)))
        result = fit_lorentzian(noisy)
        centers.append(result.value("center_Hz"))
        widths.append(result.value("linewidth_Hz"))
        covered += result["linewidth_Hz"].contains(0.9e9)

    assert abs(np.mean(widths) - 0.9e9) < 0.005 * 0.9e9
    assert abs(np.mean(centers) - 0.2e9) < 0.005 * 0.9e9
    assert 0.88 <= covered / trials <= 1.0


def test_ladder_interaction_factor_decreases():
    config = parse_config("paper_heater_device")
    block = config.saturation
    ring, vapor = config.build_ring(), config.build_vapor()
    grid = config.detuning_grid()
    traces = [
        synthesize_clad_trace(ring, vapor, interaction_factor_law(power, block.alpha0, block.p_sat_W), grid,
                              noise_level=0.005, seed=config.simulation.seed + i, metadata={"power_W": power})
        for i, power in enumerate(block.powers_W)
    ]
    curve, result = fit_power_ladder(traces, ring, vapor)
    assert np.all(np.diff(curve.powers) > 0)
    assert np.all(np.diff(curve.alphas) < 0)
    assert result.value("p_sat") == pytest.approx(block.p_sat_W, rel=0.25)


def test_saturation_power_across_temperatures():
    config = parse_config("paper_heater_device")
    ring, grid = config.build_ring(), config.detuning_grid()
    powers = config.saturation.powers_W
    for k, (temperature, p_sat) in enumerate([(353.15, 4e-9), (373.15, 9e-9), (393.15, 16e-9)]):
        vapor = VaporState.at_temperature(temperature)
        traces = [
            synthesize_clad_trace(ring, vapor, interaction_factor_law(power, 0.25, p_sat), grid,
                                  noise_level=0.005, seed=100 * k + i, metadata={"power_W": power})
            for i, power in enumerate(powers)
        ]
        _, result = fit_power_ladder(traces, ring, vapor)
        assert 3e-9 <= result.value("p_sat") <= 20e-9
        assert result.value("p_sat") == pytest.approx(p_sat, rel=0.3)


def test_vapor_temperature_recovery():
    vapor = VaporState.at_temperature(323.15)
    grid = np.linspace(-6e9, 6e9, 601)
    trace = synthesize_free_space_trace(vapor, 2e-3, grid, noise_level=0.005, seed=3, scale=0.95)
    result = fit_vapor_temperature(trace, 2e-3)
    assert result.model == "VaporTemperature"
    assert result.value("temperature_K") == pytest.approx(323.15, abs=1.0)
    assert result.value("scale") == pytest.approx(0.95, rel=0.01)

    fixed = fit_vapor_temperature(trace, 2e-3, fit_scale=False)
    assert fixed.parameters.keys() == {"temperature_K"}
    with pytest.raises(DataError):
        fit_vapor_temperature(SpectrumTrace(grid[:5], trace.transmission[:5]), 2e-3)


class _DegenerateModel(FitModel):
    @property
    def parameter_names(self) -> List[str]:
        return ["a", "b"]

    def initial_guess(self, x, y):
        return np.array([1.0, 0.5])

    def evaluate(self, x, params):
        return (params[0] + params[1]) * x


def test_degenerate_parameters_get_unbounded_intervals():
    x = np.linspace(0.0, 1.0, 50)
    y = 2.0 * x + np.random.default_rng(6).normal(0.0, 0.01, x.size)
    result = LeastSquaresFitter().fit(_DegenerateModel(), x, y)
    assert result.flags["ill_conditioned"]
    assert np.isinf(result["a"].ci95)
    assert np.isinf(result["b"].ci95)
    assert result.value("a") + result.value("b") == pytest.approx(2.0, rel=0.01)


def main():
    """Run all tests"""
    print("\n" + "="*60)
    print("🚀 TESTING FITTING MODULE")
    print("="*60 + "\n")

    tests = [
        test_noiseless_lorentzian,
        test_lorentzian_needs_points,
        test_bare_ring_linewidth,
        test_interaction_factor_recovery,
        test_saturation_interval_coverage,
        test_two_point_saturation_fit,
        test_saturation_fit_far_below_p_sat,
        test_saturation_fit_ignores_point_order,
        test_fit_result_yaml,
        test_non_finite_model_raises_fit_error,
        test_interaction_factor_ignores_scale,
        test_interaction_factor_ignores_point_order,
        test_lorentzian_noise_study,
        test_ladder_interaction_factor_decreases,
        test_saturation_power_across_temperatures,
        test_vapor_temperature_recovery,
        test_degenerate_parameters_get_unbounded_intervals,
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
