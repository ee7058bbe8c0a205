"""
Tests for the Allan deviation analysis
"""

import sys
import tempfile
from pathlib import Path

# Add project root to path
project_root = Path(__file__).resolve().parent
sys.path.insert(0, str(project_root))

import numpy as np
import pandas as pd
import pytest

from src.stability.allan import (
    FrequencySeries,
    allan_deviation,
    default_taus,
    load_frequency_series,
    loglog_slope,
    synthesize_noise,
)
from src.utils.errors import DataError, DomainError, UsageError
from src.utils.spectrum_trace import read_table, write_table


def test_constant_series_is_stable():
    series = FrequencySeries(np.full(1000, 3.5e6), 1.0)
    curve = allan_deviation(series)
    assert np.allclose(curve.deviations, 0.0, atol=1e-9)
    assert curve.taus[0] == 1.0
    assert curve.taus[-1] <= series.span / 3


def test_white_fm_slope():
    series = synthesize_noise("white_fm", 1e6, 100000, 1.0, seed=3)
    curve = allan_deviation(series, taus=[10, 20, 50, 100, 200, 500, 1000])
    assert loglog_slope(curve) == pytest.approx(-0.5, abs=0.05)
    # sigma(tau0) of white FM equals the per-sample level
    assert allan_deviation(series, taus=[1.0]).deviations[0] == pytest.approx(1e6, rel=0.02)


def test_offset_invariance():
    series = synthesize_noise("white_fm", 1e5, 5000, 0.5, seed=4)
    shifted = FrequencySeries(series.values + 2.5e8, series.sample_period)
    assert np.allclose(allan_deviation(series).deviations, allan_deviation(shifted).deviations, rtol=1e-6)


def test_locked_beats_unlocked():
    locked = allan_deviation(synthesize_noise("white_fm", 0.5e6, 10000, 1.0, seed=1))
    unlocked = allan_deviation(synthesize_noise("random_walk_fm", 10e6, 10000, 1.0, seed=2))
    assert np.array_equal(locked.taus, unlocked.taus)
    assert np.all(locked.deviations < unlocked.deviations)
    assert locked.deviations.max() < 1e6
    assert unlocked.deviations[unlocked.taus >= 100].max() > 100e6
    assert loglog_slope(unlocked, tau_min=8.0) == pytest.approx(0.5, abs=0.2)


def test_tau_handling():
    series = synthesize_noise("white_fm", 1e6, 1000, 0.1, seed=5)
    curve = allan_deviation(series, taus=[0.25, 1.0])
    assert curve.taus.tolist() == pytest.approx([0.2, 1.0])
    assert len(curve.warnings) == 1

    with pytest.raises(DomainError):
        allan_deviation(series, taus=[0.05])
    with pytest.raises(DomainError):
        allan_deviation(series, taus=[50.0])
    with pytest.raises(DomainError):
        allan_deviation(series, taus=[])


def test_default_taus():
    series = FrequencySeries(np.zeros(100), 2.0)
    taus = default_taus(series)
    assert taus.tolist() == [2.0, 4.0, 8.0, 16.0, 32.0, 64.0]
    with pytest.raises(DomainError):
        default_taus(FrequencySeries(np.zeros(2), 1.0))


def test_synthetic_noise():
    assert np.all(synthesize_noise("white_fm", 0.0, 64, 1.0).values == 0.0)
    first = synthesize_noise("random_walk_fm", 1e6, 256, 1.0, seed=8)
    second = synthesize_noise("random_walk_fm", 1e6, 256, 1.0, seed=8)
    assert np.array_equal(first.values, second.values)
    assert first.label == "random_walk_fm"

    white = synthesize_noise("white_fm", 2e6, 20000, 1.0, seed=9)
    assert np.std(white.values) == pytest.approx(2e6, rel=0.03)

    with pytest.raises(DomainError):
        synthesize_noise("white_fm", 1e6, 15, 1.0)
    with pytest.raises(UsageError):
        synthesize_noise("flicker_fm", 1e6, 100, 1.0)


def test_frequency_series_validation():
    with pytest.raises(DataError):
        FrequencySeries(np.array([1.0, np.nan, 2.0]), 1.0)
    with pytest.raises(DataError):
        FrequencySeries(np.zeros(10), 0.0)


def test_load_frequency_series():
    values = np.random.default_rng(6).normal(0.0, 1e6, 64)
    with tempfile.TemporaryDirectory() as tmp:
        two_column = write_table(
            Path(tmp) / "locked.csv",
            {"label": "locked"},
            pd.DataFrame({"time_s": np.arange(64) * 0.5, "offset_Hz": values}),
        )
        series = load_frequency_series(two_column)
        assert series.sample_period == 0.5
        assert series.label == "locked"
        assert np.array_equal(series.values, values)

        single = write_table(Path(tmp) / "single.csv", {"sample_period_s": 2.0}, pd.DataFrame({"offset_Hz": values}))
        assert load_frequency_series(single).sample_period == 2.0
        assert load_frequency_series(single, sample_period=4.0).sample_period == 4.0

        bare = write_table(Path(tmp) / "bare.csv", {}, pd.DataFrame({"offset_Hz": values}))
        with pytest.raises(DataError):
            load_frequency_series(bare)

        uneven = write_table(
            Path(tmp) / "uneven.csv", {}, pd.DataFrame({"time_s": [0.0, 1.0, 3.0], "offset_Hz": [1.0, 2.0, 3.0]})
        )
        with pytest.raises(DataError):
            load_frequency_series(uneven)


def test_allan_curve_csv():
    curve = allan_deviation(synthesize_noise("white_fm", 1e6, 1024, 1.0, seed=10))
    with tempfile.TemporaryDirectory() as tmp:
        path = curve.to_csv(Path(tmp) / "allan.csv", {"scenario": "unit"})
        frame = read_table(path)
    assert list(frame.columns) == ["tau_s", "allan_deviation_Hz", "error_Hz", "n_samples"]
    assert np.array_equal(frame["allan_deviation_Hz"].to_numpy(), curve.deviations)
    assert frame["n_samples"].tolist() == curve.n_samples.tolist()
    # one-sigma errors shrink with the number of overlapping estimates
    assert np.allclose(curve.errors, curve.deviations / np.sqrt(curve.n_samples))


def test_linear_scaling():
    series = synthesize_noise("random_walk_fm", 1e5, 4096, 0.5, seed=11)
    scaled = FrequencySeries(series.values * 7.5, series.sample_period)
    base = allan_deviation(series)
    assert np.allclose(allan_deviation(scaled).deviations, 7.5 * base.deviations, rtol=1e-9)
    m = np.rint(base.taus / series.sample_period).astype(int)
    assert np.all(np.abs(base.n_samples - (len(series) - 2 * m)) <= 1)
    assert np.all(np.diff(base.n_samples) < 0)


def main():
    """Run all tests"""
    print("\n" + "="*60)
    print("🚀 TESTING STABILITY MODULE")
    print("="*60 + "\n")

    tests = [
        test_constant_series_is_stable,
        test_white_fm_slope,
        test_offset_invariance,
        test_locked_beats_unlocked,
        test_tau_handling,
        test_default_taus,
        test_synthetic_noise,
        test_frequency_series_validation,
        test_load_frequency_series,
        test_allan_curve_csv,
        test_linear_scaling,
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
