import numpy as np
import pytest
from numpy.testing import assert_allclose

from reflectsim.antenna import Band
from reflectsim.metrics import (
    ComparisonReport,
    PowerProfile,
    analyze,
    compare,
    envelope_rise_db,
    flat_vs_convex_gap_db,
    smoothed_envelope_db,
)


def make_profile(power_db, positions=None, label="test"):
    power_db = np.asarray(power_db, dtype=float)
    if positions is None:
        positions = np.linspace(0.0, 1.8, power_db.size)
    return PowerProfile(positions, power_db, Band.GHZ28, "flat", label)


def test_constant_profile_has_no_fringes():
    stats = analyze(make_profile(np.full(500, -60.0)))
    assert stats.fringe_count == 0
    assert stats.envelope_dynamic_range_db == pytest.approx(0.0, abs=1e-9)
    assert stats.rhs_decay_db == pytest.approx(0.0, abs=1e-9)


def test_sinusoid_fringe_count():
    # 10 full periods, 3 dB amplitude: one counted fringe per period (+/- 1)
    x = np.linspace(0.0, 1.0, 1001)
    profile = make_profile(-60.0 + 3.0 * np.sin(2.0 * np.pi * 10.0 * x))
    assert abs(analyze(profile).fringe_count - 10) <= 1


def test_analyze_shift_invariance():
    rng = np.random.default_rng(3)
    power = -60.0 + np.cumsum(rng.normal(0.0, 0.2, 400))
    a = analyze(make_profile(power))
    b = analyze(make_profile(power + 7.0))
    assert_allclose(b.peak_db - a.peak_db, 7.0, atol=1e-9)
    assert b.peak_position_m == a.peak_position_m
    assert b.fringe_count == a.fringe_count
    assert_allclose(b.envelope_dynamic_range_db, a.envelope_dynamic_range_db, atol=1e-9)
    assert_allclose(b.rhs_decay_db, a.rhs_decay_db, atol=1e-9)


def test_fringe_count_invariant_under_reversal():
    rng = np.random.default_rng(11)
    x = np.linspace(0.0, 1.0, 600)
    power = -60.0 + 2.5 * np.sin(2 * np.pi * 7 * x) + rng.normal(0.0, 0.1, 600)
    fwd = analyze(make_profile(power))
    rev = analyze(make_profile(power[::-1]))
    assert fwd.fringe_count == rev.fringe_count


def test_analyze_requires_enough_samples():
    with pytest.raises(ValueError, match="at least"):
        analyze(make_profile(np.zeros(100)))


def test_smoothed_envelope_tracks_mean_power():
    # Deep dB nulls carry almost no linear power, so they barely move the envelope.
    power = np.full(301, -60.0)
    power[150] = -110.0
    env = smoothed_envelope_db(power, window=51)
    assert env[150] > -61.0


def test_envelope_handles_minus_inf():
    power = np.full(301, -60.0)
    power[10] = -np.inf
    env = smoothed_envelope_db(power, window=51)
    assert np.all(np.isfinite(env))


def test_compare_self_is_zero():
    p = make_profile(-60.0 + np.sin(np.linspace(0, 20, 400)))
    report = compare(p, p)
    assert report.offset_db == pytest.approx(0.0, abs=1e-12)
    assert report.rmse_db == pytest.approx(0.0, abs=1e-12)
    assert report.peak_position_delta_m == 0.0
    assert report.fringe_count_delta == 0


def test_compare_pure_offset():
    power = -60.0 + np.sin(np.linspace(0, 20, 400))
    a = make_profile(power)
    b = make_profile(power + 7.0, label="shifted")
    report = compare(a, b)
    assert report.offset_db == pytest.approx(7.0, abs=1e-12)
    assert report.rmse_db == pytest.approx(0.0, abs=1e-12)


def test_compare_noise_rmse_oracle():
    rng = np.random.default_rng(7)
    power = -60.0 + 2.0 * np.sin(np.linspace(0, 30, 1800))
    sim = make_profile(power)
    measured = make_profile(power + rng.normal(0.0, 1.0, power.size), label="noisy")
    report = compare(sim, measured)
    assert 0.8 <= report.rmse_db <= 1.2
    assert abs(report.offset_db) < 0.1


def test_compare_antisymmetric_offset():
    power = -60.0 + np.sin(np.linspace(0, 20, 400))
    a = make_profile(power)
    b = make_profile(power + 3.0)
    ab = compare(a, b)
    ba = compare(b, a)
    assert_allclose(ab.offset_db, -ba.offset_db, atol=1e-12)
    assert_allclose(ab.rmse_db, ba.rmse_db, atol=1e-12)


def test_compare_disjoint_ranges_raises():
    a = make_profile(np.zeros(200), positions=np.linspace(0.0, 1.0, 200))
    b = make_profile(np.zeros(200), positions=np.linspace(2.0, 3.0, 200))
    with pytest.raises(ValueError, match="overlap"):
        compare(a, b)


def test_compare_short_profiles_skip_fringe_delta():
    a = make_profile(np.zeros(50), positions=np.linspace(0.0, 1.0, 50))
    report = compare(a, a)
    assert report.fringe_count_delta is None


def test_report_serialization_round_trip():
    report = ComparisonReport(1.5, 0.3, -0.02, 2, 400, "sim", "meas")
    d = report.to_dict()
    assert d["offset_db"] == 1.5
    assert d["fringe_count_delta"] == 2
    assert d["measured_label"] == "meas"


@pytest.mark.parametrize(
    "flat_peak, convex_peak, gap",
    [
        # measured metal-reflector peaks: uncalibrated scale, gaps meaningful
        (-54.00, -74.69, 20.69),
        (-55.36, -76.72, 21.36),
        (-39.95, -58.36, 18.41),
    ],
)
def test_flat_vs_convex_gap_measured_values(flat_peak, convex_peak, gap):
    flat = analyze(make_profile(np.full(200, flat_peak)))
    convex = analyze(make_profile(np.full(200, convex_peak)))
    assert_allclose(flat_vs_convex_gap_db(flat, convex), gap, atol=1e-9)


def test_envelope_rise_zero_for_monotone_decay():
    power = np.linspace(-50.0, -80.0, 400)
    assert envelope_rise_db(power, start_idx=0) == pytest.approx(0.0, abs=1e-9)


def test_envelope_rise_detects_bump():
    power = np.concatenate([np.linspace(-50, -70, 200), np.linspace(-70, -55, 200)])
    assert envelope_rise_db(power, start_idx=0, window=1) == pytest.approx(15.0, abs=0.2)


def test_profile_validation():
    pos = np.linspace(0.0, 1.0, 10)
    with pytest.raises(ValueError, match="increasing"):
        PowerProfile(pos[::-1], np.zeros(10), Band.GHZ28, "flat")
    with pytest.raises(ValueError, match="NaN"):
        PowerProfile(pos, np.full(10, np.nan), Band.GHZ28, "flat")
    with pytest.raises(ValueError, match="NaN"):
        PowerProfile(pos, np.full(10, np.inf), Band.GHZ28, "flat")
    with pytest.raises(ValueError, match="equal length"):
        PowerProfile(pos, np.zeros(9), Band.GHZ28, "flat")
    # -inf sentinel is allowed
    power = np.zeros(10)
    power[3] = -np.inf
    PowerProfile(pos, power, Band.GHZ28, "flat")
