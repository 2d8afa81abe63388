import numpy as np
import pytest

import joinpoint as jp
from joinpoint import (ConfigMismatch, DegenerateSeries, DetectionConfig,
                       EmptyRange, RangeError, analyze, from_values,
                       slope_change_statistic, statistic_profile,
                       subperiod_analyze)


def test_statistic_rejects_exactly_linear_series():
    t = np.arange(1.0, 31.0)
    with pytest.raises(DegenerateSeries):
        slope_change_statistic(5.0 - t, 10)


def test_statistic_sign_antisymmetry():
    rng = np.random.default_rng(4)
    for _ in range(20):
        n = int(rng.integers(10, 120))
        k = int(rng.integers(2, n - 1))
        x = rng.standard_normal(n)
        assert slope_change_statistic(-x, k) == -slope_change_statistic(x, k)


def test_statistic_agrees_with_profile_entries():
    rng = np.random.default_rng(6)
    for _ in range(10):
        n = int(rng.integers(20, 150))
        x = rng.standard_normal(n) + 0.02 * np.arange(n)
        prof = statistic_profile(x, 0.05)
        for k, j in prof.entries[::7]:
            scalar = slope_change_statistic(x, k)
            assert scalar == pytest.approx(j, rel=1e-9, abs=1e-11)


def test_statistic_moments_match_reference_distribution():
    """At a central candidate of a long noise series the statistic has
    mean 0 and variance near (n-3)/(n-5); checked with 100000 replicates
    through a vectorized pipeline cross-checked against the scalar path."""
    n, k = 2000, 1000
    reps = 100_000
    t = np.arange(1.0, n + 1)
    ramp = np.clip(t - k, 0.0, None)
    h1, h2, h3 = jp.hat_coefficients(n, k)
    s = jp.design_sums(n, k)
    nc_a2 = n * n * (n * n - 1) // 12
    nd_ab = n * (n - k) * (n - k + 1) * (2 * k + n - 1) // 12
    chunks = []
    for block in range(10):
        g = np.random.Generator(np.random.PCG64(np.random.SeedSequence([99, block])))
        X = g.standard_normal((reps // 10, n))
        v1 = X.sum(axis=1)
        v2 = X @ t
        v3 = X @ ramp
        beta = h1 * v1 + h2 * v2 + h3 * v3
        alpha = (n * v2 - s.a * v1 - beta * nd_ab) / nc_a2
        mu = (v1 - s.a * alpha - s.b * beta) / n
        sse = np.maximum((X * X).sum(axis=1)
                         - (mu * v1 + alpha * v2 + beta * v3), 0.0)
        chunks.append(beta / np.sqrt(sse / (n - 3) * h3))
        if block == 0:
            # pipeline must reproduce the package's scalar statistic
            for row in range(0, 200, 25):
                assert chunks[0][row] == pytest.approx(
                    slope_change_statistic(X[row], k), rel=1e-9)
    vals = np.concatenate(chunks)
    target_var = (n - 3) / (n - 5)
    assert abs(vals.mean()) <= 3.0 / np.sqrt(reps)
    assert abs(vals.var() - target_var) <= 3.0 * np.sqrt(2.0 / reps)


def test_profile_on_example_series(example_series):
    prof = statistic_profile(example_series, 0.05)
    assert example_series.label_of(prof.changepoint) == 1972
    assert round(prof.max_statistic, 2) == 17.46
    assert prof.candidates[0] == 9 and prof.candidates[-1] == 165
    ks = [k for k, _ in prof.entries]
    assert ks == sorted(ks)


def test_profile_raises_when_no_candidates():
    x = np.random.default_rng(1).standard_normal(7)
    with pytest.raises(EmptyRange):
        statistic_profile(x, 0.45)


def test_profile_recovers_strong_synthetic_bend():
    n, k0 = 200, 100
    t = np.arange(1, n + 1, dtype=float)
    ramp = np.clip(t - k0, 0.0, None)
    hits = 0
    for child in np.random.SeedSequence(314).spawn(500):
        g = np.random.Generator(np.random.PCG64(child))
        x = 0.5 + 0.002 * t + 1.0 * ramp + 0.1 * g.standard_normal(n)
        prof = statistic_profile(x, 0.05)
        hits += abs(prof.changepoint - k0) <= 2
    assert hits >= 475          # at least 95 percent


def test_profiles_nest_across_trimmings():
    rng = np.random.default_rng(12)
    x = rng.standard_normal(140)
    wide = statistic_profile(x, 0.05)
    narrow = statistic_profile(x, 0.10)
    assert set(narrow.candidates) <= set(wide.candidates)
    lookup = dict(wide.entries)
    for k, j in narrow.entries:
        assert j == lookup[k]   # identical arithmetic, identical bits


def test_profile_location_and_scale_invariance():
    rng = np.random.default_rng(21)
    for _ in range(20):
        n = int(rng.integers(30, 250))
        x = rng.standard_normal(n) + 0.03 * np.arange(n)
        base = statistic_profile(x, 0.05)
        for a, b in ((100.0, 1.0), (0.0, 7.0), (-3.5, 0.25), (12.0, -2.0)):
            other = statistic_profile(a + b * x, 0.05)
            assert other.changepoint == base.changepoint
            rel = np.abs(np.abs(other.statistics) - np.abs(base.statistics))
            rel /= np.maximum(np.abs(base.statistics), 1e-12)
            assert rel.max() <= 1e-9


def test_profile_time_reversal_identity():
    rng = np.random.default_rng(42)
    for _ in range(10):
        n = int(rng.integers(30, 300))
        x = rng.standard_normal(n) + 0.01 * np.arange(n)
        forward = dict(statistic_profile(x, 0.05).entries)
        backward = dict(statistic_profile(x[::-1], 0.05).entries)
        overlap = 0
        for k, j in forward.items():
            mirrored = n + 1 - k
            if mirrored in backward:
                assert abs(j) == pytest.approx(abs(backward[mirrored]),
                                               rel=1e-6)
                overlap += 1
        assert overlap >= len(forward) - 2


def test_analyze_end_to_end_determinism(example_series):
    cfg = DetectionConfig(mc_replicates=2000, grid_size=100, seed=9)
    r1 = analyze(example_series, cfg)
    r2 = analyze(example_series, cfg)
    assert r1.p_value == r2.p_value
    assert r1.critical_values == r2.critical_values
    assert r1.statistic == r2.statistic
    assert r1.changepoint == r2.changepoint


def test_analyze_rejects_mismatched_null(example_series):
    null = jp.simulate_limit_null(delta=0.10, grid_size=60,
                                  replicates=1000, seed=3)
    cfg = DetectionConfig(delta=0.05, mc_replicates=1000, grid_size=60)
    with pytest.raises(ConfigMismatch):
        analyze(example_series, cfg, null=null)


def test_analyze_reports_all_critical_levels(example_series, null_005):
    cfg = DetectionConfig()
    report = analyze(example_series, cfg, null=null_005)
    assert set(report.critical_values) == {90.0, 95.0, 97.5, 99.0, 99.9}
    cvs = [report.critical_values[l] for l in (90.0, 95.0, 97.5, 99.0, 99.9)]
    assert cvs == sorted(cvs)
    assert report.detected
    assert report.changepoint_label == 1972
    assert report.p_value < 0.001


def test_quiet_series_is_not_significant(null_005):
    rng = np.random.default_rng(15)
    x = rng.standard_normal(300)
    report = analyze(from_values(list(x)), DetectionConfig(), null=null_005)
    # chosen seed gives a maximum below the 90 percent critical value
    assert report.statistic < report.critical_values[90.0]
    assert report.p_value > 0.10
    assert not report.detected


def test_subperiod_identity_slice_matches_full(example_series, null_005):
    cfg = DetectionConfig()
    full = analyze(example_series, cfg, null=null_005)
    sliced = subperiod_analyze(example_series, 1850, 2023, cfg, null=null_005)
    assert sliced.statistic == full.statistic
    assert sliced.changepoint == full.changepoint
    assert sliced.p_value == full.p_value


def test_subperiod_rejects_bad_bounds(example_series):
    cfg = DetectionConfig(mc_replicates=1000, grid_size=60)
    with pytest.raises(RangeError):
        subperiod_analyze(example_series, 1800, 1900, cfg)
    with pytest.raises(RangeError):
        subperiod_analyze(example_series, 2000, 2030, cfg)
    with pytest.raises(RangeError):
        subperiod_analyze(example_series, 1900, 1880, cfg)
    # six points is one short of the minimum
    with pytest.raises(RangeError):
        subperiod_analyze(example_series, 1970, 1975, cfg)


def test_recent_subperiod_shows_no_change(example_series, null_005):
    report = subperiod_analyze(example_series, 1970, 2023,
                               DetectionConfig(), null=null_005)
    assert not report.detected
    assert report.statistic < report.critical_values[90.0]
    assert report.series.n == 54
    assert report.series.start_label == 1970


def test_profile_arrays_are_read_only(example_series):
    prof = statistic_profile(example_series, 0.05)
    with pytest.raises(ValueError):
        prof.statistics[0] = 0.0
    with pytest.raises(ValueError):
        prof.candidates[0] = 0
