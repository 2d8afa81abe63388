"""Changepoint detection: studentized statistic profile, supremum, analysis.

The studentized statistic at candidate k is the slope-change estimate
divided by its estimated standard error.  The detector scans all admissible
candidates, takes the supremum of the absolute statistic, and compares it
against the simulated null distribution of the limiting Gaussian process.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigMismatch, DegenerateSeries, RangeError
from .fitting import JoinpointFit, fit_joinpoint
from .moments import slope_change_variance
from .series import (CRITICAL_LEVELS, DetectionConfig, TimeSeries,
                     admissible_k_range, from_values)

_EPS = float(np.finfo(float).eps)


def candidate_coefficients(n: int, ks: np.ndarray) -> tuple:
    """Vectorized closed-form coefficients for every candidate in ks.

    Returns (h1, h2, h3) with the slope-change estimate at k equal to
    h1*sum_x + h2*sum_tx + h3*sum_ramp_x; h3 is also the variance of that
    estimate per unit noise variance.  Data-independent, so callers doing
    repeated simulation precompute it once per (n, ks).
    """
    kf = ks.astype(float)
    m = n - kf
    w = 2.0 * kf * m + 2.0 * kf - n + 1.0
    h1 = 6.0 * (n + 1.0) / ((kf - 1.0) * w)
    h2 = -6.0 * (2.0 * kf + n - 1.0) / (kf * (kf - 1.0) * w)
    h3 = 6.0 * n * (n * n - 1.0) / (kf * (kf - 1.0) * m * (m + 1.0) * w)
    return h1, h2, h3


def kernel_profile(x: np.ndarray, ks: np.ndarray,
                   coefficients: Optional[tuple] = None) -> tuple:
    """Studentized statistics and residual variances for all candidates.

    O(n + len(ks)): the ramp-weighted data sums for every k come from two
    reversed cumulative sums.  The input is centered first (the model has a
    free intercept, so the statistic is location invariant) to keep the
    residual-sum subtraction well conditioned.  Returns (j, sigma2) arrays.
    Raises DegenerateSeries if any candidate leaves residual variance
    indistinguishable from zero.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    xc = x - x.mean()
    t = np.arange(1, n + 1, dtype=float)
    v1 = xc.sum()
    v2 = t @ xc
    sxx = xc @ xc
    rev = np.cumsum(xc[::-1])[::-1]          # rev[i] = sum of xc[i:]
    revt = np.cumsum((t * xc)[::-1])[::-1]
    kf = ks.astype(float)
    s1 = rev[ks]                              # sum over t >= k+1
    s2 = revt[ks]
    v3 = s2 - kf * s1
    h1, h2, h3 = coefficients if coefficients is not None \
        else candidate_coefficients(n, ks)
    beta = h1 * v1 + h2 * v2 + h3 * v3
    m = n - kf
    a = n * (n + 1.0) / 2.0
    b = m * (m + 1.0) / 2.0
    nc_a2 = n * n * (n * n - 1.0) / 12.0
    nd_ab = n * m * (m + 1.0) * (2.0 * kf + n - 1.0) / 12.0
    alpha = (n * v2 - a * v1 - beta * nd_ab) / nc_a2
    mu = (v1 - a * alpha - b * beta) / n
    sse = np.maximum(sxx - (mu * v1 + alpha * v2 + beta * v3), 0.0)
    tol = 64.0 * n * _EPS * sxx
    bad = np.flatnonzero(sse <= tol)
    if bad.size:
        raise DegenerateSeries(
            f"residual variance vanishes at candidate k={int(ks[bad[0]])}")
    sigma2 = sse / (n - 3.0)
    j = beta / np.sqrt(sigma2 * h3)
    return j, sigma2


def slope_change_statistic(x, k: int) -> float:
    """Studentized slope-change statistic at a single candidate k.

    Raises DegenerateSeries when the residual variance is zero (for
    example, exactly linear input).
    """
    x = np.asarray(x, dtype=float)
    fit = fit_joinpoint(x, k)
    scale = max(float(x @ x), 1.0)
    if fit.sse <= (64.0 * x.size * _EPS) ** 2 * scale:
        raise DegenerateSeries(
            f"residual variance vanishes at candidate k={k}")
    varfac = slope_change_variance(x.size, k, 1.0)
    return fit.beta_hat / np.sqrt(fit.sigma2_hat * varfac)


@dataclass(frozen=True)
class StatisticProfile:
    """The studentized statistic over every admissible candidate."""

    candidates: np.ndarray          # candidate indices k, ascending
    statistics: np.ndarray          # signed statistic at each candidate
    delta: float
    max_statistic: float            # supremum of the absolute statistic
    changepoint: int                # smallest candidate attaining it
    sigma2_at_changepoint: float

    @property
    def entries(self) -> list:
        """(k, statistic) pairs, ascending in k."""
        return list(zip(self.candidates.tolist(), self.statistics.tolist()))


def statistic_profile(series, delta: float = 0.05) -> StatisticProfile:
    """Scan every admissible candidate of the series at trimming delta.

    Ties in the maximizing candidate resolve to the smallest index.
    """
    if isinstance(series, TimeSeries):
        x = series.as_array()
    else:
        x = from_values(series).as_array()
    n = x.size
    k_lo, k_hi = admissible_k_range(n, delta)
    ks = np.arange(k_lo, k_hi + 1)
    j, sigma2 = kernel_profile(x, ks)
    absj = np.abs(j)
    i = int(np.argmax(absj))        # first index wins ties
    ks.flags.writeable = False
    j.flags.writeable = False
    return StatisticProfile(
        candidates=ks,
        statistics=j,
        delta=float(delta),
        max_statistic=float(absj[i]),
        changepoint=int(ks[i]),
        sigma2_at_changepoint=float(sigma2[i]),
    )


@dataclass(frozen=True)
class AnalysisReport:
    """Complete detection result for one series and configuration."""

    series: TimeSeries
    config: DetectionConfig
    profile: StatisticProfile
    fit: JoinpointFit
    critical_values: dict           # confidence percent -> critical value
    p_value: float
    detected: bool
    null_method: str
    null_replicates: int
    null_seed: int

    @property
    def statistic(self) -> float:
        return self.profile.max_statistic

    @property
    def changepoint(self) -> int:
        return self.profile.changepoint

    @property
    def changepoint_label(self):
        return self.series.label_of(self.profile.changepoint)

    @property
    def left_slope(self) -> float:
        return self.fit.left_slope

    @property
    def right_slope(self) -> float:
        return self.fit.right_slope


def analyze(series: TimeSeries, config: Optional[DetectionConfig] = None,
            null=None, cache=None) -> AnalysisReport:
    """Full detection run: profile, supremum, p-value, segment fits.

    A prebuilt null distribution is reused when supplied; its trimming
    fraction must equal the configuration's (ConfigMismatch otherwise).
    With cache given, simulated nulls are stored and fetched by their
    exact parameters.
    """
    if config is None:
        config = DetectionConfig()
    if not isinstance(series, TimeSeries):
        series = from_values(series)
    if null is not None and float(null.delta) != float(config.delta):
        raise ConfigMismatch(
            f"null distribution was simulated at delta={null.delta}, "
            f"configuration asks for delta={config.delta}")
    profile = statistic_profile(series, config.delta)
    if null is None:
        from .nulldist import simulate_limit_null
        null = simulate_limit_null(
            delta=config.delta, grid_size=config.grid_size,
            replicates=config.mc_replicates, seed=config.seed, cache=cache)
    critical = {lvl: null.quantile(lvl / 100.0) for lvl in CRITICAL_LEVELS}
    p = null.p_value(profile.max_statistic)
    fit = fit_joinpoint(series.as_array(), profile.changepoint)
    confidence = round((1.0 - config.level) * 100, 10)
    detected = profile.max_statistic > critical[confidence]
    return AnalysisReport(
        series=series, config=config, profile=profile, fit=fit,
        critical_values=critical, p_value=p, detected=detected,
        null_method=null.method, null_replicates=null.n_sim,
        null_seed=null.seed)


def subperiod_analyze(series: TimeSeries, from_label: int, to_label: int,
                      config: Optional[DetectionConfig] = None,
                      null=None, cache=None) -> AnalysisReport:
    """Analyze a labeled slice of the series, re-indexed from t = 1.

    Bounds are calendar labels when the series has an origin, raw indices
    otherwise.  The slice must lie inside the series and contain at least
    seven observations (RangeError otherwise).
    """
    if not isinstance(series, TimeSeries):
        series = from_values(series)
    i0 = series.index_of(from_label)
    i1 = series.index_of(to_label)
    if not (1 <= i0 <= i1 <= series.n):
        raise RangeError(
            f"subperiod [{from_label}, {to_label}] is outside the series")
    if i1 - i0 + 1 < 7:
        raise RangeError(
            f"subperiod [{from_label}, {to_label}] has fewer than 7 points")
    start = from_label if series.start_label is not None else None
    sub = TimeSeries(values=series.values[i0 - 1:i1], start_label=start)
    return analyze(sub, config=config, null=null, cache=cache)
