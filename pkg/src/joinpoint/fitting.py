"""Exact closed-form least squares for the two-segment continuous-slope model.

At a fixed candidate index k the fitted mean is mu + alpha*t for t <= k and
mu + alpha*t + beta*(t - k) for t > k, continuous at t = k by construction.
The three normal equations are solved in closed form: all design sums are
exact integers, the slope-change estimate is a fixed linear combination of
three data sums, and the remaining coefficients follow by back-substitution.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .errors import SingularSystem


class DesignSums(NamedTuple):
    """Exact integer sums of the design columns for given (n, k).

    a = sum of t, c = sum of t^2 over t = 1..n; b = sum of (t-k),
    d = sum of t*(t-k), e = sum of (t-k)^2 over t = k+1..n.
    """

    a: int
    b: int
    c: int
    d: int
    e: int


def design_sums(n: int, k: int) -> DesignSums:
    """Design-column sums as exact integers.  Requires 1 <= k <= n."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    m = n - k
    a = n * (n + 1) // 2
    c = n * (n + 1) * (2 * n + 1) // 6
    b = m * (m + 1) // 2
    e = m * (m + 1) * (2 * m + 1) // 6
    d = m * (m + 1) * (2 * n + k + 1) // 6
    return DesignSums(a=a, b=b, c=c, d=d, e=e)


class MomentStatistics(NamedTuple):
    """The three data sums entering the normal equations."""

    sum_x: float
    sum_tx: float
    sum_ramp_x: float


def moment_statistics(x, k: int) -> MomentStatistics:
    """Data sums (sum X_t, sum t X_t, sum_{t>k} (t-k) X_t) for 1 <= k < n."""
    x = np.asarray(x, dtype=float)
    n = x.size
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < n, got k={k}, n={n}")
    t = np.arange(1, n + 1, dtype=float)
    ramp = t[k:] - float(k)
    return MomentStatistics(
        sum_x=float(x.sum()),
        sum_tx=float(t @ x),
        sum_ramp_x=float(ramp @ x[k:]),
    )


@dataclass(frozen=True)
class EstimatorWeights:
    """Exact integer representation of the slope-change estimator.

    The estimate equals (p1*sum_x + p2*sum_tx + p3*sum_ramp_x) / denominator.
    All four entries are exact integers for every 2 <= k <= n-2.
    """

    p1: int
    p2: int
    p3: int
    denominator: int


def estimator_weights(n: int, k: int) -> EstimatorWeights:
    """Integer weights making the slope-change estimate a ratio of exact
    linear combinations of the data sums.  Requires 2 <= k <= n-2."""
    if not 2 <= k <= n - 2:
        raise ValueError(f"need 2 <= k <= n-2, got k={k}, n={n}")
    m = n - k
    w = 2 * k * m + 2 * k - n + 1
    p1 = Fraction(-k * n * n * (n + 1) * m * (m + 1), 12)
    p2 = Fraction(n * n * m * (m + 1) * (2 * k + n - 1), 12)
    p3 = Fraction(-(n ** 3) * (n * n - 1), 12)
    den = Fraction(-k * (k - 1) * n * n * m * (m + 1) * w, 72)
    out = []
    for f in (p1, p2, p3, den):
        if f.denominator != 1:
            raise SingularSystem(
                f"weight representation not integral at n={n}, k={k}")
        out.append(int(f))
    if out[3] == 0:
        raise SingularSystem(f"zero denominator at n={n}, k={k}")
    return EstimatorWeights(p1=out[0], p2=out[1], p3=out[2], denominator=out[3])


def hat_coefficients(n: int, k: int) -> tuple:
    """Float coefficients (h1, h2, h3) with slope change = h1*sum_x +
    h2*sum_tx + h3*sum_ramp_x; h3 is also the unit-noise variance factor."""
    if not 2 <= k <= n - 2:
        raise ValueError(f"need 2 <= k <= n-2, got k={k}, n={n}")
    m = n - k
    w = 2 * k * m + 2 * k - n + 1
    if w == 0 or k == 1:
        raise SingularSystem(f"singular design at n={n}, k={k}")
    h1 = float(Fraction(6 * (n + 1), (k - 1) * w))
    h2 = float(Fraction(-6 * (2 * k + n - 1), k * (k - 1) * w))
    h3 = float(Fraction(6 * n * (n * n - 1), k * (k - 1) * m * (m + 1) * w))
    return h1, h2, h3


@dataclass(frozen=True)
class JoinpointFit:
    """Least-squares result at a fixed candidate index k."""

    k: int
    mu_hat: float
    alpha_hat: float
    beta_hat: float
    sse: float
    sigma2_hat: float

    @property
    def left_slope(self) -> float:
        return self.alpha_hat

    @property
    def right_slope(self) -> float:
        return self.alpha_hat + self.beta_hat

    def mean_at(self, t) -> np.ndarray:
        """Fitted mean function evaluated at index t (scalar or array)."""
        t = np.asarray(t, dtype=float)
        ramp = np.clip(t - self.k, 0.0, None)
        return self.mu_hat + self.alpha_hat * t + self.beta_hat * ramp


def fit_joinpoint(x, k: int) -> JoinpointFit:
    """Fit the two-segment model at candidate k.  Requires 2 <= k <= n-2.

    The slope change comes from the exact closed form; the intercept and
    base slope follow by back-substitution in the normal equations.  The
    residual sum of squares is accumulated from explicit residuals, so it
    is nonnegative and zero for exactly representable two-segment data.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    if not 2 <= k <= n - 2:
        raise ValueError(f"need 2 <= k <= n-2, got k={k}, n={n}")
    if not np.all(np.isfinite(x)):
        raise SingularSystem("non-finite values in input")
    stats = moment_statistics(x, k)
    h1, h2, h3 = hat_coefficients(n, k)
    beta = h1 * stats.sum_x + h2 * stats.sum_tx + h3 * stats.sum_ramp_x
    s = design_sums(n, k)
    m = n - k
    # exact integer composites: n*c - a^2 and n*d - a*b
    nc_a2 = n * n * (n * n - 1) // 12
    nd_ab = n * m * (m + 1) * (2 * k + n - 1) // 12
    alpha = (n * stats.sum_tx - s.a * stats.sum_x - beta * nd_ab) / nc_a2
    mu = (stats.sum_x - s.a * alpha - s.b * beta) / n
    t = np.arange(1, n + 1, dtype=float)
    ramp = np.clip(t - k, 0.0, None)
    resid = x - (mu + alpha * t + beta * ramp)
    sse = float(resid @ resid)
    if n <= 3:
        raise SingularSystem("need n > 3 for a residual variance")
    sigma2 = sse / (n - 3)
    if not (math.isfinite(mu) and math.isfinite(alpha) and math.isfinite(beta)):
        raise SingularSystem(f"non-finite solution at n={n}, k={k}")
    return JoinpointFit(k=k, mu_hat=mu, alpha_hat=alpha, beta_hat=beta,
                        sse=sse, sigma2_hat=sigma2)
