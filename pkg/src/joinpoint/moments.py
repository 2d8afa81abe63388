"""Second moments of the slope-change estimator and its studentized statistic.

Production formulas are exact factored rationals derived from the normal
equations (integer arithmetic, one final float division), so they are
cancellation-free at any n.  Two independent oracle routes (weight-vector
expansion and direct Gram-matrix inversion) are provided for verification.

With m = n - k and w_k = 2k(n-k) + 2k - n + 1:

    Var(slope change) = sigma^2 * 6n(n^2-1) / [k(k-1) m(m+1) w_k]

and for candidate pair k <= l (m_k = n - k, m_l = n - l):

    Cov = sigma^2 * 6n(n^2-1)(3ln + l - 2kl - kn + k - n + 1)
          / [l(l-1) m_k(m_k+1) w_k w_l]

The large-n limit of the correlation between statistics at k ~ tn and
l ~ sn is the covariance function of a unit-variance Gaussian process on
(0, 1); limit_covariance evaluates it.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .errors import ArgumentOrder, DomainError, NumericalInstability
from .fitting import design_sums, estimator_weights


def _variance_fraction(n: int, k: int) -> Fraction:
    m = n - k
    w = 2 * k * m + 2 * k - n + 1
    return Fraction(6 * n * (n * n - 1), k * (k - 1) * m * (m + 1) * w)


def _covariance_fraction(n: int, k: int, l: int) -> Fraction:
    mk = n - k
    ml = n - l
    wk = 2 * k * mk + 2 * k - n + 1
    wl = 2 * l * ml + 2 * l - n + 1
    s = 3 * l * n + l - 2 * k * l - k * n + k - n + 1
    return Fraction(6 * n * (n * n - 1) * s,
                    l * (l - 1) * mk * (mk + 1) * wk * wl)


def _check_candidate(n: int, k: int, name: str = "k"):
    if not 2 <= k <= n - 2:
        raise DomainError(f"need 2 <= {name} <= n-2, got {name}={k}, n={n}")


def slope_change_variance(n: int, k: int, sigma2: float = 1.0) -> float:
    """Exact variance of the slope-change estimate at candidate k.

    Linear in the noise variance sigma2.  Raises NumericalInstability if
    the value cannot be represented as a finite float.
    """
    _check_candidate(n, k)
    value = float(_variance_fraction(n, k)) * sigma2
    if not math.isfinite(value) or value <= 0:
        raise NumericalInstability(
            f"variance evaluation degenerated at n={n}, k={k}")
    return value


def slope_change_variance_oracle(n: int, k: int, sigma2: float = 1.0,
                                 route: str = "weights") -> float:
    """Independent variance computations used to validate the closed form.

    route="weights": expand Var(p . V) with the exact integer weight vector
    and exact design sums (all rational arithmetic).
    route="matrix": invert the 3x3 Gram matrix of the design numerically
    and read the slope-change diagonal entry.
    """
    _check_candidate(n, k)
    if route == "weights":
        wts = estimator_weights(n, k)
        s = design_sums(n, k)
        p1, p2, p3 = wts.p1, wts.p2, wts.p3
        quad = (n * p1 * p1 + s.c * p2 * p2 + s.e * p3 * p3
                + 2 * s.a * p1 * p2 + 2 * s.b * p1 * p3 + 2 * s.d * p2 * p3)
        return float(Fraction(quad, wts.denominator ** 2)) * sigma2
    if route == "matrix":
        s = design_sums(n, k)
        gram = np.array([[n, s.a, s.b],
                         [s.a, s.c, s.d],
                         [s.b, s.d, s.e]], dtype=float)
        inv = np.linalg.inv(gram)
        return float(inv[2, 2]) * sigma2
    raise ValueError(f"unknown route {route!r}")


def slope_change_covariance(n: int, k: int, l: int, sigma2: float = 1.0) -> float:
    """Exact covariance of the slope-change estimates at candidates k <= l.

    Raises ArgumentOrder when k > l; use the symmetric value for the
    transposed pair.
    """
    if k > l:
        raise ArgumentOrder(f"need k <= l, got k={k}, l={l}")
    _check_candidate(n, k)
    _check_candidate(n, l, name="l")
    value = float(_covariance_fraction(n, k, l)) * sigma2
    if not math.isfinite(value):
        raise NumericalInstability(
            f"covariance evaluation degenerated at n={n}, k={k}, l={l}")
    return value


def slope_change_covariance_oracle(n: int, k: int, l: int,
                                   sigma2: float = 1.0) -> float:
    """Nine-term expansion of Cov(p(k) . V(k), p(l) . V(l)) with exact
    rational arithmetic; independent of the factored closed form."""
    if k > l:
        raise ArgumentOrder(f"need k <= l, got k={k}, l={l}")
    _check_candidate(n, k)
    _check_candidate(n, l, name="l")
    sk = design_sums(n, k)
    sl = design_sums(n, l)
    # Cov matrix of the data-sum vectors at k and at l, per unit noise:
    # rows (sum_x, sum_tx, ramp_k), columns (sum_x, sum_tx, ramp_l).
    # Overlap of the two ramps: sum_{t>l} (t-k)(t-l) = e_l + (l-k) b_l.
    cross = np.empty((3, 3), dtype=object)
    cross[0, 0] = n
    cross[0, 1] = sk.a
    cross[0, 2] = sl.b
    cross[1, 0] = sk.a
    cross[1, 1] = sk.c
    cross[1, 2] = sl.d
    cross[2, 0] = sk.b
    cross[2, 1] = sk.d
    cross[2, 2] = sl.e + (l - k) * sl.b
    wk = estimator_weights(n, k)
    wl = estimator_weights(n, l)
    pk = (wk.p1, wk.p2, wk.p3)
    pl = (wl.p1, wl.p2, wl.p3)
    total = 0
    for i in range(3):
        for j in range(3):
            total += pk[i] * pl[j] * cross[i, j]
    return float(Fraction(total, wk.denominator * wl.denominator)) * sigma2


def statistic_correlation(n: int, k: int, l: int) -> float:
    """Correlation between the studentized statistics at candidates k <= l.

    Free of the noise variance by construction: computed from the exact
    rational variance and covariance with sigma2 never entering.
    """
    if k > l:
        raise ArgumentOrder(f"need k <= l, got k={k}, l={l}")
    _check_candidate(n, k)
    _check_candidate(n, l, name="l")
    if k == l:
        return 1.0
    cov = _covariance_fraction(n, k, l)
    ratio = cov * cov / (_variance_fraction(n, k) * _variance_fraction(n, l))
    value = math.sqrt(float(ratio))
    return value if cov >= 0 else -value


def limit_covariance(t: float, s: float) -> float:
    """Covariance function of the limiting unit-variance Gaussian process.

    Defined for arguments in the open interval (0, 1); symmetric in its
    arguments; exactly 1 on the diagonal.
    """
    for name, v in (("t", t), ("s", s)):
        if not (isinstance(v, (int, float)) and 0.0 < v < 1.0):
            raise DomainError(f"{name} must lie in (0, 1), got {v}")
    if t == s:
        return 1.0
    lo, hi = (t, s) if t < s else (s, t)
    prefactor = (1.5 * hi - 0.5 * lo - lo * hi) / (hi * (1.0 - lo))
    scale = math.sqrt((lo * (1.0 - hi)) / (hi * (1.0 - lo)))
    return prefactor * scale


def slope_change_variance_asymptotic(n: int, t: float) -> float:
    """Large-n approximation 3 / (n^3 t^3 (1-t)^3) to the variance at
    candidate k ~ t*n, per unit noise variance."""
    if not 0.0 < t < 1.0:
        raise DomainError(f"t must lie in (0, 1), got {t}")
    return 3.0 / (n ** 3 * t ** 3 * (1.0 - t) ** 3)
