"""Core data model: time series, detection configuration, admissible candidates.

The time index is always t = 1..n with unit spacing.  Calendar labels are
presentation only: a series with start_label 1850 has label 1850 at t = 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigMismatch, EmptyRange, EmptySeries, NonFiniteValue

#: Shortest series any detection run accepts (smallest n with interior
#: candidates under every supported trimming fraction).
MIN_DETECTION_LENGTH = 7

#: Confidence levels, in percent, at which critical values are reported.
CRITICAL_LEVELS = (90.0, 95.0, 97.5, 99.0, 99.9)


def _exact(x) -> Fraction:
    # Go through the decimal string so 0.05 means 1/20, not its binary float.
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(str(x))


@dataclass(frozen=True)
class TimeSeries:
    """Regularly indexed observations with an optional calendar origin."""

    values: tuple
    start_label: Optional[int] = None

    @property
    def n(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        """Fresh float array copy of the values (never a shared buffer)."""
        return np.array(self.values, dtype=float)

    def label_of(self, t: int):
        """Calendar label of index t (t itself when no origin is set)."""
        if self.start_label is None:
            return t
        return self.start_label + t - 1

    def index_of(self, label: int) -> int:
        """Inverse of label_of."""
        if self.start_label is None:
            return label
        return label - self.start_label + 1


def from_values(values: Sequence[float], start_label: Optional[int] = None) -> TimeSeries:
    """Build a TimeSeries from raw values, validating finiteness.

    Raises EmptySeries on an empty input and NonFiniteValue (with 1-based
    position) on the first NaN or infinity.
    """
    vals = tuple(float(v) for v in values)
    if not vals:
        raise EmptySeries("series must contain at least one value")
    for i, v in enumerate(vals, start=1):
        if not math.isfinite(v):
            raise NonFiniteValue(i)
    return TimeSeries(values=vals, start_label=start_label)


@dataclass(frozen=True)
class DetectionConfig:
    """Knobs for a detection run.

    delta is the trimming fraction; candidates k keep delta < k/n < 1-delta.
    level is the significance level used for the detection decision.
    """

    delta: float = 0.05
    level: float = 0.05
    seed: int = 1850
    mc_replicates: int = 20000
    grid_size: int = 1000

    def __post_init__(self):
        if not (0.005 <= self.delta <= 0.25):
            raise ConfigMismatch(
                f"delta must lie in [0.005, 0.25], got {self.delta}")
        if not (0.0 < self.level < 0.5):
            raise ConfigMismatch(
                f"level must lie in (0, 0.5), got {self.level}")
        confidence = round((1.0 - self.level) * 100, 10)
        if confidence not in CRITICAL_LEVELS:
            raise ConfigMismatch(
                "level must correspond to a supported confidence level "
                f"{CRITICAL_LEVELS}, got {self.level}")
        if not (0 <= int(self.seed) < 2 ** 64):
            raise ConfigMismatch("seed must fit in 64 unsigned bits")
        if self.grid_size < 50:
            raise ConfigMismatch("grid_size must be at least 50")
        if self.mc_replicates < 1000:
            raise ConfigMismatch(
                "mc_replicates must be at least 1000 for p-value use")


def admissible_k_range(n: int, delta) -> tuple:
    """Candidate index bounds (k_lo, k_hi) for a series of length n.

    k_lo is the smallest k with k/n strictly above delta, floored at 2;
    k_hi the largest k with k/n strictly below 1-delta, capped at n-2.
    delta = 0 selects the untrimmed range (2, n-2).  Comparisons are exact
    rational arithmetic, so delta = 0.05 with n = 100 excludes k = 5.
    """
    if n < MIN_DETECTION_LENGTH:
        raise EmptyRange(f"series length {n} is below the minimum "
                         f"{MIN_DETECTION_LENGTH}")
    d = _exact(delta)
    if d < 0 or d >= Fraction(1, 2):
        raise ConfigMismatch(f"delta must lie in [0, 0.5), got {delta}")
    lo_bound = n * d
    k_lo_raw = int(lo_bound) + 1          # smallest integer strictly above
    hi_bound = n * (1 - d)
    k_hi_raw = int(hi_bound) - 1 if hi_bound == int(hi_bound) else int(hi_bound)
    k_lo = max(2, k_lo_raw)
    k_hi = min(n - 2, k_hi_raw)
    if k_lo > k_hi:
        raise EmptyRange(
            f"no admissible candidates for n={n}, delta={delta}")
    return k_lo, k_hi
