"""Null distribution of the trimmed supremum statistic by Monte Carlo.

Two methods: "gp_grid" samples the limiting Gaussian process on a uniform
grid over (delta, 1-delta) through a Cholesky factor of its covariance
matrix; "finite_n" simulates white-noise series of a concrete length and
runs the actual detector on each.  Draws are reproducible replicate by
replicate: replicate i always consumes the i-th spawned child of the seed,
so results do not depend on how work is batched.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .detection import candidate_coefficients, kernel_profile
from .errors import DomainError, FactorizationFailure
from .moments import limit_covariance
from .series import admissible_k_range

#: Internal batch width for the grid sampler.  Fixed so that replicate i is
#: always computed inside the same block shape regardless of the total count.
_BLOCK = 256

#: Jitter ladder tried on the covariance diagonal before giving up.
_JITTERS = (0.0, 1e-12, 1e-11, 1e-10, 1e-9, 1e-8)


@dataclass(frozen=True)
class NullDistribution:
    """Simulated null draws of the trimmed supremum statistic."""

    delta: float
    grid: np.ndarray        # evaluation points in (0, 1)
    draws: np.ndarray       # sorted ascending, all nonnegative
    seed: int
    method: str             # "gp_grid" or "finite_n"
    n_sim: int              # number of Monte Carlo replicates

    def quantile(self, q) -> float:
        """Linearly interpolated sample quantile (the common default)."""
        q = np.asarray(q, dtype=float)
        if np.any(q < 0.0) or np.any(q > 1.0):
            raise DomainError("quantile level must lie in [0, 1]")
        result = np.quantile(self.draws, q)
        return float(result) if result.ndim == 0 else result

    def p_value(self, observed: float) -> float:
        """Add-one Monte Carlo p-value: (#draws >= observed + 1)/(R + 1)."""
        count = self.n_sim - int(np.searchsorted(self.draws, observed, side="left"))
        return (count + 1) / (self.n_sim + 1)

    def quantile_se(self, q: float, n_boot: int = 200) -> float:
        """Bootstrap standard error of the q-quantile (n_boot resamples)."""
        rng = np.random.default_rng(
            np.random.SeedSequence(entropy=[int(self.seed), 0xB0075E]))
        reps = np.empty(n_boot)
        for i in range(n_boot):
            idx = rng.integers(0, self.n_sim, size=self.n_sim)
            reps[i] = np.quantile(self.draws[idx], q)
        return float(reps.std(ddof=1))


def build_covariance_matrix(grid) -> np.ndarray:
    """Covariance matrix of the limit process on the given grid points.

    Symmetric with unit diagonal.  Off-diagonal entries equal
    limit_covariance on the ordered pair, evaluated with the identical
    arithmetic expression (so scalar and matrix routes agree bit for bit).
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 1:
        raise DomainError("grid must be a nonempty 1-d array")
    if np.any(grid <= 0.0) or np.any(grid >= 1.0):
        raise DomainError("grid points must lie in (0, 1)")
    lo = np.minimum.outer(grid, grid)
    hi = np.maximum.outer(grid, grid)
    prefactor = (1.5 * hi - 0.5 * lo - lo * hi) / (hi * (1.0 - lo))
    scale = np.sqrt((lo * (1.0 - hi)) / (hi * (1.0 - lo)))
    mat = prefactor * scale
    np.fill_diagonal(mat, 1.0)
    return mat


def _cholesky_with_jitter(matrix: np.ndarray) -> np.ndarray:
    for jitter in _JITTERS:
        try:
            if jitter == 0.0:
                return np.linalg.cholesky(matrix)
            bump = matrix + jitter * np.eye(matrix.shape[0])
            return np.linalg.cholesky(bump)
        except np.linalg.LinAlgError:
            continue
    raise FactorizationFailure(
        f"covariance matrix of order {matrix.shape[0]} is not positive "
        f"definite even with diagonal jitter up to {_JITTERS[-1]}")


def sample_sup_abs(matrix: np.ndarray, replicates: int, seed: int) -> np.ndarray:
    """Monte Carlo draws of the supremum of |process| over the grid.

    One spawned child seed per replicate; draws returned in replicate
    order (unsorted).
    """
    if replicates < 1:
        raise DomainError("replicates must be positive")
    chol = _cholesky_with_jitter(np.asarray(matrix, dtype=float))
    m = chol.shape[0]
    children = np.random.SeedSequence(int(seed)).spawn(replicates)
    draws = np.empty(replicates)
    lt = np.ascontiguousarray(chol.T)
    for start in range(0, replicates, _BLOCK):
        stop = min(start + _BLOCK, replicates)
        z = np.empty((stop - start, m))
        for i in range(start, stop):
            gen = np.random.Generator(np.random.PCG64(children[i]))
            z[i - start] = gen.standard_normal(m)
        paths = z @ lt
        draws[start:stop] = np.abs(paths).max(axis=1)
    return draws


def _finalize(delta, grid, draws, seed, method, replicates) -> NullDistribution:
    draws = np.sort(np.asarray(draws, dtype=float))
    grid = np.asarray(grid, dtype=float)
    draws.flags.writeable = False
    grid.flags.writeable = False
    return NullDistribution(delta=float(delta), grid=grid, draws=draws,
                            seed=int(seed), method=method,
                            n_sim=int(replicates))


def simulate_limit_null(delta: float = 0.05, grid_size: int = 1000,
                        replicates: int = 20000, seed: int = 1850,
                        cache=None) -> NullDistribution:
    """Null distribution from the limiting Gaussian process on a grid.

    The grid is grid_size equally spaced points spanning [delta, 1-delta]
    inclusive.  With cache given, an existing entry with identical
    parameters is returned bit for bit instead of resimulating.
    """
    if not 0.0 < delta < 0.5:
        raise DomainError(f"delta must lie in (0, 0.5), got {delta}")
    if cache is not None:
        hit = cache.get(method="gp_grid", delta=delta, grid_size=grid_size,
                        replicates=replicates, seed=seed)
        if hit is not None:
            return hit
    grid = np.linspace(delta, 1.0 - delta, grid_size)
    matrix = build_covariance_matrix(grid)
    draws = sample_sup_abs(matrix, replicates, seed)
    dist = _finalize(delta, grid, draws, seed, "gp_grid", replicates)
    if cache is not None:
        cache.put(dist)
    return dist


def simulate_finite_n(n: int, delta: float = 0.05, replicates: int = 2000,
                      seed: int = 1850) -> NullDistribution:
    """Null distribution of the supremum statistic at a concrete length n.

    Each replicate draws standard normal noise of length n and runs the
    closed-form detector over the admissible candidates (delta may be 0
    for the untrimmed scan).  Requires n >= 50.
    """
    if n < 50:
        raise DomainError(f"finite-length simulation needs n >= 50, got {n}")
    k_lo, k_hi = admissible_k_range(n, delta)
    ks = np.arange(k_lo, k_hi + 1)
    coeffs = candidate_coefficients(n, ks)
    children = np.random.SeedSequence(int(seed)).spawn(replicates)
    draws = np.empty(replicates)
    for i in range(replicates):
        gen = np.random.Generator(np.random.PCG64(children[i]))
        x = gen.standard_normal(n)
        j, _ = kernel_profile(x, ks, coefficients=coeffs)
        draws[i] = np.abs(j).max()
    return _finalize(delta, ks / n, draws, seed, "finite_n", replicates)
