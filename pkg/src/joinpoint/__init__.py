"""Detection of a single continuous slope change in a regularly sampled series.

The model fits two line segments that meet at an unknown changepoint; the
detector studentizes the slope-change estimate at every admissible
candidate, takes the supremum of the absolute statistic, and calibrates it
against a simulated null distribution of the limiting Gaussian process.
"""
from .cache import QuantileCache
from .detection import (AnalysisReport, StatisticProfile, analyze,
                        slope_change_statistic, statistic_profile,
                        subperiod_analyze)
from .errors import (ArgumentOrder, CacheCorruption, ConfigMismatch,
                     DegenerateSeries, DomainError, EmptyRange, EmptySeries,
                     FactorizationFailure, GapInLabels, JoinpointError,
                     NonFiniteValue, NonMonotoneLabels, NumericalInstability,
                     ParseError, RangeError, SingularSystem, UsageError)
from .fitting import (DesignSums, EstimatorWeights, JoinpointFit, design_sums,
                      estimator_weights, fit_joinpoint, hat_coefficients,
                      moment_statistics)
from .io import (SeriesFileSpec, load_example_series, read_series,
                 render_report, report_to_dict, write_report)
from .moments import (limit_covariance, slope_change_covariance,
                      slope_change_covariance_oracle, slope_change_variance,
                      slope_change_variance_asymptotic,
                      slope_change_variance_oracle, statistic_correlation)
from .nulldist import (NullDistribution, build_covariance_matrix,
                       sample_sup_abs, simulate_finite_n, simulate_limit_null)
from .series import (CRITICAL_LEVELS, DetectionConfig, TimeSeries,
                     admissible_k_range, from_values)

__version__ = "0.1.0"

__all__ = [
    "AnalysisReport", "ArgumentOrder", "CacheCorruption", "ConfigMismatch",
    "CRITICAL_LEVELS", "DegenerateSeries", "DesignSums", "DetectionConfig",
    "DomainError", "EmptyRange", "EmptySeries", "EstimatorWeights",
    "FactorizationFailure", "GapInLabels", "JoinpointError", "JoinpointFit",
    "NonFiniteValue", "NonMonotoneLabels", "NullDistribution",
    "NumericalInstability", "ParseError", "QuantileCache", "RangeError",
    "SeriesFileSpec", "SingularSystem", "StatisticProfile", "TimeSeries",
    "UsageError", "admissible_k_range", "analyze", "build_covariance_matrix",
    "design_sums", "estimator_weights", "fit_joinpoint", "from_values",
    "hat_coefficients", "limit_covariance", "load_example_series",
    "moment_statistics", "read_series", "render_report", "report_to_dict",
    "sample_sup_abs", "simulate_finite_n", "simulate_limit_null",
    "slope_change_covariance", "slope_change_covariance_oracle",
    "slope_change_statistic", "slope_change_variance",
    "slope_change_variance_asymptotic", "slope_change_variance_oracle",
    "statistic_correlation", "statistic_profile", "subperiod_analyze",
    "write_report",
]
