"""CUSUM change-point tests built on U-statistics.

The two constructions compare the U-statistic of the first ``k``
observations either with the full-sample U-statistic (first-vs-full) or
with the U-statistic of the remaining ``n - k`` observations
(first-vs-last).
"""

from .cptest import FIRST_VS_FULL, FIRST_VS_LAST, TestReport, estimate_location, run_both, run_test
from .errors import (
    ConfigurationError,
    DataError,
    DegenerateVarianceError,
    DomainError,
    SampleTooSmallError,
    UcusumError,
)
from .kernels import Kernel, builtin_kernel, custom_kernel, projection
from .lrv import LrvConfig, long_run_variance, studentize
from .nulldist import kolmogorov_cdf, kolmogorov_quantile, kolmogorov_sf, p_value
from .uproc import DiffProcess, diff_processes, prefix_u, suffix_u

__version__ = "0.1.0"

__all__ = [
    "FIRST_VS_FULL",
    "FIRST_VS_LAST",
    "ConfigurationError",
    "DataError",
    "DegenerateVarianceError",
    "DiffProcess",
    "DomainError",
    "Kernel",
    "LrvConfig",
    "SampleTooSmallError",
    "TestReport",
    "UcusumError",
    "builtin_kernel",
    "custom_kernel",
    "diff_processes",
    "estimate_location",
    "kolmogorov_cdf",
    "kolmogorov_quantile",
    "kolmogorov_sf",
    "long_run_variance",
    "p_value",
    "prefix_u",
    "projection",
    "run_both",
    "run_test",
    "studentize",
    "suffix_u",
]
