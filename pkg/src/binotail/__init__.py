"""Certified two-sided bounds for binomial tails.

The package has three layers:

* :mod:`binotail.exact` -- an oracle producing exact rationals (or
  high-precision values with tracked error bounds) for binomial pmfs, tails,
  partial means and a few special constants.
* :mod:`binotail.bounds`, :mod:`binotail.gauss`, :mod:`binotail.mckay` --
  closed-form bound families evaluated in log-domain binary64, with an
  optional high-precision backend for tie-breaking.
* :mod:`binotail.validate` -- grid sweeps that check every advertised
  inequality against the oracle and report violations only after precision
  escalation confirms them.

The ``binotail`` command line exposes evaluation, sweeps, verification
suites, conjecture scans, baseline comparisons and limit tracking;
:mod:`binotail.report` renders the deterministic CSV/JSON artifacts and
their companion figures.
"""

from binotail.bounds import (
    RatioBoundSet,
    TailBoundSet,
    chernoff_upper,
    ferrante_upper,
    large_dev_limit,
    moderate_dev_limit,
    partial_mean_bounds,
    ratio_bounds,
    ratio_lower,
    ratio_upper,
    reverse_chernoff_pair,
    scaled_tail_bounds,
    successive_ratio_bounds,
    tail_bounds,
    upper_tail_bounds,
    upper_tail_ratio_bounds,
)
from binotail.exact import (
    BinomialParams,
    ExactReal,
    TailTable,
    gaussian_upper_tail,
    lower_tail_exact,
    median_deficit,
    partial_mean_exact,
    pmf_exact,
    ramanujan_theta,
    tail_ratio_exact,
    upper_tail_exact,
)
from binotail.gauss import tail_coeff_lower, tail_coeff_upper
from binotail.mckay import (
    crossover_f_star,
    mckay_ratio_bounds,
    mckay_tail_bounds,
)
from binotail.validate import (
    SUITE_IDS,
    CheckSummary,
    GridSpec,
    ViolationReport,
    conjecture_scan,
    conjecture_slice,
    convergence_suite,
    monotonicity_suite,
    run_suite,
)

__version__ = "0.1.0"

__all__ = [
    "BinomialParams",
    "CheckSummary",
    "ExactReal",
    "GridSpec",
    "RatioBoundSet",
    "SUITE_IDS",
    "TailBoundSet",
    "TailTable",
    "ViolationReport",
    "chernoff_upper",
    "conjecture_scan",
    "conjecture_slice",
    "convergence_suite",
    "crossover_f_star",
    "ferrante_upper",
    "gaussian_upper_tail",
    "large_dev_limit",
    "lower_tail_exact",
    "mckay_ratio_bounds",
    "mckay_tail_bounds",
    "median_deficit",
    "moderate_dev_limit",
    "monotonicity_suite",
    "partial_mean_bounds",
    "partial_mean_exact",
    "pmf_exact",
    "ramanujan_theta",
    "ratio_bounds",
    "ratio_lower",
    "ratio_upper",
    "reverse_chernoff_pair",
    "run_suite",
    "scaled_tail_bounds",
    "successive_ratio_bounds",
    "tail_bounds",
    "tail_coeff_lower",
    "tail_coeff_upper",
    "tail_ratio_exact",
    "upper_tail_bounds",
    "upper_tail_exact",
    "upper_tail_ratio_bounds",
    "__version__",
]
