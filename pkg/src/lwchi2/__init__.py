"""Distributions of log-Lambert-W transformed chi-squared variables.

The package exposes four layers:

* :mod:`lwchi2.specfun` -- Lambert W branches, log-gamma, regularized
  incomplete gamma, polygamma;
* :mod:`lwchi2.lwdist` -- the transformed chi-squared family itself
  (cdf/pdf/quantile/cf/mgf/cumulants);
* :mod:`lwchi2.convolve` -- linear combinations of independent terms via
  characteristic-function inversion;
* :mod:`lwchi2.inference` -- exact likelihood-ratio tests whose statistics
  follow these laws, with :mod:`lwchi2.oracle` providing seeded Monte Carlo
  verification and :mod:`lwchi2.cli` the command-line surface.

Numerical kernels run on a compiled backend when the optional C extension
is built, and on a pure-NumPy fallback otherwise; ``BACKEND_NAME`` reports
which one is active.
"""
from ._backend import BACKEND_NAME
from .convolve import (
    LinearCombination,
    QuadratureSettings,
    Term,
    combo_cdf,
    combo_cf,
    combo_cumulants,
    combo_pdf,
    combo_quantile,
)
from .errors import ConvergenceError, DomainError, SchemaError
from .inference import (
    ConfidenceInterval,
    VarCompModel,
    canonical_lrt_distribution,
    canonical_lrt_statistic,
    regression_lrt_null,
    regression_lrt_statistic,
    variance_ci_lrt,
    variance_ci_minlength,
    variance_lrt_null,
    variance_lrt_statistic,
)
from .lwdist import (
    BaseDistribution,
    CumulantSet,
    LWChiSquared,
    Theta,
    branch_solutions,
    chi2_base,
    chi2_quantile,
    gamma_base,
    lw_cdf,
    lw_chi2_cf,
    lw_chi2_cumulants,
    lw_chi2_mgf,
    lw_pdf,
    lw_quantile,
    mgf_upper_limit,
    standard_lw_chi2,
    transform,
    transformed_cdf,
    transformed_pdf,
    transformed_quantile,
)
from .oracle import (
    EmpiricalSummary,
    SampleSpec,
    ks_statistic,
    sample_chi2,
    sample_combination,
    sample_lw,
)
from .specfun import (
    gen_inc_gamma,
    lambert_w0,
    lambert_wm1,
    log_gamma_complex,
    log_gamma_real,
    polygamma,
    reg_lower_inc_gamma,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND_NAME",
    "__version__",
    # errors
    "ConvergenceError",
    "DomainError",
    "SchemaError",
    # special functions
    "lambert_w0",
    "lambert_wm1",
    "log_gamma_real",
    "log_gamma_complex",
    "reg_lower_inc_gamma",
    "gen_inc_gamma",
    "polygamma",
    # the transformed family
    "Theta",
    "BaseDistribution",
    "LWChiSquared",
    "CumulantSet",
    "transform",
    "branch_solutions",
    "lw_cdf",
    "lw_pdf",
    "lw_quantile",
    "transformed_cdf",
    "transformed_pdf",
    "transformed_quantile",
    "chi2_base",
    "gamma_base",
    "chi2_quantile",
    "standard_lw_chi2",
    "lw_chi2_cf",
    "lw_chi2_mgf",
    "mgf_upper_limit",
    "lw_chi2_cumulants",
    # linear combinations
    "Term",
    "LinearCombination",
    "QuadratureSettings",
    "combo_cf",
    "combo_cdf",
    "combo_pdf",
    "combo_quantile",
    "combo_cumulants",
    # inference
    "VarCompModel",
    "ConfidenceInterval",
    "variance_lrt_statistic",
    "variance_lrt_null",
    "variance_ci_lrt",
    "variance_ci_minlength",
    "regression_lrt_statistic",
    "regression_lrt_null",
    "canonical_lrt_statistic",
    "canonical_lrt_distribution",
    # Monte Carlo
    "SampleSpec",
    "EmpiricalSummary",
    "sample_chi2",
    "sample_lw",
    "sample_combination",
    "ks_statistic",
]
