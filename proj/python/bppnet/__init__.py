"""Coverage, rate and caching analysis for finite wireless networks."""

from ._bppnet import (
    DomainError,
    NumericalError,
    ValidationError,
    c_kernel,
    central_cdf,
    central_pdf,
    cond_cdf_w,
    cond_pdf_w,
    coverage,
    d_kernel,
    gauss_2f1,
    laplace_uniform,
    nse,
    optimal_active_count,
    optimize_caching,
    run_cli,
    sc_coverage,
    serving_pdf_kclosest,
    simulate_coverage,
    split_weights,
    zipf_pmf,
)

__all__ = [
    "DomainError",
    "NumericalError",
    "ValidationError",
    "c_kernel",
    "central_cdf",
    "central_pdf",
    "cond_cdf_w",
    "cond_pdf_w",
    "coverage",
    "d_kernel",
    "gauss_2f1",
    "laplace_uniform",
    "nse",
    "optimal_active_count",
    "optimize_caching",
    "run_cli",
    "sc_coverage",
    "serving_pdf_kclosest",
    "simulate_coverage",
    "split_weights",
    "zipf_pmf",
]
