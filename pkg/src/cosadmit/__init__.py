"""Fourier-cosine density recovery and tail-energy admissibility checks."""

from ._kernels import active_backend
from .admissibility import (
    BoundReport,
    RateFit,
    TailEnergyResult,
    bound_report,
    bound_report_d,
    brute_force_B,
    brute_force_Bd,
    fit_rate,
)
from .cos_engine import (
    CosExpansion,
    ErrorReport,
    build_expansion,
    cf_coeff_F,
    evaluate,
    evaluate_grid,
    exact_coeff_A,
    mass,
    measure_error,
    truncated_cf,
)
from .densities import (
    DensitySpec,
    ProductDensitySpec,
    catalog,
    first_abs_moment,
    get_density,
    parse_density,
    student_t_cf,
    tail_weighted_moment,
    weighted_moment,
)
from .numerics import (
    LatticeSumResult,
    QuadResult,
    bessel_k,
    integrate,
    lattice_sum,
    zeta,
)
from .study import StudyConfig, StudyReport, run_study

__version__ = "0.1.0"

__all__ = [
    "BoundReport", "CosExpansion", "DensitySpec", "ErrorReport",
    "LatticeSumResult", "ProductDensitySpec", "QuadResult", "RateFit",
    "StudyConfig", "StudyReport", "TailEnergyResult", "active_backend",
    "bessel_k", "bound_report", "bound_report_d", "brute_force_B",
    "brute_force_Bd", "build_expansion", "catalog", "cf_coeff_F",
    "evaluate", "evaluate_grid", "exact_coeff_A", "first_abs_moment",
    "fit_rate", "get_density", "integrate", "lattice_sum", "mass",
    "measure_error", "parse_density", "run_study", "student_t_cf",
    "tail_weighted_moment", "truncated_cf", "weighted_moment", "zeta",
]
