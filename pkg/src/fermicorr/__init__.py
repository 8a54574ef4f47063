"""Free-Fermi-gas correlation kernels and their determinantal statistics,
with GUE spectra and Riemann zeta zeros as comparison ensembles."""

__version__ = "0.1.0"

from .correlations import (
    CorrelationMatrix,
    PointConfiguration,
    SlaterMetropolis,
    n_body_density_asymptotic,
    n_body_density_finite,
    normalization_residual,
    pair_correlation_theory,
    sample_slater_metropolis,
)
from .ensembles import GueConfig, sample_gue_spectrum, unfold_semicircle
from .kernel import (
    FiniteSystem,
    KernelParams,
    build_correlation_matrix,
    fermi_wavenumber,
    finite_kernel_value,
    kernel_closed_form,
    kernel_value,
)
from .sequences import UnfoldedSequence
from .specfun import QuadratureRule, bessel_j, gamma_fn, poisson_integral, spherical_j
from .stats import (
    PairCorrelationEstimate,
    curve_distance,
    estimate_pair_correlation,
    estimate_pair_correlation_pooled,
)
from .zeta import (
    ZeroSequence,
    counting_estimate,
    find_zeros,
    hardy_z,
    load_zeros_file,
    riemann_siegel_theta,
    unfold_by_counting,
    unfold_zeros,
    write_zeros_file,
    zeta_critical_line,
)

__all__ = [
    "__version__",
    "CorrelationMatrix",
    "FiniteSystem",
    "GueConfig",
    "KernelParams",
    "PairCorrelationEstimate",
    "PointConfiguration",
    "QuadratureRule",
    "SlaterMetropolis",
    "UnfoldedSequence",
    "ZeroSequence",
    "bessel_j",
    "build_correlation_matrix",
    "counting_estimate",
    "curve_distance",
    "estimate_pair_correlation",
    "estimate_pair_correlation_pooled",
    "fermi_wavenumber",
    "find_zeros",
    "finite_kernel_value",
    "gamma_fn",
    "hardy_z",
    "kernel_closed_form",
    "kernel_value",
    "load_zeros_file",
    "n_body_density_asymptotic",
    "n_body_density_finite",
    "normalization_residual",
    "pair_correlation_theory",
    "poisson_integral",
    "riemann_siegel_theta",
    "sample_gue_spectrum",
    "sample_slater_metropolis",
    "spherical_j",
    "unfold_by_counting",
    "unfold_semicircle",
    "unfold_zeros",
    "write_zeros_file",
    "zeta_critical_line",
]
