"""Spectral measures of beta-ensembles: tridiagonal samplers, moment maps,
covariance factors and moderate-deviation rate functions."""

__version__ = "0.1.0"

from .combinatorics import (
    DkMatrix,
    Ensemble,
    count_paths_dp,
    covariance_identity_error,
    crossing_identity_error,
    dk_matrix,
    gen_catalan,
)
from .ensembles import (
    EnsembleSpec,
    TridiagonalMatrix,
    assemble_spectral,
    estimate_moment_covariance,
    moment_vector,
    sample_dirichlet_weights,
    sample_moments,
    sample_tridiagonal,
    spectral_measure,
)
from .errors import ConvergenceError, DomainError, NotAMomentSequenceError, SupportError
from .mdp import (
    ScalarRateSpec,
    SpeedSchedule,
    delta_method_rate,
    measure_rate,
    moment_rate,
    rate_via_projections,
    scalar_mdp_table,
    scalar_rate,
)
from .measures import (
    DiscreteSigned,
    PolynomialDensity,
    Reference,
    SpectralMeasure,
    density,
    moment_metric,
    reference_moment,
    reference_recursion,
    signed_moments,
    spectral_moments,
)
from .orthopoly import (
    RecursionCoefficients,
    canonical_from_z,
    coeffs_from_moments,
    coeffs_from_z,
    eval_orthonormal,
    gauss_quadrature,
    moments_from_coeffs,
    orthonormal_monomial_coeffs,
    z_from_canonical,
    z_from_coeffs,
)
from .rng import RngState
