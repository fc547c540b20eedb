"""
Moderate deviations, from scalars to measures
=============================================

For the scalar Normal, Gamma and Beta sequences the tail probabilities
are available exactly, so -(1/a_n) log P can be watched converging to
the quadratic rate.  For measures the rate is beta/4 times the squared
L2 norm of the density, which is infinite for atomic perturbations.
"""

import numpy as np

from spectral_mdp.measures import DiscreteSigned, PolynomialDensity, reference_recursion, signed_moments
from spectral_mdp.mdp import (
    ScalarRateSpec,
    SpeedSchedule,
    measure_rate,
    moment_rate,
    projection_partial_sums,
    quadrature_rate,
    scalar_mdp_table,
)

for kind, x in [("normal_var", 1.0), ("gamma_mean", 1.0), ("beta_half", 0.25)]:
    rows = scalar_mdp_table(ScalarRateSpec(kind, 1.0), x, SpeedSchedule.power(0.5), [1e3, 1e4, 1e5, 1e6])
    print(kind, [round(r.normalized_rate, 4) for r in rows], "->", rows[0].target_rate)

# three routes to the same measure-level rate
mu = PolynomialDensity("marchenko_pastur", (0.4, -0.3, 0.2))
print("coefficients ", measure_rate(2.0, mu))
print("moments      ", moment_rate("laguerre", 2.0, signed_moments(mu, 3)))
print("quadrature   ", quadrature_rate(2.0, mu))

# an atomic perturbation: the projection series keeps growing
atoms = DiscreteSigned((1.0, -1.0), (0.5, -0.5))
sums = projection_partial_sums(2.0, atoms, reference_recursion("semicircle", 41), 40)
print("partial sums at K = 10, 20, 40:", np.round(sums[[9, 19, 39]], 3), "rate:", measure_rate(2.0, atoms))
