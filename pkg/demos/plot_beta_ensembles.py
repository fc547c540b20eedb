"""
Sampling tridiagonal beta-ensembles
===================================

Each ensemble is drawn through its tridiagonal model.  The spectral
measure puts weight |u_i(1)|^2 on eigenvalue lambda_i, and its moments
are read off (T^j)_{11} without any eigendecomposition.
"""

import numpy as np

from spectral_mdp import EnsembleSpec, RngState
from spectral_mdp.ensembles import moment_vector, sample_moments, sample_tridiagonal, spectral_measure
from spectral_mdp.measures import reference_moment, spectral_moments

rng = RngState(seed=2024)

# one Jacobi matrix: eigenvalues inside [0, 1], weights summing to one
T = sample_tridiagonal(EnsembleSpec("jacobi", 8, 2.0), rng)
mu = spectral_measure(T)
print("atoms  ", np.round(mu.atoms, 4))
print("weights", np.round(mu.weights, 4))
print("two moment routes agree:", np.allclose(spectral_moments(mu, 6), moment_vector(T, 6)))

# the average moment vector drifts to the limit law as n grows
for kind, ref in [("gaussian", "semicircle"), ("laguerre", "marchenko_pastur")]:
    target = np.array([float(reference_moment(ref, j)) for j in range(1, 5)])
    for n in (25, 100, 400):
        m = sample_moments(EnsembleSpec(kind, n, 1.0, gamma=1.0), 4, 4000, rng)
        print(f"{kind:9s} n={n:4d} max |mean - limit| = {np.abs(m.mean(0) - target).max():.4f}")
