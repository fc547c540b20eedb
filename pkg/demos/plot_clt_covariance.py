"""
Fluctuations of the moment vector
=================================

Scaled by sqrt(beta n / 2), the moment vector fluctuates around the limit
with covariance D_k D_k^T.  The estimate below carries jackknife standard
errors, so each entry can be read as a z-score.
"""

import numpy as np

from spectral_mdp import EnsembleSpec, RngState
from spectral_mdp.combinatorics import dk_matrix
from spectral_mdp.ensembles import estimate_moment_covariance

spec = EnsembleSpec("gaussian", 200, 2.0)
est = estimate_moment_covariance(spec, 3, 10_000, RngState(7))
D = dk_matrix("gaussian", 3).to_float()

np.set_printoptions(precision=3, suppress=True)
print("empirical\n", est.cov)
print("limit D D^T\n", D @ D.T)
print("z-scores\n", (est.cov - D @ D.T) / est.se)
