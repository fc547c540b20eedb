"""
Gauss rules from recurrence coefficients
========================================

The eigenvalues of the truncated Jacobi matrix are the nodes of the
K-point Gauss rule and the squared first eigenvector components are its
weights.  The rule integrates polynomials of degree 2K - 1 exactly.
"""

import numpy as np

from spectral_mdp.measures import reference_moment, reference_recursion
from spectral_mdp.orthopoly import gauss_quadrature

for ref in ("semicircle", "marchenko_pastur", "arcsine"):
    nodes, weights = gauss_quadrature(reference_recursion(ref, 6), 6)
    errs = [abs(weights @ nodes**k - float(reference_moment(ref, k))) for k in range(12)]
    print(f"{ref:17s} max moment error up to degree 11: {max(errs):.1e}")

# a 2-point semicircle rule sits at -1 and 1 with equal weights
print(np.round(gauss_quadrature(reference_recursion("semicircle", 2), 2), 15))
