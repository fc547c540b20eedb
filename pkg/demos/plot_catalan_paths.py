"""
Generalised Catalan numbers and the covariance factor
=====================================================

The numbers d_{i,j} count monotone lattice paths that never cross the
diagonal.  They fill the lower-triangular matrices D_k whose Gram
matrix is the limiting covariance of the moment vector.
"""

from spectral_mdp import combinatorics as cb

# closed form against a direct dynamic-programming count
for i, j in [(2, 3), (5, 7), (6, 10)]:
    print(f"d_{i},{j} = {cb.gen_catalan(i, j)}  (paths: {cb.count_paths_dp(i, j)})")

# the factor for the Laguerre ensemble, printed as exact integers
D = cb.dk_matrix("laguerre", 4)
for i in range(1, 5):
    print([str(D.entry(i, j)) for j in range(1, 5)])

# D D^T reproduces m_{i+j} - m_i m_j of the limit law with zero error
for ens in ("gaussian", "laguerre", "jacobi"):
    print(ens, cb.covariance_identity_error(ens, 8))
