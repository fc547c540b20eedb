"""
Moments, recursion coefficients and canonical moments
=====================================================

A measure on the line is described by its moments, by the coefficients
of its orthogonal-polynomial recurrence, or (on [0, inf) and [0, 1]) by
the chain variables z and the canonical moments p.  The conversions are
exact when fed fractions.
"""

from fractions import Fraction

from spectral_mdp import orthopoly as op
from spectral_mdp.measures import reference_moment

# Marchenko-Pastur moments are the Catalan numbers
m = [reference_moment("marchenko_pastur", j) for j in range(1, 9)]
c = op.coeffs_from_moments(m)
print("b =", [str(v) for v in c.b])
print("a =", [str(v) for v in c.a])

# z-variables: every z_k equals 1 for this law
print("z =", [str(v) for v in op.z_from_coeffs(c)])

# canonical moments of the arcsine law are all 1/2
m = [reference_moment("arcsine", j) for j in range(1, 9)]
z = op.z_from_coeffs(op.coeffs_from_moments(m))
print("p =", [str(v) for v in op.canonical_from_z(z)])

# the roundtrip back is exact
assert list(op.moments_from_coeffs(op.coeffs_from_z(op.z_from_canonical([Fraction(1, 2)] * 8)), 8)) == m
