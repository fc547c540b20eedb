from fractions import Fraction as F
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spectral_mdp.combinatorics import dk_matrix
from spectral_mdp.errors import DomainError, NotAMomentSequenceError, SupportError
from spectral_mdp.measures import reference_recursion
from spectral_mdp.orthopoly import (
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

SEMI = RecursionCoefficients((0,) * 10, (1,) * 10)


def test_coeffs_from_z_mp():
    c = coeffs_from_z([1] * 7)
    assert c.b == (1, 2, 2, 2) and c.a == (1, 1, 1)


def test_coeffs_from_z_arcsine_chain():
    c = coeffs_from_z([F(1, 2), F(1, 4), F(1, 4), F(1, 4), F(1, 4)])
    assert c.b == (F(1, 2), F(1, 2), F(1, 2))
    assert c.a == (F(1, 8), F(1, 16))


def test_coeffs_from_z_direct():
    c = coeffs_from_z([3, 2])
    assert c.b == (3,) and c.a == (6,)


def test_coeffs_from_z_rejects_nonpositive():
    with pytest.raises(DomainError):
        coeffs_from_z([1, 0, 1])


def test_z_from_coeffs_mp():
    assert z_from_coeffs(RecursionCoefficients((1, 2), (1,))) == (1, 1, 1)


def test_z_from_coeffs_semicircle_fails():
    with pytest.raises(SupportError, match=r"\[0, inf\)"):
        z_from_coeffs(RecursionCoefficients((0,), ()))


def test_translated_semicircle_support_criterion():
    # semicircle moved to [0, 4] sits on the half-line; the centred one does not
    shifted = RecursionCoefficients((F(2),) * 12, (F(1),) * 12)
    z = z_from_coeffs(shifted)
    assert all(v > 0 for v in z)
    with pytest.raises(SupportError):
        z_from_coeffs(RecursionCoefficients((F(0),) * 12, (F(1),) * 12))


def test_z_from_canonical_examples():
    assert z_from_canonical([F(1, 2)] * 4) == (F(1, 2), F(1, 4), F(1, 4), F(1, 4))
    assert z_from_canonical([F(1, 3)]) == (F(1, 3),)
    with pytest.raises(DomainError):
        z_from_canonical([F(1, 2), F(1)])


def test_canonical_from_z_rejects_outside_unit_interval():
    # Marchenko-Pastur variables are not a chain sequence: support [0, 4]
    with pytest.raises(SupportError, match=r"\[0, 1\]"):
        canonical_from_z([1, 1, 1])


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(0.01, 50), min_size=1, max_size=25))
def test_z_roundtrip(z):
    back = z_from_coeffs(coeffs_from_z(z))
    np.testing.assert_allclose(back, z, rtol=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(0.02, 0.98), min_size=1, max_size=25))
def test_p_roundtrip(p):
    back = canonical_from_z(z_from_canonical(p))
    np.testing.assert_allclose(back, p, rtol=1e-12)


def test_p_roundtrip_exact():
    p = [F(1, 3), F(2, 7), F(5, 9), F(1, 2), F(3, 11)]
    assert canonical_from_z(z_from_canonical(p)) == tuple(p)


def test_moments_semicircle():
    assert moments_from_coeffs(SEMI, 6) == (0, 1, 0, 2, 0, 5)


def test_moments_mp():
    assert moments_from_coeffs(coeffs_from_z([1] * 5), 4) == (1, 2, 5, 14)


def test_moments_arcsine():
    c = coeffs_from_z(z_from_canonical([F(1, 2)] * 5))
    got = moments_from_coeffs(c, 3)
    assert got == (F(1, 2), F(3, 8), F(5, 16))
    assert got == tuple(F(comb(2 * k, k), 4**k) for k in range(1, 4))


def test_moments_insufficient_coefficients():
    with pytest.raises(DomainError):
        moments_from_coeffs(RecursionCoefficients((0, 0), (1,)), 5)
    # exactly enough: 5 moments need b_1..b_3, a_1..a_2
    moments_from_coeffs(RecursionCoefficients((0, 0, 0), (1, 1)), 5)


def test_moments_vs_dense_matrix_power():
    rng = np.random.default_rng(2)
    for _ in range(20):
        k = int(rng.integers(1, 12))
        n = k // 2 + 3
        b = rng.uniform(-1, 1, n)
        a = rng.uniform(0.5, 2, n - 1)
        T = np.diag(b) + np.diag(np.sqrt(a), 1) + np.diag(np.sqrt(a), -1)
        ref = [np.linalg.matrix_power(T, j)[0, 0] for j in range(1, k + 1)]
        got = moments_from_coeffs(RecursionCoefficients(b, a), k)
        np.testing.assert_allclose(got, ref, rtol=1e-12, atol=1e-12)


def test_coeffs_from_moments_semicircle():
    c = coeffs_from_moments([0, 1, 0, 2, 0, 5])
    assert c.b == (0, 0, 0) and c.a == (1, 1, 1)


def test_coeffs_from_moments_mp():
    c = coeffs_from_moments([1, 2, 5, 14])
    assert c.b == (1, 2)
    assert c.a[0] == 1
    # four moments also fix the norm of p_2, hence a_2
    assert c.a == (1, 1)


def test_coeffs_from_moments_float_matches_exact():
    c = coeffs_from_moments([0.0, 1.0, 0.0, 2.0, 0.0, 5.0])
    np.testing.assert_allclose(c.b, [0, 0, 0], atol=1e-14)
    np.testing.assert_allclose(c.a, [1, 1, 1], rtol=1e-14)


def test_coeffs_from_moments_not_a_moment_sequence():
    # m_2 < m_1^2: negative variance
    with pytest.raises(NotAMomentSequenceError):
        coeffs_from_moments([1.0, 0.5])
    # two-point measure: Hankel of order 3 is singular
    with pytest.raises(NotAMomentSequenceError):
        coeffs_from_moments([F(0), F(1), F(0), F(1)])


def test_ill_conditioning_guard():
    m = [float(v) for v in moments_from_coeffs(SEMI.as_float(), 16)]
    with pytest.raises(DomainError, match="ill-conditioned"):
        coeffs_from_moments(m)
    c = coeffs_from_moments(m, allow_ill_conditioned=True)
    np.testing.assert_allclose(c.a, 1, rtol=1e-6)


def test_random_roundtrip():
    rng = np.random.default_rng(11)
    for _ in range(100):
        k = int(rng.integers(1, 13))
        c = RecursionCoefficients(rng.uniform(-1, 1, (k + 1) // 2), rng.uniform(0.5, 2, k // 2))
        back = coeffs_from_moments(moments_from_coeffs(c, k))
        r0, r1 = np.array(c.interleaved()), np.array(back.interleaved())
        assert np.linalg.norm(r1 - r0) <= 1e-8 * np.linalg.norm(r0)


def test_eval_orthonormal_semicircle():
    assert eval_orthonormal(SEMI, 1, 2.0) == pytest.approx(2.0)
    assert eval_orthonormal(SEMI, 0, 7.3) == 1.0
    # U_k(x/2) closed form on (-2, 2)
    x = np.linspace(-1.9, 1.9, 7)
    th = np.arccos(x / 2)
    for k in range(6):
        np.testing.assert_allclose(eval_orthonormal(SEMI, k, x), np.sin((k + 1) * th) / np.sin(th), atol=1e-12)


def test_eval_orthonormal_degree_check():
    with pytest.raises(DomainError):
        eval_orthonormal(RecursionCoefficients((0, 0), (1,)), 2, 0.0)


@pytest.mark.parametrize("ref", ["semicircle", "marchenko_pastur", "arcsine"])
def test_quadrature_orthonormality(ref):
    c = reference_recursion(ref, 12)
    x, w = gauss_quadrature(c, 8)
    P = np.array([eval_orthonormal(c, r, x) for r in range(6)])
    np.testing.assert_allclose((P * w) @ P.T, np.eye(6), atol=1e-10)


def test_monomial_coeffs_semicircle():
    t = orthonormal_monomial_coeffs(SEMI, 2)
    np.testing.assert_allclose(t, [[0, 1, 0], [-1, 0, 1]], atol=1e-15)


def test_monomial_coeffs_arcsine():
    t = orthonormal_monomial_coeffs(reference_recursion("arcsine", 2), 1)
    s8 = 2 * np.sqrt(2)
    np.testing.assert_allclose(t, [[-s8 / 2, s8]], rtol=1e-15)


def test_monomial_coeffs_match_evaluation():
    c = reference_recursion("marchenko_pastur", 8)
    t = orthonormal_monomial_coeffs(c, 6)
    x = np.linspace(0.1, 3.9, 5)
    for d in range(1, 7):
        np.testing.assert_allclose(np.polyval(t[d - 1][::-1], x), eval_orthonormal(c, d, x), atol=1e-10)


@pytest.mark.parametrize(
    "ref,ens", [("semicircle", "gaussian"), ("marchenko_pastur", "laguerre"), ("arcsine", "jacobi")]
)
@pytest.mark.parametrize("k", [1, 3, 5, 8])
def test_dk_inverse_rows_are_orthonormal_coefficients(ref, ens, k):
    table = orthonormal_monomial_coeffs(reference_recursion(ref, k + 1), k)
    inv = dk_matrix(ens, k).inverse_to_float()
    np.testing.assert_allclose(table[:, 1:], inv, rtol=0, atol=1e-10)


def test_gauss_small_cases():
    x, w = gauss_quadrature(SEMI, 2)
    np.testing.assert_allclose(x, [-1, 1], atol=1e-15)
    np.testing.assert_allclose(w, [0.5, 0.5], atol=1e-15)
    x, w = gauss_quadrature(RecursionCoefficients((0.7,), ()), 1)
    assert x.tolist() == [0.7] and w.tolist() == [1.0]
    with pytest.raises(DomainError):
        gauss_quadrature(SEMI, 0)


def test_gauss_reproduces_moments():
    rng = np.random.default_rng(4)
    for K in range(1, 9):
        c = RecursionCoefficients(rng.uniform(-1, 1, K + 1), rng.uniform(0.5, 2, K + 1))
        x, w = gauss_quadrature(c, K)
        m = moments_from_coeffs(c, 2 * K - 1)
        got = [np.sum(w * x**j) for j in range(1, 2 * K)]
        np.testing.assert_allclose(got, m, rtol=1e-10, atol=1e-10)


def test_empty_inputs_are_errors():
    with pytest.raises(DomainError):
        coeffs_from_z([])
    with pytest.raises(DomainError):
        coeffs_from_moments([])
    with pytest.raises(DomainError):
        RecursionCoefficients((0,), (0,))
