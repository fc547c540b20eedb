import json
import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from spectral_mdp.errors import DomainError
from spectral_mdp.measures import (
    DiscreteSigned,
    PolynomialDensity,
    Reference,
    SpectralMeasure,
    density,
    integrate_reference,
    moment_metric,
    reference_moment,
    reference_recursion,
    signed_measure_from_json,
    signed_measure_to_json,
    signed_moments,
    spectral_moments,
)
from spectral_mdp.orthopoly import moments_from_coeffs


def test_density_values():
    assert density("semicircle", 0.0) == pytest.approx(0.3183098862, abs=1e-10)
    assert density("semicircle", 2.0) == 0.0
    assert density("semicircle", -2.0) == 0.0
    assert density("marchenko_pastur", 2.0) == pytest.approx(0.1591549431, abs=1e-10)
    assert density("arcsine", 1.5) == 0.0


@pytest.mark.parametrize("ref", list(Reference))
def test_density_normalised(ref):
    # plain scipy quad on the raw density: independent of the sine substitution
    lo, hi = ref.support
    val, _ = integrate.quad(lambda x: density(ref, x), lo, hi, limit=400)
    assert val == pytest.approx(1.0, abs=1e-6)
    assert integrate_reference(ref, lambda x: np.ones_like(x)) == pytest.approx(1.0, abs=1e-12)


def test_reference_moment_values():
    assert reference_moment("semicircle", 6) == 5
    assert reference_moment("semicircle", 5) == 0
    assert reference_moment("marchenko_pastur", 3) == 5
    assert reference_moment("arcsine", 2) == F(3, 8)


@pytest.mark.parametrize("ref", list(Reference))
def test_quadrature_reproduces_moments(ref):
    for k in range(13):
        got = integrate_reference(ref, lambda x, k=k: x**k)
        assert got == pytest.approx(float(reference_moment(ref, k)), rel=1e-8, abs=1e-8)


def test_reference_recursion_values():
    s = reference_recursion("semicircle", 3)
    assert s.b == (0, 0, 0) and s.a == (1, 1)
    mp = reference_recursion("marchenko_pastur", 3)
    assert mp.b == (1, 2, 2) and mp.a == (1, 1)
    ar = reference_recursion("arcsine", 2)
    assert ar.b == (F(1, 2), F(1, 2)) and ar.a == (F(1, 8),)


@pytest.mark.parametrize("ref", list(Reference))
def test_recursion_gives_moments_exactly(ref):
    c = reference_recursion(ref, 6)
    assert moments_from_coeffs(c, 10) == tuple(reference_moment(ref, k) for k in range(1, 11))


def test_spectral_moments_simple():
    assert spectral_moments(SpectralMeasure([0.0], [1.0]), 4).tolist() == [0, 0, 0, 0]
    mu = SpectralMeasure([1.0, -1.0], [0.5, 0.5])
    assert spectral_moments(mu, 2).tolist() == [0.0, 1.0]
    assert mu.atoms.tolist() == [-1.0, 1.0]


def test_spectral_measure_validation():
    with pytest.raises(DomainError):
        SpectralMeasure([0.0, 1.0], [0.6, 0.6])
    with pytest.raises(DomainError):
        SpectralMeasure([0.0, 1.0], [1.5, -0.5])
    with pytest.raises(DomainError):
        SpectralMeasure([np.inf], [1.0])


def test_spectral_measure_csv_roundtrip():
    rng = np.random.default_rng(0)
    w = rng.dirichlet(np.ones(7))
    mu = SpectralMeasure(rng.normal(size=7), w / math.fsum(w))
    text = mu.to_csv()
    assert text.splitlines()[0] == "atom,weight"
    back = SpectralMeasure.from_csv(text)
    assert np.array_equal(back.atoms, mu.atoms) and np.array_equal(back.weights, mu.weights)


def test_signed_moments_polynomial_density():
    m = signed_moments(PolynomialDensity("semicircle", (1.0,)), 3)
    np.testing.assert_allclose(m, [1.0, 0.0, 2.0], atol=1e-13)


def test_signed_moments_discrete():
    m = signed_moments(DiscreteSigned((1.0, -1.0), (0.5, -0.5)), 2)
    assert m.tolist() == [1.0, 0.0]


def test_signed_moments_zero():
    assert not signed_moments(PolynomialDensity("arcsine", (0.0, 0.0)), 5).any()
    assert not signed_moments(DiscreteSigned((1.0, 2.0), (0.0, 0.0)), 5).any()


@pytest.mark.parametrize("ref", list(Reference))
def test_signed_moments_against_adaptive_quadrature(ref):
    rng = np.random.default_rng(9)
    mu = PolynomialDensity(ref, tuple(rng.normal(size=4)))
    got = signed_moments(mu, 6)
    ref_vals = [integrate_reference(ref, lambda x, j=j: x**j * mu.h(x)) for j in range(1, 7)]
    np.testing.assert_allclose(got, ref_vals, rtol=1e-9, atol=1e-9)


def test_discrete_signed_requires_zero_mass():
    with pytest.raises(DomainError):
        DiscreteSigned((0.0, 1.0), (0.5, -0.25))


def test_discrete_signed_dedup():
    mu = DiscreteSigned((0.0, 1.0, 1.0), (-1.0, 0.25, 0.75))
    assert mu.atoms == (0.0, 1.0) and mu.weights == (-1.0, 1.0)


def test_metric_examples():
    assert moment_metric([1.0, 2.0], [1.0, 2.0], 2).value == 0.0
    v = moment_metric([1.0] + [0.0] * 7, [0.0] * 8, 8)
    assert v.value == 0.25 and v.truncation == 8 and v.tail_bound == 2.0**-8
    big = moment_metric([1e300] * 10, [-1e300] * 10, 10)
    assert big.value < 1.0 + 1e-12
    inf = moment_metric([np.inf] * 10, [0.0] * 10, 10)
    assert inf.value == pytest.approx(1 - 2.0**-10)
    with pytest.raises(DomainError):
        moment_metric([0.0], [0.0], -1)


finite = st.floats(-1e3, 1e3, allow_nan=False)
vec = st.lists(finite, min_size=6, max_size=6)


@settings(max_examples=200, deadline=None)
@given(vec, vec, vec)
def test_metric_axioms(a, b, c):
    dab = moment_metric(a, b, 6).value
    assert dab == moment_metric(b, a, 6).value
    assert 0 <= dab < 2
    assert dab <= moment_metric(a, c, 6).value + moment_metric(c, b, 6).value + 1e-15


def test_signed_measure_json_roundtrip():
    for mu in (PolynomialDensity("arcsine", (0.5, -0.25)), DiscreteSigned((0.0, 1.0), (0.5, -0.5))):
        text = signed_measure_to_json(mu)
        assert "variant" in json.loads(text)
        assert signed_measure_from_json(text) == mu
    with pytest.raises(DomainError):
        signed_measure_from_json({"variant": "Other"})
