"""Theta functions: exact products and quotients, numeric evaluation, and recovery from samples."""
from __future__ import annotations

import random

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from torusear.errors import InvalidParameter, InvalidSampler, NotAProduct
from torusear.spectra import cycle_spectrum, spectrum_sum, torus_spectrum
from torusear.theta import (
    ThetaFunction,
    spectrum_from_theta,
    spectrum_from_theta_samples,
    theta_divide,
    theta_divide_numeric,
    theta_from_spectrum,
    theta_product,
)


def _theta(shape):
    return theta_from_spectrum(torus_spectrum(shape))


def test_c4_theta_terms():
    theta = theta_from_spectrum(cycle_spectrum(4))
    assert repr(theta) == "ThetaFunction(1 + 2 e^(-2 t) + 1 e^(-4 t))"
    assert [(int(float(mu)), c) for mu, c in theta.terms] == [(0, 1), (2, 2), (4, 1)]


def test_theta_at_zero_counts_vertices():
    with mpmath.workdps(30):
        assert _theta((3, 4, 5))(0) == 60


def test_theta_matches_direct_eigenvalue_sum():
    theta = _theta((5, 6))
    with mpmath.workdps(40):
        t = mpmath.mpf("0.37")
        direct = sum(mpmath.exp(-4 * mpmath.sin(mpmath.pi * a / 5) ** 2 * t
                                - 4 * mpmath.sin(mpmath.pi * b / 6) ** 2 * t)
                     for a in range(5) for b in range(6))
        assert abs(theta(t) - direct) < mpmath.mpf(10) ** -35


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 16), st.integers(2, 16))
def test_product_and_division_are_inverse(m1, m2):
    f = theta_from_spectrum(cycle_spectrum(m1))
    g = theta_from_spectrum(cycle_spectrum(m2))
    fg = theta_product(f, g)
    assert fg == f * g
    assert fg == theta_from_spectrum(spectrum_sum(cycle_spectrum(m1), cycle_spectrum(m2)))
    assert theta_divide(fg, g) == f
    assert fg / f == g
    with mpmath.workdps(30):
        t = mpmath.mpf("0.8")
        assert abs(fg(t) - f(t) * g(t)) < mpmath.mpf(10) ** -25


def test_division_failure():
    with pytest.raises(NotAProduct):
        theta_divide(_theta((5,)), _theta((3,)))


def test_spectrum_round_trip_and_json():
    s = torus_spectrum((2, 5))
    theta = theta_from_spectrum(s)
    assert spectrum_from_theta(theta) is s
    assert ThetaFunction.from_json(theta.to_json()) == theta
    assert '"exponent_exact"' in theta.to_json()


def test_numeric_division():
    num = [(0.0, 1), (1.0, 2), (2.0, 1), (3.0, 1), (4.0, 2), (5.0, 1)]
    assert theta_divide_numeric(num, [(0.0, 1), (3.0, 1)]) == [(0.0, 1), (1.0, 2), (2.0, 1)]
    with pytest.raises(NotAProduct):
        theta_divide_numeric([(0.0, 1), (1.0, 1)], [(0.0, 1), (2.0, 1)])
    with pytest.raises(InvalidParameter):
        theta_divide_numeric(num, [(1.0, 1)])


def test_numeric_division_clusters_nearby_exponents():
    num = [(0.0, 1), (1.0, 1), (1.0 + 1e-12, 1), (2.0, 1)]
    assert theta_divide_numeric(num, [(0.0, 1), (1.0, 1)]) == [(0.0, 1), (1.0, 1)]


# -- recovery from samples

def _sampler(terms):
    def f(t):
        return sum(c * mpmath.exp(-mpmath.mpf(mu) * t) for mu, c in terms)
    return f


def test_recovers_a_torus_theta():
    theta = _theta((3, 4))
    rec = spectrum_from_theta_samples(theta.sampler(), 8)
    expected = [(float(mu), c) for mu, c in theta.terms]
    assert [r.multiplicity for r in rec] == [c for _, c in expected]
    assert all(abs(r.exponent - mu) < 1e-6 for r, (mu, _) in zip(rec, expected))
    assert rec[0].exponent == 0.0


def test_recovers_small_sums():
    rng = random.Random(3)
    for _ in range(10):
        k = rng.randint(1, 5)
        mus, x = [], rng.choice([0.0, rng.uniform(0, 2)])
        for _ in range(k):
            mus.append(x)
            x += rng.uniform(0.5, 2)
        cs = [rng.randint(1, 10) for _ in mus]
        rec = spectrum_from_theta_samples(_sampler(list(zip(mus, cs))), 6)
        assert [r.multiplicity for r in rec] == cs
        assert max(abs(r.exponent - mu) for r, mu in zip(rec, mus)) < 1e-6


def test_recovery_respects_degree_bound():
    with pytest.raises(Exception):
        spectrum_from_theta_samples(_sampler([(0, 1), (1, 1), (2, 1)]), 2)
    with pytest.raises(InvalidParameter):
        spectrum_from_theta_samples(_sampler([(0, 1)]), 0)


def test_recovery_rejects_non_integer_total():
    with pytest.raises(InvalidSampler):
        spectrum_from_theta_samples(_sampler([(0, 1.5)]), 2)
