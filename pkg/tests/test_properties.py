"""Randomized invariants checked with hypothesis."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from qsw import analysis as A
from qsw.meyer import MeyerSystem
from qsw.trigpoly import VALLEE_POUSSIN, TrigPolynomial, apply_summation, fourier_coeffs

coeff = st.floats(-1, 1, allow_nan=False, allow_infinity=False)
points = arrays(np.float64, st.integers(1, 20), elements=st.floats(-50, 50))
omega0s = st.floats(np.pi / 3, 0.49 * np.pi)


def direct(a, b, w, deriv=0):
    k = np.arange(len(a))[:, None]
    w = np.asarray(w)[None, :]
    if deriv == 0:
        return a[0] / 2 + np.sum(a[1:, None] * np.cos(k[1:] * w) + b[1:, None] * np.sin(k[1:] * w), axis=0)
    return np.sum(k[1:] * (-a[1:, None] * np.sin(k[1:] * w) + b[1:, None] * np.cos(k[1:] * w)), axis=0)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(coeff, coeff), min_size=1, max_size=40), points)
def test_evaluator_matches_direct_sum(ab, w):
    a, b = (np.array(x) for x in zip(*ab))
    b[0] = 0.0
    p = TrigPolynomial(a, b)
    scale = 1 + np.sum(np.abs(a) + np.abs(b)) * len(a)
    assert np.allclose(p(w), direct(a, b, w), atol=1e-12 * scale)
    assert np.allclose(p.prime(w), direct(a, b, w, 1), atol=1e-11 * scale)
    assert np.allclose(p.derivative()(w), direct(a, b, w, 1), atol=1e-11 * scale)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 16), st.data())
def test_vp_reproduces_low_degree(half, data):
    n = 2 * half
    m = data.draw(st.integers(0, half))
    a = np.array(data.draw(st.lists(coeff, min_size=m + 1, max_size=m + 1)))
    b = np.array(data.draw(st.lists(coeff, min_size=m + 1, max_size=m + 1)))
    p = TrigPolynomial(a, b)
    u = apply_summation(VALLEE_POUSSIN, fourier_coeffs(p, n), n)
    w = np.linspace(-np.pi, np.pi, 97)
    assert np.max(np.abs(u(w) - p(w))) < 1e-12


@settings(max_examples=30, deadline=None)
@given(omega0s, points)
def test_meyer_qmf_pointwise(w0, w):
    m = MeyerSystem(w0)
    total = np.abs(m.mask(w)) ** 2 + np.abs(m.mask(w + np.pi)) ** 2
    assert np.allclose(total, 1.0, atol=1e-12)
    # two-scale relation phi(2w) = m(w) phi(w)
    assert np.allclose(m.phi_hat(2 * w), m.mask(w) * m.phi_hat(w), atol=1e-12)


@settings(max_examples=15, deadline=None)
@given(st.floats(0.5, 2.0), st.floats(-3, 3))
def test_gaussian_saturates_heisenberg(sigma, t0):
    def fhat(w):
        return np.exp(-(sigma**2) * w**2 / 2 - 1j * w * t0)

    def fhat_prime(w):
        return (-(sigma**2) * w - 1j * t0) * fhat(w)

    rep = A.localization(fhat, fhat_prime, omega_max=40 / sigma)
    assert rep.uc == pytest.approx(0.5, abs=1e-6)
    assert rep.time_centre == pytest.approx(t0, abs=1e-8)
    assert rep.time_radius2 == pytest.approx(sigma**2 / 2, rel=1e-6)


@settings(max_examples=10, deadline=None)
@given(st.floats(0.5, 2.0))
def test_uncertainty_is_dilation_invariant(a):
    m = MeyerSystem()
    ref = A.localization(m.phi_hat, m.phi_hat_prime, time_centre=0.0)
    rep = A.localization(
        lambda w: m.phi_hat(a * w), lambda w: a * m.phi_hat_prime(a * w), time_centre=0.0, omega_max=64 * np.pi / a,
        samples=2**17,
    )
    assert rep.uc == pytest.approx(ref.uc, rel=1e-5)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 20), st.sampled_from([8, 16, 40]), st.data())
def test_summation_commutes_with_derivative(m, n, data):
    a = np.array(data.draw(st.lists(coeff, min_size=m + 1, max_size=m + 1)))
    b = np.array(data.draw(st.lists(coeff, min_size=m + 1, max_size=m + 1)))
    p = TrigPolynomial(a, b)
    lhs = apply_summation(VALLEE_POUSSIN, fourier_coeffs(p.derivative(), n), n)
    rhs = apply_summation(VALLEE_POUSSIN, fourier_coeffs(p, n), n).derivative()
    w = np.linspace(-np.pi, np.pi, 257)
    assert np.max(np.abs(lhs(w) - rhs(w))) < 1e-10
