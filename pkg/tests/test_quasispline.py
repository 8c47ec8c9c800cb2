import numpy as np
import pytest

from qsw.analysis import localization
from qsw.errors import ConstructionError, DomainError
from qsw.quasispline import build, diagnostics, synthesize
from qsw.trigpoly import FEJER

from helpers import central_diff


def test_build_validation(meyer):
    with pytest.raises(ValueError):
        build(meyer, 0, 32)
    with pytest.raises(ValueError):
        build(meyer, 2, 33)
    # at very high degree the polynomial vanishes at pi to rounding level
    with pytest.raises(ConstructionError, match="con3"):
        build(meyer, 1, 2**15)


def test_other_methods_build(meyer):
    q = build(meyer, 2, 63, FEJER)
    assert q.mask(0.0) == pytest.approx(1.0)


def test_mask_values(family):
    for q in family.values():
        assert q.mask(0.0) == pytest.approx(1.0, abs=1e-14)
        assert q.mask(np.pi) == pytest.approx(0.0, abs=1e-14)
        assert q.phi_hat(0.0) == pytest.approx(1.0, abs=1e-14)
        assert q.big_phi(0.0) ** -0.5 == pytest.approx(1.0, abs=1e-2)


def test_truncation_sizes(family):
    assert family[2].shifts == 40
    assert family[8].shifts == 8
    assert family[4].depth(64 * np.pi) == 28


def test_refinement_identity(family):
    w = np.linspace(-8 * np.pi, 8 * np.pi, 2001)
    for l in (2, 5, 8):
        q = family[l]
        assert np.max(np.abs(q.phi_hat(w) - q.mask(w / 2) * q.phi_hat(w / 2))) < 1e-10


@pytest.mark.parametrize("l", [2, 3, 5, 8])
def test_partition_of_unity(family, l):
    assert diagnostics(family[l])["partition_error"] < 1e-8


def test_psi_perp_properties(family):
    q = family[3]
    assert abs(q.psi_hat_perp(0.0)) < 1e-12
    w = np.linspace(0.1, 40, 777)
    assert np.max(np.abs(np.abs(q.psi_hat_perp(w)) - np.abs(q.psi_hat_perp(-w)))) < 1e-12
    rep = localization(q.psi_hat_perp_with_prime, time_centre=0.5)
    assert rep.norm2 == pytest.approx(1.0, abs=1e-6)
    assert np.isfinite(q.psi_hat_perp_prime(0.0))


def test_psi_perp_prime_symmetry(family):
    # psi-hat = e^{-iw/2} g(w) with g real and even, so e^{iw/2} psi-hat' + (i/2) g is odd
    q = family[4]
    w = np.linspace(0.2, 20, 300)

    def odd_part(x):
        return np.exp(0.5j * x) * q.psi_hat_perp_prime(x) + 0.5j * np.exp(0.5j * x) * q.psi_hat_perp(x)

    assert np.max(np.abs(odd_part(w) + odd_part(-w))) < 1e-10


def test_family_converges_to_meyer(family):
    d2, d8 = diagnostics(family[2]), diagnostics(family[8])
    for key in ("mask_error", "big_phi_error", "big_phi_prime_norm", "phi_perp_error"):
        assert d8[key] < d2[key]
    A = 4 * np.exp(2 * family[2].meyer.omega0)
    w = np.linspace(-A, A, 8001)
    far = [np.max(np.abs(family[l].phi_hat(w) - family[l].meyer.phi_hat(w))) for l in (2, 8)]
    assert far[1] < far[0]


def test_phi_prime_fd_example(family):
    q = family[3]
    assert q.phi_hat_prime(1.3) == pytest.approx(central_diff(q.phi_hat, 1.3), rel=1e-6)


def test_off_grid_phi_matches_grid_path(family):
    q = family[4]
    w = -np.pi + 2 * np.pi * np.arange(1024) / 1024
    fast = q.big_phi(w)
    slow = np.array([q.big_phi(x) for x in w[::97]])
    assert np.allclose(fast[::97], slow, atol=1e-14, rtol=0)


def test_synthesize_meyer(meyer):
    t, f = synthesize(meyer.phi_hat)
    dt = t[1] - t[0]
    assert abs(f[t == 0][0].imag) < 1e-15
    assert np.sum(np.abs(f) ** 2) * dt == pytest.approx(1.0, abs=1e-6)


def test_synthesize_box_gives_sinc():
    N, W = 2**18, 64 * np.pi

    def box(w):
        # endpoint value 1/2 makes the trapezoid rule second order across the jumps
        return np.where(np.isclose(np.abs(w), np.pi), 0.5, np.where(np.abs(w) < np.pi, 1.0, 0.0))

    t, f = synthesize(box, omega_max=W, samples=N)
    sel = np.abs(t) <= 16
    assert np.max(np.abs(f[sel] - np.sinc(t[sel]))) < 1e-6


def test_synthesize_rejects_slow_decay():
    with pytest.raises(DomainError):
        synthesize(lambda w: 1 / (1 + w**2))
    with pytest.raises(ValueError):
        synthesize(lambda w: np.exp(-(w**2)), samples=1000)
