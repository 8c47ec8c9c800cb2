import numpy as np
import pytest
from scipy.integrate import quad

from qsw.meyer import DEFAULT_THETA, MeyerSystem, ThetaProfile, theta_eval, validate_theta


def reference_phi_hat(w, w0=np.pi / 3):
    """Three-branch definition written out independently, with the quintic profile."""
    a = abs(w)
    if a <= 2 * w0:
        return 1.0
    if a > 2 * np.pi - 2 * w0:
        return 0.0
    x = np.pi / (3 * (np.pi - 2 * w0)) * (a - np.pi) * 3 / np.pi
    s = (15 * x - 10 * x**3 + 3 * x**5) / 8
    return np.cos(np.pi / 4 + np.pi / 4 * s)


def test_theta_values():
    assert theta_eval(DEFAULT_THETA, 0.0) == 0.0
    assert theta_eval(DEFAULT_THETA, np.pi / 2) == pytest.approx(np.pi / 4)
    assert theta_eval(DEFAULT_THETA, -np.pi / 2) == pytest.approx(-np.pi / 4)
    w = np.linspace(-2, 2, 101)
    assert np.allclose(DEFAULT_THETA(-w), -DEFAULT_THETA(w))


def test_theta_validation():
    assert validate_theta(DEFAULT_THETA).passed
    linear = validate_theta(ThetaProfile((0.0, 1.0)))
    assert not linear.passed and "C1" in linear.failures()
    wiggle = validate_theta(ThetaProfile((0.0, -1.0, 0.0, 1.0)))
    assert "monotone" in wiggle.failures()


@pytest.mark.parametrize("w", [0.0, 0.5, 2.2, 2.6, np.pi, 3.5, 4.1, 4.3, -2.9, 7.0])
def test_phi_hat_matches_reference(meyer, w):
    assert meyer.phi_hat(w) == pytest.approx(reference_phi_hat(w), abs=1e-15)


def test_phi_hat_examples(meyer):
    assert meyer.phi_hat(0.0) == 1.0
    assert meyer.phi_hat(2 * np.pi - 2 * meyer.omega0) == pytest.approx(0.0, abs=1e-15)
    assert meyer.phi_hat(np.pi) == pytest.approx(np.sqrt(2) / 2)
    assert meyer.omega1 == pytest.approx(2 * np.pi / 3)


def test_mask_examples(meyer):
    assert meyer.mask(0.0) == 1.0
    assert meyer.mask(np.pi) == 0.0
    assert meyer.mask(0.7) ** 2 + meyer.mask(0.7 + np.pi) ** 2 == pytest.approx(1.0, abs=1e-14)
    assert meyer.mask_prime(0.0) == 0.0
    assert meyer.mask_prime(np.pi - 0.01) == 0.0
    h = 1e-6
    fd = (meyer.mask(0.55 * np.pi + h) - meyer.mask(0.55 * np.pi - h)) / (2 * h)
    assert meyer.mask_prime(0.55 * np.pi) == pytest.approx(fd, abs=1e-8)


def test_mask_prime_fd_away_from_joints(meyer):
    w = np.linspace(-np.pi, np.pi, 3001)
    joints = np.array([meyer.omega0, meyer.omega1, np.pi])
    far = np.min(np.abs(np.abs(w)[:, None] - joints[None, :]), axis=1) >= 1e-3
    h = 1e-5
    fd = (meyer.mask(w + h) - meyer.mask(w - h)) / (2 * h)
    assert np.max(np.abs(meyer.mask_prime(w) - fd)[far]) < 1e-7


def test_psi_hat(meyer):
    assert meyer.psi_hat(0.0) == 0
    assert abs(meyer.psi_hat(3 * np.pi)) == 0
    w = np.linspace(-12, 12, 1001)
    direct = np.exp(-0.5j * w) * meyer.mask(w / 2 + np.pi) * meyer.phi_hat(w / 2)
    assert np.max(np.abs(meyer.psi_hat(w) - direct)) <= 1e-15
    assert np.allclose(np.abs(meyer.psi_hat(w)), np.abs(meyer.psi_hat(-w)))
    energy = quad(lambda x: abs(meyer.psi_hat(x)) ** 2, 0, 6 * np.pi, points=[2 * np.pi / 3, 4 * np.pi / 3, 8 * np.pi / 3], limit=200)[0]
    assert 2 * energy / (2 * np.pi) == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("w0", [np.pi / 3, 0.4 * np.pi, 0.45 * np.pi, np.pi / 2.2])
def test_residuals(w0):
    m = MeyerSystem(w0)
    assert m.qmf_residual(4096) < 1e-10
    assert m.partition_residual(4096) < 1e-10


def test_support(meyer):
    w = np.linspace(-10, 10, 4001)
    outside = np.abs(w) > 2 * np.pi - 2 * meyer.omega0
    assert np.all(meyer.phi_hat(w)[outside] == 0)
    assert np.all(meyer.phi_hat(w)[np.abs(w) <= 2 * meyer.omega0] == 1)


@pytest.mark.parametrize("bad", [0.9, np.pi / 2, 2.0])
def test_omega0_validation(bad):
    with pytest.raises(ValueError):
        MeyerSystem(bad)


def test_non_finite_input(meyer):
    with pytest.raises(ValueError):
        meyer.phi_hat(np.nan)
