"""The Meyer system: transition profile, scaling transform, mask and wavelet transform."""
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import Polynomial

from ._util import as_points, pointwise, reduce_angle

QUARTER_PI = np.pi / 4
THIRD_PI = np.pi / 3


@dataclass(frozen=True)
class ThetaProfile:
    """Odd transition theta(w) = (pi/4) s(3w/pi) on |w| <= pi/3, constant +-pi/4 outside.

    ``coeffs`` are the power-series coefficients of the core ``s`` on [-1, 1],
    lowest degree first.
    """

    coeffs: tuple = (0.0, 15 / 8, 0.0, -10 / 8, 0.0, 3 / 8)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))

    @property
    def core(self):
        return Polynomial(self.coeffs)

    def __call__(self, omega):
        return theta_eval(self, omega)

    def derivative(self, omega, order=1):
        """theta^(order)(w); zero outside [-pi/3, pi/3]."""
        arr, scalar = as_points(omega)
        x = 3 * arr / np.pi
        inside = np.abs(x) < 1
        d = self.core.deriv(order)
        out = np.where(inside, QUARTER_PI * (3 / np.pi) ** order * d(np.clip(x, -1, 1)), 0.0)
        return out.item() if scalar else out


def theta_eval(profile: ThetaProfile, omega):
    arr, scalar = as_points(omega)
    x = 3 * arr / np.pi
    out = np.where(np.abs(x) < 1, QUARTER_PI * profile.core(np.clip(x, -1, 1)), QUARTER_PI * np.sign(x))
    return out.item() if scalar else out


@dataclass
class ThetaValidation:
    checks: dict  # name -> (passed, residual)
    tolerance: float

    @property
    def passed(self):
        return all(ok for ok, _ in self.checks.values())

    def failures(self):
        return [name for name, (ok, _) in self.checks.items() if not ok]


def validate_theta(profile: ThetaProfile, tolerance=1e-10, grid=20001) -> ThetaValidation:
    """Oddness, monotonicity and C^2 matching of theta at +-pi/3."""
    checks = {}
    w = np.linspace(-np.pi, np.pi, grid)
    odd = float(np.max(np.abs(theta_eval(profile, w) + theta_eval(profile, -w))))
    checks["odd"] = (bool(odd <= tolerance), odd)

    x = np.linspace(-1, 1, grid)
    slope = profile.core.deriv()(x)
    mono = float(max(0.0, -slope.min()))
    checks["monotone"] = (bool(mono <= tolerance), mono)

    # one-sided limits of the core at x = +-1 against the constant extension
    for order in range(3):
        d = profile.core.deriv(order) if order else profile.core
        outside = 1.0 if order == 0 else 0.0
        scale = QUARTER_PI * (3 / np.pi) ** order
        res = scale * max(abs(d(1.0) - outside), abs(d(-1.0) - (-outside if order % 2 == 0 else outside)))
        checks[f"C{order}"] = (bool(res <= tolerance), float(res))
    return ThetaValidation(checks, tolerance)


DEFAULT_THETA = ThetaProfile()


@dataclass(frozen=True)
class MeyerSystem:
    omega0: float = THIRD_PI
    theta: ThetaProfile = field(default=DEFAULT_THETA)

    def __post_init__(self):
        w0 = float(self.omega0)
        if not (THIRD_PI - 1e-12 <= w0 < np.pi / 2):
            raise ValueError(f"omega0 must satisfy pi/3 <= omega0 < pi/2, got {w0}")
        object.__setattr__(self, "omega0", w0)

    @property
    def omega1(self):
        return np.pi - self.omega0

    @property
    def _kappa(self):
        return np.pi / (3 * (np.pi - 2 * self.omega0))

    @pointwise
    def phi_hat(self, omega):
        a = np.abs(omega)
        w0 = self.omega0
        out = np.zeros_like(a)
        out[a <= 2 * w0] = 1.0
        ramp = (a > 2 * w0) & (a <= 2 * np.pi - 2 * w0)
        out[ramp] = np.cos(QUARTER_PI + theta_eval(self.theta, self._kappa * (a[ramp] - np.pi)))
        return out

    @pointwise
    def phi_hat_prime(self, omega):
        a = np.abs(omega)
        w0 = self.omega0
        out = np.zeros_like(a)
        ramp = (a > 2 * w0) & (a < 2 * np.pi - 2 * w0)
        x = self._kappa * (a[ramp] - np.pi)
        out[ramp] = (
            -np.sin(QUARTER_PI + theta_eval(self.theta, x))
            * self.theta.derivative(x)
            * self._kappa
            * np.sign(omega[ramp])
        )
        return out

    @pointwise
    def mask(self, omega):
        return self.phi_hat(2 * reduce_angle(omega))

    @pointwise
    def mask_prime(self, omega):
        return 2 * self.phi_hat_prime(2 * reduce_angle(omega))

    @pointwise
    def psi_hat(self, omega):
        half = omega / 2
        return np.exp(-0.5j * omega) * self.mask(half + np.pi) * self.phi_hat(half)

    @pointwise
    def psi_hat_prime(self, omega):
        half = omega / 2
        m = self.mask(half + np.pi)
        dm = self.mask_prime(half + np.pi)
        p = self.phi_hat(half)
        dp = self.phi_hat_prime(half)
        return np.exp(-0.5j * omega) * (-0.5j * m * p + 0.5 * dm * p + 0.5 * m * dp)

    def qmf_residual(self, grid=4096):
        w = -np.pi + 2 * np.pi * np.arange(grid) / grid
        return float(np.max(np.abs(self.mask(w) ** 2 + self.mask(w + np.pi) ** 2 - 1)))

    def partition_residual(self, grid=4096, shifts=3):
        w = -np.pi + 2 * np.pi * np.arange(grid) / grid
        total = sum(self.phi_hat(w + 2 * np.pi * k) ** 2 for k in range(-shifts, shifts + 1))
        return float(np.max(np.abs(total - 1)))


meyer_phi_hat = MeyerSystem.phi_hat
meyer_mask = MeyerSystem.mask
meyer_mask_prime = MeyerSystem.mask_prime
meyer_psi_hat = MeyerSystem.psi_hat
