"""Quasispline masks, scaling and wavelet transforms for one smoothness level l.

The non-orthogonal mask is

    m_l(w) = cos(w/2)^{2l} u_l(w) / u_l(0),

where u_l is a linear summation polynomial of the divided Meyer mask. Its
infinite product gives phi_l; dividing by the square root of the periodised
energy Phi_l orthogonalises it.
"""
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ._util import as_points, reduce_angle
from .errors import ConstructionError, DomainError
from .meyer import MeyerSystem
from .trigpoly import (
    VALLEE_POUSSIN,
    SummationMethod,
    TrigPolynomial,
    apply_summation,
    cosine_coeffs,
    divided_meyer_mask,
    divided_meyer_mask_prime,
    sine_coeffs,
    sup_distance,
)

log = logging.getLogger(__name__)

# degree cap for double-precision log-space division by cos^{2l}
L_CAP_DOUBLE = 24


@dataclass(frozen=True)
class Truncation:
    """Truncation controls for the infinite product, the periodisation and quadratures."""

    delta_tail: float = 1e-6  # last product factor taken at |w| 2^-J <= delta_tail
    depth_min: int = 24
    phi_tail: float = 1e-12  # tail bound of the periodisation sum
    shifts_min: int = 8
    shifts_max: int = 2048
    far_tol: float = 1e-10  # envelope level defining the far-field cutoff
    synth_omega: float = 64 * np.pi
    synth_samples: int = 2**16


@dataclass(frozen=True, eq=False)
class QuasisplineSystem:
    meyer: MeyerSystem
    l: int
    n: int
    method: SummationMethod
    u: TrigPolynomial  # u_{n}(m^M_l)
    u1: TrigPolynomial  # u_{n}((m^M_l)')
    u0: float
    truncation: Truncation = field(default_factory=Truncation)
    coeff_grid: int = 0
    _cache: dict = field(default_factory=dict, repr=False)

    # -- diagnostics used to size truncations --------------------------------

    @cached_property
    def _alpha_and_norm(self):
        grid = max(2**13, 4 * self.n)
        return sup_distance(self.u, lambda w: divided_meyer_mask(self.meyer, self.l, w), grid)

    @property
    def alpha(self):
        return self._alpha_and_norm[0]

    @property
    def epsilon(self):
        alpha, norm = self._alpha_and_norm
        return alpha / norm

    @property
    def u_at_pi(self):
        return float(self.u(np.pi))

    def envelope_exponent(self, c=None):
        """Far-field decay exponent -l + 2 log2((1 + eps)/c) of |phi_l|."""
        c = min(1.0, abs(self.u0)) if c is None else c
        return -self.l + 2 * math.log2((1 + self.epsilon) / c)

    def majorant(self, omega, c=None):
        """Upper bound (4 e^{2 w0} / w^2)^l |w|^{2 log2((1+eps)/c)} for |w| >= 1.

        It is the product of the sinc factor (2/|w|)^{2l} with the growth bound of
        the normalised summation product, and is dominated by |w|^{-l+...} past
        4 e^{2 w0}.
        """
        c = min(1.0, abs(self.u0)) if c is None else c
        q = 2 * math.log2((1 + self.epsilon) / c)
        a = np.abs(np.asarray(omega, dtype=float))
        A = 4 * math.exp(2 * self.meyer.omega0)
        return np.exp(self.l * (math.log(A) - 2 * np.log(a)) + q * np.log(a))

    @cached_property
    def far_field_start(self):
        return 4 * math.exp(2 * self.meyer.omega0)

    @cached_property
    def shifts(self):
        """Half-width K of the periodisation sum, from the far-field majorant."""
        t = self.truncation
        c = min(1.0, abs(self.u0))
        q = 2 * math.log2((1 + self.epsilon) / c)
        p = -4 * self.l + 2 * q  # exponent of the squared majorant
        logA2l = 2 * self.l * math.log(4 * math.exp(2 * self.meyer.omega0))
        K = max(t.shifts_min, math.ceil((self.far_field_start / np.pi + 1) / 2))
        if p >= -1:
            log.warning("l=%d: periodisation majorant not summable; using K=%d", self.l, t.shifts_max)
            return t.shifts_max

        def log_tail(K):
            x = (2 * K - 1) * np.pi
            return math.log(2) + logA2l + (p + 1) * math.log(x) - math.log(2 * np.pi * (-p - 1))

        target = math.log(t.phi_tail)
        while log_tail(K) > target and K < t.shifts_max:
            K += 1
        if log_tail(K) > target:
            log.warning("l=%d: periodisation tail bound %.2e exceeds target", self.l, math.exp(log_tail(K)))
        return K

    def depth(self, omega_max):
        t = self.truncation
        if omega_max <= t.delta_tail:
            return t.depth_min
        return max(t.depth_min, math.ceil(math.log2(omega_max / t.delta_tail)))

    # -- mask ------------------------------------------------------------------

    def _mask_pair(self, w):
        c = 0.5 * (1 + np.cos(w))
        u = self.u._evaluator(reduce_angle(w))
        du = self.u._evaluator(reduce_angle(w), deriv=1)
        cl = c**self.l
        cl1 = c ** (self.l - 1)
        m = cl * u / self.u0
        dm = (-0.5 * self.l * cl1 * np.sin(w) * u + cl * du) / self.u0
        return m, dm

    def mask(self, omega):
        arr, scalar = as_points(omega)
        m = self._mask_pair(np.atleast_1d(arr))[0]
        return m[0].item() if scalar else m.reshape(arr.shape)

    def mask_prime(self, omega):
        arr, scalar = as_points(omega)
        dm = self._mask_pair(np.atleast_1d(arr))[1]
        return dm[0].item() if scalar else dm.reshape(arr.shape)

    # -- infinite product ------------------------------------------------------

    def _phi_pair(self, w):
        """Truncated product and its derivative series (product rule, level by level)."""
        J = self.depth(float(np.max(np.abs(w))) if w.size else 0.0)
        P = np.ones_like(w)
        D = np.zeros_like(w)
        scale = 1.0
        for _ in range(J):
            scale *= 0.5
            m, dm = self._mask_pair(w * scale)
            D = D * m + P * (scale * dm)
            P = P * m
        return P, D

    # -- orthogonalising factor --------------------------------------------------

    def _grid_period(self, w):
        """Detect a uniform grid commensurate with 2*pi; return its points per period or None."""
        if w.size < 256:
            return None
        step = abs(w[1] - w[0])
        if step == 0:
            return None
        M = int(round(2 * np.pi / step))
        if M < 8 or M > 2**16 or abs(M * step - 2 * np.pi) > 1e-9 * M:
            return None
        k = w * (M / (2 * np.pi))
        if np.max(np.abs(k - np.rint(k))) > 1e-6 or w.size < M // 4:
            return None
        return M

    def _big_phi_table(self, M):
        key = ("Phi", M)
        if key not in self._cache:
            K = self.shifts
            base = 2 * np.pi * np.arange(M) / M
            pts = (base[None, :] + 2 * np.pi * np.arange(-K, K + 1)[:, None]).ravel()
            p, dp = self._phi_pair(pts)
            p = p.reshape(2 * K + 1, M)
            dp = dp.reshape(2 * K + 1, M)
            self._cache[key] = ((p * p).sum(axis=0), (2 * p * dp).sum(axis=0))
        return self._cache[key]

    def _big_phi_pair(self, w):
        M = self._grid_period(w)
        if M is not None:
            Phi, dPhi = self._big_phi_table(M)
            idx = np.rint(w * (M / (2 * np.pi))).astype(np.int64) % M
            Phi, dPhi = Phi[idx], dPhi[idx]
        else:
            K = self.shifts
            r = reduce_angle(w)
            pts = (r[None, :] + 2 * np.pi * np.arange(-K, K + 1)[:, None]).ravel()
            p, dp = self._phi_pair(pts)
            p = p.reshape(2 * K + 1, -1)
            dp = dp.reshape(2 * K + 1, -1)
            Phi, dPhi = (p * p).sum(axis=0), (2 * p * dp).sum(axis=0)
        if np.any(Phi <= 0):
            raise ConstructionError(f"orthogonalising factor is not positive for l={self.l}, n={self.n}")
        return Phi, dPhi

    # -- orthogonal objects ------------------------------------------------------

    def _phi_perp_pair(self, w):
        p, dp = self._phi_pair(w)
        Phi, dPhi = self._big_phi_pair(w)
        root = np.sqrt(Phi)
        return p / root, dp / root - 0.5 * p * dPhi / (Phi * root)

    def _ortho_mask_pair(self, w):
        m, dm = self._mask_pair(w)
        Phi, dPhi = self._big_phi_pair(w)
        Phi2, dPhi2 = self._big_phi_pair(2 * w)
        r = np.sqrt(Phi / Phi2)
        dr = r * (0.5 * dPhi / Phi - dPhi2 / Phi2)
        return m * r, dm * r + m * dr

    def _psi_perp_pair(self, w):
        half = 0.5 * w
        mo, dmo = self._ortho_mask_pair(half + np.pi)
        po, dpo = self._phi_perp_pair(half)
        phase = np.exp(-0.5j * w)
        val = phase * mo * po
        der = phase * (-0.5j * mo * po + 0.5 * dmo * po + 0.5 * mo * dpo)
        return val, der

    # -- public evaluators -------------------------------------------------------

    def _public(self, pair, omega, which):
        arr, scalar = as_points(omega)
        out = pair(np.atleast_1d(arr).ravel())[which]
        return out[0].item() if scalar else out.reshape(arr.shape)

    def phi_hat(self, omega):
        return self._public(self._phi_pair, omega, 0)

    def phi_hat_prime(self, omega):
        return self._public(self._phi_pair, omega, 1)

    def big_phi(self, omega):
        return self._public(self._big_phi_pair, omega, 0)

    def big_phi_prime(self, omega):
        return self._public(self._big_phi_pair, omega, 1)

    def ortho_mask(self, omega):
        return self._public(self._ortho_mask_pair, omega, 0)

    def ortho_mask_prime(self, omega):
        return self._public(self._ortho_mask_pair, omega, 1)

    def phi_hat_perp(self, omega):
        return self._public(self._phi_perp_pair, omega, 0)

    def phi_hat_perp_prime(self, omega):
        return self._public(self._phi_perp_pair, omega, 1)

    def psi_hat_perp(self, omega):
        return self._public(self._psi_perp_pair, omega, 0)

    def psi_hat_perp_prime(self, omega):
        return self._public(self._psi_perp_pair, omega, 1)

    def phi_hat_perp_with_prime(self, omega):
        arr, _ = as_points(omega)
        return self._phi_perp_pair(np.atleast_1d(arr))

    def psi_hat_perp_with_prime(self, omega):
        arr, _ = as_points(omega)
        return self._psi_perp_pair(np.atleast_1d(arr))

    def phi_hat_with_prime(self, omega):
        arr, _ = as_points(omega)
        return self._phi_pair(np.atleast_1d(arr))


def build(
    meyer: MeyerSystem,
    l: int,
    n: int,
    method: SummationMethod = VALLEE_POUSSIN,
    truncation: Truncation | None = None,
    grid: int | None = None,
) -> QuasisplineSystem:
    """Summation polynomial of the divided Meyer mask and the derived quasispline system."""
    if l < 1:
        raise ValueError("smoothness parameter l must be >= 1")
    if not method.admissible(n):
        raise ValueError(f"n={n} is not admissible for summation method {method.name!r}")
    grid = max(4 * n, 2**12) if grid is None else grid
    coeffs = cosine_coeffs(lambda w: divided_meyer_mask(meyer, l, w), n, grid)
    dcoeffs = sine_coeffs(lambda w: divided_meyer_mask_prime(meyer, l, w), n, grid)
    u = apply_summation(method, coeffs, n)
    u1 = apply_summation(method, dcoeffs, n)
    u0 = float(u(0.0))
    if abs(u0) < 1e-6:
        raise ConstructionError(f"u_l(0) = {u0:.3e} is too close to zero to normalise (l={l}, n={n})")
    upi = float(u(np.pi))
    if abs(upi) <= 1e-12:
        raise ConstructionError(
            f"condition con3 fails: summation polynomial vanishes at pi (value {upi:.3e}, l={l}, n={n})"
        )
    return QuasisplineSystem(
        meyer=meyer,
        l=l,
        n=n,
        method=method,
        u=u,
        u1=u1,
        u0=u0,
        truncation=truncation or Truncation(),
        coeff_grid=grid,
    )


# -- time-domain synthesis -----------------------------------------------------


def synthesize(fhat, omega_max=64 * np.pi, samples=2**16, far_tol=1e-6):
    """Inverse Fourier transform (1/2pi) int_{-W}^{W} fhat(w) e^{itw} dw on a uniform grid.

    ``fhat`` is an evaluator or an array of ``samples`` values at
    w_i = -W + i dw. Returns ``(t, f)`` with t spaced pi/W over one alias period.
    """
    if samples < 2 or samples & (samples - 1):
        raise ValueError("samples must be a power of two")
    dw = 2 * omega_max / samples
    omega = -omega_max + dw * np.arange(samples)
    F = np.asarray(fhat(omega) if callable(fhat) else fhat)
    if F.shape != (samples,):
        raise ValueError("sample array does not match the frequency grid")
    peak = np.max(np.abs(F))
    edge = max(abs(F[0]), abs(F[-1]))
    if peak == 0 or edge > far_tol * peak:
        raise DomainError(
            f"transform has not decayed at |w| = {omega_max:.4g} (edge/peak = {edge / max(peak, 1e-300):.2e}); "
            "raise the cutoff"
        )
    m = np.arange(samples)
    sign = np.where(m % 2, -1.0, 1.0)
    f = (dw / (2 * np.pi)) * samples * sign * np.fft.ifft(F)
    f = np.fft.fftshift(f)
    t = (np.arange(samples) - samples // 2) * (np.pi / omega_max)
    return t, f


def diagnostics(q: QuasisplineSystem, grid: int = 4096) -> dict:
    """Sup-norm distances of the family member to the Meyer system on a uniform grid of [-pi, pi)."""
    w = -np.pi + 2 * np.pi * np.arange(grid) / grid
    big, dbig = q._big_phi_pair(w)
    energy = np.abs(q.phi_hat_perp(w)) ** 2
    for k in range(1, q.shifts + 1):
        energy += np.abs(q.phi_hat_perp(w + 2 * np.pi * k)) ** 2 + np.abs(q.phi_hat_perp(w - 2 * np.pi * k)) ** 2
    return {
        "mask_error": float(np.max(np.abs(q.mask(w) - q.meyer.mask(w)))),
        "big_phi_error": float(np.max(np.abs(big - 1))),
        "big_phi_prime_norm": float(np.max(np.abs(dbig))),
        "phi_perp_error": float(np.max(np.abs(q.phi_hat_perp(w) - q.meyer.phi_hat(w)))),
        "partition_error": float(np.max(np.abs(energy - 1))),
    }
