"""Trigonometric polynomials, Fourier coefficient extraction and linear summation methods.

A polynomial is stored as cosine coefficients ``a[0..n]`` and sine coefficients
``b[0..n]`` (``b[0]`` unused) and evaluates as

    a0/2 + sum_k (a_k cos k w + b_k sin k w).
"""
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np

from ._util import as_points, reduce_angle
from .errors import DomainError, GridError

# Taylor order of the shifted-FFT evaluator; with |k * shift| <= pi/8 the
# truncation error is below 1e-18 * sum|c_k|.
_TAYLOR_ORDER = 14
_OVERSAMPLE = 8


class _ShiftedFFTEvaluator:
    """Exact-to-rounding evaluation of sum_k c_k e^{ikw} at arbitrary points.

    Values of the polynomial and its Taylor derivatives are tabulated on a uniform
    grid of ``G >= 8(n+1)`` points with FFTs; an arbitrary point is reached from
    the nearest node by a Taylor series in the (small) offset.
    """

    def __init__(self, c):
        n = len(c) - 1
        G = 64
        while G < _OVERSAMPLE * (n + 1):
            G *= 2
        self.G = G
        self.h = np.pi / G
        k = np.arange(n + 1)
        kh = 1j * k * self.h
        P = _TAYLOR_ORDER + 2  # one extra derivative for u'
        tables = np.empty((P, G), dtype=complex)
        buf = np.zeros(G, dtype=complex)
        term = np.asarray(c, dtype=complex).copy()
        for p in range(P):
            buf[:] = 0
            np.add.at(buf, k % G, term)
            tables[p] = np.fft.ifft(buf) * G
            term = term * kh
        self.tables = tables

    def __call__(self, omega, deriv=0):
        scaled = omega * (self.G / (2 * np.pi))
        node = np.rint(scaled)
        s = scaled - node  # offset in units of 2*pi/G, |s| <= 1/2
        s = 2 * s  # offset in units of h = pi/G, |s| <= 1
        idx = node.astype(np.int64) % self.G
        acc = self.tables[_TAYLOR_ORDER + deriv][idx]
        for p in range(_TAYLOR_ORDER - 1, -1, -1):
            acc = self.tables[p + deriv][idx] + acc * (s / (p + 1))
        return acc.real / self.h**deriv


@dataclass(frozen=True, eq=False)
class TrigPolynomial:
    a: np.ndarray
    b: np.ndarray = field(default=None)

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.a, dtype=float)).copy()
        b = np.zeros_like(a) if self.b is None else np.atleast_1d(np.asarray(self.b, dtype=float)).copy()
        if len(b) < len(a):
            b = np.concatenate([b, np.zeros(len(a) - len(b))])
        elif len(a) < len(b):
            a = np.concatenate([a, np.zeros(len(b) - len(a))])
        b[0] = 0.0
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def degree(self):
        return len(self.a) - 1

    @property
    def is_even(self):
        return not np.any(self.b)

    @cached_property
    def _evaluator(self):
        c = self.a - 1j * self.b
        c[0] = self.a[0] / 2
        return _ShiftedFFTEvaluator(c)

    def __call__(self, omega):
        return evaluate(self, omega)

    def derivative(self):
        return derivative(self)

    def prime(self, omega):
        """Value of the derivative at ``omega`` without building a new polynomial."""
        arr, scalar = as_points(omega)
        out = self._evaluator(reduce_angle(arr), deriv=1)
        return out.item() if scalar else out

    def truncated(self, n):
        return TrigPolynomial(self.a[: n + 1], self.b[: n + 1])

    def __repr__(self):
        return f"TrigPolynomial(degree={self.degree}, even={self.is_even})"


def evaluate(p: TrigPolynomial, omega):
    """a0/2 + sum (a_k cos k w + b_k sin k w) at ``omega`` (scalar or array)."""
    arr, scalar = as_points(omega)
    out = p._evaluator(reduce_angle(arr))
    return out.item() if scalar else out


def derivative(p: TrigPolynomial) -> TrigPolynomial:
    k = np.arange(p.degree + 1)
    return TrigPolynomial(k * p.b, -k * p.a)


def fourier_coeffs(f: Callable, degree: int, grid: int | None = None) -> TrigPolynomial:
    """Coefficients a_k, b_k (k <= degree) of a 2*pi-periodic ``f`` by the uniform-grid rule."""
    if degree < 0:
        raise ValueError("degree must be non-negative")
    G = max(4 * degree, 2**12) if grid is None else int(grid)
    if G < 4 * degree:
        raise GridError(f"grid of {G} points aliases degree {degree}; need at least {4 * degree}")
    omega = 2 * np.pi * np.arange(G) / G
    samples = np.asarray(f(omega), dtype=float)
    if not np.all(np.isfinite(samples)):
        raise DomainError("non-finite function samples")
    F = np.fft.rfft(samples)
    if len(F) < degree + 1:
        F = np.concatenate([F, np.zeros(degree + 1 - len(F))])
    a = 2 * F[: degree + 1].real / G
    b = -2 * F[: degree + 1].imag / G
    return TrigPolynomial(a, b)


def cosine_coeffs(f: Callable, degree: int, grid: int | None = None) -> TrigPolynomial:
    """Cosine coefficients of an even periodic function; sine part is zero by symmetry."""
    p = fourier_coeffs(f, degree, grid)
    return TrigPolynomial(p.a)


def sine_coeffs(f: Callable, degree: int, grid: int | None = None) -> TrigPolynomial:
    """Sine coefficients of an odd periodic function."""
    p = fourier_coeffs(f, degree, grid)
    return TrigPolynomial(np.zeros_like(p.a), p.b)


# -- linear methods of summation ---------------------------------------------


@dataclass(frozen=True)
class SummationMethod:
    name: str
    weights: Callable[[int], np.ndarray]
    even_only: bool = False

    def admissible(self, n):
        return n >= 1 and not (self.even_only and n % 2)

    def __call__(self, p, n):
        return apply_summation(self, p, n)


def vp_weights(n: int) -> np.ndarray:
    """de la Vallee Poussin triangle row lambda_{n,k}, k = 1..n.

    Flat at 1 up to n/2, then linear down to 0 at k = n, so every polynomial of
    degree <= n/2 is reproduced exactly.
    """
    if n < 2 or n % 2:
        raise ValueError(f"de la Vallee Poussin degree must be even and >= 2, got {n}")
    k = np.arange(1, n + 1)
    half = n // 2
    return np.where(k <= half, 1.0, (n - k) / half)


def fejer_weights(n: int) -> np.ndarray:
    if n < 1:
        raise ValueError("n must be >= 1")
    return 1.0 - np.arange(1, n + 1) / (n + 1)


def partial_weights(n: int) -> np.ndarray:
    if n < 1:
        raise ValueError("n must be >= 1")
    return np.ones(n)


VALLEE_POUSSIN = SummationMethod("vp", vp_weights, even_only=True)
FEJER = SummationMethod("fejer", fejer_weights)
PARTIAL_SUMS = SummationMethod("partial", partial_weights)

METHODS = {m.name: m for m in (VALLEE_POUSSIN, FEJER, PARTIAL_SUMS)}


def get_method(name: str) -> SummationMethod:
    try:
        return METHODS[name]
    except KeyError:
        raise ValueError(f"unknown summation method {name!r}; choose from {sorted(METHODS)}") from None


def apply_summation(method: SummationMethod, coeffs: TrigPolynomial, n: int) -> TrigPolynomial:
    """u_n(f) = a0/2 + sum_{k<=n} lambda_{n,k} (a_k cos kw + b_k sin kw)."""
    if not method.admissible(n):
        raise ValueError(f"n={n} is not admissible for method {method.name!r}")
    if coeffs.degree < n:
        raise ValueError(f"coefficient stream has degree {coeffs.degree} < n={n}")
    lam = np.concatenate([[1.0], method.weights(n)])
    return TrigPolynomial(coeffs.a[: n + 1] * lam, coeffs.b[: n + 1] * lam)


# -- the divided Meyer mask ----------------------------------------------------


def divided_meyer_mask(sys, l: int, omega):
    """m^M(w) / cos(w/2)^{2l}, set to 0 wherever the Meyer mask vanishes."""
    if l < 1:
        raise ValueError("l must be >= 1")
    arr, scalar = as_points(omega)
    w = reduce_angle(np.atleast_1d(arr))
    m = sys.mask(w)
    out = np.zeros_like(w)
    nz = m > 0
    out[nz] = np.exp(np.log(m[nz]) - 2 * l * np.log(np.cos(w[nz] / 2)))
    return out[0].item() if scalar else out.reshape(arr.shape)


def divided_meyer_mask_prime(sys, l: int, omega):
    """Analytic derivative cos(w/2)^{-2l} ((m^M)' + l tan(w/2) m^M), zero off the support."""
    if l < 1:
        raise ValueError("l must be >= 1")
    arr, scalar = as_points(omega)
    w = reduce_angle(np.atleast_1d(arr))
    m = sys.mask(w)
    dm = sys.mask_prime(w)
    out = np.zeros_like(w)
    nz = (m > 0) | (dm != 0)
    half = w[nz] / 2
    scale = np.exp(-2 * l * np.log(np.cos(half)))
    out[nz] = scale * (dm[nz] + l * np.tan(half) * m[nz])
    return out[0].item() if scalar else out.reshape(arr.shape)


def sup_distance(p: TrigPolynomial, f: Callable, grid: int) -> tuple[float, float]:
    """Return (max |p - f|, max |f|) over ``grid`` uniform points of [-pi, pi)."""
    w = -np.pi + 2 * np.pi * np.arange(grid) / grid
    fw = f(w)
    return float(np.max(np.abs(p(w) - fw))), float(np.max(np.abs(fw)))
