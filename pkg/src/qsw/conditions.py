"""Sufficient conditions on the summation polynomials and the n(l) selection policy.

alpha(l) = ||u_n(m^M_l) - m^M_l||_C,  gamma(l) = ||u_n((m^M_l)') - (m^M_l)'||_C,
and the polynomial must not vanish at pi.
"""
import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np

from .errors import GridError, PolicyError
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

CSV_COLUMNS = ("l", "n", "alpha", "gamma", "u0", "upi", "mu", "epsilon")
MEASURE_GRID = 2**13
CON3_TOL = 1e-12


def _measure_grid(n, grid):
    grid = max(MEASURE_GRID, 4 * n) if grid is None else grid
    if grid < 4 * n:
        raise GridError(f"measurement grid {grid} aliases degree {n}; need at least {4 * n}")
    return grid


@lru_cache(maxsize=64)
def summation_polynomials(sys: MeyerSystem, l: int, n: int, method: SummationMethod = VALLEE_POUSSIN):
    """(u_n(m^M_l), u_n((m^M_l)')) with the default coefficient grid."""
    grid = max(4 * n, 2**12)
    coeffs = cosine_coeffs(lambda w: divided_meyer_mask(sys, l, w), n, grid)
    dcoeffs = sine_coeffs(lambda w: divided_meyer_mask_prime(sys, l, w), n, grid)
    return apply_summation(method, coeffs, n), apply_summation(method, dcoeffs, n)


def measure_alpha(sys, l, n, method=VALLEE_POUSSIN, grid=None):
    grid = _measure_grid(n, grid)
    u, _ = summation_polynomials(sys, l, n, method)
    return sup_distance(u, lambda w: divided_meyer_mask(sys, l, w), grid)[0]


def measure_gamma(sys, l, n, method=VALLEE_POUSSIN, grid=None):
    grid = _measure_grid(n, grid)
    _, u1 = summation_polynomials(sys, l, n, method)
    return sup_distance(u1, lambda w: divided_meyer_mask_prime(sys, l, w), grid)[0]


def divided_mask_norm(sys, l, n=0, grid=None):
    grid = max(MEASURE_GRID, 4 * n) if grid is None else grid
    w = -np.pi + 2 * np.pi * np.arange(grid) / grid
    return float(np.max(np.abs(divided_meyer_mask(sys, l, w))))


def check_con3(u: TrigPolynomial, tol=CON3_TOL):
    """(passed, u(pi)); passes iff |u(pi)| > tol."""
    value = float(u(np.pi))
    return abs(value) > tol, value


@dataclass
class ConditionReport:
    l: int
    n: int
    alpha: float
    gamma: float
    u_at_0: float
    u_at_pi: float
    mu: float
    epsilon: float
    c_running: float = float("nan")
    con3: bool = True
    divided_norm: float = float("nan")

    def row(self):
        return {
            "l": self.l,
            "n": self.n,
            "alpha": self.alpha,
            "gamma": self.gamma,
            "u0": self.u_at_0,
            "upi": self.u_at_pi,
            "mu": self.mu,
            "epsilon": self.epsilon,
        }


def measure(sys, l, n, method=VALLEE_POUSSIN, grid=None) -> ConditionReport:
    u, _ = summation_polynomials(sys, l, n, method)
    alpha = measure_alpha(sys, l, n, method, grid)
    gamma = measure_gamma(sys, l, n, method, grid)
    norm = divided_mask_norm(sys, l, n, grid)
    ok, upi = check_con3(u)
    u0 = float(u(0.0))
    return ConditionReport(
        l=l,
        n=n,
        alpha=alpha,
        gamma=gamma,
        u_at_0=u0,
        u_at_pi=upi,
        mu=l * alpha + gamma,
        epsilon=alpha / norm,
        c_running=abs(u0),
        con3=ok,
        divided_norm=norm,
    )


@dataclass(frozen=True)
class Budgets:
    """Desk-scale targets alpha(l) <= alpha / l^2 and gamma(l) <= gamma / l^2.

    Both shrink with l so that l*alpha and gamma actually decrease along the family.
    An infinite budget disables that test.
    """

    alpha: float = 0.1
    gamma: float = 2.5

    def __post_init__(self):
        if not (self.alpha > 0 and self.gamma > 0):
            raise ValueError("budgets must be positive")

    def alpha_target(self, l):
        return self.alpha / l**2

    def gamma_target(self, l):
        return self.gamma / l**2


def select_n(sys, l, method=VALLEE_POUSSIN, budgets=Budgets(), n_min=8, n_max=2**14):
    """Smallest n in the doubling sweep n_min, 2 n_min, ..., n_max meeting the budgets and con3."""
    best = None
    n = n_min
    while n <= n_max:
        if method.admissible(n):
            u, _ = summation_polynomials(sys, l, n, method)
            ok, _ = check_con3(u)
            if ok:
                a_ok = math.isinf(budgets.alpha) or measure_alpha(sys, l, n, method) <= budgets.alpha_target(l)
                g_ok = math.isinf(budgets.gamma) or measure_gamma(sys, l, n, method) <= budgets.gamma_target(l)
                if a_ok and g_ok:
                    return n
            best = n
        n *= 2
    report = measure(sys, l, best, method) if best else None
    raise PolicyError(
        f"no n <= {n_max} meets the budgets for l={l}"
        + (f" (best: n={report.n}, alpha={report.alpha:.3e}, gamma={report.gamma:.3e})" if report else ""),
        best=report,
    )


@dataclass
class Ledger:
    """Parameter summary over a run of consecutive l."""

    c: float
    omega0: float
    C0: float
    rows: list = field(default_factory=list)

    def by_l(self, l):
        for r in self.rows:
            if r["l"] == l:
                return r
        raise KeyError(l)


def theorem_constant(omega0):
    """C0 = 32 pi^2 e^{2 w0} / 27."""
    return 32 * np.pi**2 * math.exp(2 * omega0) / 27


def ledger(reports, omega0=np.pi / 3) -> Ledger:
    if not reports:
        raise ValueError("ledger needs at least one condition report")
    reports = sorted(reports, key=lambda r: r.l)
    c = min(abs(r.u_at_0) for r in reports)
    C0 = theorem_constant(omega0)
    base = 4 * math.exp(2 * omega0)
    rows = []
    running = math.inf
    for r in reports:
        running = min(running, abs(r.u_at_0))
        r.c_running = running
        q = 2 * math.log2((1 + r.epsilon) / c)
        mu = r.l * r.alpha + r.gamma
        rows.append(
            {
                "l": r.l,
                "n": r.n,
                "mu": mu,
                "epsilon": r.epsilon,
                "envelope_exponent": -r.l + q,
                "holder_lower": 2 * r.l - 1 + math.log2(c / (1 + r.epsilon)),
                "holder_upper": 2 * r.l,
                "rate_freq_scaling": max(mu, base ** (-2 * r.l + 2 * q)),
                "rate_time_scaling": max(mu, r.l * C0 ** (-r.l + q)),
                "rate_freq_wavelet": max(mu, r.l * C0 ** (-r.l + q)),
                "rate_time_wavelet": max(mu, base ** (-r.l + q)),
            }
        )
    return Ledger(c=c, omega0=omega0, C0=C0, rows=rows)


def report_dict(report: ConditionReport):
    return asdict(report)
