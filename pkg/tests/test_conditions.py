import math

import numpy as np
import pytest

from qsw import conditions as C
from qsw.errors import GridError, PolicyError
from qsw.trigpoly import PARTIAL_SUMS, TrigPolynomial


class PolynomialMaskSystem:
    """Mask cos(w/2)^{2l} p(w) with p a low-degree positive cosine polynomial: the divided
    mask is p itself, so the summation reproduces it."""

    def __init__(self, l):
        self.l = l

    def _p(self, w):
        return (1.5 + np.cos(w)) / 2.5

    def mask(self, w):
        return np.cos(w / 2) ** (2 * self.l) * self._p(w)

    def mask_prime(self, w):
        c = np.cos(w / 2)
        return -self.l * c ** (2 * self.l - 1) * np.sin(w / 2) * self._p(w) - c ** (2 * self.l) * np.sin(w) / 2.5


def test_reproduction_gives_zero_errors():
    sys = PolynomialMaskSystem(2)
    assert C.measure_alpha(sys, 2, 16) < 1e-12
    assert C.measure_gamma(sys, 2, 16) < 1e-10


def test_alpha_decreases_with_n(meyer):
    a = [C.measure_alpha(meyer, 2, n) for n in (16, 32, 64)]
    g = [C.measure_gamma(meyer, 2, n) for n in (16, 32, 64)]
    assert a[0] > a[1] > a[2]
    assert g[0] > g[1] > g[2]


def test_grid_checks(meyer):
    with pytest.raises(GridError):
        C.measure_alpha(meyer, 2, 4096, grid=8192)


def test_grid_stability(meyer):
    for l, n in ((2, 64), (5, 512)):
        a1, a2 = C.measure_alpha(meyer, l, n), C.measure_alpha(meyer, l, n, grid=2**14)
        g1, g2 = C.measure_gamma(meyer, l, n), C.measure_gamma(meyer, l, n, grid=2**14)
        assert abs(a1 - a2) < 0.01 * a2 and abs(g1 - g2) < 0.01 * g2


def test_con3(meyer):
    u, _ = C.summation_polynomials(meyer, 2, 32)
    ok, value = C.check_con3(u)
    assert ok and value == pytest.approx(-4.750904789574406e-04, rel=1e-6)
    ok, value = C.check_con3(TrigPolynomial(np.array([2.0, 1.0]), np.zeros(2)))
    assert not ok and abs(value) < 1e-15
    u, _ = C.summation_polynomials(meyer, 2, 32, PARTIAL_SUMS)
    ok, value = C.check_con3(u)
    assert ok == (abs(value) > 1e-12)


def test_select_n(meyer, policy_n):
    assert policy_n[1] <= 64
    ns = [policy_n[l] for l in range(1, 9)]
    assert ns == sorted(ns)
    assert ns == [16, 32, 128, 256, 512, 2048, 4096, 8192]
    vacuous = C.Budgets(math.inf, math.inf)
    assert all(C.select_n(meyer, l, budgets=vacuous) == 8 for l in range(1, 9))
    with pytest.raises(PolicyError) as info:
        C.select_n(meyer, 8, n_max=64)
    assert info.value.best is not None and info.value.best.n == 64
    with pytest.raises(ValueError):
        C.Budgets(0.0, 1.0)


def test_measure_invariants(reports):
    for r in reports:
        assert r.alpha >= 0 and r.gamma >= 0
        assert r.mu == r.l * r.alpha + r.gamma
        assert r.epsilon == pytest.approx(r.alpha / r.divided_norm)
        assert r.con3
        assert list(r.row()) == list(C.CSV_COLUMNS)


def test_ledger(reports, family_ledger):
    assert family_ledger.c == min(abs(r.u_at_0) for r in reports)
    assert family_ledger.c >= 0.5
    assert family_ledger.C0 == pytest.approx(32 * np.pi**2 * np.exp(2 * np.pi / 3) / 27)
    assert family_ledger.C0 == pytest.approx(94.98832, rel=1e-6)
    row = family_ledger.by_l(3)
    r3 = reports[2]
    assert row["mu"] == 3 * r3.alpha + r3.gamma
    assert row["envelope_exponent"] == pytest.approx(-3 + 2 * math.log2((1 + r3.epsilon) / family_ledger.c))
    with pytest.raises(ValueError):
        C.ledger([])


def test_ledger_single_report():
    r = C.ConditionReport(l=2, n=32, alpha=0.01, gamma=0.1, u_at_0=1.0, u_at_pi=0.1, mu=0.12, epsilon=0.004)
    led = C.ledger([r])
    assert led.c == 1.0 and led.rows[0]["epsilon"] == 0.004
