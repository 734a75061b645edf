"""Contour machinery of the finite temperature code.

The strongest check replaces the thermal auxiliary function by the one of
finite Matsubara data, for which omega is known exactly: the contour
formulas must then reproduce omega_md.  The data below have one Bethe root
(1/5) inside the ellipse and every other zero of 1 + afrak, as well as
every zero of a and d, well outside of it.
"""

from fractions import Fraction

import mpmath
import pytest
from flint import acb, acb_mat, arb

from xxxfermion import thermal as th
from xxxfermion.matsubara import MatsubaraData
from xxxfermion.numerics import DEQuadrature, Precision
from xxxfermion.omega import omega_md

ORACLE_MD = "3 1 | 134 -9 5 | -1 -2 9 | 1/5"


@pytest.fixture(scope="module")
def setup():
    return th.ContourSetup.build(1, Fraction(2, 5), DEQuadrature(Fraction(1, 16), 120),
                                 DEQuadrature(Fraction(1, 16), 140), digits=30, order=4)


def test_contour_omega_reproduces_matsubara_omega(setup):
    md = MatsubaraData.from_text(ORACLE_MD)
    ap, am = th.afrak_from_md(setup, md)
    with th._prec(30):
        mu = th._measures_from_afrak(setup, ap, am)
        wl = th.to_lambda_coefficients(th.omega_from_measure(setup, mu))
        W = omega_md(md, 4)
        for a in range(4):
            for b in range(4):
                exact = arb(str(W[a][b].numerator)) / W[a][b].denominator
                assert abs(wl[a][b] - exact).mid() < 1e-9 * max(1, abs(float(W[a][b])))


def test_parity_of_omega_1(setup):
    with th._prec(30):
        assert th.parity_sentinel(setup) < arb(10) ** -25


def test_omega_1_real_and_symmetric(setup):
    with th._prec(30):
        w = th.to_lambda_coefficients(setup.omega1)
        for a in range(setup.order):
            for b in range(setup.order):
                assert abs(w[a][b].imag).mid() < arb(10) ** -25
                assert abs(w[a][b] - w[b][a]).mid() < arb(10) ** -25


def test_half_line_rule():
    u, w = th.half_line_rule(Fraction(1, 16), 30)
    with th._prec(30):
        total = sum((wk * (-arb.pi() * uk).exp() for uk, wk in zip(u, w)), arb(0))
        assert abs(total - 1 / arb.pi()).mid() < arb(10) ** -28


def test_de_rule_integrates_polynomial():
    with th._prec(30):
        g, w = th.de_rule(DEQuadrature(Fraction(1, 16), 160))
        total = sum((wk * gk**4 for gk, wk in zip(g, w)), arb(0))
        assert abs(total - arb(2) / 5).mid() < arb(10) ** -28


def test_refine_solve():
    import numpy as np

    with th._prec(40):
        n = 6
        A = acb_mat(n, n)
        for i in range(n):
            for j in range(n):
                A[i, j] = acb(1) / (i + j + 1) + (3 if i == j else 0)
        B = acb_mat(n, 1, [acb(k + 1) for k in range(n)])
        X = th.refine_solve(lambda Y: A * Y, th._to_numpy(A), B, 40)
        R = A * X - B
        assert max(abs(R[i, 0]).mid() for i in range(n)) < arb(10) ** -38


def test_endpoint_check_is_two_sided():
    sol = th.AfrakSolution(Fraction(1), [], 0, 0, acb(-4))
    assert not th.endpoint_ok(sol)
    sol = th.AfrakSolution(Fraction(1), [], 0, 0, acb(-3))
    assert th.endpoint_ok(sol)


def test_config_validation():
    with pytest.raises(ValueError):
        th.ThermalConfig(Fraction(1, 10), t=Fraction(3, 2))
    with pytest.raises(ValueError):
        th.ThermalConfig(0)
    assert th.ThermalConfig.for_temperature(Fraction(1, 50)).R == 2
    assert th.ThermalConfig.for_temperature(Fraction(1, 5)).R == 1


def test_thermal_omega_coarse_grid_sanity():
    """At T = 1/2 omega_T is real, symmetric and odd entries vanish."""
    setup = th.ContourSetup.build(1, Fraction(2, 5), DEQuadrature(Fraction(1, 8), 70),
                                  DEQuadrature(Fraction(1, 8), 80), digits=20, order=4)
    cfg = th.ThermalConfig(Fraction(1, 2), R=1, prec=Precision(20), order=4)
    W = th.omega_thermal(cfg, setup)
    with mpmath.workdps(20):
        for i in range(4):
            for j in range(4):
                assert abs(W[i][j] - W[j][i]) < 1e-10
                if (i + j) % 2:
                    assert abs(W[i][j]) < 1e-10
        # between the infinite temperature limit and the ground state
        assert mpmath.mpf("0.5") < W[0][0] < 2 * mpmath.log(2) - mpmath.mpf(1) / 2
