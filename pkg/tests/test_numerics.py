from fractions import Fraction

import mpmath
import pytest

from xxxfermion.numerics import DEQuadrature, Precision, de_integrate, de_nodes, zeta_odd


def test_precision_floor():
    with pytest.raises(ValueError):
        Precision(10)


def test_de_polynomial_and_endpoint_singularity():
    prec = Precision(40)
    quad = DEQuadrature(Fraction(1, 16), 160)
    with mpmath.workdps(40):
        assert abs(de_integrate(lambda x: x**4, 2, quad, prec) - mpmath.mpf(64) / 5) < mpmath.mpf(10) ** -35
        # int_{-1}^{1} dx / sqrt(1 - x^2) = pi
        val = de_integrate(lambda x: 1 / mpmath.sqrt(1 - x * x), 1, quad, prec)
        assert abs(val - mpmath.pi) < mpmath.mpf(10) ** -30


def test_de_nodes_symmetric():
    xs, ws = de_nodes(DEQuadrature(Fraction(1, 8), 80), Precision(30))
    assert len(xs) == 161
    for a, b in zip(xs, reversed(xs)):
        assert abs(a + b) < mpmath.mpf(10) ** -30
    with mpmath.workdps(30):
        assert abs(mpmath.fsum(ws) - 2) < mpmath.mpf(10) ** -25


@pytest.mark.parametrize("k", [1, 2, 5, 9])
def test_zeta_odd_against_mpmath(k):
    with mpmath.workdps(60):
        assert abs(zeta_odd(k, Precision(60)) - mpmath.zeta(2 * k + 1)) < mpmath.mpf(10) ** -55
