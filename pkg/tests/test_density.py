from fractions import Fraction

import mpmath
import pytest

from xxxfermion import density as dens
from xxxfermion import operators as ops
from xxxfermion.matsubara import generate_md
from xxxfermion.numerics import Precision
from xxxfermion.omega import omega_md, omega_zero


@pytest.fixture(scope="module")
def tables():
    return dens.default_tables(5)


def test_multiplicities():
    assert dens.multiplicity_dim(10, 2) == 90
    for n in range(1, 9):
        assert sum((j2 + 1) * dens.multiplicity_dim(n, j2) for j2 in dens.spins(n)) == 2**n


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_trace_and_positivity(n, tables):
    with mpmath.workdps(30):
        blocks = dens.density_blocks(n, omega_zero(10, Precision(30)), tables, Precision(30))
        assert abs(blocks.trace() - 1) < mpmath.mpf(10) ** -25
        rep = dens.spectra_entropy(blocks, Precision(30))
        assert all(x > 0 for ev in rep.spectra.values() for x in ev)


def test_md_backend_refused(tables):
    with pytest.raises(ValueError):
        dens.density_words(2, omega_md(generate_md(3, 1, 1), 4), tables)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_density_reproduces_invariant_expectations(n, tables):
    """Tr(D(n) O_a) equals the X-based expectation for every basis operator."""
    with mpmath.workdps(30):
        W = omega_zero(10, Precision(30))
        D = dens.density_words(n, W, tables)
        e = dens.irreducible_expectations(n, W, tables)
        for op, val in zip(ops.invariant_basis(n), e):
            assert abs(dens.expectation(D, op) - val) < mpmath.mpf(10) ** -25


def test_apply_word():
    assert dens.apply_word("p", 0) == (1, 1)
    assert dens.apply_word("m", 0) is None
    assert dens.apply_word("zz", 0b01) == (-1, 0b01)


def test_efp_arithmetic():
    P = {n: mpmath.mpf(x) for n, x in {7: "8.93090684226941650e-12", 8: "4.05749505255338289e-15",
                                       9: "6.62359212493539014e-19", 10: "3.88481154904260358e-23"}.items()}
    _, est = dens.efp_asymptotics(P, Precision(30))
    assert abs(est[10] - mpmath.mpf("0.8412645021372811")) < mpmath.mpf(10) ** -15
    assert abs(est[9] - mpmath.mpf("0.8412642481617325")) < mpmath.mpf(10) ** -15


def test_cft_formulas():
    C, resid = dens.cft_zero({2: mpmath.mpf(1), 4: mpmath.mpf(1) + mpmath.log(2) / 3})
    assert abs(resid[2]) < 1e-20 and abs(resid[4]) < 1e-20
    assert abs(dens.cft_thermal(Fraction(1, 2)) - mpmath.mpf("0.013774951538")) < 1e-11
