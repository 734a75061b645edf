import pytest

from xxxfermion.fermions import compute_V
from xxxfermion.matsubara import generate_md
from xxxfermion.xsolver import (ConsistencyError, RowBuilder, XMatrix, build_system, consistency_report,
                                gauss_reduce, mutate_basis_sign, residual_check, solve_x)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_consistency(n):
    rep = consistency_report(n, seed=1)
    assert rep["rank"] == rep["dimV"] == compute_V(n).dim_V
    assert rep["residual_rows"] == 0
    assert rep["held_out_ok"]


def test_two_site_solution():
    xm, _ = solve_x(2)
    assert [row[0] for row in xm.X] == [0, -2, 0]
    assert XMatrix.from_text(xm.to_text()).X == xm.X


def test_independent_seeds_agree():
    a, _ = solve_x(4, seed=0)
    b, _ = solve_x(4, seed=7)
    assert a.X == b.X


def test_sign_mutation_is_detected():
    basis = compute_V(4)
    # find a pair column that the solution actually uses
    bad = mutate_basis_sign(basis, 4)
    sysm = build_system(4, seed=0, basis=bad)
    with pytest.raises(ConsistencyError):
        gauss_reduce(sysm.A, sysm.B, bad.dim_V, 4)


def test_residual_check_on_fresh_data():
    xm, _ = solve_x(3)
    rb = RowBuilder(3)
    for seed in range(3):
        a, b = rb.row(generate_md(4, 1, 500 + seed))
        assert residual_check(xm, a, b)
