from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from xxxfermion.matsubara import (InadmissibleData, MatsubaraData, afrak_derivative, check_admissible,
                                  eval_afrak, generate_md, solve_bethe)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.integers(0, 3), st.integers(0, 10**6))
def test_generated_data_satisfy_bethe(L, m, seed):
    if 2 * m > L:
        with pytest.raises(ValueError):
            generate_md(L, m, seed)
        return
    md = generate_md(L, m, seed)
    assert all(r == 0 for r in md.bethe_residuals())
    for b in md.roots:
        assert eval_afrak(md, b) == -1
    check_admissible(md)


def test_text_round_trip_and_determinism():
    md = generate_md(5, 2, 17)
    assert MatsubaraData.from_text(md.to_text()) == md
    assert generate_md(5, 2, 17) == md
    assert generate_md(5, 2, 18) != md


def test_solve_bethe_rejects_inconsistent_input():
    # a repeated root cannot be admissible
    with pytest.raises((InadmissibleData, ZeroDivisionError, ValueError)):
        md = MatsubaraData(2, 2, solve_bethe(2, 2, [1, 1], [], [1, 2]), [1, 2], [1, 1])
        check_admissible(md)


def test_afrak_derivative_matches_difference_quotient():
    md = generate_md(4, 1, 5)
    b = md.roots[0]
    eps = Fraction(1, 10**12)
    approx = (eval_afrak(md, b + eps) - eval_afrak(md, b - eps)) / (2 * eps)
    assert abs(float(approx - afrak_derivative(md, b))) < 1e-6 * max(1, abs(float(approx)))
