from fractions import Fraction

from hypothesis import given, settings, strategies as st

from xxxfermion import poly
from xxxfermion.linalg import (bareiss_solve, crt_pair, det_exact, nullspace_rational,
                               rational_reconstruction, rref_rational, solve_small)

small = st.integers(-6, 6)


@given(st.lists(small, min_size=1, max_size=5), st.lists(small, min_size=1, max_size=5), small)
def test_poly_mul_evaluates_pointwise(p, q, x):
    assert poly.evaluate(poly.mul(p, q), x) == poly.evaluate(p, x) * poly.evaluate(q, x)


@given(st.lists(small, min_size=1, max_size=6), small, small)
def test_shift_and_divide(p, c, r):
    assert poly.evaluate(poly.shift(p, c), r) == poly.evaluate(p, r + c)
    quo, rem = poly.divide_linear(p, r)
    assert rem == poly.evaluate(p, r)
    back = poly.add(poly.mul(quo, [-r, 1]), [rem])
    assert poly.trim(back) == poly.trim(list(p))


def test_series_inverse():
    inv = poly.series_inverse([Fraction(1), Fraction(-1)], 6)       # 1/(1-x)
    assert inv == [1] * 6


@settings(max_examples=40)
@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3), st.lists(small, min_size=3, max_size=3))
def test_bareiss_solves_nonsingular(A, b):
    A = [[Fraction(x) for x in r] for r in A]
    if det_exact(A) == 0:
        return
    x = bareiss_solve(A, [Fraction(v) for v in b])
    assert [sum(a * y for a, y in zip(row, x)) for row in A] == b
    cols = solve_small(A, [[Fraction(v) for v in b]])
    assert list(cols[0]) == list(x)


@settings(max_examples=40)
@given(st.lists(st.lists(small, min_size=5, max_size=5), min_size=1, max_size=4))
def test_nullspace_is_annihilated(rows):
    basis, _free = nullspace_rational(rows, 5)
    _, piv = rref_rational(rows, 5)
    assert len(basis) + len(piv) == 5
    for v in basis:
        for r in rows:
            assert sum(a * b for a, b in zip(r, v)) == 0


@given(st.integers(-1000, 1000), st.integers(1, 1000))
def test_rational_reconstruction(num, den):
    from math import gcd

    if gcd(num, den) != 1:
        return
    m = (1 << 61) - 1
    a = num * pow(den, -1, m) % m
    assert rational_reconstruction(a, m) == Fraction(num, den)


def test_crt():
    r, m = crt_pair(2, 7, 3, 11)
    assert m == 77 and r % 7 == 2 and r % 11 == 3
