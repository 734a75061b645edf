from fractions import Fraction

import pytest

from xxxfermion import operators as ops
from xxxfermion.matsubara import generate_md


def test_word_counts_small():
    assert ops.enumerate_irreducible_words(2) == ["mp", "pm", "zz"]
    assert ops.count_irreducible_words(4) == 22
    for n in range(2, 8):
        assert ops.count_irreducible_words(n) == len(ops.enumerate_irreducible_words(n))


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_invariant_basis_matches_dimension(n):
    basis = ops.invariant_basis(n)
    assert len(basis) == ops.invariant_dimension(n)
    for op in basis:
        assert ops.ad_plus(op) == {}
        assert all(ops.is_irreducible(w) for w in op)
        assert all(ops.charge(w) == 0 for w in op)


def test_trace_pairing():
    a = {"pm": Fraction(1)}
    b = {"mp": Fraction(3)}
    assert ops.trace_product(a, b) == 3
    assert ops.trace_product({"zz": 1}, {"zz": 1}) == 4
    assert ops.trace_product({"zi": 1}, {"iz": 1}) == 0


def test_translational_reduce():
    op = {"izzi": Fraction(2), "iiii": Fraction(1), "zizi": Fraction(-1)}
    red = ops.translational_reduce(op)
    assert red == {0: {"": 1}, 2: {"zz": 2}, 3: {"ziz": -1}}


@pytest.mark.parametrize("L,m,seed", [(3, 0, 4), (3, 1, 5), (4, 2, 6)])
def test_exact_identities(L, m, seed):
    md = generate_md(L, m, seed)
    ev = ops.DirectEvaluator(md)
    for n in (1, 2, 3, 4):
        assert ev.word("i" * n) == 1
    # charge violating words vanish
    for w in ("p", "zm", "pzi", "ppm", "imz"):
        assert ev.word(w) == 0
    # reduction consistency: <1 (x) O> = <O (x) 1> = <O>
    for w in ("zz", "pm", "zpm", "mzp"):
        base = ev.word(w)
        assert ev.word("i" + w) == base
        assert ev.word(w + "i") == base
