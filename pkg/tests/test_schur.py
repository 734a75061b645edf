"""Letter actions of the Schur engine against their defining evaluation formulas."""

import random

import pytest

from xxxfermion.matsubara import generate_md
from xxxfermion.schur import act_A, act_B, act_C, act_D, eval_schur, gaudin_norm, slavnov_vector

from oracles import brute_A, brute_B, brute_D, random_points, random_vector


@pytest.mark.parametrize("L,m,seed", [(3, 0, 1), (4, 1, 3), (5, 2, 2), (4, 2, 8)])
@pytest.mark.parametrize("q", [0, 1, 2, 3])
def test_letters_against_brute_force(L, m, seed, q):
    md = generate_md(L, m, seed)
    rng = random.Random(100 * q + seed)
    mu = random_points(rng, q)
    Y = random_vector(rng, q, L - 1)
    assert eval_schur(act_A(Y, md.a_poly), mu) == brute_A(md, Y, mu)
    assert eval_schur(act_D(Y, md.d_poly), mu) == brute_D(md, Y, mu)
    # C: one variable set to zero
    Yc = random_vector(rng, q + 1, L - 1)
    assert eval_schur(act_C(Yc), mu) == eval_schur(Yc, mu + [0])
    if q >= 1:
        Yb = random_vector(rng, q - 1, L - 1)
        lhs = eval_schur(act_B(Yb, md.a_poly, md.d_poly, md.a(0), md.d(0)), mu)
        assert lhs == brute_B(md, Yb, mu)


def test_slavnov_at_roots_equals_gaudin_50_data():
    count = 0
    for seed in range(200):
        for L, m in ((2, 1), (3, 1), (4, 2), (5, 2)):
            if count == 50:
                return
            md = generate_md(L, m, seed)
            assert eval_schur(slavnov_vector(md), list(md.roots)) == gaudin_norm(md)
            count += 1
