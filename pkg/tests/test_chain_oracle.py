"""Engine against an explicit inhomogeneous chain built from 2^L x 2^L matrices.

The monodromy T(lambda) = L_L ... L_1 with L_k = (lambda - xi_k) + P_k is
multiplied out exactly.  Data with one root are produced by choosing the
last inhomogeneity so that the Bethe equation holds.
"""

import itertools
from fractions import Fraction as F

import numpy as np
import pytest

from xxxfermion import poly
from xxxfermion.matsubara import MatsubaraData
from xxxfermion.operators import DirectEvaluator
from xxxfermion.schur import act_letter, eval_schur, gaudin_norm, slavnov_vector


def _E(i, j):
    M = np.full((2, 2), F(0), dtype=object)
    M[i, j] = F(1)
    return M


_I2 = np.array([[F(1), F(0)], [F(0), F(1)]], dtype=object)


def _kron(ms):
    out = np.array([[F(1)]], dtype=object)
    for m in ms:
        out = np.kron(out, m)
    return out


def monodromy(lam, xis):
    L = len(xis)
    T = None
    for k in range(L):
        Lk = [[(lam - xis[k]) * (1 if i == j else 0) * _I2 + _E(j, i) for j in range(2)] for i in range(2)]
        ops = [[_kron([Lk[i][j] if s == k else _I2 for s in range(L)]) for j in range(2)] for i in range(2)]
        T = ops if T is None else [[ops[i][0].dot(T[0][j]) + ops[i][1].dot(T[1][j]) for j in range(2)] for i in range(2)]
    return {"A": T[0][0], "B": T[0][1], "C": T[1][0], "D": T[1][1]}


def data_for(xis, roots):
    a = poly.from_roots(xis, F(1))
    d = poly.from_roots([x - 1 for x in xis], F(1))
    return MatsubaraData(len(xis), len(roots), a[:-1][::-1], d[:-1][::-1], roots)


def balanced_words(n):
    for w in itertools.product("ABCD", repeat=n):
        if w.count("B") == w.count("C"):
            yield "".join(w)


def _engine(md, word):
    Y = slavnov_vector(md)
    for x in word:
        Y = act_letter(x, md, Y)
    return eval_schur(Y, list(md.roots)) if md.m else Y.terms.get((), 0)


def _vacuum(L):
    v = np.full(2**L, F(0), dtype=object)
    v[-1] = F(1)
    return v


def test_no_roots():
    xis = [F(1, 3), F(-2, 5), F(7, 4)]
    md = data_for(xis, ())
    T = monodromy(F(0), xis)
    vac = _vacuum(3)
    for n in (1, 2, 3):
        for w in balanced_words(n):
            v = vac.copy()
            for x in w:
                v = v.dot(T[x])
            assert v.dot(vac) == _engine(md, w), w


def test_one_root():
    beta = F(5, 7)
    xs = [F(1, 3), F(-2, 5)]
    Ap = Dp = 1
    for x in xs:
        Ap *= beta - x
        Dp *= beta - x + 1
    xs.append(beta - Dp / (Ap - Dp))
    md = data_for(xs, (beta,))
    assert md.bethe_residuals() == [0]
    T, Tb = monodromy(F(0), xs), monodromy(beta, xs)
    vac = _vacuum(3)
    bra, ket = vac.dot(Tb["B"]), Tb["C"].dot(vac)
    assert bra.dot(ket) == gaudin_norm(md)
    for n in (1, 2, 3):
        for w in balanced_words(n):
            v = bra.copy()
            for x in w:
                v = v.dot(T[x])
            assert v.dot(ket) == _engine(md, w), w


@pytest.mark.parametrize("word", ["zz", "pm", "mp", "zii", "pzm", "ipm"])
def test_normalized_words(word):
    """DirectEvaluator divides by the norm and Lambda(0)^n."""
    xis = [F(1, 3), F(-2, 5), F(7, 4)]
    md = data_for(xis, ())
    T = monodromy(F(0), xis)
    vac = _vacuum(3)
    letters = {"i": "AD", "z": "AD", "p": "C", "m": "B"}
    # Tr(x T) per site: i -> A + D, z -> A - D, p -> C, m -> B
    total = F(0)
    choices = []
    for x in word:
        if x == "i":
            choices.append([("A", 1), ("D", 1)])
        elif x == "z":
            choices.append([("A", 1), ("D", -1)])
        else:
            choices.append([(letters[x], 1)])
    for combo in itertools.product(*choices):
        v = vac.copy()
        sign = 1
        for letter, s in combo:
            v = v.dot(T[letter])
            sign *= s
        total += sign * v.dot(vac)
    lam0 = md.Lambda0()
    assert DirectEvaluator(md).word(word) == total / lam0 ** len(word)
