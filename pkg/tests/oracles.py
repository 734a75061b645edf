"""Independent oracles shared by several test modules.

brute_A, brute_D and brute_B evaluate the monodromy actions on symmetric
functions directly from their defining formulas (values at points, no
Schur-basis manipulation).
"""

from fractions import Fraction as F

from xxxfermion.schur import SchurVector, box_partitions, eval_schur

v = lambda x: 1 / x
u = lambda x: 1 / x + 1


def brute_A(md, Y, mu):
    f = lambda pts: eval_schur(Y, pts)
    q = len(mu)
    t = md.a(0) * f(mu)
    for x in mu:
        t *= u(-x)
    for j in range(q):
        c = md.a(mu[j]) * v(-mu[j])
        for r in range(q):
            if r != j:
                c *= u(mu[j] - mu[r])
        t -= c * f(mu[:j] + mu[j + 1:] + [0])
    return t


def brute_D(md, Y, mu):
    f = lambda pts: eval_schur(Y, pts)
    q = len(mu)
    t = md.d(0) * f(mu)
    for x in mu:
        t *= u(x)
    for j in range(q):
        c = md.d(mu[j]) * v(mu[j])
        for r in range(q):
            if r != j:
                c *= u(mu[r] - mu[j])
        t -= c * f(mu[:j] + mu[j + 1:] + [0])
    return t


def brute_B(md, Y, mu):
    f = lambda pts: eval_schur(Y, pts)
    a, d, q = md.a, md.d, len(mu)
    t = 0
    for j in range(q):
        c1 = a(0) * d(mu[j]) * v(-mu[j])
        c2 = d(0) * a(mu[j]) * v(mu[j])
        for r in range(q):
            if r != j:
                c1 *= u(-mu[r]) * u(mu[r] - mu[j])
                c2 *= u(mu[r]) * u(mu[j] - mu[r])
        t += (c1 + c2) * f(mu[:j] + mu[j + 1:])
    for i in range(q):
        for j in range(i + 1, q):
            c1 = d(mu[i]) * a(mu[j]) * v(-mu[i]) * v(mu[j]) * u(mu[j] - mu[i])
            c2 = a(mu[i]) * d(mu[j]) * v(-mu[j]) * v(mu[i]) * u(mu[i] - mu[j])
            for r in range(q):
                if r not in (i, j):
                    c1 *= u(mu[r] - mu[i]) * u(mu[j] - mu[r])
                    c2 *= u(mu[i] - mu[r]) * u(mu[r] - mu[j])
            t += (c1 + c2) * f([mu[r] for r in range(q) if r not in (i, j)] + [0])
    return t


def random_points(rng, q):
    """q distinct nonzero rationals."""
    while True:
        mu = [F(rng.randint(-30, 30), rng.randint(1, 7)) for _ in range(q)]
        if len(set(mu + [0])) == q + 1:
            return mu


def random_vector(rng, q, width):
    return SchurVector(q, {lam: F(rng.randint(-5, 5)) for lam in box_partitions(q, width)})
