"""Taylor coefficients omega_{i,j} of the function omega(lambda, mu).

For finite Matsubara data the contour integrals reduce to finitely many
residues: the Bethe roots (residue 1/afrak'(beta_j) of the measure), the
point sigma = mu for the G equation and additionally eta = lambda for omega.
Carrying them out gives

    G(eta, mu) = H(eta - mu) - K(eta - mu) phi(mu)
                 + sum_j K(eta - beta_j) G(beta_j, mu) / afrak'(beta_j)

    omega(lambda, mu) = (phi(lambda) - phi(mu)) / (lambda - mu)
                 + phi(mu) / (lambda - mu + 1) - phi(lambda) / (lambda - mu - 1)
                 + K(lambda - mu) (phi(lambda) phi(mu) + 1/4)
                 + sum_j (H(beta_j - lambda) - phi(lambda) K(lambda - beta_j))
                         G(beta_j, mu) / afrak'(beta_j)

with phi = 1 / (1 + afrak), K(x) = 2/(x^2 - 1), H(x) = 1/((x - 1) x).  The
apparent poles at lambda = mu cancel between the H terms, which is what the
divided difference in the first line expresses.  All pieces are expanded as
exact truncated power series at (0, 0).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import mpmath

from . import poly
from .linalg import solve_small
from .matsubara import MatsubaraData, afrak_derivative
from .numerics import Precision, zeta_odd


@dataclass(frozen=True)
class OmegaMatrix:
    """omega_{i,j} for 1 <= i, j <= order, stored 0-based as entries[i-1][j-1]."""

    order: int
    entries: tuple
    backend: str

    def __getitem__(self, idx):
        return self.entries[idx]

    def __len__(self):
        return self.order

    def to_text(self, digits=None) -> str:
        lines = [f"{self.order} {self.backend}"]
        for row in self.entries:
            lines.append(" ".join(_fmt(x, digits) for x in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "OmegaMatrix":
        lines = text.strip("\n").split("\n")
        order_s, backend = lines[0].split()
        order = int(order_s)
        conv = Fraction if backend == "md" else mpmath.mpf
        rows = tuple(tuple(conv(x) for x in line.split()) for line in lines[1:1 + order])
        return cls(order, rows, backend)


def _fmt(x, digits):
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return mpmath.nstr(x, digits or mpmath.mp.dps, strip_zeros=False, min_fixed=-1, max_fixed=1)


# ---------------------------------------------------------------------------
# truncated power series helpers (univariate lists, bivariate nested lists)

def _inv_linear_series(c, order):
    """Taylor coefficients of 1/(x - c) at 0."""
    # 1/(x - c) = -1/c * 1/(1 - x/c)
    return [-(Fraction(1) / c) ** (k + 1) for k in range(order)]


def _series_of_rational(num, den, order):
    return poly.series_mul(num, poly.series_inverse(den, order), order)


def _H_shifted(beta, order):
    """Series in x of H(beta - x) = 1/((beta - x - 1)(beta - x))."""
    # H(y) = 1/(y-1) - 1/y with y = beta - x
    a = [-(c) for c in _inv_linear_series(beta - 1, order)]  # 1/(beta-1-x) = -1/(x-(beta-1))
    b = [-(c) for c in _inv_linear_series(beta, order)]
    return [x - y for x, y in zip(a, b)]


def _K_shifted(beta, order):
    """Series in x of K(x - beta) = 2/((x - beta)^2 - 1) = 1/(x-beta-1) - 1/(x-beta+1)."""
    a = _inv_linear_series(beta + 1, order)
    b = _inv_linear_series(beta - 1, order)
    return [x - y for x, y in zip(a, b)]


def _biv_zero(n):
    return [[Fraction(0)] * n for _ in range(n)]


def _biv_of_difference(coeffs, n):
    """Bivariate series of g(lambda - mu) from the univariate series of g."""
    out = _biv_zero(n)
    for k, g in enumerate(coeffs):
        if g == 0:
            continue
        for a in range(k + 1):
            b = k - a
            if a < n and b < n:
                out[a][b] += g * comb(k, a) * (-1) ** b
    return out


def _biv_outer(f, g, n):
    return [[f[a] * g[b] for b in range(n)] for a in range(n)]


def _biv_mul(X, Y, n):
    out = _biv_zero(n)
    for a in range(n):
        for b in range(n):
            x = X[a][b]
            if x == 0:
                continue
            for c in range(n - a):
                row = Y[c]
                for d in range(n - b):
                    if row[d]:
                        out[a + c][b + d] += x * row[d]
    return out


def _biv_add(*terms):
    n = len(terms[0])
    return [[sum(t[a][b] for t in terms) for b in range(n)] for a in range(n)]


# ---------------------------------------------------------------------------

def phi_series(md: MatsubaraData, order: int):
    """Taylor coefficients of 1/(1 + afrak) = dQ(x-1) / (aQ(x+1) + dQ(x-1))."""
    den = poly.add(md.afrak_num, md.afrak_den)
    if poly.evaluate(den, 0) == 0:
        raise ZeroDivisionError("1 + afrak vanishes at 0")
    return _series_of_rational(md.afrak_den, den, order)


def g_at_roots_series(md: MatsubaraData, order: int, phi=None):
    """Series in mu of G(beta_j, mu) for every root, from the m x m residue system."""
    m = md.m
    if m == 0:
        return []
    if phi is None:
        phi = phi_series(md, order)
    b = md.roots
    ap = [afrak_derivative(md, x) for x in b]
    K = lambda x: Fraction(2) / (x * x - 1)
    A = [[(1 if k == j else 0) - K(b[k] - b[j]) / ap[j] for j in range(m)] for k in range(m)]
    rhs = []
    for k in range(m):
        h = _H_shifted(b[k], order)                       # H(beta_k - mu)
        kk = _K_shifted(b[k], order)                      # K(mu - beta_k) = K(beta_k - mu)
        kphi = poly.series_mul(kk, phi, order)
        rhs.append([h[i] - kphi[i] for i in range(order)])
    # rhs entries are series; solve_small handles vector-valued right sides
    cols = [[rhs[k][i] for k in range(m)] for i in range(order)]
    sol = solve_small(A, cols)
    return [[sol[i][j] for i in range(order)] for j in range(m)]


def omega_md(md: MatsubaraData, order: int = 10) -> OmegaMatrix:
    """Exact omega_{i,j}, 1 <= i, j <= order, for finite Matsubara data."""
    n = order
    phi = phi_series(md, 2 * n + 1)
    # divided difference (phi(l) - phi(m)) / (l - m) = sum_k phi_k sum_{a+b=k-1} l^a m^b
    W = _biv_zero(n)
    for a in range(n):
        for b in range(n):
            W[a][b] += phi[a + b + 1]
    ph = phi[:n]
    one = [Fraction(1)] + [Fraction(0)] * (2 * n)
    # 1/(x + 1) and 1/(x - 1) as series in x = lambda - mu
    s_plus = [Fraction((-1) ** k) for k in range(2 * n)]
    s_minus = [Fraction(-1)] * (2 * n)
    k_ser = [Fraction(-2) if k % 2 == 0 else Fraction(0) for k in range(2 * n)]
    Sp = _biv_of_difference(s_plus, n)
    Sm = _biv_of_difference(s_minus, n)
    Kb = _biv_of_difference(k_ser, n)
    phi_mu = _biv_outer(one[:n], ph, n)
    phi_lam = _biv_outer(ph, one[:n], n)
    T1 = _biv_mul(phi_mu, Sp, n)
    T2 = _biv_mul(phi_lam, Sm, n)
    prod = _biv_outer(ph, ph, n)
    prod[0][0] += Fraction(1, 4)
    T3 = _biv_mul(Kb, prod, n)
    total = _biv_add(W, T1, T3)
    total = [[total[a][b] - T2[a][b] for b in range(n)] for a in range(n)]
    if md.m:
        G = g_at_roots_series(md, n, phi)
        for j, bj in enumerate(md.roots):
            ap = afrak_derivative(md, bj)
            h = _H_shifted(bj, n)                          # H(beta_j - lambda)
            kk = _K_shifted(bj, n)                         # K(lambda - beta_j)
            kphi = poly.series_mul(kk, ph, n)
            left = [(h[i] - kphi[i]) / ap for i in range(n)]
            for a in range(n):
                for b in range(n):
                    total[a][b] += left[a] * G[j][b]
    return OmegaMatrix(order, tuple(tuple(r) for r in total), "md")


# ---------------------------------------------------------------------------
# zero temperature

def omega_zero_series(order: int, prec: Precision = Precision()):
    """Coefficients w_k of omega(lambda) = sum_k w_k lambda^k, k < 2*order."""
    with mpmath.workdps(prec.digits + 10):
        out = [mpmath.mpf(0)] * (2 * order)
        out[0] = 2 * mpmath.log(2) - mpmath.mpf(1) / 2
        for k in range(1, order):
            out[2 * k] = 2 * zeta_odd(k, Precision(prec.digits + 10)) * (1 - mpmath.mpf(2) ** (-2 * k)) - mpmath.mpf(1) / 2
        return out


def omega_zero(order: int = 10, prec: Precision = Precision()) -> OmegaMatrix:
    """omega_{i,j} of omega(lambda - mu) for the zero temperature antiferromagnet."""
    w = omega_zero_series(order, prec)
    with mpmath.workdps(prec.digits + 10):
        rows = []
        for a in range(order):
            row = []
            for b in range(order):
                k = a + b
                row.append(w[k] * comb(k, a) * (-1) ** b if k < len(w) else mpmath.mpf(0))
            rows.append(row)
    with mpmath.workdps(prec.digits):
        rows = tuple(tuple(+x for x in r) for r in rows)
    return OmegaMatrix(order, rows, "zero")
