"""omega at finite temperature from the nonlinear integral equation.

Variables are rotated, lambda = i x.  The contour is the ellipse

    x(phi) = -R cos(phi) - i t sin(phi),

split into C_- (lower half) and C_+ (upper half); both are integrated from -R
to R.  Nodes of C_+ are the complex conjugates of the nodes of C_-, so the
Schwarz reflection afrak(x) = 1/conj(afrak(conj x)) lets the equation for
log afrak live on C_+ only.

With K(x) = -1/(pi (x^2+1)), f(x) = i/(x(x+i)) and R the resolvent of 1 - K
on [-R, R] the pieces are

    log afrak = h/T - int_{C_+} R log(1 + afrak) + int_{C_-} R log(1 + afrak_bar),
    h = h0 + int_{C_-} R h0,  h0(x) = 1/(x(x+i)),
    F = F0 + dF,  F0(x) = pi/sinh(pi x),  dF = (1 + R) d,
    d(x, y) = -(int_{-inf}^{-R} + int_R^inf) K(x - z) F0(z - y) dz,
    omega_1 = omega_0(i(x - y)) + (1/2pi) tails[f F0] - (1/2pi) int_{C_-} f(z - x) dF(z, y) dz,
    G + int_{C_+} R G dmbar + int_{C_-} R G dm = F,
    omega_2 = (1/2pi) (int_{C_+} F G dmbar + int_{C_-} F G dm),

with dm = dz/(1 + afrak) and dmbar = dz/(1 + 1/afrak).  Every function is
expanded in its second argument (order 10) before integrating, so Taylor
coefficients never come from numerical differentiation.  The linear algebra
is done in ball arithmetic with python-flint.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import flint
import mpmath
import numpy as np
from flint import acb, acb_mat, arb, arb_mat

from .numerics import DEQuadrature, Precision
from .omega import OmegaMatrix, omega_zero_series

log = logging.getLogger(__name__)

LINE_GRIDS = {1: DEQuadrature(Fraction(1, 20), 200), 2: DEQuadrature(Fraction(1, 25), 250)}
CONTOUR_GRIDS = {1: DEQuadrature(Fraction(1, 30), 300), 2: DEQuadrature(Fraction(1, 40), 400)}
TAIL_STEP = Fraction(1, 16)

# sign of the contour integral in omega_1 relative to pi K/2; fixed by the
# zero temperature identity omega_0(i(x-y)) = -(1/2pi) int_{R - i0} f F0 + pi K(x-y)/2
OMEGA1_SIGN = -1


class ThermalError(ArithmeticError):
    pass


@dataclass(frozen=True)
class ThermalConfig:
    T: Fraction
    R: int = 2
    t: Fraction = Fraction(2, 5)
    line: DEQuadrature | None = None
    contour: DEQuadrature | None = None
    prec: Precision = Precision(60)
    order: int = 10
    max_iter: int = 500

    def __post_init__(self):
        object.__setattr__(self, "T", Fraction(self.T))
        object.__setattr__(self, "t", Fraction(self.t))
        if not 0 < self.t < 1:
            raise ValueError("ellipse parameter t must lie in (0, 1)")
        if self.T <= 0:
            raise ValueError("temperature must be positive")
        if self.line is None:
            object.__setattr__(self, "line", LINE_GRIDS.get(self.R, LINE_GRIDS[2]))
        if self.contour is None:
            object.__setattr__(self, "contour", CONTOUR_GRIDS.get(self.R, CONTOUR_GRIDS[2]))

    @classmethod
    def for_temperature(cls, T, digits: int = 60, **kw):
        """R = 2 below T = 1/10 and R = 1 from there on."""
        T = Fraction(T)
        return cls(T, R=2 if T < Fraction(1, 10) else 1, prec=Precision(digits), **kw)


# ---------------------------------------------------------------------------
# arb helpers

class _prec:
    """Context manager for the flint working precision in bits."""

    def __init__(self, digits):
        self.bits = int(digits * 3.33) + 40

    def __enter__(self):
        self.old = flint.ctx.prec
        flint.ctx.prec = self.bits

    def __exit__(self, *exc):
        flint.ctx.prec = self.old


def _q(x) -> arb:
    x = Fraction(x)
    return arb(flint.fmpq(x.numerator, x.denominator))


def to_mpmath(z):
    """Midpoint of an arb/acb as an mpmath number at the current mpmath precision."""
    digits = mpmath.mp.dps + 5
    if isinstance(z, acb):
        re = mpmath.mpf(z.real.mid().str(digits, radius=False))
        im = mpmath.mpf(z.imag.mid().str(digits, radius=False))
        return mpmath.mpc(re, im)
    return mpmath.mpf(z.mid().str(digits, radius=False))


def _from_mpmath(x) -> acb:
    s = lambda v: arb(mpmath.nstr(v, mpmath.mp.dps + 5, strip_zeros=False))
    if isinstance(x, mpmath.mpc):
        return acb(s(x.real), s(x.imag))
    return acb(s(mpmath.mpf(x)))


def de_rule(quad: DEQuadrature):
    """Nodes g(hk) and weights h g'(hk) of the double exponential map on (-1, 1)."""
    h, c = _q(quad.h), _q(quad.c)
    four_pi = 4 / arb.pi()
    nodes, weights = [], []
    for k in range(-quad.N, quad.N + 1):
        t = h * k
        s = c * t.sinh()
        # 1 - |g| computed directly so nodes near the ends keep their digits
        delta = four_pi * (-abs(s)).exp().atan()
        nodes.append(1 - delta if k >= 0 else delta - 1)
        weights.append(h * four_pi * c * t.cosh() / (2 * s.cosh()))
    return nodes, weights


def half_line_rule(step: Fraction, digits: int):
    """Nodes u in (0, inf) and weights for integrands decaying like exp(-pi u).

    Map u = exp(s - exp(-s)); the range of s is cut where the weights fall
    below the working precision.
    """
    with _prec(digits):
        return _half_line_rule(step, digits)


def _half_line_rule(step, digits):
    h = _q(step)
    eps = arb(10) ** (-(digits + 10))
    nodes, weights = [], []
    k = 0
    while True:                                   # towards u -> 0
        s = h * k
        u = (s - (-s).exp()).exp()
        w = h * u * (1 + (-s).exp())
        if k < 0 and w < eps:
            break
        nodes.append(u)
        weights.append(w)
        k -= 1
    k = 1
    while True:                                   # towards u -> inf
        s = h * k
        u = (s - (-s).exp()).exp()
        w = h * u * (1 + (-s).exp())
        if w * (-arb.pi() * u).exp() < eps:
            break
        nodes.append(u)
        weights.append(w)
        k += 1
    return nodes, weights


def _K(x):
    return -1 / (arb.pi() * (x * x + 1))


def _f_coeffs(z, order):
    """Coefficients of x^{j-1} in f(z - x): z^{-j} - (z + i)^{-j}."""
    a = 1 / z
    b = 1 / (z + acb(0, 1))
    out = []
    pa, pb = a, b
    for _ in range(order):
        out.append(pa - pb)
        pa, pb = pa * a, pb * b
    return out


def _F0_coeffs(z, order):
    """Coefficients of y^{k-1} in pi / sinh(pi (z - y))."""
    pi = arb.pi()
    pz = pi * z
    sh, ch = pz.sinh(), pz.cosh()
    ser = []
    fact = arb(1)
    pw = arb(1)
    for m in range(order):
        if m:
            fact *= m
            pw *= pi
        ser.append((sh if m % 2 == 0 else -ch) * pw / fact)
    inv = [1 / ser[0]]
    for k in range(1, order):
        acc = sum((ser[j] * inv[k - j] for j in range(1, k + 1)), acb(0) if isinstance(z, acb) else arb(0))
        inv.append(-acc * inv[0])
    return [pi * x for x in inv]


def _col(vals):
    M = acb_mat(len(vals), 1)
    for i, v in enumerate(vals):
        M[i, 0] = v
    return M


# ---------------------------------------------------------------------------
# temperature independent part

@dataclass
class ContourSetup:
    """Resolvent, F and omega_1 for one (R, t, grids, precision)."""

    R: int
    t: Fraction
    digits: int
    order: int
    zl: list = field(repr=False, default=None)         # line nodes
    wl: list = field(repr=False, default=None)
    xc: list = field(repr=False, default=None)         # contour nodes, C_+ then C_-
    wc: list = field(repr=False, default=None)
    M: int = 0                                          # nodes per half
    R_ll: object = field(repr=False, default=None)
    R_cl: object = field(repr=False, default=None)
    R_cc: object = field(repr=False, default=None)
    Fc: object = field(repr=False, default=None)       # F_k at contour nodes (2M x order)
    dF_line: object = field(repr=False, default=None)
    omega1: list = field(repr=False, default=None)     # x-coefficients
    h_plus: list = field(repr=False, default=None)
    timings: dict = field(default_factory=dict)

    # -- construction ------------------------------------------------------
    @classmethod
    def build(cls, R: int, t=Fraction(2, 5), line: DEQuadrature | None = None,
              contour: DEQuadrature | None = None, digits: int = 60, order: int = 10):
        line = line or LINE_GRIDS.get(R, LINE_GRIDS[2])
        contour = contour or CONTOUR_GRIDS.get(R, CONTOUR_GRIDS[2])
        self = cls(R, Fraction(t), digits, order)
        with _prec(digits):
            self._nodes(line, contour)
            self._resolvent()
            self._F_family()
            self._omega1()
            self._h()
        return self

    def _nodes(self, line, contour):
        g, w = de_rule(line)
        Rr = arb(self.R)
        self.zl = [Rr * x for x in g]
        self.wl = [Rr * x for x in w]
        g, w = de_rule(contour)
        half_pi = arb.pi() / 2
        tt = _q(self.t)
        xm, wm = [], []
        for gk, wk in zip(g, w):
            phi = half_pi * (1 + gk)
            x = acb(-Rr * phi.cos(), -tt * phi.sin())
            dx = acb(Rr * phi.sin(), -tt * phi.cos())
            xm.append(x)
            wm.append(dx * half_pi * wk)
        self.M = len(xm)
        self.xc = [x.conjugate() for x in xm] + xm
        self.wc = [x.conjugate() for x in wm] + wm

    def _resolvent(self):
        t0 = time.time()
        L = len(self.zl)
        A = arb_mat(L, L)
        Kll = arb_mat(L, L)
        for a in range(L):
            za = self.zl[a]
            for b in range(L):
                k = _K(za - self.zl[b])
                Kll[a, b] = k
                A[a, b] = (1 if a == b else 0) - k * self.wl[b]
        self.R_ll = A.solve(Kll, algorithm="approx")
        n = len(self.xc)
        Kcl = acb_mat(n, L)
        KclW = acb_mat(n, L)
        for a, x in enumerate(self.xc):
            for b, z in enumerate(self.zl):
                k = _K(x - z)
                Kcl[a, b] = k
                KclW[a, b] = k * self.wl[b]
        Rll = acb_mat(self.R_ll)
        self.R_cl = Kcl + KclW * Rll
        Kcc = acb_mat(n, n)
        for a, x in enumerate(self.xc):
            for b, y in enumerate(self.xc):
                Kcc[a, b] = _K(x - y)
        self.R_cc = Kcc + KclW * self.R_cl.transpose()
        self.timings["resolvent"] = time.time() - t0

    def _tails(self, points):
        """d_k at the given points: -int_{|z|>R} K(x - z) F0_k(z) dz, k = 1..order."""
        u, w = half_line_rule(TAIL_STEP, self.digits)
        Rr = arb(self.R)
        out = [[acb(0)] * self.order for _ in points]
        for uk, wk in zip(u, w):
            for sgn in (1, -1):
                z = sgn * (Rr + uk)
                F0 = _F0_coeffs(z, self.order)
                for i, x in enumerate(points):
                    kz = _K(x - z) * wk
                    row = out[i]
                    for k in range(self.order):
                        row[k] -= kz * F0[k]
        return out

    def _F_family(self):
        t0 = time.time()
        L, n, order = len(self.zl), len(self.xc), self.order
        d_line = self._tails(self.zl)
        d_c = self._tails(self.xc)
        D = acb_mat(L, order)
        DW = acb_mat(L, order)
        for i in range(L):
            for k in range(order):
                D[i, k] = d_line[i][k]
                DW[i, k] = d_line[i][k] * self.wl[i]
        self.dF_line = D + acb_mat(self.R_ll) * DW
        dFc = self.R_cl * DW
        Fc = acb_mat(n, order)
        self._dFc = acb_mat(n, order)
        for i, x in enumerate(self.xc):
            F0 = _F0_coeffs(x, order)
            for k in range(order):
                v = dFc[i, k] + d_c[i][k]
                self._dFc[i, k] = v
                Fc[i, k] = F0[k] + v
        self.Fc = Fc
        self.timings["F"] = time.time() - t0

    def _omega1(self):
        order = self.order
        with mpmath.workdps(self.digits + 10):
            w0 = omega_zero_series(order, Precision(self.digits + 10))
            w0 = [_from_mpmath(x) for x in w0]
        I = acb(0, 1)
        out = [[acb(0)] * order for _ in range(order)]
        from math import comb
        for a in range(order):
            for b in range(order):
                out[a][b] = w0[a + b] * I ** (a + b) * comb(a + b, a) * (-1) ** b
        two_pi = 2 * arb.pi()
        sg = OMEGA1_SIGN
        # contour part over C_-
        for i in range(self.M, 2 * self.M):
            z, w = self.xc[i], self.wc[i]
            fj = _f_coeffs(z, order)
            for a in range(order):
                c = sg * fj[a] * w / two_pi
                for b in range(order):
                    out[a][b] += c * self._dFc[i, b]
        # tails
        u, wt = half_line_rule(TAIL_STEP, self.digits)
        Rr = arb(self.R)
        for uk, wk in zip(u, wt):
            for s in (1, -1):
                z = acb(s * (Rr + uk))
                fj = _f_coeffs(z, order)
                F0 = _F0_coeffs(z, order)
                for a in range(order):
                    c = -sg * fj[a] * wk / two_pi
                    for b in range(order):
                        out[a][b] += c * F0[b]
        self.omega1 = out

    def _h(self):
        """h = h0 + int_{C_-} R h0 at the C_+ nodes."""
        M = self.M
        hv = []
        for i in range(M):
            x = self.xc[i]
            acc = 1 / (x * (x + acb(0, 1)))
            for l in range(M, 2 * M):
                z = self.xc[l]
                acc += self.R_cc[i, l] * self.wc[l] / (z * (z + acb(0, 1)))
            hv.append(acc)
        self.h_plus = hv

    def R_cc_double(self):
        """complex128 copy of R on the contour nodes (for preconditioning)."""
        if getattr(self, "_R_cc_np", None) is None:
            self._R_cc_np = _to_numpy(self.R_cc)
        return self._R_cc_np

    # -- single point continuation (used for the endpoint check) ------------
    def resolvent_row(self, x):
        """R(x, .) at the contour nodes and on the line for an arbitrary point x."""
        L = len(self.zl)
        Kxl = acb_mat(1, L)
        for b, z in enumerate(self.zl):
            Kxl[0, b] = _K(x - z) * self.wl[b]
        row_l = Kxl * acb_mat(self.R_ll)
        for b, z in enumerate(self.zl):
            row_l[0, b] += _K(x - z)
        row_c = acb_mat(1, len(self.xc))
        tmp = Kxl * self.R_cl.transpose()
        for b, y in enumerate(self.xc):
            row_c[0, b] = _K(x - y) + tmp[0, b]
        return row_l, row_c

    def cauchy_check(self, x, y):
        """|R(x,y) - K(x-y) - int_{C_-} K(x-z) R(z,y) dz| for real x, y (line indices)."""
        xa, yb = self.zl[x], self.zl[y]
        acc = acb(_K(xa - yb))
        for l in range(self.M, 2 * self.M):
            acc += _K(xa - self.xc[l]) * self.R_cl[l, y] * self.wc[l]
        with _prec(self.digits):
            return abs(acb(self.R_ll[x, y]).mid() - acc.mid())


@lru_cache(maxsize=8)
def contour_setup(R: int, t=Fraction(2, 5), digits: int = 60, order: int = 10,
                  line: DEQuadrature | None = None, contour: DEQuadrature | None = None):
    log.info("building resolvent data for R=%s at %d digits", R, digits)
    return ContourSetup.build(R, t, line, contour, digits, order)


# ---------------------------------------------------------------------------
# temperature dependent part

@dataclass
class AfrakSolution:
    T: Fraction
    log_plus: list          # log afrak at the C_+ nodes
    iterations: int
    residual: object
    endpoint_phase: object  # log afrak(R) / i


def solve_afrak(setup: ContourSetup, T, max_iter: int = 500, tol=None) -> AfrakSolution:
    """Fixed-point iteration for log afrak on C_+."""
    T = Fraction(T)
    M = setup.M
    with _prec(setup.digits):
        invT = 1 / _q(T)
        drive = [h * invT for h in setup.h_plus]
        Rpp = acb_mat(M, M)
        Rpm = acb_mat(M, M)
        for i in range(M):
            for j in range(M):
                Rpp[i, j] = setup.R_cc[i, j] * setup.wc[j]
                Rpm[i, j] = setup.R_cc[i, M + j] * setup.wc[M + j]
        tol = tol if tol is not None else arb(10) ** (-(setup.digits - 5))
        la = list(drive)
        res = None
        for it in range(1, max_iter + 1):
            lp = [(1 + x.exp()).log() for x in la]
            up = Rpp * _col(lp)
            um = Rpm * _col([x.conjugate() for x in lp])
            new = [drive[i] - up[i, 0] + um[i, 0] for i in range(M)]
            res = max(abs(a - b).mid() for a, b in zip(new, la))
            la = new
            if res < tol:
                break
        else:
            raise ThermalError(f"log afrak iteration did not converge (residual {res})")
        # endpoint x = R: evaluate the equation there
        x = acb(setup.R)
        _, row_c = setup.resolvent_row(x)
        h = 1 / (x * (x + acb(0, 1)))
        for l in range(M, 2 * M):
            z = setup.xc[l]
            h += row_c[0, l] * setup.wc[l] / (z * (z + acb(0, 1)))
        lp = [(1 + v.exp()).log() for v in la]
        val = h * invT
        for j in range(M):
            val -= row_c[0, j] * setup.wc[j] * lp[j]
            val += row_c[0, M + j] * setup.wc[M + j] * lp[j].conjugate()
        phase = (val / acb(0, 1))
    return AfrakSolution(T, la, it, res, phase)


def endpoint_ok(sol: AfrakSolution) -> bool:
    """|log afrak(R)/i| < pi: no Bethe root lies beyond the ends of the contour."""
    return bool(abs(sol.endpoint_phase.real) < arb.pi())


def _measures_from_afrak(setup: ContourSetup, a_plus, a_minus):
    """dmbar weights on C_+ and dm weights on C_-."""
    M = setup.M
    mu = []
    for i in range(M):
        a = a_plus[i]
        mu.append(setup.wc[i] * a / (1 + a))
    for i in range(M):
        mu.append(setup.wc[M + i] / (1 + a_minus[i]))
    return mu


def _to_numpy(M):
    return np.array([[complex(M[i, j]) for j in range(M.ncols())] for i in range(M.nrows())])


def _from_numpy(a) -> acb_mat:
    out = acb_mat(a.shape[0], a.shape[1])
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            z = a[i, j]
            out[i, j] = acb(float(z.real), float(z.imag))
    return out


def refine_solve(apply, A_double, B: acb_mat, digits: int, max_steps: int = 20) -> acb_mat:
    """Solve A X = B to the working precision by iterative refinement.

    ``apply(X)`` returns A X in ball arithmetic; the inverse of the complex128
    copy ``A_double`` turns residuals into corrections.  Every step gains about
    -log10(cond(A) 2^-53) digits.
    """
    inv = np.linalg.inv(A_double)
    X = _from_numpy(inv @ _to_numpy(B))
    scale = max(abs(B[i, j]).mid() for i in range(B.nrows()) for j in range(B.ncols()))
    tol = scale * arb(10) ** (-(digits + 3))
    for _ in range(max_steps):
        res = B - apply(X)
        err = max(abs(res[i, j]).mid() for i in range(res.nrows()) for j in range(res.ncols()))
        log.debug("refine residual %s", err.str(5, radius=False))
        if err < tol:
            return X
        X = X + _from_numpy(inv @ _to_numpy(res))
    raise ThermalError(f"iterative refinement stalled at residual {err.str(5, radius=False)}")


def omega_from_measure(setup: ContourSetup, mu):
    """omega_1 + omega_2 as x-coefficients, given the measure weights on C."""
    n = 2 * setup.M
    order = setup.order
    with _prec(setup.digits):
        mu = [m.mid() for m in mu]

        def apply(X):
            Y = acb_mat(n, order)
            for i in range(n):
                m = mu[i]
                for k in range(order):
                    Y[i, k] = m * X[i, k]
            return X + setup.R_cc * Y

        mu_d = np.array([complex(m) for m in mu])
        A_d = setup.R_cc_double() * mu_d[None, :] + np.eye(n)
        G = refine_solve(apply, A_d, setup.Fc, setup.digits)
        out = [[setup.omega1[a][b] for b in range(order)] for a in range(order)]
        two_pi = 2 * arb.pi()
        for z in range(n):
            m = mu[z] / two_pi
            for a in range(order):
                c = setup.Fc[z, a] * m
                for b in range(order):
                    out[a][b] += c * G[z, b]
    return out


def to_lambda_coefficients(wx):
    """omega_{j,k} in lambda = i x from the x-coefficients: multiply by (-i)^{j+k-2}."""
    order = len(wx)
    mI = acb(0, -1)
    return [[wx[a][b] * mI ** (a + b) for b in range(order)] for a in range(order)]


def omega_thermal_x(cfg: ThermalConfig, setup: ContourSetup | None = None):
    setup = setup or contour_setup(cfg.R, cfg.t, cfg.prec.digits, cfg.order, cfg.line, cfg.contour)
    sol = solve_afrak(setup, cfg.T, cfg.max_iter)
    with _prec(setup.digits):
        if not endpoint_ok(sol):
            raise ThermalError(f"|log afrak(R)/i| = {abs(sol.endpoint_phase.real).mid()} is not below pi; increase R")
        a_plus = [x.exp() for x in sol.log_plus]
        a_minus = [1 / x.conjugate() for x in a_plus]
        mu = _measures_from_afrak(setup, a_plus, a_minus)
    return omega_from_measure(setup, mu), sol


def omega_thermal(cfg: ThermalConfig, setup: ContourSetup | None = None) -> OmegaMatrix:
    """omega_{i,j}(T) in the lambda convention of the other backends (real parts)."""
    wx, sol = omega_thermal_x(cfg, setup)
    with _prec(cfg.prec.digits), mpmath.workdps(cfg.prec.digits):
        wl = to_lambda_coefficients(wx)
        rows = tuple(tuple(to_mpmath(v.real) for v in row) for row in wl)
    log.info("omega_T at T=%s: %d iterations, endpoint phase %s", cfg.T, sol.iterations,
             sol.endpoint_phase.real.mid().str(8, radius=False))
    return OmegaMatrix(cfg.order, rows, "thermal")


def parity_sentinel(setup: ContourSetup):
    """max |omega_1[i][j]| over i + j odd (should vanish)."""
    with _prec(setup.digits):
        return max(abs(setup.omega1[a][b]).mid() for a in range(setup.order)
                   for b in range(setup.order) if (a + b) % 2)


def afrak_from_md(setup: ContourSetup, md):
    """The contour function for finite Matsubara data: 1/afrak(i z) at the nodes.

    The function entering the equations above is the inverse of the
    Matsubara afrak = a Q(x+1) / (d Q(x-1)) after the rotation.
    """
    from .poly import evaluate

    vals = []
    with _prec(setup.digits):
        num = [_q(c) for c in md.afrak_num]
        den = [_q(c) for c in md.afrak_den]
        for z in setup.xc:
            lam = acb(0, 1) * z
            vals.append(evaluate(den, lam) / evaluate(num, lam))
    return vals[:setup.M], vals[setup.M:]
