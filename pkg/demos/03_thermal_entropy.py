"""Finite-temperature omega and the thermal growth of entanglement.

Solve the nonlinear integral equation for the auxiliary function on a
coarse contour (small grids, 25 digits, so this runs in a minute or two),
build omega(T) and compare the entropy excess s_T(n) - s_0(n) of a
4-site segment with the conformal prediction (1/3) log(sinh(nT)/(nT)).
The production grids used by the CLI are much finer; this only shows the
pipeline end to end.

    python3 demos/03_thermal_entropy.py
"""

from fractions import Fraction

import mpmath

from xxxfermion import density as dens
from xxxfermion import thermal as th
from xxxfermion.numerics import DEQuadrature, Precision
from xxxfermion.omega import omega_zero

digits, n = 25, 4
prec = Precision(digits)
mpmath.mp.dps = digits
setup = th.ContourSetup.build(1, Fraction(2, 5), DEQuadrature(Fraction(1, 8), 70),
                              DEQuadrature(Fraction(1, 8), 80), digits=digits, order=n)
with th._prec(digits):
    print("parity sentinel (odd entries of the T-independent part):",
          th.parity_sentinel(setup).str(3, radius=False))

tables = dens.default_tables(n)
s0 = dens.entropy(n, omega_zero(n, prec), tables, prec).s
print(f"s_0({n}) = {mpmath.nstr(s0, 12)}\n")
print(" T       omega_11          s_T - s_0        CFT")
for T in (Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)):
    W = th.omega_thermal(th.ThermalConfig(T, R=1, prec=prec, order=n), setup)
    s = dens.entropy(n, W, tables, prec, T).s
    print(f" {str(T):<6} {mpmath.nstr(W[0][0], 12):<17} {mpmath.nstr(s - s0, 8):<16} "
          f"{mpmath.nstr(dens.cft_thermal(n * T), 8)}")
print("\nomega_11 tends to 2 log 2 - 1/2 =", mpmath.nstr(2 * mpmath.log(2) - 0.5, 12), "as T -> 0")
