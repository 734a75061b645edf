"""Ground-state entanglement of short segments of the XXX chain.

Starting from the T = 0 omega matrix (closed form in log 2 and odd zeta
values), build the reduced density matrix of n consecutive sites for
n = 2..6, print its SU(2)-resolved spectrum, the von Neumann entropy and
the emptiness formation probability, and finally compare with the
conformal log(n)/3 law and the EFP asymptotics.

    python3 demos/01_zero_temperature.py
"""

import time

import mpmath

from xxxfermion import density as dens
from xxxfermion.numerics import Precision
from xxxfermion.omega import omega_zero

prec = Precision(40)
mpmath.mp.dps = prec.digits

W = omega_zero(10, prec)
print("omega_11 =", mpmath.nstr(W[0][0], 20), " (2 log 2 - 1/2 =", mpmath.nstr(2 * mpmath.log(2) - 0.5, 20), ")")
print("omega_22 =", mpmath.nstr(W[1][1], 20), " (1 - 3 zeta(3) =", mpmath.nstr(1 - 3 * mpmath.zeta(3), 20), ")")

tables = dens.default_tables(6)     # solves X(2..6) exactly on first use
entropies, efps = {}, {}
for n in range(2, 7):
    t0 = time.time()
    rep = dens.entropy(n, W, tables, prec)
    entropies[n], efps[n] = rep.s, rep.P
    print(f"\nn = {n}   s = {mpmath.nstr(rep.s, 15)}   P = {mpmath.nstr(rep.P, 15)}   ({time.time() - t0:.1f} s)")
    for j2, ev in sorted(rep.spectra.items()):
        print(f"   j = {j2 / 2:<4} mult {j2 + 1}:", ", ".join(mpmath.nstr(x, 10) for x in ev))

C, resid = dens.cft_zero(entropies)
print("\nfit s(n) = log(n)/3 + C:  C =", mpmath.nstr(C, 8))
for n, r in resid.items():
    print(f"   n = {n}: residual {mpmath.nstr(r, 3)}")

_, est = dens.efp_asymptotics(efps, prec)
print("\nsmoothed EFP amplitude estimates (approaching ~0.8413 as n grows):")
for n, v in est.items():
    print(f"   window ending at n = {n}: {mpmath.nstr(v, 10)}")
