"""The fermionic basis reproduces exact finite-Trotter-number expectation values.

A random admissible Matsubara datum (a small inhomogeneous transfer-matrix
eigenstate with rational parameters) gives two independent routes to the
same number for any local operator O on n sites:

  direct     fold the letters of every word through the Schur-basis
             algebraic Bethe ansatz actions, starting from the Slavnov
             vector, and divide by the Gaudin norm;
  fermionic  contract the solved X(n) table with minors of the rational
             omega matrix of that datum.

Both are computed in exact rational arithmetic, so they must agree exactly.

    python3 demos/02_exact_matsubara_check.py
"""

from xxxfermion import operators as ops
from xxxfermion.fermions import compute_V
from xxxfermion.matsubara import generate_md
from xxxfermion.omega import omega_md
from xxxfermion.xsolver import d_functionals, solve_x

md = generate_md(5, 2, seed=2024)
print("Matsubara datum:", md.to_text())
direct = ops.DirectEvaluator(md)

for n in range(2, 6):
    xm, _ = solve_x(n)
    D = d_functionals(n, xm, compute_V(n))
    omega = omega_md(md, order=n)
    basis = ops.invariant_basis(n)
    agree = 0
    for op in basis:
        a, b = direct.operator(op), D.expect(op, omega)
        agree += a == b
    print(f"\nn = {n}: {agree}/{len(basis)} invariant operators agree exactly")
    op = basis[-1]
    print("   e.g.", " + ".join(f"({c}) {w}" for w, c in list(op.items())[:3]), "+ ...")
    print("   value", direct.operator(op))
