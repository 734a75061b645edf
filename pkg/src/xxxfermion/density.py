"""Reduced density matrices, their spectra, entanglement entropy and EFP.

The density matrix on n sites is assembled from its irreducible pieces,

    D(n) = 2^{-n} 1 + sum_{l=2}^{n} sum_{shifts} 2^{-(n-l)} 1 (x) rho_l (x) 1,
    rho_l = sum_a <O_a> Obar_a,

where O_a runs over the irreducible invariant basis of length l and
<O_a> = sum_alpha <v_alpha> X_{alpha,a} comes from omega minors.  Every
irreducible piece is traceless on its end sites, so Tr(D(n) O) = <O> for
every invariant operator O on n sites.

D(n) commutes with the total spin, so it is block diagonal on the
highest-weight spaces M_j; a block has dimension C(n, n/2-j) - C(n, n/2-j-1)
and every eigenvalue appears with multiplicity 2j+1.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb

import mpmath

from . import operators as ops
from .fermions import FermionBasis, compute_V, expect_fermionic
from .linalg import nullspace_rational
from .numerics import Precision
from .omega import OmegaMatrix
from .xsolver import XMatrix, dual_basis, solve_x

log = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# tables

@dataclass
class Tables:
    """X(l), the fermion basis and the dual operators for l = 2..n_max."""

    entries: dict = field(default_factory=dict)     # l -> (FermionBasis, XMatrix, dual list)

    def ensure(self, n_max: int, seed: int = 0):
        for l in range(2, n_max + 1):
            if l not in self.entries:
                xm, _ = solve_x(l, seed=seed)
                self.entries[l] = (compute_V(l), xm, dual_basis(l))
                log.info("tables for l=%d: dimV=%d, dimO=%d", l, len(xm.X), len(self.entries[l][2]))
        return self

    def add(self, l: int, basis: FermionBasis, xm: XMatrix):
        self.entries[l] = (basis, xm, dual_basis(l))


_DEFAULT_TABLES = Tables()


def default_tables(n_max: int) -> Tables:
    """Process-wide tables, solved on first use."""
    return _DEFAULT_TABLES.ensure(n_max)


# ---------------------------------------------------------------------------
# expectations and assembly

def irreducible_expectations(l: int, omega, tables: Tables):
    """<O_a> for the length-l irreducible invariant basis."""
    basis, xm, _ = tables.entries[l]
    v = expect_fermionic(basis, omega)
    no = len(xm.X[0]) if xm.X else 0
    out = []
    for a in range(no):
        acc = 0
        for alpha, row in enumerate(xm.X):
            x = row[a]
            if x:
                acc = acc + _lift(x) * v[alpha]
        out.append(acc)
    return out


def _lift(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return x


def _check_backend(omega):
    if isinstance(omega, OmegaMatrix) and omega.backend == "md":
        raise ValueError("density assembly needs a symmetric backend (zero or thermal omega)")


def density_words(n: int, omega, tables: Tables | None = None) -> dict:
    """D(n) expanded over words in {i, p, m, z}^n."""
    _check_backend(omega)
    tables = tables or default_tables(n)
    out = {"i" * n: mpmath.mpf(2) ** (-n)}
    for l in range(2, n + 1):
        e = irreducible_expectations(l, omega, tables)
        dual = tables.entries[l][2]
        rho = {}
        for ea, op in zip(e, dual):
            for w, c in op.items():
                rho[w] = rho.get(w, 0) + ea * _lift(c)
        scale = mpmath.mpf(2) ** (-(n - l))
        for s in range(n - l + 1):
            for w, c in rho.items():
                key = "i" * s + w + "i" * (n - l - s)
                out[key] = out.get(key, 0) + scale * c
    return out


def expectation(D: dict, op: dict):
    """Tr(D op) for word-dict operators."""
    total = mpmath.mpf(0)
    swap = str.maketrans("pm", "mp")
    for w, c in op.items():
        d = D.get(w.translate(swap))
        if d is not None:
            total += _lift(c) * d * 2 ** (w.count("i") + w.count("z"))
    return total


# ---------------------------------------------------------------------------
# states: bit s of an integer is site s+1, 1 = spin up

def apply_word(word: str, state: int):
    """word |state> = sign |state'>, or None."""
    sign = 1
    for s, x in enumerate(word):
        bit = (state >> s) & 1
        if x == "i":
            continue
        if x == "z":
            if not bit:
                sign = -sign
        elif x == "p":
            if bit:
                return None
            state |= 1 << s
        elif x == "m":
            if not bit:
                return None
            state &= ~(1 << s)
        else:
            raise ValueError(x)
    return sign, state


def multiplicity_dim(n: int, j2: int) -> int:
    """dim M_j for 2j = j2: C(n, n/2-j) - C(n, n/2-j-1)."""
    if (n - j2) % 2 or j2 > n or j2 < 0:
        return 0
    k = (n - j2) // 2
    return comb(n, k) - (comb(n, k - 1) if k >= 1 else 0)


def spins(n: int):
    """2j values from the smallest to n."""
    return list(range(n % 2, n + 1, 2))


@lru_cache(maxsize=None)
def _hw_rational(n: int, j2: int):
    """Exact basis of ker S^+ on the S^z = j sector (rational vectors)."""
    ups = (n + j2) // 2
    states = [s for s in range(1 << n) if bin(s).count("1") == ups]
    targets = [s for s in range(1 << n) if bin(s).count("1") == ups + 1]
    tidx = {s: i for i, s in enumerate(targets)}
    rows = [[0] * len(states) for _ in targets]
    for c, s in enumerate(states):
        for site in range(n):
            if not (s >> site) & 1:
                rows[tidx[s | (1 << site)]][c] += 1
    if targets:
        basis, _ = nullspace_rational(rows, len(states))
    else:
        basis = [[Fraction(1)]]
    return states, basis


def highest_weight_basis(n: int, j2: int, prec: Precision = Precision()):
    """Orthonormal basis of M_j as sparse dicts state -> mpf.

    Exact kernel of S^+ followed by Gram-Schmidt in working precision.
    """
    states, basis = _hw_rational(n, j2)
    out = []
    with mpmath.workdps(prec.digits + 10):
        for v in basis:
            w = [_lift(x) for x in v]
            for u in out:
                d = mpmath.fsum(a * b for a, b in zip(w, u))
                w = [a - d * b for a, b in zip(w, u)]
            nrm = mpmath.sqrt(mpmath.fsum(a * a for a in w))
            out.append([a / nrm for a in w])
    return [{s: x for s, x in zip(states, u) if x != 0} for u in out]


def _apply_operator(D: dict, vec: dict):
    out = {}
    for w, c in D.items():
        for s, x in vec.items():
            r = apply_word(w, s)
            if r is None:
                continue
            sign, t = r
            out[t] = out.get(t, 0) + (c * x if sign > 0 else -(c * x))
    return out


@dataclass
class DensityBlocks:
    n: int
    blocks: dict            # 2j -> mpmath matrix

    @property
    def epsilon(self):
        return Fraction(self.n % 2, 2)

    def trace(self):
        return mpmath.fsum((j2 + 1) * sum(B[i, i] for i in range(B.rows)) for j2, B in self.blocks.items())


def density_blocks(n: int, omega, tables: Tables | None = None, prec: Precision = Precision()):
    D = density_words(n, omega, tables)
    return blocks_from_words(n, D, prec)


def blocks_from_words(n: int, D: dict, prec: Precision = Precision()) -> DensityBlocks:
    out = {}
    with mpmath.workdps(prec.digits + 10):
        for j2 in spins(n):
            U = highest_weight_basis(n, j2, prec)
            k = len(U)
            B = mpmath.matrix(k, k)
            for q, v in enumerate(U):
                Dv = _apply_operator(D, v)
                for p, u in enumerate(U):
                    B[p, q] = mpmath.fsum(x * Dv.get(s, 0) for s, x in u.items())
            # symmetrize away rounding
            for p in range(k):
                for q in range(p + 1, k):
                    m = (B[p, q] + B[q, p]) / 2
                    B[p, q] = B[q, p] = m
            out[j2] = B
    return DensityBlocks(n, out)


# ---------------------------------------------------------------------------
# spectra and entropy

@dataclass
class EntropyReport:
    n: int
    T: object
    s: object
    spectra: dict           # 2j -> eigenvalues in decreasing order
    P: object


def spectra_entropy(blocks: DensityBlocks, prec: Precision = Precision(), T=0) -> EntropyReport:
    spectra = {}
    s = mpmath.mpf(0)
    with mpmath.workdps(prec.digits + 10):
        for j2, B in blocks.blocks.items():
            if B.rows == 1:
                ev = [B[0, 0]]
            else:
                E = mpmath.eigsy(B, eigvals_only=True)
                ev = [E[i] for i in range(B.rows)]
            ev.sort(reverse=True)
            for lam in ev:
                if lam < -mpmath.mpf(10) ** -30:
                    raise ArithmeticError(f"negative eigenvalue {mpmath.nstr(lam, 5)} at 2j={j2}")
                if lam > 0:
                    s -= (j2 + 1) * lam * mpmath.log(lam)
            spectra[j2] = ev
        P = blocks.blocks[blocks.n][0, 0]
    with mpmath.workdps(prec.digits):
        return EntropyReport(blocks.n, T, +s, {k: [+x for x in v] for k, v in spectra.items()}, +P)


def entropy(n: int, omega, tables: Tables | None = None, prec: Precision = Precision(), T=0):
    return spectra_entropy(density_blocks(n, omega, tables, prec), prec, T)


def efp(n: int, omega, tables: Tables | None = None, prec: Precision = Precision()):
    """P(n) = <up...up| D(n) |up...up>; needs only the fully polarized matrix element."""
    D = density_words(n, omega, tables)
    return mpmath.fsum(c for w, c in D.items() if set(w) <= {"i", "z"})


# ---------------------------------------------------------------------------
# asymptotics and comparisons

def efp_chi(P: dict, prec: Precision = Precision()):
    """chi(n) = log P(n) + log(Gamma(1/4)^2 / (pi sqrt(2 pi))) n^2 + log(n) / 12."""
    with mpmath.workdps(prec.digits + 10):
        g = mpmath.log(mpmath.gamma(mpmath.mpf(1) / 4) ** 2 / (mpmath.pi * mpmath.sqrt(2 * mpmath.pi)))
        return {n: mpmath.log(mpmath.mpf(p)) + g * n * n + mpmath.log(n) / 12 for n, p in sorted(P.items())}


def efp_asymptotics(P: dict, prec: Precision = Precision()):
    """Smoothed estimates exp((chi(n) + 2 chi(n-1) + chi(n-2))/4) for every window."""
    chi = efp_chi(P, prec)
    est = {}
    with mpmath.workdps(prec.digits + 10):
        for n in chi:
            if n - 1 in chi and n - 2 in chi:
                est[n] = mpmath.exp((chi[n] + 2 * chi[n - 1] + chi[n - 2]) / 4)
    return chi, est


def cft_zero(entropies: dict):
    """Least-squares C in s(n) = log(n)/3 + C and the residuals."""
    d = {n: s - mpmath.log(n) / 3 for n, s in entropies.items()}
    C = mpmath.fsum(d.values()) / len(d)
    return C, {n: v - C for n, v in d.items()}


def cft_thermal(nT) -> object:
    """(1/3) log(sinh(nT) / nT)."""
    x = _lift(Fraction(nT)) if isinstance(nT, (int, Fraction)) else mpmath.mpf(nT)
    if x == 0:
        return mpmath.mpf(0)
    return mpmath.log(mpmath.sinh(x) / x) / 3
