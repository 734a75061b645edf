"""Fermionic description of the invariant operators.

States b*_I c*_J . 1 are stored as pairs (I, J) of increasing tuples.  The
two families anticommute with each other as well as within themselves; the
normal order is all b* (increasing index) followed by all c* (increasing
index).  Operators act from the left.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .linalg import det_exact, rref_rational, nullspace_rational


# ---------------------------------------------------------------------------
# index pairs

def _dominated(I, J):
    return all(i <= j for i, j in zip(I, J))


@lru_cache(maxsize=None)
def enumerate_H(n: int):
    """Basis pairs of H^(n): #I = #J <= n/2, indices <= n, |I|+|J| even, I <= J.

    Ordered by length, then I, then J.
    """
    out = []
    for k in range(n // 2 + 1):
        subsets = list(combinations(range(1, n + 1), k))
        for I in subsets:
            for J in subsets:
                if (sum(I) + sum(J)) % 2 == 0 and _dominated(I, J):
                    out.append((I, J))
    return tuple(out)


def _pairs_free(n, kb, kc):
    """All pairs with #I = kb, #J = kc and indices <= n, no further conditions."""
    return [(I, J) for I in combinations(range(1, n + 1), kb)
            for J in combinations(range(1, n + 1), kc)]


# ---------------------------------------------------------------------------
# creation / annihilation on single basis states

def _remove(T, k):
    """Remove k from T; return (position, new tuple) or None."""
    try:
        pos = T.index(k)
    except ValueError:
        return None
    return pos, T[:pos] + T[pos + 1:]


def apply_b(k, state):
    I, J = state
    r = _remove(I, k)
    if r is None:
        return None
    pos, I2 = r
    return (-1) ** pos, (I2, J)


def apply_c(k, state):
    I, J = state
    r = _remove(J, k)
    if r is None:
        return None
    pos, J2 = r
    return (-1) ** (len(I) + pos), (I, J2)


def apply_cstar(k, state):
    I, J = state
    if k in J:
        return None
    below = sum(1 for j in J if j < k)
    J2 = tuple(sorted(J + (k,)))
    return (-1) ** (len(I) + below), (I, J2)


def _apply_seq(ops, state):
    """Apply (fn, index) operators in listed order; None if the state is annihilated."""
    sign = 1
    for fn, k in ops:
        r = fn(k, state)
        if r is None:
            return None
        s, state = r
        sign *= s
    return sign, state


def Q_action(m, state):
    """Q_m = sum_{j=1}^{m-1} c_j b_{m-j} on a basis state; returns dict."""
    out = {}
    for j in range(1, m):
        r = _apply_seq([(apply_b, m - j), (apply_c, j)], state)
        if r is not None:
            s, st = r
            out[st] = out.get(st, 0) + s
    return {k: v for k, v in out.items() if v}


def M_action(state, n):
    """M = sum_i c*_i b_i on a basis state (indices restricted to <= n)."""
    out = {}
    for i in range(1, n + 1):
        r = _apply_seq([(apply_b, i), (apply_cstar, i)], state)
        if r is not None:
            s, st = r
            out[st] = out.get(st, 0) + s
    return {k: v for k, v in out.items() if v}


# ---------------------------------------------------------------------------
# the subspace V^(n)

@dataclass(frozen=True)
class FermionBasis:
    n: int
    pairs: tuple        # basis of H^(n)
    F: tuple            # rows v_alpha as tuples of Fractions over pairs

    @property
    def dim_H(self):
        return len(self.pairs)

    @property
    def dim_V(self):
        return len(self.F)

    def to_text(self) -> str:
        lines = [f"{self.n} {self.dim_H} {self.dim_V}"]
        for I, J in self.pairs:
            lines.append(f"{','.join(map(str, I))};{','.join(map(str, J))}")
        for row in self.F:
            lines.append(" ".join(_fmt(x) for x in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "FermionBasis":
        lines = text.strip("\n").split("\n")
        n, dh, dv = (int(x) for x in lines[0].split())
        pairs = []
        for line in lines[1:1 + dh]:
            a, b = line.split(";")
            pairs.append((tuple(int(x) for x in a.split(",") if x),
                          tuple(int(x) for x in b.split(",") if x)))
        F = tuple(tuple(Fraction(x) for x in line.split()) for line in lines[1 + dh:1 + dh + dv])
        return cls(n, tuple(pairs), F)


def _fmt(x):
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _charge2_space(n):
    """Pairs spanning the charge-2 source of M: #I = #J + 2, #I - 1 <= n/2."""
    out = []
    for kc in range(0, n // 2):
        out.extend(_pairs_free(n, kc + 2, kc))
    return out


def _target_space(n):
    """Charge-zero pairs reachable from H^(n) by one Q_m (no parity condition)."""
    out = []
    for k in range(0, n // 2):
        out.extend(_pairs_free(n, k, k))
    return out


def q_constraint_rows(n, m_values=None):
    """Rows of the linear conditions Q_m v in M(charge-2 space), m = n+1..2n-1.

    Returns a list of dense rows over enumerate_H(n).  The image of M is
    eliminated by projecting onto a complement: a row vector y with y M = 0
    composed with Q_m gives one condition y Q_m v = 0.
    """
    pairs = enumerate_H(n)
    if m_values is None:
        m_values = range(n + 1, 2 * n)
    target = _target_space(n)
    tidx = {st: i for i, st in enumerate(target)}
    src2 = _charge2_space(n)
    # matrix of M: columns = src2, rows = target
    Mcols = []
    for st in src2:
        img = M_action(st, n)
        Mcols.append({tidx[t]: c for t, c in img.items() if t in tidx})
    # left null space of M: y with y^T M = 0 <=> M^T y = 0
    MT = [[0] * len(target) for _ in src2]
    for r, col in enumerate(Mcols):
        for i, c in col.items():
            MT[r][i] = c
    if src2:
        Y, _ = nullspace_rational(MT, len(target))
    else:
        Y = [[Fraction(int(i == j)) for j in range(len(target))] for i in range(len(target))]
    rows = []
    for m in m_values:
        # matrix of Q_m: target x pairs
        Qcols = [Q_action(m, st) for st in pairs]
        for y in Y:
            row = []
            for col in Qcols:
                acc = Fraction(0)
                for t, c in col.items():
                    i = tidx.get(t)
                    if i is not None and y[i] != 0:
                        acc += y[i] * c
                row.append(acc)
            if any(row):
                rows.append(row)
    return rows


@lru_cache(maxsize=None)
def compute_V(n: int) -> FermionBasis:
    """Basis of V^(n) in reduced echelon form over the H^(n) pairs."""
    pairs = enumerate_H(n)
    rows = q_constraint_rows(n)
    if rows:
        basis, free = nullspace_rational(rows, len(pairs))
    else:
        basis = [[Fraction(int(i == j)) for j in range(len(pairs))] for i in range(len(pairs))]
    # canonical echelon form of the basis itself
    R, _piv = rref_rational(basis, len(pairs))
    return FermionBasis(n, pairs, tuple(tuple(r) for r in R))


def in_image_of_M(vec: dict, n: int) -> bool:
    """Whether a charge-zero vector (dict pair -> coeff) lies in M(charge-2)."""
    target = _target_space(n)
    tidx = {st: i for i, st in enumerate(target)}
    src2 = _charge2_space(n)
    cols = []
    for st in src2:
        col = [Fraction(0)] * len(target)
        for t, c in M_action(st, n).items():
            if t in tidx:
                col[tidx[t]] += c
        cols.append(col)
    v = [Fraction(0)] * len(target)
    for t, c in vec.items():
        v[tidx[t]] += c
    base = [list(r) for r in zip(*cols)] if cols else [[] for _ in target]
    _, piv1 = rref_rational(base, len(cols)) if cols else ([], [])
    aug = [base[i] + [v[i]] for i in range(len(target))]
    _, piv2 = rref_rational(aug, len(cols) + 1)
    return len(piv1) == len(piv2)


def apply_Q_to_vector(m, row, pairs):
    out = {}
    for c, st in zip(row, pairs):
        if c == 0:
            continue
        for t, s in Q_action(m, st).items():
            out[t] = out.get(t, 0) + c * s
    return {k: v for k, v in out.items() if v}


# ---------------------------------------------------------------------------
# expectation values

def omega_minor(omega, pair):
    """det of omega[i_p][j_q] (1-based indices); the empty pair gives 1."""
    I, J = pair
    if not I:
        return omega[0][0] * 0 + 1      # unit of the entry type (Fraction or mpf)
    M = [[omega[i - 1][j - 1] for j in J] for i in I]
    return det_exact(M)


def omega_minors(omega, pairs):
    return [omega_minor(omega, p) for p in pairs]


def expect_fermionic(basis: FermionBasis, omega):
    """<v_alpha> = sum F_{alpha,(I,J)} omega_{I,J} for every basis row."""
    minors = omega_minors(omega, basis.pairs)
    out = []
    for row in basis.F:
        acc = 0
        for f, w in zip(row, minors):
            if f != 0:
                acc = acc + f * w
        out.append(acc)
    return out
