"""Determination of X(n) from exact expectation values on random Matsubara data.

Every admissible Matsubara datum gives one linear equation per basis
operator,

    <O_a> = sum_alpha <v_alpha> X_{alpha, a},

with the left side from the Schur engine and <v_alpha> from the omega minors.
Stacking enough data gives an overdetermined exact system A X = B which is
row reduced; rows beyond the rank of A must vanish identically in B.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

import flint

from . import operators as ops
from .fermions import FermionBasis, compute_V, expect_fermionic
from .linalg import fmpq_to_fraction, to_fmpq_mat
from .matsubara import InadmissibleData, MatsubaraData, generate_md
from .omega import omega_md

log = logging.getLogger(__name__)

# (L, m, count) batches used for n = 10 in the published run
PUBLISHED_SCHEDULE_10 = (
    (1, 0, 20), (2, 0, 200), (3, 0, 300), (4, 0, 90), (5, 0, 10),
    (2, 1, 10), (3, 1, 200), (4, 1, 325), (5, 1, 100),
    (4, 2, 10), (5, 2, 35), (6, 2, 7),
)


class ConsistencyError(ArithmeticError):
    """A row of B is not in the span predicted by the rows of A."""


def ladder(max_L: int = 6, max_m: int = 2):
    """(L, m) pairs cheapest first: by particle number, then length."""
    return [(L, m) for m in range(max_m + 1) for L in range(max(1, 2 * m), max_L + 1)]


# ---------------------------------------------------------------------------
# rows

class RowBuilder:
    """Builds (A_row, B_row) for one Matsubara datum at fixed n."""

    def __init__(self, n: int, basis: FermionBasis | None = None):
        self.n = n
        self.basis = basis if basis is not None else compute_V(n)
        self.operators = ops.invariant_basis(n)
        words = set()
        for op in self.operators:
            words.update(op)
        self.words = sorted(words)

    def row(self, md: MatsubaraData):
        W = omega_md(md, self.n)
        a_row = expect_fermionic(self.basis, W)
        ev = ops.DirectEvaluator(md)
        vals = ev.words(self.words)
        b_row = [sum((c * vals[w] for w, c in op.items()), Fraction(0)) for op in self.operators]
        return a_row, b_row


class _Echelon:
    """Incremental exact echelon form used only to track the rank of A."""

    def __init__(self):
        self.rows = {}     # pivot column -> normalized row

    def add(self, row) -> bool:
        v = list(row)
        for p, r in self.rows.items():
            if v[p] != 0:
                f = v[p]
                v = [x - f * y for x, y in zip(v, r)]
        piv = next((j for j, x in enumerate(v) if x != 0), None)
        if piv is None:
            return False
        inv = 1 / v[piv]
        v = [x * inv for x in v]
        for p, r in self.rows.items():
            if r[piv] != 0:
                f = r[piv]
                self.rows[p] = [x - f * y for x, y in zip(r, v)]
        self.rows[piv] = v
        return True

    @property
    def rank(self):
        return len(self.rows)


@dataclass
class LinearSystem:
    n: int
    A: list = field(default_factory=list)
    B: list = field(default_factory=list)
    data: list = field(default_factory=list)            # MatsubaraData per row
    progress: list = field(default_factory=list)        # (L, m, rows, rank) per batch


def _draw(L, m, seed):
    """Admissible md for (L, m); bumps the seed on inadmissible draws."""
    for k in range(1000):
        try:
            return generate_md(L, m, seed + k * 7919)
        except InadmissibleData:
            continue
    raise InadmissibleData(f"no admissible data for L={L}, m={m}")


def build_system(n: int, schedule=None, seed: int = 0, holdout: int = 5,
                 stall: int = 3, max_L: int = 6, basis: FermionBasis | None = None,
                 builder: RowBuilder | None = None) -> LinearSystem:
    """Assemble the system.

    With an explicit schedule of (L, m, count) batches every batch is used in
    full.  Without one the (L, m) ladder is walked; inside a rung equations
    are added until ``stall`` consecutive ones leave the rank unchanged, and
    the walk ends once the rank reaches dim V plus ``holdout`` more rows.
    """
    rb = builder or RowBuilder(n, basis)
    dimV = rb.basis.dim_V
    sysm = LinearSystem(n)
    ech = _Echelon()
    counter = 0

    def push(L, m):
        nonlocal counter
        md = _draw(L, m, seed * 1_000_003 + counter)
        counter += 1
        a, b = rb.row(md)
        sysm.A.append(a)
        sysm.B.append(b)
        sysm.data.append(md)
        return ech.add(a)

    if schedule is not None:
        for L, m, count in schedule:
            for _ in range(count):
                push(L, m)
            sysm.progress.append((L, m, len(sysm.A), ech.rank))
            log.info("batch L=%d m=%d: %d rows, rank %d", L, m, len(sysm.A), ech.rank)
        return sysm

    extra = 0
    for L, m in ladder(max_L):
        if 2 * m > L:
            continue
        idle = 0
        while idle < stall:
            grew = push(L, m)
            if ech.rank == dimV and not grew:
                extra += 1
            idle = 0 if grew else idle + 1
            if extra >= holdout:
                break
        sysm.progress.append((L, m, len(sysm.A), ech.rank))
        log.info("rung L=%d m=%d: %d rows, rank %d", L, m, len(sysm.A), ech.rank)
        if extra >= holdout:
            break
    return sysm


# ---------------------------------------------------------------------------
# reduction

@dataclass(frozen=True)
class XMatrix:
    n: int
    X: tuple            # dimV rows, dimO columns
    rank: int
    equations: int
    residual_rows: int

    def to_text(self) -> str:
        lines = [f"X {self.n} {len(self.X)} {len(self.X[0]) if self.X else 0} {self.rank} {self.equations}"]
        for i, row in enumerate(self.X):
            for j, x in enumerate(row):
                if x != 0:
                    lines.append(f"{i} {j} {x}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "XMatrix":
        lines = text.strip("\n").split("\n")
        _, n, r, c, rank, eqs = lines[0].split()
        r, c = int(r), int(c)
        X = [[Fraction(0)] * c for _ in range(r)]
        for line in lines[1:]:
            i, j, x = line.split()
            X[int(i)][int(j)] = Fraction(x)
        return cls(int(n), tuple(tuple(row) for row in X), int(rank), int(eqs), 0)


def gauss_reduce(A, B, dimV: int | None = None, n: int = 0) -> XMatrix:
    """Row reduce [A | B] exactly and read off X from the block form [[1, X], [0, 0]]."""
    if not A:
        raise ValueError("empty system")
    nv = len(A[0])
    no = len(B[0])
    M = to_fmpq_mat([list(a) + list(b) for a, b in zip(A, B)], nv + no)
    R, rank = M.rref()
    pivots = []
    for i in range(rank):
        pivots.append(next(j for j in range(nv + no) if R[i, j] != 0))
    bad = [p for p in pivots if p >= nv]
    rank_A = rank - len(bad)
    if bad:
        row = _offending_row(A, B)
        raise ConsistencyError(f"residual row nonzero; first inconsistent equation is row {row}")
    if dimV is not None and rank_A != dimV:
        raise ArithmeticError(f"rank {rank_A} of A differs from dim V = {dimV}")
    if pivots != list(range(rank_A)):
        raise ArithmeticError("A has dependent columns; V basis not independent on data")
    X = tuple(tuple(fmpq_to_fraction(R[i, nv + j]) for j in range(no)) for i in range(rank_A))
    return XMatrix(n, X, rank_A, len(A), 0)


def _offending_row(A, B):
    """Smallest k such that rows 0..k are already inconsistent."""
    ech = _Echelon()
    for k, (a, b) in enumerate(zip(A, B)):
        ech.add(list(a) + list(b))
        sub = _Echelon()
        for a2 in A[:k + 1]:
            sub.add(a2)
        if ech.rank != sub.rank:
            return k
    return -1


def residual_check(xm: XMatrix, a_row, b_row) -> bool:
    """Held-out equation: b_row == a_row . X exactly."""
    for j in range(len(b_row)):
        if sum((a_row[i] * xm.X[i][j] for i in range(len(a_row))), Fraction(0)) != b_row[j]:
            return False
    return True


def solve_x(n: int, schedule=None, seed: int = 0, **kw) -> tuple[XMatrix, LinearSystem]:
    sysm = build_system(n, schedule=schedule, seed=seed, **kw)
    dimV = len(sysm.A[0])
    xm = gauss_reduce(sysm.A, sysm.B, dimV=dimV, n=n)
    return xm, sysm


# ---------------------------------------------------------------------------
# dual basis and the functionals D(n)_{I,J}

def gram_matrix(n: int):
    basis = ops.invariant_basis(n)
    return [[ops.trace_product(a, b) for b in basis] for a in basis]


def dual_basis(n: int):
    """Operators Obar_a with Tr(O_a Obar_b) = delta_ab inside the invariant span."""
    basis = ops.invariant_basis(n)
    G = to_fmpq_mat(gram_matrix(n))
    Gi = G.inv()
    out = []
    for b in range(len(basis)):
        op = {}
        for a, Oa in enumerate(basis):
            c = fmpq_to_fraction(Gi[b, a])
            if c == 0:
                continue
            for w, x in Oa.items():
                v = op.get(w, 0) + c * x
                if v == 0:
                    op.pop(w, None)
                else:
                    op[w] = v
        out.append(op)
    return out


@dataclass(frozen=True)
class DFunctionals:
    """D(n)_{I,J}(O) = sum_a T[(I,J)][a] Tr(Obar_a O), T = F^t X."""

    n: int
    pairs: tuple
    T: tuple            # rows indexed like pairs, columns like the operator basis
    dual: tuple         # Obar_a as word dicts

    def coordinates(self, op: dict):
        """Tr(Obar_a op) for every a."""
        return [ops.trace_product(d, op) for d in self.dual]

    def apply(self, op: dict):
        """Vector of D_{I,J}(op) over all pairs."""
        y = self.coordinates(op)
        return [sum((t * c for t, c in zip(row, y) if t), Fraction(0)) for row in self.T]

    def expect(self, op: dict, omega):
        from .fermions import omega_minors

        vals = self.apply(op)
        minors = omega_minors(omega, self.pairs)
        acc = 0
        for v, w in zip(vals, minors):
            if v:
                acc = acc + v * w
        return acc

    def to_text(self) -> str:
        lines = [f"D {self.n} {len(self.pairs)} {len(self.dual)}"]
        for r, row in enumerate(self.T):
            for a, x in enumerate(row):
                if x != 0:
                    lines.append(f"{r} {a} {x}")
        return "\n".join(lines) + "\n"


def d_functionals(n: int, xm: XMatrix, basis: FermionBasis) -> DFunctionals:
    F = basis.F
    npairs = len(basis.pairs)
    no = len(xm.X[0]) if xm.X else 0
    T = [[Fraction(0)] * no for _ in range(npairs)]
    for alpha, frow in enumerate(F):
        xrow = xm.X[alpha]
        for p, f in enumerate(frow):
            if f == 0:
                continue
            Tp = T[p]
            for a, x in enumerate(xrow):
                if x:
                    Tp[a] += f * x
    return DFunctionals(n, basis.pairs, tuple(tuple(r) for r in T), tuple(dual_basis(n)))


def mutate_basis_sign(basis: FermionBasis, pair_index: int) -> FermionBasis:
    """Copy of a fermion basis with the sign of one pair column flipped."""
    F = tuple(tuple(-x if j == pair_index else x for j, x in enumerate(row)) for row in basis.F)
    return FermionBasis(basis.n, basis.pairs, F)


def consistency_report(n: int, seed: int = 0, holdout_data: int = 3, **kw):
    """Solve X(n) and test it on fresh data; returns a dict summary."""
    xm, sysm = solve_x(n, seed=seed, **kw)
    rb = RowBuilder(n)
    held = []
    for k in range(holdout_data):
        L, m = [(3, 0), (3, 1), (4, 2), (5, 1)][k % 4]
        md = _draw(L, m, 10**7 + 31 * seed + k)
        a, b = rb.row(md)
        held.append(residual_check(xm, a, b))
    return {"n": n, "equations": xm.equations, "rank": xm.rank, "dimV": rb.basis.dim_V,
            "residual_rows": xm.residual_rows, "held_out_ok": all(held), "progress": sysm.progress}
