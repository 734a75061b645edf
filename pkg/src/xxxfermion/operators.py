"""Local operators on n sites and their direct Matsubara expectation values.

Operators are dicts mapping words to exact coefficients.  A word is a string
over the alphabet

    i = identity,  p = sigma^+,  m = sigma^-,  z = sigma^3

with site 1 leftmost.  Under the trace against the monodromy matrix the
letters become, per site, T = A + D, Z = A - D, C and B respectively
(Tr(E_12 T) = T_21 = C and Tr(E_21 T) = T_12 = B).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product

import flint

from . import schur
from .linalg import nullspace_rational, large_primes
from .matsubara import MatsubaraData

LETTER_TO_MONODROMY = {"i": "T", "z": "Z", "p": "C", "m": "B"}

_SWAP_PM = str.maketrans("pm", "mp")

# commutator [sigma^+, x] as (letter, coefficient) or None
_AD_PLUS = {"i": None, "p": None, "m": ("z", 1), "z": ("p", -2)}


# ---------------------------------------------------------------------------
# words

def is_irreducible(word: str) -> bool:
    return bool(word) and word[0] != "i" and word[-1] != "i"


def charge(word: str) -> int:
    return word.count("p") - word.count("m")


def enumerate_irreducible_words(n: int):
    """Words with no identity at either end, #p = #m and an even number of z."""
    if n < 2:
        return []
    out = []
    for w in product("impz", repeat=n):
        if w[0] == "i" or w[-1] == "i":
            continue
        if w.count("p") != w.count("m") or w.count("z") % 2:
            continue
        out.append("".join(w))
    out.sort()
    return out


def count_irreducible_words(n: int) -> int:
    """Same count as len(enumerate_irreducible_words(n)) without listing.

    Counts by the number k of non-identity letters: the two end letters are
    fixed non-identity, C(n-2, k-2) ways for the rest, and charge-zero
    C-even fillings of the k slots.
    """
    from math import comb, factorial

    if n < 2:
        return 0
    total = 0
    for k in range(2, n + 1, 2):
        fill = sum(factorial(k) // (factorial(a) ** 2 * factorial(k - 2 * a))
                   for a in range(k // 2 + 1))
        total += comb(n - 2, k - 2) * fill
    return total


def _charged_words(k, q):
    """Words in {p, m, z}^k of charge q (lexicographic)."""
    return ["".join(w) for w in product("mpz", repeat=k) if w.count("p") - w.count("m") == q]


def ad_plus(op: dict) -> dict:
    """Adjoint action of the total sigma^+ on an operator."""
    out = {}
    for w, c in op.items():
        for s, x in enumerate(w):
            img = _AD_PLUS[x]
            if img is None:
                continue
            nw = w[:s] + img[0] + w[s + 1:]
            v = out.get(nw, 0) + c * img[1]
            if v == 0:
                out.pop(nw, None)
            else:
                out[nw] = v
    return out


def _ad_plus_entries(k):
    """Sparse matrix of ad(S^+) from charge-0 to charge-1 words on k letters."""
    cols = _charged_words(k, 0)
    rows = _charged_words(k, 1)
    ridx = {w: i for i, w in enumerate(rows)}
    entries = {}
    for j, w in enumerate(cols):
        for nw, c in ad_plus({w: 1}).items():
            entries[(ridx[nw], j)] = entries.get((ridx[nw], j), 0) + c
    return entries, cols, rows


@lru_cache(maxsize=None)
def dense_invariants(k: int):
    """Basis of sl2-invariant operators built from k non-identity letters.

    Returned as a tuple of dicts word -> Fraction, the canonical null-space
    basis of ad(S^+) on charge-zero words (one vector per free column).
    """
    if k == 0:
        return ({"": Fraction(1)},)
    if k % 2:
        return ()
    entries, cols, rows = _ad_plus_entries(k)
    M = [[0] * len(cols) for _ in rows]
    for (i, j), c in entries.items():
        M[i][j] = c
    basis, _free = nullspace_rational(M, len(cols))
    return tuple({cols[j]: x for j, x in enumerate(v) if x != 0} for v in basis)


def dense_invariant_count(k: int, primes=2) -> int:
    """dim of the k-letter invariant space from modular ranks (no basis)."""
    if k == 0:
        return 1
    if k % 2:
        return 0
    entries, cols, rows = _ad_plus_entries(k)
    ranks = set()
    for p in large_primes(primes):
        M = flint.nmod_mat(len(rows), len(cols), p)
        for (i, j), c in entries.items():
            M[i, j] = c % p
        ranks.add(M.rank())
    if len(ranks) != 1:
        raise ArithmeticError("modular ranks disagree; use more primes")
    return len(cols) - ranks.pop()


def _place(dense_word, support, n):
    letters = ["i"] * n
    for pos, x in zip(support, dense_word):
        letters[pos] = x
    return "".join(letters)


def support_patterns(n: int):
    """Position sets of non-identity letters for irreducible n-site words."""
    if n < 2:
        return []
    out = []
    inner = range(1, n - 1)
    for k in range(2, n + 1, 2):
        for mid in combinations(inner, k - 2):
            out.append((0, *mid, n - 1))
    return out


@lru_cache(maxsize=None)
def invariant_basis(n: int):
    """Basis O_a of invariant, C-even, translationally irreducible operators.

    Each basis element is a k-letter invariant placed on a support pattern
    containing both ends; identities fill the remaining sites.
    """
    out = []
    for S in support_patterns(n):
        for inv in dense_invariants(len(S)):
            out.append({_place(w, S, n): c for w, c in inv.items()})
    return tuple(out)


def invariant_dimension(n: int) -> int:
    """dim of the irreducible invariant space, using modular ranks."""
    from math import comb

    if n < 2:
        return 0
    return sum(comb(n - 2, k - 2) * dense_invariant_count(k) for k in range(2, n + 1, 2))


def word_matrix_L(n: int):
    """The matrix L with O_a = sum_A L[a][A] O_A over irreducible words."""
    words = enumerate_irreducible_words(n)
    idx = {w: i for i, w in enumerate(words)}
    L = []
    for op in invariant_basis(n):
        row = {}
        for w, c in op.items():
            row[idx[w]] = c
        L.append(row)
    return words, L


# ---------------------------------------------------------------------------
# traces and reduction

def trace_product(op1: dict, op2: dict) -> Fraction:
    """Tr(op1 op2) over the full tensor product.

    Per site Tr(p m) = Tr(m p) = 1 and Tr(z z) = Tr(i i) = 2; every other
    pair of letters is traceless, so a word only pairs with its p<->m swap.
    """
    total = Fraction(0)
    for w, c in op1.items():
        c2 = op2.get(w.translate(_SWAP_PM))
        if c2 is not None:
            total += c * c2 * 2 ** (w.count("i") + w.count("z"))
    return total


def embed(op: dict, left: int, right: int) -> dict:
    """Pad an operator with identities: i^left (x) op (x) i^right."""
    return {"i" * left + w + "i" * right: c for w, c in op.items()}


def translational_reduce(op: dict) -> dict:
    """Split an operator into irreducible components keyed by their length.

    Identity padding at both ends is stripped from every word; the scalar
    part (the all-identity word) becomes the length-0 component {"": c}.
    Expectation values in a translation invariant state are preserved:
    <op> = sum_k <component_k>.
    """
    out = {}
    for w, c in op.items():
        core = w.strip("i")
        comp = out.setdefault(len(core), {})
        v = comp.get(core, 0) + c
        if v == 0:
            comp.pop(core, None)
        else:
            comp[core] = v
    return {k: v for k, v in sorted(out.items()) if v}


# ---------------------------------------------------------------------------
# direct evaluation against Matsubara data

def word_to_monodromy(word: str) -> str:
    return "".join(LETTER_TO_MONODROMY[x] for x in word)


class DirectEvaluator:
    """Expectation values <Psi| Tr(O T_1...T_n) |Psi> / (<Psi|Psi> Lambda(0)^n).

    Words are folded left to right through the Schur-basis actions starting
    from the Slavnov vector.  Intermediate vectors are cached by their
    monodromy-letter prefix (letters T, Z, B, C), so words sharing a prefix
    share the work.
    """

    def __init__(self, md: MatsubaraData, cache: bool = True):
        self.md = md
        self.norm = schur.gaudin_norm(md)
        self.lam0 = md.Lambda0()
        if self.lam0 == 0 or md.Q(0) == 0:
            raise ValueError("Lambda(0) or Q(0) vanishes")
        self._start = schur.slavnov_vector(md)
        self._cache = {"": self._start} if cache else None
        self._a0 = md.a(0)
        self._d0 = md.d(0)

    def _step(self, letter, Y):
        md = self.md
        if letter == "T":
            return schur.act_A(Y, md.a_poly) + schur.act_D(Y, md.d_poly)
        if letter == "Z":
            return schur.act_A(Y, md.a_poly) - schur.act_D(Y, md.d_poly)
        if letter == "B":
            return schur.act_B(Y, md.a_poly, md.d_poly, self._a0, self._d0)
        if letter == "C":
            if Y.q == 0:
                return None
            return schur.act_C(Y)
        raise ValueError(letter)

    def _vector(self, letters: str):
        if self._cache is None:
            Y = self._start
            for x in letters:
                Y = self._step(x, Y)
                if Y is None or not Y.terms:
                    return None
            return Y
        if letters in self._cache:
            return self._cache[letters]
        parent = self._vector(letters[:-1])
        Y = None if parent is None else self._step(letters[-1], parent)
        if Y is not None and not Y.terms:
            Y = None
        self._cache[letters] = Y
        return Y

    def clear(self):
        if self._cache is not None:
            self._cache = {"": self._start}

    def raw(self, letters: str) -> Fraction:
        """<Psi| X_1 ... X_N |Psi> for a monodromy-letter string."""
        if letters.count("B") != letters.count("C"):
            return Fraction(0)
        Y = self._vector(letters)
        if Y is None:
            return Fraction(0)
        if Y.q != self.md.m:
            raise AssertionError("charge bookkeeping broken")
        if self.md.m == 0:
            return Y.terms.get((), Fraction(0))
        return schur.eval_schur(Y, list(self.md.roots))

    def word(self, word: str) -> Fraction:
        return self.raw(word_to_monodromy(word)) / (self.norm * self.lam0 ** len(word))

    def words(self, words):
        """Evaluate many words; sorted order maximizes prefix reuse."""
        out = {}
        for w in sorted(words):
            out[w] = self.word(w)
        return out

    def operator(self, op: dict) -> Fraction:
        return sum((c * self.word(w) for w, c in op.items()), Fraction(0))


def expect_direct(md: MatsubaraData, op: dict, cache: bool = True) -> Fraction:
    return DirectEvaluator(md, cache=cache).operator(op)
