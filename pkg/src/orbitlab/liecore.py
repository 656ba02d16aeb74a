"""Type A_{n-1} combinatorics and matrix primitives.

Conventions, fixed once for the whole package:

* G = SL(n, C) with the diagonal Cartan subgroup, upper-triangular positive
  Borel, and Chevalley generators E_i = E_{i,i+1}, F_i = E_{i+1,i}.
* The invariant bilinear form is the trace form (X, Y) = Tr(XY); restricted
  to real traceless diagonals it is the Euclidean dot product.
* Simple reflections lift to the block [[0, -1], [1, 0]] placed at rows and
  columns (i, i+1); lifts of longer elements are products along reduced
  words (well defined because the blocks satisfy the braid relations).
* Exterior powers are written in the reversed weight basis v_j = e_{n+1-j},
  so v_1 ^ ... ^ v_l is a lowest-weight vector of the l-th wedge.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import (
    LevelOutOfRange,
    NegativeCoefficient,
    NonReducedWord,
    NotInG0,
    RangeExceeded,
)

MINOR_TOL = 1e-12          # a leading minor below this means "not in G_0"
DUAL_ROUTE_RTOL = 1e-10    # agreement required between minor computations


# ---------------------------------------------------------------------------
# Cartan data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CartanData:
    """Root/weight bookkeeping for SL(n, C), n = 2 or 3 first class."""

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be at least 2")

    @property
    def rank(self) -> int:
        return self.n - 1

    def chevalley_e(self, i: int) -> np.ndarray:
        m = np.zeros((self.n, self.n))
        m[i - 1, i] = 1.0
        return m

    def chevalley_f(self, i: int) -> np.ndarray:
        m = np.zeros((self.n, self.n))
        m[i, i - 1] = 1.0
        return m

    def coroot(self, i: int) -> np.ndarray:
        """Diagonal of the simple coroot alpha_i^vee."""
        d = np.zeros(self.n)
        d[i - 1], d[i] = 1.0, -1.0
        return d

    def fundamental_weight(self, i: int) -> np.ndarray:
        """omega_i as a linear functional on diagonals: sum of first i entries."""
        w = np.zeros(self.n)
        w[:i] = 1.0
        return w

    def fundamental_columns(self, i: int) -> tuple[int, ...]:
        return tuple(range(1, i + 1))

    def weight_coefficients(self, coeffs) -> np.ndarray:
        """Functional of sum_i c_i omega_i on diagonals."""
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.shape != (self.rank,):
            raise ValueError("need one coefficient per fundamental weight")
        out = np.zeros(self.n)
        for i, c in enumerate(coeffs, start=1):
            out += c * self.fundamental_weight(i)
        return out


# ---------------------------------------------------------------------------
# Weyl group (S_n) elements
# ---------------------------------------------------------------------------

def _apply_simple(i: int, j: int) -> int:
    if j == i:
        return i + 1
    if j == i + 1:
        return i
    return j


def perm_from_word(word, n: int) -> tuple[int, ...]:
    """Permutation of 1..n for the word s_{i_1} ... s_{i_l} (function composition)."""
    perm = []
    for j in range(1, n + 1):
        for i in reversed(word):
            j = _apply_simple(i, j)
        perm.append(j)
    return tuple(perm)


def inversions(perm) -> int:
    return sum(
        1
        for a in range(len(perm))
        for b in range(a + 1, len(perm))
        if perm[a] > perm[b]
    )


def word_from_perm(perm) -> tuple[int, ...]:
    """A reduced word for the permutation, by sorting descents left to right."""
    p = list(perm)
    word = []
    changed = True
    while changed:
        changed = False
        for i in range(len(p) - 1):
            if p[i] > p[i + 1]:
                # s_{i+1} applied on the right removes this descent
                word.append(i + 1)
                p[i], p[i + 1] = p[i + 1], p[i]
                changed = True
    return tuple(reversed(word))


@dataclass(frozen=True)
class Weyl:
    """Weyl group element: a permutation of 1..n plus an optional reduced word."""

    perm: tuple[int, ...]
    word: tuple[int, ...] | None = None

    @classmethod
    def from_word(cls, word, n: int) -> "Weyl":
        word = tuple(int(i) for i in word)
        if any(i < 1 or i > n - 1 for i in word):
            raise ValueError("letters must lie in 1..n-1")
        perm = perm_from_word(word, n)
        if len(word) != inversions(perm):
            raise NonReducedWord(f"word {word} is not reduced")
        return cls(perm, word)

    @classmethod
    def from_perm(cls, perm) -> "Weyl":
        perm = tuple(int(j) for j in perm)
        if sorted(perm) != list(range(1, len(perm) + 1)):
            raise ValueError("not a permutation of 1..n")
        return cls(perm, word_from_perm(perm))

    @classmethod
    def identity(cls, n: int) -> "Weyl":
        return cls(tuple(range(1, n + 1)), ())

    @classmethod
    def longest(cls, n: int) -> "Weyl":
        return cls.from_perm(tuple(range(n, 0, -1)))

    @property
    def n(self) -> int:
        return len(self.perm)

    def length(self) -> int:
        return inversions(self.perm)

    def reduced_word(self) -> tuple[int, ...]:
        return self.word if self.word is not None else word_from_perm(self.perm)

    def __mul__(self, other: "Weyl") -> "Weyl":
        perm = tuple(self.perm[other.perm[j] - 1] for j in range(self.n))
        return Weyl.from_perm(perm)

    def inverse(self) -> "Weyl":
        inv = [0] * self.n
        for j, img in enumerate(self.perm, start=1):
            inv[img - 1] = j
        return Weyl.from_perm(tuple(inv))

    def apply(self, j: int) -> int:
        return self.perm[j - 1]


def simple_lift(i: int, n: int) -> np.ndarray:
    m = np.eye(n, dtype=complex)
    m[i - 1: i + 1, i - 1: i + 1] = [[0.0, -1.0], [1.0, 0.0]]
    return m


def weyl_lift(w: Weyl | tuple, n: int | None = None) -> np.ndarray:
    """Signed permutation matrix lifting w, as a product along a reduced word."""
    if isinstance(w, Weyl):
        word, n = w.reduced_word(), w.n
    else:
        if n is None:
            raise ValueError("n required when lifting a bare word")
        word = tuple(int(i) for i in w)
        if len(word) != inversions(perm_from_word(word, n)):
            raise NonReducedWord(f"word {word} is not reduced")
    m = np.eye(n, dtype=complex)
    for i in word:
        m = m @ simple_lift(i, n)
    return m


def lift_signs(w: Weyl) -> np.ndarray:
    """Per-column signs eps_j with wbar e_j = eps_j e_{w(j)}."""
    m = weyl_lift(w)
    return np.array([m[w.apply(j) - 1, j - 1].real for j in range(1, w.n + 1)])


# ---------------------------------------------------------------------------
# Decompositions and minors
# ---------------------------------------------------------------------------

def principal_minor(g: np.ndarray, i: int) -> complex:
    """Determinant of the leading i x i block (i = 0 gives 1)."""
    if i == 0:
        return 1.0 + 0.0j
    return complex(np.linalg.det(g[:i, :i]))


def gaussian_decompose(g: np.ndarray):
    """Factor g = n_minus . h . n_plus with unit-triangular outer factors.

    Requires all leading principal minors to be nonzero; raises NotInG0
    otherwise.  Returns (n_minus, h, n_plus) with h diagonal.
    """
    g = np.asarray(g, dtype=complex)
    n = g.shape[0]
    minors = [principal_minor(g, i) for i in range(n + 1)]
    if any(abs(m) <= MINOR_TOL for m in minors[1:]):
        raise NotInG0("a leading principal minor vanishes")
    lower = np.eye(n, dtype=complex)
    work = g.copy()
    for k in range(n - 1):
        piv = work[k, k]
        for r in range(k + 1, n):
            f = work[r, k] / piv
            lower[r, k] = f
            work[r, k:] -= f * work[k, k:]
    h = np.diag(work).copy()
    upper = work / h[:, None]
    residual = lower @ np.diag(h) @ upper - g
    scale = max(1.0, float(np.max(np.abs(g))))
    if np.max(np.abs(residual)) > 1e-10 * scale:
        raise NotInG0("elimination residual too large; matrix near the cell boundary")
    return lower, h, upper


def _submatrix_minor(g: np.ndarray, w: Weyl, v: Weyl, i: int) -> complex:
    """Signed determinant of rows w({1..i}), columns v({1..i}).

    The sign is assembled from the lift's column signs and the sorting
    permutations, without forming any matrix product.
    """
    rows = [w.apply(j) for j in range(1, i + 1)]
    cols = [v.apply(j) for j in range(1, i + 1)]
    sw = lift_signs(w)[:i].prod() * _sorting_sign(rows)
    sv = lift_signs(v)[:i].prod() * _sorting_sign(cols)
    sub = g[np.ix_(sorted(r - 1 for r in rows), sorted(c - 1 for c in cols))]
    return complex(sw * sv * np.linalg.det(sub))


def _sorting_sign(seq) -> float:
    sign = 1.0
    seq = list(seq)
    for a in range(len(seq)):
        for b in range(a + 1, len(seq)):
            if seq[a] > seq[b]:
                sign = -sign
    return sign


def generalized_minor(g: np.ndarray, w: Weyl, v: Weyl, i: int) -> complex:
    """Minor attached to the weight pair (w omega_i, v omega_i).

    Computed two ways -- through the lifts, and as a signed determinant of
    the selected submatrix -- and the two are required to agree.
    """
    g = np.asarray(g, dtype=complex)
    n = g.shape[0]
    if not (1 <= i <= n - 1):
        raise LevelOutOfRange(f"fundamental index {i} outside 1..{n - 1}")
    x = np.linalg.inv(weyl_lift(w)) @ g @ weyl_lift(v)
    via_lift = complex(np.linalg.det(x[:i, :i]))
    via_sub = _submatrix_minor(g, w, v, i)
    if not (np.isfinite(via_lift.real) and np.isfinite(via_sub.real)):
        raise RangeExceeded("minor overflowed double precision")
    scale = max(1.0, abs(via_lift), abs(via_sub))
    if abs(via_lift - via_sub) > DUAL_ROUTE_RTOL * scale:
        raise AssertionError(
            f"minor routes disagree: {via_lift} vs {via_sub}"
        )
    return via_lift


def minor_dominant(g: np.ndarray, coeffs) -> complex:
    """Product of antidominant fundamental minors with exponents c_i >= 0."""
    g = np.asarray(g, dtype=complex)
    n = g.shape[0]
    coeffs = list(coeffs)
    if len(coeffs) != n - 1:
        raise ValueError("need one exponent per fundamental weight")
    if any(c < 0 for c in coeffs):
        raise NegativeCoefficient("dominant weight needs nonnegative coefficients")
    w0 = Weyl.longest(n)
    e = Weyl.identity(n)
    out = 1.0 + 0.0j
    for i, c in enumerate(coeffs, start=1):
        if c:
            out *= generalized_minor(g, w0, e, i) ** c
    return out


def wedge_basis(n: int, l: int) -> list[tuple[int, ...]]:
    """Index sets of the wedge basis, lexicographic in the reversed letters."""
    return list(combinations(range(n), l))


def exterior_rep(g: np.ndarray, l: int) -> np.ndarray:
    """Matrix of g on the l-th wedge in the reversed weight basis.

    Entry (I, J) is the minor of g with rows {n+1-i : i in I} and columns
    {n+1-j : j in J}; the first basis vector is a lowest-weight vector and
    the map is multiplicative.
    """
    g = np.asarray(g, dtype=complex)
    n = g.shape[0]
    if not (1 <= l <= n - 1):
        raise LevelOutOfRange(f"level {l} outside 1..{n - 1}")
    subs = wedge_basis(n, l)
    rev = [tuple(sorted(n - 1 - i for i in s)) for s in subs]
    dim = len(subs)
    out = np.empty((dim, dim), dtype=complex)
    for a, ra in enumerate(rev):
        for b, rb in enumerate(rev):
            out[a, b] = np.linalg.det(g[np.ix_(ra, rb)])
    return out


# ---------------------------------------------------------------------------
# Random elements and validators (used throughout the test and check suites)
# ---------------------------------------------------------------------------

def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed element of SU(n)."""
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    return q / np.linalg.det(q) ** (1.0 / n)


def random_special(n: int, rng: np.random.Generator, spread: float = 1.0) -> np.ndarray:
    """Random element of SL(n, C)."""
    g = spread * (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    det = np.linalg.det(g)
    return g / det ** (1.0 / n)


def random_triangular(n: int, rng: np.random.Generator, spread: float = 1.0) -> np.ndarray:
    """Random lower-triangular matrix with positive diagonal and det 1."""
    d = np.exp(rng.uniform(-spread, spread, size=n))
    d /= d.prod() ** (1.0 / n)
    b = np.diag(d.astype(complex))
    for i in range(n):
        for j in range(i):
            b[i, j] = spread * (rng.normal() + 1j * rng.normal())
    return b


def check_special(g: np.ndarray, tol: float = 1e-10) -> bool:
    return abs(np.linalg.det(g) - 1.0) <= tol


def check_unitary(k: np.ndarray, tol: float = 1e-10) -> bool:
    n = k.shape[0]
    return (
        np.linalg.norm(k @ k.conj().T - np.eye(n)) <= tol
        and abs(np.linalg.det(k) - 1.0) <= tol
    )


def check_triangular(b: np.ndarray, tol: float = 1e-10) -> bool:
    n = b.shape[0]
    upper_ok = all(abs(b[i, j]) <= tol for i in range(n) for j in range(i + 1, n))
    diag = np.diag(b)
    diag_ok = np.all(np.abs(diag.imag) <= tol * np.maximum(1.0, np.abs(diag.real))) and np.all(
        diag.real > 0
    )
    return bool(upper_ok and diag_ok and abs(np.linalg.det(b) - 1.0) <= tol * max(1.0, np.abs(diag.real).max()))
