"""Iwasawa factorization, dressing action, Casimirs, and the torus moment map.

The triangular dual group is AN_- = lower triangular with positive real
diagonal and determinant one, sitting inside SL(n, C) = AN_- . SU(n).  All
scale-dependent maps take a real parameter s and work with the Gram matrix
b b*; deep negative s blows the Gram spectrum up to e^{4|s|t}, so the
splitting routines below avoid ever subtracting large Gram entries:

* Casimirs come from entries of wedge powers of b itself, never of b b*.
* Eigenpairs of b b* combine the top pair of b b* with the top pair of
  (b b*)^{-1} assembled from the triangular inverse of b, which keeps the
  small eigenvalues at full relative accuracy.
* The diagonal of the Iwasawa factor comes from Gram determinants expanded
  as sums of squared minors (all terms positive, no cancellation).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .errors import (
    CholeskyFailure,
    DegenerateSpectrum,
    RangeExceeded,
    ZeroScale,
)
from .liecore import exterior_rep, wedge_basis

EXP_GUARD = 700.0        # |2 s t_max| beyond this overflows exp
GRAM_GUARD = 350.0       # moment-map guard: squared compound entries stay finite
CASIMIR_RTOL = 1e-9      # required agreement between the two Casimir routes
GAP_TOL = 1e-12          # relative eigenvalue gap below which spectra count as degenerate


# ---------------------------------------------------------------------------
# Chamber points and orbit representatives
# ---------------------------------------------------------------------------

class CartanPoint:
    """Real traceless diagonal t_1 >= ... >= t_n; a positive-chamber point."""

    def __init__(self, values):
        t = np.asarray(values, dtype=float).copy()
        if abs(t.sum()) > 1e-12 * max(1.0, np.abs(t).max()):
            raise ValueError("entries must sum to zero")
        if np.any(np.diff(t) > 0):
            raise ValueError("entries must be non-increasing")
        t.setflags(write=False)
        self.t = t

    @classmethod
    def su2(cls, xi: float) -> "CartanPoint":
        if xi <= 0:
            raise ValueError("xi must be positive")
        return cls([xi, -xi])

    @property
    def n(self) -> int:
        return self.t.size

    @property
    def regular(self) -> bool:
        return bool(np.all(-np.diff(self.t) > 1e-9))

    def matrix(self) -> np.ndarray:
        return np.diag(self.t.astype(complex))

    def __repr__(self):
        return f"CartanPoint({list(self.t)})"


def orbit_point(k: np.ndarray, point: CartanPoint) -> np.ndarray:
    """Hermitian matrix k diag(t) k*, a point of the isospectral orbit."""
    x = k @ point.matrix() @ k.conj().T
    return 0.5 * (x + x.conj().T)


# ---------------------------------------------------------------------------
# Iwasawa factorization and dressing
# ---------------------------------------------------------------------------

def iwasawa_factor(g: np.ndarray):
    """Unique factorization g = b k with b lower positive-diagonal, k unitary."""
    g = np.asarray(g, dtype=complex)
    gram = g @ g.conj().T
    try:
        b = np.linalg.cholesky(gram)
    except np.linalg.LinAlgError as exc:
        raise CholeskyFailure("Gram matrix lost positive-definiteness") from exc
    k = np.linalg.solve(b, g)
    return b, k


def dressing(k: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Triangular factor of k b; the group action of SU(n) on AN_-."""
    return iwasawa_factor(np.asarray(k) @ np.asarray(b))[0]


# ---------------------------------------------------------------------------
# Scale maps between orbit representatives and the triangular group
# ---------------------------------------------------------------------------

def scaled_exp(s: float, x: np.ndarray) -> np.ndarray:
    """Triangular b with b b* = exp(2 s X), X Hermitian traceless."""
    if s == 0:
        raise ZeroScale("scale must be nonzero")
    x = np.asarray(x, dtype=complex)
    x = 0.5 * (x + x.conj().T)
    lam, u = np.linalg.eigh(x)
    if 2.0 * abs(s) * np.abs(lam).max() > EXP_GUARD:
        raise RangeExceeded("exp(2 s X) overflows double precision")
    gram = (u * np.exp(2.0 * s * lam)) @ u.conj().T
    gram = 0.5 * (gram + gram.conj().T)
    try:
        b = np.linalg.cholesky(gram)
    except np.linalg.LinAlgError as exc:
        raise CholeskyFailure("exp(2 s X) lost positive-definiteness") from exc
    if x.shape[0] == 2:
        # det b = 1 exactly; avoids the cancellation in the (2,2) pivot
        b[1, 1] = 1.0 / b[0, 0]
    return b


def scaled_log(s: float, b: np.ndarray) -> np.ndarray:
    """Hermitian X = log(b b*) / (2 s); inverse of scaled_exp."""
    if s == 0:
        raise ZeroScale("scale must be nonzero")
    b = np.asarray(b, dtype=complex)
    try:
        d, k = eigensplit(b)
    except DegenerateSpectrum:
        # near-degenerate spectra have no spread problem; plain eigh is exact
        d, k = np.linalg.eigh(b @ b.conj().T)
    x = (k * (np.log(d) / (2.0 * s))) @ k.conj().T
    return 0.5 * (x + x.conj().T)


# ---------------------------------------------------------------------------
# Casimir invariants
# ---------------------------------------------------------------------------

def gram_eigenvalues(b: np.ndarray) -> np.ndarray:
    """Eigenvalues of b b* in increasing order at full relative accuracy.

    The top eigenvalue comes from b b*, the bottom one from its inverse
    assembled out of the triangular inverse of b, and for n = 3 the middle
    one from det = 1; this stays accurate when the spread approaches 1/eps,
    where a plain Hermitian solve turns the small eigenvalues into noise.
    """
    b = np.asarray(b, dtype=complex)
    n = b.shape[0]
    if n not in (2, 3):
        raise ValueError("only n = 2, 3 supported")
    w = np.linalg.eigh(b @ b.conj().T)[0]
    if not np.isfinite(w).all():
        raise RangeExceeded("Gram spectrum overflowed")
    binv = np.linalg.inv(b)
    wi = np.linalg.eigh(binv.conj().T @ binv)[0]
    mu_big, mu_small = w[-1], 1.0 / wi[-1]
    if n == 2:
        return np.array([mu_small, mu_big])
    return np.array([mu_small, 1.0 / (mu_small * mu_big), mu_big])


def eigensplit(b: np.ndarray):
    """Frame-building eigen-decomposition of b b*, regular spectra only.

    Returns (mu, k) with mu increasing and b b* = k diag(mu) k*; eigenvalues
    as in gram_eigenvalues, eigenvectors from the same two solves (the n = 3
    middle vector is the orthogonal complement).  Raises DegenerateSpectrum
    when gaps collapse.
    """
    b = np.asarray(b, dtype=complex)
    n = b.shape[0]
    gram = b @ b.conj().T
    w, v = np.linalg.eigh(gram)
    if not np.isfinite(w).all():
        raise RangeExceeded("Gram spectrum overflowed")
    mu_big, u_big = w[-1], v[:, -1]
    binv = np.linalg.inv(b)
    wi, vi = np.linalg.eigh(binv.conj().T @ binv)
    mu_small, u_small = 1.0 / wi[-1], vi[:, -1]
    if n == 2:
        mu = np.array([mu_small, mu_big])
        k = np.column_stack([u_small, u_big])
    else:
        mu_mid = 1.0 / (mu_small * mu_big)
        u_mid = np.conj(np.cross(u_small, u_big))
        nrm = np.linalg.norm(u_mid)
        if nrm < 1e-8:
            raise DegenerateSpectrum("eigenvector cross product collapsed")
        mu = np.array([mu_small, mu_mid, mu_big])
        k = np.column_stack([u_small, u_mid / nrm, u_big])
    if np.any(np.diff(mu) <= GAP_TOL * mu[1:]):
        raise DegenerateSpectrum("eigenvalue gaps below tolerance")
    return mu, k


def _elementary_symmetric(vals: np.ndarray, i: int) -> float:
    total = 0.0
    for sub in combinations(range(vals.size), i):
        p = 1.0
        for j in sub:
            p *= vals[j]
        total += p
    return total


def casimir_squared(b: np.ndarray, i: int) -> float:
    """Trace of the i-th wedge of b b*, computed two independent ways.

    Route one sums squared entries of the i-th wedge of b (equals the trace
    by multiplicativity); route two takes the elementary symmetric function
    of the Gram eigenvalues.  Both must agree to CASIMIR_RTOL.
    """
    b = np.asarray(b, dtype=complex)
    wedge = exterior_rep(b, i)
    via_trace = float(np.sum(np.abs(wedge) ** 2))
    via_spectrum = _elementary_symmetric(gram_eigenvalues(b), i)
    if not (np.isfinite(via_trace) and np.isfinite(via_spectrum)):
        raise RangeExceeded("Casimir overflowed double precision")
    if abs(via_trace - via_spectrum) > CASIMIR_RTOL * max(via_trace, via_spectrum):
        raise AssertionError(
            f"casimir routes disagree: {via_trace} vs {via_spectrum}"
        )
    return via_trace


def casimir(b: np.ndarray, i: int) -> float:
    return float(np.sqrt(casimir_squared(b, i)))


def casimir_identity_value(n: int, i: int) -> float:
    """Casimir of the identity element: sqrt of the wedge dimension."""
    return float(np.sqrt(comb(n, i)))


# ---------------------------------------------------------------------------
# Orbit splitting (Gram matrix -> chamber point + frame)
# ---------------------------------------------------------------------------

def orbit_split(gram: np.ndarray, s: float, factor: np.ndarray | None = None):
    """Split a positive Hermitian det-1 matrix as  k exp(2 s diag(D)) k*.

    Returns (D, k) with D a CartanPoint (non-increasing, so the Gram
    eigenvalues come out increasing for s < 0), column phases fixed so each
    column's largest-modulus entry is real positive, and det k = 1.

    Passing the triangular ``factor`` b with gram = b b* switches to the
    high-relative-accuracy eigensplit; without it a plain Hermitian
    eigen-decomposition is used, which loses the small eigenvalues once the
    spread approaches 1/eps.
    """
    if s == 0:
        raise ZeroScale("scale must be nonzero")
    gram = np.asarray(gram, dtype=complex)
    n = gram.shape[0]
    if factor is not None:
        mu, k = eigensplit(factor)
    else:
        mu, k = np.linalg.eigh(gram)
        if np.any(mu <= 0):
            raise CholeskyFailure("matrix is not positive definite")
        if np.any(np.diff(mu) <= GAP_TOL * mu[1:]):
            raise DegenerateSpectrum("eigenvalue gaps below tolerance")
    d = np.log(mu) / (2.0 * s)
    if s < 0:
        order = np.arange(n)          # increasing mu <-> decreasing D
    else:
        order = np.arange(n)[::-1]
        d = d[order]
        k = k[:, order]
    # column phases: largest-modulus entry real positive
    for j in range(n):
        idx = int(np.argmax(np.abs(k[:, j])))
        phase = k[idx, j] / abs(k[idx, j])
        k[:, j] = k[:, j] / phase
    det = np.linalg.det(k)
    k[:, -1] /= det
    return CartanPoint(d - d.mean()), k


# ---------------------------------------------------------------------------
# Torus moment map
# ---------------------------------------------------------------------------

def moment_map(k: np.ndarray, point: CartanPoint, s: float) -> np.ndarray:
    """Log-diagonal of the Iwasawa factor of k exp(s diag(t)), divided by s.

    The j-th component is (L_j - L_{j-1}) / (2 s) with L_j the log of the
    leading j x j Gram determinant, expanded by Cauchy-Binet into a sum of
    squared minors of k exp(s diag(t)); every term is positive, so the
    expansion stays accurate arbitrarily deep in s.
    """
    if s == 0:
        raise ZeroScale("scale must be nonzero")
    k = np.asarray(k, dtype=complex)
    n = k.shape[0]
    t = point.t
    if 2.0 * abs(s) * np.abs(t).max() > GRAM_GUARD:
        raise RangeExceeded("moment map inputs overflow squared-minor sums")
    g = k * np.exp(s * t)[None, :]
    logdets = [0.0]
    for j in range(1, n):
        rows = tuple(range(j))
        terms = np.array(
            [
                abs(np.linalg.det(g[np.ix_(rows, cols)])) ** 2
                for cols in combinations(range(n), j)
            ]
        )
        m = terms.max()
        if m == 0.0:
            raise CholeskyFailure("Gram minor vanished")
        logdets.append(float(np.log(m) + np.log(terms.sum() / m)))
    logdets.append(0.0)  # det of the full Gram matrix is |det g|^2 = 1
    psi = np.array([(logdets[j + 1] - logdets[j]) / (2.0 * s) for j in range(n)])
    return psi - psi.mean()


def moment_map_cholesky(k: np.ndarray, point: CartanPoint, s: float) -> np.ndarray:
    """Reference route through an explicit Iwasawa factorization."""
    if s == 0:
        raise ZeroScale("scale must be nonzero")
    g = np.asarray(k, dtype=complex) * np.exp(s * point.t)[None, :]
    b, _ = iwasawa_factor(g)
    return np.log(np.diag(b).real) / s


def in_weyl_hull(v: np.ndarray, point: CartanPoint, tol: float = 1e-8) -> bool:
    """Membership of v in the convex hull of the Weyl orbit of the chamber point.

    Classical majorization test: equal sums and dominated partial sums of the
    decreasingly sorted vector.
    """
    v = np.asarray(v, dtype=float)
    t = point.t
    if abs(v.sum() - t.sum()) > tol:
        return False
    vs = np.sort(v)[::-1]
    return bool(np.all(np.cumsum(vs)[:-1] <= np.cumsum(t)[:-1] + tol))


def wedge_first_row_offdiag(k: np.ndarray) -> float:
    """Largest |minor| with rows {1..l} and columns != {1..l}, over all levels.

    These are the lowest-weight-row entries of every wedge power in the
    reversed basis; they measure how far a unitary frame sits from the
    diagonal torus.
    """
    k = np.asarray(k, dtype=complex)
    n = k.shape[0]
    worst = 0.0
    for l in range(1, n):
        wedge = np.abs(exterior_rep(k, l))
        worst = max(worst, float(wedge[0, 1:].max()))
    return worst


def offdiag_max(k: np.ndarray) -> float:
    k = np.asarray(k, dtype=complex)
    mask = ~np.eye(k.shape[0], dtype=bool)
    return float(np.abs(k[mask]).max())
