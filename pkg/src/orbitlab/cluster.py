"""Seeds on the big double Bruhat cell of SL(n) and the exponential chart.

A seed for the cell B w0 B intersect B_- is a reduced word for w0 together
with one generalized minor per index k in R = [-r, -1] u [1, m].  The chart
sends cone-times-torus coordinates (lambda, phi) to the unique cell point
whose minors equal z_k = exp(s lambda_k - i phi_k); for n = 2, 3 the
inversion is closed form, and a damped Newton solver over the triangular
entries provides an independent oracle.

Index conventions used throughout: vectors over R are ordered with R
ascending, i.e. (-r, ..., -1, 1, ..., m); vectors over the complex-phase
set S ascending likewise.  Casimir coordinate vectors are ordered the same
way as the negative block (entry j corresponds to k = j - r).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    NewtonDiverged,
    NonReducedWord,
    OffCell,
    RangeExceeded,
    StepUnderflow,
    ZeroScale,
)
from .iwasawa import casimir_squared
from .liecore import Weyl, generalized_minor, perm_from_word, inversions

MAX_ABS_LOG = 80.0      # guard on |s lambda_k|; keeps every downstream square finite
MINOR_FLOOR = 1e-14     # below this a minor counts as vanished (off the cell)

_CLOSED_FORM_WORDS = {(1,), (1, 2, 1), (2, 1, 2)}


# ---------------------------------------------------------------------------
# Seed data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Seed:
    n: int
    word: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.word)

    @property
    def r(self) -> int:
        return self.n - 1

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(range(-self.r, 0)) + tuple(range(1, self.m + 1))

    def letter(self, k: int) -> int:
        """The fundamental index i_k."""
        return -k if k < 0 else self.word[k - 1]

    def weyl_v(self, k: int) -> Weyl:
        """The Weyl element v_k pairing with index k."""
        if k < 0:
            return Weyl.longest(self.n)
        return Weyl.from_word(tuple(reversed(self.word[k:])), self.n)

    @property
    def complex_set(self) -> tuple[int, ...]:
        """Indices whose minor is genuinely complex on the triangular group."""
        out = []
        for k in self.indices:
            i = self.letter(k)
            v = self.weyl_v(k)
            cols = frozenset(v.apply(j) for j in range(1, i + 1))
            if cols != frozenset(range(1, i + 1)):
                out.append(k)
        return tuple(out)

    def phi_index(self, k: int) -> int:
        return self.complex_set.index(k)

    def lam_index(self, k: int) -> int:
        return self.indices.index(k)


@lru_cache(maxsize=None)
def build_seed(word: tuple[int, ...], n: int) -> Seed:
    """Validate a reduced word for the longest element and build its seed."""
    word = tuple(int(i) for i in word)
    perm = perm_from_word(word, n)
    if len(word) != inversions(perm):
        raise NonReducedWord(f"{word} is not reduced")
    if perm != tuple(range(n, 0, -1)):
        raise NonReducedWord(f"{word} does not represent the longest element")
    seed = Seed(n, word)
    if len(seed.complex_set) != seed.m:
        raise AssertionError("complex-coordinate set must have m members")
    return seed


# ---------------------------------------------------------------------------
# Points of the chart domain
# ---------------------------------------------------------------------------

class ClusterPoint:
    """Chart coordinates: lam over R (ascending), phi over S (ascending)."""

    def __init__(self, lam, phi):
        self.lam = np.asarray(lam, dtype=float).copy()
        self.phi = np.mod(np.asarray(phi, dtype=float), 2.0 * np.pi)

    @property
    def dim(self) -> tuple[int, int]:
        return self.lam.size, self.phi.size

    def lam_neg(self, r: int) -> np.ndarray:
        return self.lam[:r]

    def lam_pos(self, r: int) -> np.ndarray:
        return self.lam[r:]

    def replace(self, lam=None, phi=None) -> "ClusterPoint":
        return ClusterPoint(
            self.lam if lam is None else lam,
            self.phi if phi is None else phi,
        )

    def __repr__(self):
        return f"ClusterPoint(lam={list(self.lam)}, phi={list(self.phi)})"


def chart_targets(point: ClusterPoint, s: float, seed: Seed) -> np.ndarray:
    """Target minor values z_k = exp(s lambda_k - i phi_k), phi = 0 off S."""
    if s >= 0:
        raise ZeroScale("chart maps need s < 0")
    lam, phi = point.lam, point.phi
    if lam.size != seed.r + seed.m or phi.size != seed.m:
        raise ValueError("coordinate sizes do not match the seed")
    if np.max(np.abs(s * lam)) > MAX_ABS_LOG:
        raise RangeExceeded("|s lambda| exceeds the overflow guard")
    z = np.exp(s * lam).astype(complex)
    for j, k in enumerate(seed.complex_set):
        z[seed.lam_index(k)] *= np.exp(-1j * phi[j])
    return z


# ---------------------------------------------------------------------------
# Minors of a cell point
# ---------------------------------------------------------------------------

def minors_map(b: np.ndarray, seed: Seed) -> np.ndarray:
    """All seed minors of b, ordered with R ascending.

    Raises OffCell when any required minor vanishes; on the triangular
    group the minors with k outside S come out real positive.
    """
    b = np.asarray(b, dtype=complex)
    e = Weyl.identity(seed.n)
    vals = np.empty(seed.r + seed.m, dtype=complex)
    for j, k in enumerate(seed.indices):
        vals[j] = generalized_minor(b, seed.weyl_v(k), e, seed.letter(k))
        if abs(vals[j]) < MINOR_FLOOR:
            raise OffCell(f"minor at index {k} vanished")
    return vals


def cluster_coords(b: np.ndarray, s: float, seed: Seed) -> ClusterPoint:
    """Chart coordinates of a cell point: inverse of the target map."""
    if s >= 0:
        raise ZeroScale("chart maps need s < 0")
    vals = minors_map(b, seed)
    lam = np.log(np.abs(vals)) / s
    phi = np.array([-np.angle(vals[seed.lam_index(k)]) for k in seed.complex_set])
    return ClusterPoint(lam, phi)


# ---------------------------------------------------------------------------
# Closed-form chart (n = 2, 3)
# ---------------------------------------------------------------------------

def _assemble_closed_form(z: dict, word: tuple[int, ...]) -> np.ndarray:
    if word == (1,):
        b = np.zeros((2, 2), dtype=complex)
        b[0, 0] = z[1]
        b[1, 0] = z[-1]
        b[1, 1] = 1.0 / z[1]
        return b
    if word == (1, 2, 1):
        b = np.zeros((3, 3), dtype=complex)
        b[0, 0] = z[3]
        b[1, 1] = z[2] / z[3]
        b[2, 2] = 1.0 / z[2]
        b[1, 0] = z[1]
        b[2, 0] = z[-1]
        b[2, 1] = (z[-2] + b[1, 1] * z[-1]) / z[1]
        return b
    if word == (2, 1, 2):
        b = np.zeros((3, 3), dtype=complex)
        b[0, 0] = z[2]
        b[1, 1] = z[3] / z[2]
        b[2, 2] = 1.0 / z[3]
        b[2, 1] = z[1] / z[2]
        b[2, 0] = z[-1]
        b[1, 0] = (z[-2] + b[1, 1] * z[-1]) / b[2, 1]
        return b
    raise NonReducedWord(f"no closed-form inversion for word {word}")


def detropicalize(point: ClusterPoint, s: float, seed: Seed) -> np.ndarray:
    """Cell point whose seed minors equal the chart targets.

    Closed form for the supported words; the minors of the result reproduce
    the targets to relative 1e-10 by construction (checked in the tests via
    the Newton oracle and direct round trips).
    """
    if seed.word not in _CLOSED_FORM_WORDS:
        raise NonReducedWord(f"word {seed.word} is not supported")
    zvec = chart_targets(point, s, seed)
    z = {k: zvec[seed.lam_index(k)] for k in seed.indices}
    return _assemble_closed_form(z, seed.word)


# ---------------------------------------------------------------------------
# Newton oracle for the chart
# ---------------------------------------------------------------------------

def _pack(b: np.ndarray) -> np.ndarray:
    """Triangular entries -> real parameter vector (log diagonal, off-diag)."""
    n = b.shape[0]
    params = [np.log(b[i, i].real) for i in range(n - 1)]
    for i in range(n):
        for j in range(i):
            params.extend([b[i, j].real, b[i, j].imag])
    return np.array(params)


def _unpack(params: np.ndarray, n: int) -> np.ndarray:
    b = np.zeros((n, n), dtype=complex)
    logs = params[: n - 1]
    diag = np.append(np.exp(logs), np.exp(-logs.sum()))
    for i in range(n):
        b[i, i] = diag[i]
    idx = n - 1
    for i in range(n):
        for j in range(i):
            b[i, j] = params[idx] + 1j * params[idx + 1]
            idx += 2
    return b


def _chart_residual(b: np.ndarray, targets: np.ndarray, seed: Seed) -> np.ndarray:
    """Log-magnitude and wrapped-phase mismatches of the seed minors."""
    vals = minors_map(b, seed)
    res = []
    for j, k in enumerate(seed.indices):
        res.append(np.log(np.abs(vals[j])) - np.log(np.abs(targets[j])))
        if k in seed.complex_set:
            res.append(np.angle(vals[j] / targets[j]))
    return np.array(res)


def detropicalize_newton(
    point: ClusterPoint,
    s: float,
    seed: Seed,
    start: np.ndarray | None = None,
    tol: float = 1e-12,
    max_iter: int = 60,
) -> np.ndarray:
    """Generic chart inversion by damped Newton on the triangular entries.

    Works in log-diagonal coordinates with log-magnitude/phase residuals so
    the system stays well scaled at deep s.  Used as a cross-check oracle
    for the closed form; seeded at the leading-monomial truncation unless a
    start matrix is supplied.
    """
    targets = chart_targets(point, s, seed)
    n = seed.n
    if start is None:
        z = {k: targets[seed.lam_index(k)] for k in seed.indices}
        start = _leading_start(z, seed.word)
    x = _pack(start)

    def resid(xv):
        return _chart_residual(_unpack(xv, n), targets, seed)

    res = resid(x)
    for _ in range(max_iter):
        norm = np.abs(res).max()
        if norm < tol:
            return _unpack(x, n)
        jac = _fd_jacobian(resid, x, 1e-7)
        try:
            step = np.linalg.solve(jac, -res)
        except np.linalg.LinAlgError as exc:
            raise NewtonDiverged("singular Newton system") from exc
        scale = 1.0
        for _ in range(40):
            cand = x + scale * step
            try:
                cand_res = resid(cand)
            except OffCell:
                scale *= 0.5
                continue
            if np.abs(cand_res).max() < norm:
                x, res = cand, cand_res
                break
            scale *= 0.5
        else:
            raise NewtonDiverged("step halving stalled")
    if np.abs(res).max() < tol:
        return _unpack(x, n)
    raise NewtonDiverged(f"no convergence after {max_iter} iterations")


def _leading_start(z: dict, word: tuple[int, ...]) -> np.ndarray:
    """Single-monomial truncation of the closed form: a generic Newton seed."""
    if word == (1,):
        b = np.zeros((2, 2), dtype=complex)
        b[0, 0], b[1, 0], b[1, 1] = z[1], z[-1], 1.0 / z[1]
        return b
    if word == (1, 2, 1):
        b = np.zeros((3, 3), dtype=complex)
        b[0, 0], b[1, 1], b[2, 2] = z[3], z[2] / z[3], 1.0 / z[2]
        b[1, 0], b[2, 0] = z[1], z[-1]
        b[2, 1] = z[-2] / z[1]
        return b
    if word == (2, 1, 2):
        b = np.zeros((3, 3), dtype=complex)
        b[0, 0], b[1, 1], b[2, 2] = z[2], z[3] / z[2], 1.0 / z[3]
        b[2, 1], b[2, 0] = z[1] / z[2], z[-1]
        b[1, 0] = z[-2] * z[2] / z[1]
        return b
    raise NonReducedWord(f"word {word} is not supported")


def _fd_jacobian(fun, x: np.ndarray, h: float) -> np.ndarray:
    f0 = fun(x)
    jac = np.empty((f0.size, x.size))
    for j in range(x.size):
        xp, xm = x.copy(), x.copy()
        xp[j] += h
        xm[j] -= h
        jac[:, j] = (fun(xp) - fun(xm)) / (xp[j] - xm[j])
    return jac


# ---------------------------------------------------------------------------
# Casimir coordinates of the chart and their derivatives
# ---------------------------------------------------------------------------

def casimir_coords(point: ClusterPoint, s: float, seed: Seed) -> np.ndarray:
    """Vector with entry j = log C_{r-j}(b(s)) / s, ordered like the negative block."""
    b = detropicalize(point, s, seed)
    r = seed.r
    return np.array(
        [np.log(casimir_squared(b, r - j)) / (2.0 * s) for j in range(r)]
    )


def casimir_jacobian(
    point: ClusterPoint, s: float, seed: Seed, step: float = 1e-5
) -> np.ndarray:
    """Richardson-extrapolated central differences of the Casimir coordinates.

    Columns run over lambda (R ascending) then phi (S ascending); raises
    StepUnderflow when the two stencil widths disagree beyond tolerance.
    """
    r, m = seed.r, seed.m
    cols = r + 2 * m

    def eval_at(lam, phi):
        return casimir_coords(ClusterPoint(lam, phi), s, seed)

    out = np.empty((r, cols))
    worst = 0.0
    for c in range(cols):
        def shifted(delta):
            lam = point.lam.copy()
            phi = point.phi.copy()
            if c < r + m:
                lam[c] += delta
            else:
                phi[c - r - m] += delta
            return lam, phi

        derivs = []
        for h in (step, step / 2.0):
            lam_p, phi_p = shifted(h)
            lam_m, phi_m = shifted(-h)
            width = 2.0 * h
            derivs.append((eval_at(lam_p, phi_p) - eval_at(lam_m, phi_m)) / width)
        rich = (4.0 * derivs[1] - derivs[0]) / 3.0
        err = np.abs(derivs[1] - derivs[0]).max()
        worst = max(worst, err / (1.0 + np.abs(rich).max()))
        out[:, c] = rich
    if worst > 1e-6:
        raise StepUnderflow(f"stencil disagreement {worst:.2e} exceeds 1e-6")
    return out


# ---------------------------------------------------------------------------
# Leaf graph solver
# ---------------------------------------------------------------------------

def graph_solve(
    lam_pos: np.ndarray,
    phi: np.ndarray,
    target: np.ndarray,
    s: float,
    seed: Seed,
    tol: float = 1e-12,
    max_iter: int = 60,
    trust_radius: float | None = None,
) -> np.ndarray:
    """Negative-block input solving casimir_coords(.) = target.

    Newton seeded at the target itself (the derivative in the negative block
    is near the identity deep in the cone); the optional trust radius caps
    each step's norm.
    """
    lam_pos = np.asarray(lam_pos, dtype=float)
    phi = np.asarray(phi, dtype=float)
    target = np.asarray(target, dtype=float)
    r = seed.r

    def fval(x):
        return casimir_coords(
            ClusterPoint(np.concatenate([x, lam_pos]), phi), s, seed
        ) - target

    x = target.copy()
    res = fval(x)
    for _ in range(max_iter):
        if np.abs(res).max() < tol:
            return x
        jac = _fd_jacobian(fval, x, 1e-7)
        try:
            step = np.linalg.solve(jac, -res)
        except np.linalg.LinAlgError as exc:
            raise NewtonDiverged("singular graph system") from exc
        if trust_radius is not None:
            nrm = np.linalg.norm(step)
            if nrm > trust_radius:
                step *= trust_radius / nrm
        scale, norm = 1.0, np.abs(res).max()
        for _ in range(40):
            cand = x + scale * step
            cand_res = fval(cand)
            if np.abs(cand_res).max() < norm:
                x, res = cand, cand_res
                break
            scale *= 0.5
        else:
            raise NewtonDiverged("graph step halving stalled")
    if np.abs(res).max() < tol:
        return x
    raise NewtonDiverged(f"graph solve: no convergence after {max_iter} iterations")


def box_sign_check(
    lam_pos: np.ndarray,
    phi: np.ndarray,
    target: np.ndarray,
    s: float,
    seed: Seed,
    eps: float,
):
    """Face-sign test for the +-eps box around the target in the negative block.

    For each coordinate the map minus the target must be negative on the low
    face and positive on the high face (checked at the face center and
    corners).  Returns (ok, clearance); clearance is the smallest margin by
    which the sign condition holds (negative when it fails).
    """
    r = seed.r
    target = np.asarray(target, dtype=float)

    def fval(lam_neg):
        return casimir_coords(
            ClusterPoint(np.concatenate([lam_neg, lam_pos]), phi), s, seed
        )

    clearance = np.inf
    for j in range(r):
        others = [jj for jj in range(r) if jj != j]
        offsets = [np.zeros(len(others))]
        if others:
            for signs in np.ndindex(*(2,) * len(others)):
                offsets.append(eps * (2.0 * np.array(signs) - 1.0))
        for side in (-1.0, 1.0):
            for off in offsets:
                lam_neg = target.copy()
                lam_neg[j] += side * eps
                for jj, o in zip(others, off):
                    lam_neg[jj] += o
                gap = side * (fval(lam_neg)[j] - target[j])
                clearance = min(clearance, gap)
    return bool(clearance > 0.0), float(clearance)
