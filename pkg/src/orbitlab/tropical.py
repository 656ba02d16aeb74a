"""Laurent-monomial bookkeeping, the dominance cone, and leaf sampling.

Every matrix entry of a chart point b(s) is a finite Laurent sum in the
target values z_k = exp(s lambda_k - i phi_k) (the closed-form inversion
makes this so for n <= 3).  Squaring the wedge-power entries of b expands
each Casimir C_i^2 into exponential terms e^{s e(lambda)} with integer-half
linear forms e; on the set where every non-leading form stays above the
leading one by more than delta, all subleading terms decay at least like
e^{2 s delta}.  The margin

    min over i, over non-leading forms e of  e(lambda)/2 - lambda_{-i}

is therefore the operational dominance-cone coordinate used everywhere in
the verification suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np
from scipy.optimize import linprog

from .cluster import ClusterPoint, Seed, chart_targets
from .errors import DegenerateSpectrum, EmptyRegion, UnsupportedRank
from .iwasawa import CartanPoint
from .liecore import Weyl

EVAL_RTOL = 1e-9


# ---------------------------------------------------------------------------
# Monomial algebra over the chart targets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Monomial:
    coeff: complex
    powers: tuple[int, ...]      # exponents of z_k, aligned with seed.indices


class MonomialSum:
    """Finite Laurent sum in the z_k with complex coefficients."""

    def __init__(self, terms=()):
        collected: dict[tuple[int, ...], complex] = {}
        for t in terms:
            collected[t.powers] = collected.get(t.powers, 0.0) + t.coeff
        self.terms = tuple(
            Monomial(c, p) for p, c in sorted(collected.items()) if abs(c) > 1e-15
        )

    @classmethod
    def variable(cls, k: int, seed: Seed, power: int = 1) -> "MonomialSum":
        powers = [0] * (seed.r + seed.m)
        powers[seed.lam_index(k)] = power
        return cls([Monomial(1.0 + 0.0j, tuple(powers))])

    @classmethod
    def zero(cls) -> "MonomialSum":
        return cls([])

    def __add__(self, other):
        return MonomialSum(self.terms + other.terms)

    def __sub__(self, other):
        return MonomialSum(
            self.terms + tuple(Monomial(-t.coeff, t.powers) for t in other.terms)
        )

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return MonomialSum(
                [Monomial(other * t.coeff, t.powers) for t in self.terms]
            )
        out = []
        for a in self.terms:
            for b in other.terms:
                out.append(
                    Monomial(a.coeff * b.coeff,
                             tuple(x + y for x, y in zip(a.powers, b.powers)))
                )
        return MonomialSum(out)

    __rmul__ = __mul__

    def evaluate(self, point: ClusterPoint, s: float, seed: Seed) -> complex:
        z = chart_targets(point, s, seed)
        total = 0.0 + 0.0j
        for t in self.terms:
            val = t.coeff
            for zk, p in zip(z, t.powers):
                if p:
                    val *= zk ** p
            total += val
        return total

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"MonomialSum({list(self.terms)})"


# ---------------------------------------------------------------------------
# Symbolic entries of the chart point and its wedge powers
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def entry_monomials(seed: Seed) -> dict:
    """Matrix entries of the chart point as Laurent sums in the z_k."""
    if seed.n > 3:
        raise UnsupportedRank("symbolic entries only for n <= 3")
    var = lambda k, p=1: MonomialSum.variable(k, seed, p)
    if seed.word == (1,):
        return {
            (0, 0): var(1),
            (1, 0): var(-1),
            (1, 1): var(1, -1),
        }
    if seed.word == (1, 2, 1):
        b11 = var(3)
        b22 = var(2) * var(3, -1)
        return {
            (0, 0): b11,
            (1, 1): b22,
            (2, 2): var(2, -1),
            (1, 0): var(1),
            (2, 0): var(-1),
            (2, 1): var(-2) * var(1, -1) + b22 * var(-1) * var(1, -1),
        }
    if seed.word == (2, 1, 2):
        b22 = var(3) * var(2, -1)
        return {
            (0, 0): var(2),
            (1, 1): b22,
            (2, 2): var(3, -1),
            (2, 1): var(1) * var(2, -1),
            (2, 0): var(-1),
            (1, 0): var(-2) * var(2) * var(1, -1) + var(3) * var(-1) * var(1, -1),
        }
    raise UnsupportedRank(f"word {seed.word} has no symbolic table")


@lru_cache(maxsize=None)
def wedge_monomials(seed: Seed, level: int) -> dict:
    """Entries of the level-th wedge of the chart point, reversed basis."""
    n = seed.n
    ent = entry_monomials(seed)

    def entry(i, j):
        return ent.get((i, j), MonomialSum.zero())

    subs = list(combinations(range(n), level))
    rev = [tuple(sorted(n - 1 - i for i in s)) for s in subs]
    out = {}
    for a, ra in enumerate(rev):
        for c, rc in enumerate(rev):
            if level == 1:
                out[(a, c)] = entry(ra[0], rc[0])
            else:
                (r1, r2), (c1, c2) = ra, rc
                out[(a, c)] = entry(r1, c1) * entry(r2, c2) - entry(r1, c2) * entry(r2, c1)
    return out


def casimir_monomial_value(point: ClusterPoint, s: float, seed: Seed, i: int) -> float:
    """C_i^2 evaluated from the symbolic wedge table (consistency oracle)."""
    total = 0.0
    for ms in wedge_monomials(seed, i).values():
        total += abs(ms.evaluate(point, s, seed)) ** 2
    return total


# ---------------------------------------------------------------------------
# Dominance margin
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def margin_forms(seed: Seed) -> tuple:
    """Linear forms whose minimum over lambda is the dominance margin.

    One form per unordered pair of monomials per wedge entry per Casimir:
    (sum of the two power vectors)/2 minus the unit vector at the leading
    index -i.  The leading wedge entry (lowest-weight row, highest-weight
    column) must be the single monomial z_{-i}; its self-pair is the zero
    form and is excluded.
    """
    if seed.n > 3:
        raise UnsupportedRank("margin forms only for n <= 3")
    dim = seed.r + seed.m
    forms: list[tuple[int, tuple[float, ...]]] = []
    for i in range(1, seed.r + 1):
        table = wedge_monomials(seed, i)
        last = max(c for _, c in table)
        lead = table[(0, last)]
        lead_powers = [0] * dim
        lead_powers[seed.lam_index(-i)] = 1
        if len(lead) != 1 or lead.terms[0].powers != tuple(lead_powers) or abs(
            abs(lead.terms[0].coeff) - 1.0
        ) > 1e-12:
            raise AssertionError("leading wedge entry is not the plain minor")
        for (a, c), ms in table.items():
            for t1 in range(len(ms)):
                for t2 in range(t1, len(ms)):
                    vec = np.array(
                        [
                            0.5 * (x + y)
                            for x, y in zip(ms.terms[t1].powers, ms.terms[t2].powers)
                        ]
                    )
                    vec[seed.lam_index(-i)] -= 1.0
                    if (a, c) == (0, last) and t1 == t2 == 0:
                        continue
                    forms.append((i, tuple(vec)))
    unique = sorted(set(forms))
    return tuple((i, np.array(v)) for i, v in unique)


def cone_margin(seed: Seed, lam) -> float:
    """Distance (in the piecewise-linear sense) from the cone boundary."""
    lam = np.asarray(lam, dtype=float)
    return min(float(vec @ lam) for _, vec in margin_forms(seed))


# ---------------------------------------------------------------------------
# Leaves
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LeafSpec:
    """Negative-block values cut out by a chamber point (R^- ascending)."""

    xi: CartanPoint
    lam_neg: tuple[float, ...]


def leaf_of(xi: CartanPoint) -> LeafSpec:
    """Leaf coordinates lambda_{-i} = sum of the i smallest chamber entries.

    Computed both as entry sums and through the longest-element pairing with
    the fundamental weights; the two must agree exactly.
    """
    if not xi.regular:
        raise DegenerateSpectrum("leaf requires a regular chamber point")
    n = xi.n
    w0 = Weyl.longest(n)
    lam = []
    for i in range(n - 1, 0, -1):        # k = -r, ..., -1
        by_sum = float(xi.t[n - i:].sum())
        by_pairing = float(sum(xi.t[w0.apply(j) - 1] for j in range(1, i + 1)))
        if by_sum != by_pairing:
            raise AssertionError("leaf coordinate routes disagree")
        lam.append(by_sum)
    return LeafSpec(xi, tuple(lam))


def sample_leaf(
    xi: CartanPoint,
    delta: float,
    count: int,
    rng_seed: int,
    seed: Seed,
) -> list[ClusterPoint]:
    """Uniform rejection sample of the delta-deep cone window over the leaf.

    The positive block is drawn from the box of half-width |lam_neg|_inf + 1
    (the margin bounds the positive block in terms of the negative one), the
    phases uniformly from the torus.  Raises EmptyRegion when a linear
    program certifies that the window has no interior in the box.
    """
    leaf = leaf_of(xi)
    lam_neg = np.array(leaf.lam_neg)
    bound = float(np.abs(lam_neg).max() + 1.0)
    forms = margin_forms(seed)
    r, m = seed.r, seed.m

    # maximize tau s.t. tau <= f(lam) for every form, lam_pos in the box
    a_ub = np.array([np.concatenate([-vec[r:], [1.0]]) for _, vec in forms])
    b_ub = np.array([float(vec[:r] @ lam_neg) for _, vec in forms])
    bounds = [(-bound, bound)] * m + [(None, None)]
    lp = linprog(
        c=np.concatenate([np.zeros(m), [-1.0]]),
        A_ub=a_ub,
        b_ub=b_ub,
        bounds=bounds,
        method="highs",
    )
    if not lp.success or -lp.fun <= delta:
        raise EmptyRegion(
            f"cone window empty over this leaf (max margin {-lp.fun if lp.success else float('nan'):.4f} <= {delta})"
        )

    rng = np.random.default_rng(rng_seed)
    out: list[ClusterPoint] = []
    attempts = 0
    limit = 200_000 * count
    while len(out) < count:
        attempts += 1
        if attempts > limit:
            raise EmptyRegion("rejection sampling exhausted its attempt budget")
        lam_pos = rng.uniform(-bound, bound, size=m)
        lam = np.concatenate([lam_neg, lam_pos])
        if cone_margin(seed, lam) <= delta:
            continue
        phi = rng.uniform(0.0, 2.0 * np.pi, size=m)
        out.append(ClusterPoint(lam, phi))
    return out
