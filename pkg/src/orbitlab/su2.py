"""Closed-form rank-1 geometry on the two-sphere and its chart transport.

Cylindrical coordinates (z, phi) on the unit sphere, pole z = 1 at the
torus-fixed point over the smallest Schubert cell.  The scale-s area form is

    sinh(2 s xi) / (2 s (cosh(2 s xi) + z sinh(2 s xi)))  dz ^ dphi     (s != 0)
    xi  dz ^ dphi                                                       (s = 0)

whose total mass is 4 pi xi for every s.  The torus moment coordinate
Psi(z) = log(cosh(2 s xi) + z sinh(2 s xi)) / (2 s) has the area density as
its exact z-derivative, so the pushforward of the area measure under Psi is
uniform on [-xi, xi] at every scale.

Deep-scale numerics: 1 - z shrinks like e^{-2|s| xi}, far below the spacing
of doubles around 1, so everything here that must survive s <= -20 works
with log(1 -+ z) directly or stays in log space end to end.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cluster import (
    ClusterPoint,
    Seed,
    build_seed,
    cluster_coords,
    detropicalize,
)
from .errors import PoleSingular, StepUnderflow, ZeroScale
from .iwasawa import eigensplit, scaled_exp

POLE_TOL = 1e-14


def rank_one_seed() -> Seed:
    return build_seed((1,), 2)


@dataclass(frozen=True)
class SpherePoint:
    z: float
    phi: float

    def __post_init__(self):
        if not -1.0 <= self.z <= 1.0:
            raise ValueError("z must lie in [-1, 1]")


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------

def _logchz(u, z):
    """log(cosh u + z sinh u), stable for large |u| and z near +-1."""
    u = np.asarray(u, dtype=float)
    z = np.asarray(z, dtype=float)
    small = np.abs(u) < 1.0
    out = np.empty(np.broadcast(u, z).shape)
    u_b, z_b = np.broadcast_arrays(u, z)
    if np.any(small):
        out[small] = np.log(np.cosh(u_b[small]) + z_b[small] * np.sinh(u_b[small]))
    big = ~small
    if np.any(big):
        a = np.exp(-2.0 * np.abs(u_b[big]))
        zb = z_b[big]
        neg = u_b[big] < 0
        inner = np.where(neg, (1.0 - zb) + a * (1.0 + zb), (1.0 + zb) + a * (1.0 - zb))
        out[big] = np.abs(u_b[big]) + np.log(inner) - np.log(2.0)
    return out if out.shape else float(out)


def omega_density(z, s: float, xi: float):
    """Area density of the scale-s form at height z (positive on the domain)."""
    if xi <= 0:
        raise ValueError("xi must be positive")
    z = np.asarray(z, dtype=float)
    if s == 0:
        out = np.full(z.shape, float(xi))
        return out if out.shape else float(out)
    u = 2.0 * s * xi
    a = np.exp(-2.0 * abs(u))
    if u < 0:
        val = (1.0 - a) / (-2.0 * s * ((1.0 - z) + a * (1.0 + z)))
    else:
        val = (1.0 - a) / (2.0 * s * ((1.0 + z) + a * (1.0 - z)))
    return val if val.shape else float(val)


def cap_volume(z0: float, s: float, xi: float) -> float:
    """Area of the cap {z >= z0}; at z0 = -1 this is the total mass 4 pi xi."""
    if not -1.0 <= z0 <= 1.0:
        raise ValueError("z0 must lie in [-1, 1]")
    if s == 0:
        return float(2.0 * np.pi * xi * (1.0 - z0))
    u = 2.0 * s * xi
    return float((np.pi / s) * (u - _logchz(u, z0)))


def total_volume(xi: float) -> float:
    return float(4.0 * np.pi * xi)


def moment_coordinate(z, s: float, xi: float):
    """Torus moment coordinate; ranges over [-xi, xi], derivative = density."""
    if s == 0:
        raise ZeroScale("moment coordinate needs s != 0")
    u = 2.0 * s * xi
    val = _logchz(u, np.asarray(z, dtype=float)) / (2.0 * s)
    return val if np.ndim(val) else float(val)


def concentration_fraction(eps: float, s: float, xi: float) -> float:
    """Fraction of the total area inside the cap {z > 1 - eps}."""
    if not 0.0 < eps < 2.0:
        raise ValueError("eps must lie in (0, 2)")
    return cap_volume(1.0 - eps, s, xi) / total_volume(xi)


# ---------------------------------------------------------------------------
# Exact area sampling
# ---------------------------------------------------------------------------

def sample_liouville(count: int, s: float, xi: float, rng: np.random.Generator):
    """Exact area-measure sample by inverting the cap-volume CDF.

    Returns (z, log(1-z), log(1+z), phi); the log complements stay accurate
    when z saturates to 1.0 in double precision.
    """
    q = rng.uniform(size=count)
    phi = rng.uniform(0.0, 2.0 * np.pi, size=count)
    if s == 0:
        z = 2.0 * q - 1.0
        return z, np.log1p(-z), np.log1p(z), phi
    u = 2.0 * s * xi
    log_sinh = abs(u) - np.log(2.0) + np.log1p(-np.exp(-2.0 * abs(u)))
    log1m = u + np.log(np.expm1(-2.0 * u * (1.0 - q))) - log_sinh
    log1p_ = -u + np.log(-np.expm1(2.0 * u * q)) - log_sinh
    z = (np.exp(u * (2.0 * q - 1.0)) - np.cosh(u)) / np.sinh(u)
    z = np.clip(z, -1.0, 1.0)
    return z, log1m, log1p_, phi


def ks_uniform(values: np.ndarray, lo: float, hi: float) -> float:
    """Kolmogorov-Smirnov distance of a sample from uniform[lo, hi]."""
    v = np.sort((np.asarray(values, dtype=float) - lo) / (hi - lo))
    n = v.size
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - v), np.max(v - (i - 1) / n)))


# ---------------------------------------------------------------------------
# Transport between the chart and the sphere
# ---------------------------------------------------------------------------

def orbit_radius(point: ClusterPoint, s: float, seed: Seed | None = None) -> float:
    """Chamber radius of the orbit through the chart point."""
    seed = seed or rank_one_seed()
    b = detropicalize(point, s, seed)
    mu, _ = eigensplit(b)
    return float(np.log(mu[-1]) / (2.0 * abs(s)))


def cluster_to_sphere(point: ClusterPoint, s: float, seed: Seed | None = None) -> SpherePoint:
    """Height and phase of the orbit representative of a chart point.

    The Hermitian representative is X = log(b b*)/(2 s) = t (z, phase) in
    Pauli-like coordinates; raises PoleSingular at the chart boundary
    |z| = 1, which the chart cannot reach.
    """
    seed = seed or rank_one_seed()
    b = detropicalize(point, s, seed)
    mu, k = eigensplit(b)
    d = np.log(mu) / (2.0 * s)
    t = float(d[0] - d.mean())          # s < 0: first column is the large entry
    x = (k * d) @ k.conj().T
    z = float(x[0, 0].real - d.mean()) / t
    if 1.0 - abs(z) <= POLE_TOL:
        raise PoleSingular("chart point maps onto a pole")
    return SpherePoint(z, float(np.angle(x[1, 0])))


def sphere_to_cluster(pt: SpherePoint, s: float, xi: float, seed: Seed | None = None) -> ClusterPoint:
    """Inverse transport at leaf radius xi."""
    seed = seed or rank_one_seed()
    if 1.0 - abs(pt.z) <= POLE_TOL:
        raise PoleSingular("poles are outside the chart")
    w = np.sqrt(1.0 - pt.z ** 2)
    x = xi * np.array(
        [
            [pt.z, w * np.exp(-1j * pt.phi)],
            [w * np.exp(1j * pt.phi), -pt.z],
        ]
    )
    b = scaled_exp(s, x)
    return cluster_coords(b, s, seed)


def cluster_margins_from_sample(z, log1m, log1p_, s: float, xi: float):
    """Chart coordinates (lam_1, lam_{-1}) of area samples, in log space.

    lam_1 is the moment coordinate; lam_{-1} comes from the off-diagonal
    Gram entry |M_21| = |sinh u| sqrt((1-z)(1+z)).  Both stay finite when z
    rounds to 1.  Returns (lam_1, lam_m1, margin) with margin the rank-1
    dominance margin -lam_{-1} - |lam_1|.
    """
    u = 2.0 * s * xi
    z = np.asarray(z, dtype=float)
    lam1 = _logchz(u, z) / (2.0 * s)
    log_sinh = abs(u) - np.log(2.0) + np.log1p(-np.exp(-2.0 * abs(u)))
    log_m21 = log_sinh + 0.5 * (np.asarray(log1m) + np.asarray(log1p_))
    lam_m1 = (log_m21 - s * lam1) / s
    return lam1, lam_m1, -lam_m1 - np.abs(lam1)


def window_fraction(
    xi: float, delta: float, s: float, count: int, rng: np.random.Generator
) -> float:
    """Area fraction of the leaf landing inside the delta-deep cone window."""
    z, log1m, log1p_, _ = sample_liouville(count, s, xi, rng)
    _, _, margin = cluster_margins_from_sample(z, log1m, log1p_, s, xi)
    return float(np.mean(margin > delta))


# ---------------------------------------------------------------------------
# Leaf form coefficient
# ---------------------------------------------------------------------------

def _moment_phase_map(lam_m1: float, lam_1: float, phi_m1: float, s: float, seed: Seed):
    """(moment coordinate, sphere phase) of a chart point, stable at any depth.

    The moment coordinate is assembled as log sum_j e^{2 s D_j} |k_{1j}|^2
    over the orbit eigensplit (a positive sum), the phase from the Hermitian
    representative's off-diagonal entry.
    """
    b = detropicalize(ClusterPoint([lam_m1, lam_1], [phi_m1]), s, seed)
    mu, k = eigensplit(b)
    expo = np.log(mu)
    mx = expo.max()
    psi = (mx + np.log(np.sum(np.exp(expo - mx) * np.abs(k[0, :]) ** 2))) / (2.0 * s)
    d = expo / (2.0 * s)
    x21 = np.sum(d * k[1, :] * np.conj(k[0, :]))
    return float(psi), float(np.angle(x21))


def eta_coefficient(point: ClusterPoint, s: float, h: float = 1e-4) -> float:
    """Leaf area-form coefficient in (lam_1, phi_{-1}) coordinates.

    Pulls the sphere area form, written exactly as d(moment) ^ d(phase),
    back through the transport by central finite differences.  Converges to
    the constant coefficient of the limiting cone form as s -> -infinity
    (at rank one it is constant in both the point and the scale).
    """
    seed = rank_one_seed()
    lam_m1, lam_1 = float(point.lam[0]), float(point.lam[1])
    phi = float(point.phi[0])

    def fval(l1, ph):
        return _moment_phase_map(lam_m1, l1, ph, s, seed)

    def dphase(a, b):
        return float(np.angle(np.exp(1j * (a - b))))

    p_l = fval(lam_1 + h, phi)
    m_l = fval(lam_1 - h, phi)
    p_p = fval(lam_1, phi + h)
    m_p = fval(lam_1, phi - h)
    d_psi_l = (p_l[0] - m_l[0]) / (2.0 * h)
    d_psi_p = (p_p[0] - m_p[0]) / (2.0 * h)
    d_phs_l = dphase(p_l[1], m_l[1]) / (2.0 * h)
    d_phs_p = dphase(p_p[1], m_p[1]) / (2.0 * h)
    det = d_psi_l * d_phs_p - d_psi_p * d_phs_l
    if not np.isfinite(det):
        raise StepUnderflow("transport stencil lost significance")
    return abs(det)


def eta_coefficient_direct(point: ClusterPoint, s: float, h: float = 1e-5) -> float:
    """Same coefficient through the raw (z, phase) chart and the density.

    Only meaningful at moderate depth: the z differences fall below double
    resolution once |s| approaches 18, and at shallow depth the orbit
    radius drifts with the stencil.  Used as a consistency oracle around
    s in [-10, -5].
    """
    seed = rank_one_seed()
    lam_m1, lam_1 = float(point.lam[0]), float(point.lam[1])
    phi = float(point.phi[0])

    def zphase(l1, ph):
        pt = cluster_to_sphere(ClusterPoint([lam_m1, l1], [ph]), s, seed)
        return pt.z, pt.phi

    z0, _ = zphase(lam_1, phi)
    t0 = orbit_radius(point, s, seed)
    dens = omega_density(z0, s, t0)

    def dphase(a, b):
        return float(np.angle(np.exp(1j * (a - b))))

    p_l = zphase(lam_1 + h, phi)
    m_l = zphase(lam_1 - h, phi)
    p_p = zphase(lam_1, phi + h)
    m_p = zphase(lam_1, phi - h)
    d_z_l = (p_l[0] - m_l[0]) / (2.0 * h)
    d_z_p = (p_p[0] - m_p[0]) / (2.0 * h)
    d_ph_l = dphase(p_l[1], m_l[1]) / (2.0 * h)
    d_ph_p = dphase(p_p[1], m_p[1]) / (2.0 * h)
    return abs(dens * (d_z_l * d_ph_p - d_z_p * d_ph_l))
