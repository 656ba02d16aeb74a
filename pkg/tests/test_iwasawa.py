import numpy as np
import pytest

from orbitlab.errors import (
    DegenerateSpectrum,
    RangeExceeded,
    ZeroScale,
)
from orbitlab.iwasawa import (
    CartanPoint,
    casimir,
    casimir_identity_value,
    casimir_squared,
    dressing,
    eigensplit,
    in_weyl_hull,
    iwasawa_factor,
    moment_map,
    moment_map_cholesky,
    offdiag_max,
    orbit_point,
    orbit_split,
    scaled_exp,
    scaled_log,
)
from orbitlab.liecore import (
    Weyl,
    haar_unitary,
    random_special,
    random_triangular,
    weyl_lift,
)


# ---------------------------------------------------------------------------
# Iwasawa factorization
# ---------------------------------------------------------------------------

def test_iwasawa_of_unitary_is_trivial(rng):
    k = haar_unitary(3, rng)
    b, k2 = iwasawa_factor(k)
    assert np.allclose(b, np.eye(3), atol=1e-10)
    assert np.allclose(k2, k, atol=1e-10)


def test_iwasawa_hand_example():
    g = np.array([[1.0, 1.0], [0.0, 1.0]])
    b, k = iwasawa_factor(g)
    s2 = np.sqrt(2.0)
    assert np.allclose(b, [[s2, 0.0], [1.0 / s2, 1.0 / s2]])
    assert np.allclose(k, np.array([[1.0, 1.0], [-1.0, 1.0]]) / s2)
    assert np.allclose(b @ k, g)


def test_iwasawa_of_triangular_is_identity_frame(rng):
    b = random_triangular(3, rng)
    b2, k = iwasawa_factor(b)
    assert np.allclose(b2, b, atol=1e-9 * max(1.0, np.abs(b).max()))
    assert np.allclose(k, np.eye(3), atol=1e-9)


def test_iwasawa_refactor_is_stable(rng):
    for n in (2, 3):
        for _ in range(20):
            g = random_special(n, rng)
            b, k = iwasawa_factor(g)
            b2, k2 = iwasawa_factor(b @ k)
            scale = max(1.0, np.abs(b).max())
            assert np.max(np.abs(b2 - b)) <= 1e-12 * scale
            assert np.max(np.abs(k2 - k)) <= 1e-11


# ---------------------------------------------------------------------------
# Dressing action
# ---------------------------------------------------------------------------

def test_dressing_identity(rng):
    b = random_triangular(2, rng)
    assert np.allclose(dressing(np.eye(2), b), b)


def test_dressing_torus_twists_phase():
    theta = 0.7
    k = np.diag([np.exp(1j * theta), np.exp(-1j * theta)])
    b = np.array([[2.0, 0.0], [1.0 + 1.0j, 0.5]])
    out = dressing(k, b)
    assert np.allclose(out[0, 0], 2.0)
    assert np.allclose(out[1, 0], np.exp(-2j * theta) * (1.0 + 1.0j))
    # theta = pi/2 flips the sign of the off-diagonal entry
    kq = np.diag([1j, -1j])
    assert np.allclose(dressing(kq, b)[1, 0], -(1.0 + 1.0j))


def test_dressing_group_law(rng):
    for n in (2, 3):
        for _ in range(10):
            k1, k2 = haar_unitary(n, rng), haar_unitary(n, rng)
            b = random_triangular(n, rng)
            lhs = dressing(k1 @ k2, b)
            rhs = dressing(k1, dressing(k2, b))
            assert np.max(np.abs(lhs - rhs)) <= 1e-9 * max(1.0, np.abs(lhs).max())


def test_casimirs_invariant_under_dressing(rng):
    for n in (2, 3):
        for _ in range(10):
            b = random_triangular(n, rng)
            k = haar_unitary(n, rng)
            for i in range(1, n):
                c0 = casimir(b, i)
                c1 = casimir(dressing(k, b), i)
                assert abs(c1 - c0) <= 1e-9 * c0


# ---------------------------------------------------------------------------
# Scale maps
# ---------------------------------------------------------------------------

def test_scaled_exp_diagonal():
    x = np.diag([1.0, -1.0]).astype(complex)
    b = scaled_exp(-2.0, x)
    assert np.allclose(np.diag(b).real, [np.exp(-2.0), np.exp(2.0)])
    assert np.allclose(b, np.diag(np.diag(b)))


def test_scaled_exp_zero_matrix():
    for s in (-1.0, -5.0, 3.0):
        assert np.allclose(scaled_exp(s, np.zeros((2, 2))), np.eye(2))


def test_scaled_exp_conjugated_example():
    k = np.array([[1.0, 1.0], [-1.0, 1.0]]) / np.sqrt(2.0)
    x = k @ np.diag([1.0, -1.0]) @ k.conj().T
    b = scaled_exp(-5.0, x)
    # frozen: sqrt(cosh(10))
    assert b[0, 0].real == pytest.approx(104.94395132690270, rel=1e-12)
    gram = b @ b.conj().T
    target = k @ np.diag([np.exp(-10.0), np.exp(10.0)]) @ k.conj().T
    assert np.max(np.abs(gram - target)) <= 1e-9 * np.abs(target).max()


def test_scaled_exp_zero_scale_and_overflow():
    with pytest.raises(ZeroScale):
        scaled_exp(0.0, np.zeros((2, 2)))
    with pytest.raises(RangeExceeded):
        scaled_exp(-400.0, np.diag([1.0, -1.0]).astype(complex))


def test_scaled_exp_equivariance(rng):
    for n in (2, 3):
        for s in (-1.0, -5.0):
            t = np.sort(rng.uniform(-2, 2, size=n))[::-1]
            t -= t.mean()
            point = CartanPoint(t)
            k0 = haar_unitary(n, rng)
            x = orbit_point(k0, point)
            k = haar_unitary(n, rng)
            lhs = scaled_exp(s, k @ x @ k.conj().T)
            rhs = dressing(k, scaled_exp(s, x))
            assert np.max(np.abs(lhs - rhs)) <= 1e-8 * max(1.0, np.abs(lhs).max())


def test_scaled_log_identity_and_diagonal():
    assert np.allclose(scaled_log(-3.0, np.eye(2)), np.zeros((2, 2)))
    b = np.diag([np.exp(-5.0 * 1.3), np.exp(5.0 * 1.3)]).astype(complex)
    x = scaled_log(-5.0, b)
    assert np.allclose(np.diag(x).real, [1.3, -1.3])


def test_scaled_roundtrip(rng):
    for s in (-1.0, -5.0):
        for _ in range(50):
            b = random_triangular(2, rng)
            x = scaled_log(s, b)
            b2 = scaled_exp(s, x)
            assert np.max(np.abs(b2 - b)) <= 1e-8 * max(1.0, np.abs(b).max())


# ---------------------------------------------------------------------------
# Casimirs
# ---------------------------------------------------------------------------

def test_casimir_identity_values():
    assert casimir(np.eye(2), 1) == pytest.approx(np.sqrt(2.0))
    assert casimir(np.eye(3), 1) == pytest.approx(np.sqrt(3.0))
    assert casimir(np.eye(3), 2) == pytest.approx(np.sqrt(3.0))
    assert casimir_identity_value(3, 2) == pytest.approx(np.sqrt(3.0))


def test_casimir_direct_sum():
    b = np.array([[2.0, 0.0], [1.0 + 1.0j, 0.5]])
    assert casimir_squared(b, 1) == pytest.approx(6.25)
    assert casimir(b, 1) == pytest.approx(2.5)


def test_casimir_diagonal_closed_form():
    st = -5.0 * 0.8
    b = np.diag([np.exp(st), np.exp(-st)]).astype(complex)
    assert casimir_squared(b, 1) == pytest.approx(np.exp(2 * st) + np.exp(-2 * st))


# ---------------------------------------------------------------------------
# Orbit splitting
# ---------------------------------------------------------------------------

def test_orbit_split_diagonal():
    m = np.diag([np.exp(-6.0), np.exp(6.0)]).astype(complex)
    d, k = orbit_split(m, -3.0)
    assert np.allclose(d.t, [1.0, -1.0])
    assert np.allclose(k, np.eye(2), atol=1e-12)


def test_orbit_split_hand_example():
    b = np.array([[np.exp(-1.0), 0.0], [np.exp(5.0), np.exp(1.0)]], dtype=complex)
    d, k = orbit_split(b @ b.conj().T, -5.0, factor=b)
    # frozen from the 2x2 eigenproblem
    assert d.t[0] == pytest.approx(1.00003415464462, rel=1e-10)
    assert abs(k[1, 0]) == pytest.approx(2.47791332460805e-3, rel=1e-9)
    gram = k @ np.diag(np.exp(2 * -5.0 * d.t)) @ k.conj().T
    assert np.max(np.abs(gram - b @ b.conj().T)) <= 1e-8 * np.abs(gram).max()


def test_orbit_split_reconstruction(rng):
    for n in (2, 3):
        for _ in range(50):
            b = random_triangular(n, rng)
            s = rng.uniform(-6.0, -0.5)
            gram = b @ b.conj().T
            d, k = orbit_split(gram, s, factor=b)
            rebuilt = k @ np.diag(np.exp(2 * s * d.t)) @ k.conj().T
            assert np.max(np.abs(rebuilt - gram)) <= 1e-8 * np.abs(gram).max()
            assert abs(np.linalg.det(k) - 1.0) < 1e-9
            assert np.all(np.diff(d.t) < 0)


def test_orbit_split_degenerate():
    with pytest.raises(DegenerateSpectrum):
        orbit_split(np.eye(2).astype(complex), -1.0)


def test_eigensplit_matches_plain_eigh_at_moderate_scale(rng):
    b = random_triangular(3, rng)
    mu, k = eigensplit(b)
    ref = np.linalg.eigh(b @ b.conj().T)[0]
    assert np.allclose(mu, ref, rtol=1e-9)
    assert np.linalg.norm(k.conj().T @ k - np.eye(3)) < 1e-10


# ---------------------------------------------------------------------------
# Moment map
# ---------------------------------------------------------------------------

def test_moment_identity_frame_is_fixed_point():
    d = CartanPoint([1.0, -1.0])
    for s in (-1.0, -5.0, -20.0):
        assert np.allclose(moment_map(np.eye(2, dtype=complex), d, s), d.t, atol=1e-12)


def test_moment_weyl_frames_are_fixed_points():
    for n in (2, 3):
        t = np.array([1.5, -1.5]) if n == 2 else np.array([2.0, 0.5, -2.5])
        point = CartanPoint(t)
        perms = [(1, 2), (2, 1)] if n == 2 else [
            (1, 2, 3), (2, 1, 3), (1, 3, 2), (3, 1, 2), (2, 3, 1), (3, 2, 1)
        ]
        for perm in perms:
            w = Weyl.from_perm(perm)
            k = weyl_lift(w)
            expected = np.array([t[w.inverse().apply(j) - 1] for j in range(1, n + 1)])
            for s in (-1.0, -5.0, -20.0):
                psi = moment_map(k, point, s)
                assert np.max(np.abs(psi - expected)) <= 1e-9


def test_moment_equatorial_closed_form():
    k = np.array([[1.0, 1.0], [-1.0, 1.0]], dtype=complex) / np.sqrt(2.0)
    psi = moment_map(k, CartanPoint([1.0, -1.0]), -5.0)
    # frozen: log(cosh 10)/(-10)
    assert psi[0] == pytest.approx(-0.93068528215012083, rel=1e-12)
    assert psi.sum() == pytest.approx(0.0, abs=1e-12)


def test_moment_matches_cholesky_route(rng):
    for n in (2, 3):
        t = np.sort(rng.uniform(-2, 2, size=n))[::-1]
        t -= t.mean()
        point = CartanPoint(t)
        for _ in range(10):
            k = haar_unitary(n, rng)
            for s in (-0.5, -3.0):
                a = moment_map(k, point, s)
                b = moment_map_cholesky(k, point, s)
                assert np.max(np.abs(a - b)) <= 1e-9


def test_moment_in_weyl_hull(rng):
    point = CartanPoint([2.0, 0.5, -2.5])
    for _ in range(25):
        k = haar_unitary(3, rng)
        psi = moment_map(k, point, -2.0)
        assert in_weyl_hull(psi, point)
    assert not in_weyl_hull(np.array([3.0, 0.0, -3.0]), point)


def test_moment_zero_scale():
    with pytest.raises(ZeroScale):
        moment_map(np.eye(2, dtype=complex), CartanPoint([1.0, -1.0]), 0.0)


def test_offdiag_max():
    assert offdiag_max(np.array([[1.0, 0.25], [0.5, 1.0]])) == 0.5
