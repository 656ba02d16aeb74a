import numpy as np
import pytest

from orbitlab.cluster import (
    ClusterPoint,
    box_sign_check,
    build_seed,
    casimir_coords,
    casimir_jacobian,
    chart_targets,
    cluster_coords,
    detropicalize,
    detropicalize_newton,
    graph_solve,
    minors_map,
)
from orbitlab.errors import NonReducedWord, OffCell, RangeExceeded, ZeroScale
from orbitlab.liecore import Weyl


# ---------------------------------------------------------------------------
# Seed construction
# ---------------------------------------------------------------------------

def test_seed_sl2(seed2):
    assert seed2.indices == (-1, 1)
    assert seed2.complex_set == (-1,)
    assert seed2.r == 1 and seed2.m == 1
    assert seed2.weyl_v(1).perm == (1, 2)
    assert seed2.weyl_v(-1).perm == (2, 1)


def test_seed_sl3_standard(seed3):
    # v_2 fixes the second fundamental weight, so index 2 stays real
    assert seed3.complex_set == (-2, -1, 1)
    assert len(seed3.indices) - len(seed3.complex_set) == seed3.r
    assert seed3.weyl_v(2).perm == Weyl.from_word((1,), 3).perm
    assert seed3.letter(2) == 2 and seed3.letter(3) == 1
    assert seed3.letter(-1) == 1 and seed3.letter(-2) == 2


def test_seed_sl3_alternate(seed3_alt):
    assert seed3_alt.complex_set == (-2, -1, 1)
    assert seed3_alt.letter(2) == 1 and seed3_alt.letter(3) == 2


def test_seed_rejects_bad_words():
    with pytest.raises(NonReducedWord):
        build_seed((1, 1), 2)
    with pytest.raises(NonReducedWord):
        build_seed((1, 2), 3)  # reduced but not the longest element


# ---------------------------------------------------------------------------
# Minors of cell points
# ---------------------------------------------------------------------------

def test_minors_lower_triangular_sl2(seed2):
    b = np.array([[0.7, 0.0], [0.3 - 0.4j, 1.0 / 0.7]])
    vals = minors_map(b, seed2)
    assert vals[seed2.lam_index(1)] == pytest.approx(0.7)
    assert vals[seed2.lam_index(-1)] == pytest.approx(0.3 - 0.4j)


def test_minors_hand_example_sl3(seed3):
    b = np.array([[1, 0, 0], [2, 1, 0], [3, 4, 1]], dtype=complex)
    vals = minors_map(b, seed3)
    assert abs(vals[seed3.lam_index(-2)]) == pytest.approx(5.0)
    assert abs(vals[seed3.lam_index(-1)]) == pytest.approx(3.0)
    assert abs(vals[seed3.lam_index(1)]) == pytest.approx(2.0)
    assert vals[seed3.lam_index(2)] == pytest.approx(1.0)
    assert vals[seed3.lam_index(3)] == pytest.approx(1.0)


def test_identity_is_off_cell(seed2, seed3):
    with pytest.raises(OffCell):
        minors_map(np.eye(2), seed2)
    with pytest.raises(OffCell):
        minors_map(np.eye(3), seed3)


# ---------------------------------------------------------------------------
# Chart: closed form and round trips
# ---------------------------------------------------------------------------

def test_detropicalize_sl2_hand_example(seed2):
    p = ClusterPoint([-2.0, 0.5], [np.pi / 2.0])
    b = detropicalize(p, -1.0, seed2)
    assert b[0, 0] == pytest.approx(np.exp(-0.5))
    assert b[1, 1] == pytest.approx(np.exp(0.5))
    # e^2 * e^{-i pi/2} = -i e^2 with this sign convention
    assert b[1, 0] == pytest.approx(-1j * np.exp(2.0), rel=1e-12)
    vals = minors_map(b, seed2)
    targets = chart_targets(p, -1.0, seed2)
    assert np.max(np.abs(vals - targets)) <= 1e-10 * np.abs(targets).max()


def test_detropicalize_needs_negative_scale(seed2):
    p = ClusterPoint([-1.0, 0.0], [0.0])
    with pytest.raises(ZeroScale):
        detropicalize(p, 0.0, seed2)
    with pytest.raises(ZeroScale):
        detropicalize(p, 1.0, seed2)


def test_detropicalize_overflow_guard(seed2):
    p = ClusterPoint([-30.0, 0.0], [0.0])
    with pytest.raises(RangeExceeded):
        detropicalize(p, -20.0, seed2)


def test_reality_pattern(seed3, rng):
    # minors outside the complex set stay real positive on the chart image
    for _ in range(20):
        lam = rng.uniform(-2, 2, size=5)
        phi = rng.uniform(0, 2 * np.pi, size=3)
        b = detropicalize(ClusterPoint(lam, phi), -2.0, seed3)
        vals = minors_map(b, seed3)
        for k in seed3.indices:
            v = vals[seed3.lam_index(k)]
            if k in seed3.complex_set:
                continue
            assert abs(v.imag) <= 1e-12 * abs(v)
            assert v.real > 0


@pytest.mark.parametrize("word", [(1,), (1, 2, 1), (2, 1, 2)])
def test_chart_roundtrip(word, rng):
    n = 2 if word == (1,) else 3
    seed = build_seed(word, n)
    for _ in range(100):
        lam = rng.uniform(-2, 2, size=seed.r + seed.m)
        phi = rng.uniform(0, 2 * np.pi, size=seed.m)
        s = rng.uniform(-4.0, -0.5)
        p = ClusterPoint(lam, phi)
        b = detropicalize(p, s, seed)
        targets = chart_targets(p, s, seed)
        vals = minors_map(b, seed)
        assert np.max(np.abs(vals - targets) / np.maximum(1.0, np.abs(targets))) <= 1e-10
        p2 = cluster_coords(b, s, seed)
        b2 = detropicalize(p2, s, seed)
        assert np.max(np.abs(b2 - b)) <= 1e-9 * max(1.0, np.abs(b).max())


def test_newton_matches_closed_form(seed3, rng):
    for _ in range(50):
        lam = rng.uniform(-1.5, 1.5, size=5)
        phi = rng.uniform(0, 2 * np.pi, size=3)
        s = rng.uniform(-8.0, -1.0)
        p = ClusterPoint(lam, phi)
        b_closed = detropicalize(p, s, seed3)
        b_newton = detropicalize_newton(p, s, seed3)
        gap = np.max(np.abs(b_newton - b_closed) / np.maximum(1.0, np.abs(b_closed)))
        assert gap <= 1e-9


def test_seed_invariance_between_words(seed3, seed3_alt, rng):
    # the antidominant minors do not depend on the word used to invert
    for _ in range(10):
        lam = rng.uniform(-1.5, 1.5, size=5)
        phi = rng.uniform(0, 2 * np.pi, size=3)
        s = -2.0
        b = detropicalize(ClusterPoint(lam, phi), s, seed3)
        p_alt = cluster_coords(b, s, seed3_alt)
        b_back = detropicalize(p_alt, s, seed3_alt)
        assert np.max(np.abs(b_back - b)) <= 1e-9 * max(1.0, np.abs(b).max())


# ---------------------------------------------------------------------------
# Casimir coordinates
# ---------------------------------------------------------------------------

def test_casimir_coords_closed_form_value(seed2):
    p = ClusterPoint([-1.0, 0.2], [0.0])
    f = casimir_coords(p, -5.0, seed2)
    # frozen: -(10 + log(1 + e^-8 + e^-12)) / 10
    assert f[0] == pytest.approx(-1.0000341548505924, rel=1e-13)


def test_casimir_coords_limit(seed2):
    p = ClusterPoint([-1.0, 0.2], [0.0])
    errs = [abs(casimir_coords(p, s, seed2)[0] + 1.0) for s in (-5.0, -10.0, -15.0)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-10


def test_casimir_coords_symmetric_closed_form(seed2):
    # lam_1 = 0, phi = 0: f(s) = log(2 + e^{2 s lam_-1}) / (2 s)
    lam_m1 = -0.7
    p = ClusterPoint([lam_m1, 0.0], [0.0])
    for s in (-1.0, -3.0):
        expected = np.log(2.0 + np.exp(2 * s * lam_m1)) / (2 * s)
        assert casimir_coords(p, s, seed2)[0] == pytest.approx(expected, rel=1e-12)


# ---------------------------------------------------------------------------
# Jacobian structure
# ---------------------------------------------------------------------------

def test_jacobian_deep_identity(seed2):
    p = ClusterPoint([-1.0, 0.2], [0.0])
    jac = casimir_jacobian(p, -20.0, seed2)
    assert jac.shape == (1, 3)
    assert abs(jac[0, 0] - 1.0) <= 1e-10
    assert abs(jac[0, 1]) <= 1e-10
    assert abs(jac[0, 2]) <= 1e-10


def test_jacobian_moderate_bound(seed2):
    # off-block entries controlled by the squared margin scale
    p = ClusterPoint([-1.0, 0.2], [0.0])
    jac = casimir_jacobian(p, -2.0, seed2)
    bound = 3.0 * np.exp(2 * -2.0 * 0.8)
    assert abs(jac[0, 1]) <= bound
    assert abs(jac[0, 2]) <= bound


def test_jacobian_row_dominance_sl3(seed3, rng):
    from orbitlab.iwasawa import CartanPoint
    from orbitlab.tropical import sample_leaf

    pts = sample_leaf(CartanPoint([2.0, 0.0, -2.0]), 0.5, 5, 7, seed3)
    for p in pts:
        jac = casimir_jacobian(p, -6.0, seed3)
        diag = np.diag(jac[:, : seed3.r])
        assert np.max(np.abs(diag - 1.0)) <= 0.1


# ---------------------------------------------------------------------------
# Graph solver
# ---------------------------------------------------------------------------

def test_graph_solve_near_target(seed2):
    lam_pos, phi = np.array([0.2]), np.array([0.0])
    target = np.array([-1.0])
    out = graph_solve(lam_pos, phi, target, -10.0, seed2)
    assert abs(out[0] + 1.0) <= 1e-6
    f = casimir_coords(ClusterPoint(np.concatenate([out, lam_pos]), phi), -10.0, seed2)
    assert abs(f[0] - target[0]) <= 1e-9


def test_graph_solve_fixed_point(seed2):
    p = ClusterPoint([-1.0, 0.2], [0.0])
    target = casimir_coords(p, -4.0, seed2)
    out = graph_solve(p.lam[1:2] * 0 + 0.2, p.phi, target, -4.0, seed2)
    f = casimir_coords(ClusterPoint(np.concatenate([out, [0.2]]), p.phi), -4.0, seed2)
    assert np.max(np.abs(f - target)) <= 1e-12


def test_box_sign_check_sl2(seed2):
    lam_pos, phi = np.array([0.2]), np.array([0.0])
    target = np.array([-1.0])
    ok, clearance = box_sign_check(lam_pos, phi, target, -10.0, seed2, 0.1)
    assert ok and clearance > 0
    # the map sits below the diagonal, so the low face needs depth to flip sign
    f_low = casimir_coords(ClusterPoint([-1.1, 0.2], [0.0]), -10.0, seed2)[0]
    f_high = casimir_coords(ClusterPoint([-0.9, 0.2], [0.0]), -10.0, seed2)[0]
    assert f_low < -1.0 < f_high


def test_graph_solve_sl3(seed3):
    from orbitlab.iwasawa import CartanPoint
    from orbitlab.tropical import sample_leaf

    p = sample_leaf(CartanPoint([2.0, 0.0, -2.0]), 0.5, 1, 11, seed3)[0]
    lam_pos, phi = p.lam[seed3.r:], p.phi
    target = p.lam[: seed3.r].copy()
    out = graph_solve(lam_pos, phi, target, -8.0, seed3)
    f = casimir_coords(ClusterPoint(np.concatenate([out, lam_pos]), phi), -8.0, seed3)
    assert np.max(np.abs(f - target)) <= 1e-9
