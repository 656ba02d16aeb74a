import numpy as np
import pytest

from orbitlab.errors import (
    LevelOutOfRange,
    NegativeCoefficient,
    NonReducedWord,
    NotInG0,
)
from orbitlab.liecore import (
    CartanData,
    Weyl,
    exterior_rep,
    gaussian_decompose,
    generalized_minor,
    haar_unitary,
    lift_signs,
    minor_dominant,
    random_special,
    random_triangular,
    simple_lift,
    weyl_lift,
    word_from_perm,
)


# ---------------------------------------------------------------------------
# Cartan data
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("n", [2, 3])
def test_weight_coroot_pairing(n):
    cd = CartanData(n)
    for i in range(1, n):
        for j in range(1, n):
            pairing = cd.fundamental_weight(i) @ cd.coroot(j)
            assert pairing == (1.0 if i == j else 0.0)


def test_trace_form_is_euclidean_on_diagonals(rng):
    x = rng.normal(size=3)
    y = rng.normal(size=3)
    assert np.trace(np.diag(x) @ np.diag(y)) == pytest.approx(x @ y, abs=1e-14)


def test_chevalley_generators_are_elementary():
    cd = CartanData(3)
    assert cd.chevalley_e(1)[0, 1] == 1.0 and cd.chevalley_e(1).sum() == 1.0
    assert cd.chevalley_f(2)[2, 1] == 1.0 and cd.chevalley_f(2).sum() == 1.0
    assert cd.fundamental_columns(2) == (1, 2)


# ---------------------------------------------------------------------------
# Weyl elements and lifts
# ---------------------------------------------------------------------------

def test_word_perm_roundtrip_is_reduced():
    for n in (2, 3):
        for _ in range(20):
            perm = tuple(np.random.default_rng(_).permutation(n) + 1)
            w = Weyl.from_perm(perm)
            again = Weyl.from_word(w.reduced_word(), n)
            assert again.perm == w.perm
            assert len(again.reduced_word()) == w.length()


def test_nonreduced_word_rejected():
    with pytest.raises(NonReducedWord):
        Weyl.from_word((1, 1), 2)
    with pytest.raises(NonReducedWord):
        weyl_lift((1, 2, 1, 2), 3)


def test_simple_lift_block():
    assert np.allclose(simple_lift(1, 2), [[0, -1], [1, 0]])


def test_identity_lift():
    assert np.allclose(weyl_lift(Weyl.identity(3)), np.eye(3))


def test_longest_lift_sl3_column_action():
    w0 = Weyl.longest(3)
    m = weyl_lift(w0)
    # the braid-equivalent word gives the same lift
    assert np.allclose(m, weyl_lift((1, 2, 1), 3))
    assert np.allclose(m, weyl_lift((2, 1, 2), 3))
    # column {1} goes to {3} up to sign
    col = m[:, 0]
    assert abs(abs(col[2]) - 1.0) < 1e-14 and abs(col[0]) < 1e-14 and abs(col[1]) < 1e-14


def test_lifts_compose_along_reduced_words():
    w = Weyl.from_word((1, 2), 3)
    assert np.allclose(weyl_lift(w), simple_lift(1, 3) @ simple_lift(2, 3))
    signs = lift_signs(w)
    assert set(np.abs(signs)) == {1.0}


# ---------------------------------------------------------------------------
# Gaussian decomposition
# ---------------------------------------------------------------------------

def test_gaussian_identity():
    lo, h, up = gaussian_decompose(np.eye(2))
    assert np.allclose(lo, np.eye(2)) and np.allclose(np.diag(h), np.eye(2))
    assert np.allclose(up, np.eye(2))


def test_gaussian_unit_upper():
    g = np.array([[1.0, 1.0], [0.0, 1.0]])
    lo, h, up = gaussian_decompose(g)
    assert np.allclose(lo, np.eye(2))
    assert np.allclose(h, [1.0, 1.0])
    assert np.allclose(up, g)


def test_gaussian_hand_ldu():
    g = np.array([[2.0, 1.0], [1.0, 1.0]])
    lo, h, up = gaussian_decompose(g)
    assert np.allclose(lo, [[1.0, 0.0], [0.5, 1.0]])
    assert np.allclose(h, [2.0, 0.5])
    assert np.allclose(up, [[1.0, 0.5], [0.0, 1.0]])


def test_gaussian_roundtrip_random(rng):
    for n in (2, 3):
        for _ in range(50):
            g = random_special(n, rng)
            try:
                lo, h, up = gaussian_decompose(g)
            except NotInG0:
                continue
            assert np.max(np.abs(lo @ np.diag(h) @ up - g)) <= 1e-10 * max(
                1.0, np.abs(g).max()
            )


def test_gaussian_rejects_vanishing_minor():
    with pytest.raises(NotInG0):
        gaussian_decompose(np.array([[0.0, 1.0], [-1.0, 0.0]]))


# ---------------------------------------------------------------------------
# Generalized minors
# ---------------------------------------------------------------------------

def test_principal_minor_of_identity():
    e = Weyl.identity(3)
    for i in (1, 2):
        assert generalized_minor(np.eye(3), e, e, i) == pytest.approx(1.0)


def test_minor_lower_triangular_sl2():
    b = np.array([[2.0, 0.0], [3.0, 0.5]])
    e, w0 = Weyl.identity(2), Weyl.longest(2)
    assert generalized_minor(b, e, e, 1) == pytest.approx(2.0)
    # sign fixed by the lift convention: this convention gives +c
    assert generalized_minor(b, w0, e, 1) == pytest.approx(3.0)


def test_minor_antidiagonal_sl3():
    b = np.array([[1, 0, 0], [2, 1, 0], [3, 4, 1]], dtype=float)
    w0, e = Weyl.longest(3), Weyl.identity(3)
    val = generalized_minor(b, w0, e, 2)
    assert abs(val) == pytest.approx(5.0)


def test_minor_dominant_product():
    b = np.array([[1, 0, 0], [2, 1, 0], [3, 4, 1]], dtype=float)
    single1 = minor_dominant(b, [1, 0])
    single2 = minor_dominant(b, [0, 1])
    assert abs(single1) == pytest.approx(3.0)
    assert abs(single2) == pytest.approx(5.0)
    assert minor_dominant(b, [1, 1]) == pytest.approx(single1 * single2)
    assert minor_dominant(b, [0, 0]) == pytest.approx(1.0)


def test_minor_dominant_rejects_negative():
    with pytest.raises(NegativeCoefficient):
        minor_dominant(np.eye(2), [-1])


def test_minor_weight_scaling(rng):
    # diagonal translation acts on the antidominant minor by weight characters
    n = 3
    cd = CartanData(n)
    w0 = Weyl.longest(n)
    e = Weyl.identity(n)
    for _ in range(20):
        g = random_special(n, rng)
        hvec = np.exp(rng.normal(size=n) + 1j * rng.normal(size=n))
        hvec /= np.prod(hvec) ** (1.0 / n)
        hpvec = np.exp(rng.normal(size=n) + 1j * rng.normal(size=n))
        hpvec /= np.prod(hpvec) ** (1.0 / n)
        c = rng.integers(0, 3, size=n - 1)
        mu = cd.weight_coefficients(c)
        w0mu = mu[::-1]
        lhs = minor_dominant(np.diag(hvec) @ g @ np.diag(hpvec), c)
        char = np.prod(hvec ** w0mu) * np.prod(hpvec ** mu)
        rhs = char * minor_dominant(g, c)
        if abs(lhs) < 1e-9:
            continue
        assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))


# ---------------------------------------------------------------------------
# Exterior powers
# ---------------------------------------------------------------------------

def test_exterior_level_one_reverses(rng):
    g = random_special(3, rng)
    assert np.allclose(exterior_rep(g, 1), g[::-1, ::-1])


def test_exterior_identity():
    for n, l in ((2, 1), (3, 1), (3, 2)):
        assert np.allclose(exterior_rep(np.eye(n), l), np.eye(len(exterior_rep(np.eye(n), l))))


def test_exterior_diagonal_pairs():
    g = np.diag([2.0, 3.0, 5.0])
    assert np.allclose(np.diag(exterior_rep(g, 2)), [15.0, 10.0, 6.0])


def test_exterior_multiplicative(rng):
    for _ in range(20):
        g = random_special(3, rng)
        h = random_special(3, rng)
        for l in (1, 2):
            lhs = exterior_rep(g @ h, l)
            rhs = exterior_rep(g, l) @ exterior_rep(h, l)
            assert np.max(np.abs(lhs - rhs)) <= 1e-10 * max(1.0, np.abs(lhs).max())


def test_exterior_level_range():
    with pytest.raises(LevelOutOfRange):
        exterior_rep(np.eye(3), 3)


def test_exterior_corner_is_antidominant_minor(rng):
    # fixed-sign ratio between the wedge corner entry and the minor product
    for n in (2, 3):
        for l in range(1, n):
            ratios = []
            for _ in range(50):
                g = random_special(n, rng)
                corner = exterior_rep(g, l)[0, -1]
                coeffs = [1 if i == l else 0 for i in range(1, n)]
                minor = minor_dominant(g, coeffs)
                if abs(minor) < 1e-6:
                    continue
                ratios.append(corner / minor)
            ratios = np.array(ratios)
            assert np.allclose(np.abs(ratios), 1.0, atol=1e-9)
            assert np.max(np.abs(ratios - ratios[0])) < 1e-9


# ---------------------------------------------------------------------------
# Random element generators
# ---------------------------------------------------------------------------

def test_haar_unitary_is_special_unitary(rng):
    for n in (2, 3):
        k = haar_unitary(n, rng)
        assert np.linalg.norm(k @ k.conj().T - np.eye(n)) < 1e-10
        assert abs(np.linalg.det(k) - 1.0) < 1e-10


def test_random_triangular_shape(rng):
    b = random_triangular(3, rng)
    assert np.allclose(np.triu(b, 1), 0.0)
    assert np.all(np.diag(b).real > 0)
    assert abs(np.linalg.det(b) - 1.0) < 1e-10
