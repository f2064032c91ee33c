"""Tests for the binarion scalar ring under both signatures."""

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hypermoyal import (
    Binarion,
    GClass,
    NotRepresentableError,
    Sigma,
    SignatureMismatchError,
    ZeroDivisorError,
    character,
    parse_binarion,
    polar,
)

H = Sigma.HYPERBOLIC
C = Sigma.COMPLEX
SIGMAS = (H, C)

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=20)


def b(re, im, sigma):
    return Binarion(Fraction(re), Fraction(im), sigma)


# -- worked examples ---------------------------------------------------------


def test_light_cone_product_vanishes():
    z = b(1, 1, H)
    assert z * z.conjugate() == 0


def test_complex_modulus_product():
    z = b(1, 1, C)
    assert z * z.conjugate() == 2


def test_conjugation():
    assert b(3, 2, H).conjugate() == b(3, -2, H)


def test_modulus_sq_values():
    assert b(2, 1, H).modulus_sq() == 3
    assert b(1, 1, H).modulus_sq() == 0
    assert b(1, 1, H).pos_norm_sq() == 2


def test_invert_multiplies_back():
    z = b(2, 1, H)
    inv = z.invert()
    assert inv == Binarion(Fraction(2, 3), Fraction(-1, 3), H)
    assert z * inv == 1


def test_invert_light_cone_rejected():
    with pytest.raises(ZeroDivisorError, match="light cone"):
        b(1, 1, H).invert()
    with pytest.raises(ZeroDivisorError):
        b(0, 0, H).invert()


def test_invert_unit():
    j = Binarion.unit(H)
    assert j.invert() == j
    i = Binarion.unit(C)
    assert i.invert() == -i


def test_negative_modulus_still_invertible():
    z = b(1, 2, H)
    assert z.classify() is GClass.NEGATIVE_MODULUS
    assert z * z.invert() == 1


# -- character (floating, tolerance 1e-12) -------------------------------------


def _series_cosh_sinh(x: Fraction, terms: int = 30):
    """Independent Taylor evaluation of cosh/sinh with exact rationals."""
    cosh = Fraction(0)
    sinh = Fraction(0)
    power = Fraction(1)
    factorial = 1
    for n in range(terms):
        term = power / factorial
        if n % 2 == 0:
            cosh += term
        else:
            sinh += term
        power *= x
        factorial *= n + 1
    return cosh, sinh


def test_character_identity():
    assert character(0.0, H) == Binarion(1, 0, H)
    assert character(0.0, C) == Binarion(1, 0, C)


def test_character_against_series_oracle():
    expected_cosh, expected_sinh = _series_cosh_sinh(Fraction(1))
    got = character(1.0, H)
    assert abs(got.re - expected_cosh) < 1e-12
    assert abs(got.im - expected_sinh) < 1e-12
    # frozen reference values from the series
    assert math.isclose(float(got.re), 1.5430806348152437, abs_tol=1e-12)
    assert math.isclose(float(got.im), 1.1752011936438014, abs_tol=1e-12)


def test_character_group_law():
    rng = random.Random(20240811)
    for sigma in SIGMAS:
        for _ in range(50):
            t1 = rng.uniform(-2, 2)
            t2 = rng.uniform(-2, 2)
            lhs = character(t1, sigma) * character(t2, sigma)
            rhs = character(t1 + t2, sigma)
            assert abs(lhs.re - rhs.re) < 1e-12
            assert abs(lhs.im - rhs.im) < 1e-12
            inv = character(t1, sigma) * character(-t1, sigma)
            assert abs(inv.re - 1) < 1e-12
            assert abs(inv.im) < 1e-12
            assert abs(character(t1, sigma).modulus_sq() - 1) < 1e-12


# -- polar decomposition ------------------------------------------------------------


def test_polar_of_one():
    hp = polar(Binarion(1, 0, H))
    assert hp.sign == 1
    assert hp.modulus == pytest.approx(1.0)
    assert hp.theta == pytest.approx(0.0)


def test_polar_of_negated_character():
    theta0 = 0.75
    z = -character(theta0, H)
    hp = polar(z)
    assert hp.sign == -1
    assert hp.modulus == pytest.approx(1.0, abs=1e-12)
    assert hp.theta == pytest.approx(theta0, abs=1e-12)


def test_polar_two_plus_j():
    hp = polar(b(2, 1, H))
    assert hp.sign == 1
    assert hp.modulus == pytest.approx(math.sqrt(3), abs=1e-12)
    # artanh(1/2) = log(3)/2
    assert hp.theta == pytest.approx(0.5 * math.log(3), abs=1e-12)
    back = hp.reconstruct()
    assert abs(back.re - 2) < 1e-12
    assert abs(back.im - 1) < 1e-12


def test_polar_rejects_outside_positive_cone():
    with pytest.raises(NotRepresentableError):
        polar(b(1, 1, H))
    with pytest.raises(NotRepresentableError):
        polar(b(1, 2, H))
    with pytest.raises(NotRepresentableError):
        polar(b(2, 1, C))


def test_polar_round_trip_random():
    rng = random.Random(7)
    count = 0
    while count < 200:
        z = b(
            Fraction(rng.randint(-40, 40), rng.randint(1, 9)),
            Fraction(rng.randint(-40, 40), rng.randint(1, 9)),
            H,
        )
        if z.modulus_sq() <= 0:
            continue
        count += 1
        back = polar(z).reconstruct()
        scale = max(1.0, z.pos_norm())
        assert abs(back.re - z.re) / scale < 1e-12
        assert abs(back.im - z.im) / scale < 1e-12


# -- ring axioms, involution, classification ------------------------------------------


def _random_binarion(rng, sigma):
    return b(
        Fraction(rng.randint(-30, 30), rng.randint(1, 12)),
        Fraction(rng.randint(-30, 30), rng.randint(1, 12)),
        sigma,
    )


@pytest.mark.parametrize("sigma", SIGMAS)
def test_ring_axioms_exact(sigma):
    rng = random.Random(int(sigma.value) + 100)
    one = Binarion.one(sigma)
    for _ in range(500):
        x = _random_binarion(rng, sigma)
        y = _random_binarion(rng, sigma)
        z = _random_binarion(rng, sigma)
        assert (x + y) + z == x + (y + z)
        assert x + y == y + x
        assert (x * y) * z == x * (y * z)
        assert x * y == y * x
        assert x * (y + z) == x * y + x * z
        assert x * one == x
        assert x + (-x) == 0
        # involution laws
        assert x.conjugate().conjugate() == x
        assert (x * y).conjugate() == x.conjugate() * y.conjugate()
        assert (x + y).conjugate() == x.conjugate() + y.conjugate()
        # norms
        assert (x * y).modulus_sq() == x.modulus_sq() * y.modulus_sq()
        assert x.pos_norm_sq() >= 0
        assert x.modulus_sq() == (x * x.conjugate()).re
        # classification partition
        tag = x.classify()
        if sigma is C:
            assert tag in (GClass.INVERTIBLE, GClass.ZERO)
        if tag in (GClass.INVERTIBLE, GClass.NEGATIVE_MODULUS):
            assert x * x.invert() == 1
        elif tag is GClass.LIGHT_CONE:
            assert x.modulus_sq() == 0 and not x.is_zero()
        else:
            assert x.is_zero()


@given(re1=fractions, im1=fractions, re2=fractions, im2=fractions)
def test_modulus_multiplicative_hypothesis(re1, im1, re2, im2):
    for sigma in SIGMAS:
        x = Binarion(re1, im1, sigma)
        y = Binarion(re2, im2, sigma)
        assert (x * y).modulus_sq() == x.modulus_sq() * y.modulus_sq()


@given(re=fractions, im=fractions)
def test_conjugation_is_involution_hypothesis(re, im):
    for sigma in SIGMAS:
        z = Binarion(re, im, sigma)
        assert z.conjugate().conjugate() == z
        assert z.modulus_sq() == z.re**2 - sigma.value * z.im**2


# -- signature discipline and text form -----------------------------------------------


def test_cross_sigma_rejected():
    with pytest.raises(SignatureMismatchError):
        b(1, 2, H) + b(1, 2, C)
    with pytest.raises(SignatureMismatchError):
        b(1, 2, H) * b(1, 2, C)


def test_text_rendering():
    assert str(b(3, 2, H)) == "3 + 2j"
    assert str(b(3, -2, H)) == "3 - 2j"
    assert str(b(Fraction(3, 2), 1, C)) == "3/2 + 1i"
    assert str(b(0, -1, H)) == "-1j"
    assert str(b(5, 0, H)) == "5"


def test_text_parse_round_trip():
    rng = random.Random(3)
    for sigma in SIGMAS:
        for _ in range(100):
            z = _random_binarion(rng, sigma)
            assert parse_binarion(str(z), sigma) == z
