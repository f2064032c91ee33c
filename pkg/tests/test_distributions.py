"""Tests for point-supported distributions, the Fourier calculus, and the
distributional star product."""

import random
from fractions import Fraction

import pytest

from hypermoyal import (
    Binarion,
    CharSum,
    DimensionMismatchError,
    ExpPoly,
    PolySymbol,
    Sigma,
    Ultradistribution,
    inverse_fourier_symbol,
    paley_wiener_growth,
    star,
    star_distributional,
    symbol_from_distribution,
)

H = Sigma.HYPERBOLIC
C = Sigma.COMPLEX
SIGMAS = (H, C)


def _random_fraction(rng):
    return Fraction(rng.randint(-4, 4), rng.randint(1, 3))


def _random_binarion(rng, sigma):
    return Binarion(_random_fraction(rng), _random_fraction(rng), sigma)


def _random_distribution(rng, dim, sigma, max_atoms=6, max_order=4):
    atoms = []
    for _ in range(rng.randint(1, max_atoms)):
        loc = tuple(_random_fraction(rng) for _ in range(dim))
        order = tuple(rng.randint(0, max_order) for _ in range(dim))
        atoms.append((loc, order, _random_binarion(rng, sigma)))
    return Ultradistribution(dim, sigma, atoms)


def _random_exp_poly(rng, dim, sigma, max_terms=3, max_degree=3):
    out = ExpPoly.zero(dim, sigma)
    for _ in range(rng.randint(1, max_terms)):
        freq = tuple(_random_fraction(rng) for _ in range(dim))
        exps = tuple(rng.randint(0, max_degree) for _ in range(dim))
        term = ExpPoly(
            dim, sigma, {(freq, exps): CharSum.from_scalar(_random_binarion(rng, sigma))}
        )
        out = out + term
    return out


def _random_symbol(rng, k, sigma, max_degree=4, max_terms=3):
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        alpha = [0] * k
        beta = [0] * k
        for _ in range(rng.randint(0, max_degree)):
            slot = rng.randrange(2 * k)
            if slot < k:
                alpha[slot] += 1
            else:
                beta[slot - k] += 1
        key = (tuple(alpha), tuple(beta))
        coeff = _random_binarion(rng, sigma)
        existing = terms.get(key)
        terms[key] = coeff if existing is None else existing + coeff
    return PolySymbol(k, sigma, terms)


# -- CharSum (formal character ring) ------------------------------------------------


def test_charsum_group_law():
    for sigma in SIGMAS:
        a = CharSum.character(Fraction(1, 2), sigma)
        b = CharSum.character(Fraction(1, 3), sigma)
        assert a * b == CharSum.character(Fraction(5, 6), sigma)
        assert a * a.conjugate() == CharSum.one(sigma)


def test_charsum_float_evaluation():
    import math

    value = CharSum.character(Fraction(3, 4), H)
    re, im = value.to_floats()
    assert re == pytest.approx(math.cosh(0.75), abs=1e-12)
    assert im == pytest.approx(math.sinh(0.75), abs=1e-12)
    value_c = CharSum.character(Fraction(3, 4), C)
    re, im = value_c.to_floats()
    assert re == pytest.approx(math.cos(0.75), abs=1e-12)
    assert im == pytest.approx(math.sin(0.75), abs=1e-12)


# -- pairing -------------------------------------------------------------------------


def test_pair_delta_evaluates():
    rng = random.Random(3)
    for sigma in SIGMAS:
        f = _random_exp_poly(rng, 1, sigma)
        delta = Ultradistribution.delta((0,), sigma)
        assert delta.pair(f) == f.evaluate((0,))


def test_pair_derivative_sign_convention():
    for sigma in SIGMAS:
        d1 = Ultradistribution.delta((0,), sigma).derivative()
        x_sq = ExpPoly.monomial((2,), 1, sigma)
        x = ExpPoly.monomial((1,), 1, sigma)
        assert d1.pair(x_sq).is_zero()
        assert d1.pair(x) == CharSum.from_scalar(Binarion(-1, 0, sigma))


def test_pair_character_gives_unit_powers():
    for sigma in SIGMAS:
        u = Binarion.unit(sigma)
        for n in range(5):
            dn = Ultradistribution.delta((0,), sigma, order=(n,))
            for y0 in (Fraction(1), Fraction(-2, 3)):
                f = ExpPoly.character((y0,), sigma)
                expected = CharSum.from_scalar((-(u * y0)) ** n)
                assert dn.pair(f) == expected


def test_pair_is_bilinear():
    rng = random.Random(5)
    for sigma in SIGMAS:
        lam = _random_distribution(rng, 2, sigma, max_atoms=3, max_order=2)
        mu = _random_distribution(rng, 2, sigma, max_atoms=3, max_order=2)
        f = _random_exp_poly(rng, 2, sigma, max_terms=2, max_degree=2)
        g = _random_exp_poly(rng, 2, sigma, max_terms=2, max_degree=2)
        assert (lam + mu).pair(f) == lam.pair(f) + mu.pair(f)
        assert lam.pair(f + g) == lam.pair(f) + lam.pair(g)


def test_pair_dimension_mismatch():
    lam = Ultradistribution.delta((0, 0), H)
    f = ExpPoly.one(1, H)
    with pytest.raises(DimensionMismatchError):
        lam.pair(f)


# -- Fourier transform ------------------------------------------------------------


def test_fourier_of_delta_is_one():
    for sigma in SIGMAS:
        assert Ultradistribution.delta((0,), sigma).fourier() == ExpPoly.one(1, sigma)


def test_fourier_of_delta_derivatives():
    for sigma in SIGMAS:
        u = Binarion.unit(sigma)
        for n in range(7):
            lam = Ultradistribution.delta((0,), sigma, order=(n,))
            assert lam.fourier() == ExpPoly.monomial((n,), (-u) ** n, sigma)


def test_fourier_of_shifted_delta_is_character():
    for sigma in SIGMAS:
        lam = Ultradistribution.delta((1,), sigma)
        assert lam.fourier() == ExpPoly.character((1,), sigma)


def test_fourier_is_pairing_with_character():
    """F(lambda)(y0) equals the pairing with exp(u*y0*x), pointwise."""
    rng = random.Random(7)
    for sigma in SIGMAS:
        lam = _random_distribution(rng, 1, sigma, max_atoms=4, max_order=3)
        image = lam.fourier()
        for y0 in (Fraction(0), Fraction(2, 3), Fraction(-1)):
            assert image.evaluate((y0,)) == lam.pair(ExpPoly.character((y0,), sigma))


def test_transform_identities_randomized():
    rng = random.Random(11)
    for sigma in SIGMAS:
        u = Binarion.unit(sigma)
        for _ in range(40):
            lam = _random_distribution(rng, 1, sigma)
            n = rng.randint(1, 4)
            # derivative of the transform = u^n times transform of x^n * lambda
            lhs = lam.fourier().differentiate_multi((n,))
            rhs = (u**n) * lam.mul_monomial((n,)).fourier()
            assert lhs == rhs
            # transform of the derivative = (-u y)^n times the transform
            lhs2 = lam.derivative_multi((n,)).fourier()
            rhs2 = ExpPoly.monomial((n,), (-u) ** n, sigma) * lam.fourier()
            assert lhs2 == rhs2


def test_mul_monomial_examples():
    for sigma in SIGMAS:
        delta = Ultradistribution.delta((0,), sigma)
        assert delta.mul_monomial((0,)) == delta
        # x * delta' = -delta, whose transform is the constant -1
        xd = delta.derivative().mul_monomial((1,))
        assert xd == delta.scale(Binarion(-1, 0, sigma))
        assert xd.fourier() == ExpPoly.constant(Binarion(-1, 0, sigma), 1, sigma)


def test_mul_monomial_via_pairing():
    """(x^n lambda, f) must equal (lambda, x^n f)."""
    rng = random.Random(13)
    for sigma in SIGMAS:
        for _ in range(25):
            lam = _random_distribution(rng, 2, sigma, max_atoms=3, max_order=3)
            n = (rng.randint(0, 2), rng.randint(0, 2))
            f = _random_exp_poly(rng, 2, sigma, max_terms=2, max_degree=2)
            xf = f * ExpPoly.monomial(n, 1, sigma)
            assert lam.mul_monomial(n).pair(f) == lam.pair(xf)


# -- symbol <-> distribution bridge ---------------------------------------------------


def test_inverse_fourier_constant():
    for sigma in SIGMAS:
        lam = inverse_fourier_symbol(ExpPoly.one(2, sigma))
        assert lam == Ultradistribution.delta((0, 0), sigma)


def test_inverse_fourier_coordinate_weight():
    for sigma in SIGMAS:
        # symbol q: single first-slot derivative atom with weight -sigma*u,
        # pinned by the reconstruction requirement below
        q = ExpPoly.coordinate(0, 2, sigma)
        lam = inverse_fourier_symbol(q)
        atoms = lam.atoms()
        assert len(atoms) == 1
        loc, order, weight = atoms[0]
        assert loc == (0, 0) and order == (1, 0)
        minus_sigma_u = Binarion(0, -sigma.value, sigma)
        assert weight == CharSum.from_scalar(minus_sigma_u)
        assert symbol_from_distribution(lam) == q


def test_inverse_fourier_plane_wave():
    for sigma in SIGMAS:
        alpha, beta = Fraction(2), Fraction(-1, 2)
        wave = ExpPoly.character((alpha, beta), sigma)
        lam = inverse_fourier_symbol(wave)
        assert lam == Ultradistribution.delta((alpha, beta), sigma)


def test_symbol_round_trip_random():
    rng = random.Random(17)
    for sigma in SIGMAS:
        for _ in range(30):
            a = _random_exp_poly(rng, 2, sigma)
            assert symbol_from_distribution(inverse_fourier_symbol(a)) == a


# -- distributional star product -------------------------------------------------------


def test_star_distributional_unit():
    rng = random.Random(19)
    for sigma in SIGMAS:
        one = ExpPoly.one(2, sigma)
        for _ in range(10):
            b = _random_exp_poly(rng, 2, sigma)
            assert star_distributional(one, b, Fraction(1, 2)) == b
            assert star_distributional(b, one, Fraction(1, 2)) == b


def test_star_distributional_p_q():
    h = Fraction(2, 5)
    for sigma in SIGMAS:
        k = 1
        p = PolySymbol.coordinate("p", 0, k, sigma)
        q = PolySymbol.coordinate("q", 0, k, sigma)
        got = star_distributional(p, q, h)
        expected = ExpPoly.from_poly_symbol(star(p, q).substitute_h(h))
        assert got == expected


def test_star_distributional_plane_waves():
    """Plane waves compose with a character twist factor."""
    h = Fraction(1, 3)
    for sigma in SIGMAS:
        a1, b1 = Fraction(1), Fraction(2)
        a2, b2 = Fraction(-1, 2), Fraction(1, 4)
        wave1 = ExpPoly.character((a1, b1), sigma)
        wave2 = ExpPoly.character((a2, b2), sigma)
        got = star_distributional(wave1, wave2, h)
        twist = CharSum.character(h * b1 * a2, sigma)
        expected = ExpPoly.character((a1 + a2, b1 + b2), sigma, coeff=1) * ExpPoly.constant(
            twist, 2, sigma
        )
        assert got == expected


def test_character_star_twist_law_associative():
    rng = random.Random(23)
    h = Fraction(1, 2)
    for sigma in SIGMAS:
        for _ in range(25):
            waves = [
                ExpPoly.character(
                    (_random_fraction(rng), _random_fraction(rng)), sigma
                )
                for _ in range(3)
            ]
            left = star_distributional(
                star_distributional(waves[0], waves[1], h), waves[2], h
            )
            right = star_distributional(
                waves[0], star_distributional(waves[1], waves[2], h), h
            )
            assert left == right


def test_two_path_star_equality_random():
    rng = random.Random(29)
    for sigma in SIGMAS:
        for i in range(30):
            k = 1 + (i % 2)
            a = _random_symbol(rng, k, sigma)
            b = _random_symbol(rng, k, sigma)
            h = Fraction(rng.randint(1, 5), rng.randint(1, 4))
            via_series = ExpPoly.from_poly_symbol(star(a, b).substitute_h(h))
            via_atoms = star_distributional(a, b, h)
            assert via_series == via_atoms


def test_star_distributional_mixed_character_polynomial():
    """Cross-check polynomial x plane-wave products through the operator route."""
    from hypermoyal import WaveFunction, compose_check

    rng = random.Random(31)
    h = Fraction(1, 2)
    for sigma in SIGMAS:
        q = ExpPoly.coordinate(0, 2, sigma)
        wave = ExpPoly.character((Fraction(1), Fraction(1, 3)), sigma)
        a = q * wave
        b = ExpPoly.coordinate(1, 2, sigma)  # the symbol p
        phi = WaveFunction(
            (
                ExpPoly.one(1, sigma)
                + ExpPoly.coordinate(0, 1, sigma)
            )
            * WaveFunction.plane_wave(Fraction(1, 2), h, sigma).func,
            h,
        )
        assert compose_check(a, b, phi)
        assert compose_check(b, a, phi)


# -- growth bound ----------------------------------------------------------------------


def test_growth_of_constant():
    for sigma in SIGMAS:
        c, r = paley_wiener_growth(ExpPoly.one(1, sigma), 8)
        assert c == 1.0 and r == 0.0


def test_growth_of_character():
    for sigma in SIGMAS:
        c, r = paley_wiener_growth(ExpPoly.character((1,), sigma), 10)
        assert c == pytest.approx(1.0, abs=1e-12)
        assert r == pytest.approx(1.0, abs=1e-12)


def test_growth_of_cubic():
    for sigma in SIGMAS:
        u = Binarion.unit(sigma)
        f = ExpPoly.monomial((3,), (-u) ** 3, sigma)
        c, r = paley_wiener_growth(f, 6)
        assert c == pytest.approx(6.0, abs=1e-12)
        assert r == pytest.approx(1.0, abs=1e-12)


def test_growth_tracks_character_frequency():
    for x0 in (Fraction(2), Fraction(5, 2)):
        c, r = paley_wiener_growth(ExpPoly.character((x0,), H), 12)
        assert c == pytest.approx(1.0, abs=1e-12)
        assert r == pytest.approx(float(x0), rel=1e-9)


# -- serialization ---------------------------------------------------------------------


def test_distribution_json_round_trip():
    rng = random.Random(37)
    for sigma in SIGMAS:
        lam = _random_distribution(rng, 2, sigma)
        assert Ultradistribution.from_json(lam.to_json()) == lam


def test_distribution_json_matches_documented_shape():
    lam = Ultradistribution.delta((Fraction(1, 2),), H, order=(1,), weight=Binarion(2, -1, H))
    data = lam.to_json_dict()
    assert data["dim"] == 1
    assert data["atoms"] == [
        {"loc": ["1/2"], "order": [1], "weight": {"re": "2", "im": "-1"}}
    ]


def test_exp_poly_json_round_trip():
    rng = random.Random(41)
    for sigma in SIGMAS:
        f = _random_exp_poly(rng, 2, sigma)
        assert ExpPoly.from_json(f.to_json()) == f
        twisted = f * ExpPoly.constant(CharSum.character(Fraction(1, 2), sigma), 2, sigma)
        assert ExpPoly.from_json(twisted.to_json()) == twisted


# -- exactness helpers -----------------------------------------------------------------


def test_shift_composition_and_leibniz():
    rng = random.Random(43)
    for sigma in SIGMAS:
        f = _random_exp_poly(rng, 2, sigma)
        g = _random_exp_poly(rng, 2, sigma)
        a = (Fraction(1, 2), Fraction(-1))
        bvec = (Fraction(2), Fraction(1, 3))
        total = tuple(x + y for x, y in zip(a, bvec))
        assert f.shift(a).shift(bvec) == f.shift(total)
        assert f.shift((0, 0)) == f
        # product rule for exact differentiation
        for index in range(2):
            lhs = (f * g).differentiate(index)
            rhs = f.differentiate(index) * g + f * g.differentiate(index)
            assert lhs == rhs
        # shifts commute with products
        assert (f * g).shift(a) == f.shift(a) * g.shift(a)
