"""Deterministic self-verification suite.

Each check regenerates its random cases from a seeded generator, so a fixed
seed gives a byte-identical report; the report carries no timestamps.  The
final check re-runs the entire generation with the same seed and compares
the canonical serializations, making determinism itself part of the suite.

The checks are exact (rational arithmetic) except where a quantity is
intrinsically transcendental (interference angles), which use the package
float tolerance of 1e-12.
"""

from __future__ import annotations

import json
import math
import random
from fractions import Fraction

from . import distributions as dist
from . import grassmann as gr
from . import interference as intf
from . import operators as ops
from . import symbols as sym
from .scalars import Binarion, Sigma

SIGMAS = (Sigma.HYPERBOLIC, Sigma.COMPLEX)

#: Case counts for the full suite; ``fast`` divides them by 10 (minimum 5).
FULL_SIZES = {
    "classical_limit": 200,
    "associativity": 200,
    "composition": 200,
    "two_path": 100,
    "fourier": 50,
    "eigenrelation": 100,
    "interference": 500,
    "grassmann": 100,
}


def _sizes(fast: bool) -> dict:
    if not fast:
        return dict(FULL_SIZES)
    return {k: max(5, v // 10) for k, v in FULL_SIZES.items()}


# -- random value generators ---------------------------------------------------


def _random_fraction(rng, zero_ok=True) -> Fraction:
    while True:
        f = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        if zero_ok or f != 0:
            return f


def _random_binarion(rng, sigma: Sigma, zero_ok=False) -> Binarion:
    while True:
        b = Binarion(_random_fraction(rng), _random_fraction(rng), sigma)
        if zero_ok or not b.is_zero():
            return b


def _random_symbol(rng, k: int, sigma: Sigma, max_degree: int, max_terms: int = 3):
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        degree = rng.randint(0, max_degree)
        alpha = [0] * k
        beta = [0] * k
        for _ in range(degree):
            slot = rng.randrange(2 * k)
            if slot < k:
                alpha[slot] += 1
            else:
                beta[slot - k] += 1
        key = (tuple(alpha), tuple(beta))
        coeff = sym.HPoly.from_scalar(_random_binarion(rng, sigma))
        terms[key] = terms[key] + coeff if key in terms else coeff
    return sym.PolySymbol(k, sigma, terms)


def _random_distribution(rng, dim: int, sigma: Sigma, max_atoms=6, max_order=4):
    atoms = []
    for _ in range(rng.randint(1, max_atoms)):
        loc = tuple(_random_fraction(rng) for _ in range(dim))
        order = tuple(rng.randint(0, max_order) for _ in range(dim))
        atoms.append((loc, order, _random_binarion(rng, sigma)))
    return dist.Ultradistribution(dim, sigma, atoms)


def _random_wavefunction(rng, k: int, sigma: Sigma, h: Fraction) -> ops.WaveFunction:
    momentum = tuple(_random_fraction(rng) for _ in range(k))
    wave = ops.WaveFunction.plane_wave(momentum, h, sigma)
    poly = dist.ExpPoly.constant(_random_binarion(rng, sigma), k, sigma)
    for _ in range(rng.randint(0, 2)):
        index = rng.randrange(k)
        poly = poly * (
            dist.ExpPoly.coordinate(index, k, sigma)
            + dist.ExpPoly.constant(_random_fraction(rng), k, sigma)
        )
    return ops.WaveFunction(poly * wave.func, h)


def _entry(cid: int, name: str, cases: int, failures: int, detail=None) -> dict:
    entry = {
        "id": cid,
        "name": name,
        "cases": cases,
        "failures": failures,
        "passed": failures == 0,
    }
    if detail is not None:
        entry["detail"] = detail
    return entry


# -- individual checks ------------------------------------------------------------


def check_commutation() -> dict:
    """Star commutator of q and p is the canonical constant, both signatures."""
    failures = 0
    detail = {}
    for sigma in SIGMAS:
        q = sym.PolySymbol.coordinate("q", 0, 1, sigma)
        p = sym.PolySymbol.coordinate("p", 0, 1, sigma)
        got = sym.moyal_bracket(q, p)
        minus_sigma_u = Binarion(0, -sigma.value, sigma)
        expected = sym.PolySymbol.constant(
            sym.HPoly.h_power(1, sigma, minus_sigma_u), 1, sigma
        )
        ok = got == expected
        failures += 0 if ok else 1
        detail[f"sigma={sigma}"] = got.to_text()
    return _entry(1, "canonical commutation relation", 2, failures, detail)


def check_classical_limit(rng, cases: int) -> dict:
    """Constant-h term of (u/h)*Moyal bracket equals the Poisson bracket."""
    failures = 0
    total = 0
    for sigma in SIGMAS:
        for i in range(cases):
            k = 1 + (i % 2)
            a = _random_symbol(rng, k, sigma, max_degree=5)
            b = _random_symbol(rng, k, sigma, max_degree=5)
            total += 1
            if sym.scaled_bracket(a, b).h_constant_part() != sym.poisson_bracket(a, b):
                failures += 1
    return _entry(2, "classical limit is the Poisson bracket", total, failures)


def check_associativity(rng, cases: int) -> dict:
    failures = 0
    total = 0
    for sigma in SIGMAS:
        for i in range(cases):
            k = 1 + (i % 2)
            a = _random_symbol(rng, k, sigma, max_degree=4)
            b = _random_symbol(rng, k, sigma, max_degree=4)
            c = _random_symbol(rng, k, sigma, max_degree=4)
            total += 1
            if sym.star(sym.star(a, b), c) != sym.star(a, sym.star(b, c)):
                failures += 1
    return _entry(3, "star product associativity", total, failures)


def check_composition(rng, cases: int) -> dict:
    """Operator-side oracle: apply(star(a, b)) == apply(a) after apply(b)."""
    h_values = (Fraction(1), Fraction(1, 3), Fraction(7, 2))
    failures = 0
    total = 0
    for sigma in SIGMAS:
        for i in range(cases):
            h = h_values[i % len(h_values)]
            k = 1 + (i % 2)
            a = _random_symbol(rng, k, sigma, max_degree=4, max_terms=2)
            b = _random_symbol(rng, k, sigma, max_degree=4, max_terms=2)
            phi = _random_wavefunction(rng, k, sigma, h)
            total += 1
            if not ops.compose_check(a, b, phi):
                failures += 1
    return _entry(4, "operator-symbol composition homomorphism", total, failures)


def check_two_path(rng, cases: int) -> dict:
    """Differential and distributional star products agree exactly."""
    failures = 0
    total = 0
    for sigma in SIGMAS:
        for i in range(cases):
            k = 1 + (i % 2)
            a = _random_symbol(rng, k, sigma, max_degree=4)
            b = _random_symbol(rng, k, sigma, max_degree=4)
            h = Fraction(rng.randint(1, 6), rng.randint(1, 4))
            total += 1
            via_series = dist.ExpPoly.from_poly_symbol(sym.star(a, b).substitute_h(h))
            via_atoms = dist.star_distributional(a, b, h)
            if via_series != via_atoms:
                failures += 1
    return _entry(5, "two independent star-product routes agree", total, failures)


def check_fourier_identities(rng, cases: int) -> dict:
    """Transform identities for derivatives and monomial multiplication."""
    failures = 0
    total = 0
    for sigma in SIGMAS:
        u = Binarion.unit(sigma)
        # closed form for derivatives of the point mass at the origin
        delta = dist.Ultradistribution.delta((0,), sigma)
        for n in range(0, 7):
            total += 1
            expected = dist.ExpPoly.monomial((n,), (-u) ** n, sigma)
            if delta.derivative_multi((n,)).fourier() != expected:
                failures += 1
        for _ in range(cases):
            lam = _random_distribution(rng, 1, sigma)
            n = rng.randint(1, 4)
            total += 2
            lhs = lam.fourier().differentiate_multi((n,))
            rhs = (u**n) * lam.mul_monomial((n,)).fourier()
            if lhs != rhs:
                failures += 1
            lhs2 = lam.derivative_multi((n,)).fourier()
            rhs2 = dist.ExpPoly.monomial((n,), (-u) ** n, sigma) * lam.fourier()
            if lhs2 != rhs2:
                failures += 1
    return _entry(6, "Fourier transform identities on point atoms", total, failures)


def check_eigenrelation(rng, cases: int) -> dict:
    """Plane waves are exact eigenfunctions: apply(a, e) = a(q, p0) * e."""
    failures = 0
    total = 0
    for sigma in SIGMAS:
        for i in range(cases):
            k = 1 + (i % 2)
            h = Fraction(rng.randint(1, 4), rng.randint(1, 3))
            a = _random_symbol(rng, k, sigma, max_degree=4)
            momentum = tuple(_random_fraction(rng) for _ in range(k))
            wave = ops.WaveFunction.plane_wave(momentum, h, sigma)
            total += 1
            got = ops.Operator(a, h).apply(wave)
            expected = ops.plane_wave_eigenvalue(a, momentum, h) * wave.func
            if got.func != expected:
                failures += 1
    return _entry(7, "plane-wave eigenrelation", total, failures)


def _random_round_trip(rng, sigma: Sigma):
    """One forward/classify round trip; returns failure strings (empty = ok)."""
    problems = []
    # doubly stochastic conditionals keep both outcomes coupled symmetrically
    c = Fraction(rng.randint(1, 9), 10)
    p_a = (Fraction(1, 2), Fraction(1, 2))
    cond = ((c, 1 - c), (1 - c, c))
    base = rng.uniform(-2.0, 2.0)
    if sigma is Sigma.COMPLEX:
        delta = rng.uniform(0.1, math.pi - 0.1)
        amp1 = intf.Amplitude2.from_probabilities(
            p_a, cond[0], (base + delta, base), sigma
        )
        amp2 = intf.Amplitude2.from_probabilities(
            p_a, cond[1], (base + (math.pi - delta), base), sigma
        )
        expected_regime = intf.Regime.TRIGONOMETRIC
        expected_theta = delta
        expected_sign = None
    else:
        ranges = intf.theta_range(p_a, cond)
        if not ranges[0].admissible or ranges[0].theta_max < 0.15:
            return problems  # too close to the zero-interference boundary
        delta = rng.uniform(0.1, min(2.0, 0.95 * ranges[0].theta_max))
        sign = rng.choice((1, -1))
        signs1 = (1, 1) if sign > 0 else (1, -1)
        amp1 = intf.Amplitude2.from_probabilities(
            p_a, cond[0], (base + delta, base), sigma, signs=signs1
        )
        signs2 = (1, -1) if sign > 0 else (1, 1)
        amp2 = intf.Amplitude2.from_probabilities(
            p_a, cond[1], (base + delta, base), sigma, signs=signs2
        )
        expected_regime = intf.Regime.HYPERBOLIC
        expected_theta = delta
        expected_sign = sign
    try:
        _, report = intf.forward(amp1, amp2)
    except (intf.ValidationError, intf.InvalidStateError) as exc:  # pragma: no cover
        problems.append(f"forward rejected a valid configuration: {exc}")
        return problems
    outcome = report.outcomes[0]
    tol = 1e-12
    if outcome.regime is not expected_regime:
        problems.append(f"regime {outcome.regime} != {expected_regime}")
    elif abs(outcome.theta - expected_theta) > tol:
        problems.append(f"theta {outcome.theta} != {expected_theta}")
    if expected_sign is not None and outcome.sign != expected_sign:
        problems.append(f"sign {outcome.sign} != {expected_sign}")
    lam = outcome.lam
    if sigma is Sigma.COMPLEX and abs(lam) > 1 + 1e-12:
        problems.append(f"complex |lambda| = {abs(lam)} > 1")
    if sigma is Sigma.HYPERBOLIC and abs(lam) < 1 - 1e-12:
        problems.append(f"hyperbolic |lambda| = {abs(lam)} < 1")
    if abs(report.normalization_residual) > 1e-12:
        problems.append(f"residual {report.normalization_residual}")
    return problems


def check_interference(rng, cases: int) -> dict:
    """Forward/inverse round trips plus the three exact worked tables."""
    failures = 0
    total = 0
    for sigma in SIGMAS:
        for _ in range(cases):
            total += 1
            if _random_round_trip(rng, sigma):
                failures += 1
    # frozen exact tables: lambda = 0, 4/5 (trigonometric) and 3/2 (hyperbolic)
    half = Fraction(1, 2)
    worked = [
        (
            intf.DichotomousContext.from_b1_row(half, half, half, half),
            Fraction(0),
            intf.Regime.TRIGONOMETRIC,
        ),
        (
            intf.DichotomousContext.from_b1_row(half, half, half, Fraction(9, 10)),
            Fraction(4, 5),
            intf.Regime.TRIGONOMETRIC,
        ),
        (
            intf.DichotomousContext.from_b1_row(
                half, Fraction(9, 10), Fraction(1, 10), Fraction(19, 20)
            ),
            Fraction(3, 2),
            intf.Regime.HYPERBOLIC,
        ),
    ]
    for ctx, lam, regime in worked:
        total += 1
        outcome = intf.classify(ctx).outcomes[0]
        if outcome.lam != lam or outcome.regime is not regime:
            failures += 1
    return _entry(8, "interference round trips and worked tables", total, failures)


def check_grassmann(rng, cases: int) -> dict:
    """Supercommutativity and the odd-part annihilator witness."""
    failures = 0
    total = 0
    for sigma in SIGMAS:
        for _ in range(cases):
            n = rng.randint(1, 6)
            total += 1
            a = _random_grassmann(rng, n, sigma)
            b = _random_grassmann(rng, n, sigma)
            c = _random_grassmann(rng, n, sigma)
            if not gr.supercommutator(a, b).is_zero():
                failures += 1
                continue
            if (a * b) * c != a * (b * c):
                failures += 1
    for n in range(1, 9):
        for sigma in SIGMAS:
            total += 1
            witness = gr.annihilator_witness(n, sigma)
            if witness.is_zero():
                failures += 1
    return _entry(9, "Grassmann supercommutativity and annihilator witness", total, failures)


def _random_grassmann(rng, n: int, sigma: Sigma) -> gr.GrassmannElement:
    terms = {}
    for _ in range(rng.randint(1, 4)):
        mask = rng.randrange(1 << n)
        coeff = _random_binarion(rng, sigma)
        terms[mask] = terms[mask] + coeff if mask in terms else coeff
    return gr.GrassmannElement(n, sigma, terms)


# -- suite driver -------------------------------------------------------------------


def _payload(seed: int, sizes: dict) -> list:
    rng = random.Random(seed)
    return [
        check_commutation(),
        check_classical_limit(rng, sizes["classical_limit"]),
        check_associativity(rng, sizes["associativity"]),
        check_composition(rng, sizes["composition"]),
        check_two_path(rng, sizes["two_path"]),
        check_fourier_identities(rng, sizes["fourier"]),
        check_eigenrelation(rng, sizes["eigenrelation"]),
        check_interference(rng, sizes["interference"]),
        check_grassmann(rng, sizes["grassmann"]),
    ]


def canonical_json(data) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def run_selftest(seed: int = 0, fast: bool = False) -> dict:
    """Run the whole suite twice and report per-check results.

    The second run exists only to assert byte-level determinism of the
    seeded generation; its payload must serialize identically.
    """
    sizes = _sizes(fast)
    first = _payload(seed, sizes)
    second = _payload(seed, sizes)
    deterministic = canonical_json(first) == canonical_json(second)
    criteria = list(first)
    criteria.append(
        _entry(10, "seeded reports are byte-identical", 1, 0 if deterministic else 1)
    )
    return {
        "seed": seed,
        "fast": fast,
        "criteria": criteria,
        "all_passed": all(c["passed"] for c in criteria),
    }
