"""Sparse polynomial symbols on a 2k-dimensional phase space.

A :class:`PolySymbol` is a finite sum ``c(h) * q^alpha * p^beta`` whose
coefficients are polynomials in a *formal* deformation parameter ``h`` over
binarion scalars.  Keeping ``h`` formal makes the classical limit exact:
extracting the ``h``-constant term of :func:`scaled_bracket` reproduces the
Poisson bracket on the nose, with no numerical extrapolation.

The noncommutative :func:`star` product implements the symbol-level
composition of normal-ordered (q-left, d/dq-right) operators:

    a ⋆ b = sum over multi-indices kappa of
            (sigma*u*h)^|kappa| / kappa! * d_p^kappa(a) * d_q^kappa(b)

For polynomial symbols the series terminates, so the product is exact.  The
same product is derived independently through the distributional route in
:mod:`hypermoyal.distributions`, and through operator application in
:mod:`hypermoyal.operators`; the test suite checks all three against each
other.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iter_product

from .errors import DegreeCapError, DimensionMismatchError, SignatureMismatchError
from .scalars import Binarion, Sigma, as_sigma

#: Default bound on the total degree of any star-product result.  The
#: kappa-series always terminates on polynomials, but its width grows with
#: the p-degree, so products beyond the cap are refused rather than left to
#: run long.
DEFAULT_DEGREE_CAP = 16


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


class HPoly:
    """Polynomial in the formal deformation parameter ``h`` over binarions.

    Internally a sparse map from ``h``-degree to coefficient; explicit zero
    coefficients are never stored.
    """

    __slots__ = ("sigma", "_coeffs")

    def __init__(self, coeffs: dict, sigma: Sigma):
        self.sigma = as_sigma(sigma)
        clean = {}
        for degree, value in coeffs.items():
            if not isinstance(value, Binarion):
                value = Binarion(value, 0, self.sigma)
            if value.sigma is not self.sigma:
                raise SignatureMismatchError("coefficient sigma differs from HPoly sigma")
            if degree < 0:
                raise ValueError("h-degree must be nonnegative")
            if not value.is_zero():
                clean[int(degree)] = value
        self._coeffs = clean

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, sigma: Sigma) -> "HPoly":
        return cls({}, sigma)

    @classmethod
    def from_scalar(cls, value, sigma: Sigma = None) -> "HPoly":
        if isinstance(value, HPoly):
            return value
        if isinstance(value, Binarion):
            return cls({0: value}, value.sigma)
        if sigma is None:
            raise TypeError("sigma required for rational scalars")
        return cls({0: Binarion(value, 0, sigma)}, sigma)

    @classmethod
    def h_power(cls, degree: int, sigma: Sigma, coeff=1) -> "HPoly":
        b = coeff if isinstance(coeff, Binarion) else Binarion(coeff, 0, sigma)
        return cls({degree: b}, sigma)

    # -- queries ----------------------------------------------------------

    def coeff(self, degree: int) -> Binarion:
        return self._coeffs.get(degree, Binarion.zero(self.sigma))

    def items(self):
        return sorted(self._coeffs.items())

    def is_zero(self) -> bool:
        return not self._coeffs

    def degree(self) -> int:
        return max(self._coeffs) if self._coeffs else 0

    @property
    def constant_term(self) -> Binarion:
        return self.coeff(0)

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, HPoly):
            if other.sigma is not self.sigma:
                raise SignatureMismatchError("mixed signatures in HPoly arithmetic")
            return other
        if isinstance(other, (Binarion, int, Fraction)):
            return HPoly.from_scalar(other, self.sigma)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self._coeffs)
        for d, v in o._coeffs.items():
            out[d] = out.get(d, Binarion.zero(self.sigma)) + v
        return HPoly(out, self.sigma)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __neg__(self):
        return HPoly({d: -v for d, v in self._coeffs.items()}, self.sigma)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = {}
        for d1, v1 in self._coeffs.items():
            for d2, v2 in o._coeffs.items():
                d = d1 + d2
                w = v1 * v2
                out[d] = out.get(d, Binarion.zero(self.sigma)) + w
        return HPoly(out, self.sigma)

    __rmul__ = __mul__

    def conjugate(self) -> "HPoly":
        return HPoly({d: v.conjugate() for d, v in self._coeffs.items()}, self.sigma)

    def times_h(self, power: int = 1) -> "HPoly":
        return HPoly({d + power: v for d, v in self._coeffs.items()}, self.sigma)

    def div_h(self) -> "HPoly":
        """Exact division by ``h``; every term must have degree >= 1."""
        if 0 in self._coeffs:
            raise ArithmeticError("not divisible by h: constant term present")
        return HPoly({d - 1: v for d, v in self._coeffs.items()}, self.sigma)

    def substitute(self, h) -> Binarion:
        """Evaluate at a numeric (rational) value of ``h``."""
        h = _as_fraction(h)
        total = Binarion.zero(self.sigma)
        for d, v in self._coeffs.items():
            total = total + v * (h**d)
        return total

    def constant_part(self) -> "HPoly":
        return HPoly({0: self.coeff(0)}, self.sigma)

    def __eq__(self, other):
        if isinstance(other, (Binarion, int, Fraction)):
            other = HPoly.from_scalar(other, self.sigma)
        if not isinstance(other, HPoly):
            return NotImplemented
        return self.sigma is other.sigma and self._coeffs == other._coeffs

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for d, v in self.items():
            if d == 0:
                parts.append(str(v))
            else:
                hpart = "h" if d == 1 else f"h^{d}"
                parts.append(f"({v})*{hpart}")
        return " + ".join(parts)

    __repr__ = __str__


@dataclass(frozen=True)
class PhasePoint:
    """A rational point ``(q, p)`` of the k-dimensional phase space."""

    q: tuple
    p: tuple

    def __post_init__(self):
        object.__setattr__(self, "q", tuple(_as_fraction(x) for x in self.q))
        object.__setattr__(self, "p", tuple(_as_fraction(x) for x in self.p))
        if len(self.q) != len(self.p):
            raise DimensionMismatchError("q and p must have the same length")

    @property
    def dof(self) -> int:
        return len(self.q)


def _zero_exp(k: int) -> tuple:
    return (0,) * k


def _bump(exps: tuple, index: int, amount: int = 1) -> tuple:
    out = list(exps)
    out[index] += amount
    return tuple(out)


class PolySymbol:
    """Sparse polynomial in ``q1..qk, p1..pk`` with :class:`HPoly` coefficients.

    A symbol is an *observable* when every coefficient is a plain real
    scalar: imaginary part zero and no ``h``-dependence.
    """

    __slots__ = ("dof", "sigma", "_terms")

    def __init__(self, dof: int, sigma: Sigma, terms: dict = None):
        if dof < 1:
            raise DimensionMismatchError("dof must be >= 1")
        self.dof = int(dof)
        self.sigma = as_sigma(sigma)
        clean = {}
        for (alpha, beta), coeff in (terms or {}).items():
            alpha = tuple(int(a) for a in alpha)
            beta = tuple(int(b) for b in beta)
            if len(alpha) != self.dof or len(beta) != self.dof:
                raise DimensionMismatchError(
                    f"exponent vectors must have length {self.dof}"
                )
            if any(a < 0 for a in alpha) or any(b < 0 for b in beta):
                raise ValueError("negative exponents are not allowed")
            coeff = HPoly.from_scalar(coeff, self.sigma)
            if coeff.sigma is not self.sigma:
                raise SignatureMismatchError("coefficient sigma differs from symbol sigma")
            if not coeff.is_zero():
                key = (alpha, beta)
                if key in clean:
                    merged = clean[key] + coeff
                    if merged.is_zero():
                        del clean[key]
                    else:
                        clean[key] = merged
                else:
                    clean[key] = coeff
        self._terms = clean

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, dof: int, sigma: Sigma) -> "PolySymbol":
        return cls(dof, sigma, {})

    @classmethod
    def constant(cls, value, dof: int, sigma: Sigma) -> "PolySymbol":
        coeff = HPoly.from_scalar(value, sigma)
        return cls(dof, sigma, {(_zero_exp(dof), _zero_exp(dof)): coeff})

    @classmethod
    def one(cls, dof: int, sigma: Sigma) -> "PolySymbol":
        return cls.constant(1, dof, sigma)

    @classmethod
    def coordinate(cls, kind: str, index: int, dof: int, sigma: Sigma) -> "PolySymbol":
        """The coordinate symbol ``q_index`` or ``p_index`` (0-based index)."""
        if kind not in ("q", "p"):
            raise ValueError("kind must be 'q' or 'p'")
        if not 0 <= index < dof:
            raise IndexError(f"coordinate index {index} out of range for dof {dof}")
        alpha = _bump(_zero_exp(dof), index) if kind == "q" else _zero_exp(dof)
        beta = _bump(_zero_exp(dof), index) if kind == "p" else _zero_exp(dof)
        return cls(dof, sigma, {(alpha, beta): HPoly.from_scalar(1, sigma)})

    @classmethod
    def monomial(cls, alpha, beta, coeff, sigma: Sigma, h_degree: int = 0) -> "PolySymbol":
        dof = len(alpha)
        c = HPoly.from_scalar(coeff, sigma)
        if h_degree:
            c = c.times_h(h_degree)
        return cls(dof, sigma, {(tuple(alpha), tuple(beta)): c})

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def terms(self):
        """Term triples ``(alpha, beta, coeff)`` in canonical order."""
        return [
            (alpha, beta, self._terms[(alpha, beta)])
            for alpha, beta in sorted(self._terms, key=_term_order_key)
        ]

    def coeff(self, alpha, beta) -> HPoly:
        return self._terms.get((tuple(alpha), tuple(beta)), HPoly.zero(self.sigma))

    def total_degree(self) -> int:
        if not self._terms:
            return 0
        return max(sum(a) + sum(b) for a, b in self._terms)

    def p_degrees(self) -> tuple:
        """Componentwise maximum p-exponent; bounds the star-product series."""
        bounds = [0] * self.dof
        for _, beta in self._terms:
            for i, b in enumerate(beta):
                bounds[i] = max(bounds[i], b)
        return tuple(bounds)

    def is_observable(self) -> bool:
        """True when every coefficient is real and free of ``h``."""
        for coeff in self._terms.values():
            for d, v in coeff.items():
                if d != 0 or not v.is_real():
                    return False
        return True

    # -- ring operations ----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, PolySymbol):
            _require_compatible(self, other)
            return other
        if isinstance(other, (Binarion, HPoly, int, Fraction)):
            return PolySymbol.constant(other, self.dof, self.sigma)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self._terms)
        for key, coeff in o._terms.items():
            if key in out:
                out[key] = out[key] + coeff
            else:
                out[key] = coeff
        return PolySymbol(self.dof, self.sigma, out)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return PolySymbol(
            self.dof, self.sigma, {key: -c for key, c in self._terms.items()}
        )

    def __mul__(self, other):
        """Commutative pointwise product (the h -> 0 limit of ``star``)."""
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = {}
        for (a1, b1), c1 in self._terms.items():
            for (a2, b2), c2 in o._terms.items():
                key = (
                    tuple(x + y for x, y in zip(a1, a2)),
                    tuple(x + y for x, y in zip(b1, b2)),
                )
                c = c1 * c2
                if key in out:
                    out[key] = out[key] + c
                else:
                    out[key] = c
        return PolySymbol(self.dof, self.sigma, out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            return NotImplemented
        result = PolySymbol.one(self.dof, self.sigma)
        for _ in range(exponent):
            result = result * self
        return result

    # -- calculus -------------------------------------------------------------

    def differentiate(self, variable: str, index: int = 0) -> "PolySymbol":
        """Exact partial derivative with respect to ``q_index`` or ``p_index``."""
        if variable not in ("q", "p"):
            raise ValueError("variable must be 'q' or 'p'")
        if not 0 <= index < self.dof:
            raise IndexError(f"index {index} out of range for dof {self.dof}")
        out = {}
        for (alpha, beta), coeff in self._terms.items():
            exps = alpha if variable == "q" else beta
            e = exps[index]
            if e == 0:
                continue
            new_exps = _bump(exps, index, -1)
            key = (new_exps, beta) if variable == "q" else (alpha, new_exps)
            c = coeff * Binarion(e, 0, self.sigma)
            if key in out:
                out[key] = out[key] + c
            else:
                out[key] = c
        return PolySymbol(self.dof, self.sigma, out)

    def differentiate_multi(self, variable: str, kappa) -> "PolySymbol":
        out = self
        for i, n in enumerate(kappa):
            for _ in range(n):
                out = out.differentiate(variable, i)
                if out.is_zero():
                    return out
        return out

    def evaluate(self, point: PhasePoint, h) -> Binarion:
        """Exact evaluation at a rational phase point and rational ``h >= 0``."""
        h = _as_fraction(h)
        if h < 0:
            raise ValueError("h must be >= 0")
        if point.dof != self.dof:
            raise DimensionMismatchError(
                f"point has dof {point.dof}, symbol has dof {self.dof}"
            )
        total = Binarion.zero(self.sigma)
        for (alpha, beta), coeff in self._terms.items():
            mono = Fraction(1)
            for x, e in zip(point.q, alpha):
                mono *= x**e
            for x, e in zip(point.p, beta):
                mono *= x**e
            total = total + coeff.substitute(h) * mono
        return total

    def substitute_h(self, h) -> "PolySymbol":
        """Replace the formal ``h`` by a numeric rational value."""
        out = {}
        for key, coeff in self._terms.items():
            out[key] = HPoly.from_scalar(coeff.substitute(h))
        return PolySymbol(self.dof, self.sigma, out)

    def h_constant_part(self) -> "PolySymbol":
        """The ``h``-degree-0 part; this is the classical limit h -> 0."""
        out = {}
        for key, coeff in self._terms.items():
            out[key] = coeff.constant_part()
        return PolySymbol(self.dof, self.sigma, out)

    def scale_hpoly(self, factor: HPoly) -> "PolySymbol":
        return PolySymbol(
            self.dof, self.sigma, {key: c * factor for key, c in self._terms.items()}
        )

    def conjugate(self) -> "PolySymbol":
        """Coefficientwise involution; observables are the fixed points."""
        return PolySymbol(
            self.dof, self.sigma, {key: c.conjugate() for key, c in self._terms.items()}
        )

    def div_h(self) -> "PolySymbol":
        return PolySymbol(
            self.dof, self.sigma, {key: c.div_h() for key, c in self._terms.items()}
        )

    # -- comparison -------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (Binarion, HPoly, int, Fraction)):
            other = PolySymbol.constant(other, self.dof, self.sigma)
        if not isinstance(other, PolySymbol):
            return NotImplemented
        return (
            self.dof == other.dof
            and self.sigma is other.sigma
            and self._terms == other._terms
        )

    # -- rendering ----------------------------------------------------------------

    def to_text(self) -> str:
        """Canonical text form with graded-lexicographic term order (q before p)."""
        if self.is_zero():
            return "0"
        monomials = []
        for alpha, beta, coeff in self.terms():
            for hdeg, value in coeff.items():
                monomials.append((alpha, beta, hdeg, value))
        rendered = [_render_monomial(a, b, d, v) for a, b, d, v in monomials]
        text = rendered[0]
        for part in rendered[1:]:
            if part.startswith("-"):
                text += " - " + part[1:]
            else:
                text += " + " + part
        return text

    __str__ = to_text

    def __repr__(self) -> str:
        return self.to_text()

    # -- serialization ----------------------------------------------------------------

    def to_json_dict(self) -> dict:
        terms = []
        for alpha, beta, coeff in self.terms():
            terms.append(
                {
                    "q": list(alpha),
                    "p": list(beta),
                    "coeff": [
                        {"h": d, "re": str(v.re), "im": str(v.im)}
                        for d, v in coeff.items()
                    ],
                }
            )
        return {"dof": self.dof, "sigma": self.sigma.value, "terms": terms}

    @classmethod
    def from_json_dict(cls, data: dict) -> "PolySymbol":
        sigma = as_sigma(data["sigma"])
        dof = int(data["dof"])
        terms = {}
        for entry in data["terms"]:
            coeffs = {}
            for c in entry["coeff"]:
                coeffs[int(c["h"])] = Binarion(
                    Fraction(str(c["re"])), Fraction(str(c.get("im", 0))), sigma
                )
            key = (tuple(entry["q"]), tuple(entry["p"]))
            hp = HPoly(coeffs, sigma)
            terms[key] = terms[key] + hp if key in terms else hp
        return cls(dof, sigma, terms)

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "PolySymbol":
        return cls.from_json_dict(json.loads(text))


def _term_order_key(key):
    alpha, beta = key
    degree = sum(alpha) + sum(beta)
    return (-degree, tuple(-a for a in alpha), tuple(-b for b in beta))


def _render_monomial(alpha, beta, hdeg, value: Binarion) -> str:
    factors = []
    if hdeg == 1:
        factors.append("h")
    elif hdeg > 1:
        factors.append(f"h^{hdeg}")
    for i, e in enumerate(alpha):
        if e == 1:
            factors.append(f"q{i + 1}")
        elif e > 1:
            factors.append(f"q{i + 1}^{e}")
    for i, e in enumerate(beta):
        if e == 1:
            factors.append(f"p{i + 1}")
        elif e > 1:
            factors.append(f"p{i + 1}^{e}")
    if not factors:
        return f"({value})" if (value.re != 0 and value.im != 0) else str(value)
    if value == 1:
        return "*".join(factors)
    if value == -1:
        return "-" + "*".join(factors)
    if value.re != 0 and value.im != 0:
        coeff = f"({value})"
    else:
        coeff = str(value)
    return "*".join([coeff] + factors)


def _require_compatible(a: PolySymbol, b: PolySymbol):
    if a.sigma is not b.sigma:
        raise SignatureMismatchError(
            f"cannot combine sigma={a.sigma} with sigma={b.sigma}"
        )
    if a.dof != b.dof:
        raise DimensionMismatchError(f"cannot combine dof={a.dof} with dof={b.dof}")


def star(a: PolySymbol, b: PolySymbol, degree_cap: int = None) -> PolySymbol:
    """Noncommutative product realizing operator composition on symbols.

    Expands ``sum_kappa (sigma*u*h)^|kappa|/kappa! d_p^kappa(a) d_q^kappa(b)``;
    the series terminates at the componentwise p-degree of ``a``.  Associative,
    bilinear, and equal to the pointwise product at ``h = 0``.
    """
    _require_compatible(a, b)
    cap = DEFAULT_DEGREE_CAP if degree_cap is None else degree_cap
    if a.total_degree() + b.total_degree() > cap:
        raise DegreeCapError(
            f"star product degree {a.total_degree() + b.total_degree()} "
            f"exceeds cap {cap}"
        )
    sigma = a.sigma
    sigma_u = Binarion(0, sigma.value, sigma)  # sigma * u
    result = PolySymbol.zero(a.dof, sigma)
    bounds = a.p_degrees()
    for kappa in iter_product(*(range(m + 1) for m in bounds)):
        da = a.differentiate_multi("p", kappa)
        if da.is_zero():
            continue
        db = b.differentiate_multi("q", kappa)
        if db.is_zero():
            continue
        order = sum(kappa)
        kappa_factorial = 1
        for n in kappa:
            kappa_factorial *= math.factorial(n)
        scalar = (sigma_u**order) / Fraction(kappa_factorial)
        factor = HPoly({order: scalar}, sigma)
        result = result + (da * db).scale_hpoly(factor)
    return result


def moyal_bracket(a: PolySymbol, b: PolySymbol, degree_cap: int = None) -> PolySymbol:
    """Star commutator ``a ⋆ b - b ⋆ a``; every term carries ``h``-degree >= 1."""
    return star(a, b, degree_cap) - star(b, a, degree_cap)


def poisson_bracket(a: PolySymbol, b: PolySymbol) -> PolySymbol:
    """``sum_i d_p_i(a) d_q_i(b) - d_q_i(a) d_p_i(b)`` (so ``{q, p} = -1``)."""
    _require_compatible(a, b)
    total = PolySymbol.zero(a.dof, a.sigma)
    for i in range(a.dof):
        total = total + a.differentiate("p", i) * b.differentiate("q", i)
        total = total - a.differentiate("q", i) * b.differentiate("p", i)
    return total


def scaled_bracket(a: PolySymbol, b: PolySymbol, degree_cap: int = None) -> PolySymbol:
    """``(u/h)`` times the Moyal bracket, as an exact polynomial in ``h``.

    The division by ``h`` is exact because every Moyal-bracket term has
    ``h``-degree >= 1.  The ``h``-constant part of the result equals
    :func:`poisson_bracket` exactly for ``h``-free inputs, which is the
    package's central correspondence check.
    """
    mb = moyal_bracket(a, b, degree_cap)
    u = Binarion.unit(a.sigma)
    return mb.scale_hpoly(HPoly.from_scalar(u)).div_h()
