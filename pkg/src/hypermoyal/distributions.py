"""Point-supported distributions, their Fourier calculus, and the
distributional route to the star product.

The two representations:

* :class:`Ultradistribution` -- a finite sum of weighted derivatives of
  point masses ``w * delta^(n)`` at rational locations of ``R^m``.
* :class:`ExpPoly` -- a finite sum of ``polynomial * exp(u*<freq, x>)``
  terms, the closed class the Fourier transform of such distributions
  lands in.

Exactness is preserved by keeping scalar character values ``exp(u*r)`` at
rational ``r`` as *formal* generators of a group ring (:class:`CharSum`),
multiplied by adding exponents and only mapped to ``cosh/sinh`` (or
``cos/sin``) floats on demand.  Every structural identity in this module is
therefore checked with exact arithmetic.

The module also carries the symbol <-> distribution bridge used by the
pseudo-differential calculus: a phase-space symbol ``a(q, p)`` corresponds
to a distribution in transposed variables via
``a(q, p) = integral exp(u*(<q, p1> + <p, q1>)) a~(dp1 dq1)``,
and :func:`star_distributional` composes two symbols by tensoring their
distributions, applying the twist ``exp(u*h*<q1, p2>)``, and pushing
forward under addition of locations.  On polynomial symbols this agrees
exactly with :func:`hypermoyal.symbols.star`.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from itertools import product as iter_product

from .errors import DimensionMismatchError, SignatureMismatchError
from .scalars import Binarion, Sigma, as_sigma
from .symbols import PolySymbol


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def _check_sigma(a, b):
    if a.sigma is not b.sigma:
        raise SignatureMismatchError(
            f"cannot combine sigma={a.sigma} with sigma={b.sigma}"
        )


class CharSum:
    """Formal sum ``sum_r c_r * exp(u*r)`` over rational exponents ``r``.

    The characters multiply by adding exponents, so the class is an exact
    commutative ring extending the binarions (a binarion is the ``r = 0``
    part).  :meth:`to_floats` maps a value to floats through ``cosh/sinh``
    or ``cos/sin`` depending on the signature.
    """

    __slots__ = ("sigma", "_terms")

    def __init__(self, terms: dict, sigma: Sigma):
        self.sigma = as_sigma(sigma)
        clean = {}
        for r, c in terms.items():
            r = _as_fraction(r)
            if not isinstance(c, Binarion):
                c = Binarion(c, 0, self.sigma)
            if c.sigma is not self.sigma:
                raise SignatureMismatchError("coefficient sigma differs from CharSum sigma")
            if not c.is_zero():
                clean[r] = clean[r] + c if r in clean else c
        self._terms = {r: c for r, c in clean.items() if not c.is_zero()}

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, sigma: Sigma) -> "CharSum":
        return cls({}, sigma)

    @classmethod
    def one(cls, sigma: Sigma) -> "CharSum":
        return cls({Fraction(0): Binarion.one(sigma)}, sigma)

    @classmethod
    def from_scalar(cls, value, sigma: Sigma = None) -> "CharSum":
        if isinstance(value, CharSum):
            return value
        if isinstance(value, Binarion):
            return cls({Fraction(0): value}, value.sigma)
        if sigma is None:
            raise TypeError("sigma required for rational scalars")
        return cls({Fraction(0): Binarion(value, 0, sigma)}, sigma)

    @classmethod
    def character(cls, exponent, sigma: Sigma, coeff=1) -> "CharSum":
        """The formal character ``coeff * exp(u*exponent)``."""
        c = coeff if isinstance(coeff, Binarion) else Binarion(coeff, 0, sigma)
        return cls({_as_fraction(exponent): c}, sigma)

    # -- queries -------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def items(self):
        return sorted(self._terms.items())

    def is_scalar(self) -> bool:
        """True when no genuine character is present (only ``r = 0``)."""
        return all(r == 0 for r in self._terms)

    def as_binarion(self) -> Binarion:
        if not self.is_scalar():
            raise ValueError(f"{self} carries formal characters; not a plain scalar")
        return self._terms.get(Fraction(0), Binarion.zero(self.sigma))

    # -- ring operations --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, CharSum):
            _check_sigma(self, other)
            return other
        if isinstance(other, (Binarion, int, Fraction)):
            return CharSum.from_scalar(other, self.sigma)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self._terms)
        for r, c in o._terms.items():
            out[r] = out[r] + c if r in out else c
        return CharSum(out, self.sigma)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __neg__(self):
        return CharSum({r: -c for r, c in self._terms.items()}, self.sigma)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = {}
        for r1, c1 in self._terms.items():
            for r2, c2 in o._terms.items():
                r = r1 + r2
                c = c1 * c2
                out[r] = out[r] + c if r in out else c
        return CharSum(out, self.sigma)

    __rmul__ = __mul__

    def conjugate(self) -> "CharSum":
        return CharSum(
            {-r: c.conjugate() for r, c in self._terms.items()}, self.sigma
        )

    # -- evaluation -----------------------------------------------------------------

    def to_floats(self) -> tuple[float, float]:
        """Numeric value as a ``(re, im)`` float pair."""
        re = 0.0
        im = 0.0
        hyper = self.sigma is Sigma.HYPERBOLIC
        for r, c in self._terms.items():
            x, y = c.to_floats()
            if hyper:
                cr, sr = math.cosh(r), math.sinh(r)
                re += x * cr + y * sr
                im += x * sr + y * cr
            else:
                cr, sr = math.cos(r), math.sin(r)
                re += x * cr - y * sr
                im += x * sr + y * cr
        return re, im

    def pos_norm(self) -> float:
        re, im = self.to_floats()
        return math.hypot(re, im)

    # -- comparison / rendering ---------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (Binarion, int, Fraction)):
            other = CharSum.from_scalar(other, self.sigma)
        if not isinstance(other, CharSum):
            return NotImplemented
        return self.sigma is other.sigma and self._terms == other._terms

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        u = self.sigma.unit_symbol
        parts = []
        for r, c in self.items():
            if r == 0:
                parts.append(str(c))
            else:
                parts.append(f"({c})*e^({r}{u})")
        return " + ".join(parts)

    __repr__ = __str__


def _weight_to_json(w: CharSum) -> dict:
    if w.is_scalar():
        b = w.as_binarion()
        return {"re": str(b.re), "im": str(b.im)}
    return {
        "chars": [
            {"exp": str(r), "re": str(c.re), "im": str(c.im)} for r, c in w.items()
        ]
    }


def _weight_from_json(data: dict, sigma: Sigma) -> CharSum:
    if "chars" in data:
        terms = {}
        for entry in data["chars"]:
            r = Fraction(str(entry["exp"]))
            c = Binarion(
                Fraction(str(entry["re"])), Fraction(str(entry.get("im", 0))), sigma
            )
            terms[r] = terms[r] + c if r in terms else c
        return CharSum(terms, sigma)
    b = Binarion(Fraction(str(data["re"])), Fraction(str(data.get("im", 0))), sigma)
    return CharSum.from_scalar(b)


class ExpPoly:
    """Finite sum of ``poly(x) * exp(u*<freq, x>)`` terms on ``R^m``.

    Closed under multiplication, differentiation and argument shifts, and
    exactly evaluable at rational points (values land in :class:`CharSum`).
    Polynomial coefficients are stored as :class:`CharSum` so the closure
    survives the twist and shift operations of the operator calculus.
    """

    __slots__ = ("dim", "sigma", "_terms")

    def __init__(self, dim: int, sigma: Sigma, terms: dict = None):
        if dim < 1:
            raise DimensionMismatchError("dim must be >= 1")
        self.dim = int(dim)
        self.sigma = as_sigma(sigma)
        clean = {}
        for (freq, exps), coeff in (terms or {}).items():
            freq = tuple(_as_fraction(f) for f in freq)
            exps = tuple(int(e) for e in exps)
            if len(freq) != self.dim or len(exps) != self.dim:
                raise DimensionMismatchError(f"term vectors must have length {self.dim}")
            if any(e < 0 for e in exps):
                raise ValueError("negative exponents are not allowed")
            coeff = CharSum.from_scalar(coeff, self.sigma)
            if coeff.sigma is not self.sigma:
                raise SignatureMismatchError("coefficient sigma differs from ExpPoly sigma")
            if coeff.is_zero():
                continue
            key = (freq, exps)
            if key in clean:
                merged = clean[key] + coeff
                if merged.is_zero():
                    del clean[key]
                else:
                    clean[key] = merged
            else:
                clean[key] = coeff
        self._terms = clean

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, dim: int, sigma: Sigma) -> "ExpPoly":
        return cls(dim, sigma, {})

    @classmethod
    def constant(cls, value, dim: int, sigma: Sigma) -> "ExpPoly":
        coeff = CharSum.from_scalar(value, sigma)
        zero = (Fraction(0),) * dim
        return cls(dim, sigma, {(zero, (0,) * dim): coeff})

    @classmethod
    def one(cls, dim: int, sigma: Sigma) -> "ExpPoly":
        return cls.constant(1, dim, sigma)

    @classmethod
    def coordinate(cls, index: int, dim: int, sigma: Sigma) -> "ExpPoly":
        if not 0 <= index < dim:
            raise IndexError(f"index {index} out of range for dim {dim}")
        exps = [0] * dim
        exps[index] = 1
        zero = (Fraction(0),) * dim
        return cls(dim, sigma, {(zero, tuple(exps)): CharSum.one(sigma)})

    @classmethod
    def monomial(cls, exps, coeff, sigma: Sigma) -> "ExpPoly":
        dim = len(exps)
        zero = (Fraction(0),) * dim
        return cls(dim, sigma, {(zero, tuple(exps)): CharSum.from_scalar(coeff, sigma)})

    @classmethod
    def character(cls, freq, sigma: Sigma, coeff=1) -> "ExpPoly":
        """Plane wave ``exp(u*<freq, x>)`` with an optional scalar factor."""
        freq = tuple(_as_fraction(f) for f in freq)
        dim = len(freq)
        return cls(
            dim, sigma, {(freq, (0,) * dim): CharSum.from_scalar(coeff, sigma)}
        )

    @classmethod
    def from_poly_symbol(cls, symbol: PolySymbol, h=None) -> "ExpPoly":
        """Embed a phase-space polynomial as a frequency-zero ExpPoly.

        Variables are ordered ``q1..qk, p1..pk`` (dimension ``2k``).  The
        formal ``h`` must be substituted by a rational value unless the
        symbol is ``h``-free.
        """
        k = symbol.dof
        zero_freq = (Fraction(0),) * (2 * k)
        terms = {}
        for alpha, beta, coeff in symbol.terms():
            if h is None:
                if coeff.degree() > 0:
                    raise ValueError("symbol carries formal h; pass a numeric h")
                value = coeff.constant_term
            else:
                value = coeff.substitute(h)
            terms[(zero_freq, alpha + beta)] = CharSum.from_scalar(value)
        return cls(2 * k, symbol.sigma, terms)

    # -- queries -------------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def terms(self):
        return [
            (freq, exps, self._terms[(freq, exps)])
            for freq, exps in sorted(self._terms)
        ]

    def degree(self) -> int:
        if not self._terms:
            return 0
        return max(sum(e) for _, e in self._terms)

    # -- ring operations ---------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, ExpPoly):
            _check_sigma(self, other)
            if other.dim != self.dim:
                raise DimensionMismatchError(
                    f"cannot combine dim={self.dim} with dim={other.dim}"
                )
            return other
        if isinstance(other, (CharSum, Binarion, int, Fraction)):
            return ExpPoly.constant(other, self.dim, self.sigma)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self._terms)
        for key, c in o._terms.items():
            out[key] = out[key] + c if key in out else c
        return ExpPoly(self.dim, self.sigma, out)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __neg__(self):
        return ExpPoly(self.dim, self.sigma, {k: -c for k, c in self._terms.items()})

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = {}
        for (f1, e1), c1 in self._terms.items():
            for (f2, e2), c2 in o._terms.items():
                key = (
                    tuple(x + y for x, y in zip(f1, f2)),
                    tuple(x + y for x, y in zip(e1, e2)),
                )
                c = c1 * c2
                out[key] = out[key] + c if key in out else c
        return ExpPoly(self.dim, self.sigma, out)

    __rmul__ = __mul__

    # -- calculus --------------------------------------------------------------------

    def differentiate(self, index: int = 0) -> "ExpPoly":
        """Exact partial derivative along coordinate ``index``."""
        if not 0 <= index < self.dim:
            raise IndexError(f"index {index} out of range for dim {self.dim}")
        u = Binarion.unit(self.sigma)
        out = {}

        def _acc(key, c):
            if key in out:
                out[key] = out[key] + c
            else:
                out[key] = c

        for (freq, exps), coeff in self._terms.items():
            e = exps[index]
            if e > 0:
                lowered = list(exps)
                lowered[index] -= 1
                _acc((freq, tuple(lowered)), coeff * Binarion(e, 0, self.sigma))
            if freq[index] != 0:
                _acc((freq, exps), coeff * (u * freq[index]))
        return ExpPoly(self.dim, self.sigma, out)

    def differentiate_multi(self, order) -> "ExpPoly":
        out = self
        for i, n in enumerate(order):
            for _ in range(n):
                out = out.differentiate(i)
                if out.is_zero():
                    return out
        return out

    def shift(self, offset) -> "ExpPoly":
        """Exact substitution ``x -> x + offset`` for a rational offset vector."""
        offset = tuple(_as_fraction(c) for c in offset)
        if len(offset) != self.dim:
            raise DimensionMismatchError("offset length must match dim")
        out = ExpPoly.zero(self.dim, self.sigma)
        for (freq, exps), coeff in self._terms.items():
            phase = sum(f * c for f, c in zip(freq, offset))
            scalar = CharSum.character(phase, self.sigma) * coeff
            shifted = ExpPoly(self.dim, self.sigma, {(freq, (0,) * self.dim): scalar})
            for i, e in enumerate(exps):
                if e == 0:
                    continue
                base = ExpPoly.coordinate(i, self.dim, self.sigma) + ExpPoly.constant(
                    offset[i], self.dim, self.sigma
                )
                shifted = shifted * base**e

            out = out + shifted
        return out

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            return NotImplemented
        result = ExpPoly.one(self.dim, self.sigma)
        for _ in range(exponent):
            result = result * self
        return result

    def evaluate(self, point) -> CharSum:
        """Exact evaluation at a rational point; characters stay formal."""
        point = tuple(_as_fraction(x) for x in point)
        if len(point) != self.dim:
            raise DimensionMismatchError("point length must match dim")
        total = CharSum.zero(self.sigma)
        for (freq, exps), coeff in self._terms.items():
            mono = Fraction(1)
            for x, e in zip(point, exps):
                mono *= x**e
            if mono == 0:
                continue
            phase = sum(f * x for f, x in zip(freq, point))
            total = total + coeff * CharSum.character(phase, self.sigma, mono)
        return total

    def evaluate_floats(self, point) -> tuple[float, float]:
        return self.evaluate(point).to_floats()

    # -- comparison / rendering -------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (CharSum, Binarion, int, Fraction)):
            other = ExpPoly.constant(other, self.dim, self.sigma)
        if not isinstance(other, ExpPoly):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.sigma is other.sigma
            and self._terms == other._terms
        )

    def to_text(self, names=None) -> str:
        if self.is_zero():
            return "0"
        if names is None:
            names = [f"x{i + 1}" for i in range(self.dim)]
        u = self.sigma.unit_symbol
        parts = []
        for freq, exps, coeff in self.terms():
            factors = []
            trivial = any(exps) or any(f != 0 for f in freq)
            if not (trivial and coeff == 1):
                cs = str(coeff)
                if not (coeff.is_scalar() and coeff.as_binarion().im == 0):
                    cs = f"({cs})"
                factors.append(cs)
            for i, e in enumerate(exps):
                if e == 1:
                    factors.append(names[i])
                elif e > 1:
                    factors.append(f"{names[i]}^{e}")
            phase = [
                f"{f}*{names[i]}" if f != 1 else names[i]
                for i, f in enumerate(freq)
                if f != 0
            ]
            if phase:
                factors.append(f"exp({u}*({' + '.join(phase)}))")
            parts.append("*".join(factors))
        return " + ".join(parts)

    __str__ = to_text
    __repr__ = to_text

    # -- serialization ---------------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "dim": self.dim,
            "sigma": self.sigma.value,
            "terms": [
                {
                    "freq": [str(f) for f in freq],
                    "exp": list(exps),
                    "coeff": _weight_to_json(coeff),
                }
                for freq, exps, coeff in self.terms()
            ],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "ExpPoly":
        sigma = as_sigma(data["sigma"])
        dim = int(data["dim"])
        terms = {}
        for entry in data["terms"]:
            key = (
                tuple(Fraction(str(f)) for f in entry["freq"]),
                tuple(int(e) for e in entry["exp"]),
            )
            c = _weight_from_json(entry["coeff"], sigma)
            terms[key] = terms[key] + c if key in terms else c
        return cls(dim, sigma, terms)

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ExpPoly":
        return cls.from_json_dict(json.loads(text))


class Ultradistribution:
    """Finite sum of weighted derivatives of point masses on ``R^m``.

    An atom ``(loc, order, weight)`` stands for ``weight * delta^(order)``
    at ``loc``; the pairing with a test function ``f`` is
    ``weight * (-1)^|order| * (d^order f)(loc)``.  The class is closed under
    derivatives, multiplication by monomials, tensor products, and the
    twist/pushforward machinery of the star product.
    """

    __slots__ = ("dim", "sigma", "_atoms")

    def __init__(self, dim: int, sigma: Sigma, atoms=None):
        if dim < 1:
            raise DimensionMismatchError("dim must be >= 1")
        self.dim = int(dim)
        self.sigma = as_sigma(sigma)
        clean = {}
        for loc, order, weight in atoms or []:
            loc = tuple(_as_fraction(x) for x in loc)
            order = tuple(int(n) for n in order)
            if len(loc) != self.dim or len(order) != self.dim:
                raise DimensionMismatchError(f"atom vectors must have length {self.dim}")
            if any(n < 0 for n in order):
                raise ValueError("derivative orders must be nonnegative")
            weight = CharSum.from_scalar(weight, self.sigma)
            if weight.sigma is not self.sigma:
                raise SignatureMismatchError("weight sigma differs from distribution sigma")
            if weight.is_zero():
                continue
            key = (loc, order)
            if key in clean:
                merged = clean[key] + weight
                if merged.is_zero():
                    del clean[key]
                else:
                    clean[key] = merged
            else:
                clean[key] = weight
        self._atoms = clean

    # -- constructors -----------------------------------------------------------

    @classmethod
    def zero(cls, dim: int, sigma: Sigma) -> "Ultradistribution":
        return cls(dim, sigma, [])

    @classmethod
    def delta(cls, loc, sigma: Sigma, order=None, weight=1) -> "Ultradistribution":
        """``weight * delta^(order)`` at ``loc`` (order defaults to zero)."""
        loc = tuple(_as_fraction(x) for x in loc)
        dim = len(loc)
        if order is None:
            order = (0,) * dim
        return cls(dim, sigma, [(loc, tuple(order), weight)])

    # -- queries ------------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._atoms

    def atoms(self):
        """Atom triples ``(loc, order, weight)`` in canonical order."""
        return [
            (loc, order, self._atoms[(loc, order)])
            for loc, order in sorted(self._atoms)
        ]

    # -- linear structure -------------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Ultradistribution):
            return NotImplemented
        _check_sigma(self, other)
        if other.dim != self.dim:
            raise DimensionMismatchError("dimension mismatch")
        out = dict(self._atoms)
        for key, w in other._atoms.items():
            out[key] = out[key] + w if key in out else w
        return Ultradistribution(
            self.dim, self.sigma, [(l, o, w) for (l, o), w in out.items()]
        )

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return self.scale(Binarion(-1, 0, self.sigma))

    def scale(self, factor) -> "Ultradistribution":
        factor = CharSum.from_scalar(factor, self.sigma)
        return Ultradistribution(
            self.dim,
            self.sigma,
            [(l, o, w * factor) for (l, o), w in self._atoms.items()],
        )

    # -- distribution calculus ----------------------------------------------------------

    def derivative(self, axis: int = 0) -> "Ultradistribution":
        """Distributional derivative: ``(d lambda, f) = -(lambda, d f)``.

        On atoms this just raises the derivative order along ``axis``.
        """
        if not 0 <= axis < self.dim:
            raise IndexError(f"axis {axis} out of range for dim {self.dim}")
        out = []
        for (loc, order), w in self._atoms.items():
            raised = list(order)
            raised[axis] += 1
            out.append((loc, tuple(raised), w))
        return Ultradistribution(self.dim, self.sigma, out)

    def derivative_multi(self, order) -> "Ultradistribution":
        out = self
        for axis, n in enumerate(order):
            for _ in range(n):
                out = out.derivative(axis)
        return out

    def mul_monomial(self, exponents) -> "Ultradistribution":
        """Multiply by ``x^exponents``, expanded on atoms via the Leibniz rule.

        ``x^n * delta^(m)_x0 = sum over kappa <= min(n, m) of
        binom(m, kappa) * n!/(n-kappa)! * x0^(n-kappa) * (-1)^|kappa|
        * delta^(m-kappa)_x0``.
        """
        if isinstance(exponents, int):
            exponents = (exponents,)
        exponents = tuple(int(n) for n in exponents)
        if len(exponents) != self.dim:
            raise DimensionMismatchError("exponent vector length must match dim")
        if any(n < 0 for n in exponents):
            raise ValueError("monomial exponents must be nonnegative")
        out = []
        for (loc, order), w in self._atoms.items():
            ranges = [range(min(n, m) + 1) for n, m in zip(exponents, order)]
            for kappa in iter_product(*ranges):
                scalar = Fraction(1)
                for n, m, k, x0 in zip(exponents, order, kappa, loc):
                    scalar *= math.comb(m, k)
                    scalar *= Fraction(math.factorial(n), math.factorial(n - k))
                    if n - k > 0:
                        scalar *= x0 ** (n - k)
                    if scalar == 0:
                        break
                if scalar == 0:
                    continue
                sign = -1 if sum(kappa) % 2 else 1
                new_order = tuple(m - k for m, k in zip(order, kappa))
                out.append((loc, new_order, w * (sign * scalar)))
        return Ultradistribution(self.dim, self.sigma, out)

    def pair(self, f: ExpPoly) -> CharSum:
        """Exact pairing with a test function: ``(delta^(n)_x0, f) = (-1)^|n| (d^n f)(x0)``."""
        if not isinstance(f, ExpPoly):
            raise TypeError("pairing requires an ExpPoly test function")
        _check_sigma(self, f)
        if f.dim != self.dim:
            raise DimensionMismatchError(
                f"distribution dim {self.dim} differs from test function dim {f.dim}"
            )
        total = CharSum.zero(self.sigma)
        for (loc, order), w in self._atoms.items():
            value = f.differentiate_multi(order).evaluate(loc)
            if sum(order) % 2:
                value = -value
            total = total + w * value
        return total

    def fourier(self) -> ExpPoly:
        """Closed-form transform ``y -> (lambda(x), exp(u*<y, x>))``.

        Each atom ``(x0, n, w)`` contributes ``w * (-u*y)^n * exp(u*<y, x0>)``.
        """
        u = Binarion.unit(self.sigma)
        out = {}
        for (loc, order), w in self._atoms.items():
            scalar = w * ((-u) ** sum(order))
            key = (loc, order)
            out[key] = out[key] + scalar if key in out else scalar
        return ExpPoly(self.dim, self.sigma, out)

    def tensor(self, other: "Ultradistribution") -> "Ultradistribution":
        _check_sigma(self, other)
        atoms = []
        for (l1, o1), w1 in self._atoms.items():
            for (l2, o2), w2 in other._atoms.items():
                atoms.append((l1 + l2, o1 + o2, w1 * w2))
        return Ultradistribution(self.dim + other.dim, self.sigma, atoms)

    # -- comparison / serialization ----------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Ultradistribution):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.sigma is other.sigma
            and self._atoms == other._atoms
        )

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for loc, order, w in self.atoms():
            loc_s = ",".join(str(x) for x in loc)
            if any(order):
                order_s = ",".join(str(n) for n in order)
                parts.append(f"({w})*d^({order_s})delta[{loc_s}]")
            else:
                parts.append(f"({w})*delta[{loc_s}]")
        return " + ".join(parts)

    __repr__ = __str__

    def to_json_dict(self) -> dict:
        return {
            "dim": self.dim,
            "sigma": self.sigma.value,
            "atoms": [
                {
                    "loc": [str(x) for x in loc],
                    "order": list(order),
                    "weight": _weight_to_json(w),
                }
                for loc, order, w in self.atoms()
            ],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "Ultradistribution":
        sigma = as_sigma(data["sigma"])
        dim = int(data["dim"])
        atoms = []
        for entry in data["atoms"]:
            atoms.append(
                (
                    tuple(Fraction(str(x)) for x in entry["loc"]),
                    tuple(int(n) for n in entry["order"]),
                    _weight_from_json(entry["weight"], sigma),
                )
            )
        return cls(dim, sigma, atoms)

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Ultradistribution":
        return cls.from_json_dict(json.loads(text))


# -- module-level operation names -------------------------------------------------


def pair(distribution: Ultradistribution, f: ExpPoly) -> CharSum:
    return distribution.pair(f)


def fourier(distribution: Ultradistribution) -> ExpPoly:
    return distribution.fourier()


def derivative(distribution: Ultradistribution, axis: int = 0) -> Ultradistribution:
    return distribution.derivative(axis)


def mul_monomial(distribution: Ultradistribution, exponents) -> Ultradistribution:
    return distribution.mul_monomial(exponents)


def _coerce_symbol(a, h=None) -> ExpPoly:
    if isinstance(a, PolySymbol):
        return ExpPoly.from_poly_symbol(a, h)
    if isinstance(a, ExpPoly):
        return a
    raise TypeError(f"expected a symbol, got {type(a).__name__}")


def inverse_fourier_symbol(a, h=None) -> Ultradistribution:
    """The unique distribution whose transposed-variable transform is ``a``.

    ``a`` is a phase-space symbol over ``(q1..qk, p1..pk)`` (an
    :class:`ExpPoly` of even dimension, or a :class:`PolySymbol`).  The
    result lives on ``(P, Q)`` coordinates, ``P`` paired with ``q`` and
    ``Q`` paired with ``p``; a monomial ``c * q^r p^s * exp(u(<A,q>+<B,p>))``
    maps to the atom ``c * (-sigma*u)^(|r|+|s|) * delta^((r,s))`` at
    ``(A, B)``, which :meth:`Ultradistribution.fourier` maps back exactly.
    """
    a = _coerce_symbol(a, h)
    if a.dim % 2:
        raise DimensionMismatchError("phase-space symbols need even dimension")
    sigma = a.sigma
    u = Binarion.unit(sigma)
    minus_inv_u = -(u.invert())  # equals -sigma*u
    atoms = []
    for freq, exps, coeff in a.terms():
        weight = coeff * (minus_inv_u ** sum(exps))
        atoms.append((freq, exps, weight))
    return Ultradistribution(a.dim, sigma, atoms)


def symbol_from_distribution(distribution: Ultradistribution) -> ExpPoly:
    """Inverse of :func:`inverse_fourier_symbol`: reconstruct the symbol."""
    if distribution.dim % 2:
        raise DimensionMismatchError("phase-space distributions need even dimension")
    return distribution.fourier()


def _twist(distribution: Ultradistribution, h: Fraction, k: int) -> Ultradistribution:
    """Multiply a ``(p1, q1, p2, q2)`` atom distribution by ``exp(u*h*<q1, p2>)``.

    Uses ``g * delta^(n) = sum_kappa (-1)^|kappa| binom(n, kappa)
    (d^kappa g)(x0) delta^(n-kappa)``; derivatives of the twist are
    polynomials in the ``q1``/``p2`` coordinates times the twist itself,
    built by the product rule, and the twist value at a rational location is
    a formal character.
    """
    sigma = distribution.sigma
    uh = Binarion(0, h, sigma)  # u*h
    q1 = slice(k, 2 * k)
    p2 = slice(2 * k, 3 * k)
    out = []
    for (loc, order), w in distribution._atoms.items():
        nq1 = order[q1]
        np2 = order[p2]
        base_char = CharSum.character(
            h * sum(a * b for a, b in zip(loc[q1], loc[p2])), sigma
        )
        # derivative polynomials of the twist, indexed by (kappa_q1, kappa_p2);
        # keys of each poly are (exps_q1, exps_p2) over the 2k twist variables
        polys = {((0,) * k, (0,) * k): {((0,) * k, (0,) * k): Binarion.one(sigma)}}
        ranges = [range(n + 1) for n in nq1] + [range(n + 1) for n in np2]
        for kappa in iter_product(*ranges):
            kq = tuple(kappa[:k])
            kp = tuple(kappa[k:])
            if (kq, kp) not in polys:
                polys[(kq, kp)] = _twist_step(polys, kq, kp, uh, k)
            poly = polys[(kq, kp)]
            value = Binarion.zero(sigma)
            for (eq, ep), c in poly.items():
                mono = Fraction(1)
                for x, e in zip(loc[q1], eq):
                    mono *= x**e
                for x, e in zip(loc[p2], ep):
                    mono *= x**e
                if mono != 0:
                    value = value + c * mono
            if value.is_zero():
                continue
            comb = 1
            for n, kk in zip(nq1, kq):
                comb *= math.comb(n, kk)
            for n, kk in zip(np2, kp):
                comb *= math.comb(n, kk)
            sign = -1 if (sum(kq) + sum(kp)) % 2 else 1
            new_order = (
                order[:k]
                + tuple(n - kk for n, kk in zip(nq1, kq))
                + tuple(n - kk for n, kk in zip(np2, kp))
                + order[3 * k :]
            )
            factor = base_char * (value * (sign * comb))
            out.append((loc, new_order, w * factor))
    return Ultradistribution(distribution.dim, sigma, out)


def _twist_step(polys, kq, kp, uh, k):
    """Derivative polynomial for multi-index (kq, kp) from a predecessor."""
    for i in range(k):
        if kq[i] > 0:
            prev_key = (_dec(kq, i), kp)
            if prev_key in polys:
                return _twist_diff(polys[prev_key], "q1", i, uh, k)
    for i in range(k):
        if kp[i] > 0:
            prev_key = (kq, _dec(kp, i))
            if prev_key in polys:
                return _twist_diff(polys[prev_key], "p2", i, uh, k)
    raise AssertionError("twist derivative lattice visited out of order")


def _dec(t, i):
    out = list(t)
    out[i] -= 1
    return tuple(out)


def _inc(t, i):
    out = list(t)
    out[i] += 1
    return tuple(out)


def _twist_diff(poly, block, i, uh, k):
    """d/d(q1_i) or d/d(p2_i) of ``poly * exp(u*h*<q1, p2>)``, poly part only."""
    out = {}

    def _acc(key, c):
        if key in out:
            s = out[key] + c
            if s.is_zero():
                del out[key]
            else:
                out[key] = s
        elif not c.is_zero():
            out[key] = c

    for (eq, ep), c in poly.items():
        if block == "q1":
            if eq[i] > 0:
                _acc((_dec(eq, i), ep), c * eq[i])
            _acc((eq, _inc(ep, i)), c * uh)  # exponent factor u*h*p2_i
        else:
            if ep[i] > 0:
                _acc((eq, _dec(ep, i)), c * ep[i])
            _acc((_inc(eq, i), ep), c * uh)  # exponent factor u*h*q1_i
    return out


def _pushforward_sum(distribution: Ultradistribution, k: int) -> Ultradistribution:
    """Push a ``(p1, q1, p2, q2)`` distribution forward under block addition."""
    atoms = []
    for (loc, order), w in distribution._atoms.items():
        loc2 = tuple(loc[i] + loc[2 * k + i] for i in range(2 * k))
        order2 = tuple(order[i] + order[2 * k + i] for i in range(2 * k))
        atoms.append((loc2, order2, w))
    return Ultradistribution(2 * k, distribution.sigma, atoms)


def star_distributional(a, b, h, degree_cap: int = None) -> ExpPoly:
    """Star product computed along the distributional route.

    Transforms both symbols to point-supported distributions, applies the
    twist ``exp(u*h*<q1, p2>)`` to their tensor product, pushes forward
    under addition of locations/orders, and transforms back.  Exact, and on
    polynomial symbols equal to :func:`hypermoyal.symbols.star` evaluated at
    the same rational ``h``.
    """
    h = _as_fraction(h)
    ea = _coerce_symbol(a, h)
    eb = _coerce_symbol(b, h)
    _check_sigma(ea, eb)
    if ea.dim != eb.dim:
        raise DimensionMismatchError("symbols live on different phase spaces")
    if ea.dim % 2:
        raise DimensionMismatchError("phase-space symbols need even dimension")
    k = ea.dim // 2
    if degree_cap is not None and ea.degree() + eb.degree() > degree_cap:
        from .errors import DegreeCapError

        raise DegreeCapError("star product exceeds degree cap")
    ta = inverse_fourier_symbol(ea)
    tb = inverse_fourier_symbol(eb)
    twisted = _twist(ta.tensor(tb), h, k)
    return symbol_from_distribution(_pushforward_sum(twisted, k))


def paley_wiener_growth(f: ExpPoly, n_max: int) -> tuple[float, float]:
    """Empirical growth bound ``||d^n f(0)|| <= C * R^n`` over ``n = 0..n_max``.

    ``C`` is pinned to the order-0 norm (or to the largest table entry when
    that is zero) and ``R`` is the smallest geometric rate covering the
    whole table.  For a single character ``exp(u*y*x0)`` the fitted ``R``
    approaches ``|x0|``.
    """
    if f.dim != 1:
        raise DimensionMismatchError("growth check is defined for dim-1 functions")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    norms = []
    current = f
    for _ in range(n_max + 1):
        norms.append(current.evaluate((Fraction(0),)).pos_norm())
        current = current.differentiate(0)
    c = norms[0] if norms[0] > 0 else max(norms)
    if c == 0:
        return 0.0, 0.0
    r = 0.0
    for n, v in enumerate(norms[1:], start=1):
        if v > 0:
            r = max(r, (v / c) ** (1.0 / n))
    return c, r
