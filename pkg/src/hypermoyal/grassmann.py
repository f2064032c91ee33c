"""Finite-generator Grassmann algebra with binarion coefficients.

Elements are sums ``sum_S c_S * theta^S`` over subsets ``S`` of the ``n``
generators, encoded as bitmasks; ``theta_i theta_j = -theta_j theta_i``
forces ``theta_i^2 = 0`` and the sign bookkeeping of the canonical
(ascending) ordering.  The algebra is supercommutative for the grading by
``|S| mod 2``, and the top monomial ``theta_1 ... theta_n`` is a nonzero
annihilator of the whole odd part -- the witness returned by
:func:`annihilator_witness`.
"""

from __future__ import annotations

import enum
import json
from fractions import Fraction

from .errors import DimensionMismatchError, SignatureMismatchError
from .scalars import Binarion, Sigma, as_sigma


class Parity(enum.Enum):
    EVEN = "even"
    ODD = "odd"
    MIXED = "mixed"

    def __str__(self) -> str:
        return self.value


def _merge_sign(mask_a: int, mask_b: int) -> int:
    """Sign of reordering ``theta^a * theta^b`` into ascending order.

    Counts, for each generator in ``b``, the generators of ``a`` above it;
    each such pair is one transposition.
    """
    sign = 1
    b = mask_b
    while b:
        low = b & -b
        above = mask_a >> (low.bit_length())
        if above.bit_count() % 2:
            sign = -sign
        b ^= low
    return sign


class GrassmannElement:
    """Element of the Grassmann algebra on ``n`` generators over binarions."""

    __slots__ = ("n", "sigma", "_terms")

    def __init__(self, n: int, sigma: Sigma, terms: dict = None):
        if n < 0:
            raise ValueError("generator count must be nonnegative")
        self.n = int(n)
        self.sigma = as_sigma(sigma)
        clean = {}
        for mask, coeff in (terms or {}).items():
            mask = int(mask)
            if mask < 0 or mask >= (1 << self.n):
                raise DimensionMismatchError(
                    f"monomial {mask:#b} uses generators beyond n={self.n}"
                )
            if not isinstance(coeff, Binarion):
                coeff = Binarion(coeff, 0, self.sigma)
            if coeff.sigma is not self.sigma:
                raise SignatureMismatchError("coefficient sigma differs from algebra sigma")
            if coeff.is_zero():
                continue
            clean[mask] = clean[mask] + coeff if mask in clean else coeff
        self._terms = {m: c for m, c in clean.items() if not c.is_zero()}

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, n: int, sigma: Sigma) -> "GrassmannElement":
        return cls(n, sigma, {})

    @classmethod
    def scalar(cls, value, n: int, sigma: Sigma) -> "GrassmannElement":
        return cls(n, sigma, {0: value})

    @classmethod
    def generator(cls, index: int, n: int, sigma: Sigma) -> "GrassmannElement":
        """``theta_index`` (0-based)."""
        if not 0 <= index < n:
            raise IndexError(f"generator index {index} out of range for n={n}")
        return cls(n, sigma, {1 << index: 1})

    @classmethod
    def monomial(cls, indices, n: int, sigma: Sigma, coeff=1) -> "GrassmannElement":
        """``coeff * theta_{i1} ... theta_{ik}`` for ascending 0-based indices."""
        mask = 0
        for i in indices:
            bit = 1 << int(i)
            if mask & bit:
                return cls.zero(n, sigma)
            mask |= bit
        return cls(n, sigma, {mask: coeff})


    # -- queries --------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def terms(self):
        return [(mask, self._terms[mask]) for mask in sorted(self._terms)]

    def parity(self) -> Parity:
        degrees = {mask.bit_count() % 2 for mask in self._terms}
        if len(degrees) > 1:
            return Parity.MIXED
        if degrees == {1}:
            return Parity.ODD
        return Parity.EVEN

    def even_part(self) -> "GrassmannElement":
        return GrassmannElement(
            self.n,
            self.sigma,
            {m: c for m, c in self._terms.items() if m.bit_count() % 2 == 0},
        )

    def odd_part(self) -> "GrassmannElement":
        return GrassmannElement(
            self.n,
            self.sigma,
            {m: c for m, c in self._terms.items() if m.bit_count() % 2 == 1},
        )

    # -- algebra -----------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, GrassmannElement):
            if other.sigma is not self.sigma:
                raise SignatureMismatchError("mixed signatures in Grassmann arithmetic")
            if other.n != self.n:
                raise DimensionMismatchError("mixed generator counts")
            return other
        if isinstance(other, (Binarion, int, Fraction)):
            return GrassmannElement.scalar(other, self.n, self.sigma)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self._terms)
        for m, c in o._terms.items():
            out[m] = out[m] + c if m in out else c
        return GrassmannElement(self.n, self.sigma, out)

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
        return GrassmannElement(
            self.n, self.sigma, {m: -c for m, c in self._terms.items()}
        )

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in o._terms.items():
                if m1 & m2:
                    continue  # repeated generator: square is zero
                mask = m1 | m2
                c = c1 * c2
                if _merge_sign(m1, m2) < 0:
                    c = -c
                out[mask] = out[mask] + c if mask in out else c
        return GrassmannElement(self.n, self.sigma, out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            return NotImplemented
        result = GrassmannElement.scalar(1, self.n, self.sigma)
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, (Binarion, int, Fraction)):
            other = GrassmannElement.scalar(other, self.n, self.sigma)
        if not isinstance(other, GrassmannElement):
            return NotImplemented
        return (
            self.n == other.n
            and self.sigma is other.sigma
            and self._terms == other._terms
        )

    # -- rendering ------------------------------------------------------------------

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for mask, coeff in self.terms():
            gens = "".join(
                f"θ{i + 1}" for i in range(self.n) if mask & (1 << i)
            )
            if not gens:
                parts.append(f"({coeff})" if not coeff.is_real() else str(coeff))
            elif coeff == 1:
                parts.append(gens)
            elif coeff == -1:
                parts.append(f"-{gens}")
            else:
                parts.append(f"({coeff})·{gens}")
        return " + ".join(parts)

    __repr__ = __str__

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "sigma": self.sigma.value,
            "terms": [
                {
                    "gens": [i + 1 for i in range(self.n) if mask & (1 << i)],
                    "re": str(c.re),
                    "im": str(c.im),
                }
                for mask, c in self.terms()
            ],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "GrassmannElement":
        sigma = as_sigma(data["sigma"])
        n = int(data["n"])
        terms = {}
        for entry in data["terms"]:
            mask = 0
            for g in entry["gens"]:
                mask |= 1 << (int(g) - 1)
            c = Binarion(Fraction(str(entry["re"])), Fraction(str(entry.get("im", 0))), sigma)
            terms[mask] = terms[mask] + c if mask in terms else c
        return cls(n, sigma, terms)

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def generators(n: int, sigma: Sigma) -> tuple:
    """The ``n`` anticommuting generators as elements of the algebra."""
    return tuple(GrassmannElement.generator(i, n, sigma) for i in range(n))


def gproduct(a: GrassmannElement, b: GrassmannElement) -> GrassmannElement:
    return a * b


def parity(a: GrassmannElement) -> Parity:
    return a.parity()


def supercommutator(a: GrassmannElement, b: GrassmannElement) -> GrassmannElement:
    """``a*b - (-1)^{|a||b|} b*a``, extended bilinearly to mixed elements.

    Vanishes identically: the algebra is supercommutative.
    """
    total = GrassmannElement.zero(a.n, a.sigma)
    for x, px in ((a.even_part(), 0), (a.odd_part(), 1)):
        if x.is_zero():
            continue
        for y, py in ((b.even_part(), 0), (b.odd_part(), 1)):
            if y.is_zero():
                continue
            yx = y * x
            if px * py:
                total = total + (x * y + yx)
            else:
                total = total + (x * y - yx)
    return total


def annihilator_witness(n: int, sigma: Sigma = Sigma.HYPERBOLIC) -> GrassmannElement:
    """The top monomial ``theta_1 ... theta_n``, verified to kill the odd part.

    Every product with an odd basis monomial repeats a generator and
    vanishes, so the witness is a nonzero member of the odd-part
    annihilator; finite-generator Grassmann algebras never have a trivial
    one.
    """
    if n < 1:
        raise ValueError("witness needs at least one generator")
    top = GrassmannElement(n, sigma, {(1 << n) - 1: 1})
    for mask in range(1, 1 << n):
        if mask.bit_count() % 2 == 1:
            probe = GrassmannElement(n, sigma, {mask: 1})
            if not (top * probe).is_zero():
                raise AssertionError("witness failed to annihilate an odd monomial")
    return top
