"""Pseudo-differential operators on exponential-polynomial wavefunctions.

An :class:`Operator` carries a phase-space symbol, a fixed positive rational
``h`` and a signature.  Application to a :class:`WaveFunction` follows two
equivalent routes, both exact:

* *normal-ordered route* (polynomial symbols): the monomial
  ``q^alpha p^beta`` acts as ``q^alpha (sigma*u*h * d/dq)^beta``, position
  factors to the left of the derivatives;
* *shift route* (any exponential-polynomial symbol): through the symbol's
  point-supported distribution, a plane-wave factor ``exp(u*<B, p>)`` in the
  symbol becomes the argument shift ``q -> q + h*B``.

The two routes agree on their common domain, and
:func:`compose_check` verifies operator composition against the star
product -- the operator-side oracle of the symbol calculus.  The defining
eigenrelation is ``apply(a, e) = a(q, p0) * e`` on the plane wave
``e = exp(u*<p0, q>/h)``.

``h`` is numeric here (unlike the formal ``h`` of
:mod:`hypermoyal.symbols`) because wavefunction frequencies ``p0/h`` must
combine arithmetically.
"""

from __future__ import annotations

from fractions import Fraction

from .distributions import (
    CharSum,
    ExpPoly,
    inverse_fourier_symbol,
    star_distributional,
)
from .errors import DimensionMismatchError, SignatureMismatchError
from .scalars import Binarion, Sigma, as_sigma
from .symbols import PolySymbol, star


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


class WaveFunction:
    """Exponential-polynomial function of ``q`` with momenta quantized by ``h``.

    Wraps an :class:`ExpPoly` whose frequency vectors are interpreted as
    ``p0/h`` for rational momenta ``p0``; the positive rational ``h`` is
    shared by every term.  Closed under multiplication by ``q``,
    differentiation, and argument shifts, which is exactly what operator
    application needs.
    """

    __slots__ = ("h", "func")

    def __init__(self, func: ExpPoly, h):
        self.h = _as_fraction(h)
        if self.h <= 0:
            raise ValueError("h must be a positive rational")
        if not isinstance(func, ExpPoly):
            raise TypeError("func must be an ExpPoly")
        self.func = func

    # -- constructors --------------------------------------------------

    @classmethod
    def plane_wave(cls, momentum, h, sigma: Sigma) -> "WaveFunction":
        """``exp(u*<p0, q>/h)`` for a rational momentum vector ``p0``."""
        h = _as_fraction(h)
        if isinstance(momentum, (int, Fraction, str)):
            momentum = (momentum,)
        freq = tuple(_as_fraction(p) / h for p in momentum)
        return cls(ExpPoly.character(freq, sigma), h)

    @classmethod
    def zero(cls, dof: int, h, sigma: Sigma) -> "WaveFunction":
        return cls(ExpPoly.zero(dof, sigma), h)

    @classmethod
    def constant(cls, value, dof: int, h, sigma: Sigma) -> "WaveFunction":
        return cls(ExpPoly.constant(value, dof, sigma), h)

    # -- queries -----------------------------------------------------------

    @property
    def dof(self) -> int:
        return self.func.dim

    @property
    def sigma(self) -> Sigma:
        return self.func.sigma

    def is_zero(self) -> bool:
        return self.func.is_zero()

    def momenta(self):
        """Rational momentum vectors ``p0 = h * freq`` present in the function."""
        return sorted(
            {tuple(self.h * f for f in freq) for freq, _, _ in self.func.terms()}
        )

    # -- arithmetic -----------------------------------------------------------

    def _check(self, other: "WaveFunction"):
        if self.sigma is not other.sigma:
            raise SignatureMismatchError("wavefunction signatures differ")
        if self.h != other.h:
            raise ValueError(f"wavefunction h values differ: {self.h} vs {other.h}")
        if self.dof != other.dof:
            raise DimensionMismatchError("wavefunction dimensions differ")

    def __add__(self, other):
        if not isinstance(other, WaveFunction):
            return NotImplemented
        self._check(other)
        return WaveFunction(self.func + other.func, self.h)

    def __sub__(self, other):
        if not isinstance(other, WaveFunction):
            return NotImplemented
        self._check(other)
        return WaveFunction(self.func - other.func, self.h)

    def __neg__(self):
        return WaveFunction(-self.func, self.h)

    def scale(self, factor) -> "WaveFunction":
        return WaveFunction(self.func * ExpPoly.constant(factor, self.dof, self.sigma), self.h)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Binarion, CharSum)):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def times_q(self, index: int = 0) -> "WaveFunction":
        return WaveFunction(
            self.func * ExpPoly.coordinate(index, self.dof, self.sigma), self.h
        )

    def differentiate(self, index: int = 0) -> "WaveFunction":
        return WaveFunction(self.func.differentiate(index), self.h)

    def shift(self, offset) -> "WaveFunction":
        return WaveFunction(self.func.shift(offset), self.h)

    def evaluate(self, point) -> CharSum:
        return self.func.evaluate(point)

    def __eq__(self, other):
        if not isinstance(other, WaveFunction):
            return NotImplemented
        return self.h == other.h and self.func == other.func

    def to_text(self) -> str:
        names = [f"q{i + 1}" for i in range(self.dof)]
        return self.func.to_text(names)

    __str__ = to_text
    __repr__ = to_text

    def to_json_dict(self) -> dict:
        return {"h": str(self.h), "func": self.func.to_json_dict()}

    @classmethod
    def from_json_dict(cls, data: dict) -> "WaveFunction":
        return cls(ExpPoly.from_json_dict(data["func"]), Fraction(str(data["h"])))


class Operator:
    """Pseudo-differential operator with a polynomial or exp-poly symbol."""

    __slots__ = ("symbol", "h", "sigma")

    def __init__(self, symbol, h, sigma: Sigma = None):
        if not isinstance(symbol, (PolySymbol, ExpPoly)):
            raise TypeError("symbol must be a PolySymbol or an ExpPoly")
        if isinstance(symbol, ExpPoly) and symbol.dim % 2:
            raise DimensionMismatchError(
                "phase-space symbols need even dimension (q variables then p)"
            )
        self.symbol = symbol
        self.h = _as_fraction(h)
        if self.h <= 0:
            raise ValueError("h must be a positive rational")
        self.sigma = symbol.sigma if sigma is None else as_sigma(sigma)
        if self.sigma is not symbol.sigma:
            raise SignatureMismatchError("operator sigma differs from symbol sigma")

    @property
    def dof(self) -> int:
        if isinstance(self.symbol, PolySymbol):
            return self.symbol.dof
        return self.symbol.dim // 2

    def _check(self, phi: WaveFunction):
        if phi.sigma is not self.sigma:
            raise SignatureMismatchError("operator and wavefunction signatures differ")
        if phi.h != self.h:
            raise ValueError(f"operator h {self.h} differs from wavefunction h {phi.h}")
        if phi.dof != self.dof:
            raise DimensionMismatchError(
                f"operator dof {self.dof} differs from wavefunction dof {phi.dof}"
            )

    # -- application routes ----------------------------------------------------

    def apply(self, phi: WaveFunction) -> WaveFunction:
        """Apply along the natural route for the symbol type."""
        if isinstance(self.symbol, PolySymbol):
            return self.apply_normal_ordered(phi)
        return self.apply_shift_form(phi)

    def apply_normal_ordered(self, phi: WaveFunction) -> WaveFunction:
        """``q^alpha p^beta`` acts as ``q^alpha (sigma*u*h d/dq)^beta``."""
        if not isinstance(self.symbol, PolySymbol):
            raise TypeError("normal-ordered route needs a polynomial symbol")
        self._check(phi)
        k = self.dof
        sigma = self.sigma
        su_h = Binarion(0, sigma.value * self.h, sigma)  # sigma*u*h
        out = ExpPoly.zero(k, sigma)
        for alpha, beta, coeff in self.symbol.terms():
            value = coeff.substitute(self.h)
            part = phi.func
            for i, b in enumerate(beta):
                for _ in range(b):
                    part = part.differentiate(i)
            order = sum(beta)
            if order:
                part = part * ExpPoly.constant(su_h**order, k, sigma)
            for i, a in enumerate(alpha):
                if a:
                    part = part * ExpPoly.coordinate(i, k, sigma) ** a
            out = out + part * ExpPoly.constant(value, k, sigma)
        return WaveFunction(out, self.h)

    def apply_shift_form(self, phi: WaveFunction) -> WaveFunction:
        """Route through the symbol's distribution.

        For the atom ``w * delta^((r, s))`` at ``(A, B)`` the action is
        ``w * (-1)^(|r|+|s|) * u^|r| * h^|s| * q^r * exp(u*<A, q>)
        * (d^s phi)(q + h*B)``.
        """
        self._check(phi)
        sym = self.symbol
        if isinstance(sym, PolySymbol):
            sym = ExpPoly.from_poly_symbol(sym, self.h)
        k = self.dof
        sigma = self.sigma
        u = Binarion.unit(sigma)
        distribution = inverse_fourier_symbol(sym)
        out = ExpPoly.zero(k, sigma)
        for loc, order, w in distribution.atoms():
            a_vec = loc[:k]
            b_vec = loc[k:]
            r = order[:k]
            s = order[k:]
            part = phi.func.differentiate_multi(s)
            part = part.shift(tuple(self.h * b for b in b_vec))
            scalar = w * (u ** sum(r)) * (self.h ** sum(s))
            if sum(order) % 2:
                scalar = -scalar
            part = part * ExpPoly(k, sigma, {((Fraction(0),) * k, (0,) * k): scalar})
            for i, e in enumerate(r):
                if e:
                    part = part * ExpPoly.coordinate(i, k, sigma) ** e
            if any(a != 0 for a in a_vec):
                part = part * ExpPoly.character(a_vec, sigma)
            out = out + part
        return WaveFunction(out, self.h)

    # -- serialization -------------------------------------------------------------

    def to_json_dict(self) -> dict:
        kind = "poly" if isinstance(self.symbol, PolySymbol) else "exp"
        return {
            "h": str(self.h),
            "sigma": self.sigma.value,
            "kind": kind,
            "symbol": self.symbol.to_json_dict(),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "Operator":
        kind = data.get("kind", "poly")
        if kind == "poly":
            symbol = PolySymbol.from_json_dict(data["symbol"])
        else:
            symbol = ExpPoly.from_json_dict(data["symbol"])
        return cls(symbol, Fraction(str(data["h"])), as_sigma(data["sigma"]))

    def __repr__(self) -> str:
        return f"Operator({self.symbol!r}, h={self.h})"


def commutator(a: Operator, b: Operator, phi: WaveFunction) -> WaveFunction:
    """``(a b - b a) phi``; equals applying the Moyal-bracket symbol."""
    return a.apply(b.apply(phi)) - b.apply(a.apply(phi))


class ComposeCheck:
    """Outcome of the operator-side oracle for the composition formula.

    Truthy when ``apply(star(a, b), phi)`` equals ``apply(a, apply(b, phi))``
    exactly; otherwise carries both sides and their difference.
    """

    __slots__ = ("ok", "lhs", "rhs", "diff")

    def __init__(self, ok: bool, lhs: WaveFunction, rhs: WaveFunction, diff: ExpPoly):
        self.ok = ok
        self.lhs = lhs
        self.rhs = rhs
        self.diff = diff

    def __bool__(self) -> bool:
        return self.ok

    def __repr__(self) -> str:
        if self.ok:
            return "ComposeCheck(ok=True)"
        return f"ComposeCheck(ok=False, diff={self.diff!r})"


def compose_check(a, b, phi: WaveFunction, h=None, degree_cap: int = None) -> ComposeCheck:
    """Check ``star(a, b)`` against actual operator composition on ``phi``.

    ``a`` and ``b`` may be :class:`PolySymbol` (star computed with the
    formal-``h`` series) or :class:`ExpPoly` symbols (star computed along
    the distributional route).  ``h`` defaults to the wavefunction's value.
    """
    h = phi.h if h is None else _as_fraction(h)
    if h != phi.h:
        raise ValueError("h must match the wavefunction's h")
    if isinstance(a, PolySymbol) and isinstance(b, PolySymbol):
        composed = star(a, b, degree_cap).substitute_h(h)
        op_ab = Operator(composed, h)
    else:
        ea = a if isinstance(a, ExpPoly) else ExpPoly.from_poly_symbol(a, h)
        eb = b if isinstance(b, ExpPoly) else ExpPoly.from_poly_symbol(b, h)
        op_ab = Operator(star_distributional(ea, eb, h), h)
    lhs = op_ab.apply(phi)
    rhs = Operator(a, h).apply(Operator(b, h).apply(phi))
    diff = lhs.func - rhs.func
    return ComposeCheck(diff.is_zero(), lhs, rhs, diff)


def plane_wave_eigenvalue(symbol: PolySymbol, momentum, h) -> ExpPoly:
    """The symbol ``a(q, p0)`` as an ExpPoly in ``q`` (exact partial evaluation).

    This is the expected eigenvalue factor in
    ``apply(a, exp(u*<p0, q>/h)) = a(q, p0) * exp(u*<p0, q>/h)``.
    """
    h = _as_fraction(h)
    if isinstance(momentum, (int, Fraction, str)):
        momentum = (momentum,)
    momentum = tuple(_as_fraction(p) for p in momentum)
    k = symbol.dof
    if len(momentum) != k:
        raise DimensionMismatchError("momentum length must match symbol dof")
    out = ExpPoly.zero(k, symbol.sigma)
    for alpha, beta, coeff in symbol.terms():
        scalar = coeff.substitute(h)
        mono = Fraction(1)
        for p0, e in zip(momentum, beta):
            mono *= p0**e
        if mono == 0:
            continue
        term = ExpPoly.monomial(alpha, scalar * mono, symbol.sigma)
        out = out + term
    return out
