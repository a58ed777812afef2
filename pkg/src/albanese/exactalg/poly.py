"""Univariate polynomials and rational functions over the rationals.

Arithmetic is delegated to FLINT's ``fmpq_poly``; the public surface speaks
``fractions.Fraction`` so callers never see FLINT types.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

import flint

from ..errors import DivisionByZero, InputError


def rational(value) -> Fraction:
    """Coerce ints, Fractions, ``fmpq`` and strings like ``"-3/4"``."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, flint.fmpq):
        return Fraction(int(value.p), int(value.q))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational number: {value!r}") from exc
    raise InputError(f"not a rational number: {value!r}")


def rational_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def to_fmpq(value) -> flint.fmpq:
    q = rational(value)
    return flint.fmpq(q.numerator, q.denominator)


class Poly:
    """Dense polynomial in ``x`` with ascending coefficients."""

    __slots__ = ("_p", "_key")

    def __init__(self, coeffs: Iterable = ()):
        if isinstance(coeffs, flint.fmpq_poly):
            self._p = coeffs
        else:
            self._p = flint.fmpq_poly([to_fmpq(c) for c in coeffs])
        self._key = None

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def const(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def monomial(cls, deg: int, c=1) -> "Poly":
        return cls([0] * deg + [c])

    @property
    def flint(self) -> flint.fmpq_poly:
        return self._p

    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(rational(c) for c in self._p.coeffs())

    def __getitem__(self, i: int) -> Fraction:
        return rational(self._p[i]) if 0 <= i <= self.degree() else Fraction(0)

    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return self._p.degree()

    def is_zero(self) -> bool:
        return self._p.is_zero()

    def is_constant(self) -> bool:
        return self._p.degree() <= 0

    def leading(self) -> Fraction:
        return rational(self._p.leading_coefficient()) if not self.is_zero() else Fraction(0)

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return Poly(self._p / self._p.leading_coefficient())

    @staticmethod
    def _lift(other):
        if isinstance(other, Poly):
            return other._p
        return flint.fmpq_poly([to_fmpq(other)])

    def __add__(self, other):
        return Poly(self._p + self._lift(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Poly(self._p - self._lift(other))

    def __rsub__(self, other):
        return Poly(self._lift(other) - self._p)

    def __neg__(self):
        return Poly(-self._p)

    def __mul__(self, other):
        if isinstance(other, Poly):
            return Poly(self._p * other._p)
        return Poly(self._p * to_fmpq(other))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        return Poly(self._p ** e)

    def __divmod__(self, other: "Poly"):
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        q, r = divmod(self._p, other._p)
        return Poly(q), Poly(r)

    def __floordiv__(self, other: "Poly"):
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly"):
        return divmod(self, other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    def gcd(self, other: "Poly") -> "Poly":
        """Monic gcd (zero if both inputs vanish)."""
        return Poly(self._p.gcd(other._p))

    def derivative(self) -> "Poly":
        return Poly(self._p.derivative())

    def __call__(self, x):
        return rational(self._p(to_fmpq(x)))

    def key(self) -> tuple:
        if self._key is None:
            self._key = tuple((int(c.p), int(c.q)) for c in self._p.coeffs())
        return self._key

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        return isinstance(other, Poly) and self._p == other._p

    def __hash__(self):
        return hash(self.key())

    def __bool__(self):
        return not self._p.is_zero()

    def __repr__(self):
        return f"Poly({[rational_str(c) for c in self.coeffs()]})"

    def __str__(self):
        return str(self._p)

    def to_json(self) -> list[str]:
        return [rational_str(c) for c in self.coeffs()]

    @classmethod
    def from_json(cls, data) -> "Poly":
        if not isinstance(data, (list, tuple)):
            raise InputError("polynomial must be a JSON array of coefficients")
        return cls([rational(c) for c in data])


class RatFunc:
    """Reduced quotient ``num/den`` of polynomials with ``den`` monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None, *, reduced: bool = False):
        if den is None:
            den = Poly.const(1)
        if den.is_zero():
            raise DivisionByZero("rational function with zero denominator")
        if num.is_zero():
            num, den = num, Poly.const(1)
        elif not reduced:
            g = num.gcd(den)
            if not g.is_constant():
                num, den = num.exact_div(g), den.exact_div(g)
            lc = den.leading()
            if lc != 1:
                num, den = num * (1 / lc), den * (1 / lc)
        self.num = num
        self.den = den

    @classmethod
    def const(cls, c) -> "RatFunc":
        return cls(Poly.const(c), reduced=True)

    @classmethod
    def coerce(cls, v) -> "RatFunc":
        if isinstance(v, RatFunc):
            return v
        if isinstance(v, Poly):
            return cls(v, reduced=True)
        return cls.const(v)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den.is_constant()

    def degree(self) -> int:
        """Order of growth ``deg num - deg den``; large negative for zero."""
        if self.num.is_zero():
            return -(10 ** 9)
        return self.num.degree() - self.den.degree()

    def __add__(self, other):
        other = RatFunc.coerce(other)
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        g = self.den.gcd(other.den)
        if g.is_constant():
            return RatFunc(self.num * other.den + other.num * self.den,
                           self.den * other.den, reduced=True).normalized()
        a, b = self.den.exact_div(g), other.den.exact_div(g)
        return RatFunc(self.num * b + other.num * a, self.den * b)

    __radd__ = __add__

    def normalized(self) -> "RatFunc":
        if self.num.is_zero():
            return RatFunc(self.num)
        return self

    def __neg__(self):
        return RatFunc(-self.num, self.den, reduced=True)

    def __sub__(self, other):
        return self + (-RatFunc.coerce(other))

    def __rsub__(self, other):
        return RatFunc.coerce(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, (RatFunc, Poly)):
            c = rational(other)
            if c == 0:
                return RatFunc(Poly())
            return RatFunc(self.num * c, self.den, reduced=True)
        other = RatFunc.coerce(other)
        if self.num.is_zero() or other.num.is_zero():
            return RatFunc(Poly())
        g1 = self.num.gcd(other.den)
        g2 = other.num.gcd(self.den)
        n1, d2 = (self.num.exact_div(g1), other.den.exact_div(g1)) if not g1.is_constant() else (self.num, other.den)
        n2, d1 = (other.num.exact_div(g2), self.den.exact_div(g2)) if not g2.is_constant() else (other.num, self.den)
        return RatFunc(n1 * n2, d1 * d2, reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise DivisionByZero("inverse of zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        return self * RatFunc.coerce(other).inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return RatFunc(self.num ** e, self.den ** e, reduced=True)

    def derivative(self) -> "RatFunc":
        n, d = self.num, self.den
        return RatFunc(n.derivative() * d - n * d.derivative(), d * d)

    def __call__(self, x) -> Fraction:
        dv = self.den(x)
        if dv == 0:
            raise DivisionByZero(f"rational function has a pole at x = {x}")
        return self.num(x) / dv

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            other = RatFunc.coerce(other)
        return isinstance(other, RatFunc) and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return not self.num.is_zero()

    def __repr__(self):
        if self.den.is_constant():
            return f"({self.num})"
        return f"({self.num})/({self.den})"
