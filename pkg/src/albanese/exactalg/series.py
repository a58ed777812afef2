"""Truncated Laurent series in the local parameter at infinity.

A series is known modulo ``pi**prec``.  Elements that are exactly a Laurent
polynomial (powers of ``F = 1/pi`` for instance) carry ``prec = EXACT``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

import flint

from ..errors import DivisionByZero, InputError, InsufficientPrecision
from .poly import rational, rational_str, to_fmpq

EXACT = 1 << 40


def _strip(start: int, body: flint.fmpq_poly, prec: int):
    """Drop leading zeros and everything at or beyond ``prec``."""
    n = prec - start
    if n <= 0:
        return prec, flint.fmpq_poly()
    if body.length() > n:
        body = body.truncate(n)
    if body.is_zero():
        return prec, body
    cs = body.coeffs()
    k = 0
    while cs[k] == 0:
        k += 1
    if k:
        body = body.right_shift(k)
    return start + k, body


class LaurentSeries:
    __slots__ = ("val", "body", "prec")

    def __init__(self, start: int, coeffs: Iterable = (), prec: int = EXACT):
        if isinstance(coeffs, flint.fmpq_poly):
            body = coeffs
        else:
            body = flint.fmpq_poly([to_fmpq(c) for c in coeffs])
        self.val, self.body = _strip(start, body, prec)
        self.prec = prec

    @classmethod
    def _raw(cls, val, body, prec):
        s = cls.__new__(cls)
        s.val, s.body, s.prec = val, body, prec
        return s

    @classmethod
    def monomial(cls, e: int, c=1, prec: int = EXACT) -> "LaurentSeries":
        return cls(e, [c], prec)

    @classmethod
    def zero(cls, prec: int = EXACT) -> "LaurentSeries":
        return cls._raw(prec, flint.fmpq_poly(), prec)

    # -- inspection -------------------------------------------------------
    def is_zero(self) -> bool:
        """True when every known coefficient vanishes."""
        return self.body.is_zero()

    @property
    def rel(self) -> int:
        return self.prec - self.val

    def is_exact(self) -> bool:
        return self.prec >= EXACT // 2

    def valuation(self) -> int:
        if self.is_zero():
            raise InsufficientPrecision("valuation of a series with no known nonzero term")
        return self.val

    def __getitem__(self, e: int) -> Fraction:
        if e >= self.prec:
            raise InsufficientPrecision(f"coefficient of pi^{e} unknown (precision {self.prec})")
        if e < self.val:
            return Fraction(0)
        return rational(self.body[e - self.val])

    coefficient = __getitem__

    def terms(self) -> list[tuple[int, Fraction]]:
        """Nonzero known terms as ``(exponent, coefficient)`` pairs."""
        return [(self.val + i, rational(c)) for i, c in enumerate(self.body.coeffs()) if c != 0]

    def principal_part(self) -> "LaurentSeries":
        if self.val >= 0:
            return LaurentSeries.zero()
        return LaurentSeries(self.val, self.body.truncate(-self.val), EXACT)

    def truncate(self, prec: int) -> "LaurentSeries":
        if prec >= self.prec:
            return self
        return LaurentSeries(self.val, self.body, prec)

    # -- arithmetic -------------------------------------------------------
    @staticmethod
    def coerce(other) -> "LaurentSeries":
        if isinstance(other, LaurentSeries):
            return other
        return LaurentSeries(0, [rational(other)], EXACT)

    def __add__(self, other):
        other = LaurentSeries.coerce(other)
        prec = min(self.prec, other.prec)
        start = min(self.val, other.val)
        a = self.body.left_shift(self.val - start) if not self.is_zero() else self.body
        b = other.body.left_shift(other.val - start) if not other.is_zero() else other.body
        return LaurentSeries(start, a + b, prec)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries._raw(self.val, -self.body, self.prec)

    def __sub__(self, other):
        return self + (-LaurentSeries.coerce(other))

    def __rsub__(self, other):
        return LaurentSeries.coerce(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, LaurentSeries):
            c = to_fmpq(other)
            if c == 0:
                return LaurentSeries.zero(EXACT)
            return LaurentSeries._raw(self.val, self.body * c, self.prec)
        prec = min(self.val + other.prec, other.val + self.prec)
        if self.is_zero() or other.is_zero():
            return LaurentSeries.zero(prec)
        val = self.val + other.val
        n = min(prec - val, self.body.length() + other.body.length())
        return LaurentSeries(val, self.body.mul_low(other.body, n), prec)

    __rmul__ = __mul__

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by ``pi**k``."""
        if self.is_zero():
            return LaurentSeries.zero(self.prec + k)
        return LaurentSeries._raw(self.val + k, self.body, self.prec + k)

    def inverse(self, rel: int | None = None) -> "LaurentSeries":
        """Multiplicative inverse; ``rel`` caps the relative precision of exact inputs."""
        if self.is_zero():
            raise DivisionByZero("inverse of a series with no known nonzero term")
        n = self.rel
        if self.body.length() == 1:
            c = self.body[0]
            return LaurentSeries._raw(-self.val, flint.fmpq_poly([1 / c]), -self.val + n)
        if n >= EXACT // 2:
            if rel is None:
                raise InsufficientPrecision("inverse of an exact series needs a precision cap")
            n = rel
        # Newton iteration g <- g (2 - b g)
        b = self.body
        g = flint.fmpq_poly([1 / b[0]])
        k = 1
        while k < n:
            k = min(2 * k, n)
            e = b.mul_low(g, k)
            g = g.mul_low(2 - e, k)
        return LaurentSeries(-self.val, g, -self.val + n)

    def __truediv__(self, other):
        if not isinstance(other, LaurentSeries):
            c = rational(other)
            if c == 0:
                raise DivisionByZero("series divided by zero")
            return self * (1 / c)
        return self * other.inverse(rel=self.rel if not self.is_exact() else None)

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = LaurentSeries.coerce(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def derivative(self) -> "LaurentSeries":
        """d/dpi."""
        if self.is_zero():
            return LaurentSeries.zero(self.prec - 1)
        cs = [to_fmpq(self.val + i) * c for i, c in enumerate(self.body.coeffs())]
        return LaurentSeries(self.val - 1, flint.fmpq_poly(cs), self.prec - 1)

    def integral(self) -> "LaurentSeries":
        """Antiderivative with zero constant term; a residue is an error."""
        if self.is_zero():
            return LaurentSeries.zero(self.prec + 1)
        cs = []
        for i, c in enumerate(self.body.coeffs()):
            e = self.val + i
            if e == -1:
                if c != 0:
                    raise ArithmeticError("series has a residue, no Laurent antiderivative")
                cs.append(flint.fmpq(0))
            else:
                cs.append(c / (e + 1))
        return LaurentSeries(self.val + 1, flint.fmpq_poly(cs), self.prec + 1)

    def subs_power(self, k: int) -> "LaurentSeries":
        """Substitute ``pi -> pi**k`` for a positive integer ``k``."""
        if self.is_zero():
            return LaurentSeries.zero(self.prec * k if not self.is_exact() else EXACT)
        cs = self.body.coeffs()
        spread = [flint.fmpq(0)] * ((len(cs) - 1) * k + 1)
        for i, c in enumerate(cs):
            spread[i * k] = c
        prec = EXACT if self.is_exact() else self.prec * k
        return LaurentSeries(self.val * k, flint.fmpq_poly(spread), prec)

    def evaluate(self, z) -> Fraction:
        """Exact value of the known truncation at a rational point."""
        z = rational(z)
        if self.is_zero():
            return Fraction(0)
        s = rational(self.body(to_fmpq(z)))
        return s * z ** self.val

    # -- comparison and serialisation ---------------------------------------
    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            if isinstance(other, (int, Fraction)):
                other = LaurentSeries.coerce(other)
            else:
                return NotImplemented
        return self.prec == other.prec and self.val == other.val and self.body == other.body

    def agrees_with(self, other: "LaurentSeries") -> bool:
        """Equality on the common range of known coefficients."""
        return (self - other).is_zero()

    def __hash__(self):
        return hash((self.val, self.prec, tuple(str(c) for c in self.body.coeffs())))

    def __repr__(self):
        parts = [f"{rational_str(c)}*pi^{e}" for e, c in self.terms()[:8]]
        tail = "" if self.is_exact() else f" + O(pi^{self.prec})"
        return "(" + (" + ".join(parts) or "0") + tail + ")"

    def to_json(self) -> dict:
        out = {"val": self.val, "coeffs": [rational_str(rational(c)) for c in self.body.coeffs()]}
        if not self.is_exact():
            out["prec"] = self.prec
        return out

    @classmethod
    def from_json(cls, data) -> "LaurentSeries":
        try:
            val = int(data["val"])
            coeffs = [rational(c) for c in data["coeffs"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad series JSON: {data!r}") from exc
        prec = int(data["prec"]) if data.get("prec") is not None else EXACT
        return cls(val, coeffs, prec)


class LogSeries:
    """Finite sum ``sum_j L_j(z) * log(z)**j`` with Laurent coefficients."""

    __slots__ = ("parts",)

    def __init__(self, parts: dict[int, LaurentSeries] | None = None):
        self.parts = {j: s for j, s in (parts or {}).items() if not s.is_zero()}

    @classmethod
    def from_series(cls, s: LaurentSeries) -> "LogSeries":
        return cls({0: s})

    def __getitem__(self, j: int) -> LaurentSeries:
        return self.parts.get(j, LaurentSeries.zero())

    def max_log(self) -> int:
        return max(self.parts, default=0)

    def __add__(self, other: "LogSeries") -> "LogSeries":
        keys = set(self.parts) | set(other.parts)
        return LogSeries({j: self.parts.get(j, LaurentSeries.zero()) + other.parts.get(j, LaurentSeries.zero())
                          for j in keys})

    def __neg__(self):
        return LogSeries({j: -s for j, s in self.parts.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, LogSeries):
            return LogSeries({j: s * other for j, s in self.parts.items()})
        out: dict[int, LaurentSeries] = {}
        for i, a in self.parts.items():
            for j, b in other.parts.items():
                out[i + j] = out[i + j] + a * b if i + j in out else a * b
        return LogSeries(out)

    __rmul__ = __mul__

    def min_prec(self) -> int:
        return min((s.prec for s in self.parts.values()), default=EXACT)

    def truncate(self, prec: int) -> "LogSeries":
        return LogSeries({j: s.truncate(prec) for j, s in self.parts.items()})

    def agrees_with(self, other: "LogSeries") -> bool:
        diff = self - other
        return all(s.is_zero() for s in diff.parts.values())

    def constant_term(self) -> Fraction:
        """Coefficient of ``z**0 * log(z)**0``."""
        s = self.parts.get(0)
        return s[0] if s is not None else Fraction(0)

    def evaluate(self, z, log_z=None):
        """Value at ``z``: a dict ``{j: coeff of log(z)**j}`` or a rational if ``log_z`` is given."""
        vals = {j: s.evaluate(z) for j, s in self.parts.items()}
        if log_z is None:
            return {j: v for j, v in sorted(vals.items()) if v != 0}
        lz = rational(log_z)
        return sum((v * lz ** j for j, v in vals.items()), Fraction(0))

    def __repr__(self):
        return " + ".join(f"{s!r}*log^{j}" for j, s in sorted(self.parts.items())) or "0"

    def to_json(self) -> dict:
        return {str(j): s.to_json() for j, s in sorted(self.parts.items())}
