"""Function field of an odd hyperelliptic curve ``y^2 = f(x)`` and expansions at infinity.

Elements of ``K(C)`` are stored as ``a(x) + b(x) y`` with rational functions
``a, b``; differentials as ``u dx``.  The local parameter at infinity is
``pi = x^g / y``, so the default ``F = y / x^g`` is exactly ``1/pi``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import flint

from ..errors import (BadBasis, BadF, DivisionByZero, InputError, InsufficientPrecision,
                      NotOddModel, OddGapUnreachable, PrecisionExhausted, SingularCurve, ZeroInput)
from .poly import Poly, RatFunc, rational, rational_str, to_fmpq
from .series import EXACT, LaurentSeries

MAX_REL = 1 << 10
_NEG = -(10 ** 9)


class FuncElem:
    """``a(x) + b(x) y`` in the function field of ``y^2 = f``."""

    __slots__ = ("a", "b", "f", "_hash")

    def __init__(self, a, b, f: Poly):
        self.a = RatFunc.coerce(a)
        self.b = RatFunc.coerce(b)
        self.f = f
        self._hash = None

    def _new(self, a, b):
        return FuncElem(a, b, self.f)

    def _coerce(self, other) -> "FuncElem":
        if isinstance(other, FuncElem):
            return other
        if isinstance(other, (RatFunc, Poly)):
            return self._new(other, RatFunc.const(0))
        return self._new(RatFunc.const(rational(other)), RatFunc.const(0))

    def is_zero(self) -> bool:
        return self.a.is_zero() and self.b.is_zero()

    def is_constant(self) -> bool:
        return self.b.is_zero() and self.a.is_poly() and self.a.num.degree() <= 0

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant function")
        return self.a.num[0] / self.a.den[0]

    def is_regular_affine(self) -> bool:
        """Membership in ``K[x, y]``: no poles away from infinity."""
        return self.a.is_poly() and self.b.is_poly()

    def __add__(self, other):
        other = self._coerce(other)
        return self._new(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return self._new(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, OneForm):
            return other * self
        if not isinstance(other, FuncElem):
            if isinstance(other, (RatFunc, Poly)):
                return self._new(self.a * other, self.b * other)
            c = rational(other)
            return self._new(self.a * c, self.b * c)
        if other.b.is_zero():
            return self._new(self.a * other.a, self.b * other.a)
        if self.b.is_zero():
            return self._new(self.a * other.a, self.a * other.b)
        a = self.a * other.a + self.b * other.b * self.f
        b = self.a * other.b + self.b * other.a
        return self._new(a, b)

    __rmul__ = __mul__

    def conjugate(self) -> "FuncElem":
        return self._new(self.a, -self.b)

    def norm(self) -> RatFunc:
        return self.a * self.a - self.b * self.b * self.f

    def inverse(self) -> "FuncElem":
        if self.is_zero():
            raise DivisionByZero("inverse of the zero function")
        if self.b.is_zero():
            return self._new(self.a.inverse(), RatFunc.const(0))
        n = self.norm().inverse()
        return self._new(self.a * n, -self.b * n)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = self._coerce(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def d(self) -> "OneForm":
        """Exterior derivative, using ``dy = f'/(2y) dx``."""
        fp = self.f.derivative()
        b = self.b.derivative() + self.b * RatFunc(fp, self.f * 2)
        return OneForm(self._new(self.a.derivative(), b))

    def at(self, x, y=None) -> Fraction:
        """Value at the affine point ``(x, y)``."""
        v = self.a(x)
        if not self.b.is_zero():
            if y is None:
                raise InputError("point needs a y-coordinate to evaluate this function")
            v += self.b(x) * rational(y)
        return v

    def pole_order(self, genus: int) -> int:
        """Pole order at infinity read off from degrees (negative means a zero)."""
        if self.is_zero():
            raise ZeroInput("pole order of the zero function")
        da = 2 * self.a.degree() if not self.a.is_zero() else _NEG
        db = 2 * self.b.degree() + 2 * genus + 1 if not self.b.is_zero() else _NEG
        return max(da, db)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self._coerce(other)
        if not isinstance(other, FuncElem):
            return NotImplemented
        return self.a == other.a and self.b == other.b and self.f == other.f

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.a, self.b, self.f))
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        if not self.a.is_zero():
            parts.append(repr(self.a))
        if not self.b.is_zero():
            parts.append(f"{self.b!r}*y")
        return " + ".join(parts)

    def to_json(self) -> dict:
        return {"a_num": self.a.num.to_json(), "a_den": self.a.den.to_json(),
                "b_num": self.b.num.to_json(), "b_den": self.b.den.to_json()}

    @classmethod
    def from_json(cls, data, f: Poly) -> "FuncElem":
        try:
            a = RatFunc(Poly.from_json(data["a_num"]), Poly.from_json(data.get("a_den", ["1"])))
            b = RatFunc(Poly.from_json(data.get("b_num", [])), Poly.from_json(data.get("b_den", ["1"])))
        except (KeyError, TypeError) as exc:
            raise InputError(f"bad function JSON: {data!r}") from exc
        return cls(a, b, f)


class OneForm:
    """A differential ``u dx`` with ``u`` in the function field."""

    __slots__ = ("u",)

    def __init__(self, u: FuncElem):
        self.u = u

    @property
    def f(self) -> Poly:
        return self.u.f

    def is_zero(self) -> bool:
        return self.u.is_zero()

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        return OneForm(self.u + other.u)

    __radd__ = __add__

    def __neg__(self):
        return OneForm(-self.u)

    def __sub__(self, other):
        return OneForm(self.u - other.u)

    def __mul__(self, other):
        if isinstance(other, OneForm):
            raise TypeError("product of two differentials")
        return OneForm(self.u * other)

    __rmul__ = __mul__

    def pole_order(self, genus: int) -> int:
        """Order of pole at infinity measured against ``d pi``."""
        return self.u.pole_order(genus) + 3

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        return isinstance(other, OneForm) and self.u == other.u

    def __hash__(self):
        return hash(("form", self.u))

    def __bool__(self):
        return not self.u.is_zero()

    def __repr__(self):
        return f"({self.u!r}) dx"

    def to_json(self) -> dict:
        return {"dx": self.u.to_json()}

    @classmethod
    def from_json(cls, data, f: Poly) -> "OneForm":
        return cls(FuncElem.from_json(data["dx"], f))


@dataclass(frozen=True, eq=False)
class CurveModel:
    """Odd model ``y^2 = f(x)`` with a de Rham basis and a simple-pole function ``F``."""

    f: Poly
    genus: int
    basis_polys: tuple
    F: FuncElem
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    # -- named elements -------------------------------------------------
    def func(self, a=0, b=0) -> FuncElem:
        return FuncElem(a, b, self.f)

    @property
    def x(self) -> FuncElem:
        return self.func(Poly.x(), 0)

    @property
    def y(self) -> FuncElem:
        return self.func(0, 1)

    def one(self) -> FuncElem:
        return self.func(1, 0)

    def zero(self) -> FuncElem:
        return self.func(0, 0)

    def alpha(self, i: int) -> OneForm:
        """Basis form ``p_i(x) dx / y``."""
        if not 0 <= i < 2 * self.genus:
            raise BadBasis(f"basis index {i} out of range")
        key = ("alpha", i)
        if key not in self._cache:
            self._cache[key] = OneForm(self.func(0, RatFunc(self.basis_polys[i], self.f)))
        return self._cache[key]

    def dx(self) -> OneForm:
        return OneForm(self.one())

    @property
    def leading(self) -> Fraction:
        return self.f.leading()

    @property
    def chi(self) -> Fraction:
        """Leading coefficient of ``x`` in ``pi``: ``x = chi * pi^-2 + ...``."""
        return 1 / self.leading

    def key(self) -> tuple:
        return (self.f.key(), tuple(p.key() for p in self.basis_polys), hash(self.F))

    def __eq__(self, other):
        return isinstance(other, CurveModel) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"CurveModel(y^2 = {self.f}, g={self.genus})"

    def to_json(self) -> dict:
        return {"f": self.f.to_json(), "genus": self.genus,
                "basis": [p.to_json() for p in self.basis_polys], "F": self.F.to_json()}

    # -- expansions at infinity -----------------------------------------
    def _x_body(self, rel: int) -> flint.fmpq_poly:
        """Power series ``X(s)`` with ``x = X(s)/s`` and ``s = pi^2``, to ``rel`` terms."""
        best = self._cache.get("xbody")
        if best is not None and best[0] >= rel:
            return best[1].truncate(rel)
        g = self.genus
        cs = [to_fmpq(c) for c in self.f.coeffs()]
        top = 2 * g + 1
        # u = 1/x satisfies u = s * P(u) with P(u) = u^(2g+1) f(1/u); write u = s W(s)
        pcoef = [cs[top - i] if top - i < len(cs) else flint.fmpq(0) for i in range(top + 1)]
        n = rel + 1
        w = flint.fmpq_poly([pcoef[0]])
        sw_shift = None
        for _ in range(n):
            sw_shift = w.left_shift(1)
            acc = flint.fmpq_poly([pcoef[top]])
            for i in range(top - 1, -1, -1):
                acc = acc.mul_low(sw_shift, n) + pcoef[i]
            if acc == w:
                break
            w = acc
        wser = LaurentSeries(0, w, n)
        xb = wser.inverse().body
        self._cache["xbody"] = (n, xb)
        return xb.truncate(rel)

    def _poly_at_x(self, p: Poly, rel: int) -> LaurentSeries:
        """``p(x)`` as a Laurent series in ``s = pi^2`` with ``rel`` relative terms."""
        d = p.degree()
        if d < 0:
            return LaurentSeries.zero()
        if d == 0:
            return LaurentSeries(0, [p[0]], EXACT)
        xb = self._x_body(rel)
        cs = p.flint.coeffs()
        acc = flint.fmpq_poly([cs[d]])
        for i in range(d - 1, -1, -1):
            acc = acc.mul_low(xb, rel) + flint.fmpq_poly([cs[i]]).left_shift(d - i)
        acc = acc.truncate(rel) if acc.length() > rel else acc
        return LaurentSeries(-d, acc, -d + rel)

    def _rat_at_x(self, r: RatFunc, rel: int) -> LaurentSeries:
        num = self._poly_at_x(r.num, rel)
        if r.den.is_constant():
            return num * (1 / r.den[0])
        return num / self._poly_at_x(r.den, rel)

    def _s_parts(self, e: FuncElem, rel: int):
        """Even and odd parts: ``e = A(pi^2) + pi^-1 B(pi^2)`` with ``B = b(x) x^g``."""
        A = self._rat_at_x(e.a, rel) if not e.a.is_zero() else None
        B = None
        if not e.b.is_zero():
            B = self._rat_at_x(e.b, rel) * self._poly_at_x(Poly.monomial(self.genus), rel)
        return A, B

    def _expand_once(self, e: FuncElem, order: int, rel: int) -> LaurentSeries:
        A, B = self._s_parts(e, rel)
        out = LaurentSeries.zero()
        if A is not None:
            out = out + A.subs_power(2)
        if B is not None:
            out = out + B.subs_power(2).shift(-1)
        return out

    def _x_prime_once(self, rel: int) -> LaurentSeries:
        xs = self._poly_at_x(Poly.x(), rel).subs_power(2)
        return xs.derivative()

    def expand(self, e: FuncElem, order: int) -> LaurentSeries:
        """``pi``-expansion of a function, correct modulo ``pi^order``."""
        if e.is_zero():
            return LaurentSeries.zero()
        pole = e.pole_order(self.genus)
        rel = max(4, (order + pole) // 2 + 3)
        while rel <= MAX_REL:
            s = self._expand_once(e, order, rel)
            if s.prec >= order:
                return s.truncate(order)
            rel *= 2
        raise PrecisionExhausted(f"could not reach precision {order}")

    def expand_form(self, w: OneForm, order: int) -> LaurentSeries:
        """Coefficient of ``d pi`` in the expansion of ``w``, modulo ``pi^order``."""
        if w.is_zero():
            return LaurentSeries.zero()
        pole = w.u.pole_order(self.genus)
        rel = max(4, (order + pole + 3) // 2 + 3)
        while rel <= MAX_REL:
            s = self._expand_once(w.u, order + 3, rel) * self._x_prime_once(rel)
            if s.prec >= order:
                return s.truncate(order)
            rel *= 2
        raise PrecisionExhausted(f"could not reach precision {order}")


def _squarefree(f: Poly) -> bool:
    return f.gcd(f.derivative()).is_constant()


def curve_new(f, genus: int | None = None, basis=None, F: FuncElem | None = None) -> CurveModel:
    """Validate an odd model and build its curve record.

    ``basis`` lists polynomials ``p_i`` standing for ``p_i(x) dx / y``; the
    default is ``x^i``.  ``F`` defaults to ``y / x^g``.
    """
    f = f if isinstance(f, Poly) else Poly([rational(c) for c in f])
    d = f.degree()
    if d < 3 or d % 2 == 0:
        raise NotOddModel(f"degree {d} is not of the form 2g+1 with g >= 1")
    g = (d - 1) // 2
    if genus is not None and genus != g:
        raise NotOddModel(f"degree {d} gives genus {g}, not {genus}")
    if not _squarefree(f):
        raise SingularCurve("f has a repeated root")
    if basis is None:
        polys = tuple(Poly.monomial(i) for i in range(2 * g))
    else:
        polys = tuple(p if isinstance(p, Poly) else Poly([rational(c) for c in p]) for p in basis)
        _check_basis(polys, g)
    if F is None:
        F = FuncElem(RatFunc.const(0), RatFunc(Poly.const(1), Poly.monomial(g)), f)
    elif F.f != f:
        raise BadF("F lives on a different curve")
    try:
        if F.pole_order(g) != 1:
            raise BadF("F must have a simple pole at infinity")
    except ZeroInput as exc:
        raise BadF("F is zero") from exc
    return CurveModel(f, g, polys, F)


def _check_basis(polys, g):
    if len(polys) != 2 * g:
        raise BadBasis(f"need {2 * g} basis forms, got {len(polys)}")
    for i, p in enumerate(polys):
        if p.is_zero():
            raise BadBasis(f"basis form {i} is zero")
        if i < g and p.degree() >= g:
            raise BadBasis(f"basis form {i} must be holomorphic (degree < {g})")
        if i >= g and p.degree() != i:
            raise BadBasis(f"basis form {i} must have a pole of order {2 * (i - g + 1)} at infinity")
    rows = [[p[j] for j in range(2 * g)] for p in polys]
    if _rank(rows) != 2 * g:
        raise BadBasis("basis forms are linearly dependent")


def _rank(rows) -> int:
    m = [list(r) for r in rows]
    rank = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = next((r for r in range(rank, len(m)) if m[r][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][c] != 0:
                t = m[r][c] / m[rank][c]
                m[r] = [a - t * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def ff_arith(op: str, lhs: FuncElem, rhs: FuncElem, curve: CurveModel) -> FuncElem:
    """Field operation ``op`` in ``{'+', '-', '*', '/'}`` on two elements of ``K(C)``."""
    if lhs.f != curve.f or rhs.f != curve.f:
        raise InputError("operands live on a different curve")
    if op == "+":
        return lhs + rhs
    if op == "-":
        return lhs - rhs
    if op == "*":
        return lhs * rhs
    if op == "/":
        return lhs / rhs
    raise InputError(f"unknown operation {op!r}")


def pi_expand(elem, curve: CurveModel, order: int) -> LaurentSeries:
    """Expansion at infinity of a function (or the ``d pi`` coefficient of a form)."""
    if isinstance(elem, OneForm):
        return curve.expand_form(elem, order)
    return curve.expand(elem, order)


def pole_order_at_infinity(elem, curve: CurveModel) -> int:
    if elem.is_zero():
        raise ZeroInput("pole order of zero")
    return elem.pole_order(curve.genus)


def pole_basis_element(curve: CurveModel, order: int) -> FuncElem | None:
    """The monomial ``x^a`` or ``x^a y`` with pole of the given order, if any."""
    g = curve.genus
    if order > 0 and order % 2 == 0:
        return curve.func(Poly.monomial(order // 2), 0)
    if order >= 2 * g + 1 and (order - 2 * g - 1) % 2 == 0:
        return curve.func(0, Poly.monomial((order - 2 * g - 1) // 2))
    return None


def peel_poles(target: LaurentSeries, curve: CurveModel, extras=(), strict: bool = True):
    """Cancel the principal part of ``target`` with monomials and the ``extras``.

    Returns ``(monomial_coeffs, extra_coeffs, residual)`` where
    ``monomial_coeffs`` maps pole orders to coefficients and ``residual`` is
    ``target`` minus the expansion of the combination.
    """
    if target.is_zero() or target.val >= 0:
        return {}, [Fraction(0)] * len(extras), target
    prec = min(target.prec, 1)
    top = -target.val
    extra_ser = [curve.expand(e, prec) for e in extras]
    extra_ord = [e.pole_order(curve.genus) for e in extras]
    mono: dict[int, Fraction] = {}
    ex = [Fraction(0)] * len(extras)
    cache: dict[int, LaurentSeries] = {}
    resid = target
    for o in range(top, 0, -1):
        c = resid[-o]
        if c == 0:
            continue
        basis = pole_basis_element(curve, o)
        if basis is not None:
            ser = cache.get(o) or curve.expand(basis, prec)
            cache[o] = ser
            t = c / ser[-o]
            mono[o] = mono.get(o, Fraction(0)) + t
            resid = resid - ser * t
            continue
        idx = next((i for i, eo in enumerate(extra_ord) if eo == o), None)
        if idx is not None:
            t = c / extra_ser[idx][-o]
            ex[idx] += t
            resid = resid - extra_ser[idx] * t
            continue
        if strict and o > 1:
            raise OddGapUnreachable(f"pole of odd order {o} cannot be cancelled")
    return mono, ex, resid


def monomials_to_elem(curve: CurveModel, mono: dict[int, Fraction]) -> FuncElem:
    out = curve.zero()
    for o, c in mono.items():
        out = out + pole_basis_element(curve, o) * c
    return out


def principal_part_solve(target, curve: CurveModel, strict: bool = True):
    """Find ``A`` in ``K[x, y]`` whose expansion cancels the reachable principal part.

    Returns ``(A, residual)`` with ``pi_expand(A) + residual == target`` on the
    known range.  ``target`` may be a function or a series.
    """
    if isinstance(target, FuncElem):
        if target.is_zero():
            raise ZeroInput("nothing to solve for")
        target = curve.expand(target, 1)
    mono, _, resid = peel_poles(target, curve, (), strict=strict)
    return monomials_to_elem(curve, mono), resid


def standard_curve(coeffs) -> CurveModel:
    """Shorthand for ``curve_new`` with default basis and ``F``."""
    return curve_new(coeffs)
