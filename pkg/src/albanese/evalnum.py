"""Iterated integrals from the tangential base point at infinity.

Inside the disc at infinity every form is a Laurent series ``f(t) dt`` with at
worst a simple pole.  The integral from a dummy lower endpoint ``sigma`` is
built by nested formal antiderivatives (``int dt/t = log t``); the value from
the tangential base point is its constant term in ``sigma`` and ``log sigma``.
Outside the disc the path is split at a disc point and the far segment comes
from a caller supplied oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable, Mapping, Sequence

from .errors import InputError, NonLogPole, OracleMissingValue, PrecisionExhausted
from .exactalg import CurveModel, LaurentSeries, LogSeries, OneForm, rational, rational_str
from .exactalg.series import EXACT


@dataclass(frozen=True)
class DiskPoint:
    """Point of the disc at infinity given by its local parameter value."""

    z: Fraction

    def __post_init__(self):
        z = rational(self.z)
        if z == 0:
            raise InputError("z = 0 is the puncture, not a point of the disc")
        object.__setattr__(self, "z", z)


def _point(z) -> DiskPoint:
    return z if isinstance(z, DiskPoint) else DiskPoint(z)


class LogPolynomial:
    """Polynomial in the symbol ``log z`` with rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, Fraction] | None = None):
        self.coeffs = {j: rational(c) for j, c in (coeffs or {}).items() if c}

    @classmethod
    def coerce(cls, v) -> "LogPolynomial":
        return v if isinstance(v, LogPolynomial) else cls({0: rational(v)})

    def __add__(self, other):
        other = LogPolynomial.coerce(other)
        out = dict(self.coeffs)
        for j, c in other.coeffs.items():
            out[j] = out.get(j, 0) + c
        return LogPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return LogPolynomial({j: -c for j, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-LogPolynomial.coerce(other))

    def __rsub__(self, other):
        return LogPolynomial.coerce(other) - self

    def __mul__(self, other):
        other = LogPolynomial.coerce(other)
        out: dict = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                out[i + j] = out.get(i + j, 0) + a * b
        return LogPolynomial(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LogPolynomial.coerce(other)
        if not isinstance(other, LogPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def is_rational(self) -> bool:
        return all(j == 0 for j in self.coeffs)

    def value(self, log_z=None) -> Fraction:
        """Substitute a branch value for ``log z``; optional when no log occurs."""
        if log_z is None:
            if not self.is_rational():
                raise InputError("a value for log z is needed")
            return self.coeffs.get(0, Fraction(0))
        lz = rational(log_z)
        return sum((c * lz ** j for j, c in self.coeffs.items()), Fraction(0))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for j, c in sorted(self.coeffs.items()):
            parts.append(rational_str(c) if j == 0 else f"{rational_str(c)}*log(z)^{j}")
        return " + ".join(parts)

    def to_json(self) -> dict:
        return {str(j): rational_str(c) for j, c in sorted(self.coeffs.items())}


# -- formal antiderivatives --------------------------------------------------

def _check_form(f: LaurentSeries):
    if not f.is_zero() and f.val < -1:
        raise NonLogPole(f"form has a pole of order {-f.val} at the puncture")


def log_antiderivative(ls: LogSeries) -> LogSeries:
    """Antiderivative of ``sum_j L_j(t) log(t)^j dt`` with no ``t^0 log^0`` term."""
    if not ls.parts:
        return LogSeries()
    prec = min(s.prec for s in ls.parts.values())
    prec = prec + 1 if prec < EXACT // 2 else EXACT
    acc: dict[int, dict[int, Fraction]] = {}

    def add(j, e, c):
        row = acc.setdefault(j, {})
        row[e] = row.get(e, 0) + c

    for j, L in ls.parts.items():
        for e, c in L.terms():
            if e < -1:
                raise NonLogPole(f"integrand has t^{e}")
            if e == -1:
                add(j + 1, 0, c / (j + 1))
                continue
            k = Fraction(e + 1)
            # int t^e log^j = t^k sum_i (-1)^i j!/(j-i)! log^(j-i) / k^(i+1)
            for i in range(j + 1):
                coef = c * (-1) ** i * Fraction(factorial(j), factorial(j - i)) / k ** (i + 1)
                add(j - i, e + 1, coef)
    parts = {}
    for j, row in acc.items():
        lo = min(row)
        body = [row.get(e, 0) for e in range(lo, max(row) + 1)]
        parts[j] = LaurentSeries(lo, body, prec)
    return LogSeries(parts)


def _as_log(s: LaurentSeries) -> LogSeries:
    return LogSeries.from_series(s)


@dataclass
class FormalIntegral:
    """``int_sigma^z w_1 ... w_n`` as ``sum_i A_i(z) B_i(sigma)``.

    Each ``A_i`` is a log series in the endpoint and each ``B_i`` a log series
    in the dummy lower endpoint.
    """

    terms: list = field(default_factory=list)

    def sigma_part(self, j: int) -> list[tuple[LogSeries, LaurentSeries]]:
        """Pieces of ``a^x_j(sigma)``: the coefficient of ``log(sigma)^j``."""
        return [(a, b[j]) for a, b in self.terms if j in b.parts]

    def regularized(self) -> LogSeries:
        """Constant term at ``sigma = log sigma = 0``, as a log series in ``z``."""
        out = LogSeries()
        for a, b in self.terms:
            c = b.constant_term()
            if c:
                out = out + a * c
        return out


def formal_iterated_integral(forms: Sequence[LaurentSeries]) -> FormalIntegral:
    """Nested integrals ``int_sigma^z f_1 (int_sigma^{t_1} f_2 (...))``; ``f_1`` outermost."""
    one = _as_log(LaurentSeries.coerce(1))
    if not forms:
        return FormalIntegral([(one, one)])
    for f in forms:
        _check_form(f)
    # innermost first: F(t) = sum_i a_i(t) b_i(sigma)
    cur = [(one, one)]
    for f in reversed(forms):
        fl = _as_log(f)
        nxt = []
        for a, b in cur:
            prim = log_antiderivative(fl * a)
            nxt.append((prim, b))
            nxt.append((one, -(b * prim)))
        cur = _merge(nxt)
    return FormalIntegral(cur)


def _merge(terms):
    """Collect terms sharing an identical ``sigma`` factor to keep the list short."""
    out: list = []
    for a, b in terms:
        if not b.parts or not a.parts:
            continue
        for k, (a2, b2) in enumerate(out):
            if a2 is a:
                out[k] = (a2, b2 + b)
                break
        else:
            out.append((a, b))
    return out


def regularized_integral(forms: Sequence[LaurentSeries]) -> LogSeries:
    """The regularized value as a function of the endpoint ``z``."""
    return formal_iterated_integral(forms).regularized()


def _evaluate(ls: LogSeries, z: Fraction, need: int | None) -> LogPolynomial:
    if need is not None and ls.parts and ls.min_prec() < need:
        raise PrecisionExhausted(f"series known to order {ls.min_prec()}, {need} requested")
    return LogPolynomial({j: s.evaluate(z) for j, s in ls.parts.items()})


def tangential_value(forms: Sequence[LaurentSeries], z, log_z=None, order: int | None = None):
    """``int_b^z`` from the tangential base point.

    Returns a :class:`LogPolynomial` in ``log z``, or a rational when a branch
    value ``log_z`` is supplied.  ``order`` asks that every series be known
    at least to ``t^order`` before truncating.
    """
    z = _point(z).z
    val = _evaluate(regularized_integral(forms), z, order)
    return val if log_z is None else val.value(log_z)


def point_integral(forms: Sequence[LaurentSeries], y, x) -> Fraction:
    """``int_y^x`` between two disc points for forms without residue."""
    y, x = _point(y).z, _point(x).z
    if not forms:
        return Fraction(1)
    for f in forms:
        _check_form(f)
    cur = LaurentSeries.coerce(1)
    for f in reversed(forms):
        try:
            prim = (f * cur).integral()
        except ArithmeticError as exc:
            raise NonLogPole("point to point integration needs forms without residue") from exc
        cur = prim - prim.evaluate(y)
    return cur.evaluate(x)


def form_series(curve: CurveModel, form: OneForm, order: int) -> LaurentSeries:
    """Expansion ``f(pi)`` of ``form = f(pi) d pi`` known through ``pi^order``."""
    s = curve.expand_form(form, order + 1)
    _check_form(s)
    return s


# -- splitting a path at a disc point ----------------------------------------

class IntegralOracle:
    """Supplies ``int_y^x w_1 ... w_i`` for words of form labels.

    ``values`` maps label tuples to rationals; ``fn`` may be given instead as
    ``fn(word, (start, end))``.  The empty word is 1.
    """

    def __init__(self, values: Mapping | None = None, fn: Callable | None = None,
                 endpoints=("y", "x")):
        self.values = {tuple(k.split()) if isinstance(k, str) else tuple(k): rational(v)
                       for k, v in (values or {}).items()}
        self.fn = fn
        self.endpoints = tuple(endpoints)

    def __call__(self, word, endpoints=None) -> Fraction:
        word = tuple(word)
        if not word:
            return Fraction(1)
        if self.fn is not None:
            v = self.fn(word, endpoints or self.endpoints)
            if v is None:
                raise OracleMissingValue(f"oracle has no value for {' '.join(word)}")
            return rational(v)
        if word not in self.values:
            raise OracleMissingValue(f"oracle has no value for {' '.join(word)}")
        return self.values[word]

    def check_shuffle(self) -> list[tuple]:
        """Pairs of stored words whose product disagrees with the shuffle sum."""
        from .wordalg import shuffle_words
        bad = []
        words = sorted(self.values)
        for i, u in enumerate(words):
            for v in words[i:]:
                sh = shuffle_words(u, v)
                if not all(w in self.values for w in sh):
                    continue
                total = sum((self.values[w] * m for w, m in sh.items()), Fraction(0))
                if total != self.values[u] * self.values[v]:
                    bad.append((u, v))
        return bad

    @classmethod
    def from_json(cls, data) -> "IntegralOracle":
        try:
            return cls(values=data["values"], endpoints=data.get("endpoints", ("y", "x")))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad oracle JSON: {exc}") from exc


def compose_paths(labels: Sequence[str], series: Mapping[str, LaurentSeries], y,
                  oracle: IntegralOracle, log_y=None):
    """``int_b^x = sum_i int_y^x w_1..w_i * int_b^y w_{i+1}..w_n`` with the far
    segment from ``oracle`` and the near one from the tangential base point."""
    y = _point(y)
    labels = list(labels)
    try:
        forms = [series[lab] for lab in labels]
    except KeyError as exc:
        raise InputError(f"no series for form {exc.args[0]!r}") from exc
    total = LogPolynomial()
    for i in range(len(labels) + 1):
        far = oracle(labels[:i], (oracle.endpoints[0], oracle.endpoints[1]))
        if far == 0:
            continue
        near = tangential_value(forms[i:], y)
        total = total + near * far
    return total if log_y is None else total.value(log_y)
