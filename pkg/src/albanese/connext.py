"""Gauge transformations taking the universal connection to one with logarithmic poles at infinity.

Notation.  ``h[(m, r)]`` is the gauge function in block column "1" for the
length ``m`` word of rank ``r``; ``c[(m, r)]`` is the matching connection form.
Blocks further right are shifts: the entry for rows of length ``m`` and
columns of length ``i`` is ``h[(m - i, r)]``.  Equivalently the gauge sends a
word ``v`` to ``G(1) v`` and the new connection sends ``v`` to ``Omega(1) v``
with ``G(1) = sum_u h_u u`` and ``Omega(1) = sum_u c_u u``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DimensionMismatch, InputError, NotIntegrable
from .exactalg import CurveModel, FuncElem, OneForm
from .wordalg import (TensorElem, WordIndex, basis_words, concat_mul, phi, psi, word_index,
                      word_letters, words_of_length)


def solve_h(target: OneForm, curve: CurveModel):
    """Return ``(h, c)`` with ``h`` a polynomial in ``F`` and ``c = dh - target`` having
    at worst a logarithmic pole at infinity.  ``h`` has no constant term in ``pi``."""
    zero = curve.zero()
    if target.is_zero():
        return zero, OneForm(zero)
    order = target.pole_order(curve.genus)
    if order <= 1:
        return zero, -target
    ser = curve.expand_form(target, 0)
    top = order - 1
    F = curve.F
    fpow = _f_powers(curve, top)
    h = zero
    resid = ser
    for j in range(top, 0, -1):
        t = resid[-j - 1]
        if t == 0:
            continue
        dser = _dF_power_series(curve, j)
        k = t / dser[-j - 1]
        h = h + fpow[j] * k
        resid = resid - dser * k
    if not h.is_zero():
        h0 = curve.expand(h, 1)[0]
        if h0:
            h = h - h0
    c = h.d() - target
    if not c.is_zero() and c.pole_order(curve.genus) > 1:
        raise NotIntegrable(f"pole of order {c.pole_order(curve.genus)} survives")
    return h, c


def _f_powers(curve: CurveModel, top: int) -> list:
    key = "Fpow"
    cached = curve._cache.get(key, [curve.one()])
    while len(cached) <= top:
        cached.append(cached[-1] * curve.F)
    curve._cache[key] = cached
    return cached


def _dF_power_series(curve: CurveModel, j: int):
    key = ("dFpow", j)
    if key not in curve._cache:
        curve._cache[key] = curve.expand_form(_f_powers(curve, j)[j].d(), 0)
    return curve._cache[key]


@dataclass
class LogExtension:
    """Gauge data ``h`` and logarithmic connection forms ``c`` up to ``level``."""

    curve: CurveModel
    level: int
    h: dict = field(default_factory=dict)
    c: dict = field(default_factory=dict)

    @property
    def g(self) -> int:
        return self.curve.genus

    def h_at(self, r: int, i: int, m: int) -> FuncElem:
        """Entry ``h^{r,i}_m`` of the level ``m`` block (shift of level ``m - i``)."""
        return self.h.get((m - i, r), self.curve.zero())

    def c_at(self, r: int, i: int, m: int) -> OneForm:
        return self.c.get((m - i, r), OneForm(self.curve.zero()))

    def gauge_one(self, n: int | None = None) -> TensorElem:
        """``G_n(1) = sum_u h_u u``."""
        n = self.level if n is None else n
        terms = {}
        for (m, r), v in self.h.items():
            if m <= n and not v.is_zero():
                terms[word_letters(WordIndex(m, r), self.g)] = v
        return TensorElem(n, self.g, terms)

    def connection_one(self, n: int | None = None) -> TensorElem:
        """``Omega_n(1) = sum_u c_u u`` with one-form coefficients."""
        n = self.level if n is None else n
        terms = {}
        for (m, r), v in self.c.items():
            if m <= n and not v.is_zero():
                terms[word_letters(WordIndex(m, r), self.g)] = v
        return TensorElem(n, self.g, terms)

    def gauge(self, n: int | None = None) -> "Gauge":
        n = self.level if n is None else n
        return Gauge.from_one(self.gauge_one(n), self.curve)

    def connection(self, n: int | None = None) -> "ConnMat":
        n = self.level if n is None else n
        return ConnMat.from_one(self.connection_one(n), self.curve)

    def lambda_constant(self):
        """Coefficient of ``F`` in the gauge entry of ``A0 A1 A1`` (elliptic case, level >= 3)."""
        if self.g != 1 or self.level < 3:
            return None
        h = self.h.get((3, 4))
        F = self.h.get((1, 2))
        if h is None or F is None:
            return None
        ratio = h / F
        return ratio.constant_value() if ratio.is_constant() else None


def _sum_forms(forms, curve):
    out = OneForm(curve.zero())
    for f in forms:
        out = out + f
    return out


def _step_target(ext: LogExtension, n: int, r: int) -> OneForm:
    """Form whose primitive gives ``h^{r,0}_{n+1}``; see the module notes."""
    g2 = 2 * ext.g
    curve = ext.curve
    p = psi(r, 0, n, g2)
    parts = []
    hprev = ext.h.get((n, r - (p - 1) * g2 ** n))
    if hprev is not None and not hprev.is_zero():
        parts.append(curve.alpha(p - 1) * hprev)
    for t in range(1, n + 1):
        cf = ext.c.get((t, phi(r, 0, t, g2) + 1))
        if cf is None or cf.is_zero():
            continue
        hh = ext.h.get((n + 1 - t, psi(r, 0, t, g2)))
        if hh is None or hh.is_zero():
            continue
        parts.append(cf * hh)
    return _sum_forms(parts, curve)


def log_extend_step(ext: LogExtension, threads: int = 1) -> LogExtension:
    """Extend gauge and connection data from level ``n`` to ``n + 1``."""
    n = ext.level
    curve = ext.curve
    g2 = 2 * ext.g
    out = LogExtension(curve, n + 1, dict(ext.h), dict(ext.c))

    def solve(r):
        return r, solve_h(_step_target(ext, n, r), curve)

    rs = range(1, g2 ** (n + 1) + 1)
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(solve, rs))
    else:
        results = [solve(r) for r in rs]
    for r, (h, c) in results:
        out.h[(n + 1, r)] = h
        out.c[(n + 1, r)] = c
    return out


def log_extension(curve: CurveModel, n: int, threads: int = 1) -> LogExtension:
    """Gauge data up to level ``n`` starting from the trivial level 0."""
    if n < 0:
        raise InputError("level must be non-negative")
    ext = LogExtension(curve, 0, {(0, 1): curve.one()}, {})
    for _ in range(n):
        ext = log_extend_step(ext, threads)
    return ext


# -- matrices ---------------------------------------------------------------

class _SparseMatrix:
    """Square matrix indexed by the basis words of ``B_n`` (longest first)."""

    def __init__(self, curve: CurveModel, n: int, entries: dict | None = None):
        self.curve = curve
        self.n = n
        self.basis = basis_words(n, curve.genus)
        self.entries = {k: v for k, v in (entries or {}).items() if not v.is_zero()}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __getitem__(self, key):
        return self.entries.get(key)

    def column(self, v) -> dict:
        return {u: e for (u, w), e in self.entries.items() if w == v}

    def block(self, row_len: int, col_len: int) -> list[list]:
        """Sub-matrix with rows of one word length and columns of another, zeros as ``0``."""
        rows = words_of_length(row_len, self.curve.genus)
        cols = words_of_length(col_len, self.curve.genus)
        return [[self.entries.get((u, v), 0) for v in cols] for u in rows]

    def lower_block(self, level: int) -> list[list]:
        """Rows of length ``level``, columns of every shorter length (longest first)."""
        rows = words_of_length(level, self.curve.genus)
        cols = [w for w in self.basis if len(w) < level]
        return [[self.entries.get((u, v), 0) for v in cols] for u in rows]

    def _mul(self, other, ident_self=False, ident_other=False):
        """Product, optionally adding the identity to either factor."""
        by_row: dict = {}
        for (u, w), e in other.entries.items():
            by_row.setdefault(u, []).append((w, e))
        out: dict = {}

        def add(key, val):
            out[key] = out[key] + val if key in out else val

        for (u, w), e in self.entries.items():
            for v, f in by_row.get(w, ()):
                add((u, v), e * f)
            if ident_other:
                add((u, w), e)
        if ident_self:
            for (u, v), f in other.entries.items():
                add((u, v), f)
        return out


class Gauge(_SparseMatrix):
    """Unipotent gauge ``G = I + N``; ``entries`` hold ``N`` (strictly lower in length)."""

    @classmethod
    def from_one(cls, g_one: TensorElem, curve: CurveModel) -> "Gauge":
        n = g_one.n
        entries = {}
        for v in basis_words(n, curve.genus):
            for u, h in g_one.terms.items():
                if not u or len(u) + len(v) > n:
                    continue
                entries[(u + v, v)] = h
        return cls(curve, n, entries)

    def full(self, u, v):
        e = self.entries.get((u, v))
        if u == v:
            return self.curve.one() if e is None else e + 1
        return e if e is not None else self.curve.zero()

    def inverse(self) -> "Gauge":
        # (I + N)^-1 = sum (-N)^k, N nilpotent of index <= n + 1
        term = Gauge(self.curve, self.n, {k: -v for k, v in self.entries.items()})
        acc = dict(term.entries)
        neg = term
        for _ in range(self.n):
            prod = Gauge(self.curve, self.n, term._mul(neg))
            if not prod.entries:
                break
            for k, v in prod.entries.items():
                acc[k] = acc[k] + v if k in acc else v
            term = prod
        return Gauge(self.curve, self.n, acc)

    def d(self) -> "ConnMat":
        return ConnMat(self.curve, self.n, {k: v.d() for k, v in self.entries.items()})


class ConnMat(_SparseMatrix):
    """Connection matrix with one-form entries; column ``v`` holds the image of ``v``."""

    @classmethod
    def from_one(cls, w_one: TensorElem, curve: CurveModel) -> "ConnMat":
        n = w_one.n
        entries = {}
        for v in basis_words(n, curve.genus):
            for u, c in w_one.terms.items():
                if not u or len(u) + len(v) > n:
                    continue
                entries[(u + v, v)] = c
        return cls(curve, n, entries)

    def __eq__(self, other):
        if not isinstance(other, ConnMat) or other.n != self.n:
            return NotImplemented
        keys = set(self.entries) | set(other.entries)
        z = OneForm(self.curve.zero())
        return all(self.entries.get(k, z) == other.entries.get(k, z) for k in keys)

    def to_json(self) -> dict:
        g = self.curve.genus
        return {"n": self.n, "entries": [
            {"row": list(word_index(u, g)), "col": list(word_index(v, g)), "form": e.to_json()}
            for (u, v), e in sorted(self.entries.items(), key=lambda kv: (self.basis.index(kv[0][1]),
                                                                            self.basis.index(kv[0][0])))]}


def universal_conn_matrix(curve: CurveModel, n: int) -> ConnMat:
    """``C_n``: the word ``v`` goes to ``-sum_i alpha_i A_i v``."""
    g = curve.genus
    one = TensorElem(n, g, {(i,): -curve.alpha(i) for i in range(2 * g)})
    return ConnMat.from_one(one, curve)


def gauge_of_connection(C: ConnMat, G: Gauge) -> ConnMat:
    """``G^-1 dG + G^-1 C G`` computed entry by entry."""
    if C.n != G.n or C.curve != G.curve:
        raise DimensionMismatch("connection and gauge have different sizes")
    Gi = G.inverse()
    dG = G.d()
    CG = ConnMat(C.curve, C.n, C._mul(G, ident_other=True))
    total = dict(Gi._mul(dG, ident_self=True))
    for k, v in Gi._mul(CG, ident_self=True).items():
        total[k] = total[k] + v if k in total else v
    return ConnMat(C.curve, C.n, total)


def gauge_transform_one(omega_one: TensorElem, g_one: TensorElem) -> TensorElem:
    """Tensor-algebra form of the gauge action: ``g^-1 dg + g^-1 omega g``."""
    n, g = g_one.n, g_one.g
    # g^-1 for g = 1 + N
    N = TensorElem(n, g, {w: c for w, c in g_one.terms.items() if w})
    inv = TensorElem.one(n, g, g_one.terms[()])
    power = TensorElem.one(n, g, g_one.terms[()])
    for _ in range(n):
        power = concat_mul(power, -N)
        if power.is_zero():
            break
        inv = inv + power
    dg = TensorElem(n, g, {w: c.d() for w, c in N.terms.items()})
    return concat_mul(inv, dg) + concat_mul(concat_mul(inv, omega_one), g_one)


def gauge_apply_word(ext: LogExtension, w, n: int | None = None) -> TensorElem:
    """Image of a word (``WordIndex`` or letter tuple) under ``G_n``."""
    n = ext.level if n is None else n
    if isinstance(w, WordIndex):
        w = word_letters(w, ext.g)
    return concat_mul(ext.gauge_one(n), TensorElem.word(tuple(w), n, ext.g, ext.curve.one()))


def verify_log_poles(C: ConnMat):
    """``(ok, offenders)``: every entry must have at worst a simple pole at infinity."""
    g = C.curve.genus
    bad = []
    for (u, v), e in C.entries.items():
        order = e.pole_order(g)
        if order > 1:
            bad.append((word_index(u, g), word_index(v, g), order))
    return not bad, bad
