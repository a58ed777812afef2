"""Symbolic path elements, their Hodge/Frobenius decomposition and the period map.

Coefficients are iterated integrals ``I(w1, ..., wk)`` of labelled one-forms,
kept in shuffle normal form so that equality is a coefficient comparison.
The Frobenius element is ``p = exp(h) exp(u)`` with ``h`` a combination of
``F^0`` generators and ``u`` free of words made only of the letters
``A_g .. A_{2g-1}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import count

from .connext import LogExtension, log_extension
from .errors import (ComputationError, InputError, MissingExtension, NonPrimitiveLift,
                     ObstructionFound, UnsupportedLevel)
from .exactalg import CurveModel, FuncElem, OneForm, Poly, rational, rational_str
from .hodge import Basepoint, HodgeGenerators, hodge_constants, hodge_f0
from .wordalg import (LieExpr, TensorElem, WordIndex, bracket_string, exp_trunc,
                      is_primitive, log_trunc, shuffle_words, to_lie, word_letters)

# levels at which closed forms exist to cross-check against
SUPPORTED_LEVELS = {("rational", 1): 4, ("tangential", 1): 3, ("rational", 2): 2, ("tangential", 2): 2}


# -- iterated integral symbols --------------------------------------------

@dataclass(frozen=True)
class IISymbol:
    """``int_start^end w1 ... wk``; the empty word is the constant 1."""

    forms: tuple = ()
    start: str = "b"
    end: str = "x"

    def __str__(self):
        if not self.forms:
            return "1"
        return "I(" + " ".join(self.forms) + ")"


def _shuffle_product(u: tuple, v: tuple) -> dict:
    if not u:
        return {v: 1}
    if not v:
        return {u: 1}
    return shuffle_words(u, v)


class IISymbolPoly:
    """Rational combination of iterated integral symbols.

    ``terms`` maps a label word to its coefficient.  ``products`` holds formal
    products of two or more symbols that have not been shuffled out yet; every
    arithmetic operation normalizes first.
    """

    __slots__ = ("terms", "products")

    def __init__(self, terms: dict | None = None, products: dict | None = None):
        self.terms = {}
        for w, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                self.terms[tuple(w)] = c
        self.products = {}
        for ws, c in (products or {}).items():
            c = Fraction(c)
            if c:
                key = tuple(sorted(tuple(w) for w in ws))
                self.products[key] = self.products.get(key, 0) + c

    @classmethod
    def const(cls, c) -> "IISymbolPoly":
        return cls({(): rational(c)})

    @classmethod
    def symbol(cls, *labels, coeff=1) -> "IISymbolPoly":
        return cls({tuple(labels): rational(coeff)})

    @classmethod
    def formal_product(cls, *polys: "IISymbolPoly") -> "IISymbolPoly":
        """Product kept unexpanded; ``shuffle_normalize`` resolves it."""
        acc = {(): Fraction(1)}
        for p in polys:
            p = shuffle_normalize(p)
            nxt: dict = {}
            for ws, a in acc.items():
                for w, b in p.terms.items():
                    key = ws + ((w,) if w else ())
                    nxt[key] = nxt.get(key, 0) + a * b
            acc = nxt
        terms = {ws[0] if ws else (): c for ws, c in acc.items() if len(ws) <= 1}
        products = {ws: c for ws, c in acc.items() if len(ws) > 1}
        return cls(terms, products)

    def unit(self) -> "IISymbolPoly":
        return IISymbolPoly.const(1)

    def is_normal(self) -> bool:
        return not self.products

    def is_one(self) -> bool:
        return self == 1

    def max_length(self) -> int:
        return max((len(w) for w in shuffle_normalize(self).terms), default=0)

    def symbols(self) -> list[tuple[IISymbol, Fraction]]:
        p = shuffle_normalize(self)
        return [(IISymbol(w), c) for w, c in sorted(p.terms.items(), key=_term_order)]

    # -- arithmetic ------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "IISymbolPoly":
        if isinstance(other, IISymbolPoly):
            return shuffle_normalize(other)
        return IISymbolPoly.const(other)

    def __add__(self, other):
        a, b = shuffle_normalize(self), IISymbolPoly._coerce(other)
        out = dict(a.terms)
        for w, c in b.terms.items():
            out[w] = out.get(w, 0) + c
        return IISymbolPoly(out)

    __radd__ = __add__

    def __neg__(self):
        p = shuffle_normalize(self)
        return IISymbolPoly({w: -c for w, c in p.terms.items()})

    def __sub__(self, other):
        return self + (-IISymbolPoly._coerce(other))

    def __rsub__(self, other):
        return IISymbolPoly._coerce(other) + (-self)

    def __mul__(self, other):
        a = shuffle_normalize(self)
        if not isinstance(other, IISymbolPoly):
            c = rational(other)
            return IISymbolPoly({w: v * c for w, v in a.terms.items()})
        b = shuffle_normalize(other)
        out: dict = {}
        for u, cu in a.terms.items():
            for v, cv in b.terms.items():
                p = cu * cv
                for w, m in _shuffle_product(u, v).items():
                    out[w] = out.get(w, 0) + p * m
        return IISymbolPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * (1 / rational(other))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = IISymbolPoly.const(other)
        if not isinstance(other, IISymbolPoly):
            return NotImplemented
        return not (self - other).terms

    def __hash__(self):
        p = shuffle_normalize(self)
        return hash(frozenset(p.terms.items()))

    def __bool__(self):
        return bool(shuffle_normalize(self).terms)

    def __repr__(self):
        p = shuffle_normalize(self)
        if not p.terms:
            return "0"
        parts = []
        for w, c in sorted(p.terms.items(), key=_term_order):
            sym = str(IISymbol(w))
            if not w:
                parts.append(rational_str(c))
            elif c == 1:
                parts.append(sym)
            elif c == -1:
                parts.append("-" + sym)
            else:
                parts.append(f"{rational_str(c)}*{sym}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> list:
        p = shuffle_normalize(self)
        return [{"word": list(w), "scalar": rational_str(c)}
                for w, c in sorted(p.terms.items(), key=_term_order)]

    @classmethod
    def from_json(cls, data) -> "IISymbolPoly":
        try:
            return cls({tuple(str(s) for s in t["word"]): rational(t["scalar"]) for t in data})
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad iterated integral JSON: {data!r}") from exc


def _term_order(item):
    w = item[0]
    return (len(w), w)


def shuffle_normalize(p: IISymbolPoly) -> IISymbolPoly:
    """Expand every product of symbols into a sum of single symbols."""
    if not p.products:
        return p
    out = dict(p.terms)
    for ws, c in p.products.items():
        acc = {(): Fraction(1)}
        for w in ws:
            nxt: dict = {}
            for u, a in acc.items():
                for v, m in _shuffle_product(u, w).items():
                    nxt[v] = nxt.get(v, 0) + a * m
            acc = nxt
        for w, m in acc.items():
            out[w] = out.get(w, 0) + c * m
    return IISymbolPoly(out)


# -- labelled forms ---------------------------------------------------------

def _lcm(a: Poly, b: Poly) -> Poly:
    return (a * b.exact_div(a.gcd(b))).monic()


def _vectorize(forms: list[OneForm]) -> list[dict]:
    den = Poly.const(1)
    for w in forms:
        for r in (w.u.a, w.u.b):
            if not r.is_zero():
                den = _lcm(den, r.den)
    out = []
    for w in forms:
        v = {}
        for tag, r in (("a", w.u.a), ("b", w.u.b)):
            if r.is_zero():
                continue
            p = r.num * den.exact_div(r.den)
            for i, c in enumerate(p.coeffs()):
                if c:
                    v[(tag, i)] = c
        out.append(v)
    return out


def _express(basis: list[dict], target: dict) -> list[Fraction] | None:
    """Coefficients writing ``target`` in the span of ``basis``, or None."""
    rows = []  # (pivot, vector, combination)
    for i, v in enumerate(basis):
        vec, comb = dict(v), {i: Fraction(1)}
        for piv, rv, rc in rows:
            c = vec.get(piv)
            if c:
                _axpy(vec, -c, rv)
                _axpy(comb, -c, rc)
        if vec:
            piv = min(vec)
            s = 1 / vec[piv]
            vec = {k: x * s for k, x in vec.items()}
            comb = {k: x * s for k, x in comb.items()}
            rows.append((piv, vec, comb))
    vec, comb = dict(target), {}
    for piv, rv, rc in rows:
        c = vec.get(piv)
        if c:
            _axpy(vec, -c, rv)
            _axpy(comb, c, rc)
    if vec:
        return None
    return [comb.get(i, Fraction(0)) for i in range(len(basis))]


def _axpy(y: dict, a, x: dict):
    for k, v in x.items():
        t = y.get(k, 0) + a * v
        if t:
            y[k] = t
        else:
            y.pop(k, None)


class FormBasis:
    """Labelled one-forms with exact coordinates.

    ``labels``/``forms`` is a linearly independent list; other named forms are
    stored as combinations of it in ``aliases``.
    """

    def __init__(self, curve: CurveModel):
        self.curve = curve
        self.labels: list[str] = []
        self.forms: list[OneForm] = []
        self.aliases: dict[str, dict[str, Fraction]] = {}
        self._fresh = count(1)

    def coords(self, form: OneForm) -> dict[str, Fraction] | None:
        if form.is_zero():
            return {}
        vecs = _vectorize(self.forms + [form])
        sol = _express(vecs[:-1], vecs[-1])
        if sol is None:
            return None
        return {lab: c for lab, c in zip(self.labels, sol) if c}

    def register(self, label: str, form: OneForm) -> dict[str, Fraction]:
        """Name ``form``; it joins the basis unless it is already in the span."""
        if label in self.labels or label in self.aliases:
            raise InputError(f"form label {label!r} already used")
        c = self.coords(form)
        if c is None:
            self.labels.append(label)
            self.forms.append(form)
            return {label: Fraction(1)}
        self.aliases[label] = c
        return c

    def ensure(self, form: OneForm, prefix: str = "w") -> dict[str, Fraction]:
        """Coordinates of ``form``, adding it under a fresh label if needed."""
        c = self.coords(form)
        if c is not None:
            return c
        label = f"{prefix}{next(self._fresh)}"
        while label in self.labels or label in self.aliases:
            label = f"{prefix}{next(self._fresh)}"
        return self.register(label, form)

    def lookup(self, label: str) -> dict[str, Fraction]:
        if label in self.aliases:
            return self.aliases[label]
        if label in self.labels:
            return {label: Fraction(1)}
        raise InputError(f"unknown form label {label!r}")

    def form(self, label: str) -> OneForm:
        out = OneForm(self.curve.zero())
        for lab, c in self.lookup(label).items():
            out = out + self.forms[self.labels.index(lab)] * c
        return out

    def integral(self, *items, coeff=1) -> IISymbolPoly:
        """``int w1 ... wk`` for labels or forms, expanded multilinearly in the basis."""
        acc = {(): rational(coeff)}
        for it in items:
            c = self.lookup(it) if isinstance(it, str) else self.ensure(it)
            acc = {w + (lab,): a * b for w, a in acc.items() for lab, b in c.items()}
        return IISymbolPoly(acc)

    def to_json(self) -> dict:
        return {"basis": {lab: w.to_json() for lab, w in zip(self.labels, self.forms)},
                "aliases": {lab: {k: rational_str(v) for k, v in c.items()}
                            for lab, c in self.aliases.items()}}


# -- the Frobenius element ----------------------------------------------------

def _kind(basepoint) -> str:
    if isinstance(basepoint, Basepoint):
        return "tangential" if basepoint.tangential else "rational"
    if basepoint in ("rational", "tangential"):
        return basepoint
    raise InputError(f"unknown basepoint kind {basepoint!r}")


def standard_forms(curve: CurveModel, kind: str, ext: LogExtension | None = None,
                   level: int = 1) -> FormBasis:
    """Register the named forms used by the closed formulas.

    ``a{i}`` is the basis form ``alpha_i``; with a tangential basepoint the
    upper forms are replaced by ``a{i}' = alpha_i - d h_i`` and in genus one
    ``Fa0 = F alpha_0`` and ``a0' = F^2 alpha_0 / 2 - lambda dF`` are added.
    """
    fb = FormBasis(curve)
    g = curve.genus
    for i in range(g):
        fb.register(f"a{i}", curve.alpha(i))
    if kind == "rational":
        for i in range(g, 2 * g):
            fb.register(f"a{i}", curve.alpha(i))
        return fb
    if ext is None:
        raise MissingExtension("tangential forms need the logarithmic extension")
    for i in range(g, 2 * g):
        fb.register(f"a{i}'", curve.alpha(i) - ext.h_at(i + 1, 0, 1).d())
    if g == 1 and ext.level >= 2:
        F = ext.h_at(2, 0, 1)
        a0 = curve.alpha(0)
        fb.register("Fa0", a0 * F)
        if level >= 3:
            lam = hodge_constants(curve, ext).lam
            fb.register("a0'", a0 * (F * F * Fraction(1, 2)) - F.d() * lam)
    return fb


def _connection_terms(curve: CurveModel, kind: str, n: int, ext: LogExtension | None):
    """``[(letters, label, form)]`` with ``Omega(1) = sum form * letters``."""
    g = curve.genus
    if kind == "rational":
        return [((i,), f"a{i}", -curve.alpha(i)) for i in range(2 * g)]
    if ext is None or ext.level < n:
        raise MissingExtension(f"tangential transport at level {n} needs the extension to level {n}")
    out = []
    for (m, r), w in sorted(ext.c.items()):
        if m <= n and not w.is_zero():
            out.append((word_letters(WordIndex(m, r), g), f"c{m}_{r}", w))
    return out


def pcr_symbolic(n: int, curve: CurveModel, basepoint="rational", ext: LogExtension | None = None,
                 forms: FormBasis | None = None) -> tuple[TensorElem, FormBasis]:
    """Transport of 1 from the base point: ``sum_k (-1)^k int c_{u1}..c_{uk} u1..uk``.

    For a rational base point the connection is ``-sum alpha_i A_i`` and this is
    ``1 + sum_w int alpha_w w``; for the tangential one it uses the logarithmic
    connection over the disc at infinity.
    """
    kind = _kind(basepoint)
    g = curve.genus
    if n < 0:
        raise UnsupportedLevel("level must be non-negative")
    if kind == "tangential" and (ext is None or ext.level < n):
        if ext is not None:
            raise MissingExtension(f"extension reaches level {ext.level}, need {n}")
        ext = log_extension(curve, n)
    fb = forms if forms is not None else standard_forms(curve, kind, ext, n)
    terms = []
    for u, label, w in _connection_terms(curve, kind, n, ext):
        coords = fb.coords(w)
        if coords is None:
            coords = {k: -v for k, v in fb.register(label, -w).items()}
        terms.append((u, coords))
    # frontier: word -> {form word: coeff}
    total: dict = {(): {(): Fraction(1)}}
    frontier = dict(total)
    while frontier:
        nxt: dict = {}
        for w, poly in frontier.items():
            for u, coords in terms:
                if len(w) + len(u) > n:
                    continue
                key = w + u
                bucket = nxt.setdefault(key, {})
                for fw, a in poly.items():
                    for lab, b in coords.items():
                        k2 = fw + (lab,)
                        bucket[k2] = bucket.get(k2, 0) - a * b
        for key, poly in nxt.items():
            acc = total.setdefault(key, {})
            for fw, c in poly.items():
                acc[fw] = acc.get(fw, 0) + c
        frontier = nxt
    return TensorElem(n, g, {w: IISymbolPoly(p) for w, p in total.items()}), fb


# -- the Hodge factor ---------------------------------------------------------

def _upper_only(t: TensorElem) -> TensorElem:
    g = t.g
    return TensorElem(t.n, g, {w: c for w, c in t.terms.items() if all(a >= g for a in w)})


def coefficient_symbol(phi: FuncElem, basepoint: Basepoint, forms: FormBasis) -> IISymbolPoly:
    """A function as an iterated integral expression: ``phi(b) + int_b d phi``."""
    if phi.is_zero():
        return IISymbolPoly()
    if phi.is_constant():
        return IISymbolPoly.const(phi.constant_value())
    curve = forms.curve
    if basepoint.tangential:
        if phi.pole_order(curve.genus) > 0:
            raise ObstructionFound("coefficient over the disc has a pole at infinity")
        base = curve.expand(phi, 1)[0]
    else:
        if basepoint.x is None or (not phi.b.is_zero() and basepoint.y is None):
            raise InputError("base point coordinates needed to evaluate a generator coefficient")
        base = phi.at(basepoint.x, basepoint.y)
    return IISymbolPoly.const(base) + forms.integral(phi.d())


def generator_symbols(gens: HodgeGenerators, forms: FormBasis, n: int | None = None) -> dict:
    """``{letters of w^f_m: generator over the symbol ring}`` for ``m >= 1``."""
    n = gens.level if n is None else n
    side = "Y" if gens.basepoint.tangential else "X"
    out = {}
    for m, f in gens.keys():
        if m < 1 or m > n:
            continue
        t = gens.generator(m, f, side).truncate(n)
        out[word_letters(WordIndex(m, f), gens.g)] = t.map_coeffs(
            lambda v: coefficient_symbol(v, gens.basepoint, forms))
    return out


def _embed(ell: TensorElem, gen_syms: dict, n: int) -> TensorElem:
    out = TensorElem(n, ell.g)
    for w, c in ell.terms.items():
        if not w:
            continue
        t = gen_syms.get(w)
        if t is None:
            raise ComputationError(f"no generator for the word {w}")
        out = out + t.truncate(n).map_coeffs(lambda v, c=c: c * v)
    return out


# -- decomposition -------------------------------------------------------------

@dataclass
class PeriodMapResult:
    level: int
    kind: str
    u_tensor: TensorElem
    h_tensor: TensorElem
    forms: FormBasis
    constants: dict = field(default_factory=dict)

    @property
    def u(self) -> LieExpr:
        return to_lie(self.u_tensor)

    @property
    def hodge_factor(self) -> LieExpr:
        return to_lie(self.h_tensor)

    def product(self) -> TensorElem:
        return exp_trunc(self.h_tensor) * exp_trunc(self.u_tensor)

    def truncate(self, n: int) -> "PeriodMapResult":
        return PeriodMapResult(n, self.kind, self.u_tensor.truncate(n), self.h_tensor.truncate(n),
                               self.forms, self.constants)

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "basepoint": self.kind,
            "u": lie_to_json(self.u),
            "hodge_factor": lie_to_json(self.hodge_factor),
            "forms": self.forms.to_json(),
            "constants": {k: rational_str(Fraction(v)) for k, v in self.constants.items()},
        }


def lie_to_json(expr: LieExpr) -> list:
    return [{"bracket": bracket_string(t), "coeff": c.to_json()} for t, c in expr.items]


def lie_from_json(g: int, data) -> LieExpr:
    try:
        return LieExpr.parse(g, [(d["bracket"], IISymbolPoly.from_json(d["coeff"])) for d in data])
    except (KeyError, TypeError) as exc:
        raise InputError(f"bad Lie expression JSON: {exc}") from exc


def zero_result(curve: CurveModel, kind: str, forms: FormBasis) -> PeriodMapResult:
    g = curve.genus
    return PeriodMapResult(0, kind, TensorElem(0, g), TensorElem(0, g), forms)


def decompose(pcr: TensorElem, gen_syms: dict) -> tuple[TensorElem, TensorElem]:
    """``(h, u)`` with ``pcr = exp(h) exp(u)`` in one pass: ``h = E(log of the upper part)``."""
    n = pcr.n
    ell = log_trunc(_upper_only(pcr))
    h = _embed(ell, gen_syms, n)
    if not is_primitive(h):
        raise NonPrimitiveLift("the Hodge factor is not a Lie element")
    u = log_trunc(exp_trunc(-h) * pcr)
    return h, u


def decompose_step(prev: PeriodMapResult, pcr_n: TensorElem, f0: HodgeGenerators,
                   gen_syms: dict | None = None) -> PeriodMapResult:
    """Raise a decomposition from level ``n - 1`` to ``n``.

    The Hodge factor is re-expanded with the level ``n`` generators; the
    remaining discrepancy sits in degree ``n`` and is central, so it is added
    to ``u`` except for its purely upper part, which joins the Hodge factor.
    """
    n = pcr_n.n
    if n != prev.level + 1:
        raise InputError(f"step from level {prev.level} cannot produce level {n}")
    g = pcr_n.g
    gen_syms = gen_syms if gen_syms is not None else generator_symbols(f0, prev.forms, n)
    h_lift = _embed(_upper_only(prev.h_tensor).truncate(n), gen_syms, n)
    if not is_primitive(h_lift):
        raise NonPrimitiveLift(f"the level {n} lift of the Hodge factor is not primitive")
    u_prev = prev.u_tensor.truncate(n)
    u_prev = TensorElem(n, g, u_prev.terms)
    approx = exp_trunc(h_lift) * exp_trunc(u_prev)
    diff = pcr_n - approx
    if any(len(w) != n for w in diff.terms):
        raise ComputationError("the lower levels do not agree with the previous decomposition")
    upper = _upper_only(diff)
    h = h_lift + upper
    u = u_prev + diff - upper
    out = PeriodMapResult(n, prev.kind, u, h, prev.forms, prev.constants)
    if out.product() != pcr_n:
        raise ComputationError("decomposition identity fails")
    return out


def _constants(curve: CurveModel, ext: LogExtension, gens: HodgeGenerators) -> dict:
    g = curve.genus
    if g == 1:
        return hodge_constants(curve, ext).as_dict()
    out = {}
    if gens.level >= 2:
        side = "Y" if gens.basepoint.tangential else "X"
        for m, f in gens.keys():
            if m != 1:
                continue
            k = word_letters(WordIndex(1, f), g)[0]
            t = gens.generator(1, f, side)
            for w, v in t.terms.items():
                if len(w) == 2 and w[0] < g <= w[1] and v.is_constant():
                    out[f"c_{w[0]}{w[1]}{k}"] = v.constant_value()
    return out


def period_map(n: int, curve: CurveModel, basepoint="rational", ext: LogExtension | None = None,
               threads: int = 1) -> PeriodMapResult:
    """Coordinates of the level ``n`` period map as a Lie element over iterated integrals.

    ``basepoint`` is a :class:`Basepoint` or the string ``"rational"`` (generic
    affine base point ``b``) or ``"tangential"``.  Generator coefficients that
    are not constant need actual coordinates of ``b``.
    """
    kind = _kind(basepoint)
    if n < 0:
        raise UnsupportedLevel("level must be non-negative")
    bp = basepoint if isinstance(basepoint, Basepoint) else Basepoint(tangential=kind == "tangential")
    if ext is None or ext.level < n:
        ext = log_extension(curve, max(n, 1), threads)
    try:
        gens = hodge_f0(curve, n, bp, ext)
    except ObstructionFound as exc:
        top = SUPPORTED_LEVELS[(kind, min(curve.genus, 2))]
        raise UnsupportedLevel(f"level {n} is beyond what the F^0 pipeline reaches "
                               f"(closed forms up to {top}): {exc}") from exc
    pcr, forms = pcr_symbolic(n, curve, kind, ext)
    res = zero_result(curve, kind, forms)
    res.constants = _constants(curve, ext, gens)
    gen_syms = generator_symbols(gens, forms, n)
    for m in range(1, n + 1):
        sub = {w: t.truncate(m) for w, t in gen_syms.items() if len(w) <= m}
        res = decompose_step(res, pcr.truncate(m), gens, sub)
    return res
