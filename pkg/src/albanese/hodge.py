"""Generators of the Hodge filtration ``F^0`` on the universal unipotent bundle.

Over the affine part ``X`` the generators are ``w^f_m + sum a^{l,k}_{m,f} w^k_l``
with ``a`` in ``K[x, y]``; over the punctured disc at infinity they are the
same shape with coefficients ``b`` regular at infinity.  Compatibility through
the gauge ties ``a`` and ``b`` together; each new coefficient is found by
cancelling poles at infinity one order at a time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .connext import LogExtension, log_extension
from .errors import InputError, NotElliptic, ObstructionFound
from .exactalg import CurveModel, FuncElem, curve_new, monomials_to_elem, peel_poles
from .wordalg import TensorElem, WordIndex, phi, psi, tau, word_letters


def f_index_set(n: int, g: int) -> list[int]:
    """Ranks of the length ``n`` words using only the letters ``A_g .. A_{2g-1}``."""
    g2 = 2 * g
    ranks = [1]
    for i in range(n):
        ranks = [r + d * g2 ** i for r in ranks for d in range(g, g2)]
    return sorted(ranks)


@dataclass
class Basepoint:
    """Affine rational point ``(x, y)``; ``y`` may be omitted when no section needs it.
    ``tangential=True`` means the tangential base point at infinity."""

    x: Fraction | None = None
    y: Fraction | None = None
    tangential: bool = False

    def label(self) -> str:
        if self.tangential:
            return "tangential"
        return f"x={self.x}" + (f",y={self.y}" if self.y is not None else "")


@dataclass
class HodgeGenerators:
    curve: CurveModel
    level: int
    basepoint: Basepoint
    a: dict = field(default_factory=dict)
    b: dict = field(default_factory=dict)

    @property
    def g(self) -> int:
        return self.curve.genus

    def keys(self):
        """``(m, f)`` pairs in output order: by ``m`` then ``f``."""
        return [(m, f) for m in range(self.level + 1) for f in f_index_set(m, self.g)]

    def coeff(self, m: int, f: int, l: int, k: int, side: str = "X") -> FuncElem:
        table = self.a if side == "X" else self.b
        return table.get((m, f), {}).get((l, k), self.curve.zero())

    def generator(self, m: int, f: int, side: str = "X") -> TensorElem:
        """The generator lifting ``w^f_m`` as a tensor with function coefficients."""
        g = self.g
        table = self.a if side == "X" else self.b
        terms = {word_letters(WordIndex(m, f), g): self.curve.one()}
        for (l, k), v in table.get((m, f), {}).items():
            if not v.is_zero():
                terms[word_letters(WordIndex(l, k), g)] = v
        return TensorElem(self.level, g, terms)

    def generators(self, side: str = "X") -> list[tuple[int, int, TensorElem]]:
        return [(m, f, self.generator(m, f, side)) for m, f in self.keys()]


def _h(ext: LogExtension, s: int, i: int, m: int) -> FuncElem:
    return ext.h_at(s, i, m)


def _s_term(gens_a: dict, ext: LogExtension, L: int, m: int, f: int, q: int, zero) -> FuncElem:
    """Contribution of the gauge to the coefficient of ``w^q_L`` in the image of the
    lift of ``w^f_m``, excluding the unknown top coefficient."""
    g2 = 2 * ext.g
    out = zero
    if tau(q, f, m, g2):
        out = out + _h(ext, psi(q, 0, m, g2), m, L)
    for l in range(m + 1, L):
        a = gens_a.get((m, f), {}).get((l, phi(q, 0, l, g2) + 1))
        if a is None or a.is_zero():
            continue
        hh = _h(ext, psi(q, 0, l, g2), l, L)
        if not hh.is_zero():
            out = out + a * hh
    return out


def _lam(ext: LogExtension, m: int, f: int, p: int, fp: int) -> FuncElem | None:
    """Coefficient of ``w^{fp}_p`` in the gauge image of the lift of ``w^f_m``."""
    g2 = 2 * ext.g
    if not tau(fp, f, m, g2):
        return None
    return _h(ext, psi(fp, 0, m, g2), m, p)


def _first_order_h(ext: LogExtension) -> dict[int, FuncElem]:
    g = ext.g
    return {t: ext.h_at(t, 0, 1) for t in range(g + 1, 2 * g + 1)}


def hodge_f0_step(prev: HodgeGenerators, ext: LogExtension) -> HodgeGenerators:
    """Lift the generators from level ``n`` to ``n + 1``."""
    n = prev.level
    if ext.level < n + 1:
        raise InputError(f"gauge data only reaches level {ext.level}, need {n + 1}")
    curve = prev.curve
    g, g2 = prev.g, 2 * prev.g
    zero = curve.zero()
    L = n + 1
    top_set = set(f_index_set(L, g))
    fsets = {m: f_index_set(m, g) for m in range(L + 1)}
    h1 = _first_order_h(ext)
    a = {k: dict(v) for k, v in prev.a.items()}
    b = {k: dict(v) for k, v in prev.b.items()}
    for m in range(L + 1):
        for f in fsets[m]:
            a.setdefault((m, f), {})
            b.setdefault((m, f), {})

    for q in range(1, g2 ** L + 1):
        if q in top_set:
            continue
        na: dict = {}
        nb: dict = {}
        for m in range(n, -1, -1):
            for f in fsets[m]:
                known = _s_term(prev.a, ext, L, m, f, q, zero)
                for p in range(m + 2, n + 1):
                    for fp in fsets[p]:
                        lam = _lam(ext, m, f, p, fp)
                        if lam is not None and not lam.is_zero() and not nb[(p, fp)].is_zero():
                            known = known - lam * nb[(p, fp)]
                extras, targets = [], []
                if m + 1 <= n:
                    for t in range(g + 1, g2 + 1):
                        fp = f + (t - 1) * g2 ** m
                        known = known - h1[t] * nb[(m + 1, fp)]
                        extras.append(h1[t])
                        targets.append((m + 1, fp))
                A, consts = _cancel(curve, known, extras, (m, f, q))
                bval = known + A
                for (key, ht), c in zip(zip(targets, extras), consts):
                    if c:
                        na[key] = na[key] + c
                        nb[key] = nb[key] + c
                        bval = bval - ht * c
                if not bval.is_zero() and bval.pole_order(g) > 0:
                    raise ObstructionFound(f"section over the disc keeps a pole (m={m}, f={f}, q={q})")
                na[(m, f)] = A
                nb[(m, f)] = bval
        # base point normalisation of the lift of 1
        shift = _basepoint_value(prev.basepoint, na[(0, 1)], nb[(0, 1)], curve)
        if shift:
            na[(0, 1)] = na[(0, 1)] - shift
            nb[(0, 1)] = nb[(0, 1)] - shift
        for key in na:
            if not na[key].is_zero():
                a[key][(L, q)] = na[key]
            if not nb[key].is_zero():
                b[key][(L, q)] = nb[key]
    return HodgeGenerators(curve, L, prev.basepoint, a, b)


def _cancel(curve: CurveModel, known: FuncElem, extras: list, where):
    """``A`` in ``K[x, y]`` without constant term and constants ``c`` with
    ``known + A - sum c_t extras_t`` regular at infinity."""
    if known.is_zero() or known.pole_order(curve.genus) <= 0:
        return curve.zero(), [Fraction(0)] * len(extras)
    ser = curve.expand(known, 1)
    try:
        mono, ex, _ = peel_poles(ser, curve, extras, strict=True)
    except Exception as exc:
        raise ObstructionFound(f"cannot cancel poles at {where}: {exc}") from exc
    A = -monomials_to_elem(curve, mono)
    return A, ex


def _basepoint_value(bp: Basepoint, a: FuncElem, bsec: FuncElem, curve: CurveModel) -> Fraction:
    if bp.tangential:
        if bsec.is_zero():
            return Fraction(0)
        return curve.expand(bsec, 1)[0]
    if a.is_zero() or bp.x is None:
        # no base point given: the lift of 1 is left unnormalized
        return Fraction(0)
    return a.at(bp.x, bp.y)


def hodge_f0(curve: CurveModel, n: int, basepoint: Basepoint,
             ext: LogExtension | None = None) -> HodgeGenerators:
    """Generators of ``F^0`` up to level ``n``."""
    ext = ext if ext is not None and ext.level >= n else log_extension(curve, n)
    gens = HodgeGenerators(curve, 0, basepoint, {(0, 1): {}}, {(0, 1): {}})
    for _ in range(n):
        gens = hodge_f0_step(gens, ext)
    return gens


def check_conditions_Im(gens: HodgeGenerators, ext: LogExtension) -> dict:
    """Re-derive the sections over the disc from those over ``X`` and test every condition.

    Returns ``{"I_0": bool, ..., "regular_on_X": bool, "vanish_on_F": bool,
    "basepoint": bool, "failures": [...]}``.
    """
    curve = gens.curve
    g, g2 = gens.g, 2 * gens.g
    zero = curve.zero()
    report = {f"I_{m}": True for m in range(gens.level + 1)}
    report.update(regular_on_X=True, vanish_on_F=True, basepoint=True)
    failures = []
    for L in range(1, gens.level + 1):
        top = set(f_index_set(L, g))
        for q in range(1, g2 ** L + 1):
            for m in range(L - 1, -1, -1):
                for f in f_index_set(m, g):
                    av = gens.coeff(m, f, L, q, "X")
                    if q in top:
                        if not av.is_zero():
                            report["vanish_on_F"] = False
                            failures.append(("vanish_on_F", m, f, L, q))
                        continue
                    if not av.is_regular_affine():
                        report["regular_on_X"] = False
                        failures.append(("regular_on_X", m, f, L, q))
                    bv = av + _s_term(gens.a, ext, L, m, f, q, zero)
                    for p in range(m + 1, L):
                        for fp in f_index_set(p, g):
                            lam = _lam(ext, m, f, p, fp)
                            if lam is not None:
                                bv = bv - lam * gens.coeff(p, fp, L, q, "Y")
                    ok = bv == gens.coeff(m, f, L, q, "Y") and (bv.is_zero() or bv.pole_order(g) <= 0)
                    if not ok:
                        report[f"I_{m}"] = False
                        failures.append((f"I_{m}", m, f, L, q))
            a1 = gens.coeff(0, 1, L, q, "X")
            b1 = gens.coeff(0, 1, L, q, "Y")
            if q not in top and _basepoint_value(gens.basepoint, a1, b1, curve) != 0:
                report["basepoint"] = False
                failures.append(("basepoint", 0, 1, L, q))
    report["failures"] = failures
    return report


@dataclass(frozen=True)
class HodgeConstants:
    lam: Fraction
    mu: Fraction
    kappa: Fraction
    nu: Fraction

    def as_dict(self) -> dict:
        return {"lambda": self.lam, "mu": self.mu, "kappa": self.kappa, "nu": self.nu}


def hodge_constants(curve: CurveModel, ext: LogExtension | None = None) -> HodgeConstants:
    """Constants of the elliptic case, each fixed by a pole-cancellation condition.

    With ``F`` the first-order gauge function (``dF - alpha_1`` regular):
      lambda: ``lambda dF - F^2 alpha_0 / 2`` has a logarithmic pole,
      nu:     ``nu x + lambda F^2`` is regular,
      kappa:  ``nu x + kappa F + lambda F^2`` is regular,
      mu:     ``lambda F dF / 3 + mu dF - F^3 alpha_0 / 6`` has at most a simple pole.
    """
    if curve.genus != 1:
        raise NotElliptic("these constants are defined for genus one")
    ext = ext if ext is not None and ext.level >= 1 else log_extension(curve, 1)
    F = ext.h_at(2, 0, 1)
    a0 = curve.alpha(0)
    dF = F.d()
    dFs = curve.expand_form(dF, 0)
    half = Fraction(1, 2)
    t = curve.expand_form(a0 * (F * F) * half, 0)
    lam = t[-2] / dFs[-2]
    chk = curve.expand_form(dF * lam - a0 * (F * F) * half, 0)
    if chk.val < -1:
        raise ObstructionFound("no lambda gives a logarithmic pole")
    x = curve.x
    F2 = curve.expand(F * F * lam, 1)
    xs = curve.expand(x, 1)
    nu = -F2[-2] / xs[-2]
    rest = curve.expand(x * nu + F * F * lam, 1)
    Fs = curve.expand(F, 1)
    kappa = -rest[-1] / Fs[-1]
    if curve.expand(x * nu + F * kappa + F * F * lam, 1).val < 0:
        raise ObstructionFound("no kappa makes the combination regular")
    base = dF * (F * (lam / 3)) - a0 * (F * F * F) * Fraction(1, 6)
    bs = curve.expand_form(base, 0)
    if bs.val < -2:
        raise ObstructionFound("cubic pole survives in the mu condition")
    mu = -bs[-2] / dFs[-2]
    return HodgeConstants(lam, mu, kappa, nu)


def genus2_example(f=None, basepoint: Basepoint | None = None) -> HodgeGenerators:
    """Level 2 generators for ``y^2 = x^5 + 1`` (or another quintic) with ``F = y/x^2``."""
    curve = curve_new(f if f is not None else [1, 0, 0, 0, 0, 1])
    if curve.genus != 2:
        raise InputError("the example needs a quintic")
    bp = basepoint or Basepoint(x=Fraction(0), y=Fraction(1))
    return hodge_f0(curve, 2, bp)
