"""Closed-form period map coordinates in low level, for cross-checking.

Each builder returns a :class:`LieExpr` over :class:`IISymbolPoly`, written
with the labels of a :class:`FormBasis` from :func:`standard_forms`.
"""

from __future__ import annotations

from fractions import Fraction

from .connext import LogExtension
from .periods import FormBasis
from .wordalg import LieExpr, TensorElem, lie_expand

HALF = Fraction(1, 2)
SIXTH = Fraction(1, 6)


def elliptic_rational(n: int, fb: FormBasis, constants: dict, last_word=("a0", "a1", "a1", "a0")) -> LieExpr:
    """Genus one, affine base point, levels 1 to 4.

    ``last_word`` is the form word attached to ``[[[A0,A1],A1],A0]`` at level 4.
    """
    lam = constants.get("lambda", 0)
    mu = constants.get("mu", 0)
    kappa = constants.get("kappa", 0)
    I = fb.integral
    items = [("A0", I("a0"))]
    if n >= 2:
        items.append(("[A0,A1]", I("a0", "a1")))
    if n >= 3:
        items += [
            ("[A0,[A1,A0]]", I("a0", "a1", "a0") * HALF),
            ("[[A0,A1],A1]", I("a0", "a1", "a1") - I("a1") * lam),
        ]
    if n >= 4:
        items += [
            ("[[A0,[A0,A1]],A1]", I("a0", "a1") * (lam / 2)),
            ("[[A0,[A0,A1]],A0]", I("a0", "a0", "a1", "a0") * SIXTH),
            ("[[[A0,A1],A0],A0]", I("a0", "a1", "a0", "a0") * SIXTH),
            ("[[A0,[A1,A0]],A1]", (I("a0", "a1", "a0", "a1") - I("a1", "a0") * lam) * HALF),
            ("[[[A0,A1],A1],A1]", I("a0", "a1", "a1", "a1") - I("a1", "a1") * lam
             - I("a1") * (mu + kappa / 3)),
            ("[[[A0,A1],A1],A0]", I(*last_word) * HALF),
        ]
    return LieExpr.parse(1, items)


def elliptic_tangential(n: int, fb: FormBasis, constants: dict) -> LieExpr:
    """Genus one, tangential base point, levels 1 to 3."""
    lam = constants.get("lambda", 0)
    I = fb.integral
    items = [("A0", I("a0"))]
    if n >= 2:
        items.append(("[A0,A1]", I("a0", "a1'") + I("Fa0")))
    if n >= 3:
        items += [
            ("[A0,[A1,A0]]", (I("a0", "a1'", "a0") + I("Fa0", "a0") - I("a0", "Fa0")) * HALF),
            ("[[A0,A1],A1]", I("a0", "a1'", "a1'") + I("Fa0", "a1'") + I("a0'") - I("a1'") * lam),
        ]
    return LieExpr.parse(1, items)


def hyperelliptic_rational(fb: FormBasis, g: int, constants: dict) -> LieExpr:
    """Level two, affine base point; ``constants`` holds ``c_ijk`` keyed ``"c_{i}{j}{k}"``."""
    I = fb.integral
    items = [(f"A{k}", I(f"a{k}")) for k in range(g)]
    items += [(f"[A{k},A{l}]", I(f"a{k}", f"a{l}") * HALF) for k in range(g) for l in range(g)]
    items += [(f"[A{k},A{l}]", I(f"a{k}", f"a{l}")) for k in range(g) for l in range(g, 2 * g)]
    items += _cijk_terms(fb, g, constants, "a{k}")
    return LieExpr.parse(g, items)


def hyperelliptic_tangential(fb: FormBasis, g: int, ext: LogExtension, constants: dict) -> LieExpr:
    """Level two, tangential base point; uses the level two connection forms."""
    I = fb.integral
    items = [(f"A{k}", I(f"a{k}")) for k in range(g)]
    items += [(f"[A{k},A{l}]", I(f"a{k}", f"a{l}") * HALF) for k in range(g) for l in range(g)]
    for k in range(g):
        for l in range(g, 2 * g):
            items.append((f"[A{k},A{l}]", I(f"a{k}", f"a{l}'") + I(ext.c_at(2 * g * l + k + 1, 0, 2))))
    items += _cijk_terms(fb, g, constants, "a{k}'")
    return LieExpr.parse(g, items)


def _cijk_terms(fb: FormBasis, g: int, constants: dict, pattern: str):
    out = []
    for k in range(g, 2 * g):
        for i in range(g):
            for j in range(g, 2 * g):
                c = constants.get(f"c_{i}{j}{k}", 0)
                if c:
                    out.append((f"[A{j},A{i}]", fb.integral(pattern.format(k=k)) * c))
    return out


def difference(expected: LieExpr, actual: TensorElem) -> TensorElem:
    """``lie_expand(expected) - actual``; zero means agreement."""
    return lie_expand(expected, actual.n) - actual
