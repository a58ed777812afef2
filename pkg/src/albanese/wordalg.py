"""Words in the letters ``A_0 .. A_{2g-1}``, the truncated tensor algebra and its Hopf structure.

Words of length ``l`` are ranked 1 .. (2g)^l in lexicographic order with the
first letter most significant, so ``A_i * w(rank k, length l)`` has rank
``(2g)^l * i + k``.  Internally a word is a tuple of letter indices.
"""

from __future__ import annotations

import re
from fractions import Fraction
from itertools import combinations
from math import factorial
from typing import Callable, Iterable, NamedTuple

from .errors import (AlphabetMismatch, BadConstantTerm, BadLetter, InputError, OutOfRange,
                     UndecidableCoefficients)
from .exactalg.poly import rational, rational_str

Word = tuple


class WordIndex(NamedTuple):
    length: int
    rank: int


# -- index arithmetic -------------------------------------------------------

def psi(r: int, i: int, j: int, k: int) -> int:
    """Rank of the length ``j - i`` prefix of a length ``j`` word of rank ``r``
    (alphabet size ``k``); for ``i = 0`` this is ``ceil(r / k^j)``."""
    if j < i or k < 1:
        raise OutOfRange(f"psi needs i <= j and k >= 1, got i={i}, j={j}, k={k}")
    q, rem = divmod(r, k ** (j - i))
    return q + 1 if rem else q


def phi(r: int, i: int, j: int, k: int) -> int:
    return (r - 1) * k ** i - (psi(r, i, j, k) - 1) * k ** j


def tau(i: int, j: int, p: int, q: int) -> int:
    """1 when the last ``p`` letters of word ``i`` form the word ``j`` (alphabet size ``q``)."""
    return 1 if i == j + (psi(i, 0, p, q) - 1) * q ** p else 0


def word_letters(w: WordIndex, g: int) -> Word:
    length, rank = w
    base = 2 * g
    if length < 0 or not 1 <= rank <= base ** length:
        raise OutOfRange(f"no word of length {length} and rank {rank} over {base} letters")
    r = rank - 1
    out = []
    for _ in range(length):
        r, d = divmod(r, base)
        out.append(d)
    return tuple(reversed(out))


def word_index(letters: Word, g: int) -> WordIndex:
    base = 2 * g
    r = 0
    for a in letters:
        if not 0 <= a < base:
            raise BadLetter(f"letter A{a} outside alphabet of size {base}")
        r = r * base + a
    return WordIndex(len(letters), r + 1)


def word_string(w, g: int | None = None) -> str:
    """``(1, 0)`` or ``WordIndex(2, 3)`` (with ``g``) -> ``'A1A0'``; the empty word is ``'1'``."""
    if isinstance(w, WordIndex):
        if g is None:
            raise InputError("genus needed to spell a ranked word")
        w = word_letters(w, g)
    return "".join(f"A{a}" for a in w) or "1"


_LETTER = re.compile(r"A(\d+)")


def word_of_string(s: str, g: int) -> WordIndex:
    return word_index(parse_letters(s, g), g)


def parse_letters(s: str, g: int) -> Word:
    s = s.strip()
    if s in ("", "1"):
        return ()
    pos, out = 0, []
    for m in _LETTER.finditer(s):
        if m.start() != pos:
            raise BadLetter(f"cannot parse word {s!r}")
        a = int(m.group(1))
        if a >= 2 * g:
            raise BadLetter(f"letter A{a} outside alphabet of size {2 * g}")
        out.append(a)
        pos = m.end()
    if pos != len(s):
        raise BadLetter(f"cannot parse word {s!r}")
    return tuple(out)


def basis_words(n: int, g: int) -> list[Word]:
    """Words of length at most ``n``, longest first, each length in rank order."""
    out = []
    for length in range(n, -1, -1):
        for rank in range(1, (2 * g) ** length + 1):
            out.append(word_letters(WordIndex(length, rank), g))
    return out


def words_of_length(length: int, g: int) -> list[Word]:
    return [word_letters(WordIndex(length, r), g) for r in range(1, (2 * g) ** length + 1)]


# -- the truncated tensor algebra ------------------------------------------

def _nonzero(c) -> bool:
    return bool(c)


class TensorElem:
    """Element of the tensor algebra on ``2g`` letters truncated above length ``n``.

    Coefficients may come from any commutative ring whose elements support
    ``+``, ``*``, negation and truthiness (zero test).
    """

    __slots__ = ("n", "g", "terms")

    def __init__(self, n: int, g: int, terms: dict | None = None):
        self.n = n
        self.g = g
        self.terms = {}
        for w, c in (terms or {}).items():
            if len(w) <= n and _nonzero(c):
                self.terms[w] = c

    @classmethod
    def one(cls, n: int, g: int, unit=Fraction(1)) -> "TensorElem":
        return cls(n, g, {(): unit})

    @classmethod
    def word(cls, w, n: int, g: int, coeff=Fraction(1)) -> "TensorElem":
        if isinstance(w, WordIndex):
            w = word_letters(w, g)
        if isinstance(w, str):
            w = parse_letters(w, g)
        if any(not 0 <= a < 2 * g for a in w):
            raise BadLetter(f"word {w} outside alphabet of size {2 * g}")
        return cls(n, g, {tuple(w): coeff})

    def _check(self, other: "TensorElem"):
        if self.g != other.g:
            raise AlphabetMismatch(f"alphabets of size {2 * self.g} and {2 * other.g}")

    def __getitem__(self, w):
        if isinstance(w, WordIndex):
            w = word_letters(w, self.g)
        elif isinstance(w, str):
            w = parse_letters(w, self.g)
        return self.terms.get(tuple(w), 0)

    def coeff(self, w, zero=Fraction(0)):
        c = self[w]
        return zero if isinstance(c, int) and c == 0 else c

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self):
        return self.terms.get((), 0)

    def degree_part(self, d: int) -> "TensorElem":
        return TensorElem(self.n, self.g, {w: c for w, c in self.terms.items() if len(w) == d})

    def truncate(self, n: int) -> "TensorElem":
        return TensorElem(n, self.g, {w: c for w, c in self.terms.items() if len(w) <= n})

    def map_coeffs(self, fn: Callable) -> "TensorElem":
        return TensorElem(self.n, self.g, {w: fn(c) for w, c in self.terms.items()})

    def __add__(self, other):
        if isinstance(other, TensorElem):
            self._check(other)
            out = dict(self.terms)
            for w, c in other.terms.items():
                out[w] = out[w] + c if w in out else c
            return TensorElem(min(self.n, other.n), self.g, out)
        if other == 0:
            return self
        return self + TensorElem.one(self.n, self.g, other)

    __radd__ = __add__

    def __neg__(self):
        return TensorElem(self.n, self.g, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "TensorElem":
        return TensorElem(self.n, self.g, {w: v * c for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, TensorElem):
            return concat_mul(self, other)
        return TensorElem(self.n, self.g, {w: c * other for w, c in self.terms.items()})

    def __rmul__(self, other):
        return TensorElem(self.n, self.g, {w: other * c for w, c in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, TensorElem):
            return NotImplemented
        return self.g == other.g and (self - other).is_zero()

    def __repr__(self):
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0]))
        return " + ".join(f"({c})*{word_string(w)}" for w, c in items)

    def to_json(self, coeff_json: Callable = None) -> dict:
        enc = coeff_json or _default_coeff_json
        terms = []
        for w in sorted(self.terms, key=lambda w: (len(w), w)):
            idx = word_index(w, self.g)
            terms.append({"len": idx.length, "rank": idx.rank, "coeff": enc(self.terms[w])})
        return {"n": self.n, "g": self.g, "terms": terms}

    @classmethod
    def from_json(cls, data, coeff_decode: Callable = None) -> "TensorElem":
        dec = coeff_decode or rational
        try:
            n, g = int(data["n"]), int(data["g"])
            terms = {}
            for t in data["terms"]:
                w = word_letters(WordIndex(int(t["len"]), int(t["rank"])), g)
                terms[w] = dec(t["coeff"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad tensor JSON: {exc}") from exc
        return cls(n, g, terms)


def _default_coeff_json(c):
    if isinstance(c, (int, Fraction)):
        return rational_str(Fraction(c))
    if hasattr(c, "to_json"):
        return c.to_json()
    return str(c)


def concat_mul(a: TensorElem, b: TensorElem) -> TensorElem:
    a._check(b)
    n = min(a.n, b.n)
    out: dict = {}
    for u, cu in a.terms.items():
        room = n - len(u)
        if room < 0:
            continue
        for v, cv in b.terms.items():
            if len(v) > room:
                continue
            w = u + v
            p = cu * cv
            out[w] = out[w] + p if w in out else p
    return TensorElem(n, a.g, out)


def shuffle_words(u: Word, v: Word) -> dict:
    """Shuffle product of two words as a multiset ``{word: multiplicity}``."""
    out: dict = {}
    total = len(u) + len(v)
    for pos in combinations(range(total), len(u)):
        w = [None] * total
        sel = set(pos)
        iu = iter(u)
        iv = iter(v)
        for k in range(total):
            w[k] = next(iu) if k in sel else next(iv)
        t = tuple(w)
        out[t] = out.get(t, 0) + 1
    return out


def shuffle_mul(a: TensorElem, b: TensorElem) -> TensorElem:
    a._check(b)
    n = min(a.n, b.n)
    out: dict = {}
    for u, cu in a.terms.items():
        for v, cv in b.terms.items():
            if len(u) + len(v) > n:
                continue
            p = cu * cv
            for w, m in shuffle_words(u, v).items():
                t = p * m
                out[w] = out[w] + t if w in out else t
    return TensorElem(n, a.g, out)


# -- coproduct, represented over the doubled alphabet ------------------------
# ``u (x) v`` is stored as the word ``u + shift(v)`` where the second factor's
# letters are moved up by 2g; total length is truncated at ``n``.

def _split_word(w: Word, g: int):
    base = 2 * g
    u = tuple(a for a in w if a < base)
    v = tuple(a - base for a in w if a >= base)
    return u, v


def tensor(a: TensorElem, b: TensorElem) -> TensorElem:
    a._check(b)
    n = min(a.n, b.n)
    base = 2 * a.g
    out: dict = {}
    for u, cu in a.terms.items():
        for v, cv in b.terms.items():
            if len(u) + len(v) > n:
                continue
            w = u + tuple(x + base for x in v)
            p = cu * cv
            out[w] = out[w] + p if w in out else p
    return TensorElem(n, 2 * a.g, out)


def tensor_mul(x: TensorElem, y: TensorElem, g: int) -> TensorElem:
    """Componentwise product in the doubled representation of ``R (x) R``."""
    if x.g != 2 * g or y.g != 2 * g:
        raise AlphabetMismatch("operands are not in the doubled alphabet")
    n = min(x.n, y.n)
    base = 2 * g
    out: dict = {}
    for w1, c1 in x.terms.items():
        u1, v1 = _split_word(w1, g)
        for w2, c2 in y.terms.items():
            if len(w1) + len(w2) > n:
                continue
            u2, v2 = _split_word(w2, g)
            w = u1 + u2 + tuple(a + base for a in v1 + v2)
            p = c1 * c2
            out[w] = out[w] + p if w in out else p
    return TensorElem(n, 2 * g, out)


def coproduct(a: TensorElem) -> TensorElem:
    """Deconcatenation-free coproduct with the letters primitive: ``A_i -> A_i (x) 1 + 1 (x) A_i``."""
    base = 2 * a.g
    out: dict = {}
    for w, c in a.terms.items():
        k = len(w)
        for r in range(k + 1):
            for pos in combinations(range(k), r):
                sel = set(pos)
                u = tuple(w[i] for i in range(k) if i in sel)
                v = tuple(w[i] + base for i in range(k) if i not in sel)
                key = u + v
                out[key] = out[key] + c if key in out else c
    return TensorElem(a.n, 2 * a.g, out)


def _require_exact(a: TensorElem):
    for c in a.terms.values():
        if isinstance(c, (float, complex)):
            raise UndecidableCoefficients("floating point coefficients cannot be compared exactly")


def is_primitive(a: TensorElem) -> bool:
    _require_exact(a)
    one = TensorElem.one(a.n, a.g)
    return coproduct(a) == tensor(a, one) + tensor(one, a)


def is_grouplike(a: TensorElem) -> bool:
    _require_exact(a)
    c0 = a.constant_term()
    if not (c0 == 1 or (hasattr(c0, "is_one") and c0.is_one())):
        return False
    return coproduct(a) == tensor(a, a)


def exp_trunc(a: TensorElem) -> TensorElem:
    if _nonzero(a.constant_term()):
        raise BadConstantTerm("exp needs an element with zero constant term")
    unit = _unit_like(a)
    out = TensorElem.one(a.n, a.g, unit)
    power = TensorElem.one(a.n, a.g, unit)
    for k in range(1, a.n + 1):
        power = concat_mul(power, a)
        if power.is_zero():
            break
        out = out + power.scale(Fraction(1, factorial(k)))
    return out


def log_trunc(a: TensorElem) -> TensorElem:
    c0 = a.constant_term()
    if not (c0 == 1 or (hasattr(c0, "is_one") and c0.is_one())):
        raise BadConstantTerm("log needs an element with constant term 1")
    x = a - TensorElem.one(a.n, a.g, c0)
    out = TensorElem(a.n, a.g)
    power = TensorElem.one(a.n, a.g, c0)
    for k in range(1, a.n + 1):
        power = concat_mul(power, x)
        if power.is_zero():
            break
        out = out + power.scale(Fraction((-1) ** (k + 1), k))
    return out


def _unit_like(a: TensorElem):
    for c in a.terms.values():
        if hasattr(c, "unit"):
            return c.unit()
        break
    return Fraction(1)


# -- Lie elements -----------------------------------------------------------
# A bracket tree is a letter index or a pair ``(left, right)`` meaning [left, right].

def parse_bracket(s: str, g: int):
    s = s.replace(" ", "")
    pos = 0

    def node():
        nonlocal pos
        if s.startswith("[", pos):
            pos += 1
            left = node()
            if not s.startswith(",", pos):
                raise InputError(f"expected ',' in bracket {s!r}")
            pos += 1
            right = node()
            if not s.startswith("]", pos):
                raise InputError(f"expected ']' in bracket {s!r}")
            pos += 1
            return (left, right)
        m = _LETTER.match(s, pos)
        if not m:
            raise BadLetter(f"cannot parse bracket {s!r}")
        a = int(m.group(1))
        if a >= 2 * g:
            raise BadLetter(f"letter A{a} outside alphabet of size {2 * g}")
        pos = m.end()
        return a

    tree = node()
    if pos != len(s):
        raise InputError(f"trailing characters in bracket {s!r}")
    return tree


def bracket_string(tree) -> str:
    if isinstance(tree, int):
        return f"A{tree}"
    return f"[{bracket_string(tree[0])},{bracket_string(tree[1])}]"


def bracket_degree(tree) -> int:
    return 1 if isinstance(tree, int) else bracket_degree(tree[0]) + bracket_degree(tree[1])


def expand_bracket(tree, n: int, g: int) -> TensorElem:
    if isinstance(tree, int):
        return TensorElem.word((tree,), n, g)
    a = expand_bracket(tree[0], n, g)
    b = expand_bracket(tree[1], n, g)
    return concat_mul(a, b) - concat_mul(b, a)


class LieExpr:
    """Linear combination of bracket monomials ``[(tree, coeff), ...]``."""

    __slots__ = ("g", "items")

    def __init__(self, g: int, items: Iterable = ()):
        self.g = g
        self.items = [(t, c) for t, c in items]

    @classmethod
    def parse(cls, g: int, pairs) -> "LieExpr":
        """From ``[("[[A0,A1],A1]", coeff), ...]``."""
        return cls(g, [(parse_bracket(s, g) if isinstance(s, str) else s, c) for s, c in pairs])

    def __add__(self, other: "LieExpr") -> "LieExpr":
        if self.g != other.g:
            raise AlphabetMismatch("Lie expressions over different alphabets")
        return LieExpr(self.g, self.items + other.items)

    def max_degree(self) -> int:
        return max((bracket_degree(t) for t, _ in self.items), default=0)

    def __repr__(self):
        return " + ".join(f"({c})*{bracket_string(t)}" for t, c in self.items) or "0"


def lie_expand(expr: LieExpr, n: int | None = None) -> TensorElem:
    n = expr.max_degree() if n is None else n
    out = TensorElem(n, expr.g)
    for tree, c in expr.items:
        if bracket_degree(tree) > n:
            continue
        out = out + expand_bracket(tree, n, expr.g).map_coeffs(lambda v, c=c: c * v)
    return out


def lyndon_words(k: int, n: int) -> list[Word]:
    """Lyndon words of length 1..n over ``k`` letters, in lexicographic order (Duval)."""
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        out.append(tuple(w))
        m = len(w)
        while len(w) < n:
            w.append(w[len(w) - m])
        while w and w[-1] == k - 1:
            w.pop()
    return out


def standard_bracketing(w: Word):
    if len(w) == 1:
        return w[0]
    # right factor is the longest proper Lyndon suffix
    for i in range(1, len(w)):
        v = w[i:]
        if _is_lyndon(v):
            return (standard_bracketing(w[:i]), standard_bracketing(v))
    raise ValueError(f"{w} is not a Lyndon word")


def _is_lyndon(w: Word) -> bool:
    return all(w < w[i:] + w[:i] for i in range(1, len(w))) and len(set(w[i:] + w[:i] for i in range(len(w)))) == len(w)


def to_lie(a: TensorElem) -> LieExpr:
    """Write a primitive element in the Lyndon basis; raises if ``a`` is not a Lie element."""
    g, n = a.g, a.n
    if _nonzero(a.constant_term()):
        raise InputError("a Lie element has no constant term")
    rest = a
    items = []
    for w in sorted(lyndon_words(2 * g, n), key=lambda w: (len(w), w)):
        c = rest[w]
        if isinstance(c, int) and c == 0:
            continue
        tree = standard_bracketing(w)
        items.append((tree, c))
        rest = rest - expand_bracket(tree, n, g).map_coeffs(lambda v, c=c: c * v)
    if not rest.is_zero():
        raise InputError("element is not a Lie polynomial")
    return LieExpr(g, items)
