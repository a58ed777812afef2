from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from albanese.errors import BadConstantTerm, BadLetter, InputError
from albanese.wordalg import (LieExpr, TensorElem, WordIndex, coproduct, concat_mul, exp_trunc,
                              expand_bracket, is_grouplike, is_primitive, lie_expand, log_trunc,
                              lyndon_words, parse_bracket, phi, psi, shuffle_mul, standard_bracketing,
                              tau, tensor, tensor_mul, to_lie, word_index, word_letters,
                              word_of_string, word_string)


def W(s, n=4, g=1, c=1):
    return TensorElem.word(s, n, g, Fraction(c))


def one(n=4, g=1):
    return TensorElem.one(n, g)


# -- index arithmetic ------------------------------------------------------------

def test_index_examples():
    assert (psi(3, 0, 1, 2), psi(4, 0, 1, 2), psi(1, 0, 1, 2)) == (2, 2, 1)
    assert (phi(3, 0, 1, 2), phi(4, 0, 1, 2)) == (0, 1)
    for m in range(4):
        for p in range(m + 1, 6):
            assert tau(2 ** p, 2 ** m, m, 2) == 1


def test_index_laws():
    for j in range(1, 7):
        for i in range(1, j + 1):
            for r in range(1, 2 ** j + 1):
                assert psi(r, i, j, 2) == psi(r, i - 1, j - 1, 2)
                assert phi(r, i, j, 2) == 2 * phi(r, i - 1, j - 1, 2)


def test_word_ranks():
    assert word_string(WordIndex(2, 1), 1) == "A0A0"
    assert word_string(WordIndex(2, 3), 1) == "A1A0"
    assert word_string(WordIndex(0, 1), 1) == "1"
    assert word_of_string("A1A3", 2) == WordIndex(2, 8)
    # A_i w has rank (2g)^l i + rank(w)
    for g in (1, 2):
        for r in range(1, (2 * g) ** 2 + 1):
            w = word_letters(WordIndex(2, r), g)
            for i in range(2 * g):
                assert word_index((i,) + w, g).rank == (2 * g) ** 2 * i + r
    with pytest.raises(BadLetter):
        word_of_string("A2", 1)


# -- products ----------------------------------------------------------------------

def test_concat_examples():
    assert W("A0") * W("A1") == W("A0A1")
    v = W("A0A1") + W("A1", c=3)
    assert one() * v == v
    s = W("A0") + W("A1")
    assert s * s == W("A0A0") + W("A0A1") + W("A1A0") + W("A1A1")


def test_shuffle_examples():
    assert shuffle_mul(W("A0"), W("A1")) == W("A0A1") + W("A1A0")
    a = W("A1")
    assert shuffle_mul(shuffle_mul(a, a), a) == W("A1A1A1", c=6)
    v = W("A0A1") + W("A1", c=2)
    assert shuffle_mul(one(), v) == v


def test_coproduct_examples():
    g = 1
    A0, A1, e = W("A0"), W("A1"), one()
    t = lambda a, b: tensor(a, b)
    assert coproduct(W("A0A1")) == t(W("A0A1"), e) + t(A0, A1) + t(A1, A0) + t(e, W("A0A1"))
    assert coproduct(e) == t(e, e)
    assert coproduct(W("A0A0")) == t(W("A0A0"), e) + t(A0, A0).scale(2) + t(e, W("A0A0"))


def test_exp_log_examples():
    A0, A1 = W("A0", n=2), W("A1", n=2)
    assert exp_trunc(A0) == one(2) + A0 + W("A0A0", n=2, c=Fraction(1, 2))
    assert log_trunc(one(2) + A0) == A0 - W("A0A0", n=2, c=Fraction(1, 2))
    s = A0 + A1
    assert exp_trunc(s) == one(2) + s + (s * s).scale(Fraction(1, 2))
    with pytest.raises(BadConstantTerm):
        exp_trunc(one(2))
    with pytest.raises(BadConstantTerm):
        log_trunc(A0)


def test_primitive_grouplike_examples():
    br = W("A0A1") - W("A1A0")
    assert is_primitive(br)
    assert is_grouplike(exp_trunc(W("A0")))
    assert not is_grouplike(one() + W("A0A1"))


def test_lie_expand_examples():
    e = lie_expand(LieExpr.parse(1, [("[[A0,A1],A1]", Fraction(1))]), 3)
    assert e == W("A0A1A1", n=3) - W("A1A0A1", n=3, c=2) + W("A1A1A0", n=3)
    assert lie_expand(LieExpr.parse(1, [("[A0,A0]", Fraction(1))]), 2).is_zero()
    e = lie_expand(LieExpr.parse(1, [("[A1,[A1,[A1,A0]]]", Fraction(1))]), 4)
    assert e == (W("A1A1A1A0") - W("A1A1A0A1", c=3) + W("A1A0A1A1", c=3) - W("A0A1A1A1"))


def test_bracket_parse_errors():
    with pytest.raises(InputError):
        parse_bracket("[A0,A1", 1)
    with pytest.raises(BadLetter):
        parse_bracket("[A0,A2]", 1)


def test_every_bracket_is_primitive():
    for g in (1, 2):
        for w in lyndon_words(2 * g, 4 if g == 1 else 3):
            assert is_primitive(expand_bracket(standard_bracketing(w), len(w), g))


# -- random elements ---------------------------------------------------------------

def _elements(g, n, zero_constant=False):
    words = st.lists(st.integers(0, 2 * g - 1), min_size=1 if zero_constant else 0, max_size=n)
    coeffs = st.fractions(min_value=-3, max_value=3, max_denominator=4)
    return st.dictionaries(words.map(tuple), coeffs, max_size=6).map(lambda d: TensorElem(n, g, d))


def _lie_elements(g, n):
    trees = [standard_bracketing(w) for w in lyndon_words(2 * g, n)]
    coeffs = st.fractions(min_value=-3, max_value=3, max_denominator=4)
    picks = st.dictionaries(st.integers(0, len(trees) - 1), coeffs, max_size=5)
    return picks.map(lambda d: LieExpr(g, [(trees[i], c) for i, c in sorted(d.items())])) \
        .map(lambda e: lie_expand(e, n))


shape = st.sampled_from([(1, 4), (2, 3), (2, 2), (1, 3)])


@settings(max_examples=200, deadline=None)
@given(data=st.data(), gn=shape)
def test_exp_log_inverse(data, gn):
    g, n = gn
    a = data.draw(_elements(g, n, zero_constant=True))
    assert log_trunc(exp_trunc(a)) == a
    b = one(n, g) + a
    assert exp_trunc(log_trunc(b)) == b


@settings(max_examples=200, deadline=None)
@given(data=st.data(), gn=shape)
def test_bialgebra(data, gn):
    g, n = gn
    a = data.draw(_elements(g, n))
    b = data.draw(_elements(g, n))
    assert coproduct(concat_mul(a, b)) == tensor_mul(coproduct(a), coproduct(b), g)


@settings(max_examples=60, deadline=None)
@given(data=st.data(), gn=shape)
def test_grouplike_coefficients_are_characters(data, gn):
    g, n = gn
    G = exp_trunc(data.draw(_lie_elements(g, n)))
    assert is_grouplike(G)
    u = data.draw(st.lists(st.integers(0, 2 * g - 1), max_size=n // 2).map(tuple))
    v = data.draw(st.lists(st.integers(0, 2 * g - 1), max_size=n - len(u)).map(tuple))
    sh = shuffle_mul(TensorElem.word(u, n, g), TensorElem.word(v, n, g))
    pairing = sum((G[w] * c for w, c in sh.terms.items()), Fraction(0))
    assert G[u] * G[v] == pairing


@settings(max_examples=60, deadline=None)
@given(data=st.data(), gn=shape)
def test_to_lie_roundtrip(data, gn):
    g, n = gn
    a = data.draw(_lie_elements(g, n))
    b = data.draw(_lie_elements(g, n))
    lie = log_trunc(exp_trunc(a) * exp_trunc(b))
    assert is_primitive(lie)
    assert lie_expand(to_lie(lie), n) == lie


def test_tensor_json_roundtrip():
    a = W("A0A1", c=Fraction(-2, 3)) + W("A1")
    assert TensorElem.from_json(a.to_json()) == a
