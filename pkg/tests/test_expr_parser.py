from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from corpus import EXPRESSIONS
from momentkit import expr as E
from momentkit.errors import DomainError, ParseError, RangeError
from momentkit.parser import parse

pos_rat = st.fractions(min_value=Fraction(1, 8), max_value=8, max_denominator=12)


@st.composite
def exprs(draw, depth=3):
    """Random positive-valued expressions built through the public constructors."""
    leaf = st.one_of(
        pos_rat.map(E.const),
        st.lists(pos_rat, min_size=1, max_size=4).map(E.poly),
        st.tuples(pos_rat, pos_rat).map(lambda lm: E.poch(*lm)),
        st.integers(-3, 3).map(E.pow_k1),
        st.just(E.poly([1, 1])),
    )
    if depth == 0:
        return draw(leaf)
    kind = draw(st.sampled_from(["leaf", "add", "mul", "recip", "scale", "prefix"]))
    if kind == "leaf":
        return draw(leaf)
    sub = exprs(depth=depth - 1)
    if kind == "add":
        return E.add(draw(sub), draw(sub))
    if kind == "mul":
        return E.mul(draw(sub), draw(sub))
    if kind == "recip":
        return E.recip(draw(sub))
    if kind == "scale":
        return E.scalar_mul(draw(pos_rat), draw(sub))
    return E.prefix_tail(draw(st.lists(pos_rat, min_size=1, max_size=3)), draw(sub))


@pytest.mark.parametrize("text", EXPRESSIONS)
def test_corpus_round_trip(text):
    e = parse(text)
    again = parse(E.render(e))
    assert again == e
    assert E.render(again) == E.render(e)


@pytest.mark.parametrize("text", EXPRESSIONS)
def test_corpus_matches_naive_interpreter(text):
    e = parse(text)
    if E.is_exact(e):
        assert E.values(e, 12, check=False) == oracle.seq(e, 12)
    else:
        with mpmath.workprec(200):
            want = oracle.seq(e, 12, exact=False)
        got = E.values(e, 12, precision=160, check=False)
        for g, w in zip(got, want):
            assert abs(g - w) <= mpmath.mpf(2) ** -150 * abs(w)


@settings(max_examples=150, deadline=None)
@given(exprs())
def test_render_parse_is_identity(e):
    assert parse(E.render(e)) == e


@settings(max_examples=150, deadline=None)
@given(exprs())
def test_evaluator_agrees_with_oracle(e):
    if E.is_exact(e):
        assert E.values(e, 8) == oracle.seq(e, 8)
    else:
        with mpmath.workprec(200):
            want = oracle.seq(e, 8, exact=False)
        for g, w in zip(E.values(e, 8, precision=160), want):
            assert abs(g - w) <= mpmath.mpf(2) ** -140 * abs(w)


def test_decimal_literals_are_exact():
    assert parse("2.5") == E.const(Fraction(5, 2))
    assert parse("poch(1.5,1)") == E.poch(Fraction(3, 2), 1)


def test_pow_integer_is_exact_and_fractional_is_not():
    assert E.is_exact(parse("pow(2)"))
    assert not E.is_exact(parse("pow(3/4)"))


def test_operator_precedence():
    assert E.values(parse("1+2*k^2"), 3) == [1, 3, 9]
    assert E.values(parse("(1+2)*k"), 3, check=False) == [0, 3, 6]


@pytest.mark.parametrize("text,pos", [
    ("k+", 2),
    ("poch(0,1)", 5),
    ("poch(1,-2)", 7),
    ("recip(0)", 6),
    ("k ^ x", 4),
    ("(k+1", 4),
    ("k+1)", 3),
    ("", 0),
])
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.position == pos


def test_nonpositive_coefficient_is_domain_error():
    with pytest.raises(DomainError) as info:
        E.values(parse("k-2"), 5)
    assert info.value.k == 0


def test_recip_of_nonpositive_is_domain_error():
    with pytest.raises(DomainError):
        E.values(parse("recip(k-3)"), 5)


def test_materialized_prefix_raises_past_its_end():
    e = parse("prefix(1,2,3;)")
    assert E.values(e, 3) == [1, 2, 3]
    with pytest.raises(RangeError):
        E.values(e, 4)


def test_scalar_mul_and_sub_normalize():
    e = E.sub(parse("(k+1)^2"), parse("k"))
    assert E.poly_coeffs(e) == (1, 1, 1)
    assert E.scalar_mul(1, parse("k+1")) == parse("k+1")
