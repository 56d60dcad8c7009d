from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from momentkit import differences as D
from momentkit.expr import add, const, mul, poch, poly, pow_k1, recip, scalar_mul
from momentkit.parser import parse

pos_rat = st.fractions(min_value=Fraction(1, 4), max_value=6, max_denominator=8)


def test_table_matches_binomial_formula(core_backend):
    e = parse("recip(k^2+3*k+4)")
    a = oracle.seq(e, 16)
    t = D.build_table(e, 15)
    assert t.mode == "exact"
    for n in range(16):
        for m in range(16 - n):
            assert (-1) ** n * t[n, m] == oracle.alt_sum(a, n, m)


@settings(max_examples=60, deadline=None)
@given(st.lists(pos_rat, min_size=2, max_size=4), st.integers(4, 14))
def test_binomial_identity_property(coeffs, order):
    e = recip(poly(coeffs))
    a = oracle.seq(e, order + 1)
    t = D.build_table(e, order)
    for n in range(order + 1):
        for m in range(order + 1 - n):
            assert (-1) ** n * t[n, m] == oracle.alt_sum(a, n, m)


@settings(max_examples=60, deadline=None)
@given(st.lists(pos_rat, min_size=2, max_size=4), st.integers(4, 16))
def test_cm_verdict_matches_brute_force(coeffs, order):
    e = recip(poly(coeffs))
    want = oracle.first_cm_failure(oracle.seq(e, order + 1), order)
    got = D.check_cm(e, order)
    if want is None:
        assert got == D.PassUpTo(order)
    else:
        assert got == D.Fail(m=want[1], n=want[0], value=want[2])


# pinned witnesses, each reproduced by the brute-force oracle
PINNED_CM = [
    ("2*recip(k^2+3*k+4)", 20, (12, 0, Fraction(-1925775, 2090015152))),
    ("recip((1/3)*(k+3)+(1/2)*(k+1)*(k+2))", 200, (71, 0, None)),
    ("recip((1/10)*(k+10)+(k+1)*(k+1))", 60, (20, 0, None)),
    ("4*recip(k^2+3*k+6)", 25, (6, 0, Fraction(-11, 1564))),
    ("poch(1,1)*recip(poch(21/20,1)+poch(3,1))", 60, (18, 0, None)),
    ("poch(1,1)*recip(poch(11/10,1)+poch(3,1))", 80, (58, 2, None)),
]


@pytest.mark.parametrize("text,order,want", PINNED_CM)
def test_pinned_cm_witnesses(text, order, want, core_backend):
    e = parse(text)
    v = D.check_cm(e, order)
    assert isinstance(v, D.Fail)
    assert (v.n, v.m) == want[:2]
    if want[2] is not None:
        assert v.value == want[2]
    assert v.value < 0


@pytest.mark.parametrize("text,order,want", PINNED_CM)
def test_pinned_cm_witnesses_agree_with_oracle(text, order, want):
    e = parse(text)
    got = oracle.first_cm_failure(oracle.seq(e, order + 1), order)
    assert got[:2] == want[:2]
    assert D.check_cm(e, order).value == got[2]


def test_cm_examples():
    assert D.check_cm(parse("recip(k+1)"), 25) == D.PassUpTo(25)
    assert D.check_cm(parse("recip((k+1)*(k+2))"), 25) == D.PassUpTo(25)
    assert D.check_cm(const(1), 10) == D.PassUpTo(10)
    assert D.check_cm(parse("poch(1,3)"), 25) == D.PassUpTo(25)


def test_ca_examples(core_backend):
    assert D.check_ca(parse("k+1"), 25) == D.PassUpTo(25)
    assert D.check_ca(poch(Fraction(3, 2), 1), 25) == D.PassUpTo(25)
    assert D.check_ca(poch(3, 2), 25) == D.PassUpTo(25)
    assert D.check_ca(poch(Fraction(5, 2), 1), 25) == D.Fail(m=0, n=2, value=Fraction(3, 8))
    assert D.check_ca(parse("(k+1)^2"), 10) == D.Fail(m=0, n=2, value=2)


def test_ca_witness_matches_oracle():
    e = poch(Fraction(5, 2), 1)
    assert oracle.first_ca_failure(oracle.seq(e, 26), 25) == (2, 0, Fraction(3, 8))


@pytest.mark.parametrize("text", ["k+1", "poch(3/2,1)", "poch(5/2,1)", "(k+1)^2", "pow(1)+1",
                                  "recip(k+1)"])
def test_ca_via_delta_agrees(text):
    e = parse(text)
    direct = D.check_ca(e, 20)
    via = D.check_ca_via_delta(e, 20)
    assert direct.ok == via.ok
    if not direct.ok:
        # witness coordinates shift by one order
        assert (via.n + 1, via.m) == (direct.n, direct.m)
        assert via.value == -direct.value if direct.n % 2 else True


def test_approx_mode_agrees_with_exact(core_backend):
    exact = D.check_cm(parse("2*recip(k^2+3*k+4)"), 20)
    approx = D.check_cm(scalar_mul(2, recip(poly([mpmath.mpf(4), 3, 1]))), 20, precision=192)
    assert isinstance(approx, D.Fail)
    assert (approx.n, approx.m) == (exact.n, exact.m)
    with mpmath.workprec(256):
        want = mpmath.mpf(exact.value.numerator) / exact.value.denominator
        assert abs(approx.value - want) < mpmath.mpf(2) ** -150


def test_approx_ca_at_192_bits():
    for lam, mu, ok in [(1, 1.5, True), (1, 2.5, False)]:
        v = D.check_ca(poch(mpmath.mpf(mu), mpmath.mpf(lam)), 25, precision=192)
        assert not isinstance(v, D.Indeterminate)
        assert v.ok == ok


def test_exactly_vanishing_differences_are_indeterminate_in_approx_mode():
    # (3)_k/(2)_k = (k+2)/2 is linear; rounding cannot certify the sign of a zero
    v = D.check_ca(poch(mpmath.mpf(3), mpmath.mpf(2)), 10, precision=192)
    assert isinstance(v, D.Indeterminate)
    assert D.check_ca(poch(3, 2), 10, precision=192) == D.PassUpTo(10)


def test_fractional_power_deep_witness():
    e = recip(mul(pow_k1(Fraction(3, 4)), poly([2, 2, 1])))
    v = D.check_cm(e, 300, precision=428, sign_tolerance=0)
    assert isinstance(v, D.Fail)
    assert (v.n, v.m) == (238, 0)
    with mpmath.workprec(1500):
        a = oracle.seq(e, 239, exact=False)
        direct = oracle.alt_sum(a, 238, 0)
    assert direct < 0
    assert abs(v.value - direct) <= 1e-20 * abs(direct)


def test_fractional_power_passes_just_below_witness():
    e = recip(mul(pow_k1(Fraction(3, 4)), poly([2, 2, 1])))
    assert D.check_cm(e, 237, precision=600, sign_tolerance=0) == D.PassUpTo(237)


def test_tiny_tolerance_window_gives_indeterminate():
    # entries of 1/(k+1)^{3/2} at high order are far below a coarse tolerance
    v = D.check_cm(pow_k1(Fraction(-3, 2)), 40, precision=64, sign_tolerance=Fraction(1, 10))
    assert isinstance(v, D.Indeterminate)


def test_orders_below_one_are_rejected():
    with pytest.raises(ValueError):
        D.check_cm(const(1), 0)
    with pytest.raises(ValueError):
        D.check_ca_via_delta(const(1), 1)


def test_verdict_json():
    assert D.PassUpTo(5).to_json() == {"result": "pass", "order": 5}
    assert D.Fail(m=0, n=2, value=Fraction(3, 8)).to_json() == {
        "result": "fail", "m": 0, "n": 2, "value": "3/8"}


# closure properties of the two cones

CM_CATALOG = [recip(poly([1, 1])), recip(poly([2, 1])), poch(1, 3), poch(Fraction(1, 2), 2),
              pow_k1(-2), recip(parse("(k+1)*(k+3)")), const(Fraction(1, 2))]
CA_CATALOG = [poly([1, 1]), poly([3, 1]), poch(Fraction(3, 2), 1), poch(3, 2), const(2),
              parse("prefix(1;2)"), add(const(1), poch(2, 1))]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(CM_CATALOG), st.sampled_from(CM_CATALOG), pos_rat, pos_rat)
def test_cm_closed_under_sums_and_products(a, b, s, t):
    assert D.check_cm(add(scalar_mul(s, a), scalar_mul(t, b)), 16).ok
    assert D.check_cm(mul(a, b), 16).ok


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(CA_CATALOG), st.sampled_from(CA_CATALOG), pos_rat)
def test_ca_sum_and_reciprocal_rule(a, b, s):
    total = add(a, scalar_mul(s, b))
    assert D.check_ca(total, 16).ok
    assert D.check_cm(recip(total), 16).ok


def test_catalogs_are_verified():
    assert all(D.check_cm(e, 20).ok for e in CM_CATALOG)
    assert all(D.check_ca(e, 20).ok for e in CA_CATALOG)
