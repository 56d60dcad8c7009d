import warnings
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from momentkit import differences as D
from momentkit import kernels as K
from momentkit import measures as M
from momentkit import shifts as SH
from momentkit.errors import (ContractionError, DomainError, LeftInvertibilityWarning, ParseError,
                              RangeError, UnknownKernel)
from momentkit.expr import const, poly, recip, values
from momentkit.parser import parse

pos_rat = st.fractions(min_value=Fraction(1, 6), max_value=12, max_denominator=10)


# -- shift view -------------------------------------------------------------


def test_bergman_weights():
    w = SH.weights_squared(K.make("bergman").shift, 4)
    assert w == [Fraction(k + 1, k + 2) for k in range(5)]


def test_contraction_and_hyponormal_witnesses():
    dirichlet = SH.ShiftView(parse("recip(k+1)"))
    assert SH.is_contraction(dirichlet, 10) == D.Fail(m=0, n=1, value=Fraction(-1, 2))
    bumpy = SH.ShiftView(parse("prefix(1,3,4;k+2)"))
    # a_1^2 - a_0 a_2 = 9 - 4 >= 0, a_2^2 - a_1 a_3 = 16 - 15 >= 0, a_3^2 - a_2 a_4 = 25 - 24
    assert SH.is_hyponormal(bumpy, 5).ok
    flat_then_up = SH.ShiftView(parse("prefix(1,1;k^2)"))
    assert SH.is_hyponormal(flat_then_up, 5) == D.Fail(m=0, n=2, value=-3)


def test_subnormal_contraction_requires_contraction():
    with pytest.raises(ContractionError):
        SH.is_subnormal_contraction(K.k_lm(1, 2).shift, 10)
    # the underlying moment test on the reciprocal still fails, at the first order
    assert D.check_cm(recip(K.k_lm(1, 2).coeffs), 10) == D.Fail(m=0, n=1, value=-1)


def test_subnormal_contraction_examples():
    assert SH.is_subnormal_contraction(K.make("bergman").shift, 30) == D.PassUpTo(30)
    v = SH.is_subnormal_contraction(K.kernel_sum(K.k_r(3), K.k_st(1, 2)).shift, 200)
    assert (v.n, v.m) == (71, 0)


def test_completely_hyperexpansive_examples():
    dirichlet = SH.ShiftView(parse("recip(k+1)"))
    assert SH.is_completely_hyperexpansive(dirichlet, 25).ok
    assert not SH.is_completely_hyperexpansive(K.make("bergman").shift, 25).ok


def test_cauchy_dual_is_reciprocal_and_involutive():
    v = K.make("Kst", 1, 2).shift
    dual = SH.cauchy_dual(v)
    assert dual.coeffs == recip(v.coeffs)
    assert SH.cauchy_dual(dual).coeffs == v.coeffs


def test_cauchy_dual_warns_on_tiny_weights():
    v = SH.ShiftView(parse("prefix(1;100000000000*(k+1))"))
    with pytest.warns(LeftInvertibilityWarning):
        SH.cauchy_dual(v, k_max=5)


def test_cauchy_dual_quiet_for_bergman():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        SH.cauchy_dual(K.make("bergman").shift)


def test_thm24_family_at_one_is_the_reciprocal():
    a = parse("(k+1)^2")
    assert SH.thm24_family(SH.ShiftView(a), 1) == recip(a)
    out = SH.thm24_family_check(SH.ShiftView(a), [Fraction(1, 2), 1, 2], 30)
    # t(k+1)^2 + 1 - t has real roots iff t >= 1; for t = 1/2 the roots are -1 +- i
    assert [v.ok for _, v in out] == [False, True, True]
    assert M.decide_reciprocal_polynomial([1, 1, Fraction(1, 2)]).kind == "never-moment"


def test_thm24_family_domain_error():
    with pytest.raises(DomainError):
        SH.thm24_family_check(SH.ShiftView(parse("prefix(1/2;k+1)")), [3], 10)


def test_analyze_report_shape():
    rep = SH.analyze(K.make("bergman").shift, 20)
    assert rep["subnormal"] == {"result": "pass", "order": 20}
    assert rep["completely_hyperexpansive"]["result"] == "fail"
    assert rep["mode"] == "exact"
    assert rep["witnesses"][0]["check"] == "completely_hyperexpansive"
    rep = SH.analyze(SH.ShiftView(parse("recip(k+1)")), 20)
    assert rep["subnormal"]["result"] == "not-applicable"
    assert rep["completely_hyperexpansive"]["result"] == "pass"


@settings(max_examples=40, deadline=None)
@given(st.lists(pos_rat, min_size=1, max_size=3))
def test_dual_weights_are_reciprocal(coeffs):
    v = SH.ShiftView(poly([1] + coeffs))
    w = SH.weights_squared(v, 6)
    wd = SH.weights_squared(SH.cauchy_dual(v, k_max=6, floor=0), 6)
    assert [x * y for x, y in zip(w, wd)] == [1] * 7


# -- kernel catalog and algebra ------------------------------------------------


def test_catalog_coefficients():
    assert values(K.szego().coeffs, 3) == [1, 1, 1]
    assert values(K.k_r(2).coeffs, 3) == [1, Fraction(3, 2), 2]
    assert values(K.k_st(1, 2).coeffs, 3) == [1, 3, 6]
    assert values(K.k_lm(3, 1).coeffs, 3) == [1, 3, 6]
    assert values(K.k_p(2).coeffs, 3) == [1, 4, 9]
    assert values(K.k_ex23(2, 5).coeffs, 5) == [1, 2, 4, 5, 5]


@pytest.mark.parametrize("text,label", [
    ("szego", "szego"), ("bergman", "Kr(1)"), ("Kr(1)", "Kr(1)"), ("Kst(1,2)", "Kst(1,2)"),
    ("Klm(5/2,3/2)", "Klm(5/2,3/2)"), ("Kp(0.5)", "Kp(1/2)"), ("Kex23(2,3)", "Kex23(2,3)"),
    ("expr:k+1", "expr:1+k"),
])
def test_parse_kernel(text, label):
    assert K.parse_kernel(text).label() == label


@pytest.mark.parametrize("text,exc", [
    ("Kq(1)", UnknownKernel), ("Kr(1,2)", ValueError), ("Kr(-1)", ValueError),
    ("Kr(x)", ParseError), ("expr:k+", ParseError), ("%%", UnknownKernel),
])
def test_parse_kernel_errors(text, exc):
    with pytest.raises(exc):
        K.parse_kernel(text)


def test_products_of_kernels():
    szego = K.szego()
    assert values(K.product(szego, szego, 10).coeffs, 11) == [k + 1 for k in range(11)]
    b = K.make("bergman")
    want = [Fraction((k + 1) * (k + 2), 2) for k in range(8)]
    assert values(K.product(b, szego, 7).coeffs, 8) == want
    with pytest.raises(RangeError):
        values(K.product(b, szego, 7).coeffs, 9)


def test_sum_and_scale():
    s = K.kernel_sum(K.make("bergman"), K.make("bergman"))
    assert values(s.coeffs, 4) == values(K.scale(2, K.make("bergman")).coeffs, 4)
    with pytest.raises(ValueError):
        K.scale(0, K.szego())


def test_factorization_examples():
    f = K.thm22_factorization(1, 1, 2)
    assert (f.lhs, f.rhs) == (25, 16)
    assert f.identity_holds and f.inequality_holds
    f = K.thm22_factorization(3, 1, 2)
    assert (f.lhs, f.rhs) == (121, 144)
    assert not f.inequality_holds
    f = K.thm22_factorization(10, 1, 1)
    assert (f.lhs, f.rhs) == (441, 800)


@settings(max_examples=80, deadline=None)
@given(pos_rat, pos_rat, pos_rat)
def test_factorization_identity_and_discriminant(r, s, t):
    f = K.thm22_factorization(r, s, t)
    assert f.identity_holds
    assert f.inequality_holds == (f.discriminant >= 0)
    if f.inequality_holds:
        # the roots s', t' give back the coefficients of K_r + K_{s,t}
        with mpmath.workdps(40):
            d = mpmath.sqrt(mpmath.mpf(f.discriminant.numerator) / f.discriminant.denominator)
            rs = mpmath.mpf(f.root_sum.numerator) / f.root_sum.denominator
            sp, tp = (rs + d) / 2, (rs - d) / 2
            total = values(K.kernel_sum(K.k_r(r), K.k_st(s, t)).coeffs, 6)
            for k, v in enumerate(total):
                two_kst = 2 * (k + sp) * (k + tp) / (sp * tp)
                assert abs(two_kst - mpmath.mpf(v.numerator) / v.denominator) < 1e-30 * v


def test_constant_kernel_is_szego():
    assert K.szego().coeffs == const(1)
