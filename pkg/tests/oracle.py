"""Independent reference implementations used to pin expected values.

Nothing here calls the package's evaluator or difference engine: terms are
computed one ``k`` at a time straight from the node definitions, and
alternating sums straight from the binomial formula.
"""

from fractions import Fraction
from math import comb

import mpmath

from momentkit import expr as E


def _mp(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def term(e, k, exact=True):
    """``a_k`` by direct recursion; ``exact=False`` uses the current mpmath precision."""
    num = (lambda x: x) if exact else _mp
    if isinstance(e, E.Const):
        return num(e.value)
    if isinstance(e, E.PolyK):
        return sum((num(c) * k**i for i, c in enumerate(e.coeffs)), num(Fraction(0)))
    if isinstance(e, E.PochRatio):
        v = num(Fraction(1))
        for j in range(k):
            v = v * (num(e.lam) + j) / (num(e.mu) + j)
        return v
    if isinstance(e, E.PowerKPlus1):
        if exact:
            assert Fraction(e.p).denominator == 1
            return Fraction(k + 1) ** int(e.p)
        return mpmath.power(k + 1, _mp(e.p))
    if isinstance(e, E.Sum):
        return sum((term(t, k, exact) for t in e.terms[1:]), term(e.terms[0], k, exact))
    if isinstance(e, E.Product):
        v = term(e.factors[0], k, exact)
        for f in e.factors[1:]:
            v = v * term(f, k, exact)
        return v
    if isinstance(e, E.Recip):
        return 1 / term(e.arg, k, exact)
    if isinstance(e, E.ScalarMul):
        return num(e.c) * term(e.arg, k, exact)
    if isinstance(e, E.PrefixTail):
        if k < len(e.prefix):
            return num(e.prefix[k])
        return term(e.tail, k, exact)
    raise TypeError(e)


def seq(e, n, exact=True):
    return [term(e, k, exact) for k in range(n)]


def alt_sum(a, n, m):
    """``sum_j (-1)^j C(n, j) a_{m+j}``, which equals ``(-1)^n Δ^n a_m``."""
    return sum(((-1) ** j * comb(n, j) * a[m + j] for j in range(1, n + 1)), a[m] * 1)


def first_cm_failure(a, order):
    """Lexicographic ``(n, m, value)`` of the first negative alternating sum, or None."""
    for n in range(order + 1):
        for m in range(order - n + 1):
            v = alt_sum(a, n, m)
            if v < 0:
                return n, m, v
    return None


def first_ca_failure(a, order):
    """Lexicographic ``(n, m, value)`` of the first positive alternating sum with n >= 1."""
    for n in range(1, order + 1):
        for m in range(order - n + 1):
            v = alt_sum(a, n, m)
            if v > 0:
                return n, m, v
    return None
