"""Coefficient-sequence expressions.

A :class:`SeqExpr` describes a sequence ``a_k`` (k = 0, 1, 2, ...). Nodes are
immutable and hashable. The smart constructors (:func:`add`, :func:`mul`,
:func:`recip`, :func:`scalar_mul`, :func:`power`, :func:`poly`) perform the
constant folding that keeps parsed expressions in a canonical form, so that
``parse(render(parse(s))) == parse(s)``.

Scalars are :class:`fractions.Fraction` on the exact path and
:class:`mpmath.mpf` on the approximate path. An expression is evaluated
exactly iff every parameter is rational and every ``pow`` exponent is an
integer; otherwise the whole evaluation runs in binary floating point at the
requested precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import mpmath

from .errors import DomainError, RangeError

DEFAULT_PRECISION = 128

Scalar = Union[Fraction, mpmath.mpf]


def as_scalar(x) -> Scalar:
    """Coerce user input to a Scalar; floats and decimal strings stay exact."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, mpmath.mpf):
        return x
    raise TypeError(f"cannot use {type(x).__name__} as a scalar")


def is_rational(x) -> bool:
    return isinstance(x, Fraction)


# --------------------------------------------------------------------------
# AST nodes
# --------------------------------------------------------------------------


class SeqExpr:
    __slots__ = ()


@dataclass(frozen=True)
class Const(SeqExpr):
    value: Scalar


@dataclass(frozen=True)
class PolyK(SeqExpr):
    """c_0 + c_1 k + ... + c_d k^d."""

    coeffs: tuple


@dataclass(frozen=True)
class PochRatio(SeqExpr):
    """(lam)_k / (mu)_k."""

    lam: Scalar
    mu: Scalar


@dataclass(frozen=True)
class PowerKPlus1(SeqExpr):
    """(k + 1)^p."""

    p: Scalar


@dataclass(frozen=True)
class Sum(SeqExpr):
    terms: tuple


@dataclass(frozen=True)
class Product(SeqExpr):
    factors: tuple


@dataclass(frozen=True)
class Recip(SeqExpr):
    arg: SeqExpr


@dataclass(frozen=True)
class ScalarMul(SeqExpr):
    c: Scalar
    arg: SeqExpr


@dataclass(frozen=True)
class PrefixTail(SeqExpr):
    """prefix[k] for k < len(prefix), else tail at k.

    ``tail=None`` marks a materialized finite prefix; asking for a term past
    it raises :class:`RangeError`.
    """

    prefix: tuple
    tail: Optional[SeqExpr]


# --------------------------------------------------------------------------
# polynomial helpers (tuples of scalars, lowest degree first)
# --------------------------------------------------------------------------


def _ptrim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _padd(a, b):
    n = max(len(a), len(b))
    return _ptrim(
        (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
    )


def _pmul(a, b):
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _ptrim(out)


def _poly_of(e):
    """Coefficient tuple if e is polynomial-like, else None."""
    if isinstance(e, Const):
        return _ptrim((e.value,))
    if isinstance(e, PolyK):
        return e.coeffs
    if isinstance(e, ScalarMul) and isinstance(e.arg, (Const, PolyK)):
        return tuple(e.c * x for x in _poly_of(e.arg))
    return None


def _is_monomial(coeffs):
    return sum(1 for x in coeffs if x != 0) <= 1


# --------------------------------------------------------------------------
# smart constructors
# --------------------------------------------------------------------------


def const(c) -> SeqExpr:
    return Const(as_scalar(c))


def poly(coeffs: Sequence) -> SeqExpr:
    c = _ptrim(as_scalar(x) for x in coeffs)
    if len(c) == 0:
        return Const(Fraction(0))
    if len(c) == 1:
        return Const(c[0])
    return PolyK(c)


def k_var() -> SeqExpr:
    return PolyK((Fraction(0), Fraction(1)))


def poch(lam, mu) -> SeqExpr:
    lam, mu = as_scalar(lam), as_scalar(mu)
    if not (lam > 0 and mu > 0):
        raise ValueError("Pochhammer parameters must be positive")
    return PochRatio(lam, mu)


def pow_k1(p) -> SeqExpr:
    p = as_scalar(p)
    if p == 0:
        return Const(Fraction(1))
    return PowerKPlus1(p)


def prefix_tail(prefix: Sequence, tail: Optional[SeqExpr]) -> SeqExpr:
    return PrefixTail(tuple(as_scalar(x) for x in prefix), tail)


def scalar_mul(c, e: SeqExpr) -> SeqExpr:
    c = as_scalar(c)
    if c == 1:
        return e
    if isinstance(e, Const):
        return Const(c * e.value)
    if isinstance(e, ScalarMul):
        return scalar_mul(c * e.c, e.arg)
    if c == 0:
        return Const(Fraction(0))
    if isinstance(e, PolyK) and _is_monomial(e.coeffs):
        return poly([c * x for x in e.coeffs])
    if isinstance(e, Product):
        return mul(Const(c), e)
    return ScalarMul(c, e)


def add(*terms: SeqExpr) -> SeqExpr:
    flat = []
    for t in terms:
        if isinstance(t, Sum):
            flat.extend(t.terms)
        else:
            flat.append(t)
    flat = [t for t in flat if not (isinstance(t, Const) and t.value == 0)]
    polys = [i for i, t in enumerate(flat) if _poly_of(t) is not None]
    if len(polys) >= 2:
        acc = ()
        for i in polys:
            acc = _padd(acc, _poly_of(flat[i]))
        folded = poly(acc)
        out = []
        for i, t in enumerate(flat):
            if i == polys[0]:
                if not (isinstance(folded, Const) and folded.value == 0):
                    out.append(folded)
            elif i not in polys:
                out.append(t)
        flat = out
    if not flat:
        return Const(Fraction(0))
    if len(flat) == 1:
        return flat[0]
    return Sum(tuple(flat))


def mul(*factors: SeqExpr) -> SeqExpr:
    c = Fraction(1)
    flat = []
    stack = list(reversed(factors))
    while stack:
        f = stack.pop()
        # scalars are pulled out before flattening so scaled products flatten too
        while isinstance(f, ScalarMul):
            c = c * f.c
            f = f.arg
        if isinstance(f, Product):
            stack.extend(reversed(f.factors))
        else:
            flat.append(f)
    pcoeffs = None
    pexp = None
    others = []
    for f in flat:
        if isinstance(f, Const):
            c = c * f.value
        elif isinstance(f, PolyK):
            pcoeffs = f.coeffs if pcoeffs is None else _pmul(pcoeffs, f.coeffs)
        elif isinstance(f, PowerKPlus1):
            pexp = f.p if pexp is None else pexp + f.p
        else:
            others.append(f)
    core = []
    if pcoeffs is not None:
        core.append(poly(pcoeffs))
    if pexp is not None and pexp != 0:
        core.append(PowerKPlus1(pexp))
    core.extend(others)
    if not core:
        return Const(c)
    if len(core) == 1:
        return scalar_mul(c, core[0])
    if isinstance(core[0], (PolyK, Const)) and c != 1:
        # the scalar lives inside the polynomial factor when one is present
        core[0] = poly([c * x for x in _poly_of(core[0])])
        c = Fraction(1)
    if c == 0:
        return Const(Fraction(0))
    return Product(tuple(core)) if c == 1 else ScalarMul(c, Product(tuple(core)))


def recip(e: SeqExpr) -> SeqExpr:
    if isinstance(e, Recip):
        return e.arg
    if isinstance(e, Const):
        if e.value == 0:
            raise DomainError(0, "reciprocal of the zero constant")
        return Const(1 / e.value)
    if isinstance(e, PochRatio):
        return PochRatio(e.mu, e.lam)
    if isinstance(e, PowerKPlus1):
        return PowerKPlus1(-e.p)
    if isinstance(e, ScalarMul):
        return scalar_mul(1 / e.c, recip(e.arg))
    return Recip(e)


def power(e: SeqExpr, n: int) -> SeqExpr:
    if n < 0:
        return recip(power(e, -n))
    if n == 0:
        return Const(Fraction(1))
    if isinstance(e, Const):
        return Const(e.value**n)
    if isinstance(e, PolyK):
        acc = (Fraction(1),)
        for _ in range(n):
            acc = _pmul(acc, e.coeffs)
        return poly(acc)
    if isinstance(e, PowerKPlus1):
        return pow_k1(e.p * n)
    return mul(*([e] * n))


def neg(e: SeqExpr) -> SeqExpr:
    return scalar_mul(-1, e)


def sub(a: SeqExpr, b: SeqExpr) -> SeqExpr:
    return add(a, neg(b))


def poly_coeffs(e: SeqExpr):
    """Coefficients if e is a polynomial in k (possibly scaled), else None."""
    return _poly_of(e)


# --------------------------------------------------------------------------
# evaluation
# --------------------------------------------------------------------------


def _scalars(e):
    if isinstance(e, Const):
        yield e.value
    elif isinstance(e, PolyK):
        yield from e.coeffs
    elif isinstance(e, PochRatio):
        yield e.lam
        yield e.mu
    elif isinstance(e, PowerKPlus1):
        yield e.p
    elif isinstance(e, (Sum, Product)):
        for c in e.terms if isinstance(e, Sum) else e.factors:
            yield from _scalars(c)
    elif isinstance(e, Recip):
        yield from _scalars(e.arg)
    elif isinstance(e, ScalarMul):
        yield e.c
        yield from _scalars(e.arg)
    elif isinstance(e, PrefixTail):
        yield from e.prefix
        if e.tail is not None:
            yield from _scalars(e.tail)


def _has_fractional_power(e):
    if isinstance(e, PowerKPlus1):
        return not (isinstance(e.p, Fraction) and e.p.denominator == 1)
    children = ()
    if isinstance(e, Sum):
        children = e.terms
    elif isinstance(e, Product):
        children = e.factors
    elif isinstance(e, (Recip, ScalarMul)):
        children = (e.arg,)
    elif isinstance(e, PrefixTail) and e.tail is not None:
        children = (e.tail,)
    return any(_has_fractional_power(c) for c in children)


def is_exact(e: SeqExpr) -> bool:
    """True iff e evaluates in exact rational arithmetic."""
    return all(is_rational(s) for s in _scalars(e)) and not _has_fractional_power(e)


class _Exact:
    def num(self, x):
        return x

    def pow(self, base: int, p):
        return Fraction(base) ** int(p)


class _Approx:
    def num(self, x):
        if isinstance(x, Fraction):
            return mpmath.mpf(x.numerator) / x.denominator
        return mpmath.mpf(x)

    def pow(self, base: int, p):
        return mpmath.power(mpmath.mpf(base), self.num(p))


def _seq(e, n, ar, k0=0):
    """Values of e at k = k0, ..., n - 1."""
    if isinstance(e, Const):
        v = ar.num(e.value)
        return [v] * (n - k0)
    if isinstance(e, PolyK):
        cs = [ar.num(c) for c in e.coeffs]
        out = []
        for k in range(k0, n):
            acc = cs[-1]
            for c in reversed(cs[:-1]):
                acc = acc * k + c
            out.append(acc)
        return out
    if isinstance(e, PochRatio):
        lam, mu = ar.num(e.lam), ar.num(e.mu)
        out = []
        v = ar.num(Fraction(1))
        for k in range(n):
            if k >= k0:
                out.append(v)
            v = v * (lam + k) / (mu + k)
        return out
    if isinstance(e, PowerKPlus1):
        return [ar.pow(k + 1, e.p) for k in range(k0, n)]
    if isinstance(e, Sum):
        parts = [_seq(t, n, ar, k0) for t in e.terms]
        return [sum(vals[1:], vals[0]) for vals in zip(*parts)]
    if isinstance(e, Product):
        parts = [_seq(f, n, ar, k0) for f in e.factors]
        out = []
        for vals in zip(*parts):
            acc = vals[0]
            for v in vals[1:]:
                acc = acc * v
            out.append(acc)
        return out
    if isinstance(e, Recip):
        inner = _seq(e.arg, n, ar, k0)
        for i, v in enumerate(inner):
            if not v > 0:
                raise DomainError(k0 + i, f"non-positive value {v} under recip")
        return [1 / v for v in inner]
    if isinstance(e, ScalarMul):
        c = ar.num(e.c)
        return [c * v for v in _seq(e.arg, n, ar, k0)]
    if isinstance(e, PrefixTail):
        m = len(e.prefix)
        head = [ar.num(e.prefix[k]) for k in range(k0, min(n, m))]
        if n <= m:
            return head
        if e.tail is None:
            raise RangeError(f"sequence materialized only for k < {m}")
        return head + _seq(e.tail, n, ar, max(k0, m))
    raise TypeError(f"not a SeqExpr: {e!r}")


def values(e: SeqExpr, n: int, precision: Optional[int] = None, check: bool = True):
    """Return [a_0, ..., a_{n-1}].

    Exact Fractions when :func:`is_exact` allows, otherwise mpf values
    computed at ``precision`` bits (default 128). With ``check`` every value
    must be strictly positive (it is a kernel coefficient).
    """
    if is_exact(e):
        out = _seq(e, n, _Exact())
    else:
        with mpmath.workprec(precision or DEFAULT_PRECISION):
            out = _seq(e, n, _Approx())
    if check:
        for k, v in enumerate(out):
            if not v > 0:
                raise DomainError(k, f"coefficient {v} is not positive")
    return out


def evaluate(e: SeqExpr, k: int, precision: Optional[int] = None, check: bool = True):
    if k < 0:
        raise ValueError("k must be non-negative")
    v = values(e, k + 1, precision, check=False)[k]
    if check and not v > 0:
        raise DomainError(k, f"coefficient {v} is not positive")
    return v


# --------------------------------------------------------------------------
# rendering
# --------------------------------------------------------------------------


def _num(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    return mpmath.nstr(x, 40, strip_zeros=True)


def _neg_form(e):
    """Return the positive counterpart if e renders with a leading minus."""
    if isinstance(e, Const) and e.value < 0:
        return Const(-e.value)
    if isinstance(e, ScalarMul) and e.c < 0:
        return scalar_mul(-e.c, e.arg)
    if isinstance(e, PolyK) and len(e.coeffs) > 0:
        nz = [c for c in e.coeffs if c != 0]
        if len(nz) == 1 and nz[0] < 0:
            return poly([-c for c in e.coeffs])
    return None


def _poly_terms(coeffs):
    """Signed monomial strings, lowest degree first."""
    out = []
    for d, c in enumerate(coeffs):
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = -c if c < 0 else c
        if d == 0:
            body = _num(a)
        else:
            var = "k" if d == 1 else f"k^{d}"
            body = var if a == 1 else f"{_num(a)}*{var}"
        out.append((sign, body))
    return out


def _join(signed):
    s = ""
    for i, (sign, body) in enumerate(signed):
        if i == 0:
            s = body if sign == "+" else "0-" + body
        else:
            s += sign + body
    return s


def _signed_terms(e):
    if isinstance(e, Sum):
        out = []
        for t in e.terms:
            out.extend(_signed_terms(t))
        return out
    if isinstance(e, PolyK):
        return _poly_terms(e.coeffs)
    pos = _neg_form(e)
    if pos is not None:
        return [("-", _render_term(pos))]
    return [("+", _render_term(e))]


def _render_term(e):
    if isinstance(e, ScalarMul):
        inner = e.arg
        body = (
            "*".join(_render_factor(f) for f in inner.factors)
            if isinstance(inner, Product)
            else _render_factor(inner)
        )
        return f"{_num(e.c)}*{body}"
    if isinstance(e, Product):
        return "*".join(_render_factor(f) for f in e.factors)
    if isinstance(e, PolyK) and len(_poly_terms(e.coeffs)) == 1:
        return _poly_terms(e.coeffs)[0][1]
    return _render_factor(e)


def _render_factor(e):
    if isinstance(e, Const):
        return _num(e.value) if e.value >= 0 else f"({render(e)})"
    if isinstance(e, PolyK):
        terms = _poly_terms(e.coeffs)
        if len(terms) == 1 and terms[0][0] == "+":
            return terms[0][1]
        return f"({render(e)})"
    if isinstance(e, PochRatio):
        return f"poch({_num(e.lam)},{_num(e.mu)})"
    if isinstance(e, PowerKPlus1):
        if e.p < 0:
            return f"recip(pow({_num(-e.p)}))"
        return f"pow({_num(e.p)})"
    if isinstance(e, Recip):
        return f"recip({render(e.arg)})"
    if isinstance(e, PrefixTail):
        head = ",".join(_num(x) for x in e.prefix)
        tail = "" if e.tail is None else render(e.tail)
        return f"prefix({head};{tail})"
    return f"({render(e)})"


def render(e: SeqExpr) -> str:
    """Canonical text form; re-parses to the same AST."""
    return _join(_signed_terms(e))
