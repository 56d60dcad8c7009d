"""Finite-difference tables and finite-order CM / CA verdicts.

All tables are computed over integers. On the exact path the sequence is
brought to a common denominator; on the approximate path every term is
rounded to a fixed-point grid, which makes the propagated rounding error of
row ``n`` provably at most ``2**n`` times the per-term error. An entry whose
magnitude is inside that bound (or inside ``sign_tolerance``) is reported as
:class:`Indeterminate` instead of being trusted for its sign.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

import mpmath

from . import backend
from .expr import DEFAULT_PRECISION, SeqExpr, is_exact, values

FINITE_ORDER_CAVEAT = (
    "finite-order evidence: PassUpTo(N) is evidence, not a proof of complete monotonicity; "
    "a Fail verdict carries an exact witness"
)

GUARD_BITS = 32


@dataclass(frozen=True)
class PassUpTo:
    order: int

    ok = True

    def to_json(self):
        return {"result": "pass", "order": self.order}


@dataclass(frozen=True)
class Fail:
    m: int
    n: int
    value: object

    ok = False

    def to_json(self):
        return {"result": "fail", "m": self.m, "n": self.n, "value": scalar_str(self.value)}


@dataclass(frozen=True)
class Indeterminate:
    m: int
    n: int
    magnitude: object

    ok = False

    def to_json(self):
        return {"result": "indeterminate", "m": self.m, "n": self.n,
                "magnitude": scalar_str(self.magnitude)}


Verdict = Union[PassUpTo, Fail, Indeterminate]


def scalar_str(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, int):
        return str(v)
    return mpmath.nstr(mpmath.mpf(v), 25)


@dataclass(frozen=True)
class _Fixed:
    ints: list
    scale: object  # int denominator (exact) or int 2**E (approx)
    thresholds: list
    exact: bool
    precision: Optional[int]

    def value(self, i):
        if self.exact:
            return Fraction(i, self.scale)
        with mpmath.workprec(self.precision + GUARD_BITS):
            return mpmath.mpf(i) / self.scale


def _fixed(e: SeqExpr, n_terms: int, max_order: int, precision, sign_tolerance) -> _Fixed:
    if is_exact(e):
        vals = values(e, n_terms)
        den = 1
        for v in vals:
            den = den * v.denominator // math.gcd(den, v.denominator)
        ints = [v.numerator * (den // v.denominator) for v in vals]
        return _Fixed(ints, den, [0] * (max_order + 1), True, None)

    prec = precision or DEFAULT_PRECISION
    vals = values(e, n_terms, prec + GUARD_BITS)
    with mpmath.workprec(prec + GUARD_BITS):
        top = max(vals)
        expo = prec - int(mpmath.floor(mpmath.log(top, 2))) - 1
        scale = 2**expo
        ints = [int(mpmath.nint(v * scale)) for v in vals]
        if sign_tolerance is None:
            tol = mpmath.mpf(2) ** (-(prec // 2))
        elif isinstance(sign_tolerance, Fraction):
            tol = mpmath.mpf(sign_tolerance.numerator) / sign_tolerance.denominator
        else:
            tol = mpmath.mpf(sign_tolerance)
        tol_units = int(mpmath.ceil(tol * scale))
    # two units per term cover the rounding to the grid plus evaluation error
    thresholds = [max(tol_units, 2 ** (n + 1)) for n in range(max_order + 1)]
    return _Fixed(ints, scale, thresholds, False, prec)


@dataclass(frozen=True)
class DiffTable:
    source: SeqExpr
    max_order: int
    entries: list = field(repr=False)
    mode: str
    precision: Optional[int] = None
    error_bounds: Optional[list] = field(default=None, repr=False)

    def __getitem__(self, nm):
        n, m = nm
        return self.entries[n][m]


def build_table(e: SeqExpr, max_order: int, precision: Optional[int] = None) -> DiffTable:
    """Full triangular table D[n][m] = Δ^n a_m for 0 <= n + m <= N."""
    if max_order < 1:
        raise ValueError("order must be at least 1")
    fx = _fixed(e, max_order + 1, max_order, precision, None)
    rows = backend.difference_table(fx.ints, max_order)
    entries = [[fx.value(v) for v in row] for row in rows]
    if fx.exact:
        return DiffTable(e, max_order, entries, "exact")
    bounds = [fx.value(2 ** (n + 1)) for n in range(max_order + 1)]
    return DiffTable(e, max_order, entries, "approx", fx.precision, bounds)


def _verdict(fx: _Fixed, fail, ambiguous, order) -> Verdict:
    if fail is not None:
        n, m, v = fail
        # report the alternating binomial sum, which carries the forbidden sign
        return Fail(m=m, n=n, value=fx.value(-v if n % 2 else v))
    if ambiguous is not None:
        n, m, v = ambiguous
        return Indeterminate(m=m, n=n, magnitude=abs(fx.value(v)))
    return PassUpTo(order)


def check_cm(e: SeqExpr, max_order: int, precision: Optional[int] = None,
             sign_tolerance=None) -> Verdict:
    """(-1)^n Δ^n a_m >= 0 for all n + m <= N; first violation in (n, m) order."""
    if max_order < 1:
        raise ValueError("order must be at least 1")
    fx = _fixed(e, max_order + 1, max_order, precision, sign_tolerance)
    fail, amb = backend.scan_signs(fx.ints, max_order, 0, 1, fx.thresholds)
    return _verdict(fx, fail, amb, max_order)


def check_ca(e: SeqExpr, max_order: int, precision: Optional[int] = None,
             sign_tolerance=None) -> Verdict:
    """(-1)^n Δ^n a_m <= 0 for 1 <= n, n + m <= N."""
    if max_order < 1:
        raise ValueError("order must be at least 1")
    fx = _fixed(e, max_order + 1, max_order, precision, sign_tolerance)
    fail, amb = backend.scan_signs(fx.ints, max_order, 1, -1, fx.thresholds)
    return _verdict(fx, fail, amb, max_order)


def check_ca_via_delta(e: SeqExpr, max_order: int, precision: Optional[int] = None,
                       sign_tolerance=None) -> Verdict:
    """CA through the equivalent statement "Δa is CM", tested to order N - 1.

    Witness coordinates refer to the difference sequence, i.e. a failure at
    (n, m) here is the CA failure at (n + 1, m) of the original sequence.
    """
    if max_order < 2:
        raise ValueError("order must be at least 2")
    fx = _fixed(e, max_order + 1, max_order, precision, sign_tolerance)
    delta = [fx.ints[k + 1] - fx.ints[k] for k in range(max_order)]
    fail, amb = backend.scan_signs(delta, max_order - 1, 0, 1, fx.thresholds[1:])
    return _verdict(fx, fail, amb, max_order - 1)
