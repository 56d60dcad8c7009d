"""Weighted-shift view of a diagonal kernel.

The multiplication operator on a diagonal space with coefficients ``a_k`` is
the weighted shift with squared weights ``a_k / a_{k+1}``. Every test here is
phrased on coefficient ratios, so no square root is ever taken and exact
inputs give exact answers.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

from . import differences as D
from .errors import ContractionError, LeftInvertibilityWarning
from .expr import SeqExpr, add, as_scalar, const, is_exact, recip, render, scalar_mul, values

LEFT_INVERTIBILITY_FLOOR = 1e-9


@dataclass(frozen=True)
class ShiftView:
    coeffs: SeqExpr

    def weights_squared(self, k_max: int, precision: Optional[int] = None) -> list:
        return weights_squared(self, k_max, precision)


def weights_squared(v: ShiftView, k_max: int, precision: Optional[int] = None) -> list:
    """Return ``[a_0/a_1, ..., a_{k_max}/a_{k_max+1}]``."""
    a = values(v.coeffs, k_max + 2, precision)
    return [a[k] / a[k + 1] for k in range(k_max + 1)]


def is_contraction(v: ShiftView, k_max: int, precision: Optional[int] = None) -> D.Verdict:
    """Pass iff ``a_k <= a_{k+1}`` for all ``k <= k_max``.

    A failure is reported as ``Fail(m=k, n=1, value=a_{k+1} - a_k)``.
    """
    a = values(v.coeffs, k_max + 2, precision)
    for k in range(k_max + 1):
        if a[k + 1] < a[k]:
            return D.Fail(m=k, n=1, value=a[k + 1] - a[k])
    return D.PassUpTo(k_max)


def is_hyponormal(v: ShiftView, k_max: int, precision: Optional[int] = None) -> D.Verdict:
    """Pass iff the weights are nondecreasing, i.e. ``a_k a_{k+2} <= a_{k+1}^2``.

    A failure is reported as ``Fail(m=k, n=2, value=a_{k+1}^2 - a_k a_{k+2})``.
    """
    a = values(v.coeffs, k_max + 3, precision)
    for k in range(k_max + 1):
        gap = a[k + 1] * a[k + 1] - a[k] * a[k + 2]
        if gap < 0:
            return D.Fail(m=k, n=2, value=gap)
    return D.PassUpTo(k_max)


def is_subnormal_contraction(v: ShiftView, order: int, precision: Optional[int] = None,
                             sign_tolerance=None) -> D.Verdict:
    """Finite-order test that ``1/a_k`` is completely monotone.

    Raises
    ------
    ContractionError
        If the shift is not a contraction on ``[0, order]``; the moment
        criterion only applies to contractions.
    """
    c = is_contraction(v, order, precision)
    if not c.ok:
        raise ContractionError(f"not a contraction: a_{c.m + 1} < a_{c.m}")
    return D.check_cm(recip(v.coeffs), order, precision, sign_tolerance)


def is_completely_hyperexpansive(v: ShiftView, order: int, precision: Optional[int] = None,
                                 sign_tolerance=None) -> D.Verdict:
    """Finite-order test that ``1/a_k`` is completely alternating."""
    return D.check_ca(recip(v.coeffs), order, precision, sign_tolerance)


def cauchy_dual(v: ShiftView, k_max: int = 50, floor: float = LEFT_INVERTIBILITY_FLOOR,
                precision: Optional[int] = None) -> ShiftView:
    """Shift with reciprocal coefficients.

    Left invertibility has no finite certificate; as a proxy the squared
    weights on ``[0, k_max]`` must stay above ``floor``, otherwise a
    :class:`LeftInvertibilityWarning` is issued.
    """
    w = weights_squared(v, k_max, precision)
    low = min(w)
    if low < floor:
        warnings.warn(f"squared weight {float(low):.3g} below {floor:g}; "
                      "left invertibility is doubtful", LeftInvertibilityWarning, stacklevel=2)
    return ShiftView(recip(v.coeffs))


def thm24_family(v: ShiftView, t) -> SeqExpr:
    """The sequence ``1/(t(a_k - 1) + 1)``, i.e. the reciprocal of ``t a_k + (1 - t)``."""
    t = as_scalar(t)
    if not t > 0:
        raise ValueError("t must be positive")
    return recip(add(scalar_mul(t, v.coeffs), const(1 - t)))


def thm24_family_check(v: ShiftView, t_values: Sequence, order: int,
                       precision: Optional[int] = None) -> list:
    """Run ``check_cm`` on ``1/(t(a_k - 1) + 1)`` for each ``t``.

    Returns a list of ``(t, verdict)`` pairs. ``DomainError`` is raised if
    ``t(a_k - 1) + 1`` is not positive on the tested range.
    """
    return [(as_scalar(t), D.check_cm(thm24_family(v, t), order, precision))
            for t in t_values]


def _verdict_entry(name: str, seq: SeqExpr, verdict: D.Verdict, witnesses: list) -> dict:
    out = verdict.to_json()
    if not verdict.ok:
        witnesses.append({"check": name, "sequence": render(seq), **out})
    return out


def analyze(v: ShiftView, order: int = 30, precision: Optional[int] = None) -> dict:
    """Full shift-analysis report as a JSON-ready dict."""
    witnesses: list = []
    contraction = is_contraction(v, order, precision)
    report = {
        "spec": render(v.coeffs),
        "order": order,
        "contraction": _verdict_entry("contraction", v.coeffs, contraction, witnesses),
        "hyponormal": _verdict_entry("hyponormal", v.coeffs,
                                     is_hyponormal(v, order, precision), witnesses),
    }
    rv = recip(v.coeffs)
    if contraction.ok:
        report["subnormal"] = _verdict_entry(
            "subnormal", rv, D.check_cm(rv, order, precision), witnesses)
    else:
        report["subnormal"] = {"result": "not-applicable",
                               "reason": "the moment criterion needs a contraction"}
    report["completely_hyperexpansive"] = _verdict_entry(
        "completely_hyperexpansive", rv, D.check_ca(rv, order, precision), witnesses)
    report["witnesses"] = witnesses
    report["caveat"] = D.FINITE_ORDER_CAVEAT
    report["mode"] = "exact" if is_exact(v.coeffs) else "approx"
    return report
