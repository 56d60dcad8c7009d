"""Spherically balanced kernels on the unit ball of C^d.

Such a kernel is described by a slice representation: a Reinhardt measure
on the sphere, seen through its monomial norms ``||z^α||^2``, together with a
one-variable sequence ``γ²_k``. The monomial norm in the space is
``scale * γ²_|α| * norm_sq(α)``. Every diagonal test on the ball factors
through ``γ²``.
"""

from __future__ import annotations

import itertools
import json
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import differences as D
from .errors import IncompatibleMeasures, LeftInvertibilityWarning
from .expr import SeqExpr, add, as_scalar, const, poch, recip, render, scalar_mul, values

MIN_DIM, MAX_DIM = 2, 6
COMPAT_DEGREE = 8
COMPAT_TOL = 1e-12


class MultiIndex(tuple):
    """Tuple of non-negative integers ``(α_1, ..., α_d)``."""

    def __new__(cls, components):
        comps = tuple(int(a) for a in components)
        if any(a < 0 for a in comps) or not comps:
            raise ValueError("multi-index components must be non-negative")
        return super().__new__(cls, comps)

    @property
    def order(self) -> int:
        return sum(self)

    def bump(self, i: int) -> "MultiIndex":
        return MultiIndex(a + (j == i) for j, a in enumerate(self))


def multi_indices(d: int, order: int):
    """All multi-indices of dimension ``d`` with ``|α| = order``."""
    for cut in itertools.combinations(range(order + d - 1), d - 1):
        prev, comps = -1, []
        for c in cut:
            comps.append(c - prev - 1)
            prev = c
        comps.append(order + d - 2 - prev)
        yield MultiIndex(comps)


@dataclass(frozen=True)
class ReinhardtNorms:
    """Monomial norms ``||z^α||^2`` of a Reinhardt measure on the sphere.

    Without a table the normalized surface measure is used, for which
    ``||z^α||^2 = (d-1)! α! / (d-1+|α|)!``.
    """

    d: int
    table: Optional[tuple] = field(default=None, compare=True)

    def __post_init__(self):
        if not MIN_DIM <= self.d <= MAX_DIM:
            raise ValueError(f"dimension must be in {MIN_DIM}..{MAX_DIM}")

    @property
    def provenance(self) -> str:
        return "builtin-surface" if self.table is None else "user-table"

    def norm_sq(self, alpha) -> Fraction:
        alpha = MultiIndex(alpha)
        if len(alpha) != self.d:
            raise ValueError(f"expected a {self.d}-index, got {alpha}")
        if self.table is None:
            num = math.factorial(self.d - 1) * math.prod(math.factorial(a) for a in alpha)
            return Fraction(num, math.factorial(self.d - 1 + alpha.order))
        try:
            return dict(self.table)[alpha]
        except KeyError:
            raise KeyError(f"norm table has no entry for {','.join(map(str, alpha))}") from None

    def partition_defect(self, alpha):
        """``Σ_i ||z^(α+e_i)||^2 - ||z^α||^2``, zero for a Reinhardt measure."""
        alpha = MultiIndex(alpha)
        return sum(self.norm_sq(alpha.bump(i)) for i in range(self.d)) - self.norm_sq(alpha)

    @classmethod
    def from_json(cls, d: int, text: str) -> "ReinhardtNorms":
        """Read a ``{"a1,...,ad": "p/q"}`` map and check the partition of unity.

        Every entry whose ``d`` successors are also present must satisfy the
        identity exactly; at least one such entry is required.
        """
        raw = json.loads(text)
        table = {}
        for key, val in raw.items():
            alpha = MultiIndex(key.split(","))
            if len(alpha) != d:
                raise ValueError(f"index {key!r} is not {d}-dimensional")
            v = as_scalar(val)
            if not v > 0:
                raise ValueError(f"norm for {key!r} must be positive")
            table[alpha] = v
        norms = cls(d, tuple(sorted(table.items())))
        checked = 0
        for alpha in table:
            if all(alpha.bump(i) in table for i in range(d)):
                if norms.partition_defect(alpha) != 0:
                    raise ValueError(f"partition of unity fails at {alpha}")
                checked += 1
        if not checked:
            raise ValueError("norm table too small to validate")
        return norms


@dataclass(frozen=True)
class SliceRep:
    norms: ReinhardtNorms
    gamma_sq: SeqExpr
    scale: Fraction = Fraction(1)

    @property
    def d(self) -> int:
        return self.norms.d


def bn_diagonal(s: SliceRep, n: int, alpha) -> Fraction:
    """``<B_n z^α, z^α> = Σ_k (-1)^k C(n,k) γ²_(k+|α|) ||z^α||^2`` (times ``scale``).

    ``B_n`` is the alternating sum ``Σ_k (-1)^k C(n,k) Q^k(I)`` of powers of
    ``Q(X) = Σ T_i* X T_i``; ``n = 1`` gives ``<(I - Q(I)) z^α, z^α>``.
    """
    alpha = MultiIndex(alpha)
    g = values(s.gamma_sq, alpha.order + n + 1)
    acc = sum((-1) ** k * math.comb(n, k) * g[alpha.order + k] for k in range(n + 1))
    return acc * s.norms.norm_sq(alpha) * s.scale


def q_minus_identity(s: SliceRep, alpha) -> Fraction:
    """``<(Q(I) - I) z^α, z^α>``, the sign-flipped ``n = 1`` case."""
    return -bn_diagonal(s, 1, alpha)


def is_spherical_contraction(s: SliceRep, order: int) -> D.Verdict:
    """Pass iff ``γ²_(k+1) <= γ²_k`` for ``k <= order``.

    A failure is ``Fail(m=k, n=1, value=γ²_k - γ²_(k+1))``.
    """
    g = values(s.gamma_sq, order + 2)
    for k in range(order + 1):
        if g[k + 1] > g[k]:
            return D.Fail(m=k, n=1, value=g[k] - g[k + 1])
    return D.PassUpTo(order)


def measure_ratio(n1: ReinhardtNorms, n2: ReinhardtNorms, degree: int = COMPAT_DEGREE):
    """The constant ``c²`` with ``norm1 = c² norm2`` on ``|α| <= degree``.

    Raises
    ------
    IncompatibleMeasures
        If the dimensions differ or the ratio is not constant to ``1e-12``.
    """
    if n1.d != n2.d:
        raise IncompatibleMeasures(f"dimensions differ: {n1.d} and {n2.d}")
    if n1 == n2:
        return Fraction(1)
    ratio = None
    for order in range(degree + 1):
        for alpha in multi_indices(n1.d, order):
            try:
                r = n1.norm_sq(alpha) / n2.norm_sq(alpha)
            except KeyError:
                continue
            if ratio is None:
                ratio = r
            elif abs(r - ratio) > COMPAT_TOL * abs(ratio):
                raise IncompatibleMeasures(
                    f"norm ratio not constant: {ratio} at first sample, {r} at {alpha}")
    if ratio is None:
        raise IncompatibleMeasures("no common monomials to compare")
    return ratio


def combine_slices(s1: SliceRep, s2: SliceRep) -> SliceRep:
    """Slice representation of the kernel sum ``K_1 + K_2``.

    With equal measures and scales the result is ``γ² = 2 g1 g2/(g1 + g2)``
    with the scale halved. A constant measure ratio ``c²`` and unequal
    scales are folded into the harmonic mean first.
    """
    c2 = measure_ratio(s1.norms, s2.norms)
    w1 = s1.scale
    w2 = s2.scale / c2
    if w1 == w2:
        g1, g2, scale = s1.gamma_sq, s2.gamma_sq, w1 / 2
    else:
        g1, g2, scale = scalar_mul(w1, s1.gamma_sq), scalar_mul(w2, s2.gamma_sq), Fraction(1, 2)
    if g1 == g2:
        return SliceRep(s1.norms, g1, scale)
    combined = scalar_mul(2, recip(add(recip(g1), recip(g2))))
    return SliceRep(s1.norms, combined, scale)


def _inf_ratio(g: SeqExpr, k_max: int):
    v = values(g, k_max + 2)
    return min(v[k + 1] / v[k] for k in range(k_max + 1))


def spherical_cauchy_dual(s: SliceRep, k_max: int = 50, floor: float = 1e-9) -> SliceRep:
    """Replace ``γ²`` by its reciprocal; warns when ``inf γ²_(k+1)/γ²_k`` is below ``floor``."""
    low = _inf_ratio(s.gamma_sq, k_max)
    if low < floor:
        warnings.warn(f"inf of gamma ratios {float(low):.3g} below {floor:g}; "
                      "joint left invertibility is doubtful", LeftInvertibilityWarning,
                      stacklevel=2)
    return SliceRep(s.norms, recip(s.gamma_sq), s.scale)


def kernel_coefficient(s: SliceRep, alpha):
    """Coefficient ``a_α = 1/(scale γ²_|α| ||z^α||^2)`` of ``z^α conj(w)^α``."""
    alpha = MultiIndex(alpha)
    g = values(s.gamma_sq, alpha.order + 1)[alpha.order]
    return 1 / (s.scale * g * s.norms.norm_sq(alpha))


@dataclass(frozen=True)
class MembershipReport:
    left_invertible_evidence: bool
    dual_che_verdict: D.Verdict
    subnormal_contraction_verdict: D.Verdict

    @property
    def member(self) -> bool:
        return (self.left_invertible_evidence and self.dual_che_verdict.ok
                and self.subnormal_contraction_verdict.ok)

    def to_json(self) -> dict:
        return {"left_invertible_evidence": self.left_invertible_evidence,
                "dual_che": self.dual_che_verdict.to_json(),
                "subnormal_contraction": self.subnormal_contraction_verdict.to_json(),
                "member": self.member}


def class_Knu_membership(s: SliceRep, order: int, floor: float = 1e-9) -> MembershipReport:
    """Finite-order evidence for membership in the class ``K_ν``.

    Three parts: the left-invertibility proxy, complete alternation of
    ``1/γ²`` (the dual is a joint complete hyperexpansion), and complete
    monotonicity of ``γ²`` together with the spherical contraction test.
    """
    left = bool(_inf_ratio(s.gamma_sq, order) > floor)
    dual = D.check_ca(recip(s.gamma_sq), order)
    sub = D.check_cm(s.gamma_sq, order)
    if sub.ok:
        sub = is_spherical_contraction(s, order)
    return MembershipReport(left, dual, sub)


@dataclass(frozen=True)
class CombinedCheck:
    """Outcome of a kernel-sum check on the ball; ``verdict`` is the first failing part."""

    verdict: D.Verdict
    parts: dict
    combined: SliceRep
    notes: tuple = ()

    @property
    def ok(self) -> bool:
        return self.verdict.ok

    def to_json(self) -> dict:
        return {"verdict": self.verdict.to_json(),
                "parts": {k: v.to_json() for k, v in self.parts.items()},
                "combined_gamma_sq": render(self.combined.gamma_sq),
                "combined_scale": str(self.combined.scale),
                "notes": list(self.notes), "caveat": D.FINITE_ORDER_CAVEAT}


def _first_failure(parts: dict, order: int) -> D.Verdict:
    for v in parts.values():
        if not v.ok:
            return v
    return D.PassUpTo(order)


def thm37_check(s1: SliceRep, s2: SliceRep, order: int) -> CombinedCheck:
    """The sum of two ``K_ν`` kernels is a subnormal spherical contraction.

    Checks, on the combined slice: ``γ²`` completely monotone, the spherical
    contraction inequality, and ``1/γ²`` completely alternating.
    """
    notes = []
    for label, s in (("first", s1), ("second", s2)):
        if not class_Knu_membership(s, order).member:
            notes.append(f"{label} slice lacks class membership evidence")
    comb = combine_slices(s1, s2)
    parts = {
        "cm": D.check_cm(comb.gamma_sq, order),
        "spherical_contraction": is_spherical_contraction(comb, order),
        "reciprocal_ca": D.check_ca(recip(comb.gamma_sq), order),
    }
    return CombinedCheck(_first_failure(parts, order), parts, comb, tuple(notes))


def thm39_check(g_tilde: SeqExpr, order: int, d: int = 2) -> CombinedCheck:
    """Sum with the Szegő-type slice: ``γ² = 2 (1 + 1/g̃)^(-1)``.

    If the combined sequence is completely monotone to ``order``, ``g̃``
    must be too; a violation of that implication is recorded as a numerical
    anomaly in ``notes``.
    """
    norms = ReinhardtNorms(d)
    comb = combine_slices(SliceRep(norms, const(1)), SliceRep(norms, g_tilde))
    parts = {"combined_cm": D.check_cm(comb.gamma_sq, order),
             "g_tilde_cm": D.check_cm(g_tilde, order)}
    notes = ()
    if parts["combined_cm"].ok and not parts["g_tilde_cm"].ok:
        notes = ("numerical anomaly: combined sequence passes but g_tilde fails",)
    verdict = parts["combined_cm"] if not parts["combined_cm"].ok else parts["g_tilde_cm"]
    return CombinedCheck(verdict, parts, comb, notes)


def pochhammer_slice(d: int, lam) -> SliceRep:
    """Surface-measure slice with ``γ²_k = (d)_k/(λ)_k``."""
    return SliceRep(ReinhardtNorms(d), poch(Fraction(d), as_scalar(lam)))


__all__ = [
    "MultiIndex", "multi_indices", "ReinhardtNorms", "SliceRep", "bn_diagonal",
    "q_minus_identity", "is_spherical_contraction", "measure_ratio", "combine_slices",
    "spherical_cauchy_dual", "kernel_coefficient", "MembershipReport", "class_Knu_membership",
    "CombinedCheck", "thm37_check", "thm39_check", "pochhammer_slice",
]
