"""Named diagonal kernels on the disc and their coefficient-level algebra.

A diagonal kernel ``K(z, w) = sum_k a_k (z conj(w))^k`` is identified with its
coefficient sequence. Kernel sum and scaling act termwise on coefficients;
the pointwise product of kernels convolves them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import ParseError, UnknownKernel
from .expr import (SeqExpr, add, as_scalar, const, poch, poly, poly_coeffs, pow_k1,
                   prefix_tail, render, scalar_mul, values)
from .parser import parse
from .shifts import ShiftView


@dataclass(frozen=True)
class KernelSpec:
    name: Optional[str]
    coeffs: SeqExpr

    @property
    def shift(self) -> ShiftView:
        return ShiftView(self.coeffs)

    def label(self) -> str:
        return self.name if self.name is not None else "expr:" + render(self.coeffs)


def _positive(*ps):
    out = []
    for p in ps:
        p = as_scalar(p)
        if not p > 0:
            raise ValueError(f"kernel parameter must be positive, got {p}")
        out.append(p)
    return out


def _fmt(*ps) -> str:
    return ",".join(str(p) for p in ps)


def szego() -> KernelSpec:
    return KernelSpec("szego", const(1))


def k_r(r) -> KernelSpec:
    """``(k + r)/r``; r = 1 is the Bergman kernel."""
    (r,) = _positive(r)
    return KernelSpec(f"Kr({_fmt(r)})", poly([1, 1 / r]))


def k_st(s, t) -> KernelSpec:
    """``(k + s)(k + t)/(st)``."""
    s, t = _positive(s, t)
    return KernelSpec(f"Kst({_fmt(s, t)})", poly([1, (s + t) / (s * t), 1 / (s * t)]))


def k_lm(lam, mu) -> KernelSpec:
    """``(lam)_k / (mu)_k``."""
    lam, mu = _positive(lam, mu)
    return KernelSpec(f"Klm({_fmt(lam, mu)})", poch(lam, mu))


def k_p(p) -> KernelSpec:
    """``(k + 1)^p``."""
    (p,) = _positive(p)
    return KernelSpec(f"Kp({_fmt(p)})", pow_k1(p))


def k_ex23(s, t) -> KernelSpec:
    """Coefficients ``1, s, s^2`` followed by the constant ``t``."""
    s, t = _positive(s, t)
    return KernelSpec(f"Kex23({_fmt(s, t)})", prefix_tail([1, s, s * s], const(t)))


CATALOG = {
    "szego": (szego, 0),
    "bergman": (lambda: k_r(1), 0),
    "Kr": (k_r, 1),
    "Kst": (k_st, 2),
    "Klm": (k_lm, 2),
    "Kp": (k_p, 1),
    "Kex23": (k_ex23, 2),
}

_NAME = re.compile(r"^\s*([A-Za-z][A-Za-z0-9]*)\s*(?:\((.*)\))?\s*$")


def make(name: str, *params) -> KernelSpec:
    try:
        factory, arity = CATALOG[name]
    except KeyError:
        raise UnknownKernel(f"unknown kernel {name!r}; known: {', '.join(CATALOG)}") from None
    if len(params) != arity:
        raise ValueError(f"{name} takes {arity} parameter(s), got {len(params)}")
    return factory(*params)


def parse_kernel(text: str) -> KernelSpec:
    """Parse ``"Kr(1)"``, ``"Klm(5/2,3/2)"``, ``"szego"`` or ``"expr:<sequence>"``."""
    text = text.strip()
    if text.startswith("expr:"):
        return KernelSpec(None, parse(text[5:]))
    m = _NAME.match(text)
    if not m:
        raise UnknownKernel(f"cannot read kernel {text!r}")
    params = [p for p in (m.group(2) or "").split(",") if p.strip()]
    try:
        scalars = [as_scalar(p) for p in params]
    except (ValueError, ZeroDivisionError):
        raise ParseError(0, f"bad kernel parameters in {text!r}") from None
    return make(m.group(1), *scalars)


def kernel_sum(a: KernelSpec, b: KernelSpec) -> KernelSpec:
    name = f"{a.label()}+{b.label()}"
    return KernelSpec(name, add(a.coeffs, b.coeffs))


def scale(c, a: KernelSpec) -> KernelSpec:
    c = as_scalar(c)
    if not c > 0:
        raise ValueError("scale factor must be positive")
    return KernelSpec(f"{c}*{a.label()}", scalar_mul(c, a.coeffs))


def convolve(a: list, b: list) -> list:
    """Cauchy product ``c_k = sum_{i+j=k} a_i b_j`` of two equal-length lists."""
    n = len(a)
    return [sum((a[i] * b[k - i] for i in range(1, k + 1)), a[0] * b[k]) for k in range(n)]


def product(a: KernelSpec, b: KernelSpec, k_max: int, precision: Optional[int] = None) -> KernelSpec:
    """Pointwise product of kernels, materialized for ``k <= k_max``.

    The result is a prefix without tail; evaluating it past ``k_max`` raises
    :class:`~momentkit.errors.RangeError`.
    """
    av = values(a.coeffs, k_max + 1, precision, check=False)
    bv = values(b.coeffs, k_max + 1, precision, check=False)
    return KernelSpec(f"{a.label()}*{b.label()}", prefix_tail(convolve(av, bv), None))


@dataclass(frozen=True)
class Factorization:
    """Outcome of writing ``K_r + K_{s,t}`` as ``2 K_{s',t'}``.

    ``s'`` and ``t'`` are never formed; they are represented by their sum and
    product, and real positive roots exist iff ``discriminant >= 0``.
    """

    lhs: int | Fraction  # (rs + st + tr)^2
    rhs: int | Fraction  # 8 r^2 s t
    root_sum: Fraction
    root_product: Fraction
    identity_holds: bool

    @property
    def inequality_holds(self) -> bool:
        return self.lhs >= self.rhs

    @property
    def discriminant(self) -> Fraction:
        return self.root_sum**2 - 4 * self.root_product


def thm22_factorization(r, s, t) -> Factorization:
    """Check ``K_r + K_{s,t} = 2 K_{s',t'}`` with ``s'+t' = s+t+st/r``, ``s't' = 2st``."""
    r, s, t = _positive(r, s, t)
    root_sum = s + t + s * t / r
    root_product = 2 * s * t
    lhs = poly_coeffs(kernel_sum(k_r(r), k_st(s, t)).coeffs)
    # 2 (k + s')(k + t') / (s' t') expanded through the symmetric functions
    rhs = tuple(2 * c / root_product for c in (root_product, root_sum, Fraction(1)))
    return Factorization(
        lhs=(r * s + s * t + t * r) ** 2,
        rhs=8 * r * r * s * t,
        root_sum=root_sum,
        root_product=root_product,
        identity_holds=tuple(lhs) == rhs,
    )
