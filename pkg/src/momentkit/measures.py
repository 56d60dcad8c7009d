"""Representing measures on (0, 1] and moment verification.

Densities are evaluated on the double-exponential nodes of
:mod:`momentkit.quadrature`; all moments ``0..k_max`` of one density are
computed in a single vector-valued integration. The module also decides
whether ``1/p(k)`` is a moment sequence for a polynomial ``p`` and scans the
sign of the Lommel-type function ``h``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import mpmath
import numpy as np
from scipy.optimize import minimize_scalar

from . import backend
from .errors import DomainError, NonConvergence
from .expr import (SeqExpr, add, as_scalar, is_exact, mul, poch, recip, render, values)
from .quadrature import gamma_real, integrate


def _f(x) -> float:
    return float(x)


def neg_log(x, xc):
    """``-log x`` computed from whichever of ``x`` and ``1 - x`` is accurate."""
    x = np.asarray(x, dtype=float)
    xc = np.asarray(xc, dtype=float)
    out = np.empty(np.broadcast(x, xc).shape)
    near_one = x > 0.5
    out[near_one] = -np.log1p(-xc[near_one])
    out[~near_one] = -np.log(x[~near_one])
    return out


# --------------------------------------------------------------------------
# density catalog
# --------------------------------------------------------------------------


class Density:
    """A density on (0, 1); subclasses implement ``__call__(x, xc)``."""

    name = "density"

    def params(self) -> dict:
        return {}

    def __call__(self, x, xc):
        raise NotImplementedError

    def describe(self) -> dict:
        return {"density": self.name, **{k: str(v) for k, v in self.params().items()}}


@dataclass(frozen=True)
class PowerDensity(Density):
    """``r x^(r-1)``, with moments ``r/(k + r)``."""

    r: Fraction
    name = "power"

    def params(self):
        return {"r": self.r}

    def __call__(self, x, xc):
        r = _f(self.r)
        return r * np.power(x, r - 1)


@dataclass(frozen=True)
class TwoPower(Density):
    """``st (x^(t-1) - x^(s-1))/(s - t)``; for ``s = t`` the limit ``s^2 x^(s-1) (-log x)``.

    Moments ``st/((k + s)(k + t))``.
    """

    s: Fraction
    t: Fraction
    name = "two-power"

    def params(self):
        return {"s": self.s, "t": self.t}

    def __call__(self, x, xc):
        s, t = _f(self.s), _f(self.t)
        if self.s == self.t:
            return s * s * np.power(x, s - 1) * neg_log(x, xc)
        return s * t * (np.power(x, t - 1) - np.power(x, s - 1)) / (s - t)


@dataclass(frozen=True)
class BetaDensity(Density):
    """``Γ(λ)/(Γ(μ)Γ(λ-μ)) x^(μ-1) (1-x)^(λ-μ-1)`` for ``λ > μ``; moments ``(μ)_k/(λ)_k``."""

    lam: Fraction
    mu: Fraction
    name = "beta"

    def __post_init__(self):
        if not self.lam > self.mu > 0:
            raise ValueError("beta density needs lam > mu > 0; use PointMass for lam == mu")

    def params(self):
        return {"lam": self.lam, "mu": self.mu}

    def __call__(self, x, xc):
        lam, mu = _f(self.lam), _f(self.mu)
        c = math.exp(math.lgamma(lam) - math.lgamma(mu) - math.lgamma(lam - mu))
        return c * np.power(x, mu - 1) * np.power(xc, lam - mu - 1)


@dataclass(frozen=True)
class PointMass(Density):
    """Unit mass at ``x = 1`` (scaled by ``weight``); every moment equals ``weight``."""

    weight: Fraction = Fraction(1)
    name = "point-mass"

    def params(self):
        return {"at": 1, "weight": self.weight}


@dataclass(frozen=True)
class LogPower(Density):
    """``(-log x)^(p-1)/Γ(p)``, with moments ``(k + 1)^(-p)``."""

    p: Fraction
    name = "log-power"

    def params(self):
        return {"p": self.p}

    def __call__(self, x, xc):
        p = _f(self.p)
        return np.power(neg_log(x, xc), p - 1) / gamma_real(p)


@dataclass(frozen=True)
class LommelDensity(Density):
    """``g(x) = h(-log x)`` with ``h`` from :func:`lommel_h`.

    Its moments are ``(k+1)^(-p) / ((k+1)^2 + 1)``. Since ``|h(u)| <= u^p/Γ(p+1)``,
    nodes where that bound times ``x`` is below ``1e-22`` are set to zero
    instead of integrating a highly oscillatory inner integral.
    """

    p: Fraction
    name = "lommel"

    def params(self):
        return {"p": self.p}

    def __call__(self, x, xc):
        p = _f(self.p)
        u = neg_log(x, xc)
        inv_g = 1.0 / gamma_real(p)
        bound = np.asarray(x) * np.power(u, p) * inv_g / p
        out = np.zeros_like(u)
        for i in np.nonzero(bound >= 1e-22)[0]:
            out[i] = lommel_h(p, float(u[i]), rel_tol=1e-13)
        return out


@dataclass(frozen=True)
class SumMeasure213(Density):
    """Density representing ``(μ)_k / ((λ'+1)_k + (λ')_k)`` for ``0 < μ < λ'``.

    ``c x^(2λ'-1) ∫_0^(1-x) t^(λ'-μ-1) (1-t)^(μ-2λ'-1) dt`` with
    ``c = λ'Γ(λ')/(Γ(μ)Γ(λ'-μ))``; the inner integral runs on its own
    double-exponential grid after the substitution ``1 - t = x^s``.
    """

    lam_p: Fraction
    mu: Fraction
    inner_tol: float = 1e-13
    name = "sum-measure"

    def __post_init__(self):
        if not 0 < self.mu < self.lam_p:
            raise ValueError("the closed form is only available for 0 < mu < lam'")

    def params(self):
        return {"lam_p": self.lam_p, "mu": self.mu}

    def __call__(self, x, xc):
        lp, mu = _f(self.lam_p), _f(self.mu)
        a, b = lp - mu, mu - 2 * lp
        x = np.asarray(x, dtype=float)
        xc = np.asarray(xc, dtype=float)

        big_l = neg_log(x, xc)

        def inner(s, sc):
            # with 1 - t = x^s the inner integral is L ∫_0^1 (1 - x^s)^(a-1) x^(s b) ds,
            # L = -log x; folding in x^(2λ'-1) keeps every factor in range
            log_sl = np.log(s)[:, None] + np.log(big_l)[None, :]
            sl = np.exp(log_sl)
            # log(1 - e^{-sL}) = log(sL) + log((1 - e^{-sL})/(sL)), safe as sL -> 0
            ratio = np.where(sl > 1e-8, -np.expm1(-sl) / np.maximum(sl, 1e-300), 1 - sl / 2)
            logs = ((a - 1) * (log_sl + np.log(ratio))
                    - big_l[None, :] * (2 * lp - 1 + s[:, None] * b))
            return np.exp(logs) * big_l[None, :]

        c = lp * math.exp(math.lgamma(lp) - math.lgamma(mu) - math.lgamma(a))
        return c * integrate(inner, self.inner_tol).value


@dataclass(frozen=True)
class PartialFractionDensity(Density):
    """Density whose moments are ``1/p(k)``, assembled from the roots of ``p``.

    ``terms`` holds ``(A, s, n)`` with complex ``A`` and ``s``: each stands
    for ``A x^(s-1) (-log x)^(n-1)/(n-1)!``, whose moments are
    ``A/(k+s)^n``. Terms with ``Im s != 0`` are listed once and contribute
    twice their real part (the conjugate term is implied).
    """

    terms: tuple = field(default=())
    name = "partial-fraction"

    def params(self):
        return {}

    def describe(self):
        out = {"density": self.name, "terms": []}
        for a, s, n in self.terms:
            out["terms"].append({"coefficient": mpmath.nstr(a, 15), "shift": mpmath.nstr(s, 15),
                                 "log_power": n - 1})
        return out

    def __call__(self, x, xc):
        u = neg_log(x, xc)
        total = np.zeros_like(u)
        for a, s, n in self.terms:
            a, s = complex(a), complex(s)
            shape = np.power(u, n - 1) / math.factorial(n - 1)
            if s.imag == 0:
                total += a.real * np.exp(-(s.real - 1) * u) * shape
            else:
                # x^(s-1) = exp(-(s-1)u) with complex s; conjugate pair gives 2 Re
                total += 2 * (a * np.exp(-(s - 1) * u)).real * shape
        return total

    def scaled_mp(self, u, s0):
        """``exp((s0 - 1) u)`` times the density at ``x = exp(-u)``, in mpmath.

        Returns the value and the sum of absolute values of its terms.
        """
        total = mpmath.mpf(0)
        size = mpmath.mpf(0)
        for a, s, n in self.terms:
            shape = u ** (n - 1) / mpmath.factorial(n - 1)
            t = a * mpmath.exp(-(s - s0) * u) * shape
            t = t.real if mpmath.im(s) == 0 else 2 * t.real
            total += t
            size += abs(t)
        return total, size


def density_for_kernel(name: str, *params) -> Density:
    """Representing measure of ``1/a_k`` for a catalog kernel."""
    ps = [as_scalar(p) for p in params]
    if name == "szego":
        return PointMass()
    if name == "bergman":
        return PowerDensity(Fraction(1))
    if name == "Kr":
        return PowerDensity(ps[0])
    if name == "Kst":
        return TwoPower(ps[0], ps[1])
    if name == "Klm":
        lam, mu = ps
        if lam == mu:
            return PointMass()
        if lam < mu:
            raise ValueError("1/a_k is not a moment sequence when lam < mu")
        return BetaDensity(lam, mu)
    if name == "Kp":
        return LogPower(ps[0])
    raise ValueError(f"no representing measure catalogued for {name}")


# --------------------------------------------------------------------------
# moment verification
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class MomentRecord:
    k: int
    moment: float
    target: float
    rel_error: float


@dataclass(frozen=True)
class MomentReport:
    k_max: int
    density: dict
    target: str
    records: tuple
    max_rel_error: float
    diagnostics: dict

    def ok(self, tol: float) -> bool:
        return self.max_rel_error <= tol

    def to_json(self) -> dict:
        return {
            "k_max": self.k_max,
            "density": self.density,
            "target": self.target,
            "records": [{"k": r.k, "moment": repr(r.moment), "target": repr(r.target),
                         "rel_error": repr(r.rel_error)} for r in self.records],
            "max_rel_error": repr(self.max_rel_error),
            "diagnostics": self.diagnostics,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "moment", "target", "rel_error"])
        for r in self.records:
            w.writerow([r.k, repr(r.moment), repr(r.target), repr(r.rel_error)])
        return buf.getvalue()


def verify_moments(d: Density, target: SeqExpr, k_max: int, rel_tol: float = 1e-10, *,
                   reciprocal: bool = True, quad_tol: float = 1e-13) -> MomentReport:
    """Compare ``∫ x^k d(x) dx`` with ``1/target_k`` (or ``target_k``) for ``k <= k_max``.

    ``rel_tol`` is recorded with the report; the quadrature itself runs at
    ``quad_tol``.
    """
    seq = recip(target) if reciprocal else target
    tv = [float(v) for v in values(seq, k_max + 1)]
    if isinstance(d, PointMass):
        moments = np.full(k_max + 1, float(d.weight))
        diag = {"method": "point-mass"}
    else:
        ks = np.arange(k_max + 1, dtype=float)

        def f(x, xc):
            return d(x, xc)[:, None] * np.power(x[:, None], ks[None, :])

        try:
            res = integrate(f, quad_tol)
        except NonConvergence as exc:
            raise NonConvergence(f"moment integration for k <= {k_max}: {exc}") from None
        moments = np.atleast_1d(res.value)
        diag = {"method": "tanh-sinh", "evaluations": res.evaluations, "level": res.level,
                "max_quadrature_error": repr(float(np.max(res.error)))}
    records = []
    for k in range(k_max + 1):
        rel = abs(moments[k] - tv[k]) / tv[k]
        records.append(MomentRecord(k, float(moments[k]), tv[k], float(rel)))
    diag["rel_tol"] = repr(rel_tol)
    return MomentReport(k_max, d.describe(), render(seq), tuple(records),
                        max(r.rel_error for r in records), diag)


def verify_sum_measure_213(lam_p, mu, k_max: int, rel_tol: float = 1e-6) -> MomentReport:
    """Nested-quadrature moments of :class:`SumMeasure213` against the Pochhammer target."""
    lam_p, mu = as_scalar(lam_p), as_scalar(mu)
    if not 0 < mu < lam_p:
        raise ValueError("only the case 0 < mu < lam' has a known representing measure")
    target = mul(poch(mu, 1), recip(add(poch(lam_p + 1, 1), poch(lam_p, 1))))
    return verify_moments(SumMeasure213(lam_p, mu), target, k_max, rel_tol,
                          reciprocal=False, quad_tol=1e-11)


# --------------------------------------------------------------------------
# exact polynomial helpers (coefficients lowest degree first, Fractions)
# --------------------------------------------------------------------------


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _deriv(p):
    return [i * c for i, c in enumerate(p)][1:]


def _divmod(a, b):
    a, b = _trim(a), _trim(b)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = a[-1] / b[-1]
        q[shift] = c
        for i, bc in enumerate(b):
            a[i + shift] -= c * bc
        a = _trim(a)
    return _trim(q), a


def _gcd(a, b):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _divmod(a, b)[1]
    return [c / a[-1] for c in a]


def squarefree_factors(p: Sequence) -> list:
    """Yun's algorithm: ``[(f_1, 1), (f_2, 2), ...]`` with monic squarefree ``f_i``."""
    p = [Fraction(c) for c in _trim(p)]
    p = [c / p[-1] for c in p]
    out = []
    a = _gcd(p, _deriv(p))
    b = _divmod(p, a)[0]
    c = _divmod(_deriv(p), a)[0]
    d = [ci - bi for ci, bi in zip(_pad(c, len(b)), _pad(_deriv(b), len(b)))]
    i = 1
    while len(_trim(b)) > 1:
        a = _gcd(b, d)
        b = _divmod(b, a)[0]
        c = _divmod(d, a)[0]
        if len(a) > 1:
            out.append((a, i))
        d = [ci - bi for ci, bi in zip(_pad(c, len(b)), _pad(_deriv(b), len(b)))]
        i += 1
    return out


def _pad(p, n):
    p = list(p)
    return p + [Fraction(0)] * (n - len(p))


def polynomial_form(e: SeqExpr, max_degree: int = 8, checks: int = 12):
    """Coefficients of a polynomial agreeing with ``e`` on ``k = 0..max_degree+checks``.

    Returns ``None`` when ``e`` is inexact or no polynomial of degree
    ``<= max_degree`` fits. Agreement on finitely many points is evidence
    only, which suffices for choosing a decision procedure.
    """
    if not is_exact(e):
        return None
    n = max_degree + 1 + checks
    try:
        ys = values(e, n, check=False)
    except (DomainError, ArithmeticError):
        return None
    # Newton forward differences give the interpolant in the binomial basis
    diffs, row = [], list(ys[: max_degree + 1])
    while row:
        diffs.append(row[0])
        row = [row[i + 1] - row[i] for i in range(len(row) - 1)]
    coeffs = [Fraction(0)]
    basis = [Fraction(1)]  # C(k, j) as a polynomial in k
    for j, dj in enumerate(diffs):
        coeffs = [a + dj * b for a, b in zip(_pad(coeffs, len(basis)), basis)]
        basis = [(c2 - j * c1) / (j + 1) for c1, c2 in zip(basis + [0], [0] + basis)]
    coeffs = _trim(coeffs) or [Fraction(0)]
    for k in range(n):
        val = sum(c * k**i for i, c in enumerate(coeffs))
        if val != ys[k]:
            return None
    return coeffs


# --------------------------------------------------------------------------
# reciprocal-polynomial decision
# --------------------------------------------------------------------------

DECISION_DPS = 40


@dataclass(frozen=True)
class Decision:
    """Outcome of :func:`decide_reciprocal_polynomial`.

    ``kind`` is ``"moment"``, ``"never-moment"`` or ``"indeterminate"``.
    """

    kind: str
    reason: str
    density: Optional[PartialFractionDensity] = None
    witness_x: Optional[float] = None
    min_scaled: Optional[float] = None
    roots: tuple = ()

    def to_json(self) -> dict:
        out = {"decision": self.kind, "reason": self.reason,
               "roots": [mpmath.nstr(r, 15) for r in self.roots]}
        if self.density is not None:
            out["density"] = self.density.describe()
        if self.witness_x is not None:
            out["witness_x"] = repr(self.witness_x)
        if self.min_scaled is not None:
            out["min_scaled_density"] = repr(self.min_scaled)
        return out


def _roots(poly):
    """All roots with multiplicities, via the squarefree split."""
    out = []
    with mpmath.workdps(DECISION_DPS + 20):
        for f, mult in squarefree_factors(poly):
            if len(f) == 2:
                r0 = -f[0] / f[1]
                rs = [mpmath.mpc(mpmath.mpf(r0.numerator) / r0.denominator)]
            else:
                hi_first = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(f)]
                rs = mpmath.polyroots(hi_first, maxsteps=500, extraprec=400)
            for r in rs:
                r = mpmath.mpc(r)
                if abs(r.imag) < mpmath.mpf(10) ** (-DECISION_DPS):
                    r = mpmath.mpc(r.real, 0)
                out.append((r, mult))
    return out


def _residues(roots, lead):
    """Laurent coefficients of ``1/p`` at each root: list of ``(A, s = -root, n)``."""
    terms = []
    with mpmath.workdps(DECISION_DPS + 20):
        for i, (rho, m) in enumerate(roots):
            if rho.imag < 0:
                continue  # implied by the conjugate
            # Taylor series of 1/(lead * prod_{other}(z - r)^mult) at rho, to order m-1
            series = [mpmath.mpc(1) / lead] + [mpmath.mpc(0)] * (m - 1)
            for j, (r, mult) in enumerate(roots):
                if j == i:
                    continue
                a = rho - r
                factor = [mpmath.binomial(-mult, q) * a ** (-mult - q) for q in range(m)]
                series = [sum(series[q] * factor[n - q] for q in range(n + 1)) for n in range(m)]
            for q in range(m):
                terms.append((series[q], -rho, m - q))
    return tuple(terms)


def decide_reciprocal_polynomial(coeffs: Sequence, sign_samples: int = 10_000) -> Decision:
    """Decide whether ``1/p(k)`` is a Hausdorff moment sequence.

    Parameters
    ----------
    coeffs : sequence of rationals
        ``p(k) = c_0 + c_1 k + ...``; must be positive at every integer ``k >= 0``.
    sign_samples : int
        Base grid size for the density sign scan.

    Notes
    -----
    Decision rules, in order:

    * all roots non-real and simple, with pairwise distinct positive values
      of ``-Re(root)`` per conjugate pair: never a moment sequence;
    * a root with ``Re(root) >= 0``: never a moment sequence, because
      ``∫ x^z dν`` is analytic and bounded on ``Re z > 0`` while ``1/p`` has a
      pole there (Carlson's theorem identifies the two);
    * repeated non-real roots: indeterminate;
    * otherwise the partial-fraction density is scanned on a grid uniform in
      ``u = -log x`` with golden-section refinement; a value below ten times
      its rounding estimate certifies a negative density (never a moment
      sequence), a nonnegative scan with positive dominant asymptotics gives
      a moment sequence.
    """
    p = [as_scalar(c) for c in coeffs]
    if not all(isinstance(c, Fraction) for c in p):
        raise ValueError("polynomial coefficients must be rational")
    p = _trim(p)
    if not p:
        raise ValueError("zero polynomial")
    if len(p) == 1:
        if p[0] <= 0:
            raise DomainError(0, "p(0) is not positive")
        return Decision("moment", "constant polynomial: point mass at 1",
                        PartialFractionDensity(()))
    roots = _roots(p)
    for k in range(0, int(max([0] + [float(r.real) for r, _ in roots if r.imag == 0])) + 2):
        if sum(c * k**i for i, c in enumerate(p)) <= 0:
            raise DomainError(k, "p(k) is not positive")
    if p[-1] < 0:
        raise DomainError(-1, "p is eventually negative")
    root_list = tuple(r for r, m in roots for _ in range(m))

    complex_roots = [(r, m) for r, m in roots if r.imag != 0]
    if len(complex_roots) == len(roots) and all(m == 1 for _, m in roots):
        alphas = sorted(-r.real for r, _ in roots if r.imag > 0)
        distinct = all(alphas[i + 1] - alphas[i] > mpmath.mpf(10) ** (-DECISION_DPS // 2)
                       for i in range(len(alphas) - 1))
        if distinct and alphas[0] > 0:
            return Decision("never-moment",
                            "all roots are non-real and simple with distinct positive values "
                            "of -Re(root): the alternating sums change sign at some order",
                            roots=root_list)
    if any(r.real >= 0 for r, _ in roots):
        return Decision("never-moment",
                        "a root lies in the closed right half-plane, where a moment "
                        "transform has no poles", roots=root_list)
    if any(m > 1 for _, m in complex_roots):
        return Decision("indeterminate", "repeated non-real roots", roots=root_list)

    dens = PartialFractionDensity(_residues(roots, p[-1]))
    return _scan_density(dens, root_list, sign_samples)


def _scan_density(dens: PartialFractionDensity, root_list, samples: int) -> Decision:
    with mpmath.workdps(DECISION_DPS):
        shifts = [s for _, s, _ in dens.terms]
        s0 = min(s.real for s in shifts)
        gaps = [s.real - s0 for s in shifts if s.real - s0 > mpmath.mpf(10) ** -20]
        freqs = [abs(s.imag) for s in shifts if s.imag != 0]
        u_max = 60.0
        if gaps:
            u_max = max(u_max, 60.0 / float(min(gaps)))
        if freqs:
            u_max = max(u_max, 8 * math.pi / float(min(freqs)))
        u_max = min(u_max, 1e4)
        eps = mpmath.mpf(2) ** (-(mpmath.mp.prec - 30))

        def g(u):
            v, size = dens.scaled_mp(mpmath.mpf(u), s0)
            return v, size * eps

        grid = list(np.linspace(0.0, u_max, samples))
        grid += [u_max * 2.0**j for j in range(1, 21)]
        vals = [g(u) for u in grid]
        i_min = min(range(len(grid)), key=lambda i: vals[i][0])
        best_u, (best_v, best_err) = grid[i_min], vals[i_min]
        if 0 < i_min < samples - 1:
            lo, hi = grid[i_min - 1], grid[i_min + 1]
            res = minimize_scalar(lambda u: float(g(u)[0]), bounds=(lo, hi), method="bounded",
                                  options={"xatol": 1e-12 * max(1.0, hi)})
            v, err = g(res.x)
            if v < best_v:
                best_u, best_v, best_err = float(res.x), v, err
        witness = math.exp(-best_u)
        if best_v < -10 * best_err:
            return Decision("never-moment",
                            "the representing density is negative at a sampled point, "
                            "and Hausdorff representations are unique",
                            dens, witness, float(best_v), root_list)
        # asymptotic sign as x -> 0: leading real term among the slowest decaying ones
        lead = [(n, a, s) for a, s, n in dens.terms if abs(s.real - s0) <= mpmath.mpf(10) ** -20]
        top = max(n for n, _, _ in lead)
        top_terms = [(a, s) for n, a, s in lead if n == top]
        if any(s.imag != 0 for _, s in top_terms):
            return Decision("indeterminate",
                            "oscillating leading term but no certified negative sample",
                            dens, witness, float(best_v), root_list)
        if best_v < 0 or sum(a.real for a, _ in top_terms) <= 0:
            return Decision("indeterminate", "density minimum within the rounding margin",
                            dens, witness, float(best_v), root_list)
        return Decision("moment", "partial-fraction density is nonnegative on the scan "
                        "and positive in the limit x -> 0", dens, witness, float(best_v),
                        root_list)


# --------------------------------------------------------------------------
# Lommel-type function h
# --------------------------------------------------------------------------


def lommel_h(p, x, rel_tol: float = 1e-12):
    """``h(x) = x^p/Γ(p) ∫_0^1 u^(p-1) sin(x(1-u)) du`` for ``p, x > 0``.

    The substitution ``u = 1 - y`` puts the ``u^(p-1)`` singularity at an
    endpoint of the double-exponential rule. ``h(x) = 1 - cos x`` for
    ``p = 1`` and ``x - sin x`` for ``p = 2``.
    """
    p, x = float(p), float(x)
    if not (p > 0 and x > 0):
        raise ValueError("lommel_h needs p > 0 and x > 0")
    val, err, _, converged = backend.lommel_h(p, x, 1.0 / gamma_real(p), rel_tol)
    if not converged:
        raise NonConvergence(f"lommel_h(p={p}, x={x}) did not converge")
    return val


def _lommel_err(p, x, rel_tol):
    val, err, _, converged = backend.lommel_h(float(p), float(x), 1.0 / gamma_real(float(p)),
                                              rel_tol)
    if not converged:
        raise NonConvergence(f"lommel_h(p={p}, x={x}) did not converge")
    return val, err


@dataclass(frozen=True)
class SignScan:
    p: float
    x_max: float
    samples: int
    min_value: float
    argmin: float
    error_estimate: float
    negative_found: bool

    def to_json(self) -> dict:
        return {"p": repr(self.p), "x_max": repr(self.x_max), "samples": self.samples,
                "min_value": repr(self.min_value), "argmin": repr(self.argmin),
                "error_estimate": repr(self.error_estimate),
                "negative_found": self.negative_found}


def lommel_sign_scan(p, x_max: float = 50.0, samples: int = 1000, tol: float = 1e-12,
                     rel_tol: float = 1e-12) -> SignScan:
    """Minimum of ``h`` on ``(0, x_max]`` from a uniform grid plus golden-section refinement.

    ``negative_found`` is set only when the minimum is below ``-tol`` and
    below ten times the quadrature error estimate of that value.
    """
    if samples < 100:
        raise ValueError("at least 100 samples are required")
    p, x_max = float(p), float(x_max)
    xs = [x_max * (i + 1) / samples for i in range(samples)]
    vals = [_lommel_err(p, x, rel_tol) for x in xs]
    i_min = min(range(samples), key=lambda i: vals[i][0])
    best_x, (best_v, best_e) = xs[i_min], vals[i_min]
    lo = xs[i_min - 1] if i_min > 0 else xs[0] * 1e-3
    hi = xs[i_min + 1] if i_min + 1 < samples else x_max
    res = minimize_scalar(lambda t: _lommel_err(p, t, rel_tol)[0], bounds=(lo, hi),
                          method="bounded", options={"xatol": 1e-10})
    v, e = _lommel_err(p, res.x, rel_tol)
    if v < best_v:
        best_x, best_v, best_e = float(res.x), v, e
    margin = max(tol, 10 * best_e)
    return SignScan(p, x_max, samples, float(best_v), float(best_x), float(best_e),
                    bool(best_v < -margin))
