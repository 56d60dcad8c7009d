"""Pure-Python reference implementation of the hot kernels.

Mirrors ``_core.pyx`` function for function; :mod:`momentkit.backend` picks
whichever is available.
"""

import math

import numpy as np

from .quadrature import MAX_LEVEL, MIN_LEVEL, de_nodes


def difference_table(vals, max_order):
    """Triangular table D[n][m] = Δ^n a_m over integers, 0 <= n + m <= N."""
    row = list(vals[: max_order + 1])
    table = [row[:]]
    for n in range(1, max_order + 1):
        row = [row[m + 1] - row[m] for m in range(max_order - n + 1)]
        table.append(row)
    return table


def scan_signs(vals, max_order, n_start, sign, thresholds):
    """Scan rows of the difference table in (n, m) order.

    The tested quantity is ``sign * (-1)**n * D[n][m]``, required to be
    non-negative for ``n >= n_start``. ``thresholds[n]`` (an integer in the
    same units as ``vals``) is the uncertainty of row n. Returns
    ``(fail, ambiguous)``, each ``None`` or ``(n, m, D[n][m])``: ``fail`` is
    the first entry below ``-thresholds[n]``, ``ambiguous`` the first entry
    with magnitude below ``thresholds[n]`` seen before it.
    """
    row = list(vals[: max_order + 1])
    ambiguous = None
    for n in range(max_order + 1):
        width = max_order - n + 1
        if n >= n_start:
            thr = thresholds[n]
            s = sign if n % 2 == 0 else -sign
            for m in range(width):
                v = s * row[m]
                if v < -thr:
                    return (n, m, row[m]), ambiguous
                if ambiguous is None and -thr <= v < thr:
                    ambiguous = (n, m, row[m])
        for m in range(width - 1):
            row[m] = row[m + 1] - row[m]
    return None, ambiguous


def lommel_h(p, x, inv_gamma_p, rel_tol, max_level=MAX_LEVEL):
    """h(x) = x^p / Γ(p) ∫_0^1 u^{p-1} sin(x (1 - u)) du by tanh-sinh.

    Returns ``(value, error_estimate, evaluations, converged)``.
    """
    scale = x**p * inv_gamma_p
    total = 0.0
    abs_total = 0.0
    prev = None
    evals = 0
    for level in range(max_level + 1):
        u, uc, w = de_nodes(level)
        f = np.power(u, p - 1.0) * np.sin(x * uc) * w
        evals += len(u)
        total += float(np.sum(f))
        abs_total += float(np.sum(np.abs(f)))
        h = 2.0**-level
        est = total * h
        if prev is not None and level >= MIN_LEVEL:
            err = abs(est - prev)
            if err <= rel_tol * abs(est) or err <= 32 * 2.220446049250313e-16 * abs_total * h:
                return scale * est, abs(scale) * err, evals, True
        prev = est
    return scale * total * 2.0**-max_level, math.inf, evals, False
