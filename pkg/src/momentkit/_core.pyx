# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; see ``_core_py.py`` for the reference semantics."""

from libc.math cimport sinh, cosh, exp, fabs, pow, sin, M_PI, INFINITY

cdef double T_MAX = 6.0
cdef int MIN_LEVEL = 3
cdef double EPS = 2.220446049250313e-16


def difference_table(vals, Py_ssize_t max_order):
    cdef list row = list(vals[: max_order + 1])
    cdef list table = [row[:]]
    cdef Py_ssize_t n, m
    for n in range(1, max_order + 1):
        row = [row[m + 1] - row[m] for m in range(max_order - n + 1)]
        table.append(row)
    return table


def scan_signs(vals, Py_ssize_t max_order, Py_ssize_t n_start, int sign, thresholds):
    cdef list row = list(vals[: max_order + 1])
    cdef list thr_list = list(thresholds)
    cdef Py_ssize_t n, m, width
    cdef int s
    cdef object v, thr, neg_thr, a, b
    ambiguous = None
    for n in range(max_order + 1):
        width = max_order - n + 1
        if n >= n_start:
            thr = thr_list[n]
            neg_thr = -thr
            s = sign if n % 2 == 0 else -sign
            if thr == 0:
                # exact mode: only the sign matters
                for m in range(width):
                    v = row[m]
                    if (v < 0 and s > 0) or (v > 0 and s < 0):
                        return (n, m, v), ambiguous
            else:
                for m in range(width):
                    v = row[m] if s > 0 else -row[m]
                    if v < neg_thr:
                        return (n, m, row[m]), ambiguous
                    if ambiguous is None and v < thr:
                        ambiguous = (n, m, row[m])
        for m in range(width - 1):
            a = row[m + 1]
            b = row[m]
            row[m] = a - b
    return None, ambiguous


cdef inline void _node(double t, double *x, double *xc, double *w) nogil:
    cdef double s = M_PI * sinh(t)
    cdef double q = exp(-fabs(s))
    if s >= 0:
        x[0] = 1.0 / (1.0 + q)
        xc[0] = q / (1.0 + q)
    else:
        x[0] = q / (1.0 + q)
        xc[0] = 1.0 / (1.0 + q)
    w[0] = M_PI * cosh(t) * q / ((1.0 + q) * (1.0 + q))


cdef void _level_sum(int level, double p, double xx, double *tot, double *atot, long *evals) nogil:
    cdef double h, t, u, uc, w, f
    cdef long i, n
    if level == 0:
        n = <long>T_MAX
        for i in range(-n, n + 1):
            _node(<double>i, &u, &uc, &w)
            if u > 0 and uc > 0 and w > 0:
                f = pow(u, p - 1.0) * sin(xx * uc) * w
                tot[0] += f
                atot[0] += fabs(f)
                evals[0] += 1
    else:
        h = 1.0 / (<double>(1 << level))
        n = <long>(T_MAX / h)
        for i in range(-n, n + 1):
            if i % 2 == 0:
                continue
            t = i * h
            _node(t, &u, &uc, &w)
            if u > 0 and uc > 0 and w > 0:
                f = pow(u, p - 1.0) * sin(xx * uc) * w
                tot[0] += f
                atot[0] += fabs(f)
                evals[0] += 1


def lommel_h(double p, double x, double inv_gamma_p, double rel_tol, int max_level=14):
    cdef double scale = pow(x, p) * inv_gamma_p
    cdef double total = 0.0, abs_total = 0.0, est = 0.0, prev = 0.0, err, h
    cdef long evals = 0
    cdef int level
    cdef bint have_prev = False
    with nogil:
        for level in range(max_level + 1):
            _level_sum(level, p, x, &total, &abs_total, &evals)
            h = 1.0 / (<double>(1 << level))
            est = total * h
            if have_prev and level >= MIN_LEVEL:
                err = fabs(est - prev)
                if err <= rel_tol * fabs(est) or err <= 32 * EPS * abs_total * h:
                    with gil:
                        return scale * est, fabs(scale) * err, evals, True
            prev = est
            have_prev = True
    return scale * est, INFINITY, evals, False
