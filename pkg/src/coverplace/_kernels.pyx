# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; mirror of ``_kernels_py``."""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free
from libc.math cimport INFINITY

cnp.import_array()


cdef inline int _popcount(unsigned long long m) nogil:
    cdef int c = 0
    while m:
        m &= m - 1
        c += 1
    return c


cdef inline double _c0_mask(const double[::1] x, int n, unsigned long long mask,
                            bint circle) nogil:
    cdef int i, first = -1, prev = -1
    cdef double best = 0.0, g
    for i in range(n):
        if (mask >> i) & 1:
            if first < 0:
                first = i
            else:
                g = (x[i] - x[prev]) / 2.0
                if g > best:
                    best = g
            prev = i
    if circle:
        g = (1.0 - x[prev] + x[first]) / 2.0
        if g > best:
            best = g
    else:
        if x[first] > best:
            best = x[first]
        if 1.0 - x[prev] > best:
            best = 1.0 - x[prev]
    return best


def enum_cost(x, weights, bint circle):
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef const double[::1] wv = np.ascontiguousarray(weights, dtype=np.float64)
    cdef int n = xv.shape[0]
    cdef unsigned long long mask, total = 1ULL << n
    cdef double s = wv[0], comp = 0.0, term, y, t, w
    with nogil:
        for mask in range(1, total):
            w = wv[_popcount(mask)]
            if w == 0.0:
                continue
            term = w * _c0_mask(xv, n, mask, circle)
            y = term - comp
            t = s + y
            comp = (t - s) - y
            s = t
    return s


def enum_subgradient(x, weights, bint circle):
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef const double[::1] wv = np.ascontiguousarray(weights, dtype=np.float64)
    cdef int n = xv.shape[0]
    out = np.zeros(n)
    cdef double[::1] g = out
    cdef unsigned long long mask, total = 1ULL << n
    cdef int i, first, prev, arg_kind, arg_i, arg_j
    cdef double w, best, val
    with nogil:
        for mask in range(1, total):
            w = wv[_popcount(mask)]
            if w == 0.0:
                continue
            first = -1
            prev = -1
            # arg_kind: 0 left border / wrap, 1 interior gap, 2 right border
            arg_kind = -1
            best = -INFINITY
            for i in range(n):
                if (mask >> i) & 1:
                    if first < 0:
                        first = i
                        if not circle:
                            best = xv[i]
                            arg_kind = 0
                    else:
                        val = (xv[i] - xv[prev]) / 2.0
                        if val > best:
                            best = val
                            arg_kind = 1
                            arg_i = i
                            arg_j = prev
                    prev = i
            if circle:
                val = (1.0 - xv[prev] + xv[first]) / 2.0
                # wrap term has priority on ties
                if val >= best:
                    best = val
                    arg_kind = 0
            else:
                val = 1.0 - xv[prev]
                if val > best:
                    best = val
                    arg_kind = 2
            if arg_kind == 0:
                if circle:
                    g[first] += 0.5 * w
                    g[prev] -= 0.5 * w
                else:
                    g[first] += w
            elif arg_kind == 1:
                g[arg_i] += 0.5 * w
                g[arg_j] -= 0.5 * w
            else:
                g[prev] -= w
    return out


def dp_cdf_indep(x, double p, bint circle, thresholds, long span=-1):
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef const double[::1] vv = np.ascontiguousarray(thresholds, dtype=np.float64)
    cdef int n = xv.shape[0]
    cdef Py_ssize_t K = vv.shape[0], k
    out = np.zeros(K)
    cdef double[::1] F = out
    cdef double q = 1.0 - p, v, S, acc, tot
    cdef int i, lo, s, e
    if span < 0 or span > n:
        span = n
    cdef double* pw = <double*> malloc((n + 1) * sizeof(double))
    cdef double* f = <double*> malloc(n * sizeof(double))
    if pw == NULL or f == NULL:
        free(pw); free(f)
        raise MemoryError()
    pw[0] = 1.0
    for i in range(1, n + 1):
        pw[i] = pw[i - 1] * p
    with nogil:
        for k in range(K):
            v = vv[k]
            tot = 0.0
            if not circle:
                S = 0.0
                lo = 0
                for i in range(n):
                    if i > 0:
                        S = p * S + f[i - 1]
                        while lo < i and ((xv[i] - xv[lo]) / 2.0 > v or i - lo > span):
                            S -= f[lo] * pw[i - 1 - lo]
                            lo += 1
                        if lo == i or S < 0.0:
                            S = 0.0
                    acc = S
                    if xv[i] <= v:
                        acc += pw[i]
                    f[i] = q * acc
                    if 1.0 - xv[i] <= v:
                        tot += f[i] * pw[n - 1 - i]
            else:
                for s in range(n):
                    f[s] = q * pw[s]
                    S = 0.0
                    lo = s
                    for i in range(s + 1, n):
                        S = p * S + f[i - 1]
                        while lo < i and ((xv[i] - xv[lo]) / 2.0 > v or i - lo > span):
                            S -= f[lo] * pw[i - 1 - lo]
                            lo += 1
                        if lo == i or S < 0.0:
                            S = 0.0
                        f[i] = q * S
                    for e in range(s, n):
                        if (1.0 - xv[e] + xv[s]) / 2.0 <= v:
                            tot += f[e] * pw[n - 1 - e]
            F[k] = tot
    free(pw)
    free(f)
    return out


def dp_count_cdf(x, int m, bint circle, thresholds):
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef const double[::1] vv = np.ascontiguousarray(thresholds, dtype=np.float64)
    cdef int n = xv.shape[0]
    cdef Py_ssize_t K = vv.shape[0], k
    out = np.zeros(K)
    if m < 1:
        return out
    cdef double[::1] F = out
    fbuf = np.zeros((m, n))
    sbuf = np.zeros(m)
    cdef double[:, ::1] f = fbuf
    cdef double[::1] S = sbuf
    cdef double v, tot
    cdef int i, c, lo, s, e, start, nstart
    nstart = n if circle else 1
    with nogil:
        for k in range(K):
            v = vv[k]
            tot = 0.0
            for s in range(nstart):
                start = s if circle else 0
                for c in range(m):
                    S[c] = 0.0
                lo = start
                for i in range(start, n):
                    if i > start:
                        for c in range(m):
                            S[c] += f[c, i - 1]
                        while lo < i and (xv[i] - xv[lo]) / 2.0 > v:
                            for c in range(m):
                                S[c] -= f[c, lo]
                            lo += 1
                    if circle:
                        f[0, i] = 1.0 if i == start else 0.0
                    else:
                        f[0, i] = 1.0 if xv[i] <= v else 0.0
                    for c in range(1, m):
                        f[c, i] = S[c - 1] if i > start else 0.0
                for e in range(start, n):
                    if circle:
                        if (1.0 - xv[e] + xv[start]) / 2.0 <= v:
                            tot += f[m - 1, e]
                    elif 1.0 - xv[e] <= v:
                        tot += f[m - 1, e]
            F[k] = tot
    return out


def run_prob(long n, double p, cap_first, cap_mid, cap_last):
    cdef const long long[::1] cf = np.ascontiguousarray(cap_first, dtype=np.int64)
    cdef const long long[::1] cm = np.ascontiguousarray(cap_mid, dtype=np.int64)
    cdef const long long[::1] cl = np.ascontiguousarray(cap_last, dtype=np.int64)
    cdef Py_ssize_t T = cf.shape[0], t
    out = np.zeros(T)
    cdef double[::1] res = out
    cdef double q = 1.0 - p, S, a, tot, pi, dp
    cdef long i, j, c
    cdef double* hist = <double*> malloc(max(n, 1) * sizeof(double))
    cdef double* pw = <double*> malloc((n + 2) * sizeof(double))
    if hist == NULL or pw == NULL:
        free(hist); free(pw)
        raise MemoryError()
    pw[0] = 1.0
    for i in range(1, n + 2):
        pw[i] = pw[i - 1] * p
    with nogil:
        for t in range(T):
            c = cm[t]
            dp = pw[c + 1] if c + 1 <= n + 1 else 0.0
            S = 0.0
            tot = 0.0
            for i in range(n):
                if i > 0:
                    S = p * S + hist[i - 1]
                    j = i - 2 - c
                    if j >= 0:
                        S -= hist[j] * dp
                    if S < 0.0:
                        S = 0.0
                a = S
                if i <= cf[t]:
                    a += pw[i]
                a *= q
                hist[i] = a
                if n - 1 - i <= cl[t]:
                    tot += a * pw[n - 1 - i]
            res[t] = tot
    free(hist)
    free(pw)
    return out
