"""Pure numpy implementations of the hot kernels.

Same signatures and semantics as the compiled ``_kernels`` module; used when
the extension is not built or ``COVERPLACE_PURE=1`` is set.
"""

from __future__ import annotations

import math

import numpy as np

_CHUNK = 1 << 15


def _powers(p: float, n: int) -> np.ndarray:
    pw = np.empty(n + 1)
    pw[0] = 1.0
    for i in range(1, n + 1):
        pw[i] = pw[i - 1] * p
    return pw


def _chunk_terms(x: np.ndarray, masks: np.ndarray, circle: bool):
    """Candidate max terms for every mask in ``masks`` (all non-empty).

    Returns (vals, first, last, prev): vals has n + 2 columns ordered
    [left border | half-gaps ending at 0..n-1 | right border] for the line and
    [wrap | half-gaps | -inf] for the circle.
    """
    n = x.shape[0]
    ar = np.arange(n)
    bits = ((masks[:, None] >> ar[None, :]) & 1).astype(bool)
    first = np.argmax(bits, axis=1)
    last = n - 1 - np.argmax(bits[:, ::-1], axis=1)
    idx = np.where(bits, ar[None, :], -1)
    prev_inc = np.maximum.accumulate(idx, axis=1)
    prev = np.empty_like(prev_inc)
    prev[:, 0] = -1
    prev[:, 1:] = prev_inc[:, :-1]
    has_gap = bits & (prev >= 0)
    gaps = np.where(has_gap, (x[None, :] - x[np.maximum(prev, 0)]) / 2.0, -np.inf)
    vals = np.empty((masks.shape[0], n + 2))
    vals[:, 1 : n + 1] = gaps
    xf = x[first]
    xl = x[last]
    if circle:
        vals[:, 0] = (1.0 - xl + xf) / 2.0
        vals[:, n + 1] = -np.inf
    else:
        vals[:, 0] = xf
        vals[:, n + 1] = 1.0 - xl
    return vals, first, last, prev, bits


def _popcount(masks: np.ndarray, n: int) -> np.ndarray:
    ar = np.arange(n)
    return ((masks[:, None] >> ar[None, :]) & 1).sum(axis=1)


def enum_cost(x, weights, circle: bool) -> float:
    x = np.ascontiguousarray(x, dtype=float)
    weights = np.asarray(weights, dtype=float)
    n = x.shape[0]
    partial = [weights[0] * 1.0]
    total = 1 << n
    for start in range(1, total, _CHUNK):
        masks = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        w = weights[_popcount(masks, n)]
        keep = w != 0.0
        if not keep.any():
            continue
        masks, w = masks[keep], w[keep]
        vals = _chunk_terms(x, masks, circle)[0]
        partial.append(float(np.dot(w, vals.max(axis=1))))
    return math.fsum(partial)


def enum_subgradient(x, weights, circle: bool) -> np.ndarray:
    x = np.ascontiguousarray(x, dtype=float)
    weights = np.asarray(weights, dtype=float)
    n = x.shape[0]
    g = np.zeros(n)
    total = 1 << n
    for start in range(1, total, _CHUNK):
        masks = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        w = weights[_popcount(masks, n)]
        keep = w != 0.0
        if not keep.any():
            continue
        masks, w = masks[keep], w[keep]
        vals, first, last, prev, _ = _chunk_terms(x, masks, circle)
        arg = np.argmax(vals, axis=1)
        rows = np.arange(masks.shape[0])
        border_left = arg == 0
        border_right = arg == n + 1
        inner = ~(border_left | border_right)
        if circle:
            np.add.at(g, first[border_left], 0.5 * w[border_left])
            np.add.at(g, last[border_left], -0.5 * w[border_left])
        else:
            np.add.at(g, first[border_left], w[border_left])
            np.add.at(g, last[border_right], -w[border_right])
        i = arg[inner] - 1
        j = prev[rows[inner], i]
        np.add.at(g, i, 0.5 * w[inner])
        np.add.at(g, j, -0.5 * w[inner])
    return g


def dp_cdf_indep(x, p: float, circle: bool, thresholds, span: int = -1) -> np.ndarray:
    """Pr(A != empty and C0(x_A) <= v) for every v in ``thresholds``."""
    x = np.ascontiguousarray(x, dtype=float)
    v = np.asarray(thresholds, dtype=float)
    n = x.shape[0]
    q = 1.0 - p
    pw = _powers(p, n)
    if span < 0 or span > n:
        span = n
    out = np.zeros(v.shape[0])
    if not circle:
        f = np.zeros((v.shape[0], n))
        for i in range(n):
            lo = max(0, i - span)
            acc = np.where(x[i] <= v, pw[i], 0.0)
            if i > lo:
                gaps = (x[i] - x[lo:i]) / 2.0
                wts = pw[i - 1 - np.arange(lo, i)]
                allowed = gaps[None, :] <= v[:, None]
                acc = acc + (f[:, lo:i] * allowed) @ wts
            f[:, i] = q * acc
            out += np.where(1.0 - x[i] <= v, f[:, i] * pw[n - 1 - i], 0.0)
        return out
    for s in range(n):
        f = np.zeros((v.shape[0], n))
        f[:, s] = q * pw[s]
        for i in range(s + 1, n):
            lo = max(s, i - span)
            if i > lo:
                gaps = (x[i] - x[lo:i]) / 2.0
                wts = pw[i - 1 - np.arange(lo, i)]
                allowed = gaps[None, :] <= v[:, None]
                f[:, i] = q * ((f[:, lo:i] * allowed) @ wts)
        for e in range(s, n):
            wrap = (1.0 - x[e] + x[s]) / 2.0
            out += np.where(wrap <= v, f[:, e] * pw[n - 1 - e], 0.0)
    return out


def dp_count_cdf(x, m: int, circle: bool, thresholds) -> np.ndarray:
    """Number of m-element active sets with C0(x_A) <= v, per threshold."""
    x = np.ascontiguousarray(x, dtype=float)
    v = np.asarray(thresholds, dtype=float)
    n = x.shape[0]
    K = v.shape[0]
    out = np.zeros(K)
    if m < 1:
        return out
    starts = range(n) if circle else [None]
    for s in starts:
        # f[c][:, i]: count of chains with c+1 actives ending at i
        f = np.zeros((m, K, n))
        lo_i = 0 if s is None else s
        for i in range(lo_i, n):
            if s is None:
                f[0, :, i] = np.where(x[i] <= v, 1.0, 0.0)
            elif i == s:
                f[0, :, i] = 1.0
            if i > lo_i:
                gaps = (x[i] - x[lo_i:i]) / 2.0
                allowed = (gaps[None, :] <= v[:, None]).astype(float)
                for c in range(1, m):
                    f[c, :, i] = (f[c - 1, :, lo_i:i] * allowed).sum(axis=1)
        for e in range(lo_i, n):
            if s is None:
                ok = 1.0 - x[e] <= v
            else:
                ok = (1.0 - x[e] + x[s]) / 2.0 <= v
            out += np.where(ok, f[m - 1, :, e], 0.0)
    return out


def run_prob(n: int, p: float, cap_first, cap_mid, cap_last) -> np.ndarray:
    """Pr(at least one active, initial failure run <= cap_first, every
    interior run <= cap_mid, final run <= cap_last), vectorised over caps."""
    cf = np.asarray(cap_first, dtype=np.int64)
    cm = np.asarray(cap_mid, dtype=np.int64)
    cl = np.asarray(cap_last, dtype=np.int64)
    T = cf.shape[0]
    q = 1.0 - p
    width = int(min(n, max(int(cm.max(initial=0)) + 2, 1)))
    hist = np.zeros((width, T))
    drop_pw = np.power(p, np.minimum(cm + 1, 10**6).astype(float))
    S = np.zeros(T)
    out = np.zeros(T)
    cols = np.arange(T)
    pi = 1.0
    for i in range(n):
        if i > 0:
            S = p * S + hist[(i - 1) % width]
            j = i - 2 - cm
            drop = j >= 0
            if drop.any():
                S[drop] -= hist[j[drop] % width, cols[drop]] * drop_pw[drop]
            S[S < 0.0] = 0.0
        a = q * (np.where(i <= cf, pi, 0.0) + S)
        hist[i % width] = a
        out += np.where(n - 1 - i <= cl, a * p ** (n - 1 - i), 0.0)
        pi *= p
    return out
