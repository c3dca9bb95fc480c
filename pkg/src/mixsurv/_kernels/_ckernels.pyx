# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled analysis kernels. Semantics mirror _pykernels exactly."""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND_NAME = "cython"


def arm_rmst_var(times, events, double tau):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] t = np.ascontiguousarray(times, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] e = np.ascontiguousarray(events, dtype=np.float64)
    cdef Py_ssize_t n = t.shape[0]
    if n == 0:
        raise ValueError("empty arm")

    cdef double S = 1.0, G = 1.0
    cdef double rmst = 0.0, prev = 0.0
    cdef double sigma2 = 0.0
    cdef Py_ssize_t i = 0, j
    cdef double u, d, c, Y, S_left, G_left, seg_end, w
    cdef bint truncated = 0

    # pass 1: rmst (needed for w in pass 2)
    cdef double S1 = 1.0
    cdef double last_u = 0.0
    i = 0
    while i < n:
        u = t[i]
        d = 0.0
        c = 0.0
        j = i
        while j < n and t[j] == u:
            if e[j] != 0.0:
                d += 1.0
            else:
                c += 1.0
            j += 1
        Y = <double>(n - i)
        seg_end = u if u < tau else tau
        if seg_end > prev:
            rmst += S1 * (seg_end - prev)
            prev = seg_end
        S1 *= 1.0 - d / Y
        last_u = u
        i = j
    if last_u < tau:
        rmst += S1 * (tau - last_u)
        if S1 > 0.0:
            truncated = 1

    # pass 2: plug-in variance terms at event times
    cdef double cum_k = 0.0
    prev = 0.0
    i = 0
    while i < n:
        u = t[i]
        d = 0.0
        c = 0.0
        j = i
        while j < n and t[j] == u:
            if e[j] != 0.0:
                d += 1.0
            else:
                c += 1.0
            j += 1
        Y = <double>(n - i)
        seg_end = u if u < tau else tau
        if seg_end > prev:
            cum_k += S * (seg_end - prev)
            prev = seg_end
        S_left = S
        G_left = G
        S *= 1.0 - d / Y
        if Y - d > 0.0:
            G *= 1.0 - c / (Y - d)
        if d > 0.0 and u <= tau and S > 0.0:
            w = rmst - cum_k
            sigma2 += w * w * (S_left - S) / (S_left * S * G_left)
        i = j

    # S_left * G_left ~ Y/n, so sigma2 already carries the factor n that
    # scales the Greenwood sum up to the limiting (per-sqrt(n)) variance.
    return rmst, sigma2, bool(truncated)


def logrank_stat(times, events, groups):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] t0 = np.ascontiguousarray(times, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] e0 = np.ascontiguousarray(events, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] g0 = np.ascontiguousarray(groups, dtype=np.float64)
    cdef Py_ssize_t n = t0.shape[0]
    if n == 0:
        raise ValueError("empty dataset")
    cdef cnp.ndarray[cnp.int64_t, ndim=1] order = np.argsort(t0, kind="stable")
    cdef cnp.ndarray[cnp.float64_t, ndim=1] t = t0[order]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] e = e0[order]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] g = g0[order]

    cdef double n1 = 0.0
    cdef Py_ssize_t i, j
    for i in range(n):
        n1 += g[i]

    cdef double num = 0.0, var = 0.0
    cdef double Y, Y1, d, d1, cnt1, u, frac
    Y1 = n1
    i = 0
    while i < n:
        u = t[i]
        d = 0.0
        d1 = 0.0
        cnt1 = 0.0
        j = i
        while j < n and t[j] == u:
            if e[j] != 0.0:
                d += 1.0
                if g[j] != 0.0:
                    d1 += 1.0
            if g[j] != 0.0:
                cnt1 += 1.0
            j += 1
        Y = <double>(n - i)
        if d > 0.0:
            frac = Y1 / Y
            num += d * frac - d1
            if Y > 1.0:
                var += d * frac * (1.0 - frac) * (Y - d) / (Y - 1.0)
        Y1 -= cnt1
        i = j
    return num, var
