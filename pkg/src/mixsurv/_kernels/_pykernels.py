"""Pure-NumPy reference implementation of the analysis kernels."""

import numpy as np

BACKEND_NAME = "numpy"


def arm_rmst_var(times, events, tau):
    """KM restricted mean, plug-in limiting variance, and truncation flag.

    Ties are handled events-first: censorings at an event time stay in the
    risk set for that event, and the censoring-survival estimate drops after
    the events. The variance term discretizes the squared survival in the
    integrand as the product of the left and right KM values, which keeps the
    sum equal to the familiar Greenwood-weighted form on untied data.
    """
    t = np.ascontiguousarray(times, dtype=np.float64)
    e = np.ascontiguousarray(events, dtype=np.float64)
    n = t.shape[0]
    if n == 0:
        raise ValueError("empty arm")

    u, start = np.unique(t, return_index=True)
    d = np.add.reduceat(e, start)
    counts = np.diff(np.append(start, n)).astype(np.float64)
    c = counts - d
    Y = (n - start).astype(np.float64)

    S = np.cumprod(1.0 - d / Y)
    S_left = np.concatenate(([1.0], S[:-1]))
    rem = Y - d
    G = np.cumprod(np.where(rem > 0.0, 1.0 - c / np.where(rem > 0.0, rem, 1.0), 1.0))
    G_left = np.concatenate(([1.0], G[:-1]))

    uc = np.minimum(u, tau)
    seg = S_left * (uc - np.concatenate(([0.0], uc[:-1])))
    cum_k = np.cumsum(seg)
    rmst = cum_k[-1]
    truncated = bool(u[-1] < tau and S[-1] > 0.0)
    if u[-1] < tau:
        rmst = rmst + S[-1] * (tau - u[-1])

    w = rmst - cum_k
    mask = (d > 0.0) & (u <= tau) & (S > 0.0)
    den = S_left * S * G_left
    term = np.zeros_like(w)
    np.divide(w * w * (S_left - S), den, out=term, where=mask)
    # S_left * G_left ~ Y/n, so each term already carries the factor n that
    # scales the Greenwood sum up to the limiting (per-sqrt(n)) variance.
    sigma2 = float(np.sum(term[mask]))
    return float(rmst), sigma2, truncated


def logrank_stat(times, events, groups):
    """Log-rank numerator (E1 - O1) and hypergeometric variance, pooled data."""
    t = np.ascontiguousarray(times, dtype=np.float64)
    e = np.ascontiguousarray(events, dtype=np.float64)
    g = np.ascontiguousarray(groups, dtype=np.float64)
    n = t.shape[0]
    if n == 0:
        raise ValueError("empty dataset")
    order = np.argsort(t, kind="stable")
    t, e, g = t[order], e[order], g[order]
    n1 = float(np.sum(g))

    u, start = np.unique(t, return_index=True)
    d = np.add.reduceat(e, start)
    d1 = np.add.reduceat(e * g, start)
    cnt1 = np.add.reduceat(g, start)
    Y = (n - start).astype(np.float64)
    Y1 = n1 - np.concatenate(([0.0], np.cumsum(cnt1)[:-1]))

    mask = d > 0.0
    frac = Y1 / Y
    num = float(np.sum((d * frac - d1)[mask]))
    vmask = mask & (Y > 1.0)
    vterm = np.zeros_like(frac)
    np.divide(d * frac * (1.0 - frac) * (Y - d), Y - 1.0, out=vterm, where=vmask)
    var = float(np.sum(vterm[vmask]))
    return num, var
