"""
Compiled dynamic-programming kernels.

Every kernel takes two float64 arrays and returns the full ``(n+1, m+1)``
accumulated matrix; row and column 0 hold each measure's boundary values.
Unreachable cells hold ``INF`` rather than ``np.inf`` so sums stay finite.
"""

import numpy as np
from numba import njit

INF = np.finfo(np.float64).max / 2.0


@njit(cache=True, nogil=True)
def dtw_matrix(a, b, radius, weights):
    n = a.shape[0]
    m = b.shape[0]
    C = np.full((n + 1, m + 1), INF)
    C[0, 0] = 0.0
    for i in range(1, n + 1):
        lo = max(1, i - radius)
        hi = min(m, i + radius)
        for j in range(lo, hi + 1):
            best = C[i - 1, j - 1]
            if C[i - 1, j] < best:
                best = C[i - 1, j]
            if C[i, j - 1] < best:
                best = C[i, j - 1]
            if best >= INF:
                continue
            diff = a[i - 1] - b[j - 1]
            C[i, j] = best + weights[abs(i - j)] * diff * diff
    return C


@njit(cache=True, nogil=True)
def lcss_matrix(a, b, epsilon):
    n = a.shape[0]
    m = b.shape[0]
    L = np.zeros((n + 1, m + 1))
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            if abs(a[i - 1] - b[j - 1]) < epsilon:
                L[i, j] = L[i - 1, j - 1] + 1.0
            elif L[i - 1, j] >= L[i, j - 1]:
                L[i, j] = L[i - 1, j]
            else:
                L[i, j] = L[i, j - 1]
    return L


@njit(cache=True, nogil=True)
def edr_matrix(a, b, epsilon):
    n = a.shape[0]
    m = b.shape[0]
    E = np.zeros((n + 1, m + 1))
    for i in range(1, n + 1):
        E[i, 0] = i
    for j in range(1, m + 1):
        E[0, j] = j
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            sub = 0.0 if abs(a[i - 1] - b[j - 1]) < epsilon else 1.0
            best = E[i - 1, j - 1] + sub
            if E[i - 1, j] + 1.0 < best:
                best = E[i - 1, j] + 1.0
            if E[i, j - 1] + 1.0 < best:
                best = E[i, j - 1] + 1.0
            E[i, j] = best
    return E


@njit(cache=True, nogil=True)
def erp_matrix(a, b, gap):
    n = a.shape[0]
    m = b.shape[0]
    E = np.zeros((n + 1, m + 1))
    for i in range(1, n + 1):
        E[i, 0] = E[i - 1, 0] + abs(a[i - 1] - gap)
    for j in range(1, m + 1):
        E[0, j] = E[0, j - 1] + abs(b[j - 1] - gap)
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            best = E[i - 1, j - 1] + abs(a[i - 1] - b[j - 1])
            cand = E[i - 1, j] + abs(a[i - 1] - gap)
            if cand < best:
                best = cand
            cand = E[i, j - 1] + abs(b[j - 1] - gap)
            if cand < best:
                best = cand
            E[i, j] = best
    return E


@njit(cache=True, nogil=True)
def msm_cost(x, y, z, c):
    if (y <= x <= z) or (y >= x >= z):
        return c
    return c + min(abs(x - y), abs(x - z))


@njit(cache=True, nogil=True)
def msm_matrix(a, b, c):
    n = a.shape[0]
    m = b.shape[0]
    D = np.full((n + 1, m + 1), INF)
    D[0, 0] = 0.0
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            best = D[i - 1, j - 1] + abs(a[i - 1] - b[j - 1])
            # split needs a predecessor of a_i, merge a predecessor of b_j
            if i > 1:
                cand = D[i - 1, j] + msm_cost(a[i - 1], a[i - 2], b[j - 1], c)
                if cand < best:
                    best = cand
            if j > 1:
                cand = D[i, j - 1] + msm_cost(b[j - 1], a[i - 1], b[j - 2], c)
                if cand < best:
                    best = cand
            D[i, j] = best
    return D


@njit(cache=True, nogil=True)
def twe_matrix(a, b, nu, lmbda):
    n = a.shape[0]
    m = b.shape[0]
    ap = np.zeros(n + 1)
    bp = np.zeros(m + 1)
    ap[1:] = a
    bp[1:] = b
    D = np.full((n + 1, m + 1), INF)
    D[0, 0] = 0.0
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            best = INF
            if D[i - 1, j - 1] < INF:
                best = (
                    D[i - 1, j - 1]
                    + abs(ap[i] - bp[j])
                    + abs(ap[i - 1] - bp[j - 1])
                    + 2.0 * nu * abs(i - j)
                )
            if D[i - 1, j] < INF:
                cand = D[i - 1, j] + abs(ap[i] - ap[i - 1]) + nu + lmbda
                if cand < best:
                    best = cand
            if D[i, j - 1] < INF:
                cand = D[i, j - 1] + abs(bp[j] - bp[j - 1]) + nu + lmbda
                if cand < best:
                    best = cand
            D[i, j] = best
    return D


@njit(cache=True, nogil=True)
def min_traceback(C):
    # exact for the DTW family: every move into (i, j) adds the same cell cost
    n = C.shape[0] - 1
    m = C.shape[1] - 1
    out = np.empty((n + m, 2), dtype=np.int64)
    i = n
    j = m
    k = 0
    out[k, 0] = i
    out[k, 1] = j
    k += 1
    while i > 1 or j > 1:
        if i == 1:
            j -= 1
        elif j == 1:
            i -= 1
        else:
            d = C[i - 1, j - 1]
            v = C[i - 1, j]
            h = C[i, j - 1]
            if d <= v and d <= h:
                i -= 1
                j -= 1
            elif v <= h:
                i -= 1
            else:
                j -= 1
        out[k, 0] = i
        out[k, 1] = j
        k += 1
    return out[:k][::-1].copy()


@njit(cache=True, nogil=True)
def dtw_path(a, b, radius, weights):
    C = dtw_matrix(a, b, radius, weights)
    return min_traceback(C), C[a.shape[0], b.shape[0]]


@njit(cache=True, nogil=True)
def traceback(D, diag, vert, horiz, rtol):
    """
    Walk back from ``(n, m)`` to ``(1, 1)`` through cells ``i, j >= 1``.

    At each cell the first predecessor (diagonal, vertical, horizontal) whose
    value plus the move cost reproduces the cell is taken; if none does, the
    smallest predecessor is taken with the same order breaking ties.
    Returns an ``(k, 2)`` array of 1-based pairs in forward order.
    """
    n = D.shape[0] - 1
    m = D.shape[1] - 1
    out = np.empty((n + m, 2), dtype=np.int64)
    i = n
    j = m
    k = 0
    out[k, 0] = i
    out[k, 1] = j
    k += 1
    while i > 1 or j > 1:
        target = D[i, j]
        tol = rtol * max(1.0, abs(target))
        ni = -1
        nj = -1
        if i > 1 and j > 1 and abs(D[i - 1, j - 1] + diag[i, j] - target) <= tol:
            ni, nj = i - 1, j - 1
        elif i > 1 and abs(D[i - 1, j] + vert[i, j] - target) <= tol:
            ni, nj = i - 1, j
        elif j > 1 and abs(D[i, j - 1] + horiz[i, j] - target) <= tol:
            ni, nj = i, j - 1
        else:
            best = INF * 2.0
            if i > 1 and j > 1 and D[i - 1, j - 1] < best:
                best = D[i - 1, j - 1]
                ni, nj = i - 1, j - 1
            if i > 1 and D[i - 1, j] < best:
                best = D[i - 1, j]
                ni, nj = i - 1, j
            if j > 1 and D[i, j - 1] < best:
                best = D[i, j - 1]
                ni, nj = i, j - 1
        i = ni
        j = nj
        out[k, 0] = i
        out[k, 1] = j
        k += 1
    return out[:k][::-1].copy()


@njit(cache=True, nogil=True)
def lcss_traceback(L, a, b, epsilon):
    n = L.shape[0] - 1
    m = L.shape[1] - 1
    out = np.empty((min(n, m), 2), dtype=np.int64)
    i = n
    j = m
    k = 0
    while i > 0 and j > 0:
        if abs(a[i - 1] - b[j - 1]) < epsilon and L[i, j] == L[i - 1, j - 1] + 1.0:
            out[k, 0] = i
            out[k, 1] = j
            k += 1
            i -= 1
            j -= 1
        elif L[i - 1, j] >= L[i, j - 1]:
            i -= 1
        else:
            j -= 1
    return out[:k][::-1].copy()
