"""Exhaustive scans over a tabulated function and over matroid independence masks.

Each scan returns the first violation in lexicographic order of its loop
indices, or all -1 when none exists.  Two interchangeable backends exist:
numba-compiled loops and vectorised numpy.  ``KSUBMOD_NO_NUMBA=1`` forces numpy;
object-dtype tables (values too large for int64) always use numpy.
"""

from __future__ import annotations

import os
from functools import lru_cache

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

INT_LIMIT = 2**60


def default_backend() -> str:
    if not HAVE_NUMBA or os.environ.get("KSUBMOD_NO_NUMBA", "").strip() not in ("", "0"):
        return "numpy"
    return "numba"


def _pick(backend: str | None, table: np.ndarray) -> str:
    backend = backend or default_backend()
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "numba" and (not HAVE_NUMBA or table.dtype == object):
        return "numpy"
    return backend


@lru_cache(maxsize=32)
def label_digits(n: int, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Digit matrix (N x n) of every labeling in index order, and the place values."""
    base = k + 1
    pw = np.array([base ** (n - 1 - p) for p in range(n)], dtype=np.int64)
    idx = np.arange(base**n, dtype=np.int64)
    digits = (idx[:, None] // pw[None, :]) % base
    digits.setflags(write=False)
    pw.setflags(write=False)
    return digits, pw


# ---------------------------------------------------------------- numpy paths


def _np_monotone(T, D, pw, k):
    n = D.shape[1]
    best = None
    for e in range(n):
        xs = np.nonzero(D[:, e] == 0)[0]
        for i in range(1, k + 1):
            bad = xs[T[xs] > T[xs + i * pw[e]]]
            if bad.size:
                cand = (int(bad[0]), e, i)
                if best is None or cand < best:
                    best = cand
    if best is None:
        return -1, -1
    x, e, i = best
    return x, x + i * int(pw[e])


def _np_pairwise(T, D, pw, k):
    n = D.shape[1]
    best = None
    for e in range(n):
        xs = np.nonzero(D[:, e] == 0)[0]
        for i in range(1, k + 1):
            for j in range(i + 1, k + 1):
                lhs = T[xs + i * pw[e]] + T[xs + j * pw[e]]
                bad = xs[lhs < 2 * T[xs]]
                if bad.size:
                    cand = (int(bad[0]), e, i, j)
                    if best is None or cand < best:
                        best = cand
    return best if best is not None else (-1, -1, -1, -1)


def _np_orthant(T, D, pw, k):
    n = D.shape[1]
    best = None
    for e in range(n):
        for e2 in range(n):
            if e2 == e:
                continue
            xs = np.nonzero((D[:, e] == 0) & (D[:, e2] == 0))[0]
            for i in range(1, k + 1):
                gx = T[xs + i * pw[e]] - T[xs]
                for j in range(1, k + 1):
                    ys = xs + j * pw[e2]
                    gy = T[ys + i * pw[e]] - T[ys]
                    bad = xs[gx < gy]
                    if bad.size:
                        cand = (int(bad[0]), e, i, e2, j)
                        if best is None or cand < best:
                            best = cand
    if best is None:
        return -1, -1, -1, -1
    x, e, i, e2, j = best
    return x, x + j * int(pw[e2]), e, i


def _np_ksub(T, D, pw):
    N = D.shape[0]
    for x in range(N - 1):
        ys = slice(x + 1, N)
        dx = D[x]
        dy = D[ys]
        agree = dy == dx
        meet = np.where(agree, dy, 0) @ pw
        join = np.where(agree | (dx == 0), dy, np.where(dy == 0, dx, 0)) @ pw
        bad = np.nonzero(T[x] + T[ys] < T[join] + T[meet])[0]
        if bad.size:
            return x, x + 1 + int(bad[0])
    return -1, -1


def _np_m3(masks, sizes, ext):
    for a in range(masks.shape[0]):
        sel = np.nonzero(sizes == sizes[a] + 1)[0]
        if not sel.size:
            continue
        bad = sel[(masks[sel] & ~masks[a] & ext[a]) == 0]
        if bad.size:
            return a, int(bad[0])
    return -1, -1


# ---------------------------------------------------------------- numba paths

if HAVE_NUMBA:

    @njit(cache=True)
    def _nb_monotone(T, D, pw, k):
        N, n = D.shape
        for x in range(N):
            for e in range(n):
                if D[x, e] != 0:
                    continue
                for i in range(1, k + 1):
                    y = x + i * pw[e]
                    if T[x] > T[y]:
                        return x, y
        return -1, -1

    @njit(cache=True)
    def _nb_pairwise(T, D, pw, k):
        N, n = D.shape
        for x in range(N):
            for e in range(n):
                if D[x, e] != 0:
                    continue
                for i in range(1, k + 1):
                    for j in range(i + 1, k + 1):
                        if T[x + i * pw[e]] + T[x + j * pw[e]] < 2 * T[x]:
                            return x, e, i, j
        return -1, -1, -1, -1

    @njit(cache=True)
    def _nb_orthant(T, D, pw, k):
        N, n = D.shape
        for x in range(N):
            for e in range(n):
                if D[x, e] != 0:
                    continue
                for i in range(1, k + 1):
                    gx = T[x + i * pw[e]] - T[x]
                    for e2 in range(n):
                        if e2 == e or D[x, e2] != 0:
                            continue
                        for j in range(1, k + 1):
                            y = x + j * pw[e2]
                            if gx < T[y + i * pw[e]] - T[y]:
                                return x, y, e, i
        return -1, -1, -1, -1

    @njit(cache=True)
    def _nb_ksub(T, D, pw):
        N, n = D.shape
        for x in range(N):
            for y in range(x + 1, N):
                m = 0
                jn = 0
                for p in range(n):
                    a = D[x, p]
                    b = D[y, p]
                    if a == b:
                        m += a * pw[p]
                        jn += a * pw[p]
                    elif a == 0:
                        jn += b * pw[p]
                    elif b == 0:
                        jn += a * pw[p]
                if T[x] + T[y] < T[jn] + T[m]:
                    return x, y
        return -1, -1

    @njit(cache=True)
    def _nb_m3(masks, sizes, ext):
        A = masks.shape[0]
        for a in range(A):
            for b in range(A):
                if sizes[b] == sizes[a] + 1 and (masks[b] & ~masks[a] & ext[a]) == 0:
                    return a, b
        return -1, -1


# ---------------------------------------------------------------- dispatch


def monotone_violation(T, n, k, backend=None):
    """First cover pair (x, x + e->i) with T[x] > T[y], ordered by (x, e, i)."""
    D, pw = label_digits(n, k)
    if _pick(backend, T) == "numba":
        return tuple(int(v) for v in _nb_monotone(T, D, pw, k))
    return _np_monotone(T, D, pw, k)


def pairwise_violation(T, n, k, backend=None):
    """First (x, e, i, j), i < j, with Δ_{e,i}(x) + Δ_{e,j}(x) < 0."""
    D, pw = label_digits(n, k)
    if _pick(backend, T) == "numba":
        return tuple(int(v) for v in _nb_pairwise(T, D, pw, k))
    return _np_pairwise(T, D, pw, k)


def orthant_violation(T, n, k, backend=None):
    """First (x, y, e, i) with y covering x away from e and Δ_{e,i}(x) < Δ_{e,i}(y)."""
    D, pw = label_digits(n, k)
    if _pick(backend, T) == "numba":
        return tuple(int(v) for v in _nb_orthant(T, D, pw, k))
    return _np_orthant(T, D, pw, k)


def ksub_violation(T, n, k, backend=None):
    """First index pair x < y with T[x] + T[y] < T[join] + T[meet]."""
    D, pw = label_digits(n, k)
    if _pick(backend, T) == "numba":
        return tuple(int(v) for v in _nb_ksub(T, D, pw))
    return _np_ksub(T, D, pw)


def augmentation_violation(masks, sizes, ext, backend=None):
    """First (a, b) with |B| = |A| + 1 and no element of B \\ A extending A."""
    masks = np.asarray(masks, dtype=np.int64)
    sizes = np.asarray(sizes, dtype=np.int64)
    ext = np.asarray(ext, dtype=np.int64)
    if _pick(backend, masks) == "numba":
        return tuple(int(v) for v in _nb_m3(masks, sizes, ext))
    return _np_m3(masks, sizes, ext)
