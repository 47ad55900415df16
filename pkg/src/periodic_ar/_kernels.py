"""Row-reduction kernels mod p.

Two interchangeable implementations of the in-place reduction live here: a
numba-compiled scalar loop and a vectorised numpy loop. ``PERIODIC_AR_BACKEND``
selects one of them at import time (``numba`` by default, ``numpy`` to force
the fallback). Both take an int64 array with entries in [0, p) and reduce the
first ``ncols`` columns to reduced row echelon form, applying the same row
operations to any trailing columns.
"""

import os

import numpy as np

try:
    import numba as nb
except ImportError:  # pragma: no cover - numba is a declared dependency
    nb = None


def _inv_mod(a, p):
    return pow(int(a), p - 2, p)


def rref_inplace_numpy(A, p, ncols):
    rows = A.shape[0]
    pivots = np.empty(min(rows, ncols), dtype=np.int64)
    r = 0
    for c in range(ncols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            A[[r, k]] = A[[k, r]]
        inv = _inv_mod(A[r, c], p)
        if inv != 1:
            A[r] = (A[r] * inv) % p
        col = A[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            A[hit] = (A[hit] - np.outer(col[hit], A[r])) % p
        pivots[r] = c
        r += 1
    return pivots[:r]


if nb is not None:

    @nb.njit(cache=True)
    def _inv_mod_nb(a, p):
        result = 1
        base = a % p
        e = p - 2
        while e > 0:
            if e & 1:
                result = (result * base) % p
            base = (base * base) % p
            e >>= 1
        return result

    @nb.njit(cache=True)
    def rref_inplace_numba(A, p, ncols):
        rows = A.shape[0]
        width = A.shape[1]
        pivots = np.empty(min(rows, ncols), dtype=np.int64)
        r = 0
        for c in range(ncols):
            if r == rows:
                break
            k = -1
            for i in range(r, rows):
                if A[i, c] != 0:
                    k = i
                    break
            if k < 0:
                continue
            if k != r:
                for j in range(width):
                    tmp = A[r, j]
                    A[r, j] = A[k, j]
                    A[k, j] = tmp
            inv = _inv_mod_nb(A[r, c], p)
            if inv != 1:
                for j in range(c, width):
                    A[r, j] = (A[r, j] * inv) % p
            for i in range(rows):
                if i == r:
                    continue
                f = A[i, c]
                if f == 0:
                    continue
                for j in range(c, width):
                    if A[r, j] != 0:
                        A[i, j] = (A[i, j] - f * A[r, j]) % p
            pivots[r] = c
            r += 1
        return pivots[:r]

else:  # pragma: no cover
    rref_inplace_numba = None


def _select():
    want = os.environ.get("PERIODIC_AR_BACKEND", "numba").strip().lower()
    if want == "numba" and rref_inplace_numba is not None:
        return "numba", rref_inplace_numba
    return "numpy", rref_inplace_numpy


BACKEND, rref_inplace = _select()
