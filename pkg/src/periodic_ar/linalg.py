"""Dense linear algebra over the prime field F_p.

Matrices are int64 numpy arrays with entries in [0, p). Every function takes
the modulus explicitly; the package default is ``DEFAULT_PRIME``.
"""

from __future__ import annotations

import numpy as np

from . import _kernels

DEFAULT_PRIME = 32003

# float64 products are exact while inner_dim * (p-1)^2 < 2**53
_FLOAT_SAFE = 2.0 ** 53


class DimensionError(ValueError):
    pass


def backend() -> str:
    return _kernels.BACKEND


def as_fp(M, p: int) -> np.ndarray:
    A = np.asarray(M, dtype=np.int64)
    return np.mod(A, p)


def zeros(r: int, c: int) -> np.ndarray:
    return np.zeros((r, c), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def matmul(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    if A.shape[1] != B.shape[0]:
        raise DimensionError(f"cannot multiply {A.shape} by {B.shape}")
    k = A.shape[1]
    if k == 0 or A.shape[0] == 0 or B.shape[1] == 0:
        return zeros(A.shape[0], B.shape[1])
    if k * float(p - 1) ** 2 < _FLOAT_SAFE:
        C = A.astype(np.float64) @ B.astype(np.float64)
        return np.mod(C, p).astype(np.int64)
    return np.mod(A.astype(object) @ B.astype(object), p).astype(np.int64)


def mul_chain(p: int, *mats: np.ndarray) -> np.ndarray:
    """Product mats[0] @ mats[1] @ ... reduced mod p."""
    out = mats[0]
    for M in mats[1:]:
        out = matmul(out, M, p)
    return out


def _reduce(A: np.ndarray, p: int, ncols: int) -> np.ndarray:
    if A.shape[0] == 0 or ncols == 0:
        return np.zeros(0, dtype=np.int64)
    return _kernels.rref_inplace(A, p, ncols)


def rref(M, p: int = DEFAULT_PRIME, transform: bool = True):
    """Reduced row echelon form.

    Returns ``(R, pivots, T)`` with ``T @ M = R`` (mod p) and T invertible.
    With ``transform=False`` the third entry is None.
    """
    A = as_fp(M, p)
    r, c = A.shape
    if transform:
        work = np.concatenate([A, identity(r)], axis=1)
    else:
        work = A.copy()
    piv = _reduce(work, p, c)
    R = np.ascontiguousarray(work[:, :c])
    T = np.ascontiguousarray(work[:, c:]) if transform else None
    return R, [int(x) for x in piv], T


def rank(M, p: int = DEFAULT_PRIME) -> int:
    A = as_fp(M, p)
    if A.size == 0:
        return 0
    if A.shape[0] > A.shape[1]:
        A = np.ascontiguousarray(A.T)
    else:
        A = A.copy()
    return len(_reduce(A, p, A.shape[1]))


def kernel_basis(M, p: int = DEFAULT_PRIME) -> np.ndarray:
    """Columns spanning the right kernel of M."""
    A = as_fp(M, p)
    r, c = A.shape
    if c == 0:
        return zeros(0, 0)
    R, piv, _ = rref(A, p, transform=False)
    free = [j for j in range(c) if j not in set(piv)]
    K = zeros(c, len(free))
    for k, j in enumerate(free):
        K[j, k] = 1
        for i, pc in enumerate(piv):
            K[pc, k] = (-R[i, j]) % p
    assert not matmul(A, K, p).any()
    return K


def left_kernel_basis(M, p: int = DEFAULT_PRIME) -> np.ndarray:
    """Rows y with y @ M = 0, stacked as a matrix."""
    return kernel_basis(as_fp(M, p).T, p).T


def solve(M, b, p: int = DEFAULT_PRIME):
    """A solution x of M x = b, or None when b is not in the column span.

    ``b`` may be a vector or a matrix of right-hand sides (then all columns
    must be solvable).
    """
    A = as_fp(M, p)
    B = as_fp(b, p)
    vec = B.ndim == 1
    if vec:
        B = B.reshape(-1, 1)
    if B.shape[0] != A.shape[0]:
        raise DimensionError(f"rhs has {B.shape[0]} rows, matrix has {A.shape[0]}")
    r, c = A.shape
    work = np.concatenate([A, B], axis=1)
    piv = _reduce(work, p, c)
    rk = len(piv)
    if work[rk:, c:].any():
        return None
    X = zeros(c, B.shape[1])
    for i, pc in enumerate(piv):
        X[pc] = work[i, c:]
    return X[:, 0] if vec else X


def inverse(M, p: int = DEFAULT_PRIME):
    A = as_fp(M, p)
    n = A.shape[0]
    if A.shape[1] != n:
        return None
    if n == 0:
        return zeros(0, 0)
    R, piv, T = rref(A, p)
    if len(piv) < n:
        return None
    return T


def row_space(M, p: int = DEFAULT_PRIME) -> np.ndarray:
    """Reduced basis (as rows) of the row space."""
    R, piv, _ = rref(M, p, transform=False)
    return R[: len(piv)]


def col_space(M, p: int = DEFAULT_PRIME) -> np.ndarray:
    """Independent columns spanning the column space (a subset of M's columns)."""
    A = as_fp(M, p)
    if A.shape[1] == 0:
        return A
    _, piv, _ = rref(A, p, transform=False)
    return A[:, piv]


def in_span(basis_cols: np.ndarray, v, p: int = DEFAULT_PRIME) -> bool:
    v = as_fp(v, p)
    if not v.any():
        return True
    if basis_cols.shape[1] == 0:
        return False
    return solve(basis_cols, v, p) is not None


def complement_basis(sub_cols: np.ndarray, n: int, p: int = DEFAULT_PRIME) -> np.ndarray:
    """Standard basis vectors completing the column span of sub_cols to F_p^n."""
    A = as_fp(sub_cols, p).reshape(n, -1)
    work = np.concatenate([A, identity(n)], axis=1)
    _, piv, _ = rref(work, p, transform=False)
    extra = [j - A.shape[1] for j in piv if j >= A.shape[1]]
    return identity(n)[:, extra]


def random_matrix(rng: np.random.Generator, r: int, c: int, p: int) -> np.ndarray:
    return rng.integers(0, p, size=(r, c), dtype=np.int64)
