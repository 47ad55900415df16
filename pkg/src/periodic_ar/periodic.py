"""m-periodic complexes of projectives and the compression functor F_m."""

from __future__ import annotations

import numpy as np

from . import linalg as la
from .algebra import PathAlgebra
from .complexes import (ChainMap, Complex, ComplexError, Graded, StableHom,
                        block_diag, hom_space, homotopy_space, shift)


class PeriodicComplex(Graded):
    """Terms Z^0..Z^{m-1}; d^i: Z^i -> Z^{i+1 mod m}."""

    def __init__(self, alg: PathAlgebra, m: int, terms, diffs=None, check: bool = True):
        if m < 1:
            raise ComplexError("period must be positive")
        terms = [tuple(int(v) for v in t) for t in terms]
        if len(terms) != m:
            raise ComplexError(f"need {m} terms, got {len(terms)}")
        dims = [alg.sum_basis(t).dim for t in terms]
        if diffs is None:
            diffs = [None] * m
        if len(diffs) != m:
            raise ComplexError(f"need {m} differentials, got {len(diffs)}")
        fixed = []
        for i, D in enumerate(diffs):
            shape = (dims[(i + 1) % m], dims[i])
            D = la.zeros(*shape) if D is None else la.as_fp(D, alg.p)
            if D.shape != shape:
                raise ComplexError(f"differential {i} has shape {D.shape}, expected {shape}")
            fixed.append(D)
        self.alg = alg
        self.m = m
        self.terms = tuple(terms)
        self.diffs = tuple(fixed)
        if check:
            self.validate()

    def validate(self) -> None:
        p = self.alg.p
        for i in range(self.m):
            j = (i + 1) % self.m
            if la.matmul(self.diffs[j], self.diffs[i], p).any():
                raise ComplexError(f"d^{j} d^{i} != 0")

    def norm(self, i: int) -> int:
        return i % self.m

    def support(self) -> list[int]:
        return [i for i in range(self.m) if self.terms[i]]

    def term(self, i: int) -> tuple[int, ...]:
        return self.terms[i % self.m]

    def diff(self, i: int) -> np.ndarray:
        return self.diffs[i % self.m]

    def key(self):
        return ("Z", self.m, self.terms, tuple(D.tobytes() for D in self.diffs))

    def __eq__(self, other):
        return isinstance(other, PeriodicComplex) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        names = ["+".join(self.alg.vertices[v] for v in t) or "0" for t in self.terms]
        return f"PeriodicComplex(m={self.m}, terms={names})"


def zero_periodic(alg: PathAlgebra, m: int) -> PeriodicComplex:
    return PeriodicComplex(alg, m, [()] * m)


def _residue_layout(X: Complex, m: int):
    """For each residue i, the degrees j = i mod m of X's window and the
    offsets of X^j inside the compressed term."""
    lay = [[] for _ in range(m)]
    if X.is_zero():
        return lay
    for j in range(X.lo, X.hi + 1):
        lay[j % m].append(j)
    return lay


def compress(X: Complex, m: int) -> PeriodicComplex:
    """F_m(X): term i is the sum of X^j over j = i mod m (increasing j),
    with block-diagonal differentials."""
    alg, p = X.alg, X.alg.p
    lay = _residue_layout(X, m)
    terms = [tuple(v for j in lay[i] for v in X.term(j)) for i in range(m)]
    diffs = []
    for i in range(m):
        i1 = (i + 1) % m
        rows = alg.sum_basis(terms[i1]).dim
        cols = alg.sum_basis(terms[i]).dim
        D = la.zeros(rows, cols)
        roff = _offsets(X, lay[i1])
        coff = _offsets(X, lay[i])
        for j in lay[i]:
            if j + 1 in roff:
                blk = X.diff(j)
                D[roff[j + 1]:roff[j + 1] + blk.shape[0], coff[j]:coff[j] + blk.shape[1]] = blk
        diffs.append(D % p)
    return PeriodicComplex(alg, m, terms, diffs, check=False)


def _offsets(X: Complex, degrees) -> dict:
    out, off = {}, 0
    for j in degrees:
        out[j] = off
        off += X.dim(j)
    return out


def compress_map(f: ChainMap, m: int, src: PeriodicComplex | None = None,
                 tgt: PeriodicComplex | None = None) -> ChainMap:
    """F_m(f) with components g^i = block matrix of f^j, j = i mod m."""
    X, Y = f.src, f.tgt
    src = src or compress(X, m)
    tgt = tgt or compress(Y, m)
    lx, ly = _residue_layout(X, m), _residue_layout(Y, m)
    comps = {}
    for i in range(m):
        cols = src.dim(i)
        rows = tgt.dim(i)
        if not rows or not cols:
            continue
        M = la.zeros(rows, cols)
        xo, yo = _offsets(X, lx[i]), _offsets(Y, ly[i])
        for j in lx[i]:
            if j in yo and j in f.comps:
                blk = f.comps[j]
                M[yo[j]:yo[j] + blk.shape[0], xo[j]:xo[j] + blk.shape[1]] = blk
        if M.any():
            comps[i] = M
    return ChainMap(src, tgt, comps)


def periodic_shift(Z: PeriodicComplex, s: int) -> PeriodicComplex:
    """Z[s]^i = Z^{i+s}, d = (-1)^s d^{i+s}."""
    m, p = Z.m, Z.alg.p
    sign = -1 if s % 2 else 1
    terms = [Z.term(i + s) for i in range(m)]
    diffs = [(sign * Z.diff(i + s)) % p for i in range(m)]
    return PeriodicComplex(Z.alg, m, terms, diffs, check=False)


def periodic_shift_map(f: ChainMap, s: int) -> ChainMap:
    m = f.src.m
    src, tgt = periodic_shift(f.src, s), periodic_shift(f.tgt, s)
    return ChainMap(src, tgt, {(i - s) % m: M for i, M in f.comps.items()})


def periodic_direct_sum(*objs: PeriodicComplex) -> PeriodicComplex:
    Z0 = objs[0]
    m = Z0.m
    terms = [tuple(v for Z in objs for v in Z.term(i)) for i in range(m)]
    diffs = [block_diag([Z.diff(i) for Z in objs]) for i in range(m)]
    return PeriodicComplex(Z0.alg, m, terms, diffs, check=False)


def k_complex(alg: PathAlgebra, summands, position: int, m: int) -> PeriodicComplex:
    """K_M: M --id--> M in positions (position, position+1), zero elsewhere."""
    if isinstance(summands, int):
        summands = (summands,)
    summands = tuple(summands)
    if m < 2:
        raise ComplexError("K objects need period at least 2")
    terms = [()] * m
    diffs = [None] * m
    pos = position % m
    terms[pos] = summands
    terms[(pos + 1) % m] = summands
    diffs[pos] = la.identity(alg.sum_basis(summands).dim)
    return PeriodicComplex(alg, m, terms, diffs)


def unfold(Z: PeriodicComplex, w: int) -> PeriodicComplex:
    """Regard an m-periodic complex as an (m*w)-periodic one."""
    mw = Z.m * w
    return PeriodicComplex(Z.alg, mw, [Z.term(i) for i in range(mw)],
                           [Z.diff(i) for i in range(mw)], check=False)


def periodic_hom_space(Z: PeriodicComplex, W: PeriodicComplex):
    if Z.m != W.m:
        raise ComplexError("period mismatch")
    return hom_space(Z, W)


def periodic_homotopy_space(Z: PeriodicComplex, W: PeriodicComplex):
    if Z.m != W.m:
        raise ComplexError("period mismatch")
    return homotopy_space(Z, W)


def periodic_stable_hom_dim(Z: PeriodicComplex, W: PeriodicComplex) -> int:
    if Z.m != W.m:
        raise ComplexError("period mismatch")
    return StableHom(Z, W).dim


def is_projective_injective(Z: PeriodicComplex, seed: int = 0) -> bool:
    """True iff Z is a finite sum of rotated K objects."""
    from .decomp import decompose, are_isomorphic
    for S in decompose(Z, seed=seed).summands:
        supp = S.support()
        if len(supp) != 2 or S.m < 2:
            return False
        i = supp[0] if S.norm(supp[0] + 1) == supp[1] else supp[1]
        K = k_complex(Z.alg, S.term(i), i, Z.m)
        if are_isomorphic(S, K, seed=seed) is None:
            return False
    return True


class DensityError(RuntimeError):
    pass


def _cut_unroll(Z: PeriodicComplex) -> Complex | None:
    """Bounded complex read off Z by cutting at the largest i with Z^i != 0
    and d^i = 0; its compression is Z up to shift."""
    m = Z.m
    cut = None
    for i in range(m - 1, -1, -1):
        if Z.terms[i] and not Z.diffs[i].any():
            cut = i
            break
    if cut is None:
        return None
    # degrees cut+1 .. cut+m carry Z^{cut+1} .. Z^{cut}
    terms = [Z.term(cut + k) for k in range(1, m + 1)]
    diffs = [Z.diff(cut + k) for k in range(1, m)]
    return Complex(Z.alg, cut + 1, terms, diffs, check=False)


def unroll(Z: PeriodicComplex, seed: int = 0, max_unfold: int = 8):
    """Find a bounded Zhat with bottom degree 1 and t in [0, m) such that
    F_m(Zhat[t]) is isomorphic to Z. Returns (Zhat, t, iso) where iso is a
    chain map F_m(Zhat[t]) -> Z.

    When every differential of Z is nonzero (possible when m is smaller than
    the length of the unrolled complex) Z is unfolded to period m*w and an
    indecomposable summand with a zero differential is unrolled instead.
    """
    from .decomp import are_isomorphic, decompose
    if Z.is_zero():
        raise DensityError("cannot unroll the zero complex")
    m = Z.m
    X0 = _cut_unroll(Z)
    if X0 is None:
        for w in range(2, max_unfold + 1):
            U = unfold(Z, w)
            for S in decompose(U, seed=seed).summands:
                X0 = _cut_unroll(S)
                if X0 is not None:
                    break
            if X0 is not None:
                break
    if X0 is None:
        raise DensityError("no bounded preimage: no zero differential after unfolding "
                           f"up to {max_unfold} periods")
    b = X0.bottom()
    Zhat = shift(X0, b - 1)
    t = (1 - b) % m
    F = compress(shift(Zhat, t), m)
    iso = are_isomorphic(F, Z, seed=seed)
    if iso is None:
        # a sign twist may separate the two when m is odd; try the G-shifted copy
        for q in (1, -1, 2):
            F = compress(shift(Zhat, t + q * m), m)
            iso = are_isomorphic(F, Z, seed=seed)
            if iso is not None:
                break
    if iso is None:
        raise DensityError("no bounded preimage: the cut complex does not compress to the input")
    return Zhat, t, iso[0]


def unfolding_witness(X: Complex, m: int, n: int | None = None, seed: int = 0):
    """Data for F_m(X), unfolded to period m*w, against the sum of the
    rotations F_{mw}(X)[mj], j in [0, w-1].

    Returns (w, unfolded F_m(X), list of summands F_{mw}(X)[mj], iso) with iso
    a chain map from the direct sum to the unfolded complex.
    """
    from .decomp import are_isomorphic
    if m < 1:
        raise ComplexError("m must be positive")
    if n is None:
        n = max(X.top(), 1) if not X.is_zero() else 1
    w = 1
    while m * w < n:
        w += 1
    U = unfold(compress(X, m), w)
    parts = [periodic_shift(compress(X, m * w), m * j) for j in range(w)]
    S = periodic_direct_sum(*parts)
    iso = are_isomorphic(S, U, seed=seed)
    if iso is None:
        raise DensityError("unfolded compression is not the expected sum")
    return w, U, parts, iso[0]


def hom_orbit_sum(X: Complex, Y: Complex, m: int) -> tuple[int, int]:
    """(dim Hom(F_m X, F_m Y), sum over j of dim Hom(X, Y[mj]))."""
    lhs = hom_space(compress(X, m), compress(Y, m)).dim
    if X.is_zero() or Y.is_zero():
        return lhs, 0
    # Y[mj] has support supp(Y) - mj; only finitely many j meet supp(X)
    jlo = (Y.lo - X.hi) // m - 1
    jhi = (Y.hi - X.lo) // m + 1
    rhs = 0
    for j in range(jlo, jhi + 1):
        Yj = shift(Y, m * j)
        if Yj.hi < X.lo or Yj.lo > X.hi:
            continue
        rhs += hom_space(X, Yj).dim
    return lhs, rhs
