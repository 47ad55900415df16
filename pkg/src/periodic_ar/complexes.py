"""Bounded complexes of projectives and their chain maps.

A term of a complex is a tuple of vertex indices (a direct sum of
indecomposable projectives, order significant) and a differential is the
total matrix of a module map between such sums, in the path bases of
``algebra.SumBasis``. The hom-space solver here is shared with the periodic
category: both ``Complex`` and ``PeriodicComplex`` implement the small
``Graded`` interface.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .algebra import PathAlgebra, hom_unknowns


class ComplexError(ValueError):
    pass


class Graded:
    """Interface shared by bounded and periodic complexes."""

    alg: PathAlgebra

    def support(self) -> list[int]:
        raise NotImplementedError

    def term(self, i: int) -> tuple[int, ...]:
        raise NotImplementedError

    def diff(self, i: int) -> np.ndarray:
        raise NotImplementedError

    def norm(self, i: int) -> int:
        return i

    def succ(self, i: int) -> int:
        return self.norm(i + 1)

    def dim(self, i: int) -> int:
        return self.alg.sum_basis(self.term(i)).dim

    def is_zero(self) -> bool:
        return not self.support()

    def same_category(self, other) -> bool:
        return type(self) is type(other) and getattr(self, "m", None) == getattr(other, "m", None)


# -- bounded complexes ------------------------------------------------------

class Complex(Graded):
    """Bounded complex with terms in degrees lo, lo+1, ...; d^i: X^i -> X^{i+1}."""

    def __init__(self, alg: PathAlgebra, lo: int, terms, diffs=None, check: bool = True):
        terms = [tuple(int(v) for v in t) for t in terms]
        if diffs is None:
            diffs = [None] * max(len(terms) - 1, 0)
        diffs = list(diffs)
        if len(diffs) != max(len(terms) - 1, 0):
            raise ComplexError("need one differential between consecutive terms")
        dims = [alg.sum_basis(t).dim for t in terms]
        fixed = []
        for k, D in enumerate(diffs):
            if D is None:
                D = la.zeros(dims[k + 1], dims[k])
            D = la.as_fp(D, alg.p)
            if D.shape != (dims[k + 1], dims[k]):
                raise ComplexError(f"differential in degree {lo + k} has shape {D.shape}, "
                                   f"expected {(dims[k + 1], dims[k])}")
            fixed.append(D)
        # trim empty ends
        a, b = 0, len(terms)
        while a < b and not terms[a]:
            a += 1
        while b > a and not terms[b - 1]:
            b -= 1
        self.alg = alg
        self.lo = lo + a if a < b else 0
        self.terms: tuple[tuple[int, ...], ...] = tuple(terms[a:b])
        self.diffs: tuple[np.ndarray, ...] = tuple(fixed[a:b - 1]) if b > a else ()
        if check:
            self.validate()

    # Graded interface
    @property
    def hi(self) -> int:
        return self.lo + len(self.terms) - 1

    def support(self) -> list[int]:
        return [self.lo + k for k, t in enumerate(self.terms) if t]

    def term(self, i: int) -> tuple[int, ...]:
        k = i - self.lo
        if 0 <= k < len(self.terms):
            return self.terms[k]
        return ()

    def diff(self, i: int) -> np.ndarray:
        k = i - self.lo
        if 0 <= k < len(self.diffs):
            return self.diffs[k]
        return la.zeros(self.dim(i + 1), self.dim(i))

    def validate(self) -> None:
        p = self.alg.p
        for k in range(len(self.diffs) - 1):
            if la.matmul(self.diffs[k + 1], self.diffs[k], p).any():
                raise ComplexError(f"d^{self.lo + k + 1} d^{self.lo + k} != 0")
        from .modules import projective_rep, is_module_map
        for k, D in enumerate(self.diffs):
            if D.any() and not is_module_map(D, projective_rep(self.alg, self.terms[k]),
                                            projective_rep(self.alg, self.terms[k + 1])):
                raise ComplexError(f"d^{self.lo + k} is not a module map")

    @property
    def length(self) -> int:
        s = self.support()
        return s[-1] - s[0] if s else 0

    def bottom(self) -> int:
        return self.support()[0]

    def top(self) -> int:
        return self.support()[-1]

    def key(self):
        return ("C", self.lo, self.terms, tuple(D.tobytes() for D in self.diffs))

    def __eq__(self, other):
        return isinstance(other, Complex) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        names = ["+".join(self.alg.vertices[v] for v in t) or "0" for t in self.terms]
        return f"Complex(lo={self.lo}, terms={names})"

    def with_degrees(self, lo: int, hi: int) -> tuple[list, list]:
        """Terms and differentials over the window [lo, hi] (padding zeros)."""
        terms = [self.term(i) for i in range(lo, hi + 1)]
        diffs = [self.diff(i) for i in range(lo, hi)]
        return terms, diffs


def stalk(alg: PathAlgebra, summands, degree: int) -> Complex:
    if isinstance(summands, int):
        summands = (summands,)
    return Complex(alg, degree, [tuple(summands)])


def j_complex(alg: PathAlgebra, v: int, degree: int) -> Complex:
    """P_v --id--> P_v in degrees (degree, degree+1)."""
    d = alg.proj_dim(v)
    return Complex(alg, degree, [(v,), (v,)], [la.identity(d)])


def zero_complex(alg: PathAlgebra) -> Complex:
    return Complex(alg, 0, [])


def shift(X: Complex, s: int) -> Complex:
    """X[s]^i = X^{i+s} with differential (-1)^s d^{i+s}."""
    if X.is_zero():
        return X
    sign = -1 if s % 2 else 1
    return Complex(X.alg, X.lo - s, X.terms, [(sign * D) % X.alg.p for D in X.diffs],
                   check=False)


def direct_sum(*objs: Complex) -> Complex:
    alg = objs[0].alg
    objs = [X for X in objs if not X.is_zero()]
    if not objs:
        return zero_complex(alg)
    lo = min(X.lo for X in objs)
    hi = max(X.hi for X in objs)
    terms, diffs = [], []
    for i in range(lo, hi + 1):
        terms.append(tuple(v for X in objs for v in X.term(i)))
    for i in range(lo, hi):
        diffs.append(block_diag([X.diff(i) for X in objs]))
    return Complex(alg, lo, terms, diffs, check=False)


def block_diag(mats) -> np.ndarray:
    r = sum(M.shape[0] for M in mats)
    c = sum(M.shape[1] for M in mats)
    out = la.zeros(r, c)
    i = j = 0
    for M in mats:
        out[i:i + M.shape[0], j:j + M.shape[1]] = M
        i += M.shape[0]
        j += M.shape[1]
    return out


# -- chain maps -------------------------------------------------------------

@dataclass
class ChainMap:
    """Degreewise total matrices f^i: X^i -> Y^i (missing degrees are zero)."""

    src: Graded
    tgt: Graded
    comps: dict = field(default_factory=dict)

    def comp(self, i: int) -> np.ndarray:
        i = self.src.norm(i)
        M = self.comps.get(i)
        if M is None:
            return la.zeros(self.tgt.dim(i), self.src.dim(i))
        return M

    def degrees(self) -> list[int]:
        return sorted(set(self.src.support()) & set(self.tgt.support()))

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        """self after other."""
        p = self.src.alg.p
        out = {}
        for i in other.degrees():
            if i in self.comps and i in other.comps:
                out[i] = la.matmul(self.comps[i], other.comps[i], p)
        return ChainMap(other.src, self.tgt, out)

    def __add__(self, other: "ChainMap") -> "ChainMap":
        p = self.src.alg.p
        out = dict(self.comps)
        for i, M in other.comps.items():
            out[i] = (out[i] + M) % p if i in out else M
        return ChainMap(self.src, self.tgt, out)

    def scale(self, c: int) -> "ChainMap":
        p = self.src.alg.p
        return ChainMap(self.src, self.tgt, {i: (c * M) % p for i, M in self.comps.items()})

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self) -> bool:
        return not any(M.any() for M in self.comps.values())

    def is_chain_map(self) -> bool:
        p = self.src.alg.p
        for i in self.src.support():
            j = self.src.succ(i)
            lhs = la.matmul(self.tgt.diff(i), self.comp(i), p)
            rhs = la.matmul(self.comp(j), self.src.diff(i), p)
            if (lhs != rhs).any():
                return False
        return True

    def is_iso(self) -> bool:
        for i in set(self.src.support()) | set(self.tgt.support()):
            M = self.comp(i)
            if M.shape[0] != M.shape[1] or la.rank(M, self.src.alg.p) != M.shape[0]:
                return False
        return True

    def equals(self, other: "ChainMap") -> bool:
        return (self - other).is_zero()


def identity_map(X: Graded) -> ChainMap:
    return ChainMap(X, X, {i: la.identity(X.dim(i)) for i in X.support()})


def zero_map(X: Graded, Y: Graded) -> ChainMap:
    return ChainMap(X, Y, {})


def shift_map(f: ChainMap, s: int) -> ChainMap:
    """f[s]: X[s] -> Y[s]; no sign is needed on components."""
    return ChainMap(shift(f.src, s), shift(f.tgt, s),
                    {i - s: M for i, M in f.comps.items()})


# -- hom spaces -------------------------------------------------------------

def _elem_stack(alg: PathAlgebra, src: tuple, tgt: tuple):
    """Cached (unknowns, stack of basis matrices) for Hom(sum src, sum tgt)."""
    cache = alg.__dict__.setdefault("_elem_cache", {})
    key = (src, tgt)
    hit = cache.get(key)
    if hit is None:
        unk = hom_unknowns(alg, src, tgt)
        S = alg.sum_basis(src)
        T = alg.sum_basis(tgt)
        E = np.zeros((len(unk), T.dim, S.dim), dtype=np.int64)
        rows = np.zeros(len(unk), dtype=np.int64)
        cols = np.zeros(len(unk), dtype=np.int64)
        for u, (t, s, q) in enumerate(unk):
            E[u, T.block(t), S.block(s)] = alg.rmul_matrix(q)
            rows[u] = T.position(t, q)
            cols[u] = S.offsets[s]
        hit = (unk, E, rows, cols)
        cache[key] = hit
    return hit


class Layout:
    """Coordinates for graded maps X^i -> Y^{i+k} by path coefficients."""

    def __init__(self, X: Graded, Y: Graded, k: int = 0):
        self.X, self.Y, self.k = X, Y, k
        self.blocks = []  # (i, j, E, rows, cols, offset)
        off = 0
        ysupp = set(Y.support())
        for i in X.support():
            j = Y.norm(i + k)
            if j not in ysupp:
                continue
            unk, E, rows, cols = _elem_stack(X.alg, X.term(i), Y.term(j))
            if not unk:
                continue
            self.blocks.append((i, j, E, rows, cols, off))
            off += len(unk)
        self.size = off

    def build(self, vec) -> dict:
        """Components {i: matrix X^i -> Y^{i+k}} of the combination ``vec``."""
        p = self.X.alg.p
        out = {}
        for i, j, E, rows, cols, off in self.blocks:
            c = np.asarray(vec[off:off + E.shape[0]], dtype=np.int64) % p
            if c.any():
                out[i] = np.tensordot(c, E, axes=1) % p
        return out

    def coords(self, comps: dict) -> np.ndarray:
        v = np.zeros(self.size, dtype=np.int64)
        for i, j, E, rows, cols, off in self.blocks:
            M = comps.get(i)
            if M is not None:
                v[off:off + E.shape[0]] = M[rows, cols]
        return v


def _mul_stack(E: np.ndarray, D: np.ndarray, p: int, left: bool) -> np.ndarray:
    """Stack products D @ E_u (left) or E_u @ D (right)."""
    n = E.shape[0]
    if left:
        out = la.matmul(D, E.transpose(1, 0, 2).reshape(E.shape[1], -1), p)
        return out.reshape(D.shape[0], n, E.shape[2]).transpose(1, 0, 2)
    out = la.matmul(E.reshape(-1, E.shape[2]), D, p)
    return out.reshape(n, E.shape[1], D.shape[1])


class HomSpace:
    """Basis of chain maps X -> Y with coordinate helpers."""

    def __init__(self, X: Graded, Y: Graded):
        if not X.same_category(Y):
            raise ComplexError("hom between objects of different categories")
        self.X, self.Y = X, Y
        self.layout = Layout(X, Y, 0)
        p = X.alg.p
        L = self.layout
        eqs = []
        by_deg = {b[0]: b for b in L.blocks}
        for i in X.support():
            j = X.succ(i)
            gens = X.alg.sum_basis(X.term(i)).generators
            rows_y = Y.dim(j)
            if rows_y == 0 or len(gens) == 0:
                continue
            C = np.zeros((rows_y * len(gens), L.size), dtype=np.int64)
            touched = False
            b = by_deg.get(i)
            if b is not None:
                _, _, E, _, _, off = b
                # d_Y^i f^i restricted to generator columns
                P = _mul_stack(E[:, :, gens], Y.diff(i), p, left=True)
                C[:, off:off + E.shape[0]] += P.reshape(E.shape[0], -1).T
                touched = True
            b = by_deg.get(j)
            if b is not None:
                _, _, E, _, _, off = b
                P = _mul_stack(E, X.diff(i)[:, gens], p, left=False)
                C[:, off:off + E.shape[0]] -= P.reshape(E.shape[0], -1).T
                touched = True
            if touched:
                eqs.append(C % p)
        if L.size == 0:
            K = la.zeros(0, 0)
        elif eqs:
            K = la.kernel_basis(np.concatenate(eqs, axis=0), p)
        else:
            K = la.identity(L.size)
        self.K = K  # columns: coordinates of basis maps

    @property
    def dim(self) -> int:
        return self.K.shape[1]

    def basis(self) -> list[ChainMap]:
        return [ChainMap(self.X, self.Y, self.layout.build(self.K[:, c]))
                for c in range(self.dim)]

    def element(self, vec) -> ChainMap:
        """Chain map with basis coefficients ``vec``."""
        p = self.X.alg.p
        v = la.matmul(self.K, np.asarray(vec, dtype=np.int64).reshape(-1, 1), p)[:, 0]
        return ChainMap(self.X, self.Y, self.layout.build(v))

    def coords(self, f: ChainMap) -> np.ndarray:
        return self.layout.coords(f.comps)

    def express(self, f: ChainMap):
        """Coefficients of f in the basis (None if f is not in the space)."""
        return la.solve(self.K, self.coords(f), self.X.alg.p)


_HOM_CACHE: dict = {}


def hom_space(X: Graded, Y: Graded) -> HomSpace:
    key = (id(X), id(Y))
    hit = _HOM_CACHE.get(key)
    if hit is not None and hit.X is X and hit.Y is Y:
        return hit
    H = HomSpace(X, Y)
    if len(_HOM_CACHE) > 20000:
        _HOM_CACHE.clear()
    _HOM_CACHE[key] = H
    return H


def homotopy_coords(X: Graded, Y: Graded, layout: Layout | None = None) -> np.ndarray:
    """Columns: coordinates (in the degree-0 layout) of d h + h d over a basis
    of graded maps h: X^i -> Y^{i-1}."""
    p = X.alg.p
    L = layout or Layout(X, Y, 0)
    H = Layout(X, Y, -1)
    cols = []
    for i, j, E, rows, cols_, off in H.blocks:
        for u in range(E.shape[0]):
            h = E[u]
            comps = {}
            # contribution to f^i: d_Y^{j} h with j = i-1
            a = la.matmul(Y.diff(j), h, p)
            if a.any():
                comps[i] = a
            # contribution to f^{pred}: h d_X^{pred}
            ip = X.norm(i - 1)
            b = la.matmul(h, X.diff(ip), p)
            if b.any():
                comps[ip] = (comps[ip] + b) % p if ip in comps else b
            cols.append(L.coords(comps))
    if not cols:
        return la.zeros(L.size, 0)
    return np.stack(cols, axis=1) % p


class StableHom:
    """Hom(X, Y) modulo null-homotopic maps."""

    def __init__(self, X: Graded, Y: Graded):
        self.hom = hom_space(X, Y)
        p = X.alg.p
        N = homotopy_coords(X, Y, self.hom.layout)
        self.null = la.col_space(N, p) if N.shape[1] else N
        self.null_rank = self.null.shape[1]

    @property
    def dim(self) -> int:
        return self.hom.dim - self.null_rank

    def is_null(self, f: ChainMap) -> bool:
        return la.in_span(self.null, self.hom.coords(f), self.hom.X.alg.p)


def homotopy_space(X: Graded, Y: Graded) -> list[ChainMap]:
    S = StableHom(X, Y)
    L = S.hom.layout
    return [ChainMap(X, Y, L.build(S.null[:, c])) for c in range(S.null.shape[1])]


def stable_hom_dim(X: Graded, Y: Graded) -> int:
    return StableHom(X, Y).dim


# -- cones and extensions ---------------------------------------------------

def cocone_extension(delta: ChainMap, X: Complex):
    """Degreewise split extension 0 -> X -> E -> Z -> 0 classified by
    delta: Z -> X[1]. Returns (E, iota, pi)."""
    Z = delta.src
    alg, p = Z.alg, Z.alg.p
    lo = min(X.lo if not X.is_zero() else Z.lo, Z.lo if not Z.is_zero() else X.lo)
    hi = max(X.hi if not X.is_zero() else Z.hi, Z.hi if not Z.is_zero() else X.hi)
    terms, diffs = [], []
    for i in range(lo, hi + 1):
        terms.append(X.term(i) + Z.term(i))
    for i in range(lo, hi):
        top = np.concatenate([X.diff(i), delta.comp(i)], axis=1)
        bot = np.concatenate([la.zeros(Z.dim(i + 1), X.dim(i)), Z.diff(i)], axis=1)
        diffs.append(np.concatenate([top, bot], axis=0) % p)
    E = Complex(alg, lo, terms, diffs)
    iota, pi = {}, {}
    for i in range(lo, hi + 1):
        dx, dz = X.dim(i), Z.dim(i)
        if dx + dz == 0:
            continue
        I = la.identity(dx + dz)
        if dx:
            iota[i] = I[:, :dx]
        if dz:
            pi[i] = I[dx:, :]
    return E, ChainMap(X, E, iota), ChainMap(E, Z, pi)


def mapping_cone(f: ChainMap) -> Complex:
    """cone(f)^i = X^{i+1} + Y^i with d = [[-d_X, 0], [f, d_Y]]."""
    X, Y = f.src, f.tgt
    alg, p = X.alg, X.alg.p
    degs = [i - 1 for i in X.support()] + Y.support()
    if not degs:
        return zero_complex(alg)
    lo, hi = min(degs), max(degs)
    terms, diffs = [], []
    for i in range(lo, hi + 1):
        terms.append(X.term(i + 1) + Y.term(i))
    for i in range(lo, hi):
        top = np.concatenate([(-X.diff(i + 1)) % p,
                              la.zeros(X.dim(i + 2), Y.dim(i))], axis=1)
        bot = np.concatenate([f.comp(i + 1), Y.diff(i)], axis=1)
        diffs.append(np.concatenate([top, bot], axis=0) % p)
    return Complex(alg, lo, terms, diffs)


# -- minimality -------------------------------------------------------------

def _find_unit(X: Complex):
    alg = X.alg
    for i in X.support():
        D = X.diff(i)
        if not D.any():
            continue
        S = alg.sum_basis(X.term(i))
        T = alg.sum_basis(X.term(i + 1))
        for s, v in enumerate(S.summands):
            for t, w in enumerate(T.summands):
                if v == w and D[T.offsets[t], S.offsets[s]] % alg.p:
                    return i, s, t
    return None


def _select(n: int, idx) -> np.ndarray:
    return la.identity(n)[:, list(idx)]


def strip_contractible(X: Complex):
    """Remove summands P --unit--> P. Returns (X_min, pi: X -> X_min,
    iota: X_min -> X) with pi iota = id and iota pi homotopic to id."""
    alg, p = X.alg, X.alg.p
    cur = X
    pis = {i: la.identity(X.dim(i)) for i in X.support()}
    iotas = {i: la.identity(X.dim(i)) for i in X.support()}
    while True:
        hit = _find_unit(cur)
        if hit is None:
            break
        i, s, t = hit
        S = alg.sum_basis(cur.term(i))
        T = alg.sum_basis(cur.term(i + 1))
        P = np.arange(S.offsets[s], S.offsets[s] + alg.proj_dim(S.summands[s]))
        B = np.setdiff1d(np.arange(S.dim), P)
        Pp = np.arange(T.offsets[t], T.offsets[t] + alg.proj_dim(T.summands[t]))
        C = np.setdiff1d(np.arange(T.dim), Pp)
        D = cur.diff(i)
        phi = D[np.ix_(Pp, P)]
        beta = D[np.ix_(Pp, B)]
        gamma = D[np.ix_(C, P)]
        delta = D[np.ix_(C, B)]
        phinv = la.inverse(phi, p)
        assert phinv is not None
        pb = la.matmul(phinv, beta, p)          # phi^-1 beta : B -> P
        gp = la.matmul(gamma, phinv, p)         # gamma phi^-1 : P' -> C
        new_delta = (delta - la.matmul(gamma, pb, p)) % p
        # Psi^i = [[1, pb], [0, 1]] on (P, B); Psi^{i+1} = [[1, 0], [-gp, 1]] on (P', C)
        nS, nT = S.dim, T.dim
        psi_i = la.identity(nS)
        psi_i[np.ix_(P, B)] = pb
        psi_i_inv = la.identity(nS)
        psi_i_inv[np.ix_(P, B)] = (-pb) % p
        psi_j = la.identity(nT)
        psi_j[np.ix_(C, Pp)] = (-gp) % p
        psi_j_inv = la.identity(nT)
        psi_j_inv[np.ix_(C, Pp)] = gp
        keep_i = [k for k in range(len(S.summands)) if k != s]
        keep_j = [k for k in range(len(T.summands)) if k != t]
        terms = list(cur.terms)
        lo = cur.lo
        terms[i - lo] = tuple(S.summands[k] for k in keep_i)
        terms[i + 1 - lo] = tuple(T.summands[k] for k in keep_j)
        diffs = list(cur.diffs)
        selB, selC = _select(nS, B), _select(nT, C)
        diffs[i - lo] = new_delta
        if i - 1 >= lo:
            diffs[i - 1 - lo] = la.matmul(selB.T, la.matmul(psi_i, cur.diff(i - 1), p), p)
        if i + 1 <= cur.hi - 1:
            diffs[i + 1 - lo] = la.matmul(la.matmul(cur.diff(i + 1), psi_j_inv, p), selC, p)
        nxt = Complex(alg, lo, terms, diffs, check=False)
        # update running projection / inclusion
        for deg, psi, psinv, sel in ((i, psi_i, psi_i_inv, selB), (i + 1, psi_j, psi_j_inv, selC)):
            pis[deg] = la.matmul(sel.T, la.matmul(psi, pis[deg], p), p)
            iotas[deg] = la.matmul(iotas[deg], la.matmul(psinv, sel, p), p)
        pis = {d: M for d, M in pis.items() if M.shape[0]}
        iotas = {d: M for d, M in iotas.items() if M.shape[1]}
        # rebuild with trimmed support and same degree labels
        cur = Complex(alg, nxt.lo, nxt.terms, nxt.diffs, check=False)
    if __debug__:
        cur.validate()
    pi = ChainMap(X, cur, {d: M for d, M in pis.items() if M.size})
    iota = ChainMap(cur, X, {d: M for d, M in iotas.items() if M.size})
    return cur, pi, iota


def is_minimal(X: Complex) -> bool:
    return _find_unit(X) is None


# -- extension conditions on the window [1, n] ------------------------------

def can_extend_left(X: Complex, lo: int = 1) -> bool:
    """d^lo is not a monomorphism."""
    if not X.term(lo):
        return True
    return la.rank(X.diff(lo), X.alg.p) < X.dim(lo)


def can_extend_right(X: Complex, hi: int) -> bool:
    """Some nonzero map X^hi -> P_j kills d^{hi-1}."""
    alg, p = X.alg, X.alg.p
    src = X.term(hi)
    if not src:
        return True
    D = X.diff(hi - 1)
    for j in range(alg.n):
        unk, E, _, _ = _elem_stack(alg, src, (j,))
        if not unk:
            continue
        if D.shape[1] == 0:
            return True
        P = _mul_stack(E, D, p, left=False).reshape(len(unk), -1).T
        if la.kernel_basis(P % p, p).shape[1] > 0:
            return True
    return False
