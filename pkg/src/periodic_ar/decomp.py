"""Krull-Schmidt machinery for complexes: endomorphism algebras, radicals,
idempotents, decompositions and isomorphism tests.

Everything here works uniformly for ``Complex`` and ``PeriodicComplex``.
Randomness comes from a numpy Generator seeded by the caller; every
certificate that leaves this module (idempotent, iso, decomposition) is
checked by exact matrix identities.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_factor, gf_gcdex, gf_mul, gf_pow

from . import linalg as la
from .complexes import ChainMap, Complex, Graded, HomSpace, hom_space, identity_map
from .modules import identify_projective, projective_rep, submodule
from .modules import _homogeneous_span


class PrimeTooSmall(ValueError):
    pass


class EndAlgebra:
    """End(X) with basis b_0..b_{d-1} (chain maps) and left-multiplication
    matrices L[i] (L[i][:, j] = coordinates of b_i b_j)."""

    def __init__(self, X: Graded):
        self.X = X
        self.p = X.alg.p
        self.H: HomSpace = hom_space(X, X)
        self.basis = self.H.basis()
        d = self.dim
        K = self.H.K
        if d:
            _, piv, _ = la.rref(K.T, self.p, transform=False)
            self._rows = piv
            self._Kinv = la.inverse(K[piv], self.p)
        L = np.zeros((d, d, d), dtype=np.int64)
        for i, bi in enumerate(self.basis):
            for j, bj in enumerate(self.basis):
                L[i, :, j] = self.coords(bi @ bj)
        self.L = L
        self.unit = self.coords(identity_map(X)) if d else np.zeros(0, dtype=np.int64)

    @property
    def dim(self) -> int:
        return self.H.dim

    def coords(self, f: ChainMap) -> np.ndarray:
        v = self.H.coords(f)
        x = la.matmul(self._Kinv, v[self._rows].reshape(-1, 1), self.p)[:, 0]
        return x

    def element(self, x) -> ChainMap:
        return self.H.element(x)

    def left(self, x) -> np.ndarray:
        """Matrix of left multiplication by the element with coordinates x."""
        x = np.asarray(x, dtype=np.int64)
        return np.tensordot(x, self.L, axes=1) % self.p

    def mul(self, x, y) -> np.ndarray:
        return la.matmul(self.left(x), np.asarray(y, dtype=np.int64).reshape(-1, 1),
                         self.p)[:, 0]


_END_CACHE: dict = {}


def end_algebra(X: Graded) -> EndAlgebra:
    hit = _END_CACHE.get(id(X))
    if hit is not None and hit.X is X:
        return hit
    E = EndAlgebra(X)
    if len(_END_CACHE) > 5000:
        _END_CACHE.clear()
    _END_CACHE[id(X)] = E
    return E


def radical(E: EndAlgebra) -> np.ndarray:
    """Columns: coordinates of a basis of the Jacobson radical of E."""
    d, p = E.dim, E.p
    if d == 0:
        return la.zeros(0, 0)
    if p <= d:
        raise PrimeTooSmall(f"increase field prime: p={p} must exceed dim End = {d}")
    cache = getattr(E, "_rad", None)
    if cache is not None:
        return cache
    tr = np.array([int(np.trace(E.L[i]) % p) for i in range(d)], dtype=np.int64)
    # T[i, j] = tr(L_{b_i b_j}) = sum_k (b_i b_j)_k tr(L_k)
    T = np.einsum("ikj,k->ij", E.L, tr) % p
    R = la.kernel_basis(T, p)
    E._rad = R
    return R


def radical_is_nilpotent(E: EndAlgebra) -> bool:
    R = radical(E)
    if R.shape[1] == 0:
        return True
    cur = R
    for _ in range(E.dim + 1):
        prods = []
        for a in range(R.shape[1]):
            La = E.left(R[:, a])
            prods.append(la.matmul(La, cur, E.p))
        cur = la.col_space(np.concatenate(prods, axis=1), E.p)
        if cur.shape[1] == 0 or not cur.any():
            return True
    return False


def _quotient_projector(E: EndAlgebra):
    """(Q, C): Q maps E-coordinates to coordinates of E/rad in the basis of
    the complement columns C."""
    d, p = E.dim, E.p
    R = radical(E)
    C = la.complement_basis(R, d, p)
    B = np.concatenate([R, C], axis=1)
    Binv = la.inverse(B, p)
    return Binv[R.shape[1]:], C


def _min_poly(E: EndAlgebra, x, Q) -> list[int]:
    """Minimal polynomial (monic, high degree first) of x in E/rad."""
    p = E.p
    k = Q.shape[0]
    Lx = E.left(x)
    powers = [E.unit % p]
    vecs = [la.matmul(Q, powers[0].reshape(-1, 1), p)[:, 0]]
    for deg in range(1, k + 1):
        nxt = la.matmul(Lx, powers[-1].reshape(-1, 1), p)[:, 0]
        q = la.matmul(Q, nxt.reshape(-1, 1), p)[:, 0]
        M = np.stack(vecs, axis=1)
        sol = la.solve(M, q, p)
        if sol is not None:
            # x^deg = sum sol_j x^j
            coeffs = [1] + [int((-sol[j]) % p) for j in range(deg - 1, -1, -1)]
            return coeffs
        powers.append(nxt)
        vecs.append(q)
    raise AssertionError("minimal polynomial degree exceeds dimension")


def _poly_eval(E: EndAlgebra, poly, x) -> np.ndarray:
    """Evaluate poly (high degree first) at x by Horner's rule."""
    p = E.p
    Lx = E.left(x)
    acc = np.zeros(E.dim, dtype=np.int64)
    for c in poly:
        acc = (la.matmul(Lx, acc.reshape(-1, 1), p)[:, 0] + int(c) * E.unit) % p
    return acc


def _lift_idempotent(E: EndAlgebra, e) -> np.ndarray:
    p = E.p
    for _ in range(64):
        e2 = E.mul(e, e)
        if (e2 == e).all():
            return e
        e3 = E.mul(e2, e)
        e = (3 * e2 - 2 * e3) % p
    raise AssertionError("idempotent lifting did not converge")


@dataclass
class Certificate:
    indecomposable: bool
    witness: object  # min poly (list) or idempotent coordinates
    kind: str


def _search(E: EndAlgebra, rng: np.random.Generator, tries: int = 60) -> Certificate:
    d, p = E.dim, E.p
    if d == 0:
        return Certificate(False, None, "zero object")
    R = radical(E)
    k = d - R.shape[1]
    if k == 1:
        return Certificate(True, [1, 0], "End/rad is the prime field")
    Q, _ = _quotient_projector(E)
    for _ in range(tries):
        x = rng.integers(0, p, size=d, dtype=np.int64)
        f = _min_poly(E, x, Q)
        _, factors = gf_factor([ZZ(c) for c in f], p, ZZ)
        if len(factors) == 1 and factors[0][1] == 1 and len(f) - 1 == k:
            return Certificate(True, f, "primitive element with irreducible minimal polynomial")
        if len(factors) >= 2:
            g = gf_pow(factors[0][0], factors[0][1], p, ZZ)
            h = [ZZ(1)]
            for fac, mult in factors[1:]:
                h = gf_mul(h, gf_pow(fac, mult, p, ZZ), p, ZZ)
            s, t, one = gf_gcdex(g, h, p, ZZ)
            # e = s*g is 0 mod g and 1 mod h
            epoly = [int(c) for c in gf_mul(s, g, p, ZZ)]
            e = _poly_eval(E, epoly, x)
            e = _lift_idempotent(E, e)
            if e.any() and not ((e - E.unit) % p == 0).all():
                return Certificate(False, e, "nontrivial idempotent")
    raise RuntimeError("could not decide indecomposability; rerun with another seed")


def certify(X: Graded, seed: int = 0) -> Certificate:
    return _search(end_algebra(X), np.random.default_rng(seed))


def is_indecomposable(X: Graded, seed: int = 0) -> bool:
    if X.is_zero():
        return False
    return certify(X, seed).indecomposable


# -- splitting ---------------------------------------------------------------

@dataclass
class Decomposition:
    obj: Graded
    summands: list
    incl: list  # ChainMap summand -> obj
    proj: list  # ChainMap obj -> summand

    def check(self) -> bool:
        total = None
        for S, i, q in zip(self.summands, self.incl, self.proj):
            if not (q @ i).equals(identity_map(S)):
                return False
            t = i @ q
            total = t if total is None else total + t
        if total is None:
            return self.obj.is_zero()
        return total.equals(identity_map(self.obj))


def _rebuild(X: Graded, terms: dict, diffs: dict):
    from .periodic import PeriodicComplex
    if isinstance(X, Complex):
        degs = sorted(terms)
        if not degs:
            return Complex(X.alg, 0, [])
        lo, hi = degs[0], degs[-1]
        T = [terms.get(i, ()) for i in range(lo, hi + 1)]
        D = [diffs.get(i) for i in range(lo, hi)]
        return Complex(X.alg, lo, T, D, check=False)
    m = X.m
    T = [terms.get(i, ()) for i in range(m)]
    D = [diffs.get(i) for i in range(m)]
    return PeriodicComplex(X.alg, m, T, D, check=False)


def image_summand(X: Graded, e: ChainMap):
    """Summand of X cut out by the idempotent e: (Y, incl, proj)."""
    alg, p = X.alg, X.alg.p
    incl, terms = {}, {}
    for i in X.support():
        M = projective_rep(alg, X.term(i))
        B = _homogeneous_span(M, e.comp(i))
        if B.shape[1] == 0:
            continue
        sub, Bm = submodule(M, B)
        ident = identify_projective(sub)
        assert ident is not None, "image of an idempotent is not projective"
        summands, iso = ident
        terms[i] = summands
        incl[i] = la.matmul(Bm, iso, p)
    proj = {}
    for i, I in incl.items():
        P = la.solve(I, e.comp(i), p)
        assert P is not None
        proj[i] = P
    diffs = {}
    for i in incl:
        j = X.succ(i)
        if j in incl:
            diffs[i] = la.mul_chain(p, proj[j], X.diff(i), incl[i])
        else:
            diffs[i] = la.zeros(0, alg.sum_basis(terms[i]).dim)
    # fill differentials into empty neighbours with correct shapes
    fixed = {}
    for i in terms:
        j = X.succ(i)
        rows = alg.sum_basis(terms[j]).dim if j in terms else 0
        fixed[i] = diffs[i] if diffs[i].shape[0] == rows else la.zeros(rows, diffs[i].shape[1])
    Y = _rebuild(X, terms, fixed)
    return Y, ChainMap(Y, X, incl), ChainMap(X, Y, proj)


def _components(X: Graded):
    """Split along the connected components of the summand graph."""
    nodes = [(i, k) for i in X.support() for k in range(len(X.term(i)))]
    if len(nodes) <= 1:
        return None
    parent = {nd: nd for nd in nodes}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    alg = X.alg
    for i in X.support():
        j = X.succ(i)
        if not X.term(j):
            continue
        S, T = alg.sum_basis(X.term(i)), alg.sum_basis(X.term(j))
        D = X.diff(i)
        for s in range(len(S.summands)):
            for t in range(len(T.summands)):
                if D[T.block(t), S.block(s)].any():
                    ra, rb = find((i, s)), find((j, t))
                    if ra != rb:
                        parent[ra] = rb
    groups: dict = {}
    for nd in nodes:
        groups.setdefault(find(nd), []).append(nd)
    if len(groups) <= 1:
        return None
    out = []
    for g in sorted(groups.values()):
        idem = {}
        for i in X.support():
            ks = [k for (dd, k) in g if dd == i]
            if not ks:
                continue
            S = alg.sum_basis(X.term(i))
            M = la.zeros(S.dim, S.dim)
            for k in ks:
                b = S.block(k)
                M[b, b] = la.identity(b.stop - b.start)
            idem[i] = M
        out.append(ChainMap(X, X, idem))
    return out


def split_once(X: Graded, seed: int = 0):
    """Nontrivial (Y, incl_Y, proj_Y, Z, incl_Z, proj_Z) or None."""
    if X.is_zero():
        return None
    comps = _components(X)
    if comps:
        e = comps[0]
    else:
        E = end_algebra(X)
        cert = _search(E, np.random.default_rng(seed))
        if cert.indecomposable:
            return None
        e = E.element(cert.witness)
    f = identity_map(X) - e
    Y, iy, py = image_summand(X, e)
    Z, iz, pz = image_summand(X, f)
    return Y, iy, py, Z, iz, pz


def decompose(X: Graded, seed: int = 0) -> Decomposition:
    out_s, out_i, out_p = [], [], []
    stack = [(X, identity_map(X), identity_map(X))]
    k = 0
    while stack:
        Y, inc, prj = stack.pop()
        if Y.is_zero():
            continue
        res = split_once(Y, seed=seed + k)
        k += 1
        if res is None:
            out_s.append(Y)
            out_i.append(inc)
            out_p.append(prj)
            continue
        A, ia, pa, B, ib, pb = res
        stack.append((B, inc @ ib, pb @ prj))
        stack.append((A, inc @ ia, pa @ prj))
    D = Decomposition(X, out_s, out_i, out_p)
    return D


# -- isomorphism -------------------------------------------------------------

def term_signature(X: Graded):
    return tuple((i, tuple(sorted(X.term(i)))) for i in X.support())


def _invert(f: ChainMap):
    p = f.src.alg.p
    inv = {}
    for i in set(f.src.support()) | set(f.tgt.support()):
        M = f.comp(i)
        if M.shape[0] != M.shape[1]:
            return None
        Mi = la.inverse(M, p)
        if Mi is None:
            return None
        inv[i] = Mi
    return ChainMap(f.tgt, f.src, inv)


def are_isomorphic(X: Graded, Y: Graded, seed: int = 0, tries: int = 3):
    """Mutually inverse chain maps (f: X -> Y, g: Y -> X), or None."""
    if not X.same_category(Y):
        return None
    if term_signature(X) != term_signature(Y):
        return None
    if X.is_zero():
        return identity_map(X), identity_map(Y)
    H = hom_space(X, Y)
    if H.dim == 0:
        return None
    rng = np.random.default_rng(seed)
    p = X.alg.p
    for _ in range(tries):
        f = H.element(rng.integers(0, p, size=H.dim, dtype=np.int64))
        g = _invert(f)
        if g is not None:
            assert g.is_chain_map()
            return f, g
    # deterministic fallback for indecomposable objects
    if is_indecomposable(X, seed):
        G = hom_space(Y, X)
        E = end_algebra(X)
        R = radical(E)
        for h in H.basis():
            for g in G.basis():
                c = E.coords(g @ h)
                if not la.in_span(R, c, p):
                    hinv = _invert(h)
                    if hinv is not None:
                        return h, hinv
    return None


def iso_class_index(X: Graded, reps: list, seed: int = 0) -> int:
    """Index of the representative isomorphic to X, or -1."""
    sig = term_signature(X)
    for k, R in enumerate(reps):
        if term_signature(R) == sig and are_isomorphic(X, R, seed) is not None:
            return k
    return -1
