"""Almost split sequences and Auslander-Reiten quivers.

The fixed-size category C_[1,n] is handled by knitting: for each vertex Z
the ambient translate T = nu(Z)[-1] is computed from the Nakayama functor
and a projective resolution; when T leaves the window it is replaced by the
summand of a right [1,n]-approximation of T that carries the almost split
class. Every sequence is a cocone of a socle element of Ext^1(Z, X) and is
checked directly against the right almost split property.

The periodic category C_=m is built either by compressing the meshes of a
band between a section and its shift (``periodic_ar_quiver_method1``) or by
knitting inside C_=m from compressed seeds (``periodic_ar_quiver_method2``).
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .algebra import PathAlgebra
from .complexes import (ChainMap, Complex, ComplexError, Graded, StableHom, cocone_extension,
                        hom_space, identity_map, j_complex, shift, shift_map, stalk,
                        strip_contractible)
from .decomp import (are_isomorphic, decompose, end_algebra, is_indecomposable, radical,
                     term_signature)
from .modules import (Module, direct_sum_module, injective_rep, kernel, nakayama_on_projectives,
                      projective_cover, projective_rep, zero_module)
from .periodic import (PeriodicComplex, compress, compress_map, periodic_shift, unroll)


class TauError(RuntimeError):
    pass


class CapExceeded(RuntimeError):
    """Raised when knitting hits a cap; ``partial`` holds the quiver so far."""

    def __init__(self, msg: str, partial=None):
        super().__init__(msg)
        self.partial = partial


class SectionError(RuntimeError):
    pass


@dataclass
class Caps:
    max_vertices: int = 500
    max_multiplicity: int = 4
    max_n: int = 10
    max_resolution: int = 64

    @classmethod
    def parse(cls, text: str | None) -> "Caps":
        """``"vertices=200,multiplicity=3,n=8"``."""
        c = cls()
        if not text:
            return c
        for part in text.split(","):
            k, _, v = part.partition("=")
            k = k.strip()
            name = {"vertices": "max_vertices", "multiplicity": "max_multiplicity",
                    "n": "max_n", "resolution": "max_resolution"}.get(k, k)
            if not hasattr(c, name):
                raise ValueError(f"unknown cap {k!r}")
            setattr(c, name, int(v))
        return c


# -- Nakayama functor and resolutions ---------------------------------------

def nu_complex(Z: Complex):
    """nu(Z) as a complex of injective modules: (modules, differentials)."""
    alg = Z.alg
    mods, diffs = {}, {}
    if Z.is_zero():
        return mods, diffs
    for i in range(Z.lo, Z.hi + 1):
        mods[i] = injective_rep(alg, Z.term(i))
    for i in range(Z.lo, Z.hi):
        _, N = nakayama_on_projectives(alg, Z.term(i), Z.term(i + 1), Z.diff(i))
        diffs[i] = N
    return mods, diffs


def resolve(alg: PathAlgebra, mods: dict, diffs: dict, stop: int | None = None,
            max_steps: int = 64):
    """Complex of projectives P with a quasi-isomorphism phi: P -> M.

    Built from the top degree down: P^i covers the pullback of M^i and
    ker d_P^{i+1} over M^{i+1}. With ``stop`` the construction ends at that
    degree, which gives a right approximation of M by complexes living in
    degrees >= stop. Returns (P, {i: phi^i}).
    """
    p = alg.p
    if not mods:
        return Complex(alg, 0, []), {}
    top, bottom = max(mods), min(mods)
    terms: dict = {}
    dP: dict = {}
    phi: dict = {}
    i = top
    while True:
        M = mods.get(i) or zero_module(alg)
        Mn = mods.get(i + 1)
        rows = Mn.dim if Mn is not None else 0
        if i + 1 in terms:
            Pm = projective_rep(alg, terms[i + 1])
            D = dP.get(i + 1)
            if D is None:
                D = la.zeros(0, Pm.dim)
            Kp, Bk = kernel(D, Pm)
            ph = la.matmul(phi[i + 1], Bk, p) if rows else la.zeros(0, Kp.dim)
        else:
            Kp, Bk, ph = zero_module(alg), la.zeros(0, 0), la.zeros(rows, 0)
        dM = diffs.get(i)
        if dM is None or not rows:
            dM = la.zeros(rows, M.dim)
        S = direct_sum_module(M, Kp)
        C = np.concatenate([dM, (-ph) % p], axis=1)
        W, Bw = kernel(C, S)
        if W.dim:
            summands, E = projective_cover(W)
            G = la.matmul(Bw, E, p)
            terms[i] = summands
            phi[i] = G[:M.dim]
            if i + 1 in terms:
                dP[i] = la.matmul(Bk, G[M.dim:], p)
        if stop is not None and i <= stop:
            break
        if stop is None and W.dim == 0 and i < bottom:
            break
        i -= 1
        if top - i > max_steps:
            raise TauError("projective resolution does not terminate within cap "
                           "(infinite projective dimension?)")
    if not terms:
        return Complex(alg, 0, []), {}
    lo, hi = min(terms), max(terms)
    T = [terms.get(k, ()) for k in range(lo, hi + 1)]
    D = [dP.get(k) for k in range(lo, hi)]
    P = Complex(alg, lo, T, D)
    return P, phi


def is_contractible(X: Graded) -> bool:
    """Indecomposable projective-injective test: P --iso--> P in two adjacent
    degrees (J objects in C^b, K objects in C_=m)."""
    supp = X.support()
    if len(supp) != 2 and not (isinstance(X, PeriodicComplex) and X.m == 1):
        return False
    if isinstance(X, PeriodicComplex):
        a, b = supp
        # with m = 2 both orders are adjacent; the zero differential decides
        opts = [i for i, j in ((a, b), (b, a))
                if X.norm(i + 1) == j and not X.diff(j).any()]
        if not opts:
            return False
        i = opts[0]
    else:
        i = supp[0]
        if supp[1] != i + 1:
            return False
    D = X.diff(i)
    return D.shape[0] == D.shape[1] and la.rank(D, X.alg.p) == D.shape[0]


def ambient_tau(Z: Complex) -> Complex:
    """Minimal projective representative of nu(Z)[-1]."""
    if Z.is_zero():
        raise TauError("tau of the zero complex")
    Zmin, _, _ = strip_contractible(Z)
    if Zmin.is_zero():
        raise TauError("tau undefined at projective-injective")
    mods, diffs = nu_complex(Z)
    P, _ = resolve(Z.alg, mods, diffs)
    Pmin, _, _ = strip_contractible(P)
    return shift(Pmin, -1)


def window_approximation(T: Complex, lo: int, hi: int):
    """Right approximation phi: R -> T of T by complexes in degrees [lo, hi].

    Every chain map from such a complex into T factors through phi.
    """
    alg, p = T.alg, T.alg.p
    if hi <= lo:
        raise ValueError("window needs at least two degrees")
    mods = {i: projective_rep(alg, T.term(i)) for i in range(lo, hi)}
    diffs = {i: T.diff(i) for i in range(lo, hi - 1)}
    Tn = projective_rep(alg, T.term(hi))
    K, Bk = kernel(T.diff(hi), Tn)
    mods[hi] = K
    if Bk.shape[1]:
        D = la.solve(Bk, T.diff(hi - 1), p)
        assert D is not None
    else:
        D = la.zeros(0, mods[hi - 1].dim)
    diffs[hi - 1] = D
    R, phi = resolve(alg, mods, diffs, stop=lo)
    comps = {}
    for i in R.support():
        comps[i] = la.matmul(Bk, phi[i], p) if i == hi else phi[i]
    f = ChainMap(R, T, comps)
    assert f.is_chain_map()
    return R, f


# -- almost split sequences --------------------------------------------------

@dataclass
class ARSequence:
    """0 -> start --iota--> middle --pi--> end -> 0 with class delta."""

    start: Graded
    middle: Graded
    end: Graded
    iota: ChainMap
    pi: ChainMap
    delta: ChainMap | None = None
    kind: str = "ambient"

    def degreewise_ok(self) -> bool:
        E, X, Z = self.middle, self.start, self.end
        degs = set(E.support()) | set(X.support()) | set(Z.support())
        return all(sorted(E.term(i)) == sorted(X.term(i) + Z.term(i)) for i in degs)


def _null_annihilator(S: StableHom) -> np.ndarray:
    """Rows y with y . coords(f) = 0 exactly when f is null-homotopic."""
    L = S.hom.layout.size
    N = S.null
    if N.shape[1] == 0:
        return la.identity(L)
    return la.left_kernel_basis(N, S.hom.X.alg.p)


def socle_extensions(Z: Complex, X: Complex):
    """Classes delta: Z -> X[1] killed by rad End(Z) on the right and by
    rad End(X) on the left, modulo null-homotopic maps.

    Returns (hom space Hom(Z, X[1]), list of non-null coordinate vectors
    spanning the socle modulo null maps).
    """
    p = Z.alg.p
    X1 = shift(X, 1)
    H = hom_space(Z, X1)
    if H.dim == 0:
        return H, []
    S = StableHom(Z, X1)
    if S.dim == 0:
        return H, []
    Y = _null_annihilator(S)
    basis = H.basis()
    EZ, EX = end_algebra(Z), end_algebra(X)
    rows = []
    RZ = radical(EZ)
    for c in range(RZ.shape[1]):
        r = EZ.element(RZ[:, c])
        A = np.stack([H.coords(b @ r) for b in basis], axis=1)
        rows.append(la.matmul(Y, A, p))
    RX = radical(EX)
    for c in range(RX.shape[1]):
        s1 = shift_map(EX.element(RX[:, c]), 1)
        A = np.stack([H.coords(s1 @ b) for b in basis], axis=1)
        rows.append(la.matmul(Y, A, p))
    if rows:
        sol = la.kernel_basis(np.concatenate(rows, axis=0), p)
    else:
        sol = la.identity(H.dim)
    out = []
    for k in range(sol.shape[1]):
        v = sol[:, k]
        if la.matmul(Y, la.matmul(H.K, v.reshape(-1, 1), p), p).any():
            out.append(v)
    return H, out


def _ar_class(Z: Complex, X: Complex, phiX: ChainMap | None, T: Complex | None, seed: int = 0):
    """A socle class delta: Z -> X[1] seen by phiX: X -> T, or None."""
    H, socle = socle_extensions(Z, X)
    if not socle:
        return None
    cands = [H.element(v) for v in socle]
    if phiX is None:
        return cands[0]
    T1 = shift(T, 1)
    ST = StableHom(Z, T1)
    phi1 = shift_map(phiX, 1)

    def seen(d):
        f = ChainMap(Z, T1, (phi1 @ d).comps)
        return not ST.is_null(f)

    for d in cands:
        if seen(d):
            return d
    rng = np.random.default_rng(seed)
    p = Z.alg.p
    for _ in range(8):
        c = rng.integers(0, p, size=len(socle))
        v = sum(int(a) * s for a, s in zip(c, socle)) % p
        d = H.element(v)
        if seen(d):
            return d
    return None


def _sequence_from_class(Z: Complex, X: Complex, delta: ChainMap, kind: str) -> ARSequence:
    E, iota, pi = cocone_extension(delta, X)
    seq = ARSequence(X, E, Z, iota, pi, delta, kind)
    if not seq.degreewise_ok():
        raise TauError("degreewise multiplicity check failed")
    return seq


def almost_split_ending_at(Z: Complex, n: int | None = None, lo: int = 1,
                           seed: int = 0) -> ARSequence | None:
    """Almost split sequence ending at the indecomposable Z.

    With ``n`` None the sequence lives in C^b. Otherwise it lives in the
    window C_[lo,n]; None is returned when Z is Ext-projective there.
    """
    T = ambient_tau(Z)
    if n is None or (T.lo >= lo and T.hi <= n):
        delta = _ar_class(Z, T, None, None, seed)
        if delta is None:
            raise TauError("tau candidate rejected")
        return _sequence_from_class(Z, T, delta, "ambient")
    R, phi = window_approximation(T, lo, n)
    if R.is_zero() or StableHom(R, T).is_null(phi):
        return None
    D = decompose(R, seed=seed)
    for S, inc in zip(D.summands, D.incl):
        if is_contractible(S):
            continue
        phiS = phi @ inc
        if StableHom(S, T).is_null(phiS):
            continue
        delta = _ar_class(Z, S, phiS, T, seed)
        if delta is not None:
            return _sequence_from_class(Z, S, delta, "window")
    raise TauError("tau candidate rejected")


def tau(Z: Complex, n: int | None = None, lo: int = 1) -> Complex:
    """AR translate in C^b, or in C_[lo,n] when ``n`` is given."""
    if n is None:
        return ambient_tau(Z)
    seq = almost_split_ending_at(Z, n, lo)
    if seq is None:
        raise TauError("Z is Ext-projective in the window")
    return seq.start


def _solvable(A: np.ndarray, b: np.ndarray, p: int) -> bool:
    if not b.any():
        return True
    if A.shape[1] == 0:
        return False
    return la.solve(A, b, p) is not None


def rad_maps(W: Graded, Z: Graded, seed: int = 0) -> list:
    """Basis of rad(W, Z) for indecomposables W, Z."""
    iso = are_isomorphic(W, Z, seed) if term_signature(W) == term_signature(Z) else None
    if iso is None:
        return hom_space(W, Z).basis()
    f, _ = iso
    E = end_algebra(W)
    R = radical(E)
    return [f @ E.element(R[:, c]) for c in range(R.shape[1])]


def verify_almost_split(seq: ARSequence, universe, seed: int = 0) -> bool:
    """Non-split, and every radical map W -> Z from the universe factors
    through pi."""
    Z, E, pi = seq.end, seq.middle, seq.pi
    p = Z.alg.p
    if not (pi @ seq.iota).is_zero():
        return False
    HZZ = hom_space(Z, Z)
    HZE = hom_space(Z, E)
    A = np.stack([HZZ.coords(pi @ g) for g in HZE.basis()], axis=1) if HZE.dim else \
        la.zeros(HZZ.layout.size, 0)
    if _solvable(A, HZZ.coords(identity_map(Z)), p):
        return False
    for W in universe:
        rads = rad_maps(W, Z, seed)
        if not rads:
            continue
        HWE, HWZ = hom_space(W, E), hom_space(W, Z)
        A = np.stack([HWZ.coords(pi @ g) for g in HWE.basis()], axis=1) if HWE.dim else \
            la.zeros(HWZ.layout.size, 0)
        for h in rads:
            if not _solvable(A, HWZ.coords(h), p):
                return False
    return True


# -- quivers -----------------------------------------------------------------

@dataclass
class Vertex:
    obj: Graded
    label: str
    projective_injective: bool = False
    ext_projective: bool = False


@dataclass
class Mesh:
    """An almost split sequence placed in a quiver.

    ``parts[j]`` = (incl E_j -> E, proj E -> E_j, to_rep E_j -> V_j,
    from_rep V_j -> E_j) for the j-th middle summand, and ``start_iso`` =
    (to_rep X -> V, from_rep V -> X) for the start. The end object is the
    vertex representative itself.
    """

    start: int
    end: int
    middle: list
    seq: ARSequence | None
    parts: list
    start_iso: tuple
    kind: str = ""

    def arrow_into_end(self, j: int) -> ChainMap:
        inc, _, _, from_rep = self.parts[j]
        return self.seq.pi @ inc @ from_rep

    def arrow_from_start(self, j: int) -> ChainMap:
        _, prj, to_rep, _ = self.parts[j]
        return to_rep @ prj @ self.seq.iota @ self.start_iso[1]


class ARQuiver:
    """AR quiver of C_[1,n] (``kind="fixed"``) or C_=m (``kind="periodic"``)."""

    def __init__(self, alg: PathAlgebra, kind: str, size: int):
        self.alg = alg
        self.kind = kind
        self.size = size
        self.vertices: list[Vertex] = []
        self.meshes: list[Mesh] = []
        self.arrows: dict = {}
        self.notes: list[str] = []
        self.complete = True
        self._by_sig: dict = {}
        self._mesh_end: dict = {}
        self._mesh_start: dict = {}

    # registry
    def label_of(self, obj) -> str:
        from .notation import display
        if self.kind == "fixed":
            return display(obj, 1, max(self.size, obj.hi if not obj.is_zero() else 1))
        return display(obj)

    def find(self, obj, seed: int = 0):
        """(index, (rep -> obj, obj -> rep)) or None."""
        for k in self._by_sig.get(term_signature(obj), []):
            iso = are_isomorphic(self.vertices[k].obj, obj, seed)
            if iso is not None:
                return k, iso
        return None

    def register(self, obj, seed: int = 0):
        """Index of obj's vertex with (obj -> rep, rep -> obj); adds a vertex
        when obj is new."""
        hit = self.find(obj, seed)
        if hit is not None:
            k, (f, g) = hit
            return k, g, f, False
        k = len(self.vertices)
        label = self.label_of(obj)
        dup = sum(1 for v in self.vertices if v.label.split(" [")[0] == label)
        if dup:
            # notation does not separate e.g. the two K objects of period 2
            label += f" [{dup + 1}]"
        self.vertices.append(Vertex(obj, label, is_contractible(obj)))
        self._by_sig.setdefault(term_signature(obj), []).append(k)
        I = identity_map(obj)
        return k, I, I, True

    def add_mesh(self, seq: ARSequence, end: int, seed: int = 0, parts=None) -> tuple[Mesh, list]:
        """Place seq (whose end is vertex ``end``'s object) into the quiver.
        Returns the mesh and the indices of newly created vertices."""
        new = []
        s, to_s, from_s, fresh = self.register(seq.start, seed)
        if fresh:
            new.append(s)
        if parts is None:
            D = decompose(seq.middle, seed=seed)
            parts = list(zip(D.summands, D.incl, D.proj))
        middle, placed = [], []
        for S, inc, prj in parts:
            k, to_r, from_r, fresh = self.register(S, seed)
            if fresh:
                new.append(k)
            middle.append(k)
            placed.append((inc, prj, to_r, from_r))
        mesh = Mesh(s, end, middle, seq, placed, (to_s, from_s), seq.kind)
        self._place(mesh)
        return mesh, new

    def _place(self, mesh: Mesh) -> None:
        self.meshes.append(mesh)
        self._mesh_end[mesh.end] = len(self.meshes) - 1
        self._mesh_start[mesh.start] = len(self.meshes) - 1

    # queries
    @property
    def tau(self) -> dict:
        return {M.end: M.start for M in self.meshes}

    @property
    def tau_inv(self) -> dict:
        return {M.start: M.end for M in self.meshes}

    def mesh_ending_at(self, v: int) -> Mesh | None:
        k = self._mesh_end.get(v)
        return None if k is None else self.meshes[k]

    def mesh_starting_at(self, v: int) -> Mesh | None:
        k = self._mesh_start.get(v)
        return None if k is None else self.meshes[k]

    def objects(self) -> list:
        return [v.obj for v in self.vertices]

    def index_of_label(self, label: str) -> int:
        for k, v in enumerate(self.vertices):
            if v.label == label:
                return k
        raise KeyError(label)

    def locate(self, obj, seed: int = 0) -> int:
        hit = self.find(obj, seed)
        return -1 if hit is None else hit[0]

    def mesh_arrows(self) -> dict:
        """Arrow multiplicities read off the meshes."""
        out: dict = {}
        for M in self.meshes:
            cnt_in: dict = {}
            for j in M.middle:
                cnt_in[j] = cnt_in.get(j, 0) + 1
            for j, c in cnt_in.items():
                out[(j, M.end)] = max(out.get((j, M.end), 0), c)
                out[(M.start, j)] = max(out.get((M.start, j), 0), c)
        return out

    def successors(self, v: int) -> list:
        return sorted({b for (a, b), c in self.arrows.items() if a == v and c})

    def predecessors(self, v: int) -> list:
        return sorted({a for (a, b), c in self.arrows.items() if b == v and c})

    def arrow_rep(self, a: int, b: int, copy: int = 0) -> ChainMap:
        """An irreducible map between the representatives of a and b."""
        M = self.mesh_ending_at(b)
        if M is not None:
            js = [j for j, v in enumerate(M.middle) if v == a]
            if len(js) > copy:
                return M.arrow_into_end(js[copy])
        M = self.mesh_starting_at(a)
        if M is not None:
            js = [j for j, v in enumerate(M.middle) if v == b]
            if len(js) > copy:
                return M.arrow_from_start(js[copy])
        rc = RadicalCalculus(self.objects())
        reps = rc.irreducible_basis(a, b)
        if len(reps) > copy:
            return reps[copy]
        raise KeyError(f"no arrow {a} -> {b}")

    def summary(self) -> dict:
        return {"kind": self.kind, "size": self.size, "vertices": len(self.vertices),
                "arrows": sum(self.arrows.values()), "meshes": len(self.meshes),
                "projective_injective": sum(v.projective_injective for v in self.vertices),
                "complete": self.complete}


# -- radical calculus over a finite universe --------------------------------

class RadicalCalculus:
    """rad, rad^2 and rad^k between the objects of a universe of pairwise
    non-isomorphic indecomposables."""

    def __init__(self, universe, seed: int = 0):
        self.U = list(universe)
        self.seed = seed
        self._rad: dict = {}

    def rad(self, a: int, b: int) -> list:
        key = (a, b)
        if key not in self._rad:
            X, Y = self.U[a], self.U[b]
            if a == b:
                E = end_algebra(X)
                R = radical(E)
                self._rad[key] = [E.element(R[:, c]) for c in range(R.shape[1])]
            else:
                self._rad[key] = hom_space(X, Y).basis()
        return self._rad[key]

    def _coords(self, a: int, b: int, maps) -> np.ndarray:
        H = hom_space(self.U[a], self.U[b])
        if not maps:
            return la.zeros(H.layout.size, 0)
        return np.stack([H.coords(ChainMap(self.U[a], self.U[b], f.comps)) for f in maps],
                        axis=1)

    def rad2_span(self, a: int, b: int) -> np.ndarray:
        cols = []
        for w in range(len(self.U)):
            left = self.rad(a, w)
            if not left:
                continue
            right = self.rad(w, b)
            if not right:
                continue
            for g in right:
                for h in left:
                    cols.append(g @ h)
        p = self.U[a].alg.p
        C = self._coords(a, b, cols)
        return la.col_space(C, p) if C.shape[1] else C

    def arrow_multiplicity(self, a: int, b: int) -> int:
        R = self._coords(a, b, self.rad(a, b))
        if R.shape[1] == 0:
            return 0
        p = self.U[a].alg.p
        r1 = la.rank(R, p)
        R2 = self.rad2_span(a, b)
        return r1 - (R2.shape[1] if R2.shape[1] else 0)

    def irreducible_basis(self, a: int, b: int) -> list:
        """Maps in rad(a,b) whose classes form a basis of rad/rad^2."""
        p = self.U[a].alg.p
        span = self.rad2_span(a, b)
        out = []
        for f in self.rad(a, b):
            v = self._coords(a, b, [f])
            if not la.in_span(span, v[:, 0], p):
                out.append(f)
                span = np.concatenate([span, v], axis=1) if span.size else v
        return out

    def is_irreducible(self, f: ChainMap, a: int, b: int) -> bool:
        p = self.U[a].alg.p
        v = self._coords(a, b, [f])[:, 0]
        R = self._coords(a, b, self.rad(a, b))
        if not v.any() or not la.in_span(R, v, p):
            return False
        return not la.in_span(self.rad2_span(a, b), v, p)

    def rad_power_from(self, a: int, kmax: int) -> list:
        """[rad^k(a, w) for k = 1..kmax] as dicts w -> coordinate column span."""
        p = self.U[a].alg.p
        cur = {}
        for w in range(len(self.U)):
            maps = self.rad(a, w)
            if maps:
                C = la.col_space(self._coords(a, w, maps), p)
                if C.shape[1]:
                    cur[w] = C
        out = [cur]
        for _ in range(kmax - 1):
            nxt: dict = {}
            for w, C in cur.items():
                H = hom_space(self.U[a], self.U[w])
                hs = [ChainMap(self.U[a], self.U[w], H.layout.build(C[:, c]))
                      for c in range(C.shape[1])]
                for w2 in range(len(self.U)):
                    gs = self.rad(w, w2)
                    if not gs:
                        continue
                    comp = [g @ h for g in gs for h in hs]
                    D = self._coords(a, w2, comp)
                    if D.any():
                        nxt.setdefault(w2, []).append(D)
            cur = {}
            for w2, blocks in nxt.items():
                C = la.col_space(np.concatenate(blocks, axis=1), p)
                if C.shape[1]:
                    cur[w2] = C
            out.append(cur)
        return out


def is_irreducible(f: ChainMap, universe, seed: int = 0) -> bool:
    """f in rad(X, Y) but not in rad^2(X, Y), rad^2 taken over the universe.

    X = f.src and Y = f.tgt must be isomorphic to members of the universe;
    f is transported to the universe representatives first.
    """
    U = list(universe)
    a = b = None
    fa = fb = None
    for k, W in enumerate(U):
        if a is None:
            iso = are_isomorphic(W, f.src, seed)
            if iso is not None:
                a, fa = k, iso[0]          # W -> src
        if b is None:
            iso = are_isomorphic(f.tgt, W, seed)
            if iso is not None:
                b, fb = k, iso[0]          # tgt -> W
    if a is None or b is None:
        raise ValueError("source or target not in the universe")
    g = fb @ f @ fa
    g = ChainMap(U[a], U[b], g.comps)
    return RadicalCalculus(U, seed).is_irreducible(g, a, b)


def compute_arrows(Q: ARQuiver, seed: int = 0) -> dict:
    """Arrow multiplicities dim rad/rad^2 over the vertex set of Q."""
    rc = RadicalCalculus(Q.objects(), seed)
    out = {}
    for a in range(len(Q.vertices)):
        for b in range(len(Q.vertices)):
            if a == b:
                continue
            if not rc.rad(a, b):
                continue
            c = rc.arrow_multiplicity(a, b)
            if c:
                out[(a, b)] = c
    return out


# -- knitting C_[1,n] --------------------------------------------------------

def _fallback_sequence(Z: Complex, Q: ARQuiver, seed: int = 0) -> ARSequence | None:
    """Search existing vertices X for a verified almost split sequence
    X -> E -> Z."""
    universe = Q.objects()
    for V in Q.vertices:
        X = V.obj
        if V.projective_injective:
            continue
        H, socle = socle_extensions(Z, X)
        for v in socle:
            try:
                seq = _sequence_from_class(Z, X, H.element(v), "fallback")
            except (TauError, ComplexError):
                continue
            if verify_almost_split(seq, universe, seed):
                return seq
    return None


def knit_fixed_size(alg: PathAlgebra, n: int, caps: Caps | None = None, seed: int = 0,
                    arrows: str = "radical", verify: bool = True) -> ARQuiver:
    """AR quiver of C_[1,n](proj A) by knitting from stalks and J objects.

    ``arrows`` is "radical" (dim rad/rad^2 over the final vertex set),
    "mesh" (read off the meshes) or "none".
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    caps = caps or Caps()
    Q = ARQuiver(alg, "fixed", n)
    queue: deque = deque()
    for i in range(n, 0, -1):
        for v in range(alg.n):
            k, _, _, fresh = Q.register(stalk(alg, v, i), seed)
            if fresh:
                queue.append(k)
    for i in range(n - 1, 0, -1):
        for v in range(alg.n):
            k, _, _, fresh = Q.register(j_complex(alg, v, i), seed)
            if fresh:
                queue.append(k)
    pending = []
    while queue:
        z = queue.popleft()
        V = Q.vertices[z]
        if V.projective_injective:
            V.ext_projective = True
            continue
        try:
            seq = almost_split_ending_at(V.obj, n, seed=seed)
        except TauError:
            pending.append(z)
            continue
        if seq is None:
            V.ext_projective = True
            continue
        mesh, new = Q.add_mesh(seq, z, seed)
        _check_caps(Q, mesh, caps)
        queue.extend(new)
    for z in pending:
        seq = _fallback_sequence(Q.vertices[z].obj, Q, seed)
        if seq is None:
            Q.complete = False
            Q.notes.append(f"no almost split sequence found ending at {Q.vertices[z].label}")
            continue
        Q.notes.append(f"fallback search used for {Q.vertices[z].label}")
        Q.add_mesh(seq, z, seed)
    if verify:
        universe = Q.objects()
        for M in list(Q.meshes):
            if not verify_almost_split(M.seq, universe, seed):
                Q.complete = False
                Q.notes.append(f"mesh ending at {Q.vertices[M.end].label} failed verification")
    if arrows == "radical":
        Q.arrows = compute_arrows(Q, seed)
        for k, c in Q.mesh_arrows().items():
            if Q.arrows.get(k) != c:
                Q.notes.append("mesh arrows differ from rad/rad^2 arrows")
                break
    elif arrows == "mesh":
        Q.arrows = Q.mesh_arrows()
    return Q


def _check_caps(Q: ARQuiver, mesh: Mesh, caps: Caps) -> None:
    if len(Q.vertices) > caps.max_vertices:
        Q.complete = False
        raise CapExceeded("not finite type within caps", Q)
    for j in set(mesh.middle):
        if mesh.middle.count(j) > caps.max_multiplicity:
            Q.complete = False
            raise CapExceeded("not finite type within caps", Q)


def complex_length(X: Complex) -> int:
    return X.length


def strong_global_dimension(alg: PathAlgebra, cap: int = 10, seed: int = 0,
                            caps: Caps | None = None) -> int:
    """sup of the lengths of indecomposable minimal complexes.

    C_[1,n] is knitted for n = 2, 3, ... until no indecomposable
    non-contractible complex reaches length n - 1, i.e. touches both ends
    of the window.
    """
    best = 0
    for n in range(2, cap + 1):
        Q = knit_fixed_size(alg, n, caps, seed, arrows="none", verify=False)
        lengths = [v.obj.length for v in Q.vertices if not v.projective_injective]
        best = max(lengths) if lengths else 0
        if best < n - 1:
            return best
    raise CapExceeded(f"strong global dimension not certified <= {cap}")


# -- sections and bands -------------------------------------------------------

@dataclass
class Section:
    sigma: list
    shifted: list
    band: list
    meshes: list  # indices into the fixed quiver's meshes


def normalized_classes(Q: ARQuiver, seed: int = 0):
    """Iso classes of the vertices shifted to bottom degree 1.

    Returns (representatives, class index of each vertex)."""
    reps: list = []
    cls = []
    for V in Q.vertices:
        X = V.obj
        N = shift(X, X.bottom() - 1)
        k = -1
        for r, R in enumerate(reps):
            if term_signature(R) == term_signature(N) and are_isomorphic(R, N, seed) is not None:
                k = r
                break
        if k < 0:
            k = len(reps)
            reps.append(N)
        cls.append(k)
    return reps, cls


def _adjacency(Q: ARQuiver):
    succ: dict = {}
    pred: dict = {}
    for (a, b), c in Q.arrows.items():
        if c:
            succ.setdefault(a, set()).add(b)
            pred.setdefault(b, set()).add(a)
    return succ, pred


def _components(Q: ARQuiver) -> list:
    """Vertex sets of the connected components of the underlying graph."""
    succ, pred = _adjacency(Q)
    und = {v: succ.get(v, set()) | pred.get(v, set()) for v in range(len(Q.vertices))}
    left, comps = set(range(len(Q.vertices))), []
    while left:
        c = _reach([min(left)], und)
        comps.append(c)
        left -= c
    return comps


def _connected_transversals(cand, nbr, cls, size, max_tries):
    """Connected vertex sets with pairwise distinct classes, smallest first,
    up to the given size."""
    tries = 0
    seen = set()
    frontier = [frozenset([v]) for v in cand]
    for _ in range(size):
        nxt = []
        for S in frontier:
            if S in seen:
                continue
            seen.add(S)
            tries += 1
            if tries > max_tries:
                raise SectionError("no valid section found within the search cap; "
                                   "try a larger window n")
            if len({cls[v] for v in S}) < len(S):
                continue
            yield S
            for v in S:
                for w in nbr[v]:
                    if w not in S:
                        nxt.append(S | {w})
        frontier = list(dict.fromkeys(nxt))


def _reach(starts, nbrs) -> set:
    seen = set(starts)
    stack = list(starts)
    while stack:
        v = stack.pop()
        for w in nbrs.get(v, ()):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def check_section(Q: ARQuiver, sigma, seed: int = 0, classes=None):
    """Section built on ``sigma`` if it passes every band test, else (None, reason)."""
    if not Q.arrows:
        Q.arrows = Q.mesh_arrows()
    reps, cls = classes or normalized_classes(Q, seed)
    sigma = list(sigma)
    if any(Q.vertices[s].projective_injective for s in sigma):
        return None, "section contains a projective-injective vertex"
    shifted = []
    for s in sigma:
        k = Q.locate(shift(Q.vertices[s].obj, 1), seed)
        if k < 0:
            return None, f"shift of {Q.vertices[s].label} is not in the window"
        shifted.append(k)
    if set(shifted) & set(sigma):
        return None, "section meets its shift"
    succ, pred = _adjacency(Q)
    # connectedness inside sigma, component by component of the quiver
    und = {s: (succ.get(s, set()) | pred.get(s, set())) & set(sigma) for s in sigma}
    for comp in _components(Q):
        part = [s for s in sigma if s in comp]
        if part and _reach([part[0]], und) != set(part):
            return None, "section is not connected"
    band = _reach(sigma, succ) & _reach(shifted, pred)
    if not set(sigma) | set(shifted) <= band:
        return None, "some section vertex does not reach the shifted section"
    meshes = []
    for v in sorted(band - set(sigma)):
        V = Q.vertices[v]
        if V.projective_injective:
            continue
        M = Q.mesh_ending_at(v)
        if M is None or M.kind != "ambient":
            return None, f"{V.label} does not end an ambient mesh"
        if M.start not in band or not set(M.middle) <= band:
            return None, f"mesh ending at {V.label} leaves the band"
        meshes.append(Q._mesh_end[v])
    body = [v for v in band - set(shifted) if not Q.vertices[v].projective_injective]
    body_cls = [cls[v] for v in body]
    all_cls = {cls[k] for k, V in enumerate(Q.vertices) if not V.projective_injective}
    if len(set(body_cls)) != len(body_cls) or set(body_cls) != all_cls:
        return None, "band does not meet every shift class exactly once"
    for v in range(Q.alg.n):
        js = [b for b in band if Q.vertices[b].projective_injective
              and Q.vertices[b].obj.term(Q.vertices[b].obj.lo) == (v,)]
        if len(js) != 1:
            return None, f"band holds {len(js)} projective-injectives for vertex {v}"
    return Section(sorted(sigma), shifted, sorted(band), meshes), "ok"


def section_band(Q: ARQuiver, sigma=None, seed: int = 0, max_tries: int = 200000) -> Section:
    """A section Sigma with Sigma[1] in the quiver and its band of meshes.

    With ``sigma`` (vertex indices or labels) that section is validated;
    otherwise connected transversals are searched in increasing size.
    """
    classes = normalized_classes(Q, seed)
    if sigma is not None:
        idx = [Q.index_of_label(s) if isinstance(s, str) else int(s) for s in sigma]
        sec, why = check_section(Q, idx, seed, classes)
        if sec is None:
            raise SectionError(why)
        return sec
    if not Q.arrows:
        Q.arrows = Q.mesh_arrows()
    reps, cls = classes
    cand = [k for k, V in enumerate(Q.vertices) if not V.projective_injective
            and Q.locate(shift(V.obj, 1), seed) >= 0]
    cset = set(cand)
    succ, pred = _adjacency(Q)
    nbr = {v: (succ.get(v, set()) | pred.get(v, set())) & cset for v in cand}
    # a disconnected quiver gets one connected transversal per component
    parts = []
    for comp in _components(Q):
        ccls = {cls[k] for k in comp if not Q.vertices[k].projective_injective}
        if not ccls:
            continue
        ccand = [v for v in cand if v in comp]
        parts.append(_connected_transversals(ccand, nbr, cls, len(ccls), max_tries))
    if len(parts) == 1:
        choices = ((S,) for S in parts[0])
    else:
        choices = sorted(itertools.product(*[list(g) for g in parts]),
                         key=lambda c: sum(map(len, c)))
    for choice in choices:
        S = sorted(set().union(*choice))
        sec, _ = check_section(Q, S, seed, classes)
        if sec is not None:
            return sec
    raise SectionError("no valid section within the window; try a larger n")


# -- the periodic category -----------------------------------------------------

def _transport_mesh(P: ARQuiver, M: Mesh, i: int, m: int, seed: int = 0):
    """Add F_m(M[i]) to the periodic quiver P."""
    s = M.seq
    Xc = compress(shift(s.start, i), m)
    Ec = compress(shift(s.middle, i), m)
    Zc = compress(shift(s.end, i), m)
    iota = compress_map(shift_map(s.iota, i), m, Xc, Ec)
    pi = compress_map(shift_map(s.pi, i), m, Ec, Zc)
    end, to_e, _, _ = P.register(Zc, seed)
    if P.mesh_ending_at(end) is not None:
        raise SectionError(f"two meshes end at {P.vertices[end].label}")
    parts = []
    for inc, prj, _, _ in M.parts:
        S = inc.src
        Sc = compress(shift(S, i), m)
        parts.append((Sc, compress_map(shift_map(inc, i), m, Sc, Ec),
                      compress_map(shift_map(prj, i), m, Ec, Sc)))
    rep = P.vertices[end].obj
    seq = ARSequence(Xc, Ec, rep, iota, ChainMap(Ec, rep, (to_e @ pi).comps), None,
                     "transported")
    return P.add_mesh(seq, end, seed, parts=parts)


def _finish_periodic(P: ARQuiver, verify: bool, seed: int) -> None:
    P.arrows = P.mesh_arrows()
    if verify:
        universe = P.objects()
        for M in P.meshes:
            if not verify_almost_split(M.seq, universe, seed):
                P.complete = False
                P.notes.append(f"mesh ending at {P.vertices[M.end].label} failed verification")


def periodic_ar_quiver_method1(Q: ARQuiver, m: int, section: Section | None = None,
                               seed: int = 0, verify: bool = True) -> ARQuiver:
    """AR quiver of C_=m from the compressed shifts of a band of meshes."""
    if m < 2:
        raise ValueError("m must be at least 2")
    sec = section or section_band(Q, seed=seed)
    P = ARQuiver(Q.alg, "periodic", m)
    for i in range(m):
        for k in sec.meshes:
            _transport_mesh(P, Q.meshes[k], i, m, seed)
    _finish_periodic(P, verify, seed)
    return P


def _periodic_cokernel(f: ChainMap):
    """Degreewise cokernel of f: X -> E with projective terms: (Z, pi)."""
    from .modules import _homogeneous_span, identify_projective
    E = f.tgt
    alg, p, m = E.alg, E.alg.p, E.m
    terms, secs, pis = [], [], []
    for i in range(m):
        Em = projective_rep(alg, E.term(i))
        img = _homogeneous_span(Em, f.comp(i)) if Em.dim else la.zeros(0, 0)
        if Em.dim == 0:
            terms.append(())
            secs.append(la.zeros(0, 0))
            pis.append(la.zeros(0, 0))
            continue
        C = la.complement_basis(img, Em.dim, p)
        B = np.concatenate([img, C], axis=1)
        Binv = la.inverse(B, p)
        k = img.shape[1]
        q = Binv[k:]                       # E -> C coordinates
        labels = np.array([int(Em.labels[np.nonzero(C[:, j])[0][0]]) for j in range(C.shape[1])],
                          dtype=np.int64)
        acts = tuple(la.mul_chain(p, q, A, C) for A in Em.action)
        Qm = Module(alg, labels, acts)
        ident = identify_projective(Qm)
        if ident is None:
            raise TauError("cokernel of the knitted map is not projective")
        summands, iso = ident
        terms.append(summands)
        inv = la.inverse(iso, p)
        pis.append(la.matmul(inv, q, p))
        secs.append(la.matmul(C, iso, p))
    diffs = []
    for i in range(m):
        j = (i + 1) % m
        diffs.append(la.mul_chain(p, pis[j], E.diff(i), secs[i])
                     if pis[j].size and secs[i].size else
                     la.zeros(alg.sum_basis(terms[j]).dim, alg.sum_basis(terms[i]).dim))
    Z = PeriodicComplex(alg, m, terms, diffs)
    pi = ChainMap(E, Z, {i: pis[i] for i in range(m) if pis[i].size})
    assert pi.is_chain_map()
    return Z, pi


def periodic_ar_quiver_method2(Q: ARQuiver, m: int, section: Section | None = None,
                               seed: int = 0, verify: bool = True) -> ARQuiver:
    """AR quiver of C_=m by knitting inside C_=m.

    Seeds are the compressed band meshes (shift 0) and the projective-
    injective objects K = F_m(J[i]) together with their radicals
    F_m(rad J [i]). A vertex whose predecessors all have known starting
    meshes gets its own starting mesh from the cokernel of the map into
    the sum of tau^{-1} of its predecessors (and K when it is rad K).
    """
    from .periodic import periodic_direct_sum
    if m < 2:
        raise ValueError("m must be at least 2")
    sec = section or section_band(Q, seed=seed)
    P = ARQuiver(Q.alg, "periodic", m)
    for k in sec.meshes:
        _transport_mesh(P, Q.meshes[k], 0, m, seed)
    rad_of: dict = {}
    for k in sec.meshes:
        M = Q.meshes[k]
        for j, v in enumerate(M.middle):
            if not Q.vertices[v].projective_injective:
                continue
            incl = M.arrow_from_start(j)       # rad J -> J between representatives
            for i in range(m):
                Kc = compress(shift(incl.tgt, i), m)
                Rc = compress(shift(incl.src, i), m)
                ic = compress_map(shift_map(incl, i), m, Rc, Kc)
                kk, to_k, _, _ = P.register(Kc, seed)
                rr, _, from_r, _ = P.register(Rc, seed)
                g = to_k @ ic @ from_r
                g = ChainMap(P.vertices[rr].obj, P.vertices[kk].obj, g.comps)
                if all(e[0] != kk for e in rad_of.get(rr, [])):
                    rad_of.setdefault(rr, []).append((kk, g))
    progress = True
    while progress:
        progress = False
        for x in range(len(P.vertices)):
            V = P.vertices[x]
            if V.projective_injective or P.mesh_starting_at(x) is not None:
                continue
            Mx = P.mesh_ending_at(x)
            if Mx is None:
                continue
            preds = [w for w in Mx.middle if not P.vertices[w].projective_injective]
            if any(P.mesh_starting_at(w) is None for w in preds):
                continue
            targets = []
            used: dict = {}
            for w in preds:
                Mw = P.mesh_starting_at(w)
                occ = [j for j, v in enumerate(Mw.middle) if v == x]
                c = used.get(w, 0)
                used[w] = c + 1
                targets.append((Mw.end, Mw.arrow_into_end(occ[c])))
            targets.extend(rad_of.get(x, []))
            if not targets:
                continue
            objs = [P.vertices[t].obj for t, _ in targets]
            E = periodic_direct_sum(*objs)
            comps = {}
            for i in range(m):
                blocks = [g.comp(i) for _, g in targets]
                if V.obj.dim(i) and E.dim(i):
                    comps[i] = np.concatenate(blocks, axis=0) % Q.alg.p
            f = ChainMap(V.obj, E, comps)
            assert f.is_chain_map()
            Z, pi = _periodic_cokernel(f)
            z, to_z, _, _ = P.register(Z, seed)
            if P.mesh_ending_at(z) is not None:
                raise TauError(f"knitting reached {P.vertices[z].label} twice")
            rep = P.vertices[z].obj
            parts = []
            off = {i: 0 for i in range(m)}
            for O in objs:
                inc, prj = {}, {}
                for i in range(m):
                    d = O.dim(i)
                    if d:
                        I = la.identity(E.dim(i))
                        inc[i] = I[:, off[i]:off[i] + d]
                        prj[i] = I[off[i]:off[i] + d, :]
                        off[i] += d
                parts.append((O, ChainMap(O, E, inc), ChainMap(E, O, prj)))
            seq = ARSequence(V.obj, E, rep, f, ChainMap(E, rep, (to_z @ pi).comps), None,
                             "knitted")
            P.add_mesh(seq, z, seed, parts=parts)
            progress = True
    _finish_periodic(P, verify, seed)
    missing = [v.label for k, v in enumerate(P.vertices)
               if not v.projective_injective and P.mesh_ending_at(k) is None]
    if missing:
        P.complete = False
        P.notes.append("vertices without an ending mesh: " + ", ".join(missing))
    return P


def compare_quivers(A: ARQuiver, B: ARQuiver, seed: int = 0):
    """Vertex bijection up to iso preserving arrows and tau: (ok, report)."""
    if len(A.vertices) != len(B.vertices):
        return False, f"vertex counts {len(A.vertices)} != {len(B.vertices)}"
    phi = {}
    for k, V in enumerate(A.vertices):
        j = B.locate(V.obj, seed)
        if j < 0:
            return False, f"{V.label} has no counterpart"
        phi[k] = j
    if len(set(phi.values())) != len(phi):
        return False, "vertex map is not injective"
    arrows = {(phi[a], phi[b]): c for (a, b), c in A.arrows.items()}
    if arrows != B.arrows:
        return False, "arrows differ"
    if {phi[z]: phi[t] for z, t in A.tau.items()} != B.tau:
        return False, "tau differs"
    return True, "methods agree"


def covering_check(Q: ARQuiver, P: ARQuiver, m: int, pairs: int = 50, seed: int = 0) -> dict:
    """Counts, unroll round trips and the hom identity on sampled pairs."""
    from .periodic import hom_orbit_sum
    report = {"ok": True, "failures": []}
    reps, cls = normalized_classes(Q, seed)
    expected = m * len(reps)
    report["periodic_vertices"] = len(P.vertices)
    report["normalized_classes"] = len(reps)
    if len(P.vertices) != expected:
        report["ok"] = False
        report["failures"].append(f"|Ind| = {len(P.vertices)} but m x classes = {expected}")
    for V in P.vertices:
        try:
            Zhat, t, iso = unroll(V.obj, seed=seed)
        except Exception as exc:  # density failure is reported, not raised
            report["ok"] = False
            report["failures"].append(f"unroll failed at {V.label}: {exc}")
            continue
        if not (iso.is_chain_map() and iso.is_iso()):
            report["ok"] = False
            report["failures"].append(f"unroll iso invalid at {V.label}")
        if not any(term_signature(R) == term_signature(Zhat) and
                   are_isomorphic(R, Zhat, seed) is not None for R in reps):
            report["ok"] = False
            report["failures"].append(f"unrolled {V.label} is not a normalized class")
    rng = np.random.default_rng(seed)
    objs = Q.objects()
    for _ in range(pairs):
        X = objs[int(rng.integers(len(objs)))]
        Y = objs[int(rng.integers(len(objs)))]
        lhs, rhs = hom_orbit_sum(X, Y, m)
        if lhs != rhs:
            report["ok"] = False
            report["failures"].append(f"hom identity fails: {lhs} != {rhs}")
    report["pairs"] = pairs
    return report


def ambient_universe(Q: ARQuiver, lo: int | None = None, hi: int | None = None,
                     seed: int = 0) -> list:
    """Shifts of the normalized classes of Q whose support meets [lo, hi].

    When Q is knitted with n > s.gl.dim A these are all indecomposables of
    C^b(proj A) that can map to or from a complex supported in [lo, hi].
    """
    lo = 1 if lo is None else lo
    hi = Q.size if hi is None else hi
    reps, _ = normalized_classes(Q, seed)
    out = []
    for R in reps:
        for s in range(1 - hi, R.top() - lo + 1):
            X = shift(R, s)
            if X.top() >= lo and X.bottom() <= hi:
                out.append(X)
    return out


def irreducibility_transfer(Q: ARQuiver, P: ARQuiver, m: int, seed: int = 0) -> list:
    """For each arrow a -> b of the fixed quiver with m >= l(X + Y): the
    triple ((a, b), irreducible in C^b, F_m of it irreducible in C_=m)."""
    from .periodic import compress_map
    universe = ambient_universe(Q, seed=seed)
    rc_fixed = RadicalCalculus(universe, seed)
    out = []
    for (a, b), c in sorted(Q.arrows.items()):
        if not c:
            continue
        X, Y = Q.vertices[a].obj, Q.vertices[b].obj
        span = max(X.top(), Y.top()) - min(X.bottom(), Y.bottom())
        if m < span:
            continue
        f = Q.arrow_rep(a, b)
        irr_b = is_irreducible(f, rc_fixed.U, seed)
        irr_m = is_irreducible(compress_map(f, m), P.objects(), seed)
        out.append(((a, b), irr_b, irr_m))
    return out
