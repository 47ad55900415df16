"""Finite-dimensional modules over a path algebra.

A ``Module`` is a quiver representation stored in total form: a basis in
which every vector sits at a single vertex, plus one square matrix per arrow
describing left multiplication by that arrow. Module maps are plain total
matrices between such bases. For a sum of projectives the basis is the path
basis of ``SumBasis`` so that maps coming from complexes can be used as is.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .algebra import PathAlgebra


@dataclass(frozen=True)
class Module:
    alg: PathAlgebra
    labels: np.ndarray              # vertex of each basis vector
    action: tuple[np.ndarray, ...]  # one dim x dim matrix per arrow

    def __post_init__(self):
        d = len(self.labels)
        for k, A in enumerate(self.action):
            assert A.shape == (d, d), "arrow matrix shape mismatch"
            a = self.alg.arrows[k]
            if A.any():
                rows, cols = np.nonzero(A)
                assert (self.labels[cols] == a.source).all()
                assert (self.labels[rows] == a.target).all()
        # relations must act as zero
        for rel in self.alg.relations:
            M = la.identity(d)
            for a in rel:
                M = la.matmul(self.action[a], M, self.alg.p)
            assert not M.any(), "relation does not act as zero"

    @property
    def dim(self) -> int:
        return len(self.labels)

    def dimvec(self) -> list[int]:
        return [int((self.labels == v).sum()) for v in range(self.alg.n)]

    def at(self, v: int) -> np.ndarray:
        return np.nonzero(self.labels == v)[0]

    def path_action(self, path: int) -> np.ndarray:
        q = self.alg.paths[path]
        if not q.arrows:
            return np.diag((self.labels == q.source).astype(np.int64))
        M = self.action[q.arrows[0]]
        for a in q.arrows[1:]:
            M = la.matmul(self.action[a], M, self.alg.p)
        return M


def zero_module(alg: PathAlgebra) -> Module:
    return Module(alg, np.zeros(0, dtype=np.int64),
                  tuple(la.zeros(0, 0) for _ in alg.arrows))


def projective_rep(alg: PathAlgebra, summands) -> Module:
    """The module sum of P_v over ``summands`` in its path basis."""
    if isinstance(summands, int):
        summands = (summands,)
    sb = alg.sum_basis(tuple(summands))
    labels = sb.vertex_labels
    acts = []
    for k, a in enumerate(alg.arrows):
        A = la.zeros(sb.dim, sb.dim)
        ap = alg.index[(a.source, (k,))]
        for blk, v in enumerate(sb.summands):
            for x in alg.proj_basis[v]:
                z = alg.table[ap, x]
                if z >= 0:
                    A[sb.position(blk, int(z)), sb.position(blk, x)] = 1
        acts.append(A)
    return Module(alg, labels.copy(), tuple(acts))


def injective_basis(alg: PathAlgebra, v: int) -> list[int]:
    """Paths ending at v; I_v has basis their duals."""
    return [k for k, q in enumerate(alg.paths) if q.target == v]


def injective_rep(alg: PathAlgebra, summands) -> Module:
    """Sum of the injectives I_v = D(e_v A) in the dual path basis."""
    if isinstance(summands, int):
        summands = (summands,)
    bases = [injective_basis(alg, v) for v in summands]
    offs = np.cumsum([0] + [len(b) for b in bases])
    d = int(offs[-1])
    labels = np.array([alg.paths[k].source for b in bases for k in b], dtype=np.int64)
    acts = []
    for ai, a in enumerate(alg.arrows):
        A = la.zeros(d, d)
        ap = alg.index[(a.source, (ai,))]
        for blk, b in enumerate(bases):
            loc = {k: i for i, k in enumerate(b)}
            for i, q in enumerate(b):
                # a . q* = r* when q = r a
                qq = alg.paths[q]
                if qq.arrows and qq.arrows[0] == ai:
                    r = alg.index[(a.target, qq.arrows[1:])]
                    A[offs[blk] + loc[r], offs[blk] + i] = 1
        acts.append(A)
    return Module(alg, labels, tuple(acts))


def nakayama_on_projectives(alg: PathAlgebra, src, tgt, f: np.ndarray):
    """Apply nu = D Hom(-, A) to a map between sums of projectives.

    ``f`` is a total matrix sum P_src -> sum P_tgt. Returns the injective
    sum (as a module) for the target and the total matrix of nu(f) in the
    dual path bases.
    """
    from .algebra import hom_unknowns, coefficients
    src, tgt = tuple(src), tuple(tgt)
    coeff = coefficients(alg, src, tgt, f)
    unk = hom_unknowns(alg, src, tgt)
    sb = [injective_basis(alg, v) for v in src]
    tb = [injective_basis(alg, v) for v in tgt]
    so = np.cumsum([0] + [len(b) for b in sb])
    to = np.cumsum([0] + [len(b) for b in tb])
    N = la.zeros(int(to[-1]), int(so[-1]))
    for (t, s, p), c in zip(unk, coeff):
        if not c:
            continue
        tloc = {k: i for i, k in enumerate(tb[t])}
        for i, q in enumerate(sb[s]):
            # nu(rho_p)(q*) = y* where q = p y
            for y in tloc:
                if alg.table[p, y] == q:
                    N[to[t] + tloc[y], so[s] + i] += c
    return injective_rep(alg, tgt), N % alg.p


# -- submodules, kernels, images ------------------------------------------

def _homogeneous_span(M: Module, cols: np.ndarray) -> np.ndarray:
    """Vertex-homogeneous basis of the span of columns (assumed homogeneous
    span, i.e. a graded subspace)."""
    p = M.alg.p
    out = []
    for v in range(M.alg.n):
        idx = M.at(v)
        if len(idx) == 0 or cols.shape[1] == 0:
            continue
        part = cols[idx]
        B = la.col_space(part, p)
        for j in range(B.shape[1]):
            vec = la.zeros(M.dim, 1)[:, 0]
            vec[idx] = B[:, j]
            out.append(vec)
    if not out:
        return la.zeros(M.dim, 0)
    return np.stack(out, axis=1)


def basis_labels(M: Module, B: np.ndarray) -> np.ndarray:
    labs = []
    for j in range(B.shape[1]):
        nz = np.nonzero(B[:, j])[0]
        labs.append(int(M.labels[nz[0]]))
    return np.array(labs, dtype=np.int64)


def submodule(M: Module, B: np.ndarray) -> tuple[Module, np.ndarray]:
    """Module structure on the span of the homogeneous columns B (closed
    under the action). Returns the submodule and the inclusion matrix."""
    p = M.alg.p
    labels = basis_labels(M, B)
    acts = []
    for A in M.action:
        img = la.matmul(A, B, p)
        X = la.solve(B, img, p) if B.shape[1] else la.zeros(0, 0)
        assert X is not None, "span is not a submodule"
        acts.append(X)
    return Module(M.alg, labels, tuple(acts)), B


def kernel(f: np.ndarray, M: Module) -> tuple[Module, np.ndarray]:
    """Kernel of a module map f: M -> N given by its total matrix."""
    p = M.alg.p
    cols = []
    for v in range(M.alg.n):
        idx = M.at(v)
        if len(idx) == 0:
            continue
        K = la.kernel_basis(f[:, idx], p)
        for j in range(K.shape[1]):
            vec = la.zeros(M.dim, 1)[:, 0]
            vec[idx] = K[:, j]
            cols.append(vec)
    B = np.stack(cols, axis=1) if cols else la.zeros(M.dim, 0)
    return submodule(M, B)


def image_basis(f: np.ndarray, M: Module, N: Module) -> np.ndarray:
    return _homogeneous_span(N, la.matmul(f, la.identity(M.dim), N.alg.p)
                             if f.size else la.zeros(N.dim, 0))


def radical_basis(M: Module) -> np.ndarray:
    if M.dim == 0:
        return la.zeros(0, 0)
    imgs = np.concatenate(list(M.action), axis=1) if M.action else la.zeros(M.dim, 0)
    return _homogeneous_span(M, imgs)


def top_basis(M: Module) -> np.ndarray:
    """Homogeneous vectors whose classes form a basis of M / rad M."""
    p = M.alg.p
    R = radical_basis(M)
    out = []
    for v in range(M.alg.n):
        idx = M.at(v)
        if len(idx) == 0:
            continue
        Rv = R[idx] if R.shape[1] else la.zeros(len(idx), 0)
        Rv = Rv[:, np.any(Rv, axis=0)] if Rv.shape[1] else Rv
        C = la.complement_basis(Rv, len(idx), p)
        for j in range(C.shape[1]):
            vec = la.zeros(M.dim, 1)[:, 0]
            vec[idx] = C[:, j]
            out.append(vec)
    return np.stack(out, axis=1) if out else la.zeros(M.dim, 0)


def top_dimvec(M: Module) -> list[int]:
    T = top_basis(M)
    labs = basis_labels(M, T)
    return [int((labs == v).sum()) for v in range(M.alg.n)]


def cover_from_generators(M: Module, G: np.ndarray) -> tuple[tuple[int, ...], np.ndarray]:
    """Map sum P_{v_k} -> M sending e_{v_k} to the k-th column of G."""
    alg, p = M.alg, M.alg.p
    labels = basis_labels(M, G)
    summands = tuple(int(v) for v in labels)
    sb = alg.sum_basis(summands)
    E = la.zeros(M.dim, sb.dim)
    for k, v in enumerate(summands):
        x = G[:, k]
        for q in alg.proj_basis[v]:
            E[:, sb.position(k, q)] = la.matmul(M.path_action(q), x.reshape(-1, 1), p)[:, 0]
    return summands, E


def projective_cover(M: Module) -> tuple[tuple[int, ...], np.ndarray]:
    """Minimal projective cover: (summand vertices, epimorphism matrix)."""
    order = np.argsort(basis_labels(M, top_basis(M)), kind="stable")
    G = top_basis(M)[:, order]
    return cover_from_generators(M, G)


def multiplicities(alg: PathAlgebra, summands) -> list[int]:
    mu = [0] * alg.n
    for v in summands:
        mu[v] += 1
    return mu


def identify_projective(M: Module):
    """If M is projective return (summands, iso: sum P -> M), else None."""
    summands, E = projective_cover(M)
    if M.alg.sum_basis(summands).dim != M.dim:
        return None
    assert la.rank(E, M.alg.p) == M.dim
    return summands, E


def is_module_map(f: np.ndarray, M: Module, N: Module) -> bool:
    p = M.alg.p
    for A, B in zip(M.action, N.action):
        if (la.matmul(f, A, p) != la.matmul(B, f, p)).any():
            return False
    return True


def direct_sum_module(*mods: Module) -> Module:
    alg = mods[0].alg
    labels = np.concatenate([M.labels for M in mods]).astype(np.int64)
    acts = []
    for k in range(len(alg.arrows)):
        d = len(labels)
        A = la.zeros(d, d)
        off = 0
        for M in mods:
            A[off:off + M.dim, off:off + M.dim] = M.action[k]
            off += M.dim
        acts.append(A)
    return Module(alg, labels, tuple(acts))
