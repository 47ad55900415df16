"""Path algebras kQ/I with monomial relations.

Conventions
-----------
* A path is stored as ``(source, arrows)`` where ``arrows`` lists arrow
  indices in the order they are traversed. Composition is written right to
  left, so the relation ``["b", "a"]`` is the path "a then b".
* ``mul(x, y)`` is the product x*y = "x after y"; it is nonzero only when
  y ends where x starts.
* P_i = A e_i has basis the paths starting at i. A homomorphism P_i -> P_j
  is right multiplication by a path p from j to i, so Hom(P_i, P_j) is
  spanned by such paths, and composing P_i -p-> P_j -q-> P_k gives the path
  ``mul(p, q)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .linalg import DEFAULT_PRIME


class AlgebraError(ValueError):
    """Invalid algebra description."""


@dataclass(frozen=True)
class Arrow:
    name: str
    source: int
    target: int


@dataclass(frozen=True)
class Path:
    source: int
    target: int
    arrows: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.arrows)


class PathAlgebra:
    """Finite-dimensional quotient of a path algebra by monomial relations."""

    def __init__(self, vertices, arrows, relations=(), p: int = DEFAULT_PRIME,
                 max_path_length: int = 64):
        self.vertices = [str(v) for v in vertices]
        if len(set(self.vertices)) != len(self.vertices):
            raise AlgebraError("duplicate vertex label")
        vindex = {v: i for i, v in enumerate(self.vertices)}
        self.arrows: list[Arrow] = []
        names = set()
        for name, src, tgt in arrows:
            if name in names:
                raise AlgebraError(f"duplicate arrow name {name!r}")
            for end in (src, tgt):
                if str(end) not in vindex:
                    raise AlgebraError(f"unknown vertex {end!r} in arrow {name!r}")
            names.add(name)
            self.arrows.append(Arrow(str(name), vindex[str(src)], vindex[str(tgt)]))
        aindex = {a.name: k for k, a in enumerate(self.arrows)}
        self.relations: list[tuple[int, ...]] = []
        for rel in relations:
            if isinstance(rel, str) or len(rel) < 2:
                raise AlgebraError(f"relation {rel!r} has length < 2")
            seq = []
            for nm in reversed(list(rel)):
                if nm not in aindex:
                    raise AlgebraError(f"unknown arrow {nm!r} in relation")
                seq.append(aindex[nm])
            for a, b in zip(seq, seq[1:]):
                if self.arrows[a].target != self.arrows[b].source:
                    raise AlgebraError(f"relation {rel!r} is not a composable path")
            self.relations.append(tuple(seq))
        self.p = int(p)
        self._build_basis(max_path_length)

    # -- construction ---------------------------------------------------
    def _killed(self, arrows: tuple[int, ...]) -> bool:
        for rel in self.relations:
            k = len(rel)
            for s in range(len(arrows) - k + 1):
                if arrows[s:s + k] == rel:
                    return True
        return False

    def _build_basis(self, cap: int) -> None:
        n = len(self.vertices)
        paths = [Path(i, i, ()) for i in range(n)]
        frontier = [Path(a.source, a.target, (k,)) for k, a in enumerate(self.arrows)]
        frontier = [q for q in frontier if not self._killed(q.arrows)]
        length = 1
        while frontier:
            if length > cap:
                raise AlgebraError("not finite-dimensional: path length exceeds cap "
                                   f"{cap}")
            paths.extend(frontier)
            nxt = []
            for q in frontier:
                for k, a in enumerate(self.arrows):
                    if a.source == q.target:
                        arr = q.arrows + (k,)
                        # only the tail can create a new relation occurrence
                        if not self._killed(arr):
                            nxt.append(Path(q.source, a.target, arr))
            frontier = nxt
            length += 1
        self.paths: list[Path] = paths
        self.index = {(q.source, q.arrows): k for k, q in enumerate(paths)}
        d = len(paths)
        table = np.full((d, d), -1, dtype=np.int64)
        for i, x in enumerate(paths):
            for j, y in enumerate(paths):
                if y.target == x.source:
                    table[i, j] = self.index.get((y.source, y.arrows + x.arrows), -1)
        self.table = table
        # P_v basis: paths starting at v, trivial path first
        self.proj_basis: list[list[int]] = [[] for _ in range(n)]
        for k, q in enumerate(paths):
            self.proj_basis[q.source].append(k)
        self.proj_local = {}
        for v in range(n):
            for loc, k in enumerate(self.proj_basis[v]):
                self.proj_local[k] = loc
        self._rmul: dict[int, np.ndarray] = {}
        self._sum_cache: dict[tuple, SumBasis] = {}

    # -- basic queries --------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def dim(self) -> int:
        return len(self.paths)

    def vertex(self, label) -> int:
        label = str(label)
        if label not in self.vertices:
            raise AlgebraError(f"unknown vertex {label!r}")
        return self.vertices.index(label)

    def idempotent(self, v: int) -> int:
        return self.index[(v, ())]

    def arrow_path(self, name: str) -> int:
        for k, a in enumerate(self.arrows):
            if a.name == name:
                return self.index[(a.source, (k,))]
        raise AlgebraError(f"unknown arrow {name!r}")

    def path_name(self, k: int) -> str:
        q = self.paths[k]
        if not q.arrows:
            return f"e{self.vertices[q.source]}"
        return "".join(self.arrows[a].name for a in reversed(q.arrows))

    def mul(self, x: int, y: int) -> int:
        """Basis product x*y (x after y); -1 for zero."""
        return int(self.table[x, y])

    def multiply(self, a: dict, b: dict) -> dict:
        """Product of sparse elements {path index: coefficient}."""
        out: dict[int, int] = {}
        for x, cx in a.items():
            for y, cy in b.items():
                z = self.table[x, y]
                if z >= 0:
                    out[int(z)] = (out.get(int(z), 0) + cx * cy) % self.p
        return {k: c for k, c in out.items() if c}

    def is_associative(self) -> bool:
        d = self.dim
        T = self.table
        for x in range(d):
            for y in range(d):
                xy = T[x, y]
                for z in range(d):
                    yz = T[y, z]
                    left = T[xy, z] if xy >= 0 else -1
                    right = T[x, yz] if yz >= 0 else -1
                    if left != right:
                        return False
        return True

    def hom_basis(self, i: int, j: int) -> list[int]:
        """Paths from j to i, i.e. a basis of Hom(P_i, P_j)."""
        return [k for k in self.proj_basis[j] if self.paths[k].target == i]

    def hom_dim(self, i: int, j: int) -> int:
        return len(self.hom_basis(i, j))

    def proj_dim(self, v: int) -> int:
        return len(self.proj_basis[v])

    def proj_dimvec(self, v: int) -> list[int]:
        vec = [0] * self.n
        for k in self.proj_basis[v]:
            vec[self.paths[k].target] += 1
        return vec

    def rmul_matrix(self, path: int) -> np.ndarray:
        """Matrix of x -> x*path from P_i to P_j for path: j -> i."""
        M = self._rmul.get(path)
        if M is None:
            q = self.paths[path]
            i, j = q.target, q.source
            M = np.zeros((self.proj_dim(j), self.proj_dim(i)), dtype=np.int64)
            for loc, x in enumerate(self.proj_basis[i]):
                z = self.table[x, path]
                if z >= 0:
                    M[self.proj_local[int(z)], loc] = 1
            self._rmul[path] = M
        return M

    def sum_basis(self, summands: tuple[int, ...]) -> "SumBasis":
        key = tuple(summands)
        sb = self._sum_cache.get(key)
        if sb is None:
            sb = SumBasis(self, key)
            self._sum_cache[key] = sb
        return sb

    def __repr__(self) -> str:
        return (f"PathAlgebra(vertices={self.vertices}, arrows="
                f"{[(a.name, self.vertices[a.source], self.vertices[a.target]) for a in self.arrows]}"
                f", dim={self.dim}, p={self.p})")


@dataclass
class SumBasis:
    """Basis bookkeeping for a direct sum of indecomposable projectives."""

    alg: PathAlgebra
    summands: tuple[int, ...]
    offsets: list[int] = field(init=False)
    dim: int = field(init=False)

    def __post_init__(self):
        self.offsets = []
        off = 0
        for v in self.summands:
            self.offsets.append(off)
            off += self.alg.proj_dim(v)
        self.dim = off

    @cached_property
    def generators(self) -> np.ndarray:
        return np.array(self.offsets, dtype=np.int64)

    @cached_property
    def vertex_labels(self) -> np.ndarray:
        """Vertex (path target) of each basis vector."""
        out = []
        for v in self.summands:
            out.extend(self.alg.paths[k].target for k in self.alg.proj_basis[v])
        return np.array(out, dtype=np.int64)

    @cached_property
    def path_ids(self) -> np.ndarray:
        out = []
        for v in self.summands:
            out.extend(self.alg.proj_basis[v])
        return np.array(out, dtype=np.int64)

    def block(self, k: int) -> slice:
        return slice(self.offsets[k], self.offsets[k] + self.alg.proj_dim(self.summands[k]))

    def position(self, k: int, path: int) -> int:
        """Row of basis vector ``path`` inside summand k."""
        return self.offsets[k] + self.alg.proj_local[path]


def hom_unknowns(alg: PathAlgebra, src: tuple[int, ...], tgt: tuple[int, ...]):
    """Basis of Hom(sum src, sum tgt) as (target block, source block, path)."""
    out = []
    for s, i in enumerate(src):
        for t, j in enumerate(tgt):
            for q in alg.hom_basis(i, j):
                out.append((t, s, q))
    return out


def hom_matrix(alg: PathAlgebra, src: tuple[int, ...], tgt: tuple[int, ...],
               entries) -> np.ndarray:
    """Total matrix of sum_k c_k * (path_k from block s_k to block t_k).

    ``entries`` is an iterable of (t, s, path, coefficient).
    """
    S = alg.sum_basis(src)
    T = alg.sum_basis(tgt)
    M = np.zeros((T.dim, S.dim), dtype=np.int64)
    for t, s, q, c in entries:
        if c % alg.p == 0:
            continue
        M[T.block(t), S.block(s)] += c * alg.rmul_matrix(q)
    return M % alg.p


def coefficients(alg: PathAlgebra, src, tgt, M: np.ndarray) -> np.ndarray:
    """Path coefficients of a module map given by its total matrix."""
    S = alg.sum_basis(src)
    T = alg.sum_basis(tgt)
    unk = hom_unknowns(alg, src, tgt)
    rows = [T.position(t, q) for t, s, q in unk]
    cols = [S.offsets[s] for t, s, q in unk]
    return M[rows, cols] if unk else np.zeros(0, dtype=np.int64)


def load_algebra(text: str, p: int | None = None) -> PathAlgebra:
    """Parse the TOML algebra description."""
    try:
        import tomllib
    except ImportError:  # python < 3.11
        import tomli as tomllib
    try:
        data = tomllib.loads(text)
    except Exception as exc:
        raise AlgebraError(f"cannot parse algebra file: {exc}") from exc
    q = data.get("quiver")
    if q is None or "vertices" not in q:
        raise AlgebraError("missing [quiver] vertices")
    arrows = []
    for a in q.get("arrows", []):
        try:
            arrows.append((a["name"], a["from"], a["to"]))
        except (KeyError, TypeError) as exc:
            raise AlgebraError(f"malformed arrow entry {a!r}") from exc
    rels = []
    for r in q.get("relations", []):
        if isinstance(r, str):
            raise AlgebraError(f"unsupported relation type: {r!r}")
        if not all(isinstance(x, str) for x in r):
            raise AlgebraError(f"unsupported relation type: {r!r}")
        rels.append(list(r))
    if p is None:
        p = int(data.get("field", {}).get("p", DEFAULT_PRIME))
    if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
        raise AlgebraError(f"field modulus {p} is not prime")
    return PathAlgebra(q["vertices"], arrows, rels, p=p)


def load_algebra_file(path, p: int | None = None) -> PathAlgebra:
    with open(path, encoding="utf-8") as fh:
        return load_algebra(fh.read(), p)
