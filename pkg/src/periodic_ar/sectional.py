"""Sectional paths in an AR quiver: enumeration, composites, radical depth
and the placement of projective-injective vertices."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import linalg as la
from .artheory import ARQuiver, RadicalCalculus
from .complexes import ChainMap


@dataclass
class SectionalPath:
    vertices: tuple
    copies: tuple = ()
    maps: list = field(default_factory=list)

    @property
    def length(self) -> int:
        return len(self.vertices) - 1


def is_sectional(Q: ARQuiver, verts) -> bool:
    """tau^{-1} X_i is not X_{i+2}; a missing tau^{-1} counts as different."""
    tinv = Q.tau_inv
    for i in range(len(verts) - 2):
        t = tinv.get(verts[i])
        if t is not None and t == verts[i + 2]:
            return False
    return True


class _ArrowCache:
    def __init__(self, Q: ARQuiver):
        self.Q = Q
        self._maps: dict = {}

    def get(self, a: int, b: int, copy: int) -> ChainMap:
        key = (a, b, copy)
        if key not in self._maps:
            self._maps[key] = self.Q.arrow_rep(a, b, copy)
        return self._maps[key]


def enumerate_sectional_paths(Q: ARQuiver, max_len: int, start=None) -> list:
    """All sectional paths with 1..max_len arrows (one path per choice of
    arrow copy when multiplicities exceed one)."""
    if not Q.arrows:
        Q.arrows = Q.mesh_arrows()
    succ: dict = {}
    for (a, b), c in sorted(Q.arrows.items()):
        for k in range(c):
            succ.setdefault(a, []).append((b, k))
    cache = _ArrowCache(Q)
    starts = range(len(Q.vertices)) if start is None else [start]
    out = []
    tinv = Q.tau_inv

    def extend(verts, copies):
        if len(verts) > 1:
            maps = [cache.get(verts[i], verts[i + 1], copies[i]) for i in range(len(copies))]
            out.append(SectionalPath(tuple(verts), tuple(copies), maps))
        if len(verts) - 1 >= max_len:
            return
        for b, k in succ.get(verts[-1], []):
            if len(verts) >= 2 and tinv.get(verts[-2]) == b:
                continue
            extend(verts + [b], copies + [k])

    for s in starts:
        extend([s], [])
    return out


def compose_along(path: SectionalPath):
    """(f_r ... f_1, composite is zero)."""
    f = path.maps[0]
    for g in path.maps[1:]:
        f = g @ f
    return f, f.is_zero()


def radical_power_membership(f: ChainMap, a: int, b: int, k: int, universe) -> bool:
    """f in rad^k(a, b), rad taken over the universe (a RadicalCalculus or a
    list of objects)."""
    rc = universe if isinstance(universe, RadicalCalculus) else RadicalCalculus(universe)
    if f.is_zero():
        return True
    powers = _powers(rc, a, k)
    span = powers[k - 1].get(b)
    if span is None:
        return False
    v = rc._coords(a, b, [f])[:, 0]
    return la.in_span(span, v, rc.U[a].alg.p)


def _powers(rc: RadicalCalculus, a: int, k: int) -> list:
    cache = rc.__dict__.setdefault("_power_cache", {})
    hit = cache.get(a)
    if hit is None or len(hit) < k:
        hit = rc.rad_power_from(a, k)
        cache[a] = hit
    return hit


def radical_depth(f: ChainMap, a: int, b: int, rc: RadicalCalculus, kmax: int) -> int | None:
    """Largest k <= kmax with f in rad^k (None when f is zero)."""
    if f.is_zero():
        return None
    depth = 0
    for k in range(1, kmax + 1):
        if radical_power_membership(f, a, b, k, rc):
            depth = k
        else:
            break
    return depth


def classify_pi_positions(Q: ARQuiver, path: SectionalPath) -> str:
    """Case letters for the projective-injective vertices along the path.

    "a": none among X_1..X_r; "b": none among X_0..X_{r-1}; "c": X_0 and X_r
    projective-injective with a clean interior. Letters are concatenated
    when several cases apply; "violation" when none does.
    """
    pi = [Q.vertices[v].projective_injective for v in path.vertices]
    out = ""
    if not any(pi[1:]):
        out += "a"
    if not any(pi[:-1]):
        out += "b"
    if pi[0] and pi[-1] and not any(pi[1:-1]):
        out += "c"
    return out or "violation"


def interior_projective_injective(Q: ARQuiver, path: SectionalPath) -> bool:
    return any(Q.vertices[v].projective_injective for v in path.vertices[1:-1])


@dataclass
class SweepResult:
    paths: int
    nonzero: int
    zero: int
    labels: dict
    violations: list


def sweep(Q: ARQuiver, max_len: int) -> SweepResult:
    """Classify every sectional path up to max_len; nonzero paths with an
    interior projective-injective vertex or no case letter are violations."""
    paths = enumerate_sectional_paths(Q, max_len)
    labels: dict = {}
    violations = []
    nz = 0
    for P in paths:
        _, zero = compose_along(P)
        if zero:
            labels["zero composite"] = labels.get("zero composite", 0) + 1
            continue
        nz += 1
        lab = classify_pi_positions(Q, P)
        labels[lab] = labels.get(lab, 0) + 1
        if lab == "violation" or interior_projective_injective(Q, P):
            violations.append(P)
    return SweepResult(len(paths), nz, len(paths) - nz, labels, violations)


def path_label(Q: ARQuiver, path: SectionalPath) -> str:
    return " -> ".join(Q.vertices[v].label for v in path.vertices)
