"""Text forms of complexes.

Comma notation ``"3,2,1"`` lists the terms of a bounded complex in degrees
1, 2, 3, ... using vertex labels, ``0`` for a zero term and ``⊕`` (or ``+``)
for sums. Bracket notation ``"(0,3,2,0,0)"`` lists the terms of an
m-periodic complex at positions 1..m and repeats the first entry at the end.
Both denote the canonical complex whose differential components are the
unique path between consecutive summands; they are only accepted when every
such hom space has dimension at most one and the result squares to zero.
"""

from __future__ import annotations

import json

import numpy as np

from . import linalg as la
from .algebra import PathAlgebra, hom_matrix
from .complexes import Complex, ComplexError
from .periodic import PeriodicComplex

SUM_SIGNS = ("⊕", "+")


class NotationError(ValueError):
    pass


def _parse_entry(alg: PathAlgebra, tok: str) -> tuple[int, ...]:
    tok = tok.strip()
    if tok in ("", "0"):
        return ()
    for s in SUM_SIGNS:
        tok = tok.replace(s, "|")
    out = []
    for part in tok.split("|"):
        part = part.strip()
        if part not in alg.vertices:
            raise NotationError(f"unknown vertex {part!r}")
        out.append(alg.vertices.index(part))
    return tuple(out)


def _canonical_block(alg: PathAlgebra, src: tuple, tgt: tuple) -> np.ndarray:
    entries = []
    for s, i in enumerate(src):
        for t, j in enumerate(tgt):
            hb = alg.hom_basis(i, j)
            if len(hb) > 1:
                raise NotationError(
                    f"Hom(P{alg.vertices[i]}, P{alg.vertices[j]}) has dimension "
                    f"{len(hb)}; give the differential explicitly")
            if hb:
                entries.append((t, s, hb[0], 1))
    return hom_matrix(alg, src, tgt, entries)


def _check_vertex_labels(alg: PathAlgebra):
    if "0" in alg.vertices:
        raise NotationError("vertex label '0' clashes with the zero term")


def parse_complex(alg: PathAlgebra, text: str, lo: int = 1) -> Complex:
    """Canonical bounded complex from comma notation, first entry in degree lo."""
    _check_vertex_labels(alg)
    toks = [t for t in text.strip().split(",")]
    terms = [_parse_entry(alg, t) for t in toks]
    diffs = [_canonical_block(alg, terms[k], terms[k + 1]) for k in range(len(terms) - 1)]
    try:
        return Complex(alg, lo, terms, diffs)
    except ComplexError as exc:
        raise NotationError(f"{text!r} has no canonical differential: {exc}") from exc


def parse_periodic(alg: PathAlgebra, text: str, m: int | None = None) -> PeriodicComplex:
    """Canonical periodic complex from bracket notation "(a1,...,am,a1)"."""
    _check_vertex_labels(alg)
    body = text.strip()
    if not (body.startswith("(") and body.endswith(")")):
        raise NotationError("periodic notation must be bracketed")
    toks = body[1:-1].split(",")
    entries = [_parse_entry(alg, t) for t in toks]
    if m is None:
        if len(entries) < 3 or sorted(entries[0]) != sorted(entries[-1]):
            raise NotationError("bracket notation repeats the first entry at the end")
        m = len(entries) - 1
    if len(entries) == m + 1:
        entries = entries[:m]
    if len(entries) != m:
        raise NotationError(f"expected {m} entries")
    # position j (1-based) is the residue j mod m
    terms = [()] * m
    for j, e in enumerate(entries, start=1):
        terms[j % m] = e
    diffs = [_canonical_block(alg, terms[i], terms[(i + 1) % m]) for i in range(m)]
    try:
        return PeriodicComplex(alg, m, terms, diffs)
    except ComplexError as exc:
        raise NotationError(f"{text!r} has no canonical differential: {exc}") from exc


def _entry(alg: PathAlgebra, summands) -> str:
    if not summands:
        return "0"
    return "⊕".join(alg.vertices[v] for v in sorted(summands, reverse=True))


def format_complex(X: Complex, lo: int = 1, hi: int | None = None) -> str:
    if hi is None:
        hi = max(X.hi, lo) if not X.is_zero() else lo
    lo = min(lo, X.lo) if not X.is_zero() else lo
    return ",".join(_entry(X.alg, X.term(i)) for i in range(lo, hi + 1))


def format_periodic(Z: PeriodicComplex) -> str:
    m = Z.m
    ents = [_entry(Z.alg, Z.term(j % m)) for j in range(1, m + 1)]
    return "(" + ",".join(ents + [ents[0]]) + ")"


def unambiguous(obj) -> bool:
    """True when the bracket/comma text re-parses to an isomorphic object."""
    from .decomp import are_isomorphic
    try:
        if isinstance(obj, PeriodicComplex):
            back = parse_periodic(obj.alg, format_periodic(obj), obj.m)
        else:
            back = parse_complex(obj.alg, format_complex(obj, lo=obj.lo), lo=obj.lo)
    except NotationError:
        return False
    return are_isomorphic(back, obj) is not None


def display(obj, lo: int = 1, hi: int | None = None) -> str:
    if isinstance(obj, PeriodicComplex):
        return format_periodic(obj)
    return format_complex(obj, lo, hi)


# -- JSON ------------------------------------------------------------------

def _path_code(alg: PathAlgebra, k: int) -> str:
    q = alg.paths[k]
    if not q.arrows:
        return "e:" + alg.vertices[q.source]
    return "*".join(alg.arrows[a].name for a in reversed(q.arrows))


def _path_from_code(alg: PathAlgebra, code: str) -> int:
    if code.startswith("e:"):
        return alg.idempotent(alg.vertex(code[2:]))
    names = code.split("*")
    idx = {a.name: k for k, a in enumerate(alg.arrows)}
    arrows = tuple(idx[nm] for nm in reversed(names))
    src = alg.arrows[arrows[0]].source
    key = (src, arrows)
    if key not in alg.index:
        raise NotationError(f"path {code!r} is zero in the algebra")
    return alg.index[key]


def _diff_entries(alg: PathAlgebra, src, tgt, D) -> list:
    from .algebra import coefficients, hom_unknowns
    unk = hom_unknowns(alg, src, tgt)
    coeff = coefficients(alg, src, tgt, D)
    return [{"from": s, "to": t, "path": _path_code(alg, q), "coeff": int(c)}
            for (t, s, q), c in zip(unk, coeff) if c]


def _diff_matrix(alg: PathAlgebra, src, tgt, entries) -> np.ndarray:
    return hom_matrix(alg, src, tgt, [(e["to"], e["from"], _path_from_code(alg, e["path"]),
                                       int(e["coeff"])) for e in entries])


def complex_to_json(X) -> dict:
    alg = X.alg
    names = lambda t: [alg.vertices[v] for v in t]
    if isinstance(X, PeriodicComplex):
        m = X.m
        return {"kind": "periodic", "period": m,
                "terms": [names(X.term(i)) for i in range(m)],
                "diffs": [_diff_entries(alg, X.term(i), X.term(i + 1), X.diff(i))
                          for i in range(m)]}
    return {"kind": "complex", "lo": X.lo,
            "terms": [names(t) for t in X.terms],
            "diffs": [_diff_entries(alg, X.terms[k], X.terms[k + 1], X.diffs[k])
                      for k in range(len(X.diffs))]}


def complex_from_json(alg: PathAlgebra, data: dict):
    terms = [tuple(alg.vertex(v) for v in t) for t in data["terms"]]
    if data.get("kind") == "periodic":
        m = int(data["period"])
        diffs = [_diff_matrix(alg, terms[i], terms[(i + 1) % m], data["diffs"][i])
                 for i in range(m)]
        return PeriodicComplex(alg, m, terms, diffs)
    diffs = [_diff_matrix(alg, terms[k], terms[k + 1], data["diffs"][k])
             for k in range(len(terms) - 1)]
    return Complex(alg, int(data.get("lo", 1)), terms, diffs)


def parse_any(alg: PathAlgebra, text: str, m: int | None = None):
    """Comma notation, bracket notation or a JSON object."""
    text = text.strip()
    if text.startswith("{"):
        return complex_from_json(alg, json.loads(text))
    if text.startswith("("):
        return parse_periodic(alg, text, m)
    return parse_complex(alg, text)
