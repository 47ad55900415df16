"""JSON and Graphviz DOT output for AR quivers.

The JSON form lists vertices with their complexes, arrows with
multiplicities, tau pairs and meshes. Loading it back gives an ARQuiver
whose meshes carry no chain maps (``seq`` is None) but whose combinatorics
(tau, arrows, mesh shapes) are intact.
"""

from __future__ import annotations

import json

from .algebra import PathAlgebra
from .artheory import ARQuiver, Mesh, Vertex
from .decomp import term_signature
from .notation import complex_from_json, complex_to_json


def quiver_to_json(Q: ARQuiver) -> dict:
    arrows = [{"from": a, "to": b, "multiplicity": int(c)}
              for (a, b), c in sorted(Q.arrows.items()) if c]
    return {
        "kind": Q.kind,
        "size": Q.size,
        "prime": Q.alg.p,
        "complete": Q.complete,
        "vertices": [{"id": k, "label": v.label, "object": complex_to_json(v.obj),
                      "projective_injective": bool(v.projective_injective),
                      "ext_projective": bool(v.ext_projective)}
                     for k, v in enumerate(Q.vertices)],
        "arrows": arrows,
        "tau": [{"end": z, "start": t} for z, t in sorted(Q.tau.items())],
        "meshes": [{"start": M.start, "middle": list(M.middle), "end": M.end,
                    "kind": M.kind} for M in Q.meshes],
        "notes": list(Q.notes),
    }


def quiver_from_json(alg: PathAlgebra, data: dict) -> ARQuiver:
    Q = ARQuiver(alg, data["kind"], int(data["size"]))
    Q.complete = bool(data.get("complete", True))
    Q.notes = list(data.get("notes", []))
    for k, v in enumerate(data["vertices"]):
        if int(v["id"]) != k:
            raise ValueError("vertex ids must be 0..N-1 in order")
        obj = complex_from_json(alg, v["object"])
        Q.vertices.append(Vertex(obj, v["label"], bool(v["projective_injective"]),
                                 bool(v.get("ext_projective", False))))
        Q._by_sig.setdefault(term_signature(obj), []).append(k)
    for e in data["arrows"]:
        Q.arrows[(int(e["from"]), int(e["to"]))] = int(e["multiplicity"])
    for M in data["meshes"]:
        Q._place(Mesh(int(M["start"]), int(M["end"]), [int(j) for j in M["middle"]],
                      None, [], (None, None), M.get("kind", "")))
    return Q


def dumps(Q: ARQuiver) -> str:
    return json.dumps(quiver_to_json(Q), indent=1, ensure_ascii=False)


def loads(alg: PathAlgebra, text: str) -> ARQuiver:
    return quiver_from_json(alg, json.loads(text))


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(Q: ARQuiver, name: str = "ARQ") -> str:
    """Solid arrows for irreducible maps, dashed undirected lines for tau,
    boxes around projective-injective vertices."""
    arrows = Q.arrows or Q.mesh_arrows()
    lines = [f"digraph {name} {{", "  rankdir=LR;", "  node [shape=plaintext];"]
    for k, v in enumerate(Q.vertices):
        attrs = [f"label={_quote(v.label)}"]
        if v.projective_injective:
            attrs.append("shape=box")
        lines.append(f"  v{k} [{', '.join(attrs)}];")
    for (a, b), c in sorted(arrows.items()):
        if not c:
            continue
        extra = f" [label={_quote(str(c))}]" if c > 1 else ""
        lines.append(f"  v{a} -> v{b}{extra};")
    for z, t in sorted(Q.tau.items()):
        lines.append(f"  v{z} -> v{t} [style=dashed, arrowhead=none, constraint=false];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_paper(Q: ARQuiver) -> str:
    """Plain listing in bracket/comma notation, one item per line. A vertex
    whose notation would not re-parse to the same object is written as JSON."""
    from .notation import unambiguous
    arrows = Q.arrows or Q.mesh_arrows()
    names = [v.label if unambiguous(v.obj)
             else json.dumps(complex_to_json(v.obj), ensure_ascii=False) for v in Q.vertices]
    out = [f"# {Q.kind} quiver, size {Q.size}: {len(Q.vertices)} vertices, "
           f"{sum(arrows.values())} arrows, {len(Q.meshes)} meshes"]
    for v, nm in zip(Q.vertices, names):
        out.append(f"vertex {nm}" + (" [projective-injective]" if v.projective_injective else ""))
    for (a, b), c in sorted(arrows.items()):
        if c:
            mult = f" x{c}" if c > 1 else ""
            out.append(f"arrow {names[a]} -> {names[b]}{mult}")
    for z, t in sorted(Q.tau.items()):
        out.append(f"tau {names[z]} = {names[t]}")
    for note in Q.notes:
        out.append(f"note {note}")
    return "\n".join(out) + "\n"
