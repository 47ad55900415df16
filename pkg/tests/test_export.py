import json

import pytest

from periodic_ar.export import dumps, loads, quiver_from_json, quiver_to_json, to_dot, to_paper

from conftest import periodic_quiver


def test_json_shape(q3):
    d = quiver_to_json(q3)
    assert d["kind"] == "fixed" and d["size"] == 3
    assert len(d["vertices"]) == 20 and len(d["tau"]) == 11 and len(d["meshes"]) == 11
    assert sum(a["multiplicity"] for a in d["arrows"]) == 28
    assert sum(v["projective_injective"] for v in d["vertices"]) == 6


@pytest.mark.parametrize("name,n,m", [("chain3", 3, 4), ("chain4", 4, 2)])
def test_json_round_trip(name, n, m):
    P = periodic_quiver(name, n, m)
    d = quiver_to_json(P)
    back = quiver_from_json(P.alg, json.loads(json.dumps(d)))
    assert quiver_to_json(back) == d
    assert back.tau == P.tau and back.arrows == P.arrows


def test_text_round_trip(q3):
    text = dumps(q3)
    assert quiver_to_json(loads(q3.alg, text)) == quiver_to_json(q3)


def test_dot(q3):
    dot = to_dot(q3)
    assert dot.startswith("digraph")
    assert "shape=box" in dot
    assert "style=dashed" in dot
    assert dot.count(" -> ") == len(q3.arrows) + len(q3.tau)


def test_paper_format(q3, p4):
    text = to_paper(q3)
    assert "arrow 0,0,2 -> 0,3,2" in text
    assert "tau 0,3,0 = 0,0,2" in text
    # the two K objects share a bracket label at period 2, so they fall back to JSON
    assert '"kind": "periodic"' in to_paper(p4)
