import pytest

from periodic_ar.artheory import RadicalCalculus
from periodic_ar.complexes import ChainMap
from periodic_ar.sectional import (SectionalPath, classify_pi_positions, compose_along,
                                   enumerate_sectional_paths, interior_projective_injective,
                                   is_sectional, path_label, radical_depth,
                                   radical_power_membership, sweep)

from conftest import periodic_quiver


def _path(Q, labels):
    verts = tuple(Q.index_of_label(x) for x in labels)
    maps = [Q.arrow_rep(verts[i], verts[i + 1]) for i in range(len(verts) - 1)]
    return SectionalPath(verts, (0,) * (len(verts) - 1), maps)


def test_sectional_path_with_zero_composite(p3):
    P = _path(p3, ["(3,0,0,3,3)", "(2,1,0,3,2)", "(1,1,0,0,1)"])
    assert is_sectional(p3, P.vertices)
    assert p3.vertices[P.vertices[0]].projective_injective
    assert p3.vertices[P.vertices[-1]].projective_injective
    f, zero = compose_along(P)
    assert zero and f.is_zero()
    assert path_label(p3, P) == "(3,0,0,3,3) -> (2,1,0,3,2) -> (1,1,0,0,1)"


def test_mesh_diagonals_are_not_sectional(p3):
    for M in p3.meshes:
        for j in M.middle:
            assert not is_sectional(p3, (M.start, j, M.end))


def test_enumerated_paths_are_sectional(p3):
    paths = enumerate_sectional_paths(p3, 4)
    assert paths
    for P in paths:
        assert is_sectional(p3, P.vertices)
        assert 1 <= P.length <= 4
        for i, f in enumerate(P.maps):
            assert f.src == p3.vertices[P.vertices[i]].obj
            assert f.tgt == p3.vertices[P.vertices[i + 1]].obj


def test_single_arrows_never_vanish(p3):
    for P in enumerate_sectional_paths(p3, 1):
        assert not compose_along(P)[1]


@pytest.mark.parametrize("name,n,m", [("chain3", 3, 2), ("chain3", 3, 4), ("chain4", 4, 2),
                                      ("chain4", 4, 3)])
def test_nonzero_paths_keep_projective_injectives_at_the_ends(name, n, m):
    res = sweep(periodic_quiver(name, n, m), 5)
    assert res.paths == res.nonzero + res.zero
    assert res.violations == []
    assert "violation" not in res.labels


def test_case_letters(p3):
    P = _path(p3, ["(3,0,0,3,3)", "(2,1,0,3,2)", "(1,1,0,0,1)"])
    assert classify_pi_positions(p3, P) == "c"
    assert not interior_projective_injective(p3, P)
    Q = _path(p3, ["(0,0,2,0,0)", "(0,3,2,0,0)", "(0,0,1,0,0)"])
    assert classify_pi_positions(p3, Q) == "ab"
    R = _path(p3, ["(0,3,0,0,0)", "(3,3,0,0,3)", "(3,2,1,0,3)"])
    assert classify_pi_positions(p3, R) == "violation"
    assert interior_projective_injective(p3, R)


@pytest.mark.parametrize("name", ["a2", "a3"])
@pytest.mark.parametrize("m", [2, 3])
def test_hereditary_composites_stay_outside_the_next_radical_power(name, m):
    P = periodic_quiver(name, 2, m)
    U = P.objects()
    rc = RadicalCalculus(U)
    checked = 0
    for S in enumerate_sectional_paths(P, 3):
        f, zero = compose_along(S)
        assert not zero
        a, b = S.vertices[0], S.vertices[-1]
        assert radical_power_membership(f, a, b, S.length, rc)
        assert not radical_power_membership(f, a, b, S.length + 1, rc)
        assert radical_depth(f, a, b, rc, S.length + 1) == S.length
        checked += 1
    assert checked > 0


def test_zero_map_lies_in_every_radical_power(p3):
    U = p3.objects()
    a = p3.index_of_label("(0,3,2,0,0)")
    b = p3.index_of_label("(0,3,0,0,0)")
    zero = ChainMap(U[a], U[b], {})
    assert radical_power_membership(zero, a, b, 5, U)
    assert radical_depth(zero, a, b, RadicalCalculus(U), 5) is None
