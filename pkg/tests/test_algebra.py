import pytest
from hypothesis import given, settings, strategies as st

from periodic_ar.algebra import AlgebraError, PathAlgebra, load_algebra
from periodic_ar.algebra import hom_matrix
from periodic_ar import linalg as la

from conftest import algebra, fixture_path


def test_chain3_basis(chain3):
    assert chain3.dim == 5
    assert [chain3.proj_dim(v) for v in range(3)] == [2, 2, 1]
    assert chain3.proj_dimvec(0) == [1, 1, 0]
    assert sorted(chain3.path_name(k) for k in range(chain3.dim)) == \
        ["alpha", "beta", "e1", "e2", "e3"]


def test_hom_between_projectives(chain3):
    # Hom(P_i, P_j) is spanned by the paths j -> i
    assert chain3.hom_dim(1, 0) == 1          # alpha: 1 -> 2
    assert chain3.hom_dim(2, 1) == 1          # beta: 2 -> 3
    assert chain3.hom_dim(2, 0) == 0          # beta alpha = 0
    assert chain3.hom_dim(0, 1) == 0
    assert all(chain3.hom_dim(v, v) == 1 for v in range(3))


def test_relation_kills_composite():
    alg = PathAlgebra("123", [("a", "1", "2"), ("b", "2", "3")], [["b", "a"]])
    a, b = alg.arrow_path("a"), alg.arrow_path("b")
    # b after a is zero, a after b is not composable
    assert alg.mul(b, a) == -1
    free = PathAlgebra("123", [("a", "1", "2"), ("b", "2", "3")])
    assert free.mul(free.arrow_path("b"), free.arrow_path("a")) >= 0
    assert free.dim == 6


@pytest.mark.parametrize("name", ["chain3", "chain4", "a2", "a3", "semisimple"])
def test_associative(name):
    assert algebra(name).is_associative()


def test_chain4_dimension(chain4):
    # e1..e4, alpha, beta, gamma
    assert chain4.dim == 7


def test_loop_is_rejected():
    with pytest.raises(AlgebraError, match="not finite-dimensional"):
        algebra("loop")


@pytest.mark.parametrize("text,msg", [
    ('[quiver]\nvertices=["1"]\narrows=[{name="a",from="1",to="9"}]', "unknown vertex"),
    ('[quiver]\nvertices=["1","2"]\narrows=[{name="a",from="1",to="2"}]\nrelations=[["a"]]',
     "length"),
    ('[quiver]\nvertices=["1","2"]\narrows=[{name="a",from="1",to="2"},'
     '{name="b",from="1",to="2"}]\nrelations=[["b","a"]]', "composable"),
    ('[quiver]\nvertices=["1","2"]\narrows=[]\nrelations=["ab"]', "unsupported relation"),
    ('[quiver]\nvertices=["1","1"]', "duplicate"),
    ('[quiver\n', "cannot parse"),
    ('[field]\np=5', "missing"),
])
def test_malformed_input(text, msg):
    with pytest.raises(AlgebraError, match=msg):
        load_algebra(text)


def test_non_prime_modulus():
    with pytest.raises(AlgebraError, match="not prime"):
        load_algebra(open(fixture_path("a2")).read(), p=15)


def test_prime_override():
    assert algebra("chain3", 7).p == 7


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 4), st.integers(0, 2**32 - 1))
def test_hom_matrices_are_module_maps(pair, seed):
    """Right multiplication by a path commutes with the algebra action."""
    from periodic_ar.modules import is_module_map, projective_rep
    alg = algebra("chain4")
    i, j = divmod(pair * 3 + seed % 4, 4)
    i %= 4
    for q in alg.hom_basis(i, j):
        M = hom_matrix(alg, (i,), (j,), [(0, 0, q, 1 + seed % (alg.p - 1))])
        assert is_module_map(M, projective_rep(alg, (i,)), projective_rep(alg, (j,)))
