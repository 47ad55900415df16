import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from periodic_ar.complexes import ComplexError, direct_sum, hom_space, shift, stalk
from periodic_ar.decomp import are_isomorphic, decompose, is_indecomposable
from periodic_ar.notation import format_periodic, parse_complex
from periodic_ar.periodic import (DensityError, PeriodicComplex, compress, compress_map,
                                  hom_orbit_sum, is_projective_injective, k_complex,
                                  unfolding_witness, periodic_shift, unfold, unroll)

from conftest import fixed_quiver


def test_compress_example(chain3):
    X = parse_complex(chain3, "0,3,2")
    assert format_periodic(compress(X, 4)) == "(0,3,2,0,0)"


def test_compress_folds_terms(chain3):
    X = parse_complex(chain3, "3,2,1")
    Z = compress(X, 2)
    # residues: degree 1 and 3 land on position 1, degree 2 on position 0
    assert sorted(Z.term(1)) == [0, 2]
    assert Z.term(0) == (1,)
    assert not Z.diff(0).any() or Z.diff(1).any()


def test_periodic_validation(chain3):
    with pytest.raises(ComplexError):
        k_complex(chain3, 0, 0, 1)
    K = k_complex(chain3, 0, 0, 3)
    assert is_projective_injective(K)
    assert not is_projective_injective(compress(stalk(chain3, 0, 1), 3))


def test_periodic_shift_rotates(chain3):
    Z = compress(parse_complex(chain3, "0,3,2"), 4)
    W = periodic_shift(Z, 1)
    assert W.term(1) == Z.term(2)
    assert are_isomorphic(periodic_shift(Z, 4), Z) is not None


def test_unfold_doubles_period(chain3):
    Z = compress(parse_complex(chain3, "0,3,2"), 2)
    U = unfold(Z, 2)
    assert U.m == 4 and U.term(2) == Z.term(0)


def test_unfolded_compression_splits(chain3):
    X = parse_complex(chain3, "3,2,1")
    w, U, parts, iso = unfolding_witness(X, 2)
    assert w == 2
    assert iso.is_chain_map() and iso.is_iso()
    assert is_indecomposable(compress(X, 2))
    D = decompose(U)
    assert len(D.summands) == 2
    F4 = compress(X, 4)
    for S in D.summands:
        assert any(are_isomorphic(S, periodic_shift(F4, r)) is not None for r in range(4))


def test_unroll_of_compressed_sum(chain3):
    X = direct_sum(stalk(chain3, 0, 1), stalk(chain3, 1, 2))
    Zhat, t, iso = unroll(compress(X, 3))
    assert iso.is_iso()


def test_unroll_without_bounded_preimage():
    # radical square zero 2-cycle: P1 -> P2 -> P1 with nonzero differentials
    # never acquires a zero differential, however often it is unfolded
    from periodic_ar import PathAlgebra
    from periodic_ar.algebra import hom_matrix
    alg = PathAlgebra("12", [("a", "1", "2"), ("b", "2", "1")], [["b", "a"], ["a", "b"]])
    a, b = alg.arrow_path("a"), alg.arrow_path("b")
    d0 = hom_matrix(alg, (1,), (0,), [(0, 0, a, 1)])
    d1 = hom_matrix(alg, (0,), (1,), [(0, 0, b, 1)])
    Z = PeriodicComplex(alg, 2, [(1,), (0,)], [d0, d1])
    with pytest.raises(DensityError, match="no bounded preimage"):
        unroll(Z, max_unfold=4)


def test_compress_map_is_functorial(q3):
    objs = [v.obj for v in q3.vertices]
    rng = np.random.default_rng(1)
    checked = 0
    for a in range(len(objs)):
        for b in range(len(objs)):
            H1 = hom_space(objs[a], objs[b])
            if not H1.dim:
                continue
            for c in range(len(objs)):
                H2 = hom_space(objs[b], objs[c])
                if not H2.dim:
                    continue
                f = H1.element(rng.integers(0, 100, H1.dim))
                g = H2.element(rng.integers(0, 100, H2.dim))
                lhs = compress_map(g @ f, 4)
                rhs = compress_map(g, 4) @ compress_map(f, 4)
                assert lhs.equals(rhs)
                checked += 1
    assert checked > 20


@pytest.mark.parametrize("m", [2, 3, 4])
def test_g_invariance(q3, m):
    for V in q3.vertices:
        assert are_isomorphic(compress(shift(V.obj, m), m), compress(V.obj, m)) is not None


@pytest.mark.parametrize("name,n", [("chain3", 3), ("chain4", 4)])
@pytest.mark.parametrize("m", [2, 3, 4])
def test_compression_keeps_indecomposables(name, n, m):
    for V in fixed_quiver(name, n).vertices:
        assert is_indecomposable(compress(V.obj, m))


@pytest.mark.parametrize("m", [2, 4])
def test_unroll_round_trip(q3, m):
    for V in q3.vertices:
        Z = compress(V.obj, m)
        Zhat, t, iso = unroll(Z)
        assert Zhat.bottom() == 1 and 0 <= t < m
        assert iso.is_chain_map() and iso.is_iso()


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 19), st.integers(0, 19), st.integers(-3, 3), st.sampled_from([2, 3, 4]))
def test_hom_orbit_identity(a, b, s, m):
    objs = [v.obj for v in fixed_quiver("chain3", 3).vertices]
    lhs, rhs = hom_orbit_sum(objs[a], shift(objs[b], s), m)
    assert lhs == rhs
