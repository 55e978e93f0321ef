from math import comb

import pytest

from cyclebound.arith import GF2, FieldSpec
from cyclebound.extremal import max_circuit_exact
from cyclebound.gen import (
    GenSpec,
    InvalidParameters,
    PRNG_NAME,
    gen_colex_family,
    gen_complete_complex,
    gen_graph,
    gen_linial_meshulam,
    gen_random_matroid,
    gen_vector_space_nonzero,
    generate,
    parse_genspec,
)
from cyclebound.complex import format_facets
from cyclebound.matroid import format_matrix, matroid_from_complex


def test_complete_complex():
    assert gen_complete_complex(4, 2).f_vector == (4, 6, 4)
    K = gen_complete_complex(6, 2)
    assert (K.f(2), K.f(1)) == (20, 15)
    assert gen_complete_complex(3, 1).f_vector == (3, 3)
    for n, d in ((7, 3), (8, 2)):
        K = gen_complete_complex(n, d)
        assert all(K.f(i) == comb(n, i + 1) for i in range(d + 1))
    with pytest.raises(InvalidParameters):
        gen_complete_complex(2, 2)


def test_graphs():
    assert gen_graph("cycle", {"k": 5}).f_vector == (5, 5)
    assert gen_graph("complete", {"n": 4}).f_vector == (6, 4)
    G = gen_graph("random_gnm", {"n": 10, "m": 20}, 1)
    assert G.f(1) == 20 and G == gen_graph("random_gnm", {"n": 10, "m": 20}, 1)
    with pytest.raises(InvalidParameters):
        gen_graph("random_gnm", {"n": 4, "m": 7})
    with pytest.raises(InvalidParameters):
        gen_graph("petersen", {})


def test_vector_space():
    F = gen_vector_space_nonzero(2, 3)
    assert F.size == 7 and F.rank == 3
    U = gen_vector_space_nonzero(2, 2)
    assert U.size == 3 and U.rank == 2 and U.is_circuit(range(3))
    V = gen_vector_space_nonzero(3, 2)
    assert V.size == 8 and V.rank == 2
    parallel = [C for C in V.enumerate_circuits(size_cap=2)]
    assert len(parallel) == 4
    with pytest.raises(InvalidParameters):
        gen_vector_space_nonzero(4, 2)
    with pytest.raises(InvalidParameters):
        gen_vector_space_nonzero(2, 17)


def test_linial_meshulam():
    empty = gen_linial_meshulam(6, 2, 0)
    assert empty.f(2) == 0 and empty.f(1) == 15
    assert gen_linial_meshulam(6, 2, 20) == gen_complete_complex(6, 2)
    a = gen_linial_meshulam(8, 2, 30, seed=7)
    assert a.f(2) == 30 and a == gen_linial_meshulam(8, 2, 30, seed=7)
    assert a != gen_linial_meshulam(8, 2, 30, seed=8)
    with pytest.raises(InvalidParameters):
        gen_linial_meshulam(5, 2, 11)


def test_colex():
    K = gen_colex_family(5, 2, 4)
    assert K.simplices(2) == ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3))
    assert gen_colex_family(6, 2, 20) == gen_complete_complex(6, 2)
    assert gen_colex_family(5, 2, 1).simplices(2) == ((0, 1, 2),)
    with pytest.raises(InvalidParameters):
        gen_colex_family(5, 2, 11)


@pytest.mark.parametrize("d,x", [(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)])
def test_colex_rank_equality(d, x):
    K = gen_colex_family(x + 3, d, comb(x + 1, d + 1))
    assert matroid_from_complex(K, d, GF2).rank == comb(x, d)


def test_vector_space_circuit_size():
    for k in (2, 3, 4):
        assert max_circuit_exact(gen_vector_space_nonzero(2, k)).size == k + 1


def test_random_matroid_is_loopless_and_seeded():
    M = gen_random_matroid(12, 4, FieldSpec.prime(3), seed=5)
    assert not M.loops() and M == gen_random_matroid(12, 4, FieldSpec.prime(3), seed=5)
    C = gen_random_matroid(10, 4, GF2, seed=1, connected=True)
    assert C.is_connected()


@pytest.mark.parametrize("text", [
    "complete-complex:n=5,d=2", "cycle:k=6", "complete-graph:n=5", "random-gnm:n=8,m=12",
    "vector-space:q=3,k=2", "linial-meshulam:n=7,d=2,m=12", "colex:n=6,d=2,s=7", "random-matroid:n=9,r=3",
])
def test_genspec_determinism_and_json(text):
    spec = parse_genspec(text, seed=11)
    assert GenSpec.from_json(spec.to_json()) == spec
    assert spec.to_json()["prng"] == PRNG_NAME
    a, b = generate(spec), generate(parse_genspec(text, seed=11))
    ser = format_matrix if hasattr(a, "columns") else format_facets
    assert ser(a) == ser(b)


def test_genspec_errors():
    with pytest.raises(InvalidParameters):
        parse_genspec("klein-bottle:n=3")
    with pytest.raises(InvalidParameters):
        parse_genspec("complete-complex:n=5")
    with pytest.raises(InvalidParameters):
        parse_genspec("complete-complex:n5,d=2")
    with pytest.raises(InvalidParameters):
        parse_genspec("vector-space:q=2,k=3", field="3")
    assert parse_genspec("vector-space:q=3,k=2").field == "3"
