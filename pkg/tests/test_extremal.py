from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cyclebound.arith import GF2, QQ, FieldSpec
from cyclebound.extremal import (
    BudgetExceeded,
    HasLoops,
    NoCircuitExists,
    gamma_bruteforce,
    gamma_partition,
    max_circuit_exact,
    max_circuit_greedy,
    s_profile,
)
from cyclebound.gen import gen_complete_complex, gen_graph, gen_random_matroid, gen_vector_space_nonzero
from cyclebound.matroid import GroundSetTooLarge, direct_sum, matroid_from_columns, matroid_from_complex

FANO = gen_vector_space_nonzero(2, 3)
U23 = gen_vector_space_nonzero(2, 2)
SPHERE = matroid_from_complex(gen_complete_complex(4, 2), 2, GF2)


def graphic(kind, **params):
    return matroid_from_complex(gen_graph(kind, params), 1, GF2)


K4 = graphic("complete", n=4)
METHODS = ("branch-and-bound", "cycle-space")


def _oracle_max(M):
    cl = list(M.enumerate_circuits())
    if not cl:
        return 0, ()
    best = min(cl, key=lambda C: (-len(C), sorted(C)))
    return len(best), tuple(sorted(best))


@pytest.mark.parametrize("method", METHODS)
def test_max_circuit_examples(method):
    res = max_circuit_exact(FANO, method=method)
    assert res.size == 4 and res.exact
    assert FANO.names(sorted(res.circuit)) == ["100", "010", "001", "111"]
    assert max_circuit_exact(K4, method=method).size == 4
    assert max_circuit_exact(SPHERE, method=method).circuit == frozenset(range(4))


def test_vector_space_circuits():
    for k in (2, 3, 4):
        assert max_circuit_exact(gen_vector_space_nonzero(2, k)).size == k + 1


def test_complete_graphs_are_hamiltonian():
    for n in range(3, 9):
        assert max_circuit_exact(graphic("complete", n=n)).size == n


def test_budget_exceeded_carries_best():
    M = matroid_from_complex(gen_complete_complex(6, 2), 2, GF2)
    with pytest.raises(BudgetExceeded) as exc:
        max_circuit_exact(M, budget=50, method="branch-and-bound")
    best = exc.value.best
    assert not best.exact and best.size <= 10
    if best.size:
        assert M.is_circuit(best.circuit)


def test_cycle_space_needs_binary():
    with pytest.raises(Exception):
        max_circuit_exact(gen_random_matroid(6, 3, QQ, seed=1), method="cycle-space")


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([GF2, FieldSpec.prime(3), FieldSpec.prime(5), QQ]), st.integers(0, 10 ** 6),
       st.integers(2, 14), st.integers(1, 6))
def test_exact_matches_enumeration(field, seed, n, r):
    M = gen_random_matroid(n, r, field, seed=seed)
    size, lex = _oracle_max(M)
    methods = METHODS if field.is_binary else METHODS[:1]
    for method in methods:
        if size == 0:
            continue
        res = max_circuit_exact(M, method=method)
        assert (res.size, tuple(sorted(res.circuit))) == (size, lex), method


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_circuit_of_direct_sum_is_max_over_parts(seed):
    A = gen_random_matroid(6, 3, GF2, seed=seed)
    B = gen_random_matroid(7, 4, GF2, seed=seed + 1)
    sizes = [max_circuit_exact(X).size for X in (A, B) if X.rank < X.size]
    assert max_circuit_exact(direct_sum(A, B)).size == max(sizes)


def test_greedy_examples():
    for seed in range(5):
        res = max_circuit_greedy(FANO, seed=seed)
        assert res.size in (3, 4) and not res.exact and FANO.is_circuit(res.circuit)
    assert max_circuit_greedy(graphic("cycle", k=5)).size == 5
    with pytest.raises(NoCircuitExists):
        max_circuit_greedy(matroid_from_columns(GF2, [[1, 0], [0, 1]]))
    a = max_circuit_greedy(gen_random_matroid(14, 5, GF2, seed=3), seed=9)
    b = max_circuit_greedy(gen_random_matroid(14, 5, GF2, seed=3), seed=9)
    assert a == b


def test_gamma_examples():
    fano = gamma_partition(FANO)
    assert fano.gamma == 3 and fano.witness == FANO.ground
    assert sorted(map(len, fano.partition)) in ([1, 3, 3], [2, 2, 3])
    assert gamma_partition(K4).gamma == 2
    assert gamma_partition(SPHERE).gamma == 2
    assert gamma_bruteforce(U23) == (2, Fraction(3, 2), frozenset(range(3)))
    g, dens, _ = gamma_bruteforce(FANO)
    assert (g, dens) == (3, Fraction(7, 3))
    coloop = matroid_from_columns(GF2, [[1]])
    assert gamma_bruteforce(coloop)[:2] == (1, Fraction(1))


def test_gamma_errors():
    loopy = matroid_from_columns(GF2, [[1, 0], [0, 0]])
    with pytest.raises(HasLoops):
        gamma_partition(loopy)
    with pytest.raises(HasLoops):
        gamma_bruteforce(loopy)
    with pytest.raises(GroundSetTooLarge):
        gamma_bruteforce(gen_random_matroid(21, 4, GF2))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([GF2, FieldSpec.prime(3), QQ]), st.integers(0, 10 ** 6), st.integers(1, 12),
       st.integers(1, 5))
def test_partition_matches_bruteforce(field, seed, n, r):
    M = gen_random_matroid(n, r, field, seed=seed)
    cover = gamma_partition(M)
    assert cover.gamma == gamma_bruteforce(M)[0] == len(cover.partition)
    assert all(M.is_independent(b) for b in cover.partition)
    assert sorted(i for b in cover.partition for i in b) == list(range(n))
    w = cover.witness
    assert -(-len(w) // M.rank_of(w)) == cover.gamma


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_gamma_of_direct_sum_is_max(seed):
    A = gen_random_matroid(7, 2, GF2, seed=seed)
    B = gen_random_matroid(6, 4, FieldSpec.prime(2), seed=seed + 7)
    assert gamma_partition(direct_sum(A, B)).gamma == max(gamma_partition(A).gamma, gamma_partition(B).gamma)


def test_s_profile_examples():
    assert s_profile(FANO) == [0, 1, 3, 7]
    assert s_profile(U23) == [0, 1, 3]
    assert s_profile(SPHERE) == [0, 1, 2, 4]
    assert s_profile(FANO, 6) == [0, 1, 3, 7, 7, 7, 7]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.integers(0, 10 ** 6), st.integers(1, 10), st.integers(1, 5))
def test_s_profile_properties(p, seed, n, r):
    M = gen_random_matroid(n, r, FieldSpec.prime(p), seed=seed)
    s = s_profile(M)
    assert s == sorted(s) and s[-1] == n
    simple = not any(len(C) == 2 for C in M.enumerate_circuits(size_cap=2))
    if simple:
        assert all(v <= p ** i - 1 for i, v in enumerate(s) if i)
    # brute force over subsets
    from itertools import combinations
    for i in range(len(s)):
        best = max((len(A) for k in range(n + 1) for A in combinations(range(n), k) if M.rank_of(A) <= i))
        assert best == s[i]


def test_s_profile_guard():
    with pytest.raises(GroundSetTooLarge):
        s_profile(gen_random_matroid(22, 5, GF2))
