from fractions import Fraction

import pytest

from cyclebound.arith import GF2, QQ
from cyclebound.complex import complex_from_facets
from cyclebound.extremal import gamma_partition, max_circuit_exact
from cyclebound.gen import gen_complete_complex, gen_graph, gen_vector_space_nonzero, parse_genspec
from cyclebound.matroid import matroid_from_complex
from cyclebound.verify import (
    BOUND_ORDER,
    NOTES,
    AnalysisOptions,
    NoCycles,
    NotPure,
    analyze,
    frac_text,
    largest_k,
    verify_claim_tree,
    verify_covmat,
    verify_erdos_gallai,
    verify_lnpr,
    verify_qrep,
    verify_simplicial,
)


def test_frac_text():
    assert frac_text(Fraction(7, 3)) == "7/3"
    assert frac_text(Fraction(4, 2)) == "2"
    assert frac_text(None) is None


def test_erdos_gallai():
    K9 = gen_graph("complete", {"n": 9})
    v = verify_erdos_gallai(K9, 2)
    assert v.holds and not v.vacuous and v.rhs == 9 and v.lhs == 3
    assert v.inputs["threshold"] == 32 and len(v.witness["circuit"]) == 9
    assert verify_erdos_gallai(K9).inputs["k"] == 2
    v = verify_erdos_gallai(gen_graph("complete", {"n": 4}), 1)
    assert v.vacuous and v.holds and v.rhs is None


def test_covmat_and_qrep_on_fano():
    M = gen_vector_space_nonzero(2, 3)
    c, cover = max_circuit_exact(M), gamma_partition(M)
    v = verify_covmat(M, c, cover)
    assert v.holds and (v.lhs, v.rhs) == (3, 7) and v.inputs["t"] == 6
    q = {x.bound_id: x for x in verify_qrep(M, c, cover)}
    assert q["qrep_binom"].rhs == 2 ** 6 and q["qrep_sqrt"].lhs == 10 and q["qrep_sqrt"].rhs == 2 ** 16
    assert all(x.holds for x in q.values())


def test_largest_k():
    assert largest_k(4, 2, 3) == 0
    assert largest_k(20, 2, 10) == 0
    for f, d, r in ((36, 1, 8), (120, 2, 36), (84, 3, 20)):
        k = largest_k(f, d, r)
        assert 2 * f > (d + 1) * k * (k + 1) * r or k == 0
        assert not 2 * f > (d + 1) * (k + 1) * (k + 2) * r


def test_simplicial_on_sphere_and_complete():
    by = {v.bound_id: v for v in verify_simplicial(gen_complete_complex(4, 2))}
    dens = by["simplicial_density"]
    assert dens.lhs == Fraction(4, 9) and dens.rhs == 25 and dens.holds
    assert by["simplicial_gamma"].holds and by["covcomp_exact"].holds
    K5 = gen_complete_complex(5, 1)
    by = {v.bound_id: v for v in verify_simplicial(K5)}
    assert by["simplicial_density"].lhs == 2 and by["simplicial_k"].holds
    assert all(v.holds for v in verify_simplicial(gen_complete_complex(6, 2), QQ))


def test_simplicial_errors():
    with pytest.raises(NoCycles):
        verify_simplicial(complex_from_facets([(0, 1, 2)]))
    with pytest.raises(NotPure):
        verify_simplicial(complex_from_facets([(0, 1, 2), (2, 3)]))


@pytest.mark.parametrize("n,d,x", [(4, 1, 2), (6, 2, 4), (7, 3, 5)])
def test_lnpr(n, d, x):
    v = verify_lnpr(n, d, x)
    assert v.holds and v.witness["tight"] and v.witness["star_of_min_vertex_is_basis"]


def test_claim_tree():
    M = matroid_from_complex(gen_complete_complex(6, 2), 2, GF2)
    v, trees, reports = verify_claim_tree(M)
    assert len(trees) == 1 and reports[0].ok
    assert v.holds and v.relation == "==" and v.lhs == v.rhs == 10


def test_analyze_fano():
    data = analyze(gen_vector_space_nonzero(2, 3), spec=parse_genspec("vector-space:q=2,k=3")).data
    assert (data["c"], data["gamma"], data["rank_d"]) == (4, 3, 3)
    assert data["s_profile"] == [0, 1, 3, 7]
    assert data["probes"]["vector_space"]["discrepancy"] is True
    assert NOTES["gamma_formula"] in data["notes"]
    ids = [v["bound_id"] for v in data["verdicts"]]
    assert ids == sorted(ids, key=BOUND_ORDER.index)
    assert all(v["holds"] for v in data["verdicts"])


def test_analyze_single_triangle():
    data = analyze(complex_from_facets([(0, 1, 2)])).data
    assert data["c"] == 0 and data["cycle_space_dim"] == 0
    assert NOTES["no_cycles"] in data["notes"]


def test_analyze_probes_on_sphere():
    data = analyze(gen_complete_complex(4, 2)).data
    assert data["probes"]["boundary_squared_zero"] is True
    assert data["probes"]["small_cycle"]["c_at_least_d_plus_1"]
    assert data["probes"]["small_cycle"]["min_circuit"] == 4
    assert data["density"]["f_d_over_f_d_minus_1"] == "2/3"


def test_min_circuit_on_k5():
    data = analyze(gen_complete_complex(5, 1)).data
    assert data["probes"]["small_cycle"]["min_circuit"] == 3


def test_analyze_heuristic_flagged():
    data = analyze(gen_complete_complex(6, 2), AnalysisOptions(budget=20, heuristic=True, tree=False)).data
    assert not data["c_exact"] and NOTES["heuristic"] in data["notes"]


def test_analyze_colex_adds_lnpr():
    spec = parse_genspec("colex:n=6,d=2,s=10")
    data = analyze(gen_complete_complex(5, 2), spec=spec).data
    assert any(v["bound_id"] == "lnpr" and v["holds"] for v in data["verdicts"])
