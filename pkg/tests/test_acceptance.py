"""Acceptance suite: one test per criterion, each reporting a PASS/FAIL line."""

from __future__ import annotations

import subprocess
import sys
import time
from fractions import Fraction
from math import comb

import pytest

from corpus import connected_binary, linial_meshulam_cyclic, loopless_mixed, random_graphs
from cyclebound.arith import GF2, QQ, FieldSpec
from cyclebound.complex import apply_boundary, boundary_of_simplex
from cyclebound.decomp import build_decomposition_tree, validate_tree
from cyclebound.extremal import gamma_bruteforce, gamma_partition, max_circuit_exact, s_value
from cyclebound.gen import gen_complete_complex, gen_graph, gen_vector_space_nonzero, parse_genspec
from cyclebound.matroid import matroid_from_complex
from cyclebound.verify import analyze, verify_covmat, verify_erdos_gallai, verify_lnpr, verify_simplicial


def _detail(record_property, text: str) -> None:
    record_property("detail", text)


def _kernel_certified(M, C, coeffs) -> bool:
    """Check sum(coeff * column) == 0 with all coefficients nonzero, and minimality."""
    f = M.field
    if set(coeffs) != set(C) or not all(coeffs[i] for i in C):
        return False
    coeffs = {i: c.value for i, c in coeffs.items()}
    acc = [f.zero()] * M.nrows
    for i in C:
        col = M.raw_column(i)
        acc = [f.add(a, f.mul(coeffs[i], x)) for a, x in zip(acc, col)]
    if any(acc):
        return False
    return all(M.is_independent(set(C) - {e}) for e in C)


@pytest.mark.criterion(1, "Fano benchmark")
def test_fano_benchmark(record_property):
    t0 = time.perf_counter()
    spec = parse_genspec("vector-space:q=2,k=3")
    rep = analyze(gen_vector_space_nonzero(2, 3), spec=spec).data
    elapsed = time.perf_counter() - t0
    probe = rep["probes"]["vector_space"]
    ok = (rep["c"] == 4 and rep["c_exact"] and rep["gamma"] == 3
          and probe["gamma_formula"] == "7/3" and probe["gamma_formula_ceiling"] == 3
          and probe["discrepancy"] is True and elapsed < 1.0)
    _detail(record_property, f"c={rep['c']} gamma={rep['gamma']} formula={probe['gamma_formula']} "
                             f"flagged={probe['discrepancy']} {elapsed:.2f}s")
    assert ok


@pytest.mark.criterion(2, "decomposition tree identities")
def test_tree_claim_suite(record_property):
    t0 = time.perf_counter()
    corpus = connected_binary(200, max_n=18)
    corpus += [matroid_from_complex(gen_graph("complete", {"n": n}), 1, GF2) for n in range(3, 8)]
    bad, deep = [], 0
    for k, M in enumerate(corpus):
        T = build_decomposition_tree(M)
        rep = validate_tree(T)
        deep += T.depth > 0
        if not (rep.ok and rep.circuit_sum == M.rank):
            bad.append((k, [f.to_json() for f in rep.failures]))
    elapsed = time.perf_counter() - t0
    _detail(record_property, f"{len(corpus)} matroids, {deep} with depth > 0, "
                             f"{len(bad)} failing, {elapsed:.1f}s")
    assert not bad and elapsed < 120, bad[:3]


@pytest.mark.criterion(3, "partitioning equals subset maximisation")
def test_partition_oracle(record_property):
    t0 = time.perf_counter()
    corpus = loopless_mixed(300, max_n=16)
    bad = []
    for k, M in enumerate(corpus):
        cover = gamma_partition(M)
        g, _, _ = gamma_bruteforce(M)
        blocks = cover.partition
        covering = set().union(*blocks) == set(range(M.size))
        disjoint = sum(map(len, blocks)) == M.size
        indep = all(M.is_independent(b) for b in blocks)
        w = cover.witness
        cert = -(-len(w) // M.rank_of(w)) == cover.gamma
        if not (cover.gamma == g == len(blocks) and covering and disjoint and indep and cert):
            bad.append(k)
    elapsed = time.perf_counter() - t0
    _detail(record_property, f"{len(corpus)} instances, {len(bad)} mismatches, {elapsed:.1f}s")
    assert not bad and elapsed < 300, bad


@pytest.mark.criterion(4, "covering number bounded by the size profile")
def test_covmat(record_property):
    corpus = [M for M in loopless_mixed(300, max_n=16) if M.rank < M.size]
    checked, violations = 0, []
    for k, M in enumerate(corpus):
        c = max_circuit_exact(M)
        if c.size <= 1:
            continue
        v = verify_covmat(M, c, gamma_partition(M))
        # independent recomputation of the right-hand side
        assert v.rhs == s_value(M, c.size * (c.size - 1) // 2)
        checked += 1
        if not v.holds:
            violations.append(k)
    _detail(record_property, f"{checked} instances checked, {len(violations)} violations")
    assert checked >= 100 and not violations


@pytest.mark.criterion(5, "simplicial lower bounds")
def test_simplicial_bounds(record_property):
    t0 = time.perf_counter()
    corpus = [gen_complete_complex(d + 2, d) for d in range(1, 5)]
    corpus += [gen_complete_complex(n, 2) for n in range(4, 8)]
    corpus += linial_meshulam_cyclic(100)
    checked, violations = 0, []
    for k, K in enumerate(corpus):
        verdicts = verify_simplicial(K, GF2)
        by_id = {v.bound_id: v for v in verdicts}
        for b in ("simplicial_gamma", "simplicial_density"):
            checked += 1
            v = by_id[b]
            if not v.holds or v.vacuous or not v.inputs["c_exact"]:
                violations.append((k, b))
        # the squared comparisons agree with the unsquared statement
        c, g, d = v.inputs["c"], v.inputs["gamma"], v.inputs["d"]
        assert (Fraction(g, d) <= (c + 1) ** 2) == by_id["simplicial_gamma"].holds
    elapsed = time.perf_counter() - t0
    _detail(record_property, f"{len(corpus)} complexes, {checked} verdicts, "
                             f"{len(violations)} violations, {elapsed:.1f}s")
    assert not violations and elapsed < 600, violations


@pytest.mark.criterion(6, "colex rank bound")
def test_lnpr(record_property):
    t0 = time.perf_counter()
    rows = []
    ok = True
    for d, x in ((1, 2), (1, 3), (2, 3), (2, 4), (3, 4)):
        n = x + 2
        v = verify_lnpr(n, d, x)
        ok &= v.holds and v.inputs["s"] == comb(x + 1, d + 1)
        rows.append(f"({d},{x}) rank={v.rhs} bound={v.lhs} tight={v.witness['tight']}")
    elapsed = time.perf_counter() - t0
    _detail(record_property, "; ".join(rows) + f"; {elapsed:.2f}s")
    assert ok and elapsed < 30


@pytest.mark.criterion(7, "dense graphs have long cycles")
def test_erdos_gallai(record_property):
    corpus = random_graphs(100, max_n=12) + [gen_graph("complete", {"n": n}) for n in range(2, 10)]
    substantive, violations = 0, []
    for k, G in enumerate(corpus):
        M = matroid_from_complex(G, 1, GF2)
        c = max_circuit_exact(M) if M.rank < M.size else None
        V, E = G.f(0), G.f(1)
        kk = 1
        while E > 2 * kk * (V - 1):
            v = verify_erdos_gallai(G, kk, cres=c)
            substantive += 1
            cyc = v.witness["circuit"] if v.witness else []
            if not (v.holds and len(cyc) > kk and M.is_circuit(M.indices(cyc))):
                violations.append((k, kk))
            kk += 1
    _detail(record_property, f"{len(corpus)} graphs, {substantive} substantive (graph, k) pairs, "
                             f"{len(violations)} violations")
    assert substantive and not violations


@pytest.mark.criterion(8, "structural oracles")
def test_structural_oracles(record_property):
    complexes = [gen_complete_complex(n, d) for n, d in ((4, 2), (5, 3), (6, 2), (6, 4), (7, 2))]
    complexes += linial_meshulam_cyclic(20, seed=11)
    dd_ok = True
    for K in complexes:
        for d in range(1, K.dimension + 1):
            for s in K.simplices(d):
                for f in (GF2, FieldSpec.prime(7), QQ):
                    dd_ok &= apply_boundary(boundary_of_simplex(s, f)).is_zero()
    small = [M for M in loopless_mixed(120, max_n=14, seed=3)]
    small += connected_binary(40, max_n=14, seed=8)
    cert_ok, comp_ok, circuits = True, True, 0
    for M in small:
        for C in M.enumerate_circuits():
            chk = M.is_circuit(C)
            circuits += 1
            cert_ok &= bool(chk) and _kernel_certified(M, sorted(C), chk.coefficients)
        comp_ok &= M.components() == M.components_bruteforce()
    _detail(record_property, f"boundary^2=0 on {len(complexes)} complexes: {dd_ok}; "
                             f"{circuits} circuit certificates: {cert_ok}; components on {len(small)}: {comp_ok}")
    assert dd_ok and cert_ok and comp_ok


CLI_RUNS = [
    ["analyze", "--gen", "vector-space:q=2,k=3"],
    ["analyze", "--gen", "complete-complex:n=5,d=2", "--field", "3"],
    ["analyze", "--gen", "linial-meshulam:n=7,d=2,m=20", "--seed", "4"],
    ["analyze", "--gen", "random-gnm:n=9,m=20", "--seed", "12"],
    ["max-cycle", "--gen", "complete-graph:n=7"],
    ["gamma", "--gen", "random-matroid:n=12,r=4", "--field", "rational", "--seed", "3"],
    ["decompose", "--gen", "complete-complex:n=6,d=2"],
    ["verify", "--gen", "colex:n=6,d=2,s=10"],
    ["oracle", "--gen", "random-matroid:n=10,r=4", "--op", "circuits", "--seed", "1"],
    ["generate", "--gen", "linial-meshulam:n=8,d=2,m=30", "--seed", "7"],
]


@pytest.mark.criterion(9, "byte-identical reports")
def test_determinism(record_property):
    differing = []
    for argv in CLI_RUNS:
        outs = [subprocess.run([sys.executable, "-m", "cyclebound.cli", *argv],
                               capture_output=True, check=False) for _ in range(2)]
        if outs[0].stdout != outs[1].stdout or outs[0].returncode != 0 or not outs[0].stdout:
            differing.append(" ".join(argv))
    _detail(record_property, f"{len(CLI_RUNS)} invocations run twice, {len(differing)} differ")
    assert not differing, differing
