"""Exact verdicts for the circuit/covering inequalities, plus instance analysis.

Every verdict is normalised to ``lhs <relation> rhs`` with ``relation`` one of
``<=`` or ``==``; strict integer inequalities are shifted by one and square
roots are removed by squaring, so deciding a verdict never touches floats.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Any

from .arith import FieldSpec, GF2
from .complex import SimplicialComplex, apply_boundary, boundary_of_simplex
from .decomp import DecompError, SearchBudgetExceeded, decomposition_forest, validate_tree
from .extremal import (
    BRUTEFORCE_LIMIT,
    DEFAULT_BUDGET,
    BudgetExceeded,
    CircuitSearchResult,
    CoverResult,
    gamma_bruteforce,
    gamma_partition,
    max_circuit_exact,
    max_circuit_greedy,
    s_profile,
    s_value,
)
from .gen import GenSpec, colex_d_subsets, gen_colex_family
from .matroid import EXHAUSTIVE_LIMIT, GroundSetTooLarge, LinearMatroid, MatroidError, matroid_from_complex

BOUND_ORDER = (
    "EG_graph",
    "covmat",
    "qrep_binom",
    "qrep_loglog",
    "qrep_sqrt",
    "simplicial_k",
    "simplicial_gamma",
    "simplicial_density",
    "covcomp_exact",
    "lnpr",
    "claim_TM",
)


class VerifyError(ValueError):
    pass


class NoCycles(VerifyError):
    pass


class NotPure(VerifyError):
    pass


class HeuristicRefused(VerifyError):
    pass


def frac_text(x) -> str | None:
    if x is None:
        return None
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class BoundVerdict:
    bound_id: str
    lhs: Fraction | None
    rhs: Fraction | None
    holds: bool
    vacuous: bool
    relation: str = "<="
    witness: Any = None
    inputs: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "bound_id": self.bound_id,
            "lhs": frac_text(self.lhs),
            "rhs": frac_text(self.rhs),
            "relation": self.relation,
            "holds": self.holds,
            "vacuous": self.vacuous,
            "witness": self.witness,
            "inputs": self.inputs,
        }


def _decide(lhs, rhs, relation: str = "<=") -> bool:
    return lhs == rhs if relation == "==" else lhs <= rhs


def _verdict(bound_id, lhs, rhs, *, vacuous=False, relation="<=", witness=None, inputs=None) -> BoundVerdict:
    lhs = None if lhs is None else Fraction(lhs)
    rhs = None if rhs is None else Fraction(rhs)
    holds = True if vacuous else _decide(lhs, rhs, relation)
    return BoundVerdict(bound_id, lhs, rhs, holds, vacuous, relation, witness, inputs or {})


def circuit_witness(M: LinearMatroid, C) -> dict:
    """Circuit labels plus a kernel vector proving dependence."""
    C = sorted(C)
    chk = M.is_circuit(C)
    if not chk:
        raise VerifyError(f"claimed circuit {M.names(C)} fails: {chk.reason}")
    coeffs = chk.coefficients or {}
    return {
        "circuit": M.names(C),
        "size": len(C),
        "coefficients": {M.labels[i]: str(coeffs[i]) for i in C},
    }


def _c_inputs(cres: CircuitSearchResult) -> dict:
    return {"c": cres.size, "c_exact": cres.exact}


# ---------------------------------------------------------------------------
# individual bounds

def verify_erdos_gallai(G: SimplicialComplex, k: int | None = None,
                        cres: CircuitSearchResult | None = None,
                        budget: int = DEFAULT_BUDGET) -> BoundVerdict:
    """If ``|E| > 2k(|V|-1)`` there is a cycle longer than ``k``.

    With ``k`` omitted the largest ``k >= 1`` meeting the hypothesis is used.
    """
    if G.dimension > 1:
        raise VerifyError("a graph (dimension <= 1) is required")
    V = G.f(0)
    E = G.f(1) if G.dimension >= 1 else 0
    if k is None:
        k = 1
        while E > 2 * (k + 1) * (V - 1):
            k += 1
    if k < 1:
        raise VerifyError("k must be >= 1")
    hyp = E > 2 * k * (V - 1)
    inputs = {"k": k, "V": V, "E": E, "threshold": 2 * k * (V - 1)}
    if not hyp and cres is None:
        return _verdict("EG_graph", k + 1, None, vacuous=True, inputs=inputs)
    if cres is None:
        M = matroid_from_complex(G, 1, GF2)
        cres = max_circuit_exact(M, budget=budget)
    else:
        M = matroid_from_complex(G, 1, GF2)
    inputs.update(_c_inputs(cres))
    wit = circuit_witness(M, cres.circuit) if cres.size else None
    return _verdict("EG_graph", k + 1, cres.size, vacuous=not hyp, witness=wit, inputs=inputs)


def verify_covmat(M: LinearMatroid, cres: CircuitSearchResult, cover: CoverResult,
                  force: bool = False, bound_id: str = "covmat") -> BoundVerdict:
    """``gamma(M) <= s_M(c(c-1)/2)`` for loopless ``M`` with ``c > 1``."""
    k = cres.size
    inputs = _c_inputs(cres)
    inputs["gamma"] = cover.gamma
    if k <= 1:
        return _verdict(bound_id, cover.gamma, None, vacuous=True, inputs=inputs)
    t = k * (k - 1) // 2
    s = s_value(M, t, force=force)
    inputs.update({"t": t, "s_t": s})
    wit = {"circuit": M.names(sorted(cres.circuit)), "gamma_witness": M.names(sorted(cover.witness))}
    return _verdict(bound_id, cover.gamma, s, witness=wit, inputs=inputs)


def _digits(x: int, q: int) -> int:
    n = 0
    while x:
        x //= q
        n += 1
    return n


def verify_qrep(M: LinearMatroid, cres: CircuitSearchResult, cover: CoverResult) -> list[BoundVerdict]:
    """The GF(q)-representable consequences, all with exact integers.

    * ``qrep_binom``: ``gamma <= q^C(c,2)``
    * ``qrep_sqrt``: ``c > sqrt(2 log_q gamma)``, i.e. ``gamma^2 + 1 <= q^(c^2)``
    * ``qrep_loglog``: ``c > log_q log_q gamma / 3``, i.e. ``gamma < q^(q^(3c))``,
      i.e. the base-q digit count of gamma is at most ``q^(3c)``
    """
    q = M.field.p
    if q is None:
        raise VerifyError("q-representable bounds need a prime field")
    c, g = cres.size, cover.gamma
    inputs = {"q": q, **_c_inputs(cres), "gamma": g}
    vac = c <= 1
    return [
        _verdict("qrep_binom", g, q ** comb(c, 2), vacuous=vac, inputs=inputs),
        _verdict("qrep_sqrt", g * g + 1, q ** (c * c), vacuous=vac, inputs=inputs),
        _verdict("qrep_loglog", _digits(g, q), q ** (3 * c), vacuous=vac,
                 inputs={**inputs, "gamma_digits": _digits(g, q)}),
    ]


def largest_k(f_d: int, d: int, rank: int) -> int:
    """Largest ``k >= 0`` with ``f_d > (d+1)/2 * k(k+1) * rank``."""
    k = 0
    while 2 * f_d > (d + 1) * (k + 1) * (k + 2) * rank:
        k += 1
    return k


def verify_simplicial(K: SimplicialComplex, field_spec: FieldSpec = GF2,
                      cres: CircuitSearchResult | None = None, cover: CoverResult | None = None,
                      budget: int = DEFAULT_BUDGET, force: bool = False) -> list[BoundVerdict]:
    """Lower bounds on the largest simple d-cycle of a pure d-complex."""
    d = K.dimension
    if d < 1:
        raise VerifyError("dimension >= 1 required")
    if not K.is_pure:
        raise NotPure("complex is not pure")
    M = matroid_from_complex(K, d, field_spec)
    f_d, f_dm1, r = K.f(d), K.f(d - 1), M.rank
    if r >= f_d:
        raise NoCycles("rank equals f_d: no nontrivial cycles")
    if cres is None:
        cres = max_circuit_exact(M, budget=budget)
    if cover is None:
        cover = gamma_partition(M)
    c, g = cres.size, cover.gamma
    base = {"d": d, "f_d": f_d, "f_d_minus_1": f_dm1, "rank_d": r, **_c_inputs(cres), "gamma": g}
    wit = circuit_witness(M, cres.circuit)
    k = largest_k(f_d, d, r)
    out = [
        _verdict("simplicial_k", k + 1, c, witness=wit, inputs={**base, "k": k}),
        # c >= sqrt(gamma/d) - 1  <=>  gamma <= d (c+1)^2
        _verdict("simplicial_gamma", g, d * (c + 1) ** 2, inputs=base),
        # c >= sqrt(2 f_d / ((d+1) f_{d-1})) - 1  <=>  2 f_d / ((d+1) f_{d-1}) <= (c+1)^2
        _verdict("simplicial_density", Fraction(2 * f_d, (d + 1) * f_dm1), (c + 1) ** 2, inputs=base),
    ]
    try:
        out.append(verify_covmat(M, cres, cover, force=force, bound_id="covcomp_exact"))
    except GroundSetTooLarge:
        pass
    return out


def verify_lnpr(n: int, d: int, x: int, field_spec: FieldSpec = GF2) -> BoundVerdict:
    """Rank of the colex-initial family of ``C(x+1, d+1)`` d-faces is at least ``C(x, d)``."""
    s = comb(x + 1, d + 1)
    if d < 1 or x < d or x + 1 > n:
        raise VerifyError("need 1 <= d <= x and x + 1 <= n")
    K = gen_colex_family(n, d, s)
    M = matroid_from_complex(K, d, field_spec)
    r = M.rank
    faces = K.simplices(d)
    star = [i for i, f in enumerate(faces) if 0 in f]
    star_is_basis = len(star) == r and M.is_independent(star)
    wit = {"tight": r == comb(x, d), "star_of_min_vertex_is_basis": star_is_basis,
           "family": [list(f) for f in faces]}
    return _verdict("lnpr", comb(x, d), r, witness=wit,
                    inputs={"n": n, "d": d, "x": x, "s": s, "rank_d": r})


def verify_claim_tree(M: LinearMatroid, budget: int = DEFAULT_BUDGET, trees=None, max_circuit=None):
    """Build and validate a tree on each nontrivial component."""
    if trees is None:
        trees = decomposition_forest(M, budget, max_circuit)
    reports = [validate_tree(t, budget) for t in trees]
    total = sum(rep.circuit_sum for rep in reports)
    rank = sum(rep.rank for rep in reports)
    ok = all(rep.ok for rep in reports)
    failures = [f.to_json() for rep in reports for f in rep.failures]
    v = BoundVerdict("claim_TM", Fraction(total), Fraction(rank), ok and total == rank, False, "==",
                     {"failures": failures} if failures else None,
                     {"trees": len(trees), "depths": [rep.depth for rep in reports]})
    return v, trees, reports


# ---------------------------------------------------------------------------
# analysis

@dataclass
class AnalysisOptions:
    field: FieldSpec = GF2
    budget: int = DEFAULT_BUDGET
    force: bool = False
    heuristic: bool = False
    seed: int = 0
    tree: bool = True


@dataclass
class AnalysisReport:
    data: dict

    @property
    def verdicts(self) -> list[dict]:
        return self.data["verdicts"]

    @property
    def all_hold(self) -> bool:
        return all(v["holds"] for v in self.verdicts)

    def to_json(self) -> dict:
        return self.data


NOTES = {
    "gamma_formula": "closed-form value (q^k-1)/k for the nonzero vectors of GF(q)^k omits the ceiling; "
                     "gamma reported is the ceiling",
    "s_direction": "the asymptotic lower bound on s_d(t) is not the direction needed for the covering bound; "
                   "only the exact colex rank implication is checked",
    "no_cycles": "no nontrivial cycles (rank equals ground set size): c reported as 0",
    "heuristic": "c is a lower bound from greedy search, not exact",
    "not_pure": "complex is not pure; simplicial bounds evaluated on its pure part",
    "loops": "matroid has loops: gamma is undefined (infinite)",
    "s_out_of_reach": "s-profile beyond exhaustive reach; pass --force to compute",
}


def max_circuit_for(M: LinearMatroid, opts: AnalysisOptions) -> CircuitSearchResult:
    """Exact c, or a greedy lower bound when permitted and the budget runs out."""
    try:
        return max_circuit_exact(M, budget=opts.budget)
    except BudgetExceeded:
        if not opts.heuristic:
            raise
        return max_circuit_greedy(M, restarts=32, seed=opts.seed)


def _min_circuit(M: LinearMatroid, c: int, force: bool) -> int | None:
    """Smallest circuit size, or None beyond exhaustive reach."""
    if M.size > EXHAUSTIVE_LIMIT and not force:
        return None
    for cap in range(2, c + 1):
        # no circuit below cap exists, so any circuit found has size exactly cap
        if M.enumerate_circuits(size_cap=cap, count_cap=1, force=force):
            return cap
    return c


def _loopless(M: LinearMatroid) -> tuple[LinearMatroid, tuple[int, ...]]:
    loops = M.loops()
    if not loops:
        return M, tuple(range(M.size))
    return M.restrict_with_map([i for i in range(M.size) if i not in loops])


def analyze(instance, opts: AnalysisOptions | None = None, spec: GenSpec | None = None) -> AnalysisReport:
    """Every quantity and applicable verdict for a complex or a matroid."""
    opts = opts or AnalysisOptions()
    notes: list[str] = []
    probes: dict = {}
    K = None
    if isinstance(instance, SimplicialComplex):
        K = instance
        d = K.dimension
        if d < 1:
            raise VerifyError("complex needs dimension >= 1")
        if not K.is_pure:
            notes.append(NOTES["not_pure"])
        Kp = K.pure_part(d)
        M = matroid_from_complex(Kp, d, opts.field)
        f_vector = list(K.f_vector)
        zero_bad = [s for s in K.simplices(d)
                    if not apply_boundary(boundary_of_simplex(s, opts.field)).is_zero()]
        probes["boundary_squared_zero"] = not zero_bad
    elif isinstance(instance, LinearMatroid):
        M = instance
        d = None
        f_vector = None
    else:
        raise VerifyError(f"cannot analyse {type(instance).__name__}")

    n, r = M.size, M.rank
    L, lmap = _loopless(M)
    has_loops = L.size != n
    if has_loops:
        notes.append(NOTES["loops"])

    # circuit search and tree
    trees, reports, tree_data = [], [], None
    if r == n:
        cres = CircuitSearchResult(frozenset(), 0, True, 0, "none")
        notes.append(NOTES["no_cycles"])
    else:
        cres = max_circuit_for(L, opts)
        cres = CircuitSearchResult(frozenset(lmap[i] for i in cres.circuit), cres.size, cres.exact,
                                   cres.nodes_explored, cres.method)
        if not cres.exact:
            notes.append(NOTES["heuristic"])
    c = cres.size

    cover = None if has_loops else gamma_partition(M)
    gamma = cover.gamma if cover else None

    density: dict = {"ground_over_rank": frac_text(Fraction(n, r)) if r else None}
    if K is not None:
        density["f_d_over_f_d_minus_1"] = frac_text(Fraction(K.f(d), K.f(d - 1))) if K.f(d - 1) else None
    if cover is not None and (n <= BRUTEFORCE_LIMIT or opts.force) and n:
        gb, dens, arg = gamma_bruteforce(M, force=opts.force)
        density["max"] = frac_text(dens)
        density["argmax"] = M.names(sorted(arg))
    else:
        density["max"] = None

    s_prof = None
    if n <= BRUTEFORCE_LIMIT or opts.force:
        s_prof = s_profile(M, force=opts.force)
    else:
        notes.append(NOTES["s_out_of_reach"])

    verdicts: list[BoundVerdict] = []
    if c and cover is not None and K is None:
        # for complexes the same inequality appears as covcomp_exact
        try:
            verdicts.append(verify_covmat(M, cres, cover, force=opts.force))
        except GroundSetTooLarge:
            pass
    if c and cover is not None and M.field.p is not None:
        verdicts.extend(verify_qrep(M, cres, cover))
    if K is not None and d == 1:
        verdicts.append(verify_erdos_gallai(K, cres=cres))
    if K is not None and c and cover is not None:
        Kp = K.pure_part(d)
        verdicts.extend(verify_simplicial(Kp, opts.field, cres=cres, cover=cover, force=opts.force))
    if spec is not None and spec.family == "colex_family":
        nn, dd, ss = (spec.params[k] for k in ("n", "d", "s"))
        x = next((x for x in range(dd, nn) if comb(x + 1, dd + 1) == ss), None)
        if x is not None:
            verdicts.append(verify_lnpr(nn, dd, x, opts.field))
    if opts.tree and cres.exact and c:
        try:
            pos = {j: k for k, j in enumerate(lmap)}
            v, trees, reports = verify_claim_tree(L, opts.budget, max_circuit=[pos[i] for i in cres.circuit])
        except (SearchBudgetExceeded, DecompError):
            notes.append("decomposition tree skipped: search budget exceeded")
        else:
            verdicts.append(v)
            tree_data = [{"elements": M.names(sorted(lmap[i] for i in t.root.elements)),
                          **t.summary(), "validation": rep.to_json()} for t, rep in zip(trees, reports)]

    order = {b: i for i, b in enumerate(BOUND_ORDER)}
    verdicts.sort(key=lambda v: order[v.bound_id])

    if spec is not None and spec.family == "vector_space_nonzero":
        q, k = spec.params["q"], spec.params["k"]
        formula = Fraction(q ** k - 1, k)
        probes["vector_space"] = {"gamma_formula": frac_text(formula),
                                  "gamma_formula_ceiling": -(-formula.numerator // formula.denominator),
                                  "gamma": gamma, "expected_c": k + 1, "c": c,
                                  "discrepancy": formula.denominator != 1}
        if formula.denominator != 1:
            notes.append(NOTES["gamma_formula"])
    if K is not None:
        notes.append(NOTES["s_direction"])
        if gamma:
            probes["growth"] = {"c": c, "gamma_pow_d": gamma ** d,
                                "ratio": frac_text(Fraction(c, gamma ** d))}
        if c > 1:
            probes["small_cycle"] = {"c": c, "d_plus_1": d + 1, "c_at_least_d_plus_1": c >= d + 1,
                                     "min_circuit": _min_circuit(L, c, opts.force)}
    if K is not None and r:
        probes["rank_over_f_d_minus_1"] = frac_text(Fraction(r, K.f(d - 1)))

    data = {
        "instance": spec.to_json() if spec is not None else None,
        "field": str(opts.field),
        "kind": "complex" if K is not None else "matroid",
        "dimension": d,
        "ground_size": n,
        "f_vector": f_vector,
        "rank_d": r,
        "cycle_space_dim": n - r,
        "c": c,
        "c_exact": cres.exact,
        "c_method": cres.method,
        "circuit": circuit_witness(M, cres.circuit) if c else None,
        "gamma": gamma,
        "gamma_partition": [M.names(sorted(b)) for b in cover.partition] if cover else None,
        "gamma_witness": M.names(sorted(cover.witness)) if cover else None,
        "density": density,
        "s_profile": s_prof,
        "tree": tree_data,
        "verdicts": [v.to_json() for v in verdicts],
        "probes": probes,
        "notes": notes,
    }
    return AnalysisReport(data)
