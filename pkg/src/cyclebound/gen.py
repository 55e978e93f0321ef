"""Instance generators.

Every generator is a pure function of its parameters (and seed).  Random
choices use NumPy's ``PCG64`` bit generator seeded with the 64-bit seed;
:data:`PRNG_NAME` is recorded in reports.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field as dc_field
from itertools import combinations, product
from math import comb

import numpy as np

from .arith import FieldSpec, GF2
from .complex import SimplicialComplex, colex_key, complex_from_facets
from .matroid import LinearMatroid, matroid_from_columns

__all__ = [
    "InvalidParameters",
    "PRNG_NAME",
    "GenSpec",
    "rng_for",
    "gen_complete_complex",
    "gen_graph",
    "gen_vector_space_nonzero",
    "gen_linial_meshulam",
    "gen_colex_family",
    "colex_d_subsets",
    "gen_random_matroid",
    "generate",
    "parse_genspec",
    "FAMILIES",
]

PRNG_NAME = "numpy.PCG64"
_MASK64 = (1 << 64) - 1


class InvalidParameters(ValueError):
    pass


def rng_for(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed & _MASK64))


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise InvalidParameters(msg)


def gen_complete_complex(n: int, d: int) -> SimplicialComplex:
    """All simplices of dimension <= d on n vertices."""
    _need(d >= 0 and n >= d + 1, f"complete complex needs n >= d + 1 >= 1 (n={n}, d={d})")
    return complex_from_facets(combinations(range(n), d + 1))


def gen_graph(kind: str, params: dict, seed: int = 0) -> SimplicialComplex:
    if kind == "cycle":
        k = params.get("k", params.get("n"))
        _need(k is not None and k >= 3, "cycle graph needs k >= 3")
        return complex_from_facets([(i, (i + 1) % k) for i in range(k)])
    if kind == "complete":
        n = params.get("n")
        _need(n is not None and n >= 2, "complete graph needs n >= 2")
        return complex_from_facets(combinations(range(n), 2))
    if kind == "random_gnm":
        n, m = params.get("n"), params.get("m")
        _need(n is not None and m is not None and n >= 2, "random_gnm needs n >= 2 and m")
        pairs = list(combinations(range(n), 2))
        _need(0 <= m <= len(pairs), f"random_gnm needs 0 <= m <= {len(pairs)}")
        pick = sorted(rng_for(seed).choice(len(pairs), size=m, replace=False).tolist())
        faces = [[(v,) for v in range(n)], [pairs[i] for i in pick]]
        return SimplicialComplex(faces)
    raise InvalidParameters(f"unknown graph kind {kind!r}")


def gen_vector_space_nonzero(q: int, k: int) -> LinearMatroid:
    """All nonzero vectors of GF(q)^k, ordered colex on coordinates."""
    _need(k >= 1, "vector space needs k >= 1")
    try:
        field = FieldSpec(q)
    except ValueError:
        raise InvalidParameters(f"q must be prime, got {q}") from None
    _need(q ** k <= 1 << 16, "q^k exceeds the 2^16 guardrail")
    cols, labels = [], []
    for x in range(1, q ** k):
        digits = [(x // q ** i) % q for i in range(k)]
        cols.append(digits)
        labels.append("".join(map(str, digits)) if q <= 10 else ",".join(map(str, digits)))
    return matroid_from_columns(field, cols, labels, nrows=k)


def gen_linial_meshulam(n: int, d: int, m: int, seed: int = 0) -> SimplicialComplex:
    """Full (d-1)-skeleton on n vertices plus m uniformly chosen d-faces."""
    _need(d >= 1 and n >= d + 1, f"need n >= d + 1 and d >= 1 (n={n}, d={d})")
    tops = list(combinations(range(n), d + 1))
    _need(0 <= m <= len(tops), f"need 0 <= m <= C({n},{d + 1}) = {len(tops)}")
    pick = sorted(rng_for(seed).choice(len(tops), size=m, replace=False).tolist())
    faces = [list(combinations(range(n), i + 1)) for i in range(d)]
    faces.append([tops[i] for i in pick])
    return SimplicialComplex(faces)


def colex_d_subsets(n: int, size: int) -> list[tuple]:
    return sorted(combinations(range(n), size), key=colex_key)


def gen_colex_family(n: int, d: int, s: int) -> SimplicialComplex:
    """The first s d-simplices on {0..n-1} in colex order, closed downward."""
    _need(d >= 0 and n >= d + 1, f"need n >= d + 1 (n={n}, d={d})")
    _need(1 <= s <= comb(n, d + 1), f"need 1 <= s <= C({n},{d + 1})")
    return complex_from_facets(colex_d_subsets(n, d + 1)[:s])


def gen_random_matroid(n: int, r: int, field: FieldSpec = GF2, seed: int = 0, connected: bool = False,
                       max_tries: int = 1000) -> LinearMatroid:
    """Random loopless matroid: n random nonzero columns in field^r.

    Entries are drawn uniformly from GF(p), or from {-2..2} over the
    rationals.  With ``connected`` the draw is repeated until the matroid is
    connected.
    """
    _need(n >= 0 and r >= 1, "need n >= 0 and r >= 1")
    rng = rng_for(seed)
    lo, hi = (0, field.p) if field.p is not None else (-2, 3)
    for _ in range(max_tries):
        cols = []
        while len(cols) < n:
            c = rng.integers(lo, hi, size=r).tolist()
            if any(c):
                cols.append(c)
        M = matroid_from_columns(field, cols, nrows=r)
        if not connected or M.is_connected():
            return M
    raise InvalidParameters(f"no connected matroid found in {max_tries} draws (n={n}, r={r})")


# ---------------------------------------------------------------------------
# GenSpec

FAMILIES = {
    "complete_complex": ("n", "d"),
    "graph": ("kind",),
    "vector_space_nonzero": ("q", "k"),
    "linial_meshulam": ("n", "d", "m"),
    "colex_family": ("n", "d", "s"),
    "random_matroid": ("n", "r"),
}

_ALIASES = {
    "complete-complex": "complete_complex",
    "vector-space": "vector_space_nonzero",
    "linial-meshulam": "linial_meshulam",
    "colex": "colex_family",
    "colex-family": "colex_family",
    "random-matroid": "random_matroid",
}


@dataclass(frozen=True)
class GenSpec:
    family: str
    params: dict = dc_field(default_factory=dict)
    field: str = "2"
    seed: int = 0

    def to_json(self) -> dict:
        return {"family": self.family, "params": dict(sorted(self.params.items())), "field": self.field,
                "seed": self.seed, "prng": PRNG_NAME}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: dict) -> "GenSpec":
        return cls(data["family"], dict(data.get("params", {})), str(data.get("field", "2")),
                   int(data.get("seed", 0)))


def _value(text: str):
    try:
        return int(text)
    except ValueError:
        return text


def parse_genspec(text: str, field: str | None = None, seed: int = 0) -> GenSpec:
    """Parse ``family:key=value,...`` (e.g. ``complete-complex:n=4,d=2``)."""
    name, _, rest = text.partition(":")
    name = name.strip()
    family = _ALIASES.get(name, name)
    params: dict = {}
    if family in ("cycle", "complete-graph", "random-gnm"):
        params["kind"] = {"cycle": "cycle", "complete-graph": "complete", "random-gnm": "random_gnm"}[family]
        family = "graph"
    if family not in FAMILIES:
        raise InvalidParameters(f"unknown generator family {name!r}")
    for item in filter(None, (p.strip() for p in rest.split(","))):
        key, eq, val = item.partition("=")
        if not eq:
            raise InvalidParameters(f"expected key=value, got {item!r}")
        params[key.strip()] = _value(val.strip())
    missing = [k for k in FAMILIES[family] if k not in params]
    if missing:
        raise InvalidParameters(f"{family} needs parameters {missing}")
    if family == "vector_space_nonzero":
        q = str(params["q"])
        if field is not None and str(FieldSpec.parse(field)) != q:
            raise InvalidParameters(f"vector space over GF({q}) cannot use field {field}")
        field = q
    return GenSpec(family, params, str(FieldSpec.parse(field or "2")), seed)


def generate(spec: GenSpec):
    """Build the instance described by ``spec`` (a complex or a matroid)."""
    p = spec.params
    if spec.family == "complete_complex":
        return gen_complete_complex(p["n"], p["d"])
    if spec.family == "graph":
        return gen_graph(p["kind"], p, spec.seed)
    if spec.family == "vector_space_nonzero":
        return gen_vector_space_nonzero(p["q"], p["k"])
    if spec.family == "linial_meshulam":
        return gen_linial_meshulam(p["n"], p["d"], p["m"], spec.seed)
    if spec.family == "colex_family":
        return gen_colex_family(p["n"], p["d"], p["s"])
    if spec.family == "random_matroid":
        return gen_random_matroid(p["n"], p["r"], FieldSpec.parse(spec.field), spec.seed,
                                  connected=bool(p.get("connected", 0)))
    raise InvalidParameters(f"unknown family {spec.family!r}")
