"""Simplicial complexes, chains and the boundary operator.

Simplices are sorted tuples of nonnegative vertex ids; the orientation is
the one induced by integer order.  Everything that needs a fixed order of
faces (boundary matrix rows and columns, facet files) uses colex order.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .arith import FieldSpec, Scalar

__all__ = [
    "ComplexError",
    "DuplicateVertexInFacet",
    "FacetParseError",
    "Simplex",
    "colex_key",
    "colex_sorted",
    "SimplicialComplex",
    "Chain",
    "BoundaryMatrix",
    "complex_from_facets",
    "boundary_of_simplex",
    "apply_boundary",
    "boundary_matrix",
    "lower_shadow",
    "upper_shadow",
    "pseudo_closure",
    "parse_facets",
    "read_facets",
    "format_facets",
]

Simplex = tuple  # strictly increasing tuple of vertex ids


class ComplexError(ValueError):
    pass


class DuplicateVertexInFacet(ComplexError):
    pass


class FacetParseError(ComplexError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


def colex_key(s: Sequence[int]) -> tuple:
    return (len(s), tuple(reversed(s)))


def colex_sorted(simplices: Iterable[Sequence[int]]) -> list[Simplex]:
    return sorted((tuple(s) for s in simplices), key=colex_key)


def _facets_of(s: Simplex) -> list[Simplex]:
    """Codimension-one faces, the one omitting ``s[j]`` at position ``j``."""
    return [s[:j] + s[j + 1:] for j in range(len(s))]


class SimplicialComplex:
    """A finite simplicial complex, stored as its faces grouped by dimension.

    ``faces[i]`` is the colex-sorted tuple of ``i``-simplices.  Purity is
    recorded (``is_pure``) but not required.
    """

    def __init__(self, faces: Sequence[Iterable[Simplex]]):
        self.faces: tuple[tuple[Simplex, ...], ...] = tuple(
            tuple(colex_sorted(level)) for level in faces
        )
        while self.faces and not self.faces[-1]:
            self.faces = self.faces[:-1]
        self._index = [{s: i for i, s in enumerate(level)} for level in self.faces]

    @property
    def dimension(self) -> int:
        return len(self.faces) - 1

    def f(self, i: int) -> int:
        return len(self.faces[i]) if 0 <= i < len(self.faces) else 0

    @property
    def f_vector(self) -> tuple[int, ...]:
        """``(f_d, ..., f_0)``."""
        return tuple(len(level) for level in reversed(self.faces))

    def simplices(self, i: int) -> tuple[Simplex, ...]:
        return self.faces[i] if 0 <= i < len(self.faces) else ()

    def index(self, s: Simplex) -> int:
        return self._index[len(s) - 1][tuple(s)]

    def __contains__(self, s) -> bool:
        s = tuple(s)
        return 0 < len(s) <= len(self.faces) and s in self._index[len(s) - 1]

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(s[0] for s in self.simplices(0))

    def facets(self) -> list[Simplex]:
        """Maximal simplices, highest dimension first, colex within a dimension."""
        out = []
        covered: set[Simplex] = set()
        for i in range(self.dimension, -1, -1):
            for s in self.faces[i]:
                if s not in covered:
                    out.append(s)
            for s in self.faces[i]:
                covered.update(_facets_of(s))
        return out

    @property
    def is_pure(self) -> bool:
        d = self.dimension
        return all(len(s) == d + 1 for s in self.facets())

    def pure_part(self, d: int | None = None) -> "SimplicialComplex":
        """Downward closure of the ``d``-simplices (default: top dimension)."""
        d = self.dimension if d is None else d
        return complex_from_facets(self.simplices(d))

    def skeleton(self, d: int) -> "SimplicialComplex":
        return SimplicialComplex(self.faces[: d + 1])

    def __eq__(self, other) -> bool:
        return isinstance(other, SimplicialComplex) and self.faces == other.faces

    def __hash__(self) -> int:
        return hash(self.faces)

    def __repr__(self) -> str:
        return f"SimplicialComplex(dim={self.dimension}, f={self.f_vector})"


def complex_from_facets(facets: Iterable[Sequence[int]]) -> SimplicialComplex:
    """Downward closure of the given simplices."""
    tops: set[Simplex] = set()
    for raw in facets:
        s = tuple(sorted(int(v) for v in raw))
        if not s:
            continue
        if any(v < 0 for v in s):
            raise ComplexError(f"negative vertex id in {raw!r}")
        if len(set(s)) != len(s):
            raise DuplicateVertexInFacet(f"facet {list(raw)!r} repeats a vertex")
        tops.add(s)
    if not tops:
        return SimplicialComplex([])
    dim = max(len(s) for s in tops) - 1
    levels: list[set[Simplex]] = [set() for _ in range(dim + 1)]
    for s in tops:
        levels[len(s) - 1].add(s)
    for i in range(dim, 0, -1):
        for s in levels[i]:
            levels[i - 1].update(_facets_of(s))
    return SimplicialComplex(levels)


@dataclass(frozen=True)
class Chain:
    """A formal combination of ``degree``-simplices with nonzero coefficients."""

    field: FieldSpec
    degree: int
    terms: Mapping[Simplex, object] = dc_field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for s, c in self.terms.items():
            s = tuple(s)
            if len(s) != self.degree + 1:
                raise ComplexError(f"simplex {s} does not have dimension {self.degree}")
            v = self.field.coerce(c.value if isinstance(c, Scalar) else c)
            if v:
                clean[s] = v
        object.__setattr__(self, "terms", dict(sorted(clean.items(), key=lambda kv: colex_key(kv[0]))))

    def coefficient(self, s: Simplex) -> Scalar:
        return Scalar(self.field, self.terms.get(tuple(s), self.field.zero()))

    def support(self) -> frozenset:
        return frozenset(self.terms)

    def items(self):
        for s, v in self.terms.items():
            yield s, Scalar(self.field, v)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Chain):
            return NotImplemented
        if self.field != other.field:
            return False
        if not self.terms and not other.terms:
            return True
        return self.degree == other.degree and self.terms == other.terms

    def __hash__(self):
        if not self.terms:
            return hash((self.field, "zero"))
        return hash((self.field, self.degree, tuple(self.terms.items())))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        f = self.field
        return " + ".join(f"{f.to_text(v)}*{list(s)}" for s, v in self.terms.items())


def boundary_of_simplex(sigma: Sequence[int], field: FieldSpec) -> Chain:
    s = tuple(sorted(sigma))
    if len(s) <= 1:
        return Chain(field, len(s) - 2, {})
    terms = {}
    for j, face in enumerate(_facets_of(s)):
        terms[face] = field.coerce(-1 if j % 2 else 1)
    return Chain(field, len(s) - 2, terms)


def apply_boundary(c: Chain) -> Chain:
    f = c.field
    acc: dict[Simplex, object] = {}
    for s, v in c.terms.items():
        for face, sign in boundary_of_simplex(s, f).terms.items():
            acc[face] = f.add(acc.get(face, f.zero()), f.mul(v, sign))
    return Chain(f, c.degree - 1, acc)


@dataclass(frozen=True)
class BoundaryMatrix:
    """Signed incidence of ``d``-faces (columns) against ``(d-1)``-faces (rows)."""

    field: FieldSpec
    row_faces: tuple
    col_faces: tuple
    columns: tuple  # one tuple of raw values per column

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.row_faces), len(self.col_faces)

    def dense(self) -> list[list]:
        """Row-major list of lists."""
        return [[col[r] for col in self.columns] for r in range(len(self.row_faces))]


def boundary_matrix(K: SimplicialComplex, d: int, field: FieldSpec) -> BoundaryMatrix:
    if d < 1 or K.dimension < d:
        raise ComplexError(f"need 1 <= d <= dim K = {K.dimension}, got d={d}")
    rows = K.simplices(d - 1)
    cols = K.simplices(d)
    zero = field.zero()
    columns = []
    for s in cols:
        col = [zero] * len(rows)
        for face, v in boundary_of_simplex(s, field).terms.items():
            col[K.index(face)] = v
        columns.append(tuple(col))
    return BoundaryMatrix(field, rows, cols, tuple(columns))


def lower_shadow(A: Iterable[Sequence[int]]) -> frozenset:
    A = [tuple(s) for s in A]
    if len({len(s) for s in A}) > 1:
        raise ComplexError("lower shadow needs simplices of one dimension")
    out = set()
    for s in A:
        out.update(_facets_of(s))
    return frozenset(out)


def upper_shadow(K: SimplicialComplex, X: Iterable[Sequence[int]]) -> frozenset:
    X = {tuple(s) for s in X}
    if not X:
        return frozenset()
    dims = {len(s) for s in X}
    if len(dims) > 1:
        raise ComplexError("upper shadow needs simplices of one dimension")
    d = dims.pop()  # number of vertices of the members of X == dimension of the result
    return frozenset(s for s in K.simplices(d) if all(t in X for t in _facets_of(s)))


def pseudo_closure(K: SimplicialComplex, A: Iterable[Sequence[int]]) -> frozenset:
    """Upper shadow of the lower shadow: every face whose facets all meet ``A``'s."""
    A = frozenset(tuple(s) for s in A)
    if not A:
        return frozenset()
    return upper_shadow(K, lower_shadow(A))


# facet file format ---------------------------------------------------------

def parse_facets(text: str) -> SimplicialComplex:
    facets = []
    for lineno, line in enumerate(text.splitlines(), 1):
        body = line.strip()
        if not body or body.startswith("#"):
            continue
        try:
            verts = [int(tok) for tok in body.split()]
        except ValueError:
            bad = next(t for t in body.split() if not t.lstrip("-").isdigit())
            raise FacetParseError(lineno, f"not an integer vertex id: {bad!r}") from None
        if any(v < 0 for v in verts):
            raise FacetParseError(lineno, "vertex ids must be nonnegative")
        if len(set(verts)) != len(verts):
            raise FacetParseError(lineno, "facet repeats a vertex")
        facets.append(verts)
    return complex_from_facets(facets)


def read_facets(path: str | Path) -> SimplicialComplex:
    return parse_facets(Path(path).read_text())


def format_facets(K: SimplicialComplex) -> str:
    lines = [f"# simplicial complex, dim {K.dimension}, f-vector {' '.join(map(str, K.f_vector))}"]
    lines += [" ".join(map(str, s)) for s in K.facets()]
    return "\n".join(lines) + "\n"
