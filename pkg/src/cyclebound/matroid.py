"""Linear matroids over a field.

A :class:`LinearMatroid` is a labelled list of coordinate columns.  Ground
subsets are plain collections of element indices; results come back as
``frozenset``.  Rank queries use exact elimination (``linalg``); the
basis of the whole ground set is computed once and cached.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

from .arith import ArithError, FieldSpec, Scalar
from .complex import SimplicialComplex, boundary_matrix
from .linalg import decode, eliminator, encode, is_zero_vector, tag_support, unit_tag

__all__ = [
    "MatroidError",
    "InconsistentDimensions",
    "NotInSpan",
    "OverlappingSets",
    "GroundSetTooLarge",
    "MatrixParseError",
    "EXHAUSTIVE_LIMIT",
    "LinearMatroid",
    "CircuitCheck",
    "CircuitList",
    "matroid_from_columns",
    "matroid_from_complex",
    "simplex_label",
    "direct_sum",
    "parse_matrix",
    "read_matrix",
    "format_matrix",
]

EXHAUSTIVE_LIMIT = 24


class MatroidError(ValueError):
    pass


class InconsistentDimensions(MatroidError):
    pass


class NotInSpan(MatroidError):
    pass


class OverlappingSets(MatroidError):
    pass


class GroundSetTooLarge(MatroidError):
    def __init__(self, size: int, limit: int):
        super().__init__(f"ground set has {size} elements, exhaustive limit is {limit} (pass force to override)")
        self.size = size
        self.limit = limit


class MatrixParseError(MatroidError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


def guard(size: int, limit: int, force: bool) -> None:
    if size > limit and not force:
        raise GroundSetTooLarge(size, limit)


@dataclass(frozen=True)
class CircuitCheck:
    """Outcome of :meth:`LinearMatroid.is_circuit`.

    ``coefficients`` is the dependency (element index -> scalar) when the set
    is a circuit.  Otherwise ``witness`` is either a proper dependent subset
    (itself a circuit) or, for an independent set, the set itself.
    """

    is_circuit: bool
    coefficients: dict | None = None
    witness: frozenset | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.is_circuit


@dataclass(frozen=True)
class CircuitList:
    circuits: tuple
    truncated: bool

    def __iter__(self):
        return iter(self.circuits)

    def __len__(self):
        return len(self.circuits)


class _UnionFind:
    def __init__(self, items: Iterable[int]):
        self.parent = {x: x for x in items}

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra

    def classes(self) -> list[frozenset]:
        groups: dict[int, list[int]] = {}
        for x in self.parent:
            groups.setdefault(self.find(x), []).append(x)
        return sorted((frozenset(g) for g in groups.values()), key=min)


class LinearMatroid:
    """Matroid of a labelled family of vectors over ``field``."""

    def __init__(self, field: FieldSpec, columns: Sequence, nrows: int, labels: Sequence[str] | None = None):
        self.field = field
        self.nrows = nrows
        self.columns = tuple(columns)
        if labels is None:
            labels = [f"e{i + 1}" for i in range(len(self.columns))]
        self.labels = tuple(str(x) for x in labels)
        if len(self.labels) != len(self.columns):
            raise InconsistentDimensions("one label per column required")
        self._lock = threading.Lock()
        self._basis: tuple[int, ...] | None = None

    # basic data ------------------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.columns)

    def __len__(self) -> int:
        return len(self.columns)

    @property
    def ground(self) -> frozenset:
        return frozenset(range(len(self.columns)))

    def column(self, i: int) -> list[Scalar]:
        return [Scalar(self.field, x) for x in decode(self.field, self.columns[i], self.nrows)]

    def raw_column(self, i: int) -> list:
        return decode(self.field, self.columns[i], self.nrows)

    def index_of(self, label: str) -> int:
        return self.labels.index(label)

    def indices(self, labels: Iterable[str]) -> frozenset:
        return frozenset(self.labels.index(x) for x in labels)

    def names(self, A: Iterable[int]) -> list[str]:
        return [self.labels[i] for i in sorted(A)]

    def __eq__(self, other) -> bool:
        return (isinstance(other, LinearMatroid) and self.field == other.field and self.nrows == other.nrows
                and self.columns == other.columns and self.labels == other.labels)

    def __hash__(self):
        return hash((self.field, self.nrows, self.columns, self.labels))

    def __repr__(self) -> str:
        return f"LinearMatroid(field={self.field}, n={self.size}, rank={self.rank})"

    # rank oracle -----------------------------------------------------------

    def _check(self, A: Iterable[int]) -> list[int]:
        A = sorted(set(A))
        if A and (A[0] < 0 or A[-1] >= self.size):
            raise MatroidError(f"element index out of range in {A}")
        return A

    @property
    def basis(self) -> tuple[int, ...]:
        """Greedy (lexicographically first) basis of the ground set."""
        with self._lock:
            if self._basis is None:
                el = eliminator(self.field)
                self._basis = tuple(i for i, v in enumerate(self.columns) if el.insert(v)[0])
            return self._basis

    @property
    def rank(self) -> int:
        return len(self.basis)

    def rank_of(self, A: Iterable[int]) -> int:
        A = self._check(A)
        if len(A) == self.size:
            return self.rank
        el = eliminator(self.field)
        for i in A:
            el.insert(self.columns[i])
        return el.rank

    def is_independent(self, A: Iterable[int]) -> bool:
        A = self._check(A)
        return self.rank_of(A) == len(A)

    def closure_of(self, A: Iterable[int]) -> frozenset:
        A = self._check(A)
        el = eliminator(self.field)
        for i in A:
            el.insert(self.columns[i])
        return frozenset(i for i in range(self.size) if el.in_span(self.columns[i]))

    def loops(self) -> frozenset:
        return frozenset(i for i, v in enumerate(self.columns) if is_zero_vector(v))

    def coloops(self) -> frozenset:
        r = self.rank
        return frozenset(i for i in self.basis if self.rank_of(self.ground - {i}) < r)

    # circuits --------------------------------------------------------------

    def fundamental_circuit(self, B: Iterable[int], e: int) -> frozenset:
        """The unique circuit inside ``B + e`` for independent ``B`` spanning ``e``."""
        B = self._check(B)
        if e in B:
            raise MatroidError(f"element {e} already in B")
        f = self.field
        el = eliminator(f)
        for i in B:
            if not el.insert(self.columns[i])[0]:
                raise MatroidError("B is not independent")
            # re-insert with tags below
        el = eliminator(f)
        for i in B:
            el.insert(self.columns[i], unit_tag(f, i))
        indep, tag = el.insert(self.columns[e], unit_tag(f, e))
        if indep:
            raise NotInSpan(f"element {e} is not spanned by B")
        return frozenset(tag_support(f, tag))

    def is_circuit(self, S: Iterable[int]) -> CircuitCheck:
        S = self._check(S)
        if not S:
            raise MatroidError("is_circuit needs a nonempty set")
        f = self.field
        el = eliminator(f)
        for pos, i in enumerate(S):
            indep, tag = el.insert(self.columns[i], unit_tag(f, i))
            if indep:
                continue
            support = frozenset(tag_support(f, tag))
            if pos == len(S) - 1 and len(support) == len(S):
                if f.is_binary:
                    coeffs = {k: Scalar(f, 1) for k in sorted(support)}
                else:
                    coeffs = {k: Scalar(f, tag[k]) for k in sorted(support)}
                return CircuitCheck(True, coefficients=coeffs, reason="minimal dependency")
            return CircuitCheck(False, witness=support, reason="contains a smaller circuit")
        return CircuitCheck(False, witness=frozenset(S), reason="independent")

    def enumerate_circuits(self, size_cap: int | None = None, count_cap: int | None = None,
                           force: bool = False) -> CircuitList:
        """All circuits of size at most ``size_cap``, ordered by (size, sorted indices).

        Each circuit ``C`` is found once, as ``(C - max C) + max C`` with the
        independent part grown in index order.
        """
        guard(self.size, EXHAUSTIVE_LIMIT, force)
        n = self.size
        cap = n + 1 if size_cap is None else size_cap
        f = self.field
        cols = self.columns
        found: list[tuple[int, ...]] = []

        def grow(prefix: tuple[int, ...], el, start: int) -> None:
            for e in range(start, n):
                trial = el.copy()
                indep, tag = trial.insert(cols[e], unit_tag(f, e))
                if indep:
                    if len(prefix) + 2 <= cap:
                        grow(prefix + (e,), trial, e + 1)
                elif len(prefix) + 1 <= cap:
                    support = tag_support(f, tag)
                    if len(support) == len(prefix) + 1:
                        found.append(prefix + (e,))

        grow((), eliminator(f), 0)
        found.sort(key=lambda c: (len(c), c))
        truncated = count_cap is not None and len(found) > count_cap
        if truncated:
            found = found[:count_cap]
        return CircuitList(tuple(frozenset(c) for c in found), truncated)

    # minors ----------------------------------------------------------------

    def minor_with_map(self, deletions: Iterable[int] = (), contractions: Iterable[int] = (),
                       drop_loops: bool = False) -> tuple["LinearMatroid", tuple[int, ...]]:
        """Minor ``M \\ D / C`` and the original indices of its elements."""
        D = set(self._check(deletions))
        C = self._check(contractions)
        if D & set(C):
            raise OverlappingSets("deletions and contractions overlap")
        f = self.field
        cols = list(self.columns)
        pivots: list[int] = []
        if f.is_binary:
            for c in C:
                v = cols[c]
                free = v & ~sum(1 << r for r in pivots)
                if not free:
                    continue
                r = (free & -free).bit_length() - 1
                others = v & ~(1 << r)
                if others:
                    for j in range(len(cols)):
                        if cols[j] >> r & 1:
                            cols[j] ^= others
                pivots.append(r)
        else:
            for c in C:
                v = cols[c]
                r = next((i for i, x in enumerate(v) if x and i not in pivots), None)
                if r is None:
                    continue
                pv = v[r]
                inv = f.inv(pv)
                # row r /= pv; then row s -= v[s] * row r for s != r
                factors = [f.mul(x, inv) for x in v]
                for j in range(len(cols)):
                    w = cols[j]
                    if not w[r]:
                        continue
                    a = w[r]
                    nw = [f.sub(w[s], f.mul(factors[s], a)) for s in range(len(w))]
                    nw[r] = f.mul(a, inv)
                    cols[j] = tuple(nw)
                pivots.append(r)
        keep_rows = [r for r in range(self.nrows) if r not in set(pivots)]
        removed = D | set(C)
        kept: list[int] = []
        new_cols = []
        for j in range(self.size):
            if j in removed:
                continue
            v = cols[j]
            if f.is_binary:
                nv = 0
                for k, r in enumerate(keep_rows):
                    if v >> r & 1:
                        nv |= 1 << k
            else:
                nv = tuple(v[r] for r in keep_rows)
            if drop_loops and is_zero_vector(nv):
                continue
            kept.append(j)
            new_cols.append(nv)
        M = LinearMatroid(f, new_cols, len(keep_rows), [self.labels[j] for j in kept])
        return M, tuple(kept)

    def minor(self, deletions: Iterable[int] = (), contractions: Iterable[int] = (),
              drop_loops: bool = False) -> "LinearMatroid":
        return self.minor_with_map(deletions, contractions, drop_loops)[0]

    def restrict(self, A: Iterable[int]) -> "LinearMatroid":
        A = set(self._check(A))
        return self.minor(deletions=self.ground - A)

    def restrict_with_map(self, A: Iterable[int]) -> tuple["LinearMatroid", tuple[int, ...]]:
        A = set(self._check(A))
        return self.minor_with_map(deletions=self.ground - A)

    # connectivity ----------------------------------------------------------

    def components(self) -> list[frozenset]:
        """Connected components, via fundamental circuits of the greedy basis."""
        f = self.field
        uf = _UnionFind(range(self.size))
        el = eliminator(f)
        for i, v in enumerate(self.columns):
            indep, tag = el.insert(v, unit_tag(f, i))
            if not indep:
                for k in tag_support(f, tag):
                    uf.union(i, k)
        return uf.classes()

    def components_bruteforce(self, force: bool = False) -> list[frozenset]:
        """Components from the relation 'some circuit contains both'."""
        uf = _UnionFind(range(self.size))
        for C in self.enumerate_circuits(force=force):
            first = min(C)
            for x in C:
                uf.union(first, x)
        return uf.classes()

    def is_connected(self) -> bool:
        return len(self.components()) <= 1


def matroid_from_columns(field: FieldSpec, columns: Sequence[Sequence], labels: Sequence[str] | None = None,
                         nrows: int | None = None) -> LinearMatroid:
    cols = [[x.value if isinstance(x, Scalar) else x for x in c] for c in columns]
    lengths = {len(c) for c in cols}
    if len(lengths) > 1:
        raise InconsistentDimensions(f"columns have differing lengths {sorted(lengths)}")
    if lengths:
        m = lengths.pop()
        if nrows is not None and nrows != m:
            raise InconsistentDimensions(f"expected {nrows} rows, columns have {m}")
        nrows = m
    return LinearMatroid(field, [encode(field, c) for c in cols], nrows or 0, labels)


def simplex_label(s: Sequence[int]) -> str:
    return "-".join(map(str, s))


def matroid_from_complex(K: SimplicialComplex, d: int, field: FieldSpec) -> LinearMatroid:
    """The simplicial matroid on the ``d``-faces of ``K``."""
    bm = boundary_matrix(K, d, field)
    return LinearMatroid(field, [encode(field, c) for c in bm.columns], len(bm.row_faces),
                         [simplex_label(s) for s in bm.col_faces])


def direct_sum(*ms: LinearMatroid) -> LinearMatroid:
    """Block-diagonal sum; labels are prefixed with the summand number when they clash."""
    if not ms:
        raise MatroidError("direct_sum needs at least one matroid")
    f = ms[0].field
    if any(m.field != f for m in ms):
        raise MatroidError("direct_sum needs a common field")
    total = sum(m.nrows for m in ms)
    cols, labels, off = [], [], 0
    all_labels = [l for m in ms for l in m.labels]
    clash = len(set(all_labels)) != len(all_labels)
    for k, m in enumerate(ms):
        for i in range(m.size):
            raw = [f.zero()] * total
            raw[off:off + m.nrows] = m.raw_column(i)
            cols.append(encode(f, raw))
            labels.append(f"{k}:{m.labels[i]}" if clash else m.labels[i])
        off += m.nrows
    return LinearMatroid(f, cols, total, labels)


# matrix file format --------------------------------------------------------

def parse_matrix(text: str) -> LinearMatroid:
    lines = [(n, l.strip()) for n, l in enumerate(text.splitlines(), 1)]
    lines = [(n, l) for n, l in lines if l and not l.startswith("#")]
    if not lines:
        raise MatrixParseError(1, "empty matrix file")
    n0, first = lines[0]
    toks = first.split()
    if len(toks) != 2 or toks[0] != "field":
        raise MatrixParseError(n0, "expected 'field <p|rational>'")
    try:
        field = FieldSpec.parse(toks[1])
    except ArithError as exc:
        raise MatrixParseError(n0, str(exc)) from None
    if len(lines) < 2:
        raise MatrixParseError(n0, "missing 'rows r cols n' line")
    n1, second = lines[1]
    toks = second.split()
    try:
        if len(toks) != 4 or toks[0] != "rows" or toks[2] != "cols":
            raise ValueError
        r, c = int(toks[1]), int(toks[3])
        if r < 0 or c < 0:
            raise ValueError
    except ValueError:
        raise MatrixParseError(n1, "expected 'rows <r> cols <n>'") from None
    body = lines[2:]
    if c == 0:
        # rows of a matrix with no columns are empty and therefore omitted
        r_lines = 0
    else:
        r_lines = r
    if len(body) < r_lines:
        line = body[-1][0] if body else n1
        raise MatrixParseError(line, f"expected {r} matrix rows, found {len(body)}")
    rows = []
    for lineno, line in body[:r_lines]:
        toks = line.split()
        if len(toks) != c:
            raise MatrixParseError(lineno, f"expected {c} entries, found {len(toks)}")
        try:
            rows.append([field.from_text(t) for t in toks])
        except ArithError as exc:
            raise MatrixParseError(lineno, str(exc)) from None
    labels = None
    rest = body[r_lines:]
    if rest:
        lineno, line = rest[0]
        toks = line.split()
        if toks[0] != "labels" or len(toks) != c + 1:
            raise MatrixParseError(lineno, f"expected 'labels' followed by {c} names")
        if len(set(toks[1:])) != c:
            raise MatrixParseError(lineno, "labels must be distinct")
        labels = toks[1:]
        if len(rest) > 1:
            raise MatrixParseError(rest[1][0], "unexpected trailing content")
    columns = [[rows[i][j] for i in range(r)] for j in range(c)]
    return matroid_from_columns(field, columns, labels, nrows=r)


def read_matrix(path: str | Path) -> LinearMatroid:
    return parse_matrix(Path(path).read_text())


def format_matrix(M: LinearMatroid) -> str:
    f = M.field
    out = [f"field {f}", f"rows {M.nrows} cols {M.size}"]
    cols = [M.raw_column(j) for j in range(M.size)]
    for i in range(M.nrows if M.size else 0):
        out.append(" ".join(f.to_text(cols[j][i]) for j in range(M.size)))
    out.append("labels " + " ".join(M.labels))
    return "\n".join(out) + "\n"
