"""Incremental exact Gaussian elimination.

Vectors are stored in an encoded form chosen per field: over GF(2) a vector
is a Python ``int`` bitmask (bit ``i`` is coordinate ``i``); over any other
field it is a tuple of raw values (see :class:`cyclebound.arith.FieldSpec`).

An eliminator keeps a semi-echelon basis.  Every stored row carries a *tag*
recording which inserted vectors it is a combination of, so that a
dependent insertion returns the dependency itself.  Over GF(2) tags are
bitmasks over caller-chosen ids; otherwise tags are ``{id: coefficient}``
dicts.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .arith import FieldSpec

__all__ = [
    "encode",
    "decode",
    "is_zero_vector",
    "BinaryEliminator",
    "GenericEliminator",
    "eliminator",
    "rank",
    "kernel_basis",
    "unit_tag",
    "tag_support",
]


def encode(field: FieldSpec, column: Sequence) -> int | tuple:
    """Encode a sequence of field coercible values."""
    if field.is_binary:
        v = 0
        for i, x in enumerate(column):
            if field.coerce(x):
                v |= 1 << i
        return v
    return tuple(field.coerce(x) for x in column)


def decode(field: FieldSpec, vec, nrows: int) -> list:
    if field.is_binary:
        return [(vec >> i) & 1 for i in range(nrows)]
    return list(vec)


def is_zero_vector(vec) -> bool:
    if isinstance(vec, int):
        return vec == 0
    return not any(vec)


class BinaryEliminator:
    """XOR basis keyed by the highest set bit of each row."""

    __slots__ = ("rows",)

    def __init__(self):
        self.rows: dict[int, tuple[int, int]] = {}

    def copy(self) -> "BinaryEliminator":
        e = BinaryEliminator()
        e.rows = dict(self.rows)
        return e

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, vec: int, tag: int = 0) -> tuple[int, int]:
        # a nonzero span element always has a pivot as its top bit, so we may
        # stop at the first top bit that is not a pivot
        rows = self.rows
        while vec:
            hit = rows.get(vec.bit_length())
            if hit is None:
                break
            vec ^= hit[0]
            tag ^= hit[1]
        return vec, tag

    def insert(self, vec: int, tag: int = 0) -> tuple[bool, int]:
        """Insert ``vec``; return ``(independent, tag)``.

        When dependent, the returned tag is the dependency (including the
        caller's own tag), i.e. the combination summing to zero.
        """
        vec, tag = self.reduce(vec, tag)
        if vec:
            self.rows[vec.bit_length()] = (vec, tag)
            return True, tag
        return False, tag

    def in_span(self, vec: int) -> bool:
        return self.reduce(vec)[0] == 0


class GenericEliminator:
    """Semi-echelon basis over an arbitrary :class:`FieldSpec`."""

    __slots__ = ("field", "rows")

    def __init__(self, field: FieldSpec):
        self.field = field
        # pivot -> (row normalised so row[pivot] == 1, tag)
        self.rows: dict[int, tuple[list, dict]] = {}

    def copy(self) -> "GenericEliminator":
        e = GenericEliminator(self.field)
        e.rows = dict(self.rows)
        return e

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, vec, tag: dict | None = None):
        f = self.field
        vec = list(vec)
        tag = dict(tag) if tag else {}
        for piv, (row, rtag) in self.rows.items():
            c = vec[piv]
            if not c:
                continue
            if f.p is None:
                for i, x in enumerate(row):
                    if x:
                        vec[i] -= c * x
            else:
                p = f.p
                for i, x in enumerate(row):
                    if x:
                        vec[i] = (vec[i] - c * x) % p
            for k, t in rtag.items():
                nv = f.sub(tag.get(k, f.zero()), f.mul(c, t))
                if nv:
                    tag[k] = nv
                else:
                    tag.pop(k, None)
        return vec, tag

    def insert(self, vec, tag: dict | None = None) -> tuple[bool, dict]:
        f = self.field
        vec, tag = self.reduce(vec, tag)
        for piv, x in enumerate(vec):
            if x:
                inv = f.inv(x)
                row = [f.mul(y, inv) for y in vec]
                ntag = {k: f.mul(t, inv) for k, t in tag.items()}
                self.rows[piv] = (row, ntag)
                return True, tag
        return False, tag

    def in_span(self, vec) -> bool:
        return not any(self.reduce(vec)[0])


def eliminator(field: FieldSpec):
    return BinaryEliminator() if field.is_binary else GenericEliminator(field)


def unit_tag(field: FieldSpec, key: int):
    return 1 << key if field.is_binary else {key: field.one()}


def tag_support(field: FieldSpec, tag) -> list[int]:
    if field.is_binary:
        out = []
        while tag:
            low = tag & -tag
            out.append(low.bit_length() - 1)
            tag ^= low
        return out
    return sorted(tag)


def rank(field: FieldSpec, vecs: Iterable) -> int:
    el = eliminator(field)
    for v in vecs:
        el.insert(v)
    return el.rank


def kernel_basis(field: FieldSpec, vecs: Sequence) -> list[dict[int, object]]:
    """A basis of ``{x : sum_i x_i vecs[i] = 0}`` as sparse ``{index: raw}`` maps."""
    el = eliminator(field)
    out = []
    for i, v in enumerate(vecs):
        indep, tag = el.insert(v, unit_tag(field, i))
        if not indep:
            if field.is_binary:
                out.append({k: 1 for k in tag_support(field, tag)})
            else:
                out.append(dict(sorted(tag.items())))
    return out
