"""Exact scalar arithmetic over prime fields GF(p) and the rationals.

Two layers live here.  :class:`FieldSpec` knows how to operate on *raw*
values (plain ``int`` residues for GF(p), :class:`fractions.Fraction` for
the rationals); the linear algebra code works on raw values for speed.
:class:`Scalar` wraps a raw value together with its field and is the
public, checked element type.

Only prime fields are supported.  Extension fields GF(p^m) are not.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

__all__ = [
    "ArithError",
    "MixedFields",
    "DivisionByZero",
    "FieldSpec",
    "Scalar",
    "GF2",
    "QQ",
    "is_prime",
    "scalar_arithmetic",
]

RawValue = Union[int, Fraction]

_P_LIMIT = 1 << 31


class ArithError(ValueError):
    pass


class MixedFields(ArithError):
    """Raised when two scalars from different fields are combined."""


class DivisionByZero(ArithError, ZeroDivisionError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """A prime field GF(p) (``p`` set) or the rationals (``p is None``)."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None:
            if not isinstance(self.p, int) or not is_prime(self.p) or self.p >= _P_LIMIT:
                raise ArithError(f"field characteristic must be a prime < 2^31, got {self.p!r}")

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(p)

    @classmethod
    def rational(cls) -> "FieldSpec":
        return cls(None)

    @classmethod
    def parse(cls, text: str | int) -> "FieldSpec":
        """Parse ``"rational"``, ``"Q"`` or a decimal prime."""
        if isinstance(text, int):
            return cls(text)
        t = str(text).strip().lower()
        if t in ("rational", "q", "qq", "rationals"):
            return cls(None)
        try:
            return cls(int(t))
        except ValueError:
            raise ArithError(f"unknown field {text!r}") from None

    @property
    def is_rational(self) -> bool:
        return self.p is None

    @property
    def is_binary(self) -> bool:
        return self.p == 2

    def __str__(self) -> str:
        return "rational" if self.p is None else str(self.p)

    # raw-value operations -------------------------------------------------

    def zero(self) -> RawValue:
        return Fraction(0) if self.p is None else 0

    def one(self) -> RawValue:
        return Fraction(1) if self.p is None else 1

    def coerce(self, x) -> RawValue:
        """Map an int or Fraction into the canonical raw form of this field."""
        if self.p is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise DivisionByZero(f"{x} has no image in GF({self.p})")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def add(self, a: RawValue, b: RawValue) -> RawValue:
        return a + b if self.p is None else (a + b) % self.p

    def sub(self, a: RawValue, b: RawValue) -> RawValue:
        return a - b if self.p is None else (a - b) % self.p

    def neg(self, a: RawValue) -> RawValue:
        return -a if self.p is None else (-a) % self.p

    def mul(self, a: RawValue, b: RawValue) -> RawValue:
        return a * b if self.p is None else (a * b) % self.p

    def inv(self, a: RawValue) -> RawValue:
        if not a:
            raise DivisionByZero("inverse of zero")
        if self.p is None:
            return 1 / a
        return pow(a, -1, self.p)

    def div(self, a: RawValue, b: RawValue) -> RawValue:
        return self.mul(a, self.inv(b))

    def to_text(self, a: RawValue) -> str:
        if self.p is None:
            return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
        return str(a)

    def from_text(self, text: str) -> RawValue:
        t = text.strip()
        try:
            if self.p is None:
                return Fraction(t)
            if "/" in t:
                return self.coerce(Fraction(t))
            return int(t) % self.p
        except (ValueError, ZeroDivisionError):
            raise ArithError(f"cannot parse scalar {text!r} over field {self}") from None

    def scalar(self, x) -> "Scalar":
        return Scalar(self, self.coerce(x))


GF2 = FieldSpec(2)
QQ = FieldSpec(None)


@dataclass(frozen=True)
class Scalar:
    """An immutable field element with a canonical representative."""

    spec: FieldSpec
    value: RawValue

    def __post_init__(self):
        object.__setattr__(self, "value", self.spec.coerce(self.value))

    def _check(self, other) -> "Scalar":
        if not isinstance(other, Scalar):
            other = Scalar(self.spec, other)
        elif other.spec != self.spec:
            raise MixedFields(f"cannot combine GF({self.spec}) with GF({other.spec})")
        return other

    def __add__(self, other):
        other = self._check(other)
        return Scalar(self.spec, self.spec.add(self.value, other.value))

    def __sub__(self, other):
        other = self._check(other)
        return Scalar(self.spec, self.spec.sub(self.value, other.value))

    def __mul__(self, other):
        other = self._check(other)
        return Scalar(self.spec, self.spec.mul(self.value, other.value))

    def __truediv__(self, other):
        other = self._check(other)
        return Scalar(self.spec, self.spec.div(self.value, other.value))

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        return Scalar(self.spec, self.spec.neg(self.value))

    def inverse(self) -> "Scalar":
        return Scalar(self.spec, self.spec.inv(self.value))

    def __bool__(self) -> bool:
        return bool(self.value)

    def __str__(self) -> str:
        return self.spec.to_text(self.value)

    @classmethod
    def parse(cls, spec: FieldSpec, text: str) -> "Scalar":
        return cls(spec, spec.from_text(text))


def scalar_arithmetic(a: Scalar, b: Scalar, op: str) -> Scalar:
    """Apply ``op`` in ``{"add", "sub", "mul", "div"}`` to two scalars."""
    if a.spec != b.spec:
        raise MixedFields(f"cannot combine GF({a.spec}) with GF({b.spec})")
    try:
        fn = {"add": Scalar.__add__, "sub": Scalar.__sub__,
              "mul": Scalar.__mul__, "div": Scalar.__truediv__}[op]
    except KeyError:
        raise ArithError(f"unknown operation {op!r}") from None
    return fn(a, b)
