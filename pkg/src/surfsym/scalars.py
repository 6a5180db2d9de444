"""Scalar ground rings: exact rationals, quadratic extensions, complex floats.

All exact computations run over ``fractions.Fraction`` (arbitrary precision,
bit-exact across platforms).  Float mode uses ``complex`` and is entered only
where transcendental functions or eigenvector decompositions are unavoidable.
A small quadratic extension Q(sqrt(d)) supports the SL(2) edge-flip identities,
which involve a single square root.
"""

from __future__ import annotations

from fractions import Fraction


Q = Fraction


def rat(p, q=1) -> Fraction:
    """Exact rational from ints or a 'p/q' string."""
    if isinstance(p, str):
        return Fraction(p)
    return Fraction(p, q)


def rat_str(x) -> str:
    """Serialize an exact rational as 'p/q' (or 'p' when integral)."""
    f = Fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def is_exact(x) -> bool:
    return isinstance(x, (Fraction, int, QuadExt))


def to_complex(x) -> complex:
    if isinstance(x, QuadExt):
        return complex(x.a) + complex(x.b) * complex(x.d) ** 0.5
    return complex(x)


class QuadExt:
    """Element a + b*sqrt(d) of the quadratic extension Q(sqrt(d)).

    ``d`` is a fixed rational non-square; elements with matching ``d`` form a
    field, so generic Gaussian elimination works unchanged.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.d = Fraction(d)

    @classmethod
    def root(cls, d):
        return cls(0, 1, d)

    def _coerce(self, other):
        if isinstance(other, QuadExt):
            if other.d != self.d:
                raise ValueError("mixing distinct quadratic extensions")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadExt(other, 0, self.d)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.a * o.a + self.d * self.b * o.b,
                       self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def inverse(self):
        n = self.a * self.a - self.d * self.b * self.b
        if n == 0:
            raise ZeroDivisionError("QuadExt division by zero")
        return QuadExt(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = QuadExt(1, 0, self.d)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, QuadExt):
            return self.d == other.d and self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __repr__(self):
        return f"({self.a}+{self.b}*sqrt({self.d}))"

    def __bool__(self):
        return self.a != 0 or self.b != 0
