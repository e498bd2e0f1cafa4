"""Exact Gaussian-rational scalars.

All symbolic coefficients in the engine live in Q[i]: pairs of
`fractions.Fraction` with a formal imaginary unit.  Floats entering from
numeric weight estimates are converted exactly (every float is a dyadic
rational), so downstream arithmetic stays exact and reproducible.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, Rational):  # includes int
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)  # exact dyadic value
    raise TypeError(f"cannot coerce {type(x).__name__} to Fraction")


class QI:
    """A Gaussian rational re + im*i with exact Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _as_fraction(re))
        object.__setattr__(self, "im", _as_fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("QI is immutable")

    # -- coercion -----------------------------------------------------
    @staticmethod
    def try_coerce(x) -> "QI | None":
        """QI view of a scalar, or None if x is no scalar at all."""
        if isinstance(x, QI):
            return x
        if isinstance(x, complex):
            return QI(Fraction(x.real), Fraction(x.imag))
        if isinstance(x, (Rational, float)):
            return QI(_as_fraction(x))
        return None

    @staticmethod
    def coerce(x) -> "QI":
        q = QI.try_coerce(x)
        if q is None:
            raise TypeError(
                f"cannot interpret {type(x).__name__} as a Gaussian rational")
        return q

    # -- ring operations ----------------------------------------------
    def __add__(self, other):
        o = QI.try_coerce(other)
        if o is None:
            return NotImplemented
        return QI(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = QI.try_coerce(other)
        if o is None:
            return NotImplemented
        return QI(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = QI.try_coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = QI.try_coerce(other)
        if o is None:
            return NotImplemented
        return QI(self.re * o.re - self.im * o.im,
                  self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = QI.try_coerce(other)
        if o is None:
            return NotImplemented
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero in Q[i]")
        return QI((self.re * o.re + self.im * o.im) / n,
                  (self.im * o.re - self.re * o.im) / n)

    def __rtruediv__(self, other):
        o = QI.try_coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return QI(-self.re, -self.im)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("QI powers must be non-negative integers")
        out = QI(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- structure ------------------------------------------------------
    def conjugate(self) -> "QI":
        return QI(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def to_complex(self) -> complex:
        return complex(self.re) + 1j * complex(self.im)

    def __abs__(self) -> float:
        return abs(self.to_complex())

    def __eq__(self, other):
        o = QI.try_coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        if self.im == 0:
            return f"QI({self.re})"
        return f"QI({self.re}, {self.im})"


I = QI(0, 1)
ZERO = QI(0)
ONE = QI(1)
