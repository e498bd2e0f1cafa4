"""Sparse multivariate polynomials over Q[i].

Terms map exponent tuples to :class:`QI` coefficients; zero
coefficients are dropped eagerly so equality and is_zero are exact
structural checks.  Scalars may be given as int, Fraction, float
(converted exactly), complex or QI.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .errors import DimensionMismatchError
from .rational import QI


def _exp_add(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


class Polynomial:
    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms: Mapping[tuple[int, ...], object] | None = None):
        if dim < 0:
            raise DimensionMismatchError("dimension must be non-negative")
        clean: dict[tuple[int, ...], QI] = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != dim or any(e < 0 for e in exps):
                raise DimensionMismatchError(f"bad exponent tuple {exps} for dim {dim}")
            q = QI.coerce(c)
            if not q.is_zero():
                clean[exps] = clean[exps] + q if exps in clean else q
                if clean[exps].is_zero():
                    del clean[exps]
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- constructors ---------------------------------------------------
    @staticmethod
    def zero(dim: int) -> "Polynomial":
        return Polynomial(dim, {})

    @staticmethod
    def constant(dim: int, c) -> "Polynomial":
        return Polynomial(dim, {(0,) * dim: c})

    @staticmethod
    def monomial(dim: int, exps: Iterable[int], c=1) -> "Polynomial":
        return Polynomial(dim, {tuple(exps): c})

    @staticmethod
    def variable(dim: int, i: int) -> "Polynomial":
        if not 0 <= i < dim:
            raise DimensionMismatchError(f"variable index {i} out of range")
        exps = [0] * dim
        exps[i] = 1
        return Polynomial(dim, {tuple(exps): 1})

    # -- ring operations -------------------------------------------------
    def _check(self, other: "Polynomial"):
        if self.dim != other.dim:
            raise DimensionMismatchError(f"dim {self.dim} vs {other.dim}")

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            if QI.try_coerce(other) is None:
                return NotImplemented
            other = Polynomial.constant(self.dim, other)
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, QI(0)) + c
            if s.is_zero():
                terms.pop(e, None)
            else:
                terms[e] = s
        return Polynomial(self.dim, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.dim, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            if QI.try_coerce(other) is None:
                return NotImplemented
            other = Polynomial.constant(self.dim, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = QI.try_coerce(other)
            if c is None:
                return NotImplemented
            if c.is_zero():
                return Polynomial.zero(self.dim)
            return Polynomial(self.dim, {e: q * c for e, q in self.terms.items()})
        self._check(other)
        out: dict[tuple[int, ...], QI] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = _exp_add(e1, e2)
                s = out.get(e, QI(0)) + c1 * c2
                if s.is_zero():
                    out.pop(e, None)
                else:
                    out[e] = s
        return Polynomial(self.dim, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative polynomial power")
        out = Polynomial.constant(self.dim, 1)
        for _ in range(k):
            out = out * self
        return out

    # -- calculus ---------------------------------------------------------
    def diff(self, i: int) -> "Polynomial":
        out: dict[tuple[int, ...], QI] = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            ee = list(e)
            ee[i] -= 1
            out[tuple(ee)] = c * e[i]
        return Polynomial(self.dim, out)

    def diff_multi(self, multi: Iterable[int]) -> "Polynomial":
        """Apply d^multi, multi a length-dim tuple of derivative orders."""
        p = self
        for i, k in enumerate(multi):
            for _ in range(k):
                p = p.diff(i)
                if p.is_zero():
                    return p
        return p

    # -- queries -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            if self.terms and len(self.terms) > 1:
                return False
            return self == Polynomial.constant(self.dim, other)
        return self.dim == other.dim and self.terms == other.terms

    def __hash__(self):
        return hash((self.dim, frozenset(self.terms.items())))

    def __call__(self, point) -> complex:
        """Evaluate at a point (floats/complex); returns complex."""
        pt = [complex(x) for x in point]
        if len(pt) != self.dim:
            raise DimensionMismatchError("evaluation point has wrong length")
        total = 0j
        for e, c in self.terms.items():
            v = c.to_complex()
            for x, k in zip(pt, e):
                if k:
                    v *= x ** k
            total += v
        return total

    def eval_exact(self, point) -> QI:
        """Evaluate at exact rational coordinates."""
        total = QI(0)
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v = v * (QI.coerce(x) ** k)
            total = total + v
        return total

    def conjugate(self) -> "Polynomial":
        return Polynomial(self.dim, {e: c.conjugate() for e, c in self.terms.items()})

    def abs_coeffs(self) -> "Polynomial":
        """Coefficient-wise |.| as exact dyadic values; used for error bounds."""
        return Polynomial(self.dim, {e: Fraction(abs(c)) for e, c in self.terms.items()})

    def max_abs_coeff(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def __repr__(self):
        if not self.terms:
            return "Polynomial(0)"
        bits = []
        for e in sorted(self.terms):
            c = self.terms[e]
            mono = "*".join(f"x{i}^{k}" for i, k in enumerate(e) if k) or "1"
            bits.append(f"({c.re}{'+' if c.im >= 0 else ''}{c.im}i)*{mono}")
        return "Polynomial[" + " + ".join(bits) + "]"

    # -- serialization -------------------------------------------------------
    def to_json_obj(self) -> list:
        out = []
        for e in sorted(self.terms):
            c = self.terms[e]
            entry = {"exps": list(e), "num": c.re.numerator, "den": c.re.denominator}
            if c.im != 0:
                entry["im_num"] = c.im.numerator
                entry["im_den"] = c.im.denominator
            out.append(entry)
        return out

    @staticmethod
    def from_json_obj(dim: int, obj: list) -> "Polynomial":
        terms = {}
        for entry in obj:
            c = QI(Fraction(int(entry["num"]), int(entry.get("den", 1))),
                   Fraction(int(entry.get("im_num", 0)), int(entry.get("im_den", 1))))
            terms[tuple(entry["exps"])] = c
        return Polynomial(dim, terms)
