"""Polydifferential operators attached to admissible graphs.

A graph with n aerial and m ground vertices, plus one polyvector field
per aerial vertex (tensor rank = number of outgoing edges), defines an
m-ary operator: every edge carries a summed coordinate index, the
out-edges of an aerial vertex select a full tensor component of its
field, and every in-edge differentiates whatever sits at the target
vertex.  Summing over all index assignments gives the operator.

The sum is organised per vertex: only nonzero full components of each
field are enumerated, so sparse fields cost far less than the dense
d^(edge count) labeling sum.
"""
from __future__ import annotations

import itertools

from .errors import (ArityMismatchError, DegreeMismatchError,
                     DimensionMismatchError)
from .graphs import KGraph
from .poly import Polynomial
from .polyvector import PolyVectorField
from .rational import QI


class PolyDiffOperator:
    """Finite sum  c_T(x) * prod_k d^(T_k) arg_k  over multi-indices.

    ``terms`` maps a tuple of ``arity`` sorted derivative multi-indices
    (one per argument slot) to its polynomial coefficient.  Zero
    coefficients are dropped on construction, so ``not self.terms``
    means the operator is zero.
    """

    __slots__ = ("arity", "dim", "terms")

    def __init__(self, arity: int, dim: int, terms: dict):
        if arity < 0:
            raise ArityMismatchError("operator arity must be nonnegative")
        clean = {}
        for key, poly in terms.items():
            if len(key) != arity:
                raise ArityMismatchError(
                    f"term key {key} does not match arity {arity}")
            if poly.dim != dim:
                raise DimensionMismatchError(
                    f"coefficient dim {poly.dim}, operator dim {dim}")
            if not poly.is_zero():
                clean[tuple(tuple(sorted(multi)) for multi in key)] = poly
        object.__setattr__(self, "arity", arity)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("PolyDiffOperator is immutable")

    @classmethod
    def zero(cls, arity: int, dim: int) -> "PolyDiffOperator":
        return cls(arity, dim, {})

    @classmethod
    def multiplication(cls, arity: int, dim: int) -> "PolyDiffOperator":
        """Plain product of the arguments (no derivatives)."""
        key = ((),) * arity
        return cls(arity, dim, {key: Polynomial.constant(dim, 1)})

    def is_zero(self) -> bool:
        return not self.terms

    def apply(self, args) -> Polynomial:
        args = tuple(args)
        if len(args) != self.arity:
            raise ArityMismatchError(
                f"operator takes {self.arity} arguments, got {len(args)}")
        for a in args:
            if a.dim != self.dim:
                raise DimensionMismatchError(
                    f"argument dim {a.dim}, operator dim {self.dim}")
        out = Polynomial.zero(self.dim)
        for key, coeff in self.terms.items():
            term = coeff
            for multi, arg in zip(key, args):
                factor = arg
                for i in multi:
                    factor = factor.diff(i)
                    if factor.is_zero():
                        break
                if factor.is_zero():
                    term = None
                    break
                term = term * factor
            if term is not None:
                out = out + term
        return out

    def _binary(self, other, sub: bool):
        if not isinstance(other, PolyDiffOperator):
            return NotImplemented
        if other.arity != self.arity or other.dim != self.dim:
            raise ArityMismatchError("operator shapes differ")
        terms = dict(self.terms)
        for key, poly in other.terms.items():
            add = -poly if sub else poly
            terms[key] = terms[key] + add if key in terms else add
        return PolyDiffOperator(self.arity, self.dim, terms)

    def __add__(self, other):
        return self._binary(other, sub=False)

    def __sub__(self, other):
        return self._binary(other, sub=True)

    def __neg__(self):
        return PolyDiffOperator(
            self.arity, self.dim, {k: -p for k, p in self.terms.items()})

    def __mul__(self, scalar):
        c = QI.try_coerce(scalar)
        if c is None:
            return NotImplemented
        return PolyDiffOperator(
            self.arity, self.dim, {k: p * c for k, p in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, PolyDiffOperator):
            return NotImplemented
        return (self.arity == other.arity and self.dim == other.dim
                and self.terms == other.terms)

    def __repr__(self):
        return (f"PolyDiffOperator(arity={self.arity}, dim={self.dim}, "
                f"{len(self.terms)} terms)")


def build_operator(graph: KGraph, fields, dim: int | None = None
                   ) -> PolyDiffOperator:
    """Operator of ``graph`` with ``fields[i]`` at aerial vertex i.

    Field ranks must match the out-degrees.  ``dim`` is only needed for
    the edgeless order-0 graph, where there is no field to read it off.
    """
    fields = tuple(fields)
    if len(fields) != graph.n:
        raise ArityMismatchError(
            f"graph has {graph.n} aerial vertices, got {len(fields)} fields")
    dims = {f.dim for f in fields}
    if dim is not None:
        dims.add(dim)
    if len(dims) != 1:
        raise DimensionMismatchError(
            "fields on different spaces" if dims else
            "order-0 graph needs an explicit dim")
    d = dims.pop()
    for i, f in enumerate(fields):
        want = len(graph.out_edges[i])
        if f.degree + 1 != want:
            raise DegreeMismatchError(
                f"vertex {i + 1} has {want} out-edges but the attached "
                f"field has rank {f.degree + 1}")

    in_pairs: dict[int, list] = {v: [] for v in range(graph.n + graph.m)}
    for src, slot, tgt in graph.edges():
        in_pairs[tgt].append((src, slot))

    per_vertex = [list(f.iter_full_components()) for f in fields]
    if any(not opts for opts in per_vertex):
        return PolyDiffOperator.zero(graph.m, d)

    terms: dict[tuple, Polynomial] = {}
    for choice in itertools.product(*per_vertex):
        idx = tuple(c[0] for c in choice)
        coeff = Polynomial.constant(d, 1)
        dead = False
        for i in range(graph.n):
            poly = choice[i][1]
            for src, slot in in_pairs[i]:
                poly = poly.diff(idx[src][slot])
                if poly.is_zero():
                    dead = True
                    break
            if dead:
                break
            coeff = coeff * poly
        if dead:
            continue
        key = tuple(
            tuple(sorted(idx[src][slot]
                         for src, slot in in_pairs[graph.n + k]))
            for k in range(graph.m))
        terms[key] = terms[key] + coeff if key in terms else coeff
    return PolyDiffOperator(graph.m, d, terms)
