"""Admissible two-colour directed graphs and their enumeration.

A graph of order n on m ground vertices has aerial vertices 1..n, each
carrying an ordered tuple of outgoing edges, and ground vertices that
only receive.  No edge may start and end at the same vertex.  In strict
mode the targets of one vertex are pairwise distinct (a doubled edge
wedges a 1-form with itself, so its weight vanishes identically; the
permissive mode keeps such graphs for exactly that property test).

Internally targets are 0-based integers: 0..n-1 aerial, n..n+m-1
ground.  The text form numbers aerial vertices from 1 and names ground
vertices L, R when m = 2 (the star-product case) and G0..G(m-1)
otherwise.
"""
from __future__ import annotations

import itertools
import json
import math
import re
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import EnumerationCapError, ParseError

DEFAULT_CAP = 1_000_000


@dataclass(frozen=True)
class KGraph:
    """Immutable admissible graph: ordered out-edges per aerial vertex."""

    n: int
    m: int
    out_edges: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.n < 0 or self.m < 0:
            raise ParseError("vertex counts must be non-negative")
        if len(self.out_edges) != self.n:
            raise ParseError(f"expected {self.n} out-edge tuples, got {len(self.out_edges)}")
        object.__setattr__(self, "out_edges", tuple(tuple(t) for t in self.out_edges))
        hi = self.n + self.m
        for i, targets in enumerate(self.out_edges):
            if not targets:
                raise ParseError(f"vertex {i + 1} has no outgoing edges")
            for t in targets:
                if t == i:
                    raise ParseError(f"vertex {i + 1} has a self-loop")
                if not 0 <= t < hi:
                    raise ParseError(f"target {t} of vertex {i + 1} out of range")

    # -- basic structure ------------------------------------------------
    @property
    def degrees(self) -> tuple[int, ...]:
        """Field degrees p_i = out-degree - 1."""
        return tuple(len(t) - 1 for t in self.out_edges)

    @property
    def edge_count(self) -> int:
        return sum(len(t) for t in self.out_edges)

    def edges(self) -> Iterator[tuple[int, int, int]]:
        """(source, slot, target) triples in vertex-then-slot order."""
        for i, targets in enumerate(self.out_edges):
            for s, t in enumerate(targets):
                yield i, s, t

    def is_strict(self) -> bool:
        return all(len(set(t)) == len(t) for t in self.out_edges)

    def has_doubled_edge(self) -> bool:
        return not self.is_strict()

    def is_ground(self, target: int) -> bool:
        return target >= self.n

    def ground_index(self, target: int) -> int:
        return target - self.n

    def in_edges(self, vertex: int) -> list[tuple[int, int]]:
        """(source, slot) pairs of edges pointing at `vertex`."""
        return [(i, s) for i, s, t in self.edges() if t == vertex]

    # -- involutions ----------------------------------------------------
    def mirror(self) -> "KGraph":
        """Swap the two ground targets (m = 2 only)."""
        if self.m != 2:
            raise ParseError("mirror needs exactly two ground vertices")
        l, r = self.n, self.n + 1
        swap = {l: r, r: l}
        return KGraph(self.n, self.m,
                      tuple(tuple(swap.get(t, t) for t in ts) for ts in self.out_edges))

    # -- names ----------------------------------------------------------
    def _ground_name(self, k: int) -> str:
        if self.m == 2:
            return "LR"[k]
        return f"G{k}"

    def target_name(self, t: int) -> str:
        if t < self.n:
            return str(t + 1)
        return self._ground_name(t - self.n)


def serialize(g: KGraph) -> str:
    """Canonical text form, e.g. ``n=1;m=2;1:[L,R]``."""
    parts = [f"n={g.n}", f"m={g.m}"]
    for i, targets in enumerate(g.out_edges):
        names = ",".join(g.target_name(t) for t in targets)
        parts.append(f"{i + 1}:[{names}]")
    return ";".join(parts)


_VERTEX_RE = re.compile(r"^(\d+):\[([^\[\]]*)\]$")


def _parse_target(token: str, n: int, m: int) -> int:
    token = token.strip()
    if token in ("L", "R"):
        if m != 2:
            raise ParseError(f"ground name {token!r} needs m=2, got m={m}")
        return n + ("LR".index(token))
    gm = re.fullmatch(r"G(\d+)", token)
    if gm:
        k = int(gm.group(1))
        if k >= m:
            raise ParseError(f"ground vertex {token} out of range for m={m}")
        return n + k
    if token.isdigit():
        v = int(token)
        if not 1 <= v <= n:
            raise ParseError(f"aerial target {v} out of range for n={n}")
        return v - 1
    raise ParseError(f"unrecognized target {token!r}")


def parse(text: str) -> KGraph:
    """Inverse of :func:`serialize`; raises ParseError on malformed input."""
    parts = [p for p in text.strip().split(";") if p]
    if len(parts) < 2 or not parts[0].startswith("n=") or not parts[1].startswith("m="):
        raise ParseError(f"expected 'n=..;m=..' header in {text!r}")
    try:
        n, m = int(parts[0][2:]), int(parts[1][2:])
    except ValueError as exc:
        raise ParseError(f"bad header in {text!r}") from exc
    rows: dict[int, tuple[int, ...]] = {}
    for part in parts[2:]:
        mt = _VERTEX_RE.match(part.strip())
        if not mt:
            raise ParseError(f"malformed vertex entry {part!r}")
        idx = int(mt.group(1))
        if not 1 <= idx <= n or idx in rows:
            raise ParseError(f"bad vertex index {idx}")
        tokens = [t for t in mt.group(2).split(",") if t.strip()]
        rows[idx] = tuple(_parse_target(t, n, m) for t in tokens)
    if set(rows) != set(range(1, n + 1)):
        raise ParseError("missing vertex entries")
    return KGraph(n, m, tuple(rows[i] for i in range(1, n + 1)))


def to_json_obj(g: KGraph) -> dict:
    """JSON object form: aerial targets 1-based ints, ground "G0", "G1", ..."""
    edges = []
    for targets in g.out_edges:
        edges.append([t + 1 if t < g.n else f"G{t - g.n}" for t in targets])
    return {"n": g.n, "m": g.m, "edges": edges}


def from_json_obj(obj: dict) -> KGraph:
    try:
        n, m, edges = int(obj["n"]), int(obj["m"]), obj["edges"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad graph object {obj!r}") from exc
    rows = []
    for targets in edges:
        row = []
        for t in targets:
            if isinstance(t, int):
                if not 1 <= t <= n:
                    raise ParseError(f"aerial target {t} out of range")
                row.append(t - 1)
            else:
                row.append(_parse_target(str(t), n, m))
        rows.append(tuple(row))
    return KGraph(n, m, tuple(rows))


def to_json(g: KGraph) -> str:
    return json.dumps(to_json_obj(g), sort_keys=True)


def from_json(text: str) -> KGraph:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(str(exc)) from exc
    return from_json_obj(obj)


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------

def count_graphs(n: int, m: int, degrees: Sequence[int], strict: bool = True) -> int:
    """Closed-form count of admissible graphs with the given profile."""
    if len(degrees) != n:
        raise ParseError(f"need {n} degrees, got {len(degrees)}")
    total = 1
    options = n + m - 1  # everything except the vertex itself
    for p in degrees:
        k = p + 1
        if strict:
            if k > options:
                return 0
            total *= math.perm(options, k)
        else:
            total *= options ** k
    return total


def enumerate_graphs(n: int, m: int, degrees: Sequence[int], *,
                     strict: bool = True, cap: int = DEFAULT_CAP) -> list[KGraph]:
    """All admissible graphs in canonical lexicographic target order.

    The order compares the flattened tuples of internal integer targets,
    so it is stable across runs and platforms.  Raises
    EnumerationCapError if the closed-form count exceeds `cap`.
    """
    total = count_graphs(n, m, degrees, strict=strict)
    if total > cap:
        raise EnumerationCapError(
            f"{total} graphs exceed the cap of {cap}; raise `cap` explicitly to proceed")
    per_vertex = []
    for i, p in enumerate(degrees):
        targets = [t for t in range(n + m) if t != i]
        if strict:
            choices = list(itertools.permutations(targets, p + 1))
        else:
            choices = list(itertools.product(targets, repeat=p + 1))
        choices.sort()
        per_vertex.append(choices)
    out = [KGraph(n, m, rows) for rows in itertools.product(*per_vertex)]
    return out


def star_graphs(order: int, *, cap: int = DEFAULT_CAP) -> list[KGraph]:
    """Order-n graphs of the binary star expansion: two ground vertices,
    every aerial vertex of out-degree two."""
    return enumerate_graphs(order, 2, [1] * order, strict=True, cap=cap)
