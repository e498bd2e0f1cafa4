"""Star product assembly and its verifiers.

The hbar^n coefficient of f * g is (i/2)^n sum over order-n star
graphs of weight x operator value.  Weights come from a shared
WeightTable; their statistical errors are pushed through every
derived quantity, so each report carries a per-power bound.

Error model.  A star coefficient is linear in the table weights and a
composite like (f*g)*h - f*(g*h) is at most quadratic, so the exact
first-order sensitivity to one weight is the symmetric difference
(R(w+1) - R(w-1))/2 taken in exact arithmetic.  Independent graphs
(independent sampling seeds) combine in quadrature; the scalar bound
per power is the sup of the sensitivity polynomial over a probe grid,
by default the 3^d lattice on [-1,1]^d.
"""
from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ConfigError, DimensionMismatchError, DomainError
from .graphs import KGraph, serialize, star_graphs
from .operators import build_operator
from .poly import Polynomial
from .polyvector import PolyVectorField, validate_poisson
from .rational import QI
from .series import FormalSeries
from .weights import IntegrationConfig, WeightTable, exact_weight

_WEIGHT_MODES = ("auto", "numeric", "exact")
_JACOBI_MODES = ("require", "warn")

_HALF_I = QI(0, Fraction(1, 2))


@dataclass(frozen=True)
class StarConfig:
    """Assembly knobs: truncation order, weight sourcing, tolerances.

    weights "auto" takes closed forms where known and integrates the
    rest, "numeric" integrates everything, "exact" demands a closed
    form for every contributing graph (zero statistical error, so
    verifier verdicts become exact).  jacobi "warn" downgrades a
    failed Jacobi identity from an error to a warning for
    experiments on non-Poisson bivectors.
    """

    order: int = 2
    integration: IntegrationConfig = field(default_factory=IntegrationConfig)
    table: WeightTable | None = None
    policy: float = 3.0
    weights: str = "auto"
    jacobi: str = "require"
    probe: tuple = (-1, 0, 1)

    def __post_init__(self):
        if self.order < 0:
            raise ConfigError("truncation order must be >= 0")
        if not self.policy > 0:
            raise ConfigError("tolerance policy must be positive")
        if self.weights not in _WEIGHT_MODES:
            raise ConfigError(f"unknown weight mode {self.weights!r}")
        if self.jacobi not in _JACOBI_MODES:
            raise ConfigError(f"unknown jacobi mode {self.jacobi!r}")
        if not self.probe:
            raise ConfigError("probe grid needs at least one point")


@dataclass(frozen=True)
class ResidualRow:
    power: int
    residual: Polynomial
    residual_max: float
    bound: float
    passed: bool


@dataclass(frozen=True)
class ResidualReport:
    """Per-hbar-power residuals of an identity, with verdicts.

    A power passes when every residual coefficient magnitude is at
    most policy x propagated error; a zero bound therefore demands an
    exactly zero residual.
    """

    identity: str
    policy: float
    rows: tuple

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.rows)

    def summary(self) -> str:
        verdict = "pass" if self.ok else "FAIL"
        worst = max(self.rows, key=lambda r: r.residual_max, default=None)
        if worst is None:
            return f"{self.identity}: {verdict} (no powers)"
        return (f"{self.identity}: {verdict} at policy {self.policy:g} "
                f"(worst power {worst.power}: residual {worst.residual_max:.3g}"
                f" vs bound {worst.bound:.3g})")

    def to_json_obj(self) -> dict:
        return {
            "identity": self.identity,
            "policy": self.policy,
            "ok": self.ok,
            "powers": [{
                "power": r.power,
                "residual_max": r.residual_max,
                "bound": r.bound,
                "passed": r.passed,
                "residual": r.residual.to_json_obj(),
            } for r in self.rows],
        }


@dataclass(frozen=True)
class StarExpansion:
    """Series plus per-power error bounds and the table that fed them."""

    series: FormalSeries
    bounds: tuple
    table: WeightTable


def probe_sup(p: Polynomial, probe=(-1, 0, 1)) -> float:
    """Max |p| over the probe lattice, exact evaluation per point."""
    if p.is_zero():
        return 0.0
    best = 0.0
    for point in itertools.product(probe, repeat=p.dim):
        best = max(best, abs(p.eval_exact(point)))
    return best


def _poly_key(p: Polynomial):
    return tuple(sorted((e, c.re, c.im) for e, c in p.terms.items()))


class _Engine:
    """Operator cache plus weight table for one bivector and config.

    Assembly is split from weight lookup so the same symbolic work can
    be re-run under shifted weights (sensitivity passes) at the cost
    of a dict lookup, not a re-integration.
    """

    def __init__(self, alpha: PolyVectorField, cfg: StarConfig):
        if alpha.degree != 1:
            raise DimensionMismatchError("star products need a bivector")
        report = validate_poisson(alpha)
        if not report.ok:
            if cfg.jacobi == "require":
                raise DomainError(report.summary())
            warnings.warn(report.summary(), stacklevel=3)
        self.alpha = alpha
        self.cfg = cfg
        self.dim = alpha.dim
        self.table = cfg.table if cfg.table is not None else WeightTable()
        self._ops = {}
        self._memo = {}

    def operators(self, order: int) -> list:
        """Nonzero operators of the given graph order, with serials."""
        if order not in self._ops:
            rows = []
            for g in star_graphs(order):
                op = build_operator(g, [self.alpha] * order)
                if op.terms:
                    rows.append((g, op, serialize(g)))
            self._ops[order] = rows
        return self._ops[order]

    def contributing_graphs(self) -> list:
        out = []
        for j in range(1, self.cfg.order + 1):
            out.extend(g for g, _, _ in self.operators(j))
        return out

    def ensure_weights(self) -> None:
        graphs = self.contributing_graphs()
        mode = self.cfg.weights
        if mode == "exact":
            missing = [serialize(g) for g in graphs if exact_weight(g) is None]
            if missing:
                raise ConfigError(
                    "no closed-form weight for "
                    + ", ".join(missing[:4])
                    + ("..." if len(missing) > 4 else "")
                    + "; use weights='auto' or 'numeric'")
        self.table.ensure(graphs, self.cfg.integration,
                          use_exact=mode in ("auto", "exact"))

    def base_weights(self) -> dict:
        """Serial -> exact-rational weight value (dyadic for estimates)."""
        out = {}
        for g in self.contributing_graphs():
            est = self.table.get(g)
            val = est.exact if est.exact is not None else Fraction(est.value)
            out[serialize(g)] = QI(val)
        return out

    def sigmas(self) -> dict:
        """Serial -> nonzero std_error, for graphs that carry one."""
        out = {}
        for g in self.contributing_graphs():
            est = self.table.get(g)
            if est.std_error:
                out[serialize(g)] = est.std_error
        return out

    def _apply(self, ser: str, op, fk: Polynomial, gl: Polynomial):
        key = (ser, _poly_key(fk), _poly_key(gl))
        hit = self._memo.get(key)
        if hit is None:
            hit = op.apply((fk, gl))
            self._memo[key] = hit
        return hit

    def star_series(self, F: FormalSeries, G: FormalSeries,
                    wmap: dict) -> FormalSeries:
        """Bilinear star with explicit weights, truncated at cfg.order."""
        N = self.cfg.order
        F = F.truncate(N)
        G = G.truncate(N)
        out = F * G
        coeffs = [out.coefficient(k) for k in range(N + 1)]
        for j in range(1, N + 1):
            scale = _HALF_I ** j
            for g, op, ser in self.operators(j):
                w = wmap[ser]
                for k in range(N - j + 1):
                    fk = F.coefficient(k)
                    if fk.is_zero():
                        continue
                    for l in range(N - j - k + 1):
                        gl = G.coefficient(l)
                        if gl.is_zero():
                            continue
                        p = self._apply(ser, op, fk, gl)
                        if not p.is_zero():
                            coeffs[j + k + l] = coeffs[j + k + l] \
                                + p * (scale * w)
        return FormalSeries(self.dim, N, coeffs)


def star_expansion(f: Polynomial, g: Polynomial, alpha: PolyVectorField,
                   cfg: StarConfig) -> StarExpansion:
    """Star product of two polynomials with per-power error bounds.

    For polynomial inputs the hbar^n coefficient touches only order-n
    graphs, so the bound is the direct quadrature of
    2^-n x std_error x probe sup of each operator value.
    """
    eng = _Engine(alpha, cfg)
    eng.ensure_weights()
    wmap = eng.base_weights()
    sig = eng.sigmas()
    N = cfg.order
    F = FormalSeries.from_polynomial(f, N)
    G = FormalSeries.from_polynomial(g, N)
    series = eng.star_series(F, G, wmap)
    bounds = [0.0] * (N + 1)
    for j in range(1, N + 1):
        acc = 0.0
        for _, op, ser in eng.operators(j):
            if ser in sig:
                p = eng._apply(ser, op, f, g)
                acc += (sig[ser] * probe_sup(p, cfg.probe)) ** 2
        bounds[j] = math.sqrt(acc) / 2 ** j
    return StarExpansion(series, tuple(bounds), eng.table)


def star(f: Polynomial, g: Polynomial, alpha: PolyVectorField,
         cfg: StarConfig | None = None) -> FormalSeries:
    return star_expansion(f, g, alpha, cfg or StarConfig()).series


def moyal_reference(f: Polynomial, g: Polynomial, alpha: PolyVectorField,
                    order: int) -> FormalSeries:
    """Constant-coefficient oracle: exponential bidifferential series.

    hbar^n coefficient is (1/n!) (i/2)^n a^{i1 j1}...a^{in jn}
    d_{i...}f d_{j...}g, computed by iterating the first-order
    contraction.  Rejects non-constant bivectors.
    """
    if alpha.degree != 1:
        raise DimensionMismatchError("moyal_reference needs a bivector")
    if alpha.dim != f.dim or alpha.dim != g.dim:
        raise DimensionMismatchError("argument dimensions disagree")
    if order < 0:
        raise ConfigError("truncation order must be >= 0")
    dim = alpha.dim
    origin = (0,) * dim
    entries = []
    for idx, comp in alpha.iter_full_components():
        if not (comp.is_zero() or comp.degree() == 0):
            raise ConfigError("moyal_reference needs a constant bivector")
        c = comp.terms.get(origin)
        if c is not None:
            entries.append((idx, c))
    coeffs = [f * g]
    pairs = [(QI(1), f, g)]
    for n in range(1, order + 1):
        step = []
        for mult, a, b in pairs:
            for (i, j), c in entries:
                da = a.diff(i)
                if da.is_zero():
                    continue
                db = b.diff(j)
                if db.is_zero():
                    continue
                step.append((mult * c, da, db))
        pairs = step
        total = Polynomial.zero(dim)
        for mult, a, b in pairs:
            total = total + (a * b) * mult
        coeffs.append(total * (_HALF_I ** n * QI(Fraction(1, math.factorial(n)))))
    return FormalSeries(dim, order, coeffs)


def _sensitivity_bounds(eng: _Engine, wmap: dict, evaluate) -> tuple:
    """Quadrature first-order bounds of evaluate(wmap) per power.

    evaluate must be polynomial of degree <= 2 in each weight, which
    makes the unit symmetric difference exact.
    """
    N = eng.cfg.order
    acc = [0.0] * (N + 1)
    for ser, sigma in eng.sigmas().items():
        up = dict(wmap)
        up[ser] = wmap[ser] + QI(1)
        down = dict(wmap)
        down[ser] = wmap[ser] - QI(1)
        diff = (evaluate(up) - evaluate(down)) * QI(Fraction(1, 2))
        for k in range(N + 1):
            acc[k] += (sigma * probe_sup(diff.coefficient(k), eng.cfg.probe)) ** 2
    return tuple(math.sqrt(a) for a in acc)


def _verdict_rows(residual: FormalSeries, bounds, policy) -> tuple:
    rows = []
    for k in range(residual.order + 1):
        p = residual.coefficient(k)
        m = p.max_abs_coeff()
        rows.append(ResidualRow(k, p, m, bounds[k], m <= policy * bounds[k]))
    return tuple(rows)


def check_associativity(f: Polynomial, g: Polynomial, h: Polynomial,
                        alpha: PolyVectorField,
                        cfg: StarConfig) -> ResidualReport:
    """Residual of (f*g)*h - f*(g*h) through hbar^order with bounds."""
    eng = _Engine(alpha, cfg)
    eng.ensure_weights()
    wmap = eng.base_weights()
    N = cfg.order
    F = FormalSeries.from_polynomial(f, N)
    G = FormalSeries.from_polynomial(g, N)
    H = FormalSeries.from_polynomial(h, N)

    def residual(w):
        left = eng.star_series(eng.star_series(F, G, w), H, w)
        right = eng.star_series(F, eng.star_series(G, H, w), w)
        return left - right

    base = residual(wmap)
    bounds = _sensitivity_bounds(eng, wmap, residual)
    return ResidualReport("associativity", cfg.policy,
                          _verdict_rows(base, bounds, cfg.policy))


@dataclass(frozen=True)
class CenterProbeReport:
    """Exact centrality test plus the star commutator as data.

    ok reflects only part (a): the contraction a^{ij} d_j f vanishing
    identically.  The commutator rows are informational; nothing
    beyond hbar^1 is expected to vanish for a general star product.
    """

    central: bool
    gradient: tuple
    commutator: FormalSeries
    bounds: tuple

    @property
    def ok(self) -> bool:
        return self.central

    def summary(self) -> str:
        head = "central" if self.central else "NOT central"
        tail = max((p.max_abs_coeff() for p in
                    (self.commutator.coefficient(k)
                     for k in range(self.commutator.order + 1))),
                   default=0.0)
        return (f"center probe: {head}; commutator max coefficient "
                f"{tail:.3g}")

    def to_json_obj(self) -> dict:
        return {
            "central": self.central,
            "ok": self.ok,
            "gradient": [p.to_json_obj() for p in self.gradient],
            "commutator": self.commutator.to_json_obj(),
            "bounds": list(self.bounds),
        }


def poisson_center_probe(f: Polynomial, g: Polynomial,
                         alpha: PolyVectorField,
                         cfg: StarConfig) -> CenterProbeReport:
    """Is f Poisson-central, and how does its star commutator look?

    Part (a) is exact: every component of a^{ij} d_j f must vanish
    identically.  Part (b) reports f*g - g*f with propagated bounds.
    """
    if alpha.degree != 1:
        raise DimensionMismatchError("center probe needs a bivector")
    if alpha.dim != f.dim or alpha.dim != g.dim:
        raise DimensionMismatchError("argument dimensions disagree")
    dim = alpha.dim
    gradient = []
    for i in range(dim):
        comp = Polynomial.zero(dim)
        for j in range(dim):
            if i != j:
                comp = comp + alpha.component((i, j)) * f.diff(j)
        gradient.append(comp)
    central = all(p.is_zero() for p in gradient)

    eng = _Engine(alpha, cfg)
    eng.ensure_weights()
    wmap = eng.base_weights()
    sig = eng.sigmas()
    N = cfg.order
    F = FormalSeries.from_polynomial(f, N)
    G = FormalSeries.from_polynomial(g, N)
    comm = eng.star_series(F, G, wmap) - eng.star_series(G, F, wmap)
    bounds = [0.0] * (N + 1)
    for j in range(1, N + 1):
        acc = 0.0
        for _, op, ser in eng.operators(j):
            if ser in sig:
                p = eng._apply(ser, op, f, g) - eng._apply(ser, op, g, f)
                acc += (sig[ser] * probe_sup(p, cfg.probe)) ** 2
        bounds[j] = math.sqrt(acc) / 2 ** j
    return CenterProbeReport(central, tuple(gradient), comm, tuple(bounds))
