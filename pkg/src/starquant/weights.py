"""Numerical graph weights: configuration-space integrals of wedge
products of angle 1-forms.

A graph with n aerial and m >= 2 ground vertices integrates the wedge
product over its edges e of the angle forms

    dphi(z_source(e), target(e))

over n points in the upper half plane and m-2 moving ground points
0 < t < 1, the outer two grounds pinned at 0 and 1.  The integrand is
det M where row k holds the coefficients of the k-th edge form (rows
in vertex-then-slot order) and the columns run over
(x_1, y_1, ..., x_n, y_n, t_1, ..., t_{m-2}) with the moving grounds
in descending position order.  Orientation is fixed by this column
convention and validated by the order-1 calibration (weight +1/2 for
the graph 1:[L,R]).

Star-normalized weights divide the raw integral by (2pi)^(2n) n!.

Sampling maps each aerial point from the open unit square through
x = tan(pi (s - 1/2)), y = t/(1 - t); moving grounds are sorted
uniforms (simplex sampling).  Default method is scrambled-Sobol QMC
with 32 independent replicates; the replicate spread gives the
standard error.  Plain Monte Carlo and a tensor-grid midpoint rule
(n <= 2) are available as cross-checks.
"""
from __future__ import annotations

import hashlib
import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.stats import qmc

from .errors import ConfigError, ConvergenceWarning, DegreeMismatchError
from .graphs import KGraph, serialize

TWO_PI = 2.0 * math.pi

_METHODS = ("qmc", "mc", "cubature")
_MAPPINGS = ("tan_square",)

# total sample budgets by integration dimension, powers of two so the
# 32 Sobol replicates stay balanced
_DEFAULT_BUDGET = {2: 1048576, 3: 2097152, 4: 4194304, 5: 1048576}
_FALLBACK_BUDGET = 1048576

_GUARD = 1e-12


def stable_seed(*parts) -> int:
    """Deterministic 64-bit seed from the printed parts."""
    text = "|".join(str(p) for p in parts)
    dig = hashlib.blake2b(text.encode(), digest_size=8).digest()
    return int.from_bytes(dig, "big")


def default_budget(dims: int) -> int:
    return _DEFAULT_BUDGET.get(dims, _FALLBACK_BUDGET)


@dataclass(frozen=True)
class IntegrationConfig:
    method: str = "qmc"
    n_samples: int | None = None      # total across replicates; None = auto
    seed: int = 0
    n_replicates: int = 32
    mapping: str = "tan_square"
    error_target: float | None = None

    def __post_init__(self):
        if self.method not in _METHODS:
            raise ConfigError(f"unknown method {self.method!r}")
        if self.mapping not in _MAPPINGS:
            raise ConfigError(f"unknown mapping {self.mapping!r}")
        if self.n_samples is not None and self.n_samples < 1:
            raise ConfigError("n_samples must be >= 1")
        if self.n_replicates < 2:
            raise ConfigError("need at least 2 replicates for a spread")
        if self.error_target is not None and not self.error_target > 0:
            raise ConfigError("error_target must be positive")


@dataclass(frozen=True)
class WeightEstimate:
    value: float
    std_error: float
    n_samples: int
    seed: int
    method: str
    exact: Fraction | None = None

    def to_json_obj(self, graph: KGraph | None = None) -> dict:
        obj = {}
        if graph is not None:
            obj["graph"] = serialize(graph)
        obj.update({
            "value": self.value,
            "std_error": self.std_error,
            "n_samples": self.n_samples,
            "seed": self.seed,
            "method": self.method,
        })
        if self.exact is not None:
            obj["exact"] = [self.exact.numerator, self.exact.denominator]
        return obj

    @staticmethod
    def from_json_obj(obj: dict) -> "WeightEstimate":
        exact = obj.get("exact")
        return WeightEstimate(
            value=float(obj["value"]),
            std_error=float(obj["std_error"]),
            n_samples=int(obj["n_samples"]),
            seed=int(obj["seed"]),
            method=str(obj["method"]),
            exact=None if exact is None else Fraction(exact[0], exact[1]),
        )


# ---------------------------------------------------------------------------
# batched determinants
# ---------------------------------------------------------------------------

def _det2(m):
    return m[:, 0, 0] * m[:, 1, 1] - m[:, 0, 1] * m[:, 1, 0]


def _det3(m):
    return (m[:, 0, 0] * (m[:, 1, 1] * m[:, 2, 2] - m[:, 1, 2] * m[:, 2, 1])
            - m[:, 0, 1] * (m[:, 1, 0] * m[:, 2, 2] - m[:, 1, 2] * m[:, 2, 0])
            + m[:, 0, 2] * (m[:, 1, 0] * m[:, 2, 1] - m[:, 1, 1] * m[:, 2, 0]))


def _det4(m):
    # Laplace expansion on the top two rows against the bottom two
    def p(i, j):
        return m[:, 0, i] * m[:, 1, j] - m[:, 0, j] * m[:, 1, i]

    def q(i, j):
        return m[:, 2, i] * m[:, 3, j] - m[:, 2, j] * m[:, 3, i]

    return (p(0, 1) * q(2, 3) - p(0, 2) * q(1, 3) + p(0, 3) * q(1, 2)
            + p(1, 2) * q(0, 3) - p(1, 3) * q(0, 2) + p(2, 3) * q(0, 1))


_KEEP4 = [[j for j in range(5) if j != c] for c in range(5)]


def _det5(m):
    total = None
    for c in range(5):
        minor = _det4(m[:, 1:, :][:, :, _KEEP4[c]])
        term = m[:, 0, c] * minor
        if c % 2:
            term = -term
        total = term if total is None else total + term
    return total


def det_batch(m: np.ndarray) -> np.ndarray:
    k = m.shape[1]
    if k == 2:
        return _det2(m)
    if k == 3:
        return _det3(m)
    if k == 4:
        return _det4(m)
    if k == 5:
        return _det5(m)
    return np.linalg.det(m)


# ---------------------------------------------------------------------------
# integrand
# ---------------------------------------------------------------------------

def _evaluate(graph: KGraph, u: np.ndarray) -> np.ndarray:
    """Integrand values for unit-cube samples u; NaN marks rejected rows."""
    n, m = graph.n, graph.m
    k_move = m - 2
    nrows = u.shape[0]
    with np.errstate(all="ignore"):
        s = u[:, 0:2 * n:2]
        t = u[:, 1:2 * n:2]
        x = np.tan(np.pi * (s - 0.5))
        y = t / (1.0 - t)
        z = x + 1j * y
        jac = (np.prod(np.pi * (1.0 + x * x), axis=1)
               / np.prod(1.0 - t, axis=1) ** 2)
        bad = ~np.isfinite(jac)
        bad |= np.any(y <= 0.0, axis=1)

        if k_move:
            tg = np.sort(u[:, 2 * n:], axis=1)      # ascending positions
        else:
            tg = np.empty((nrows, 0))

        def ground_pos(k):
            if k == 0:
                return 0.0
            if k == m - 1:
                return 1.0
            return tg[:, k - 1]

        # coincidence / anchor guard on the mapped points
        for i in range(n):
            for j in range(i + 1, n):
                bad |= np.abs(z[:, i] - z[:, j]) < _GUARD
                bad |= np.abs(z[:, i] - np.conjugate(z[:, j])) < _GUARD
            for k in range(m):
                bad |= np.abs(z[:, i] - ground_pos(k)) < _GUARD

        mat = np.zeros((nrows, 2 * n + k_move, 2 * n + k_move))
        row = 0
        for i in range(n):
            zi = z[:, i]
            for tgt in graph.out_edges[i]:
                if tgt < n:
                    w = z[:, tgt]
                    qf = (zi - w) * (zi - np.conjugate(w))
                    a = (2.0 * zi - w - np.conjugate(w)) / qf
                    mat[:, row, 2 * i] = a.imag
                    mat[:, row, 2 * i + 1] = a.real
                    mat[:, row, 2 * tgt] = -a.imag
                    mat[:, row, 2 * tgt + 1] = (2.0 * w.imag
                                                * (1.0 / qf).imag)
                else:
                    k = tgt - n
                    pos = ground_pos(k)
                    a = 2.0 / (zi - pos)
                    mat[:, row, 2 * i] = a.imag
                    mat[:, row, 2 * i + 1] = a.real
                    if 0 < k < m - 1:
                        mat[:, row, 2 * n + (k_move - k)] = -a.imag
                row += 1

        vals = det_batch(mat) * jac / math.factorial(k_move)
        vals = np.where(bad | ~np.isfinite(vals), np.nan, vals)
    return vals


def _clean_values(graph: KGraph, u: np.ndarray, redraw_seed: int
                  ) -> np.ndarray:
    """Evaluate, replacing guarded samples with fresh uniform draws."""
    vals = _evaluate(graph, u)
    bad = np.isnan(vals)
    if not bad.any():
        return vals
    gen = np.random.Generator(np.random.PCG64(redraw_seed))
    for _ in range(64):
        fresh = gen.random((int(bad.sum()), u.shape[1]))
        vals[bad] = _evaluate(graph, fresh)
        bad = np.isnan(vals)
        if not bad.any():
            return vals
    raise RuntimeError("sample redraw failed to escape the guard")


def integrate_graph_form(graph: KGraph, cfg: IntegrationConfig,
                         seed: int | None = None
                         ) -> tuple[float, float, int]:
    """Raw form integral; returns (value, std_error, n_samples).

    The form degree (edge count) must equal the domain dimension
    2n + m - 2, and at least two ground vertices are needed to pin the
    translation-dilation gauge.
    """
    n, m = graph.n, graph.m
    if m < 2:
        raise DegreeMismatchError(
            f"gauge fixing needs at least 2 ground vertices, graph has {m}")
    dims = 2 * n + m - 2
    if graph.edge_count != dims:
        raise DegreeMismatchError(
            f"form degree {graph.edge_count} != domain dimension {dims}")
    if dims == 0:
        return 1.0, 0.0, 0
    base_seed = cfg.seed if seed is None else seed
    if cfg.method == "cubature":
        return _cubature(graph, cfg, base_seed, dims)

    total = cfg.n_samples or default_budget(dims)
    per_rep = max(1, total // cfg.n_replicates)
    means = []
    for r in range(cfg.n_replicates):
        rep_seed = stable_seed(base_seed, "rep", r)
        if cfg.method == "qmc":
            sob = qmc.Sobol(d=dims, scramble=True, seed=rep_seed)
            with warnings.catch_warnings():
                # unbalanced sample counts are the user's choice
                warnings.simplefilter("ignore", UserWarning)
                u = sob.random(per_rep)
        else:
            gen = np.random.Generator(np.random.PCG64(rep_seed))
            u = gen.random((per_rep, dims))
        vals = _clean_values(graph, u, stable_seed(rep_seed, "redraw"))
        means.append(float(vals.mean()))
    value = float(np.mean(means))
    std_error = float(np.std(means, ddof=1) / math.sqrt(len(means)))
    return value, std_error, per_rep * cfg.n_replicates


def _cubature(graph: KGraph, cfg: IntegrationConfig, seed: int, dims: int
              ) -> tuple[float, float, int]:
    """Tensor-grid midpoint rule; error from grid-halving (heuristic)."""
    if graph.n > 2:
        raise ConfigError("cubature supports graphs of order n <= 2 only")
    total = cfg.n_samples or default_budget(dims)
    side = max(4, int(round(total ** (1.0 / dims))))

    def grid_mean(g):
        axes = [(np.arange(g) + 0.5) / g] * dims
        mesh = np.meshgrid(*axes, indexing="ij")
        u = np.stack([a.ravel() for a in mesh], axis=1)
        vals = _evaluate(graph, u)
        return float(np.nanmean(vals)), u.shape[0]

    coarse, _ = grid_mean(side // 2)
    value, n_used = grid_mean(side)
    return value, abs(value - coarse), n_used


# ---------------------------------------------------------------------------
# star-normalized weights
# ---------------------------------------------------------------------------

def weight(graph: KGraph, cfg: IntegrationConfig,
           seed: int | None = None) -> WeightEstimate:
    """Star weight: raw integral over (2pi)^(2n) n! for an m=2 graph."""
    if graph.m != 2:
        raise DegreeMismatchError(
            f"star weights take two-ground graphs, got m={graph.m}")
    if graph.edge_count != 2 * graph.n:
        raise DegreeMismatchError(
            f"edge count {graph.edge_count} != 2n = {2 * graph.n}")
    used_seed = cfg.seed if seed is None else seed
    if graph.has_doubled_edge():
        # repeated rows wedge to zero; nothing to sample
        return WeightEstimate(0.0, 0.0, 0, used_seed, cfg.method,
                              exact=Fraction(0))
    if graph.n == 0:
        return WeightEstimate(1.0, 0.0, 0, used_seed, cfg.method,
                              exact=Fraction(1))
    raw, raw_se, n_used = integrate_graph_form(graph, cfg, seed=used_seed)
    norm = TWO_PI ** (2 * graph.n) * math.factorial(graph.n)
    est = WeightEstimate(raw / norm, raw_se / norm, n_used, used_seed,
                         cfg.method)
    if cfg.error_target is not None and est.std_error > cfg.error_target:
        warnings.warn(
            f"std_error {est.std_error:.3g} above target "
            f"{cfg.error_target:.3g} for {serialize(graph)}",
            ConvergenceWarning, stacklevel=2)
    return est


def exact_weight(graph: KGraph) -> Fraction | None:
    """Closed-form star weight when one is known, else None.

    Covers: repeated-edge degeneracy, the order-0 and order-1 graphs,
    and derivative-free graphs (every edge lands on a ground vertex),
    whose integral factorizes into order-1 blocks.
    """
    if graph.m != 2 or graph.edge_count != 2 * graph.n:
        return None
    if graph.has_doubled_edge():
        return Fraction(0)
    if graph.n == 0:
        return Fraction(1)
    left, right = graph.n, graph.n + 1
    sign = 1
    for targets in graph.out_edges:
        if targets == (left, right):
            continue
        if targets == (right, left):
            sign = -sign
            continue
        return None
    return Fraction(sign, 2 ** graph.n * math.factorial(graph.n))


def i_p_integral(p: int, cfg: IntegrationConfig,
                 seed: int | None = None) -> WeightEstimate:
    """Raw angle-form integral over one aerial point and p+1 grounds,
    wedge factors ordered by descending ground position.

    Closed form: (-1)^p (2pi)^(p+1) / (p+1)!, so this doubles as a
    calibration target for the moving-ground machinery.
    """
    if p < 1:
        raise DegreeMismatchError("i_p_integral needs p >= 1")
    m = p + 1
    targets = tuple(1 + k for k in reversed(range(m)))
    graph = KGraph(1, m, (targets,))
    used_seed = cfg.seed if seed is None else seed
    value, se, n_used = integrate_graph_form(graph, cfg, seed=used_seed)
    return WeightEstimate(value, se, n_used, used_seed, cfg.method)


def i_p_rational(p: int) -> Fraction:
    """Closed form divided by (2pi)^(p+1); valid for p >= 0."""
    if p < 0:
        raise DegreeMismatchError("i_p is defined for p >= 0")
    return Fraction((-1) ** p, math.factorial(p + 1))


# ---------------------------------------------------------------------------
# weight tables
# ---------------------------------------------------------------------------

class WeightTable:
    """Ordered map graph serialization -> WeightEstimate."""

    def __init__(self):
        self._entries: dict[str, tuple[KGraph, WeightEstimate]] = {}

    def __len__(self):
        return len(self._entries)

    def __iter__(self):
        return iter(self._entries.values())

    def get(self, graph: KGraph) -> WeightEstimate | None:
        hit = self._entries.get(serialize(graph))
        return hit[1] if hit else None

    def put(self, graph: KGraph, est: WeightEstimate) -> None:
        self._entries[serialize(graph)] = (graph, est)

    def ensure(self, graphs, cfg: IntegrationConfig,
               use_exact: bool = False) -> "WeightTable":
        """Fill in missing graphs; existing entries are kept.

        With use_exact, graphs with a known closed form get exact
        entries instead of sampling.  Numeric work is spread over
        STARQUANT_THREADS threads (results independent of the count).
        """
        pending = [g for g in graphs if serialize(g) not in self._entries]
        jobs = []
        for g in pending:
            closed = exact_weight(g) if use_exact else None
            if closed is not None:
                self.put(g, WeightEstimate(
                    float(closed), 0.0, 0, stable_seed(cfg.seed, serialize(g)),
                    cfg.method, exact=closed))
            else:
                jobs.append(g)
        if jobs:
            workers = int(os.environ.get("STARQUANT_THREADS", "1"))
            fn = (lambda g: weight(
                g, cfg, seed=stable_seed(cfg.seed, serialize(g))))
            if workers > 1:
                with ThreadPoolExecutor(max_workers=workers) as pool:
                    results = list(pool.map(fn, jobs))
            else:
                results = [fn(g) for g in jobs]
            for g, est in zip(jobs, results):
                self.put(g, est)
        return self

    def to_json_obj(self) -> list:
        return [est.to_json_obj(g) for g, est in self]

    @staticmethod
    def from_json_obj(obj: list) -> "WeightTable":
        from .graphs import parse
        table = WeightTable()
        for entry in obj:
            table.put(parse(entry["graph"]),
                      WeightEstimate.from_json_obj(entry))
        return table

    def to_csv(self) -> str:
        lines = ["graph,value,std_error,n_samples,seed,method"]
        for g, est in self:
            lines.append(f"{serialize(g)},{est.value!r},{est.std_error!r},"
                         f"{est.n_samples},{est.seed},{est.method}")
        return "\n".join(lines) + "\n"


def weight_table(graphs, cfg: IntegrationConfig) -> WeightTable:
    """Batch weights with per-graph seeds derived from cfg.seed."""
    return WeightTable().ensure(list(graphs), cfg, use_exact=False)
