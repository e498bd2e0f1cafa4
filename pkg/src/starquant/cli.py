"""Batch front end: enumerate graphs, build weight tables, evaluate
star products and run the verifier suites.

Every command that writes an output file drops a run manifest next to
it (command echo, config, versions, seed, wall clock, output digests).
Primary artifacts are byte-deterministic for a fixed explicit --seed;
the manifest carries the only wall-clock-dependent field.

Exit codes: 0 pass, 1 verification failure, 2 usage or parse error,
3 resource cap exceeded.  STARQUANT_THREADS caps the integration
thread pool.
"""
from __future__ import annotations

import argparse
import hashlib
import importlib.resources
import json
import math
import platform
import random
import sys
import time
import warnings

from . import __version__
from .errors import (
    ConfigError,
    ConvergenceWarning,
    DegreeMismatchError,
    DimensionMismatchError,
    DomainError,
    EnumerationCapError,
    ParseError,
)
from .formality import graded_symmetry_check, linfty_check
from .graphs import (
    enumerate_graphs,
    from_json_obj,
    serialize,
    star_graphs,
    to_json_obj,
)
from .poly import Polynomial
from .polyvector import PolyVectorField, validate_poisson
from .rational import QI
from .star import (
    StarConfig,
    check_associativity,
    moyal_reference,
    poisson_center_probe,
    star_expansion,
)
from .weights import (
    TWO_PI,
    IntegrationConfig,
    WeightTable,
    i_p_integral,
    i_p_rational,
)

SUITES = ("jacobi", "parity", "assoc", "moyal", "ip", "linfty", "symmetry",
          "center-probe")


# ---------------------------------------------------------------------------
# I/O plumbing
# ---------------------------------------------------------------------------

def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc


def load_alpha(path: str | None) -> PolyVectorField:
    """Polyvector field from a JSON file; None loads the packaged
    so(3)* linear Poisson structure."""
    if path is None:
        text = importlib.resources.files("starquant").joinpath(
            "data/so3.json").read_text()
        return PolyVectorField.from_json_obj(json.loads(text))
    return PolyVectorField.from_json_obj(_load_json(path))


def load_poly(path: str) -> Polynomial:
    obj = _load_json(path)
    try:
        dim = int(obj["dim"])
        return Polynomial.from_json_obj(dim, obj["poly"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(
            f"{path}: expected {{\"dim\": d, \"poly\": [terms]}}: {exc}"
        ) from exc


def _write_artifact(path: str, text: str, ns, t0: float, extra=None):
    with open(path, "w") as fh:
        fh.write(text)
    digest = hashlib.sha256(text.encode()).hexdigest()
    config = {k: v for k, v in vars(ns).items()
              if k != "func" and isinstance(v, (int, float, str, bool,
                                                list, tuple, type(None)))}
    manifest = {
        "command": ns.command,
        "config": config,
        "versions": {
            "starquant": __version__,
            "python": platform.python_version(),
        },
        "seed": getattr(ns, "seed", None),
        "elapsed_seconds": round(time.monotonic() - t0, 3),
        "outputs": [{"path": path, "sha256": digest}],
    }
    if extra:
        manifest.update(extra)
    with open(path + ".manifest.json", "w") as fh:
        fh.write(_dump(manifest))


def _integration(ns) -> IntegrationConfig:
    kw = {"seed": ns.seed}
    if getattr(ns, "samples", None):
        kw["n_samples"] = ns.samples
    if getattr(ns, "method", None):
        kw["method"] = ns.method
    if getattr(ns, "error_target", None):
        kw["error_target"] = ns.error_target
    return IntegrationConfig(**kw)


def _star_config(ns, table=None) -> StarConfig:
    return StarConfig(
        order=getattr(ns, "order", 2),
        integration=_integration(ns),
        table=table if table is not None else WeightTable(),
        policy=getattr(ns, "policy", 3.0),
        jacobi="warn" if getattr(ns, "skip_jacobi", False) else "require",
    )


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_enumerate(ns) -> int:
    t0 = time.monotonic()
    degrees = ([int(d) for d in ns.degrees.split(",")] if ns.degrees
               else [1] * ns.n)
    graphs = enumerate_graphs(ns.n, ns.m, degrees, strict=not ns.permissive)
    print(f"{len(graphs)} graphs for n={ns.n} m={ns.m} "
          f"degrees={','.join(map(str, degrees))}")
    if ns.out:
        text = _dump([to_json_obj(g) for g in graphs])
        _write_artifact(ns.out, text, ns, t0)
    return 0


def cmd_weight(ns) -> int:
    t0 = time.monotonic()
    if ns.graphs:
        graphs = [from_json_obj(obj) for obj in _load_json(ns.graphs)]
    elif ns.n is not None:
        graphs = star_graphs(ns.n)
    else:
        raise ParseError("need --graphs FILE or -n ORDER")
    cfg = _integration(ns)
    table = WeightTable()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ConvergenceWarning)
        table.ensure(graphs, cfg, use_exact=ns.exact)
    for w in caught:
        if issubclass(w.category, ConvergenceWarning):
            print(f"warning: {w.message}")
    audit_code = 0
    if ns.audit == "parity":
        audit_code, lines = _parity_audit(table, graphs)
        for line in lines:
            print(line)
    text = (table.to_csv() if ns.format == "csv"
            else _dump(table.to_json_obj()))
    if ns.out:
        _write_artifact(ns.out, text, ns, t0)
    else:
        sys.stdout.write(text)
    print(f"{len(graphs)} weights computed")
    return audit_code


def _parity_audit(table: WeightTable, graphs) -> tuple[int, list[str]]:
    """Per-graph mirror check at 3 and 5 sigma; the 3-sigma lane gets
    a small statistical allowance."""
    checks = []
    for g in graphs:
        est = table.get(g)
        mest = table.get(g.mirror())
        if mest is None:
            continue
        sign = (-1) ** g.n
        want = sign * (est.exact if est.exact is not None else est.value)
        diff = abs((mest.exact if mest.exact is not None else mest.value)
                   - want)
        sigma = math.hypot(est.std_error, mest.std_error)
        checks.append((serialize(g), diff, sigma))
    if not checks:
        return 2, ["parity audit: no mirror pairs found"]
    miss3 = [c for c in checks if c[1] > 3 * c[2]]
    miss5 = [c for c in checks if c[1] > 5 * c[2]]
    allowed3 = len(checks) - math.ceil(len(checks) * 34 / 36)
    ok = len(miss3) <= allowed3 and not miss5
    lines = [f"parity audit: {len(checks) - len(miss3)}/{len(checks)} "
             f"within 3 sigma (allowance {allowed3}), "
             f"{len(checks) - len(miss5)}/{len(checks)} within 5 sigma: "
             f"{'pass' if ok else 'FAIL'}"]
    for ser, diff, sigma in miss3:
        lines.append(f"  outlier {ser}: |diff|={diff:.3e} sigma={sigma:.3e}")
    return (0 if ok else 1), lines


def cmd_star(ns) -> int:
    t0 = time.monotonic()
    alpha = load_alpha(ns.alpha)
    f = load_poly(ns.f)
    g = load_poly(ns.g)
    cfg = _star_config(ns)
    exp = star_expansion(f, g, alpha, cfg)
    out_obj = {
        "dim": alpha.dim,
        "order": cfg.order,
        "series": exp.series.to_json_obj(),
        "bounds": list(exp.bounds),
    }
    text = _dump(out_obj)
    if ns.out:
        _write_artifact(ns.out, text, ns, t0)
    else:
        sys.stdout.write(text)
    return 0


def _default_args(dim: int) -> list[Polynomial]:
    return [Polynomial.variable(dim, i) for i in range(dim)]


def _seeded_bivector(rng: random.Random, dim: int) -> PolyVectorField:
    comps = {}
    for i in range(dim):
        for j in range(i + 1, dim):
            p = Polynomial.zero(dim)
            for v in range(dim):
                c = rng.randint(-2, 2)
                if c:
                    p = p + Polynomial.variable(dim, v) * QI(c)
            if not p.is_zero():
                comps[(i, j)] = p
    return PolyVectorField(dim, 1, comps)


def cmd_verify(ns) -> int:
    t0 = time.monotonic()
    suite = ns.suite
    report_obj, ok, lines = _run_suite(suite, ns)
    for line in lines:
        print(line)
    if ns.out:
        _write_artifact(ns.out, _dump(report_obj), ns, t0)
    return 0 if ok else 1


def _run_suite(suite: str, ns):
    if suite == "jacobi":
        alpha = load_alpha(ns.alpha)
        rep = validate_poisson(alpha)
        return rep.to_json_obj(), rep.ok, [rep.summary()]

    if suite == "parity":
        graphs = star_graphs(ns.order)
        table = WeightTable()
        table.ensure(graphs, _integration(ns), use_exact=False)
        code, lines = _parity_audit(table, graphs)
        obj = {"suite": "parity", "order": ns.order, "ok": code == 0,
               "table": table.to_json_obj()}
        return obj, code == 0, lines

    if suite == "assoc":
        alpha = load_alpha(ns.alpha)
        if ns.f and ns.g and ns.h:
            triple = [load_poly(p) for p in (ns.f, ns.g, ns.h)]
        else:
            base = _default_args(alpha.dim)
            triple = [base[i % alpha.dim] for i in range(3)]
        rep = check_associativity(*triple, alpha, _star_config(ns))
        return rep.to_json_obj(), rep.ok, [rep.summary()]

    if suite == "moyal":
        dim = 2
        one = Polynomial.constant(dim, QI(1))
        alpha = PolyVectorField(dim, 1, {(0, 1): one})
        x, y = Polynomial.variable(dim, 0), Polynomial.variable(dim, 1)
        cases, all_ok, lines = [], True, []
        cfg = StarConfig(order=3, integration=_integration(ns),
                         table=WeightTable(), jacobi="require")
        for f, g, name in ((x * x, y * y, "x^2,y^2"), (x, y, "x,y"),
                           (x * x * y, x * y, "x^2y,xy")):
            got = star_expansion(f, g, alpha, cfg).series
            want = moyal_reference(f, g, alpha, 3)
            resid = max(
                (got.coefficient(k) + want.coefficient(k) * QI(-1)
                 ).max_abs_coeff()
                for k in range(4))
            ok = resid == 0.0
            all_ok = all_ok and ok
            cases.append({"pair": name, "max_residual": resid, "ok": ok})
            lines.append(f"moyal {name}: {'exact match' if ok else 'FAIL'}")
        return {"suite": "moyal", "cases": cases, "ok": all_ok}, all_ok, lines

    if suite == "ip":
        cfg = _integration(ns)
        est = i_p_integral(ns.p, cfg)
        target = float(TWO_PI ** (ns.p + 1) * i_p_rational(ns.p))
        z = (abs(est.value - target) / est.std_error
             if est.std_error else float("inf"))
        ok = abs(est.value - target) <= 3 * est.std_error
        obj = {"suite": "ip", "p": ns.p, "value": est.value,
               "std_error": est.std_error, "target": target, "ok": ok}
        line = (f"ip p={ns.p}: {est.value:.6f} +/- {est.std_error:.2e} "
                f"vs {target:.6f} ({z:.2f} sigma): "
                f"{'pass' if ok else 'FAIL'}")
        return obj, ok, [line]

    if suite == "linfty":
        rng = random.Random(1000 + ns.seed)
        dim = 3
        a1, a2 = _seeded_bivector(rng, dim), _seeded_bivector(rng, dim)
        rep = linfty_check([a1, a2], _default_args(dim), _star_config(ns))
        return rep.to_json_obj(), rep.ok, [rep.summary()]

    if suite == "symmetry":
        rng = random.Random(1000 + ns.seed)
        dim = 3
        a1, a2 = _seeded_bivector(rng, dim), _seeded_bivector(rng, dim)
        x = _default_args(dim)
        rep = graded_symmetry_check([a1, a2], [x[0] * x[1], x[2]],
                                    _star_config(ns))
        return rep.to_json_obj(), rep.ok, [rep.summary()]

    if suite == "center-probe":
        alpha = load_alpha(ns.alpha)
        x = _default_args(alpha.dim)
        if ns.f:
            f = load_poly(ns.f)
        else:
            f = Polynomial.zero(alpha.dim)
            for v in x:
                f = f + v * v
        g = load_poly(ns.g) if ns.g else x[min(1, alpha.dim - 1)]
        rep = poisson_center_probe(f, g, alpha, _star_config(ns))
        return rep.to_json_obj(), rep.ok, [rep.summary()]

    raise ParseError(f"unknown suite {suite!r}; choose from "
                     + ", ".join(SUITES))


# ---------------------------------------------------------------------------
# Argument wiring
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="starquant",
        description="Graph-expansion star products: enumeration, weights, "
                    "star evaluation and verifier suites.",
        epilog="STARQUANT_THREADS caps the integration thread pool.")
    sub = top.add_subparsers(dest="command", required=True)

    def common_numeric(p, order=True):
        p.add_argument("--seed", type=int, default=0,
                       help="integration seed (explicit seed => "
                            "byte-identical artifacts)")
        p.add_argument("--samples", type=int, default=None,
                       help="total sample budget (default: per-dimension "
                            "auto, about 1e6 at order 1 and 4e6 at order 2)")
        p.add_argument("--method", choices=("qmc", "mc", "cubature"),
                       default=None)
        p.add_argument("--out", help="write the primary JSON artifact here "
                                     "(manifest lands next to it)")
        if order:
            p.add_argument("-N", "--order", type=int, default=2,
                           help="truncation order (default 2)")

    p = sub.add_parser("enumerate", help="list admissible graphs")
    p.add_argument("-n", type=int, required=True, help="aerial vertices")
    p.add_argument("-m", type=int, default=2, help="ground vertices")
    p.add_argument("--degrees", help="comma list of vertex degrees "
                                     "(default: all bivector)")
    p.add_argument("--permissive", action="store_true",
                   help="allow tadpoles and doubled edges")
    p.add_argument("--out")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("weight", help="integrate a weight table")
    p.add_argument("--graphs", help="JSON array of graph objects")
    p.add_argument("-n", type=int, help="all star graphs of this order")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--method", choices=("qmc", "mc", "cubature"),
                   default=None)
    p.add_argument("--error-target", type=float, default=None,
                   help="warn (exit 0) when std_error misses this")
    p.add_argument("--exact", action="store_true",
                   help="install known closed forms instead of sampling")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--audit", choices=("parity",),
                   help="run the mirror-sign audit on the finished table")
    p.add_argument("--out")
    p.set_defaults(func=cmd_weight)

    p = sub.add_parser("star", help="evaluate a star product expansion")
    p.add_argument("--alpha", help="polyvector JSON (default: packaged "
                                   "so(3) structure)")
    p.add_argument("--f", required=True, help="polynomial JSON file")
    p.add_argument("--g", required=True, help="polynomial JSON file")
    p.add_argument("--policy", type=float, default=3.0)
    p.add_argument("--skip-jacobi", action="store_true",
                   help="downgrade the Poisson check to a warning")
    common_numeric(p)
    p.set_defaults(func=cmd_star)

    p = sub.add_parser("verify", help="run a verifier suite")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--alpha")
    p.add_argument("--f")
    p.add_argument("--g")
    p.add_argument("--h")
    p.add_argument("-p", type=int, default=1, help="ip suite: which I_p")
    p.add_argument("--policy", type=float, default=3.0)
    p.add_argument("--skip-jacobi", action="store_true")
    common_numeric(p)
    p.set_defaults(func=cmd_verify)

    return top


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        return ns.func(ns)
    except EnumerationCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ParseError, ConfigError, DegreeMismatchError,
            DimensionMismatchError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
