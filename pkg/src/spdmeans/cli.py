"""Command-line front end.

Subcommands: ``gen``, ``mean``, ``dist``, ``walk``, ``axioms``, ``bench``.
Matrices travel as JSON documents ``{"matrices": [...], "weights": [...]}``;
step-indexed traces are written as CSV.

Exit codes: 0 success, 1 input error, 2 solver failure, 3 a property
check failed (``axioms`` only).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from .barycenter import DiscreteMeasure, contractivity_check, wasserstein
from .binary import arithmetic_mean, geometric_mean, harmonic_mean
from .config import PropertyCheck, SolverConfig, format_checks
from .linalg import ConvergenceError, NotPositiveDefiniteError, SpdMatrix, expm, loewner_leq, sym
from .means import (
    Weight,
    alm_mean,
    as_weight,
    check_alm_axioms,
    inductive_mean,
    karcher_mean,
    karcher_via_power_limit,
    power_mean,
    weighted_arithmetic,
    weighted_harmonic,
    yamazaki_check,
)
from .metrics import MetricTag, distance, npc_check, weighted_geometric
from .sampling import random_spd, random_tuple, random_weight
from .stochastic import deterministic_walk, sturm_walk

EXIT_OK, EXIT_INPUT, EXIT_SOLVER, EXIT_CHECK = 0, 1, 2, 3


class InputError(ValueError):
    pass


@dataclass
class InputDocument:
    matrices: list
    weights: Weight
    metadata: dict = field(default_factory=dict)

    @property
    def dim(self):
        return self.matrices[0].dim


def parse_document(doc):
    """Validate a decoded JSON object as an :class:`InputDocument`."""
    if not isinstance(doc, dict) or "matrices" not in doc:
        raise InputError('input must be an object with a "matrices" list')
    raw = doc["matrices"]
    if not isinstance(raw, list) or not raw:
        raise InputError('"matrices" must be a non-empty list')
    mats = []
    for i, m in enumerate(raw):
        try:
            arr = np.array(m, dtype=float)
        except (TypeError, ValueError) as exc:
            raise InputError(f"matrix {i}: not a numeric array ({exc})") from None
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise InputError(f"matrix {i}: not square (shape {arr.shape})")
        try:
            mats.append(SpdMatrix(arr))
        except NotPositiveDefiniteError as exc:
            raise InputError(
                f"matrix {i}: not positive definite, eigenvalue {exc.eigenvalue:.17g} <= 0"
            ) from None
        except ValueError as exc:
            raise InputError(f"matrix {i}: {exc}") from None
    if len({m.dim for m in mats}) != 1:
        raise InputError("matrices have different dimensions")
    try:
        weights = as_weight(doc.get("weights"), len(mats))
    except (TypeError, ValueError) as exc:
        raise InputError(f"weights: {exc}") from None
    meta = doc.get("metadata") or {}
    return InputDocument(mats, weights, meta)


def parse_input(source):
    """Read an input document from a path, ``"-"`` for stdin, or an open file."""
    try:
        if hasattr(source, "read"):
            doc = json.load(source)
        elif source == "-":
            doc = json.load(sys.stdin)
        else:
            with open(source, encoding="utf-8") as fh:
                doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from None
    except OSError as exc:
        raise InputError(str(exc)) from None
    return parse_document(doc)


def _matrix(x):
    return np.asarray(x).tolist()


def _dump(obj, out):
    out.write(json.dumps(obj))
    out.write("\n")


def _cfg(args):
    try:
        return SolverConfig(tol=args.tol, max_iter=args.max_iter, damping=args.damping)
    except ValueError as exc:
        raise InputError(str(exc)) from None


# ---------------------------------------------------------------------------
# subcommands


def cmd_gen(args, out):
    if args.dim < 1 or args.count < 1:
        raise InputError("--dim and --count must be positive")
    rng = np.random.default_rng(args.seed)
    mats = [random_spd(rng, args.dim, args.spread) for _ in range(args.count)]
    _dump(
        {
            "matrices": [_matrix(m) for m in mats],
            "metadata": {"seed": args.seed, "dim": args.dim, "spread": args.spread},
        },
        out,
    )
    return EXIT_OK


def cmd_mean(args, out):
    doc = parse_input(args.input)
    cfg = _cfg(args)
    pts, w = doc.matrices, doc.weights
    diag = {"kind": args.kind, "iterations": 0, "residual": 0.0}
    if args.kind == "arithmetic":
        x = weighted_arithmetic(pts, w)
    elif args.kind == "harmonic":
        x = weighted_harmonic(pts, w)
    elif args.kind == "geometric":
        if len(pts) != 2:
            raise InputError("geometric mean needs exactly two matrices")
        x = weighted_geometric(pts[0], pts[1], w[1])
    elif args.kind == "inductive":
        x = inductive_mean(pts, w)
    elif args.kind == "alm":
        if not w.is_uniform:
            raise InputError("the ALM mean takes no weights")
        res = alm_mean(pts, cfg, full_output=True)
        x, diag["iterations"], diag["residual"] = res.point, res.iterations, res.residual
    elif args.kind == "power":
        if args.t is None:
            raise InputError("--t is required for the power mean")
        if not 0 < args.t <= 1:
            raise InputError("--t must lie in (0, 1]")
        res = power_mean(pts, args.t, w, cfg, full_output=True)
        x, diag["iterations"], diag["residual"] = res.point, res.iterations, res.residual
        diag["t"] = args.t
    else:
        res = karcher_mean(pts, w, cfg, full_output=True)
        x, diag["iterations"], diag["residual"] = res.point, res.iterations, res.residual
    _dump({"result": _matrix(x), "diagnostics": diag}, out)
    return EXIT_OK


def cmd_dist(args, out):
    doc = parse_input(args.input)
    other = parse_input(args.other) if args.other else None
    if args.metric == "wasserstein":
        if other is None:
            raise InputError("wasserstein needs a second measure (--other)")
        mu = DiscreteMeasure(tuple(doc.matrices), tuple(doc.weights))
        nu = DiscreteMeasure(tuple(other.matrices), tuple(other.weights))
        try:
            d = wasserstein(mu, nu)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        _dump({"result": d, "diagnostics": {"metric": args.metric}}, out)
        return EXIT_OK
    cols = other.matrices if other else doc.matrices
    if cols[0].dim != doc.dim:
        raise InputError("documents have different dimensions")
    table = [[distance(a, b, args.metric) for b in cols] for a in doc.matrices]
    _dump({"result": table, "diagnostics": {"metric": args.metric}}, out)
    return EXIT_OK


def cmd_walk(args, out):
    doc = parse_input(args.input)
    if args.steps < 1 or args.every < 1:
        raise InputError("--steps and --every must be positive")
    target = karcher_mean(doc.matrices, doc.weights, _cfg(args)) if args.target else None
    checkpoints = list(range(args.every, args.steps + 1, args.every))
    if not checkpoints or checkpoints[-1] != args.steps:
        checkpoints.append(args.steps)
    if args.deterministic:
        try:
            trace = deterministic_walk(doc.matrices, args.steps, doc.weights, checkpoints, target)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    else:
        trace = sturm_walk(doc.matrices, args.steps, args.seed, doc.weights, checkpoints, target)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(trace.header())
    writer.writerows(trace.to_rows())
    return EXIT_OK


def _merge(rows):
    """Collapse per-trial checks into one row per check name, in first-seen order."""
    merged = {}
    for c in rows:
        prev = merged.get(c.name)
        if prev is None:
            merged[c.name] = c
        else:
            merged[c.name] = PropertyCheck(
                c.name, max(prev.residual, c.residual), prev.passed and c.passed
            )
    return list(merged.values())


def run_axiom_suite(mean, seed, trials, dims=(2, 3), sizes=(3, 4), cfg=None):
    """Property checks over ``trials`` seeded random instances.

    Trial ``i`` uses dimension ``dims[i % len(dims)]`` and tuple size
    ``sizes[(i // len(dims)) % len(sizes)]``. Besides the ten axioms, each
    trial checks the semiparallelogram law, the AGM chain, the Yamazaki
    implication on a premise-true tuple, and barycenter contractivity.
    """
    cfg = cfg or SolverConfig()
    rows = []
    for i in range(trials):
        rng = np.random.default_rng([seed, i])
        dim = dims[i % len(dims)]
        n = sizes[(i // len(dims)) % len(sizes)]
        pts = random_tuple(rng, n, dim)
        w = None if mean == "alm" else random_weight(rng, n)
        rows += check_alm_axioms(pts, w, mean, cfg, seed=int(rng.integers(2**32)))

        x1, x2, x = random_tuple(rng, 3, dim)
        res = npc_check(x1, x2, x)
        rows.append(PropertyCheck("NPC semiparallelogram law", max(0.0, res.lhs - res.rhs), res.holds))

        a, b = pts[0], pts[1]
        g = geometric_mean(a, b)
        h, ar = harmonic_mean(a, b), arithmetic_mean(a, b)
        margin = min(np.linalg.eigvalsh(g.array - h.array)[0],
                     np.linalg.eigvalsh(ar.array - g.array)[0])
        ok = loewner_leq(h.array, g.array, 1e-9) and loewner_leq(g.array, ar.array, 1e-9)
        rows.append(PropertyCheck("AGM inequality", max(0.0, -margin), ok))

        wk = as_weight(w, n)
        shift = sum(wi * p.log() for wi, p in zip(wk, pts))
        shifted = [expm(sym(p.log() - shift)) for p in pts]
        y = yamazaki_check(shifted, wk, cfg)
        rows.append(PropertyCheck("Yamazaki implication", 0.0 if not y.violated else 1.0, not y.violated))

        mu = DiscreteMeasure.uniform(random_tuple(rng, int(rng.integers(1, 6)), dim))
        nu = DiscreteMeasure.uniform(random_tuple(rng, int(rng.integers(1, 6)), dim))
        c = contractivity_check(mu, nu, cfg)
        rows.append(PropertyCheck("barycenter contractivity", max(0.0, c.lhs - c.rhs), c.holds))
    return _merge(rows)


def cmd_axioms(args, out):
    if args.trials < 1:
        raise InputError("--trials must be positive")
    checks = run_axiom_suite(args.mean, args.seed, args.trials, args.dims, args.sizes, _cfg(args))
    out.write(format_checks(checks))
    out.write("\n")
    return EXIT_OK if all(c.passed for c in checks) else EXIT_CHECK


def cmd_bench(args, out):
    doc = parse_input(args.input)
    try:
        _, trace = karcher_via_power_limit(doc.matrices, args.schedule, doc.weights, _cfg(args))
    except ValueError as exc:
        raise InputError(str(exc)) from None
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["t", "gap"])
    writer.writerows(trace)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _floats(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")


def _ints(text):
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {text!r}")


def build_parser():
    p = _Parser(prog="spdmeans", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def solver_flags(sp, max_iter=500):
        sp.add_argument("--tol", type=float, default=1e-10)
        sp.add_argument("--max-iter", type=int, default=max_iter)
        sp.add_argument("--damping", type=float, default=1.0)

    def input_flag(sp):
        sp.add_argument("--input", default="-", help="JSON document (default: stdin)")

    g = sub.add_parser("gen", help="emit random SPD matrices exp(spread * G)")
    g.add_argument("--dim", type=int, required=True)
    g.add_argument("--count", type=int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--spread", type=float, default=0.5)
    g.set_defaults(func=cmd_gen)

    m = sub.add_parser("mean", help="compute a mean of the input matrices")
    m.add_argument("--kind", required=True, choices=[
        "arithmetic", "harmonic", "geometric", "alm", "inductive", "power", "karcher"])
    m.add_argument("--t", type=float)
    input_flag(m)
    solver_flags(m)
    m.set_defaults(func=cmd_mean)

    d = sub.add_parser("dist", help="pairwise distances, or Wasserstein distance of two measures")
    d.add_argument("--metric", required=True, choices=[t.value for t in MetricTag] + ["wasserstein"])
    d.add_argument("--other", help="second JSON document")
    input_flag(d)
    d.set_defaults(func=cmd_dist)

    w = sub.add_parser("walk", help="inductive-mean walk trace as CSV")
    w.add_argument("--steps", type=int, required=True)
    w.add_argument("--seed", type=int, required=True)
    w.add_argument("--deterministic", action="store_true")
    w.add_argument("--target", choices=["karcher"])
    w.add_argument("--every", type=int, default=1, help="checkpoint spacing")
    input_flag(w)
    solver_flags(w)
    w.set_defaults(func=cmd_walk)

    a = sub.add_parser("axioms", help="run the property suite on seeded random inputs")
    a.add_argument("--mean", required=True, choices=["alm", "karcher"])
    a.add_argument("--seed", type=int, required=True)
    a.add_argument("--trials", type=int, default=20)
    a.add_argument("--dims", type=_ints, default=(2, 3))
    a.add_argument("--sizes", type=_ints, default=(3, 4))
    solver_flags(a)
    a.set_defaults(func=cmd_axioms)

    b = sub.add_parser("bench", help="power-mean limit trace (t, gap) as CSV")
    b.add_argument("--schedule", type=_floats, required=True)
    input_flag(b)
    solver_flags(b, max_iter=20000)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except InputError as exc:
        _dump({"error": {"type": "input", "message": str(exc)}}, out)
        return EXIT_INPUT
    except ConvergenceError as exc:
        _dump({"error": {"type": "solver", "message": str(exc),
                         "residual": exc.residual, "iterations": exc.iterations}}, out)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
