"""Command-line harness: solve relaxations, round them, enumerate optima, run checks.

Exit codes: 0 success, 1 a verification check failed, 2 usage or input
error, 3 infeasible input, 4 instance too large to enumerate.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time

import numpy as np

from . import __version__
from .exact import exact_optimum, mean_stderr
from .instances import (
    allocation_from_dict,
    allocation_to_dict,
    dumps_instance,
    gen_ckr_tight_edge,
    gen_gap_example,
    instance_hash,
    loads_instance,
    random_graph_mc,
    random_hmc,
    random_hmp,
    random_monotone_msca,
    random_sublabel,
    star_instance,
)
from .lovasz import objective
from .problems import InfeasibleError, TooLargeError
from .relax import instance_lp, solve
from .rounding import ROUNDERS
from .verify import SUITES, run_suite

EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3
EXIT_TOO_LARGE = 4

RATIO_ENUM_LIMIT = 2_000_000


class UsageError(Exception):
    pass


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _load_instance(path):
    try:
        return loads_instance(json.dumps(_read_json(path)))
    except (KeyError, TypeError) as exc:
        raise UsageError(f"malformed instance file {path}: {exc}") from exc


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _provenance(args, instance) -> dict:
    return {"seed": args.seed, "instance_hash": instance_hash(instance), "version": __version__}


# ---------------------------------------------------------------------------
# commands


def cmd_solve(args) -> int:
    inst = _load_instance(args.instance)
    kw = {}
    if args.method == "subgradient":
        kw = {"iters": args.iters, "seed": args.seed}
    start = time.perf_counter()
    try:
        rep = solve(inst, args.method, **kw)
    except TypeError as exc:
        raise UsageError(str(exc)) from exc
    wall = time.perf_counter() - start
    if args.dump_lp:
        try:
            _write(args.dump_lp, instance_lp(inst).lp.dump())
        except TypeError as exc:
            raise UsageError(str(exc)) from exc
    row = {"objective": rep.objective, "iterations": rep.iterations, "status": rep.status,
           "method": rep.method, "wall_time": round(wall, 6), **_provenance(args, inst)}
    if rep.lower_bound is not None:
        row["lower_bound"] = rep.lower_bound
    if args.out:
        alloc = allocation_to_dict(rep.x, inst, seed=args.seed, method=rep.method,
                                   objective=rep.objective, tool_version=__version__)
        _write(args.out, json.dumps(alloc) + "\n")
    _emit_rows([row], args.format)
    return 0


def _emit_rows(rows, fmt, stream=None):
    stream = stream or sys.stdout
    if fmt == "json":
        for r in rows:
            stream.write(json.dumps(r, sort_keys=True) + "\n")
        return
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    stream.write(buf.getvalue())


def cmd_round(args) -> int:
    inst = _load_instance(args.instance)
    x = allocation_from_dict(_read_json(args.allocation))
    x = inst.check_allocation(x, args.tol)
    rounder = ROUNDERS[args.algorithm]
    costs = []
    trace_fh = open(args.trace, "w") if args.trace else None
    try:
        for t in range(args.trials):
            try:
                out = rounder(inst, x, np.random.default_rng(args.seed + t))
            except TypeError as exc:
                raise UsageError(f"algorithm {args.algorithm!r} does not apply: {exc}") from exc
            costs.append(out.cost)
            if trace_fh:
                for rec in out.trace:
                    trace_fh.write(json.dumps({"trial": t, **rec}) + "\n")
    finally:
        if trace_fh:
            trace_fh.close()
    frac = objective(inst, x, args.tol)
    summary = {"algorithm": args.algorithm, "trials": args.trials, "objective_x": frac,
               "min": min(costs), "max": max(costs), **_provenance(args, inst)}
    if args.trials >= 2:
        summary["mean"], summary["stderr"] = mean_stderr(costs)
    else:
        summary["mean"], summary["stderr"] = costs[0], 0.0
    if args.opt_frac is not None:
        basis, ref = "supplied", args.opt_frac
    else:
        try:
            basis, ref = "exact", exact_optimum(inst, limit=RATIO_ENUM_LIMIT)[1]
        except TooLargeError:
            basis, ref = "fractional", frac
    summary["ratio_basis"] = basis
    summary["reference"] = ref
    summary["ratio"] = summary["mean"] / ref if ref > 0 else None
    rows = [{"trial": t, "seed": args.seed + t, "cost": c} for t, c in enumerate(costs)]
    if args.format == "csv":
        if args.out:
            with open(args.out, "w") as fh:
                _emit_rows(rows, "csv", fh)
            sys.stdout.write(json.dumps(summary, sort_keys=True) + "\n")
        else:
            _emit_rows(rows, "csv")
            sys.stderr.write(json.dumps(summary, sort_keys=True) + "\n")
    else:
        payload = {"summary": summary, "trials": rows}
        _write(args.out, json.dumps(payload) + "\n")
    return 0


def cmd_exact(args) -> int:
    inst = _load_instance(args.instance)
    labels, opt = exact_optimum(inst)
    report = {"opt": opt, "labels": labels.tolist(), **_provenance(args, inst)}
    if args.allocation:
        x = allocation_from_dict(_read_json(args.allocation))
        frac = objective(inst, x, args.tol)
        report["opt_frac"] = frac
        report["sandwich_ok"] = bool(frac <= opt + args.tol)
    _emit_rows([report], "json")
    return 0


def cmd_verify(args) -> int:
    ok = True
    for res in run_suite(args.suite, seed=args.seed):
        ok &= res.passed
        sys.stdout.write(res.to_json() + "\n")
        sys.stdout.flush()
        if args.verbose:
            sys.stderr.write(res.line() + "\n")
    return 0 if ok else EXIT_CHECK_FAILED


def cmd_gen(args) -> int:
    s = args.seed
    x = None
    if args.kind == "graph-mc":
        inst = random_graph_mc(args.n, args.k, args.density, (1, args.max_weight), s)
    elif args.kind == "hypergraph-mp":
        inst = random_hmp(args.n, args.k, args.m, args.delta, s, (1, args.max_weight))
    elif args.kind == "hypergraph-mc":
        inst = random_hmc(args.n, args.k, args.m, args.delta, s, (1, args.max_weight))
    elif args.kind == "sublabel":
        inst = random_sublabel(args.n, args.k, args.m, args.delta, s)
    elif args.kind == "msca":
        inst = random_monotone_msca(args.n, args.k, s)
    elif args.kind == "star":
        inst = star_instance("graph_mc", args.k)
    elif args.kind == "gap":
        inst, x = gen_gap_example(args.k, args.delta)
    elif args.kind == "ckr-tight":
        inst, x = gen_ckr_tight_edge(args.m, args.k, args.eps)
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(args.kind)
    _write(args.out, dumps_instance(inst) + "\n")
    if x is not None and args.allocation_out:
        alloc = allocation_to_dict(x, inst, seed=s, method="construction", tool_version=__version__)
        _write(args.allocation_out, json.dumps(alloc) + "\n")
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="base random seed (default 0)")
    common.add_argument("--tol", type=float, default=1e-9, help="feasibility tolerance")

    p = argparse.ArgumentParser(prog="msca", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("solve", parents=[common], help="compute a fractional optimum")
    q.add_argument("instance")
    q.add_argument("--method", choices=["auto", "lp", "cutting-plane", "subgradient"], default="auto")
    q.add_argument("--iters", type=int, default=5000, help="subgradient iteration limit")
    q.add_argument("--out", help="write the allocation JSON here")
    q.add_argument("--dump-lp", help="write the compact LP as a plain-text tableau")
    q.add_argument("--format", choices=["json", "csv"], default="json")
    q.set_defaults(func=cmd_solve)

    q = sub.add_parser("round", parents=[common], help="round an allocation repeatedly")
    q.add_argument("instance")
    q.add_argument("allocation")
    q.add_argument("--algorithm", choices=sorted(ROUNDERS), required=True)
    q.add_argument("--trials", type=int, default=10000)
    q.add_argument("--opt-frac", type=float, help="reference value for the reported ratio")
    q.add_argument("--out", help="CSV (or JSON) output path")
    q.add_argument("--trace", help="write per-iteration JSON lines here")
    q.add_argument("--format", choices=["csv", "json"], default="csv")
    q.set_defaults(func=cmd_round)

    q = sub.add_parser("exact", parents=[common], help="enumerate the integral optimum")
    q.add_argument("instance")
    q.add_argument("--allocation", help="also report the fractional value of this allocation")
    q.set_defaults(func=cmd_exact)

    q = sub.add_parser("verify", parents=[common], help="run a verification suite")
    q.add_argument("suite", choices=sorted(SUITES))
    q.add_argument("-v", "--verbose", action="store_true", help="human-readable lines on stderr")
    q.set_defaults(func=cmd_verify)

    q = sub.add_parser("gen", parents=[common], help="generate an instance file")
    q.add_argument("kind", choices=["graph-mc", "hypergraph-mp", "hypergraph-mc", "sublabel", "msca",
                                    "star", "gap", "ckr-tight"])
    q.add_argument("--n", type=int, default=8)
    q.add_argument("--k", type=int, default=3)
    q.add_argument("--m", type=int, default=6, help="edge count (edge size for ckr-tight)")
    q.add_argument("--delta", type=int, default=3)
    q.add_argument("--density", type=float, default=0.5)
    q.add_argument("--max-weight", type=int, default=4)
    q.add_argument("--eps", type=float, default=0.1)
    q.add_argument("--out", help="instance path (default stdout)")
    q.add_argument("--allocation-out", help="for gap and ckr-tight, write the built-in allocation")
    q.set_defaults(func=cmd_gen)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "trials", 1) is not None and getattr(args, "trials", 1) < 1:
        parser.error("--trials must be positive")
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except InfeasibleError as exc:
        sys.stderr.write(f"infeasible: {exc}\n")
        return EXIT_INFEASIBLE
    except TooLargeError as exc:
        sys.stderr.write(f"too large: {exc}\n")
        return EXIT_TOO_LARGE
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
