"""Numerical verification of the approximation guarantees and identities.

Each check builds its own random instances from a fixed seed, runs the
relevant solver or rounding, and compares against an independent oracle
(enumeration, breakpoint integration, or a binomial confidence band).  The
checks return ``CheckResult`` objects; the CLI ``verify`` command and the
acceptance tests both consume them.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .core import Modular, check_symmetric, members
from .exact import (
    binomial_stderr,
    ckr_split_probability,
    exact_optimum,
    harmonic,
    lovasz_eval_reference,
    mean_stderr,
    run_trials,
    theta_expectation,
)
from .instances import (
    ORACLE_FAMILIES,
    check_distance_feasible,
    gen_ckr_tight_edge,
    gen_gap_example,
    hmc_optimum_by_edges,
    hmc_to_nwmc,
    map_x_to_distance,
    nwmc_optimum,
    nwmc_to_hmc,
    random_allocation,
    random_graph_mc,
    random_hmc,
    random_hmp,
    random_monotone_msca,
    random_nwmc,
    random_oracle,
    random_sublabel,
    random_submp,
    random_symmetric,
)
from .lovasz import edge_spread, lovasz_eval, objective
from .problems import MSCA, SubLabel, SubMP
from .relax import instance_lp, solve, solve_lp, solve_subgradient
from .rounding import (
    ROUNDERS,
    ckr_round,
    half_round,
    kt_round,
    sym_relabel_round,
    theta_round,
    uncross,
)
SIGMAS = 3.0


@dataclass
class CheckResult:
    name: str
    title: str
    passed: bool
    detail: str
    metrics: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.title} -- {self.detail}"

    def to_json(self) -> str:
        return json.dumps({"check": self.name, "passed": self.passed, "title": self.title,
                           "detail": self.detail, "metrics": self.metrics}, sort_keys=True)


def _sep_d(x, e):
    return float((x[e.rep] - x[list(e.verts)].min(axis=0)).sum())


def _split(labels, verts) -> bool:
    return len({int(labels[v]) for v in verts}) > 1


# ---------------------------------------------------------------------------
# identities


def check_extension_identity(pairs: int = 500, seed: int = 0, tol: float = 1e-9) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for t in range(pairs):
        n = int(rng.integers(1, 11))
        f = random_oracle(n, ORACLE_FAMILIES[t % len(ORACLE_FAMILIES)], rng)
        x = rng.random(n)
        if t % 2:
            x = np.round(x * 4) / 4  # ties, zeros and ones
        worst = max(worst, abs(lovasz_eval(f, x) - lovasz_eval_reference(f, x)))
    return CheckResult("extension-identity", "sorted-prefix extension equals theta integral",
                       worst <= tol, f"max |diff| = {worst:.2e} over {pairs} pairs (tol {tol:g})",
                       {"max_abs_diff": worst, "pairs": pairs})


def check_lp_identity(allocations: int = 100, seed: int = 0, tol: float = 1e-9) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = worst_viol = 0.0
    inst = None
    for t in range(allocations):
        if t % 5 == 0:
            make = random_hmp if (t // 5) % 2 == 0 else random_hmc
            n = int(rng.integers(4, 11))
            inst = make(n, int(rng.integers(2, 5)), int(rng.integers(3, 12)), min(4, n),
                        int(rng.integers(2**31)))
            hlp = instance_lp(inst)
        x = random_allocation(inst, rng, sparsity=0.3 * (t % 2))
        y = hlp.point(x)
        worst = max(worst, abs(hlp.lp.value(y) - objective(inst, x)))
        worst_viol = max(worst_viol, hlp.lp.max_violation(y))
    ok = worst <= tol and worst_viol <= tol
    return CheckResult("lp-identity", "compact LP value equals relaxation objective",
                       ok, f"max |diff| = {worst:.2e}, max row violation = {worst_viol:.2e} "
                       f"over {allocations} allocations", {"max_abs_diff": worst, "max_violation": worst_viol})


def _solver_allocations(seed: int, count: int):
    rng = np.random.default_rng(seed)
    for t in range(count):
        n = int(rng.integers(4, 10))
        s = int(rng.integers(2**31))
        inst = random_hmp(n, int(rng.integers(2, 5)), int(rng.integers(3, 10)), min(4, n), s) \
            if t % 2 == 0 else random_hmc(n, int(rng.integers(2, 5)), int(rng.integers(3, 10)), min(4, n), s)
        yield inst, solve_lp(inst).x
        yield inst, solve_subgradient(inst, iters=300, seed=s).x


def check_half_spread(instances: int = 10, seed: int = 0, tol: float = 1e-12) -> CheckResult:
    violations = checked = 0
    worst = -math.inf
    for inst, x in _solver_allocations(seed, instances):
        for e in inst.hypergraph.edges:
            spread = edge_spread(x, e.verts)
            gap = spread - spread.sum() / 2
            worst = max(worst, float(gap.max()))
            violations += int(np.sum(gap > tol))
            checked += spread.size
    return CheckResult("half-spread", "every label spread is at most half the edge distance",
                       violations == 0, f"{violations} violations in {checked} (edge, label) pairs; "
                       f"max d(e,i) - d(e)/2 = {worst:.2e}", {"violations": violations, "checked": checked})


def check_interval_sizes(instances: int = 20, seed: int = 0, tol: float = 1e-12) -> CheckResult:
    """Separation distance dominates the spreads of the labels where any vertex is maximal."""
    rng = np.random.default_rng(seed)
    violations = checked = 0
    for _ in range(instances):
        n = int(rng.integers(4, 10))
        inst = random_hmc(n, int(rng.integers(2, 5)), 8, min(4, n), int(rng.integers(2**31)))
        for x in (random_allocation(inst, rng), random_allocation(inst, rng, 0.4), solve_lp(inst).x):
            for e in inst.hypergraph.edges:
                rows = x[list(e.verts)]
                spread = rows.max(axis=0) - rows.min(axis=0)
                d = _sep_d(x, e)
                for r in rows:
                    at_max = r == rows.max(axis=0)
                    checked += 1
                    violations += int(spread[at_max].sum() > d + tol)
                violations += int(spread.max() > d + tol)
    return CheckResult("interval-sizes", "maximal-label spreads sum to at most the separation distance",
                       violations == 0, f"{violations} violations in {checked} (edge, vertex) checks",
                       {"violations": violations, "checked": checked})


def check_remainder_edges(instances: int = 20, seed: int = 0, tol: float = 1e-12) -> CheckResult:
    """Exact theta-integral of the chance an edge crosses the unthresholded remainder."""
    rng = np.random.default_rng(seed)
    violations = checked = 0
    for _ in range(instances):
        n = int(rng.integers(4, 10))
        inst = random_hmp(n, int(rng.integers(2, 5)), 8, min(4, n), int(rng.integers(2**31)))
        x = random_allocation(inst, rng, 0.3)
        for e in inst.hypergraph.edges:
            rows = x[list(e.verts)]

            def crosses(theta):
                rem = [not np.any(r >= theta) for r in rows]
                return float(any(rem) and not all(rem))

            p = theta_expectation(crosses, rows)
            spread = rows.max(axis=0) - rows.min(axis=0)
            istar = int(np.argmax(rows.max(axis=0)))
            checked += 1
            violations += int(p > spread[istar] + tol)
    return CheckResult("remainder-edge", "remainder crossing probability is at most d(e, i*)",
                       violations == 0, f"{violations} violations over {checked} edges (exact integration)",
                       {"violations": violations, "checked": checked})


# ---------------------------------------------------------------------------
# sampling checks


def check_theta_rounding(trials: int = 20000, seed: int = 0) -> CheckResult:
    rng = np.random.default_rng(seed)
    rows = []
    ok = True
    for fam in ORACLE_FAMILIES:
        n = int(rng.integers(2, 9))
        f = random_oracle(n, fam, rng)
        x = rng.random(n)
        table = f.table()
        vals = np.array([table[theta_round(x[:, None], 0, 1.0 - u)] for u in rng.random(trials)])
        mean, se = mean_stderr(vals)
        target = lovasz_eval(f, x)
        good = abs(mean - target) <= SIGMAS * se + 1e-12
        ok &= good
        rows.append(f"{fam} {mean:.4f}/{target:.4f}")
    return CheckResult("theta-rounding", "mean of f over random thresholds equals the extension",
                       ok, "; ".join(rows), {"trials": trials})


def kt_marginal_instance():
    x = np.array([[0.7, 0.3, 0.0], [0.2, 0.5, 0.3], [1 / 3, 1 / 3, 1 / 3], [0.1, 0.0, 0.9], [0.45, 0.45, 0.1]])
    inst = MSCA([Modular([1.0, 2.0, 0.0, 1.0, 3.0]), Modular([0.0, 1.0, 2.0, 2.0, 1.0]),
                 Modular([2.0, 0.0, 1.0, 0.0, 2.0])])
    return inst, x


def check_kt_marginals(trials: int = 20000, seed: int = 0) -> CheckResult:
    inst, x = kt_marginal_instance()
    labels = np.array([o.labels for o in run_trials(kt_round, inst, x, trials, seed)])
    freq = np.stack([(labels == i).mean(axis=0) for i in range(inst.k)], axis=1)
    sigma = np.sqrt(x * (1 - x) / trials)
    z = np.abs(freq - x) / np.where(sigma > 0, sigma, 1.0)
    exact_zero = np.all(freq[sigma == 0] == x[sigma == 0])
    bad = int(np.sum((np.abs(freq - x) > SIGMAS * sigma) & (sigma > 0))) + int(not exact_zero)
    return CheckResult("kt-marginals", "label frequencies match the allocation",
                       bad == 0, f"{bad} of {x.size} (v, i) frequencies outside 3 sigma; max |z| = {z.max():.2f}",
                       {"max_z": float(z.max()), "outside": bad, "trials": trials})


def _hmc_case(rng):
    n = int(rng.integers(5, 11))
    inst = random_hmc(n, int(rng.integers(2, 5)), int(rng.integers(4, 11)), 4, int(rng.integers(2**31)))
    return inst, random_allocation(inst, rng, sparsity=0.3)


def check_edge_probabilities(instances: int = 20, trials: int = 20000, seed: int = 0) -> CheckResult:
    rng = np.random.default_rng(seed)
    bad_half = bad_ckr = edges = 0
    worst = {"half": -math.inf, "ckr": -math.inf}
    for t in range(instances):
        inst, x = _hmc_case(rng)
        for name, rounder, factor in (("half", half_round, None), ("ckr", ckr_round, "H")):
            outs = run_trials(rounder, inst, x, trials, seed + 1000 * t)
            for e in inst.hypergraph.edges:
                p = float(np.mean([_split(o.labels, e.verts) for o in outs]))
                d = _sep_d(x, e)
                bound = 2 * d if factor is None else harmonic(len(e.verts)) * d
                slack = SIGMAS * binomial_stderr(p, trials)
                worst[name] = max(worst[name], p - bound - slack)
                if p > bound + slack + 1e-12:
                    if name == "half":
                        bad_half += 1
                    else:
                        bad_ckr += 1
        edges += len(inst.hypergraph.edges)
    ok = bad_half == 0 and bad_ckr == 0
    return CheckResult("edge-cut-probabilities", "per-edge cut probability under the 2 d(e) and H_|e| d(e) bounds",
                       ok, f"{edges} edges: {bad_half} over 2d(e), {bad_ckr} over H_|e| d(e) "
                       f"(max excess over bound+3sigma: {worst['half']:.4f}, {worst['ckr']:.4f})",
                       {"edges": edges, "half_violations": bad_half, "ckr_violations": bad_ckr})


def check_ckr_tightness(m: int = 3, eps: float = 0.1, trials: int = 20000, seed: int = 0) -> CheckResult:
    inst, x = gen_ckr_tight_edge(m, eps=eps)
    e = inst.hypergraph.edges[0]
    outs = run_trials(ckr_round, inst, x, trials, seed)
    p = float(np.mean([_split(o.labels, e.verts) for o in outs]))
    se = binomial_stderr(p, trials)
    target = harmonic(m) * eps
    exact = ckr_split_probability(x, e.verts)
    ok = p >= target - SIGMAS * se
    return CheckResult("ckr-tightness", f"cut probability of the tight edge reaches H_{m} * eps",
                       ok, f"empirical {p:.4f} (stderr {se:.4f}), exact {exact:.4f}, target {target:.4f}",
                       {"empirical": p, "stderr": se, "exact": exact, "target": target})


def check_sym_partition_ratio(instances: int = 20, trials: int = 4000, seed: int = 0) -> CheckResult:
    rng = np.random.default_rng(seed)
    bad = 0
    worst = 0.0
    for t in range(instances):
        n = int(rng.integers(5, 11))
        k = int(rng.integers(3, 5))
        inst = random_hmp(n, k, int(rng.integers(4, 12)), 4, int(rng.integers(2**31)))
        # the bound holds for any feasible x; odd instances use a random one
        if t % 2 == 0:
            x = solve_lp(inst).x
        else:
            x = random_allocation(inst, rng, sparsity=0.3)
        frac = objective(inst, x)
        outs = run_trials(sym_relabel_round, inst, x, trials, seed + 1000 * t)
        mean, se = mean_stderr([o.cost for o in outs])
        bound = (1.5 - 1 / k) * frac
        if frac > 0:
            worst = max(worst, mean / frac)
        if mean > bound + SIGMAS * se + 1e-9:
            bad += 1
    return CheckResult("sym-partition-ratio", "mean uncrossed cost within (1.5 - 1/k) of the fractional value",
                       bad == 0, f"{bad} of {instances} instances over bound; max mean/objective(x) = {worst:.4f}",
                       {"violations": bad, "max_ratio": worst})


def check_uncrossing(inputs: int = 1000, seed: int = 0, tol: float = 1e-9) -> CheckResult:
    rng = np.random.default_rng(seed)
    failures = {"subset": 0, "disjoint": 0, "union": 0, "cost": 0, "steps": 0}
    for t in range(inputs):
        n = int(rng.integers(1, 9))
        f = random_symmetric(n, int(rng.integers(2**31))) if n > 1 else random_oracle(1, "graph_cut", rng)
        sets = [int(rng.integers(1 << n)) for _ in range(int(rng.integers(1, 6)))]
        stats = {}
        out = uncross(f, sets, stats)
        failures["subset"] += any(o & ~a for o, a in zip(out, sets))
        failures["disjoint"] += any(out[i] & out[j] for i in range(len(out)) for j in range(i + 1, len(out)))
        u_in = u_out = 0
        for a, o in zip(sets, out):
            u_in |= a
            u_out |= o
        failures["union"] += u_in != u_out
        failures["cost"] += sum(f(o) for o in out) > sum(f(a) for a in sets) + tol
        failures["steps"] += stats["steps"] > sum(len(members(a)) for a in sets) ** 2
    ok = not any(failures.values())
    return CheckResult("uncrossing", "uncrossed sets are disjoint sub-sets with the same union and no higher cost",
                       ok, f"{inputs} inputs, failures {failures}", {"failures": failures})


def check_gap_example(k: int = 5, delta: int = 3, seed: int = 0) -> CheckResult:
    inst, x = gen_gap_example(k, delta)
    _, opt = exact_optimum(inst)
    frac = objective(inst, x)
    rep = solve(inst)
    want_opt = math.comb(k - 1, delta - 1)
    want_frac = math.comb(k, delta) / (k - 1)
    ratio = opt / rep.objective if rep.objective > 0 else math.inf
    want_ratio = delta * (1 - 1 / k) * 0.99
    parts = {
        "integral_ok": abs(opt - want_opt) <= 1e-9,
        "candidate_ok": abs(frac - want_frac) <= 1e-9,
        "solver_ok": rep.objective <= want_frac * 1.01,
        "ratio_ok": ratio >= want_ratio,
    }
    return CheckResult("gap-example", f"integrality gap instance k={k}, delta={delta}",
                       all(parts.values()),
                       f"OPT {opt:g} (want {want_opt}), candidate {frac:g} (want {want_frac:g}), "
                       f"solver {rep.objective:.6g} (want <= {want_frac * 1.01:.4g}), ratio {ratio:.4f} "
                       f"(want >= {want_ratio:.4f})",
                       {"opt": opt, "candidate": frac, "solver": rep.objective, "ratio": ratio, **parts})


def _rounders_for(inst):
    if isinstance(inst, SubMP):
        names = ["kt", "ckr", "half"]
        if inst.n <= 14 and check_symmetric(inst.f):
            names += ["sym", "sym-relabel"]
        return names
    if isinstance(inst, SubLabel):
        return ["kt", "sym-label"] if check_symmetric(inst.h) else ["kt"]
    return ["kt", "greedy"]


def sandwich_instances(count: int = 30, seed: int = 0):
    rng = np.random.default_rng(seed)
    makers = [
        lambda s: random_graph_mc(int(rng.integers(5, 9)), 3, 0.5, (1, 4), s),
        lambda s: random_hmp(int(rng.integers(5, 9)), 3, 6, 3, s),
        lambda s: random_hmc(int(rng.integers(5, 9)), 3, 6, 3, s),
        lambda s: random_submp(int(rng.integers(5, 8)), 3, s),
        lambda s: random_sublabel(int(rng.integers(4, 8)), 3, 5, 3, s, h=("separation", "cut")[s % 2],
                                  g=("modular", "facility")[(s // 2) % 2]),
        lambda s: random_monotone_msca(int(rng.integers(4, 8)), 3, s),
    ]
    for t in range(count):
        yield makers[t % len(makers)](int(rng.integers(2**31)))


def check_sandwich(count: int = 30, seeds: int = 10, seed: int = 0, tol: float = 1e-7) -> CheckResult:
    bad = []
    for t, inst in enumerate(sandwich_instances(count, seed)):
        rep = solve(inst)
        _, opt = exact_optimum(inst)
        if rep.objective > opt + tol:
            bad.append(f"{inst.kind}#{t}: frac {rep.objective:.6g} > OPT {opt:.6g}")
        for name in _rounders_for(inst):
            for s in range(seeds):
                c = ROUNDERS[name](inst, rep.x, seed + s).cost
                if c < opt - tol:
                    bad.append(f"{inst.kind}#{t}: {name} cost {c:.6g} < OPT {opt:.6g}")
    return CheckResult("sandwich", "fractional optimum <= integral optimum <= every rounding",
                       not bad, f"{count} instances, {len(bad)} violations" + (f": {bad[:3]}" if bad else ""),
                       {"violations": len(bad)})


def check_reductions(instances: int = 20, allocations: int = 200, seed: int = 0, tol: float = 1e-9) -> CheckResult:
    rng = np.random.default_rng(seed)
    mismatches = []
    for t in range(instances):
        n = int(rng.integers(3, 7))
        k = int(rng.integers(2, min(3, n) + 1))
        inst = random_hmc(n, k, int(rng.integers(1, 7)), min(3, n), int(rng.integers(2**31)))
        a = exact_optimum(inst)[1]
        b = nwmc_optimum(hmc_to_nwmc(inst.hypergraph, inst.terminals))[1]
        if abs(a - b) > tol:
            mismatches.append(f"hmc#{t}: {a} vs {b}")
        g = random_nwmc(n, k, 0.5, int(rng.integers(2**31)))
        while not g.separates({v for v in range(g.n) if not g.undeletable[v]}):
            g = random_nwmc(n, k, 0.5, int(rng.integers(2**31)))
        hyper, terms = nwmc_to_hmc(g)
        a = nwmc_optimum(g)[1]
        b = hmc_optimum_by_edges(hyper, terms)
        if abs(a - b) > tol:
            mismatches.append(f"nwmc#{t}: {a} vs {b}")
    infeasible = cost_bad = 0
    for t in range(allocations):
        if t % 10 == 0:
            n = int(rng.integers(4, 10))
            inst = random_hmc(n, int(rng.integers(2, 5)), int(rng.integers(3, 10)), min(4, n),
                              int(rng.integers(2**31)))
            g = hmc_to_nwmc(inst.hypergraph, inst.terminals)
        x = random_allocation(inst, rng, sparsity=0.3 * (t % 2))
        d = map_x_to_distance(inst.hypergraph, inst.terminals, x)
        infeasible += not check_distance_feasible(g, d)
        cost_bad += d.cost(g) > objective(inst, x) + tol
    ok = not mismatches and infeasible == 0 and cost_bad == 0
    return CheckResult("reductions", "reduction optima agree and mapped distances are feasible",
                       ok, f"{2 * instances} optimum comparisons, {len(mismatches)} mismatches; "
                       f"{allocations} allocations, {infeasible} infeasible, {cost_bad} over cost",
                       {"mismatches": mismatches, "infeasible": infeasible, "cost_over": cost_bad})


def check_greedy_bound(instances: int = 20, seed: int = 0, tol: float = 1e-9) -> CheckResult:
    rng = np.random.default_rng(seed)
    bad = 0
    worst = 0.0
    for _ in range(instances):
        n = int(rng.integers(3, 10))
        inst = random_monotone_msca(n, int(rng.integers(2, 5)), int(rng.integers(2**31)))
        rep = solve(inst)
        cost = ROUNDERS["greedy"](inst, rep.x).cost
        bound = harmonic(n) * rep.objective
        if rep.objective > 0:
            worst = max(worst, cost / rep.objective)
        bad += cost > bound + tol * max(1.0, bound)
    return CheckResult("greedy-bound", "greedy cost within H_n of the fractional optimum",
                       bad == 0, f"{bad} of {instances} over bound; max cost/OPT_frac = {worst:.4f}",
                       {"violations": bad, "max_ratio": worst})


def check_kt_split(instances: int = 10, trials: int = 10000, seed: int = 0) -> CheckResult:
    rng = np.random.default_rng(seed)
    bad = edges = 0
    worst = -math.inf
    for t in range(instances):
        n = int(rng.integers(5, 11))
        inst = random_sublabel(n, int(rng.integers(2, 5)), int(rng.integers(4, 10)), 4,
                               int(rng.integers(2**31)))
        x = random_allocation(inst, rng, sparsity=0.3)
        delta = inst.hypergraph.max_edge_size
        outs = run_trials(kt_round, inst, x, trials, seed + 1000 * t)
        for e in inst.hypergraph.edges:
            p = float(np.mean([_split(o.assigned_at, e.verts) for o in outs]))
            bound = delta * _sep_d(x, e)
            slack = SIGMAS * binomial_stderr(p, trials)
            worst = max(worst, p - bound - slack)
            bad += p > bound + slack + 1e-12
            edges += 1
    return CheckResult("kt-split", "per-edge split probability within Delta d(e)",
                       bad == 0, f"{bad} of {edges} edges over bound; max excess {worst:.4f}",
                       {"violations": bad, "edges": edges})


# ---------------------------------------------------------------------------
# suites

CHECKS = {
    "extension-identity": check_extension_identity,
    "lp-identity": check_lp_identity,
    "half-spread": check_half_spread,
    "theta-rounding": check_theta_rounding,
    "kt-marginals": check_kt_marginals,
    "edge-cut-probabilities": check_edge_probabilities,
    "ckr-tightness": check_ckr_tightness,
    "sym-partition-ratio": check_sym_partition_ratio,
    "uncrossing": check_uncrossing,
    "gap-example": check_gap_example,
    "sandwich": check_sandwich,
    "reductions": check_reductions,
    "greedy-bound": check_greedy_bound,
    "kt-split": check_kt_split,
    "interval-sizes": check_interval_sizes,
    "remainder-edge": check_remainder_edges,
}

SUITES = {
    "lemmas": ["extension-identity", "lp-identity", "half-spread", "interval-sizes", "remainder-edge",
               "uncrossing", "reductions"],
    "bounds": ["theta-rounding", "kt-marginals", "edge-cut-probabilities", "sym-partition-ratio",
               "sandwich", "greedy-bound", "kt-split"],
    "gap": ["gap-example", "ckr-tightness"],
}
SUITES["all"] = list(CHECKS)


def run_suite(name: str, seed: int = 0):
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    for key in SUITES[name]:
        yield CHECKS[key](seed=seed)
