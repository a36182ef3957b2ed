"""Fractional solvers for the Lovász-extension relaxation.

Three routes:

* ``solve_lp``: exact compact LPs for hypergraph objectives (partition and
  separation forms, optionally with modular assignment costs).
* ``solve_cutting_plane``: Kelley cutting planes on greedy subgradients.  The
  extension of a set function is a maximum of finitely many linear pieces, so
  this terminates with the exact optimum for any oracle.
* ``solve_subgradient``: projected subgradient descent, the cheap general
  fallback.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..core import HypergraphCut, HypergraphSeparation, Modular, WeightedHypergraph
from ..lovasz import lovasz_eval, lovasz_subgradient
from ..problems import Instance, InfeasibleError
from .lp import LinearProgram, LPBuilder, simplex_solve


@dataclass
class SolverReport:
    x: np.ndarray
    objective: float
    iterations: int
    status: str  # optimal | tolerance-reached | iteration-limit
    method: str = ""
    lower_bound: float | None = None
    history: list[float] = field(default_factory=list, repr=False)


# ---------------------------------------------------------------------------
# hypergraph LPs


class HypergraphLP:
    """Compact LP for a hypergraph objective plus the map between LP columns and x.

    ``mode="partition"`` charges ``w(e) * sum_i (hi(e,i) - lo(e,i))``;
    ``mode="separation"`` charges ``w(e) * sum_i (x(r(e), i) - lo(e,i))``.
    ``lo``/``hi`` are auxiliary columns squeezed by ``lo <= x(v,i) <= hi`` for
    v in e; at an optimum they sit at the min/max.  Pinned and forbidden
    entries are substituted as constants instead of being constrained.
    """

    def __init__(self, h: WeightedHypergraph, allowed: np.ndarray, mode: str, costs=None):
        if mode not in ("partition", "separation"):
            raise ValueError("mode must be 'partition' or 'separation'")
        allowed = np.asarray(allowed, dtype=bool)
        n, k = allowed.shape
        if n != h.n:
            raise ValueError("allowed mask does not match hypergraph")
        self.hypergraph = h
        self.mode = mode
        self.n, self.k = n, k
        self.allowed = allowed
        b = LPBuilder()
        # x(v, i) is either a column index or a fixed float
        self.entry: dict[tuple[int, int], int | float] = {}
        for v in range(n):
            labels = np.flatnonzero(allowed[v])
            if labels.size == 0:
                raise InfeasibleError(f"element {v} has no allowed label")
            for i in range(k):
                if not allowed[v, i]:
                    self.entry[v, i] = 0.0
                elif labels.size == 1:
                    self.entry[v, i] = 1.0
                else:
                    self.entry[v, i] = b.add_var(f"x[{v},{i}]", lo=0.0, hi=None)
            if labels.size > 1:
                b.add_row({self.entry[v, i]: 1.0 for i in labels}, "=", 1.0, f"row[{v}]")

        def add_obj(v, i, amount):
            ent = self.entry[v, i]
            if isinstance(ent, int):
                b.add_cost(ent, amount)
            else:
                b.constant += amount * ent

        if costs is not None:
            costs = np.asarray(costs, dtype=float)
            for v in range(n):
                for i in range(k):
                    if allowed[v, i] and costs[v, i]:
                        add_obj(v, i, costs[v, i])

        for ei, e in enumerate(h.edges):
            if e.weight == 0 or len(e.verts) < 2:
                continue
            for i in range(k):
                lo = b.add_var(f"lo[{ei},{i}]", cost=-e.weight)
                hi = None
                if mode == "partition":
                    hi = b.add_var(f"hi[{ei},{i}]", cost=e.weight)
                else:
                    add_obj(e.rep, i, e.weight)
                for v in e.verts:
                    ent = self.entry[v, i]
                    if isinstance(ent, int):
                        b.add_row({lo: 1.0, ent: -1.0}, "<=", 0.0, f"lo[{ei},{i}]<=x[{v}]")
                        if hi is not None:
                            b.add_row({hi: 1.0, ent: -1.0}, ">=", 0.0, f"hi[{ei},{i}]>=x[{v}]")
                    else:
                        b.add_row({lo: 1.0}, "<=", ent, f"lo[{ei},{i}]<=x[{v}]")
                        if hi is not None:
                            b.add_row({hi: 1.0}, ">=", ent, f"hi[{ei},{i}]>=x[{v}]")
        self.lp: LinearProgram = b.build()
        self._builder = b

    def allocation(self, y) -> np.ndarray:
        x = np.zeros((self.n, self.k))
        for (v, i), ent in self.entry.items():
            x[v, i] = y[ent] if isinstance(ent, int) else ent
        x = np.clip(x, 0.0, 1.0)
        return x / x.sum(axis=1, keepdims=True)

    def point(self, x) -> np.ndarray:
        """LP column vector for allocation ``x`` with lo/hi at the edge min/max."""
        x = np.asarray(x, dtype=float)
        y = np.zeros(self.lp.num_vars)
        for (v, i), ent in self.entry.items():
            if isinstance(ent, int):
                y[ent] = x[v, i]
        for ei, e in enumerate(self.hypergraph.edges):
            if e.weight == 0 or len(e.verts) < 2:
                continue
            rows = x[list(e.verts)]
            for i in range(self.k):
                y[self._builder.var(f"lo[{ei},{i}]")] = rows[:, i].min()
                if self.mode == "partition":
                    y[self._builder.var(f"hi[{ei},{i}]")] = rows[:, i].max()
        return y


def _terminal_allowed(n, k, terminals):
    if len(set(terminals)) != len(terminals):
        raise ValueError("duplicate terminals")
    allowed = np.ones((n, k), dtype=bool)
    for i, s in enumerate(terminals):
        allowed[s] = False
        allowed[s, i] = True
    return allowed


def build_hmp_lp(h: WeightedHypergraph, terminals) -> HypergraphLP:
    """LP whose optimum equals the relaxation optimum with f = hypergraph cut."""
    return HypergraphLP(h, _terminal_allowed(h.n, len(terminals), list(terminals)), "partition")


def build_hmc_lp(h: WeightedHypergraph, terminals) -> HypergraphLP:
    """LP whose optimum equals the relaxation optimum with f = hypergraph separation."""
    return HypergraphLP(h, _terminal_allowed(h.n, len(terminals), list(terminals)), "separation")


def instance_lp(instance: Instance) -> HypergraphLP:
    """Compact LP for an instance whose objective is hypergraph-shaped.

    Covers hypergraph partition/cut, graph multiway cut, and labeling with
    modular assignment costs plus a hypergraph cut or separation function.
    """
    kind = instance.kind
    if kind in ("hypergraph_mp", "graph_mc"):
        return HypergraphLP(instance.hypergraph, instance.allowed, "partition")
    if kind == "hypergraph_mc":
        return HypergraphLP(instance.hypergraph, instance.allowed, "separation")
    if kind == "sublabel" and all(isinstance(g, Modular) for g in instance.g):
        costs = np.column_stack([g.weights for g in instance.g])
        if isinstance(instance.h, HypergraphSeparation):
            return HypergraphLP(instance.h.hypergraph, instance.allowed, "separation", costs)
        if isinstance(instance.h, HypergraphCut):
            h = instance.h.hypergraph.scaled(instance.h.scale)
            return HypergraphLP(h, instance.allowed, "partition", costs)
    raise TypeError(f"no compact LP for instance kind {kind!r} with these oracles")


def simplex_report(hlp: HypergraphLP, method: str = "lp") -> SolverReport:
    sol = simplex_solve(hlp.lp)
    if sol.status != "optimal":
        raise InfeasibleError(f"LP solve ended with status {sol.status}")
    return SolverReport(hlp.allocation(sol.y), sol.objective, sol.iterations, "optimal", method,
                        lower_bound=sol.objective)


def solve_lp(instance: Instance) -> SolverReport:
    return simplex_report(instance_lp(instance))


# ---------------------------------------------------------------------------
# projection


def project_simplex(v, pinned: int | None = None, allowed=None) -> np.ndarray:
    """Euclidean projection of ``v`` onto the probability simplex.

    ``pinned`` fixes that coordinate to 1; ``allowed`` restricts the support
    (other coordinates are forced to 0).
    """
    v = np.asarray(v, dtype=float)
    out = np.zeros_like(v)
    if pinned is not None:
        out[pinned] = 1.0
        return out
    idx = np.arange(v.size) if allowed is None else np.flatnonzero(allowed)
    u = v[idx]
    s = np.sort(u)[::-1]
    css = np.cumsum(s) - 1.0
    ks = np.arange(1, s.size + 1)
    rho = np.flatnonzero(s - css / ks > 0)[-1]
    tau = css[rho] / (rho + 1)
    out[idx] = np.maximum(u - tau, 0.0)
    return out


def _project_rows(x, allowed, pins):
    out = np.empty_like(x)
    for v in range(x.shape[0]):
        if v in pins:
            out[v] = project_simplex(x[v], pinned=pins[v])
        else:
            out[v] = project_simplex(x[v], allowed=allowed[v])
    return out


# ---------------------------------------------------------------------------
# general-oracle solvers


def _objective_and_subgradient(oracles, x):
    total = 0.0
    G = np.empty_like(x)
    for i, f in enumerate(oracles):
        total += lovasz_eval(f, x[:, i])
        G[:, i] = lovasz_subgradient(f, x[:, i])
    return total, G


def _snap(instance, x):
    """Integral allocation putting each element on its heaviest allowed label."""
    masked = np.where(instance.allowed, x, -1.0)
    labels = masked.argmax(axis=1)
    return instance.integral_allocation(labels), labels


def solve_subgradient(instance: Instance, iters: int = 5000, seed: int = 0, step: str = "auto",
                      lower_bound: float | None = None, tol: float = 1e-6,
                      x0=None) -> SolverReport:
    """Projected subgradient descent on the relaxation.

    ``step="auto"`` uses Polyak steps toward ``lower_bound`` when one is given
    and ``c / sqrt(t)`` along the normalized subgradient otherwise, with
    ``c = F(x0) / |g(x0)|``.  Every iterate and its integral snap are
    evaluated and the best feasible point is returned (never just the last).
    """
    oracles = instance.label_oracles()
    rng = np.random.default_rng(seed)
    pins, allowed = instance.pins, instance.allowed
    free = allowed.copy()
    for v in pins:
        free[v] = False
    if x0 is None:
        x = instance.uniform_allocation()
        x = _project_rows(x + 1e-3 * rng.standard_normal(x.shape) * free, allowed, pins)
    else:
        x = instance.check_allocation(x0).copy()

    best_x, best = None, np.inf
    history = []
    c = None
    status = "iteration-limit"
    t = 0
    for t in range(1, iters + 1):
        F, G = _objective_and_subgradient(oracles, x)
        G = G * free
        # the row-sum constraint makes per-row constant shifts irrelevant
        row_mean = np.where(free.any(axis=1), (G.sum(axis=1) / np.maximum(free.sum(axis=1), 1)), 0.0)
        G = (G - row_mean[:, None]) * free
        if F < best:
            best, best_x = F, x.copy()
        xs, labels = _snap(instance, x)
        Fs = instance.cost(labels)
        if Fs < best:
            best, best_x = Fs, xs
        history.append(best)
        if lower_bound is not None and best - lower_bound <= tol * max(1.0, abs(lower_bound)):
            status = "tolerance-reached"
            break
        norm = float(np.linalg.norm(G))
        if norm <= 1e-15:
            status = "optimal"
            break
        if c is None:
            c = max(F, 1e-12) / norm
        if step == "polyak" or (step == "auto" and lower_bound is not None):
            target = lower_bound if lower_bound is not None else best - 1e-3 * max(1.0, abs(best))
            alpha = max(F - target, 1e-12) / norm ** 2
            x = _project_rows(x - alpha * G, allowed, pins)
        else:
            x = _project_rows(x - (c / np.sqrt(t)) * G / norm, allowed, pins)
    return SolverReport(best_x, float(best), t, status, "subgradient", lower_bound, history)


def solve_cutting_plane(instance: Instance, tol: float = 1e-9, max_rounds: int = 2000) -> SolverReport:
    """Exact relaxation optimum via Kelley's cutting-plane method.

    Each label gets an epigraph column t_i with cuts
    ``t_i >= f_i(empty) + g . x_i`` for greedy subgradients g.  Since the
    extension is the max of finitely many such pieces, the loop ends at the
    optimum once the model value meets the true objective.
    """
    oracles = instance.label_oracles()
    n, k = instance.n, instance.k
    allowed = instance.allowed
    b = LPBuilder()
    entry: dict[tuple[int, int], int | float] = {}
    for v in range(n):
        labels = np.flatnonzero(allowed[v])
        for i in range(k):
            if not allowed[v, i]:
                entry[v, i] = 0.0
            elif labels.size == 1:
                entry[v, i] = 1.0
            else:
                entry[v, i] = b.add_var(f"x[{v},{i}]", lo=0.0)
        if labels.size > 1:
            b.add_row({entry[v, i]: 1.0 for i in labels}, "=", 1.0, f"row[{v}]")
    tcol = [b.add_var(f"t[{i}]", cost=1.0, lo=None) for i in range(k)]
    empty = [f._eval(0) for f in oracles]
    seen = [set() for _ in range(k)]

    def add_cut(i, g):
        key = tuple(np.round(g, 12))
        if key in seen[i]:
            return False
        seen[i].add(key)
        coeffs = {tcol[i]: -1.0}
        rhs = -empty[i]
        for v in range(n):
            ent = entry[v, i]
            if isinstance(ent, int):
                coeffs[ent] = coeffs.get(ent, 0.0) + g[v]
            else:
                rhs -= g[v] * ent
        b.add_row(coeffs, "<=", rhs, f"cut[{i},{len(seen[i])}]")
        return True

    x = instance.uniform_allocation()
    for i, f in enumerate(oracles):
        add_cut(i, lovasz_subgradient(f, x[:, i]))
        add_cut(i, lovasz_subgradient(f, 1.0 - x[:, i]))

    best_x, best = x, sum(lovasz_eval(f, x[:, i]) for i, f in enumerate(oracles))
    history = []
    status = "iteration-limit"
    lb = -np.inf
    rounds = 0
    for rounds in range(1, max_rounds + 1):
        sol = simplex_solve(b.build())
        if sol.status != "optimal":
            raise InfeasibleError(f"cutting-plane LP ended with status {sol.status}")
        lb = max(lb, sol.objective)
        x = np.zeros((n, k))
        for (v, i), ent in entry.items():
            x[v, i] = sol.y[ent] if isinstance(ent, int) else ent
        x = np.clip(x, 0.0, 1.0)
        x /= x.sum(axis=1, keepdims=True)
        vals = [lovasz_eval(f, x[:, i]) for i, f in enumerate(oracles)]
        F = float(sum(vals))
        if F < best:
            best, best_x = F, x
        history.append(best)
        if best - lb <= tol * max(1.0, abs(best)):
            status = "optimal"
            break
        added = False
        for i, f in enumerate(oracles):
            if vals[i] > sol.y[tcol[i]] + 1e-12:
                added |= add_cut(i, lovasz_subgradient(f, x[:, i]))
        if not added:
            status = "tolerance-reached"
            break
    return SolverReport(best_x, float(best), rounds, status, "cutting-plane", float(lb), history)


def solve(instance: Instance, method: str = "auto", **kw) -> SolverReport:
    """Dispatch: ``lp`` | ``cutting-plane`` | ``subgradient`` | ``auto``.

    ``auto`` takes the compact LP when the instance admits one and cutting
    planes otherwise.
    """
    if method == "lp":
        return solve_lp(instance)
    if method == "cutting-plane":
        return solve_cutting_plane(instance, **kw)
    if method == "subgradient":
        return solve_subgradient(instance, **kw)
    if method == "auto":
        try:
            hlp = instance_lp(instance)
        except TypeError:
            return solve_cutting_plane(instance, **kw)
        return simplex_report(hlp)
    raise ValueError(f"unknown method {method!r}")
