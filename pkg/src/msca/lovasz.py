"""Lovász extension, greedy subgradients and threshold sets."""

from __future__ import annotations

import numpy as np

from .core import SetFunction


def threshold_set(x, theta: float) -> int:
    """Bitmask of ``{v : x[v] >= theta}``."""
    mask = 0
    for v, xv in enumerate(np.asarray(x, dtype=float)):
        if xv >= theta:
            mask |= 1 << v
    return mask


def _descending_order(x: np.ndarray) -> np.ndarray:
    # stable, so ties keep increasing element id
    return np.argsort(-x, kind="stable")


def lovasz_eval(f: SetFunction, x) -> float:
    """Value of the Lovász extension of ``f`` at ``x`` in [0, 1]^n.

    Sort ``x`` descending, let S_p be the first p elements and sum
    ``(x_(p) - x_(p+1)) * f(S_p)`` with ``x_(0) = 1`` and ``x_(n+1) = 0``.
    This is the integral of ``f({x >= theta})`` over theta in [0, 1].
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (f.n,):
        raise ValueError(f"expected vector of length {f.n}, got shape {x.shape}")
    order = _descending_order(x)
    mask = 0
    total = (1.0 - x[order[0]]) * f._eval(0)
    for p, v in enumerate(order):
        mask |= 1 << int(v)
        nxt = x[order[p + 1]] if p + 1 < f.n else 0.0
        gap = x[v] - nxt
        if gap:
            total += gap * f._eval(mask)
    return float(total)


def lovasz_subgradient(f: SetFunction, x) -> np.ndarray:
    """Greedy subgradient: ``g[v_p] = f(S_p) - f(S_{p-1})`` along the descending order.

    With ``f(empty) = 0`` this satisfies ``g @ x == lovasz_eval(f, x)``; in
    general ``lovasz_eval(f, x) == f(empty) + g @ x``.  Ties are broken by
    element id, so at points with repeated coordinates this is one of several
    valid subgradients.
    """
    x = np.asarray(x, dtype=float)
    order = _descending_order(x)
    g = np.empty(f.n)
    mask = 0
    prev = f._eval(0)
    for v in order:
        mask |= 1 << int(v)
        cur = f._eval(mask)
        g[v] = cur - prev
        prev = cur
    return g


def objective(instance, x, tol: float = 1e-9) -> float:
    """Relaxation objective: sum over labels of the extension of that label's oracle.

    Raises ``InfeasibleError`` if ``x`` is not a feasible allocation.
    """
    x = instance.check_allocation(x, tol)
    return float(sum(lovasz_eval(f, x[:, i]) for i, f in enumerate(instance.label_oracles())))


def edge_spread(x, verts) -> np.ndarray:
    """Per-label interval length ``max_v x(v, i) - min_v x(v, i)`` over the vertices of an edge."""
    rows = np.asarray(x, dtype=float)[list(verts)]
    return rows.max(axis=0) - rows.min(axis=0)


def partition_distance(x, edge) -> float:
    """Spread d(e) used by the hypergraph-partition objective: sum of per-label spreads."""
    return float(edge_spread(x, edge.verts).sum())


def separation_distance(x, edge) -> float:
    """d(e) for the separation objective: ``sum_i x(r(e), i) - min_v x(v, i)``."""
    x = np.asarray(x, dtype=float)
    rows = x[list(edge.verts)]
    return float((x[edge.rep] - rows.min(axis=0)).sum())
