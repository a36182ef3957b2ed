"""Rounding fractional allocations to partitions.

Every rounder takes ``(instance, x, rng)`` and returns a ``RoundingOutcome``
whose cost is recomputed from the partition by the instance itself.  ``rng``
may be a ``numpy.random.Generator`` or an integer seed.  Thresholds are drawn
from (0, 1] so that theta = 0 (which would grab every element) never occurs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import SetFunction, members
from .lovasz import lovasz_eval, threshold_set
from .problems import Instance, SubLabel, SubMP, labels_from_blocks

UNCROSS_TOL = 1e-12


@dataclass
class RoundingOutcome:
    labels: np.ndarray
    cost: float
    trace: list[dict] = field(default_factory=list)
    # iteration in which each element received its label (iterative rounders only)
    assigned_at: np.ndarray | None = None


def as_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def draw_theta(rng: np.random.Generator) -> float:
    return 1.0 - rng.random()


def theta_round(x, i: int, theta: float) -> int:
    """Threshold label ``i`` of allocation ``x`` at ``theta``; returns a bitmask."""
    return threshold_set(np.asarray(x)[:, i], theta)


def _finish(instance: Instance, labels, trace, assigned_at=None) -> RoundingOutcome:
    labels = instance.check_partition(labels)
    return RoundingOutcome(labels, instance.cost(labels), trace, assigned_at)


def _fallback_labels(instance: Instance, x, rows) -> np.ndarray:
    masked = np.where(instance.allowed[rows], x[rows], -1.0)
    return masked.argmax(axis=1)


def iteration_cap(n: int, k: int) -> int:
    return 64 * k * math.ceil(math.log(n + 1))


# ---------------------------------------------------------------------------
# uncrossing


def uncross(f: SetFunction, sets, stats: dict | None = None) -> list[int]:
    """Make ``sets`` pairwise disjoint without raising their total ``f`` value.

    Repeatedly takes the lowest overlapping pair (i, j), i < j, and removes the
    overlap from ``A_j`` when ``f(A_j - A_i) <= f(A_j)``, otherwise from
    ``A_i``.  For symmetric submodular ``f`` one of the two always holds
    (posi-modularity), so the total never increases.  Each step strictly
    shrinks the total size, so at most ``sum |A_i|`` steps run.
    """
    sets = [int(s) for s in sets]
    steps = 0
    while True:
        pair = None
        for i in range(len(sets)):
            for j in range(i + 1, len(sets)):
                if sets[i] & sets[j]:
                    pair = (i, j)
                    break
            if pair:
                break
        if pair is None:
            break
        i, j = pair
        ai, aj = sets[i], sets[j]
        if f._eval(aj & ~ai) <= f._eval(aj) + UNCROSS_TOL:
            sets[j] = aj & ~ai
        else:
            sets[i] = ai & ~aj
        steps += 1
    if stats is not None:
        stats["steps"] = steps
    return sets


# ---------------------------------------------------------------------------
# monotone allocation


def monotone_greedy(instance: Instance, x) -> RoundingOutcome:
    """Deterministic greedy: repeatedly assign the threshold set of best cost per element.

    Among unassigned elements U, every label i and every distinct positive
    value theta of ``x[U, i]`` gives a candidate ``{v in U : x(v,i) >= theta}``;
    the candidate minimizing ``f_i(A) / |A|`` is assigned to label i.  Ties go
    to the lowest label, then to the larger set.
    """
    x = instance.check_allocation(x)
    oracles = instance.label_oracles()
    n = instance.n
    labels = np.full(n, -1, dtype=np.int64)
    unassigned = np.ones(n, dtype=bool)
    trace = []
    step = 0
    while unassigned.any():
        best = None
        for i, f in enumerate(oracles):
            col = np.where(unassigned, x[:, i], 0.0)
            for theta in np.unique(col[col > 0]):
                cand = unassigned & (x[:, i] >= theta)
                mask = sum(1 << int(v) for v in np.flatnonzero(cand))
                ratio = f._eval(mask) / int(cand.sum())
                if best is None or ratio < best[0] - 1e-12:
                    best = (ratio, i, float(theta), cand)
        ratio, i, theta, cand = best
        labels[cand] = i
        unassigned &= ~cand
        trace.append({"iter": step, "label": i, "theta": theta, "ratio": ratio,
                      "assigned": np.flatnonzero(cand).tolist()})
        step += 1
    return _finish(instance, labels, trace)


def kt_round(instance: Instance, x, rng=None, max_iter: int | None = None) -> RoundingOutcome:
    """Random label, random threshold, assign the still-unassigned elements above it.

    Element v ends up with label i with probability x(v, i).  After
    ``64 k ceil(ln(n+1))`` rounds any leftovers take their heaviest allowed
    label; this is recorded in the trace.
    """
    x = instance.check_allocation(x)
    rng = as_rng(rng)
    n, k = instance.n, instance.k
    cap = iteration_cap(n, k) if max_iter is None else max_iter
    labels = np.full(n, -1, dtype=np.int64)
    assigned_at = np.full(n, -1, dtype=np.int64)
    unassigned = np.ones(n, dtype=bool)
    trace = []
    it = 0
    while unassigned.any() and it < cap:
        i = int(rng.integers(k))
        theta = draw_theta(rng)
        take = unassigned & (x[:, i] >= theta)
        labels[take] = i
        assigned_at[take] = it
        unassigned &= ~take
        trace.append({"iter": it, "label": i, "theta": theta, "assigned": np.flatnonzero(take).tolist()})
        it += 1
    if unassigned.any():
        rows = np.flatnonzero(unassigned)
        labels[rows] = _fallback_labels(instance, x, rows)
        assigned_at[rows] = it
        trace.append({"iter": it, "fallback": rows.tolist()})
    return _finish(instance, labels, trace, assigned_at)


# ---------------------------------------------------------------------------
# multiway partition


def _require_submp(instance, name):
    if not isinstance(instance, SubMP):
        raise TypeError(f"{name} needs a multiway-partition instance, got {instance.kind!r}")


def ckr_round(instance: SubMP, x, rng=None, *, theta: float | None = None, perm=None) -> RoundingOutcome:
    """Shared threshold, random label order; the last label in the order takes the rest."""
    _require_submp(instance, "ckr_round")
    x = instance.check_allocation(x)
    rng = as_rng(rng)
    n, k = instance.n, instance.k
    if perm is None:
        perm = rng.permutation(k)
    if theta is None:
        theta = draw_theta(rng)
    perm = [int(p) for p in perm]
    labels = np.full(n, -1, dtype=np.int64)
    unassigned = np.ones(n, dtype=bool)
    for i in perm[:-1]:
        take = unassigned & (x[:, i] >= theta)
        labels[take] = i
        unassigned &= ~take
    labels[unassigned] = perm[-1]
    return _finish(instance, labels, [{"theta": float(theta), "perm": perm}])


def half_round(instance: SubMP, x, rng=None, *, theta: float | None = None) -> RoundingOutcome:
    """Threshold every label but the last at one theta in (1/2, 1]; the last takes the rest.

    Above 1/2 no element can clear two thresholds, so the sets are disjoint.
    """
    _require_submp(instance, "half_round")
    x = instance.check_allocation(x)
    if theta is None:
        theta = 0.5 + draw_theta(as_rng(rng)) / 2
    if not 0.5 < theta <= 1.0:
        raise ValueError("half_round threshold must lie in (1/2, 1]")
    n, k = instance.n, instance.k
    labels = np.full(n, k - 1, dtype=np.int64)
    free = np.ones(n, dtype=bool)
    for i in range(k - 1):
        take = free & (x[:, i] >= theta)
        labels[take] = i
        free &= ~take
    return _finish(instance, labels, [{"theta": float(theta)}])


def sym_submp_round(instance: SubMP, x, rng=None, variant: str = "plain", *,
                    theta: float | None = None) -> RoundingOutcome:
    """Shared-threshold rounding followed by uncrossing, for symmetric f.

    ``variant="plain"`` thresholds all k labels, uncrosses them and gives the
    complement of the first k-1 blocks to the last label.  ``"relabel"`` first
    moves the label with the largest extension value to the end and only
    thresholds the other k-1 labels.
    """
    _require_submp(instance, "sym_submp_round")
    if variant not in ("plain", "relabel"):
        raise ValueError("variant must be 'plain' or 'relabel'")
    x = instance.check_allocation(x)
    if theta is None:
        theta = draw_theta(as_rng(rng))
    f = instance.f
    n, k = instance.n, instance.k
    if variant == "plain":
        order = list(range(k))
        rounded = order
    else:
        ext = [lovasz_eval(f, x[:, i]) for i in range(k)]
        last = int(np.argmax(ext))
        order = [i for i in range(k) if i != last] + [last]
        rounded = order[:-1]
    sets = [theta_round(x, i, theta) for i in rounded]
    stats = {}
    sets = uncross(f, sets, stats)
    full = (1 << n) - 1
    blocks = [0] * k
    union = 0
    for i, s in zip(rounded, sets):
        if i != order[-1]:
            blocks[i] = s
            union |= s
    blocks[order[-1]] = full & ~union
    labels = labels_from_blocks(blocks, n)
    return _finish(instance, labels, [{"theta": float(theta), "order": order,
                                       "uncross_steps": stats["steps"]}])


# ---------------------------------------------------------------------------
# labeling


def sym_sublabel_round(instance: SubLabel, x, rng=None, max_iter: int | None = None) -> RoundingOutcome:
    """Accumulate possibly overlapping threshold balls per label, then uncross with h."""
    if not isinstance(instance, SubLabel):
        raise TypeError(f"sym_sublabel_round needs a labeling instance, got {instance.kind!r}")
    x = instance.check_allocation(x)
    rng = as_rng(rng)
    n, k = instance.n, instance.k
    cap = iteration_cap(n, k) if max_iter is None else max_iter
    balls = [0] * k
    covered = 0
    full = (1 << n) - 1
    trace = []
    it = 0
    while covered != full and it < cap:
        i = int(rng.integers(k))
        theta = draw_theta(rng)
        ball = theta_round(x, i, theta)
        balls[i] |= ball
        covered |= ball
        trace.append({"iter": it, "label": i, "theta": theta, "ball": members(ball)})
        it += 1
    if covered != full:
        rows = np.array(members(full & ~covered))
        for v, i in zip(rows, _fallback_labels(instance, x, rows)):
            balls[int(i)] |= 1 << int(v)
        trace.append({"iter": it, "fallback": rows.tolist()})
    stats = {}
    blocks = uncross(instance.h, balls, stats)
    trace.append({"uncross_steps": stats["steps"]})
    return _finish(instance, labels_from_blocks(blocks, n), trace)


def sym_plain_round(instance, x, rng=None):
    return sym_submp_round(instance, x, rng, "plain")


def sym_relabel_round(instance, x, rng=None):
    return sym_submp_round(instance, x, rng, "relabel")


def greedy_round(instance, x, rng=None):
    return monotone_greedy(instance, x)


# module-level functions so that trials can be shipped to worker processes
ROUNDERS = {
    "kt": kt_round,
    "ckr": ckr_round,
    "half": half_round,
    "sym": sym_plain_round,
    "sym-relabel": sym_relabel_round,
    "sym-label": sym_sublabel_round,
    "greedy": greedy_round,
}
