"""Brute-force ground truth: exact optima, reference extension values, Monte-Carlo estimators.

Everything here is written independently of the optimized code paths it is
used to check.  Sizes are limited to what enumerates in seconds.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .core import SetFunction, to_mask
from .problems import Instance, TooLargeError

MAX_LABEL_VECTORS = 20_000_000
MAX_SUBSET_N = 22
CHUNK = 1 << 16
TIE_TOL = 1e-12


def _tables(instance: Instance):
    if instance.n > MAX_SUBSET_N:
        return None
    return [np.asarray(f.table(), dtype=float) for f in instance.label_oracles()]


def exact_optimum(instance: Instance, limit: int = MAX_LABEL_VECTORS):
    """Minimum-cost feasible partition by enumeration.

    Label vectors are walked in lexicographic order with a mixed-radix
    counter over the allowed labels of the unpinned elements.  Among optimal
    vectors (within a 1e-12 relative tie tolerance) the first one wins, which
    makes the result the lexicographically smallest optimum.
    Returns ``(labels, cost)``.
    """
    n, k = instance.n, instance.k
    free = instance.free_elements
    choices = [np.flatnonzero(instance.allowed[v]) for v in free]
    total = math.prod(len(c) for c in choices)
    if total > limit:
        raise TooLargeError(f"{total} label vectors exceed the enumeration limit {limit}")
    base = np.zeros(n, dtype=np.int64)
    for v, i in instance.pins.items():
        base[v] = i
    tables = _tables(instance)
    if tables is None:
        return _exact_slow(instance, free, choices, base)

    radices = np.array([len(c) for c in choices], dtype=np.int64)
    pinned_bits = np.zeros(k, dtype=np.int64)
    for v, i in instance.pins.items():
        pinned_bits[i] |= 1 << v
    free_bits = np.array([1 << v for v in free], dtype=np.int64)
    best_cost, best_idx = math.inf, 0
    for start in range(0, total, CHUNK):
        idx = np.arange(start, min(total, start + CHUNK), dtype=np.int64)
        # mixed radix, most significant digit = first free element
        rem = idx.copy()
        digits = np.empty((idx.size, len(free)), dtype=np.int64)
        for p in range(len(free) - 1, -1, -1):
            digits[:, p] = rem % radices[p]
            rem //= radices[p]
        lab = np.empty_like(digits)
        for p, c in enumerate(choices):
            lab[:, p] = c[digits[:, p]]
        cost = np.zeros(idx.size)
        for i in range(k):
            masks = ((lab == i) * free_bits).sum(axis=1) + pinned_bits[i]
            cost += tables[i][masks]
        low = cost.min()
        if low < best_cost - TIE_TOL * max(1.0, abs(best_cost) if math.isfinite(best_cost) else 1.0):
            first = int(np.flatnonzero(cost <= low + TIE_TOL * max(1.0, abs(low)))[0])
            best_cost, best_idx = float(low), int(idx[first])
    labels = base.copy()
    rem = best_idx
    for p in range(len(free) - 1, -1, -1):
        labels[free[p]] = choices[p][rem % radices[p]]
        rem //= int(radices[p])
    return labels, instance.cost(labels)


def _exact_slow(instance, free, choices, base):
    best = None
    for combo in itertools.product(*choices):
        labels = base.copy()
        labels[free] = combo
        c = instance.cost(labels)
        if best is None or c < best[1] - TIE_TOL * max(1.0, abs(best[1])):
            best = (labels, c)
    return best


def lovasz_eval_reference(f: SetFunction, x) -> float:
    """Integrate ``f({v : x_v >= theta})`` over theta in [0, 1] piece by piece.

    Between consecutive distinct values of ``x`` (and the endpoints 0 and 1)
    the level set is constant, so each interval contributes its length times
    the value of ``f`` at its midpoint level set.
    """
    x = np.asarray(x, dtype=float)
    points = sorted(set([0.0, 1.0] + [float(t) for t in x if 0.0 < t < 1.0]))
    total = 0.0
    for lo, hi in zip(points, points[1:]):
        mid = (lo + hi) / 2
        level = 0
        for v in range(f.n):
            if x[v] >= mid:
                level |= 1 << v
        total += (hi - lo) * f(level)
    return float(total)


def brute_min_subset(f: SetFunction, must_contain=(), must_avoid=()):
    """Minimize ``f`` over all sets containing ``must_contain`` and avoiding ``must_avoid``.

    Returns ``(mask, value)``; ties go to the numerically smallest bitmask.
    """
    if f.n > MAX_SUBSET_N:
        raise TooLargeError(f"n = {f.n} exceeds {MAX_SUBSET_N} for exhaustive minimization")
    need = to_mask(must_contain, f.n)
    avoid = to_mask(must_avoid, f.n)
    if need & avoid:
        raise ValueError("an element is both required and excluded")
    masks = np.arange(1 << f.n, dtype=np.int64)
    ok = ((masks & need) == need) & ((masks & avoid) == 0)
    values = np.asarray(f.table(), dtype=float)
    cand = masks[ok]
    vals = values[ok]
    low = vals.min()
    j = int(np.flatnonzero(vals <= low + TIE_TOL * max(1.0, abs(low)))[0])
    return int(cand[j]), float(vals[j])


# ---------------------------------------------------------------------------
# Monte-Carlo


def mean_stderr(values) -> tuple[float, float]:
    values = np.asarray(values, dtype=float)
    if values.size < 2:
        raise ValueError("need at least two samples")
    return float(values.mean()), float(values.std(ddof=1) / math.sqrt(values.size))


def _run_block(args):
    rounder, instance, x, seeds = args
    return [rounder(instance, x, np.random.default_rng(s)) for s in seeds]


def run_trials(rounder, instance, x, trials: int, seed: int = 0, workers: int = 1) -> list:
    """Run ``rounder(instance, x, rng)`` with ``rng = default_rng(seed + t)`` for each trial t.

    With ``workers > 1`` trials are sharded over processes (the rounder must
    then be picklable); results come back in trial order either way.
    """
    seeds = [seed + t for t in range(trials)]
    if workers <= 1:
        return _run_block((rounder, instance, x, seeds))
    size = math.ceil(trials / workers)
    shards = [seeds[i:i + size] for i in range(0, trials, size)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = pool.map(_run_block, [(rounder, instance, x, s) for s in shards])
        return [o for part in parts for o in part]


def estimate(statistic, rounder, instance, x, trials: int, seed: int = 0, workers: int = 1):
    """Sample mean and standard error of ``statistic(outcome)`` over independent roundings."""
    if trials < 100:
        raise ValueError("estimate needs at least 100 trials")
    outcomes = run_trials(rounder, instance, x, trials, seed, workers)
    return mean_stderr([float(statistic(o)) for o in outcomes])


def binomial_stderr(p: float, trials: int) -> float:
    return math.sqrt(max(p * (1 - p), 0.0) / trials)


# ---------------------------------------------------------------------------
# exact probabilities for shared-threshold roundings


def _intervals(values, lo: float = 0.0, hi: float = 1.0):
    points = sorted(set([lo, hi] + [float(t) for t in values if lo < t < hi]))
    return [(a, b) for a, b in zip(points, points[1:]) if b > a]


def ckr_split_probability(x, verts) -> float:
    """Exact probability that the order-and-threshold rounding separates ``verts``.

    Averages over all k! label orders and integrates over theta, with the
    last label in the order taking everything left.  Only the rows of the
    edge matter.  Intended for k <= 7.
    """
    rows = np.asarray(x, dtype=float)[list(verts)]
    k = rows.shape[1]
    spans = _intervals(rows.ravel())
    total = 0.0
    for perm in itertools.permutations(range(k)):
        for a, b in spans:
            theta = (a + b) / 2
            got = []
            for r in rows:
                lab = perm[-1]
                for i in perm[:-1]:
                    if r[i] >= theta:
                        lab = i
                        break
                got.append(lab)
            if len(set(got)) > 1:
                total += b - a
    return total / math.factorial(k)


def half_split_probability(x, verts) -> float:
    """Exact probability that threshold-above-one-half rounding separates ``verts``."""
    rows = np.asarray(x, dtype=float)[list(verts)]
    k = rows.shape[1]
    total = 0.0
    for a, b in _intervals(rows.ravel(), 0.5, 1.0):
        theta = (a + b) / 2
        got = []
        for r in rows:
            hit = [i for i in range(k - 1) if r[i] >= theta]
            got.append(hit[0] if hit else k - 1)
        if len(set(got)) > 1:
            total += b - a
    return total / 0.5


def theta_expectation(fn, x, lo: float = 0.0, hi: float = 1.0) -> float:
    """Exact mean of ``fn(theta)`` for theta uniform on (lo, hi] when ``fn`` only
    changes at the entries of ``x``."""
    total = 0.0
    for a, b in _intervals(np.asarray(x, dtype=float).ravel(), lo, hi):
        total += (b - a) * fn((a + b) / 2)
    return total / (hi - lo)


def harmonic(m: int) -> float:
    return float(sum(1.0 / j for j in range(1, m + 1)))
