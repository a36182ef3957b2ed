"""Problem instances: allocation (MSCA), multiway partition and labeling.

All instances expose the same surface: ``n``, ``k``, ``pins`` (element ->
forced label), an ``allowed`` (n, k) boolean mask, and ``label_oracles()``
returning the k functions whose sum over the blocks of a partition is the
objective.  Labels are 0-based throughout.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .core import (
    GraphCut,
    HypergraphCut,
    HypergraphSeparation,
    SetFunction,
    SumFunction,
    WeightedHypergraph,
)

ROW_TOL = 1e-9


class InfeasibleError(ValueError):
    pass


class TooLargeError(ValueError):
    pass


def blocks(labels, k: int) -> list[int]:
    """Bitmask of each label class."""
    out = [0] * k
    for v, i in enumerate(labels):
        out[int(i)] |= 1 << v
    return out


def labels_from_blocks(sets: Sequence[int], n: int) -> np.ndarray:
    labels = np.full(n, -1, dtype=np.int64)
    for i, mask in enumerate(sets):
        v = 0
        while mask:
            if mask & 1:
                if labels[v] >= 0:
                    raise ValueError(f"element {v} in two blocks")
                labels[v] = i
            mask >>= 1
            v += 1
    if np.any(labels < 0):
        raise ValueError("blocks do not cover the ground set")
    return labels


class Instance:
    kind = "abstract"
    n: int
    k: int

    def __init__(self, n: int, k: int, pins: dict | None = None, forbidden=None):
        if n < 1 or k < 1:
            raise ValueError("need n >= 1 and k >= 1")
        self.n = n
        self.k = k
        self.pins = dict(pins or {})
        if forbidden is None:
            forbidden = np.zeros((n, k), dtype=bool)
        forbidden = np.asarray(forbidden, dtype=bool)
        if forbidden.shape != (n, k):
            raise ValueError(f"forbidden mask must have shape {(n, k)}")
        self.forbidden = forbidden
        allowed = ~forbidden
        for v, i in self.pins.items():
            if forbidden[v, i]:
                raise ValueError(f"element {v} pinned to forbidden label {i}")
            allowed[v, :] = False
            allowed[v, i] = True
        if not allowed.any(axis=1).all():
            raise InfeasibleError("some element has every label forbidden")
        self.allowed = allowed

    def label_oracles(self) -> list[SetFunction]:
        raise NotImplementedError

    @property
    def free_elements(self) -> list[int]:
        return [v for v in range(self.n) if v not in self.pins]

    def cost(self, labels) -> float:
        labels = self.check_partition(labels)
        return float(sum(f._eval(m) for f, m in zip(self.label_oracles(), blocks(labels, self.k))))

    def check_partition(self, labels) -> np.ndarray:
        labels = np.asarray(labels, dtype=np.int64)
        if labels.shape != (self.n,):
            raise InfeasibleError(f"partition must label all {self.n} elements")
        if np.any(labels < 0) or np.any(labels >= self.k):
            raise InfeasibleError("label out of range")
        if not np.all(self.allowed[np.arange(self.n), labels]):
            raise InfeasibleError("partition uses a pinned or forbidden assignment")
        return labels

    def check_allocation(self, x, tol: float = ROW_TOL) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n, self.k):
            raise InfeasibleError(f"allocation must have shape {(self.n, self.k)}, got {x.shape}")
        if np.any(~np.isfinite(x)) or np.any(x < -tol) or np.any(x > 1 + tol):
            raise InfeasibleError("allocation entries must lie in [0, 1]")
        if np.any(np.abs(x.sum(axis=1) - 1.0) > tol):
            raise InfeasibleError("allocation rows must sum to 1")
        if np.any(np.abs(x[~self.allowed]) > tol):
            raise InfeasibleError("allocation puts mass on a pinned-out or forbidden label")
        return x

    def integral_allocation(self, labels) -> np.ndarray:
        labels = self.check_partition(labels)
        x = np.zeros((self.n, self.k))
        x[np.arange(self.n), labels] = 1.0
        return x

    def uniform_allocation(self) -> np.ndarray:
        a = self.allowed.astype(float)
        return a / a.sum(axis=1, keepdims=True)


class MSCA(Instance):
    """Minimum submodular-cost allocation with one oracle per label."""

    kind = "msca"

    def __init__(self, oracles: Sequence[SetFunction], forbidden=None):
        oracles = tuple(oracles)
        if not oracles:
            raise ValueError("need at least one label")
        ns = {f.n for f in oracles}
        if len(ns) != 1:
            raise ValueError("oracles disagree on ground set size")
        super().__init__(ns.pop(), len(oracles), forbidden=forbidden)
        self.oracles = oracles

    def label_oracles(self):
        return list(self.oracles)


class SubMP(Instance):
    """Submodular multiway partition: one function, terminal ``s_i`` pinned to label i."""

    kind = "submp"

    def __init__(self, f: SetFunction, terminals: Sequence[int]):
        terminals = tuple(int(s) for s in terminals)
        if len(set(terminals)) != len(terminals):
            raise ValueError("duplicate terminals")
        for s in terminals:
            if not 0 <= s < f.n:
                raise ValueError(f"terminal {s} out of range")
        super().__init__(f.n, len(terminals), pins={s: i for i, s in enumerate(terminals)})
        self.f = f
        self.terminals = terminals

    def label_oracles(self):
        return [self.f] * self.k


class HypergraphMP(SubMP):
    """Hypergraph multiway partition: f is the hypergraph cut function."""

    kind = "hypergraph_mp"

    def __init__(self, hypergraph: WeightedHypergraph, terminals: Sequence[int]):
        super().__init__(HypergraphCut(hypergraph), terminals)
        self.hypergraph = hypergraph


class GraphMC(SubMP):
    """Graph multiway cut as symmetric partition with f = half the cut weight."""

    kind = "graph_mc"

    def __init__(self, n: int, edges, terminals: Sequence[int]):
        edges = tuple((int(u), int(v), float(w)) for u, v, w in edges)
        super().__init__(GraphCut(n, edges, scale=0.5), terminals)
        self.edges = edges
        # the cut of a 2-uniform hypergraph with halved weights is the same function
        self.hypergraph = WeightedHypergraph.from_graph(n, [(u, v, w / 2) for u, v, w in edges])


class HypergraphMC(SubMP):
    """Hypergraph multiway cut via the representative-based separation function."""

    kind = "hypergraph_mc"

    def __init__(self, hypergraph: WeightedHypergraph, terminals: Sequence[int]):
        super().__init__(HypergraphSeparation(hypergraph), terminals)
        self.hypergraph = hypergraph


class SubLabel(Instance):
    """Labeling with monotone assignment costs ``g[i]`` and a shared separation cost ``h``."""

    kind = "sublabel"

    def __init__(self, g: Sequence[SetFunction], h: SetFunction, forbidden=None):
        g = tuple(g)
        if not g:
            raise ValueError("need at least one label")
        if any(gi.n != h.n for gi in g):
            raise ValueError("assignment and separation oracles disagree on ground set")
        super().__init__(h.n, len(g), forbidden=forbidden)
        self.g = g
        self.h = h
        self._oracles = [SumFunction([gi, h]) for gi in g]

    @property
    def hypergraph(self) -> WeightedHypergraph | None:
        return getattr(self.h, "hypergraph", None)

    def label_oracles(self):
        return list(self._oracles)

    def assignment_cost(self, labels) -> float:
        labels = self.check_partition(labels)
        return float(sum(gi._eval(m) for gi, m in zip(self.g, blocks(labels, self.k))))

    def separation_cost(self, labels) -> float:
        labels = self.check_partition(labels)
        return float(sum(self.h._eval(m) for m in blocks(labels, self.k)))
