"""Set functions over a dense ground set ``{0, ..., n-1}``.

Sets are passed around as Python ``int`` bitmasks (bit ``v`` set iff element
``v`` is a member).  Every oracle also accepts an iterable of element ids, so
``f({0, 2})`` and ``f(0b101)`` are the same call.  Python integers are
unbounded, so the bitmask form works for any ``n``.

All built-in families are non-negative, submodular and have ``f(empty) == 0``.
Oracles are immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

MAX_EXHAUSTIVE_N = 14
TOL = 1e-9


# ---------------------------------------------------------------------------
# set helpers


def to_mask(s, n: int) -> int:
    """Convert ``s`` (bitmask or iterable of ids) to a bitmask over ``n`` elements."""
    if isinstance(s, (int, np.integer)) and not isinstance(s, bool):
        s = int(s)
        if s < 0 or s >> n:
            raise ValueError(f"bitmask {s:#x} has bits outside ground set of size {n}")
        return s
    mask = 0
    for v in s:
        v = int(v)
        if not 0 <= v < n:
            raise ValueError(f"element {v} out of range for ground set of size {n}")
        mask |= 1 << v
    return mask


def members(mask: int) -> list[int]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out


def full_mask(n: int) -> int:
    return (1 << n) - 1


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def subset_bits(n: int) -> np.ndarray:
    """Boolean matrix of shape (2**n, n); row ``m`` is the membership vector of mask ``m``."""
    masks = np.arange(1 << n, dtype=np.int64)
    return ((masks[:, None] >> np.arange(n, dtype=np.int64)) & 1).astype(bool)


# ---------------------------------------------------------------------------
# hypergraphs


@dataclass(frozen=True)
class Hyperedge:
    verts: tuple[int, ...]
    weight: float
    rep: int

    @property
    def mask(self) -> int:
        m = 0
        for v in self.verts:
            m |= 1 << v
        return m


@dataclass(frozen=True)
class WeightedHypergraph:
    """Hypergraph on vertices ``0..n-1`` with non-negative edge weights.

    Each edge carries a representative vertex used by the separation function;
    it defaults to the smallest vertex of the edge.
    """

    n: int
    edges: tuple[Hyperedge, ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("hypergraph needs at least one vertex")
        for e in self.edges:
            if len(e.verts) < 1:
                raise ValueError("empty hyperedge")
            if len(set(e.verts)) != len(e.verts):
                raise ValueError(f"repeated vertex in hyperedge {e.verts}")
            if any(not 0 <= v < self.n for v in e.verts):
                raise ValueError(f"hyperedge {e.verts} has vertex outside 0..{self.n - 1}")
            if e.weight < 0:
                raise ValueError("hyperedge weights must be non-negative")
            if e.rep not in e.verts:
                raise ValueError(f"representative {e.rep} not in hyperedge {e.verts}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable) -> "WeightedHypergraph":
        """Build from ``(verts, weight)`` or ``(verts, weight, rep)`` tuples."""
        out = []
        for item in edges:
            verts = tuple(int(v) for v in item[0])
            w = float(item[1])
            rep = int(item[2]) if len(item) > 2 and item[2] is not None else min(verts)
            out.append(Hyperedge(verts, w, rep))
        return cls(n, tuple(out))

    @classmethod
    def from_graph(cls, n: int, edges: Iterable) -> "WeightedHypergraph":
        """2-uniform hypergraph from ``(u, v, w)`` triples."""
        return cls.from_edges(n, [((u, v), w) for u, v, w in edges])

    @property
    def max_edge_size(self) -> int:
        return max((len(e.verts) for e in self.edges), default=0)

    def scaled(self, factor: float) -> "WeightedHypergraph":
        return WeightedHypergraph(
            self.n, tuple(Hyperedge(e.verts, e.weight * factor, e.rep) for e in self.edges)
        )


# ---------------------------------------------------------------------------
# oracles


class SetFunction:
    """Value oracle for a set function on ``{0..n-1}``.

    Subclasses implement ``_eval(mask)``; ``table()`` may be overridden with a
    vectorized version.  ``is_monotone``/``is_symmetric`` are advisory claims
    only; nothing correctness-critical branches on them.
    """

    n: int
    is_monotone: bool = False
    is_symmetric: bool = False

    def __call__(self, s) -> float:
        return self._eval(to_mask(s, self.n))

    def eval(self, s) -> float:
        return self(s)

    def _eval(self, mask: int) -> float:
        raise NotImplementedError

    def table(self) -> np.ndarray:
        """Values on all ``2**n`` subsets, indexed by bitmask."""
        return np.array([self._eval(m) for m in range(1 << self.n)], dtype=float)

    def to_spec(self) -> dict:
        raise TypeError(f"{type(self).__name__} has no serializable form")


class FunctionOracle(SetFunction):
    """Wrap a user callable taking a bitmask."""

    def __init__(self, n: int, fn: Callable[[int], float], *, monotone=False, symmetric=False):
        self.n = n
        self._fn = fn
        self.is_monotone = monotone
        self.is_symmetric = symmetric

    def _eval(self, mask):
        return float(self._fn(mask))


class Modular(SetFunction):
    """f(A) = sum of weights over A."""

    def __init__(self, weights: Sequence[float]):
        self.weights = np.asarray(weights, dtype=float)
        self.n = len(self.weights)
        self.is_monotone = bool(np.all(self.weights >= 0))
        self.is_symmetric = bool(np.all(self.weights == 0))
        self._w = [float(w) for w in self.weights]

    def _eval(self, mask):
        total = 0.0
        v = 0
        while mask:
            if mask & 1:
                total += self._w[v]
            mask >>= 1
            v += 1
        return total

    def table(self):
        return subset_bits(self.n).astype(float) @ self.weights

    def to_spec(self):
        return {"kind": "modular", "weights": self._w}


class GraphCut(SetFunction):
    """``scale`` times the weight of edges with exactly one endpoint in A.

    Use ``scale=0.5`` for the multiway-cut embedding, where each cut edge is
    seen from both sides.
    """

    is_symmetric = True

    def __init__(self, n: int, edges: Iterable, scale: float = 1.0):
        if scale <= 0:
            raise ValueError("scale must be positive")
        self.n = n
        self.edges = tuple((int(u), int(v), float(w)) for u, v, w in edges)
        for u, v, w in self.edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) outside ground set of size {n}")
            if w < 0:
                raise ValueError("edge weights must be non-negative")
        self.scale = float(scale)

    def _eval(self, mask):
        total = 0.0
        for u, v, w in self.edges:
            if ((mask >> u) ^ (mask >> v)) & 1:
                total += w
        return self.scale * total

    def table(self):
        bits = subset_bits(self.n)
        out = np.zeros(1 << self.n)
        for u, v, w in self.edges:
            out += w * (bits[:, u] != bits[:, v])
        return self.scale * out

    def to_spec(self):
        return {"kind": "graph_cut", "n": self.n, "edges": [list(e) for e in self.edges],
                "scale": self.scale}


class _HyperedgeFunction(SetFunction):
    def __init__(self, h: WeightedHypergraph):
        self.n = h.n
        self.hypergraph = h
        self._edges = [(e.mask, 1 << e.rep, e.weight) for e in h.edges]

    def _edges_spec(self):
        return [{"verts": list(e.verts), "w": e.weight, "rep": e.rep} for e in self.hypergraph.edges]


class HypergraphCut(_HyperedgeFunction):
    """``scale`` times the weight of hyperedges with some but not all vertices in A."""

    is_symmetric = True

    def __init__(self, h: WeightedHypergraph, scale: float = 1.0):
        super().__init__(h)
        if scale <= 0:
            raise ValueError("scale must be positive")
        self.scale = float(scale)

    def _eval(self, mask):
        total = 0.0
        for em, _, w in self._edges:
            inside = mask & em
            if inside and inside != em:
                total += w
        return self.scale * total

    def table(self):
        bits = subset_bits(self.n)
        out = np.zeros(1 << self.n)
        for e in self.hypergraph.edges:
            cnt = bits[:, list(e.verts)].sum(axis=1)
            out += e.weight * ((cnt > 0) & (cnt < len(e.verts)))
        return self.scale * out

    def to_spec(self):
        return {"kind": "hypergraph_cut", "n": self.n, "edges": self._edges_spec(),
                "scale": self.scale}


class HypergraphSeparation(_HyperedgeFunction):
    """Weight of hyperedges whose representative lies in A while the edge leaves A.

    Asymmetric and submodular; summing it over the blocks of a partition
    charges every non-monochromatic hyperedge exactly once.
    """

    def _eval(self, mask):
        total = 0.0
        for em, rm, w in self._edges:
            if mask & rm and (mask & em) != em:
                total += w
        return total

    def table(self):
        bits = subset_bits(self.n)
        out = np.zeros(1 << self.n)
        for e in self.hypergraph.edges:
            cnt = bits[:, list(e.verts)].sum(axis=1)
            out += e.weight * (bits[:, e.rep] & (cnt < len(e.verts)))
        return out

    def to_spec(self):
        return {"kind": "hypergraph_separation", "n": self.n, "edges": self._edges_spec()}


class Coverage(SetFunction):
    """Weighted coverage: total weight of universe items covered by A.

    ``covers[v]`` lists the universe items covered by element ``v``.  Monotone.
    """

    is_monotone = True

    def __init__(self, covers: Sequence[Sequence[int]], item_weights: Sequence[float]):
        self.n = len(covers)
        self.covers = tuple(tuple(int(j) for j in c) for c in covers)
        self.item_weights = tuple(float(w) for w in item_weights)
        if any(w < 0 for w in self.item_weights):
            raise ValueError("item weights must be non-negative")
        self._cover_masks = []
        for c in self.covers:
            m = 0
            for j in c:
                m |= 1 << j
            self._cover_masks.append(m)

    def _eval(self, mask):
        covered = 0
        v = 0
        while mask:
            if mask & 1:
                covered |= self._cover_masks[v]
            mask >>= 1
            v += 1
        return float(sum(self.item_weights[j] for j in members(covered)))

    def table(self):
        bits = subset_bits(self.n).astype(np.int64)
        inc = np.zeros((self.n, len(self.item_weights)), dtype=np.int64)
        for v, c in enumerate(self.covers):
            inc[v, list(c)] = 1
        return ((bits @ inc) > 0).astype(float) @ np.asarray(self.item_weights)

    def to_spec(self):
        return {"kind": "coverage", "covers": [list(c) for c in self.covers],
                "item_weights": list(self.item_weights)}


class Facility(SetFunction):
    """Facility cost: ``opening`` if A is non-empty, plus per-element connection costs."""

    is_monotone = True

    def __init__(self, opening: float, connection: Sequence[float]):
        if opening < 0 or any(c < 0 for c in connection):
            raise ValueError("facility costs must be non-negative")
        self.opening = float(opening)
        self.connection = Modular(connection)
        self.n = self.connection.n

    def _eval(self, mask):
        if not mask:
            return 0.0
        return self.opening + self.connection._eval(mask)

    def table(self):
        t = self.connection.table()
        t[1:] += self.opening
        return t

    def to_spec(self):
        return {"kind": "facility", "opening": self.opening,
                "connection": self.connection.to_spec()["weights"]}


class Complement(SetFunction):
    """g(A) = f(V - A).  Preserves submodularity."""

    def __init__(self, f: SetFunction):
        self.base = f
        self.n = f.n
        self.is_symmetric = f.is_symmetric
        self._full = full_mask(f.n)

    def _eval(self, mask):
        return self.base._eval(self._full & ~mask)

    def table(self):
        return self.base.table()[::-1].copy()

    def to_spec(self):
        return {"kind": "complement", "base": self.base.to_spec()}


class Contracted(SetFunction):
    """g(S) = f(S + {s}) on the ground set V - {s}.

    Elements of the new ground set are the old ids other than ``s``, in
    increasing order (old id ``v`` maps to ``v`` if ``v < s`` else ``v - 1``).
    """

    def __init__(self, f: SetFunction, s: int):
        if not 0 <= s < f.n:
            raise ValueError(f"terminal {s} out of range for ground set of size {f.n}")
        if f.n < 2:
            raise ValueError("cannot contract the only element")
        self.base = f
        self.terminal = int(s)
        self.n = f.n - 1
        self._low = (1 << s) - 1

    def lift(self, mask: int) -> int:
        """Map a mask over V - {s} to the parent ground set (without ``s``)."""
        return (mask & self._low) | ((mask & ~self._low) << 1)

    def _eval(self, mask):
        return self.base._eval(self.lift(mask) | (1 << self.terminal))

    def table(self):
        parent = self.base.table()
        masks = np.arange(1 << self.n, dtype=np.int64)
        lifted = (masks & self._low) | ((masks & ~self._low) << 1) | (1 << self.terminal)
        return parent[lifted]

    def to_spec(self):
        return {"kind": "contracted", "base": self.base.to_spec(), "terminal": self.terminal}


class SumFunction(SetFunction):
    def __init__(self, parts: Sequence[SetFunction]):
        if not parts:
            raise ValueError("empty sum")
        ns = {p.n for p in parts}
        if len(ns) != 1:
            raise ValueError("summands have different ground sets")
        self.parts = tuple(parts)
        self.n = ns.pop()
        self.is_monotone = all(p.is_monotone for p in parts)
        self.is_symmetric = all(p.is_symmetric for p in parts)

    def _eval(self, mask):
        return sum(p._eval(mask) for p in self.parts)

    def table(self):
        return sum(p.table() for p in self.parts)

    def to_spec(self):
        return {"kind": "sum", "parts": [p.to_spec() for p in self.parts]}


# ---------------------------------------------------------------------------
# constructors matching the operation names used across the package


def make_modular(weights) -> Modular:
    return Modular(weights)


def make_graph_cut(n: int, edges, scale: float = 1.0) -> GraphCut:
    return GraphCut(n, edges, scale)


def make_hypergraph_cut(h: WeightedHypergraph, scale: float = 1.0) -> HypergraphCut:
    return HypergraphCut(h, scale)


def make_hypergraph_separation(h: WeightedHypergraph) -> HypergraphSeparation:
    return HypergraphSeparation(h)


def contract_terminal(f: SetFunction, s: int) -> Contracted:
    return Contracted(f, s)


def oracle_from_spec(spec: dict) -> SetFunction:
    kind = spec["kind"]
    if kind == "modular":
        return Modular(spec["weights"])
    if kind == "graph_cut":
        return GraphCut(spec["n"], spec["edges"], spec.get("scale", 1.0))
    if kind in ("hypergraph_cut", "hypergraph_separation"):
        h = WeightedHypergraph.from_edges(
            spec["n"], [(e["verts"], e["w"], e.get("rep")) for e in spec["edges"]]
        )
        if kind == "hypergraph_cut":
            return HypergraphCut(h, spec.get("scale", 1.0))
        return HypergraphSeparation(h)
    if kind == "coverage":
        return Coverage(spec["covers"], spec["item_weights"])
    if kind == "facility":
        return Facility(spec["opening"], spec["connection"])
    if kind == "complement":
        return Complement(oracle_from_spec(spec["base"]))
    if kind == "contracted":
        return Contracted(oracle_from_spec(spec["base"]), spec["terminal"])
    if kind == "sum":
        return SumFunction([oracle_from_spec(p) for p in spec["parts"]])
    raise ValueError(f"unknown oracle kind {kind!r}")


# ---------------------------------------------------------------------------
# exhaustive property checks


def _checked_table(f: SetFunction, n: int | None) -> np.ndarray:
    n = f.n if n is None else n
    if n != f.n:
        raise ValueError(f"oracle has ground set {f.n}, asked to check {n}")
    if n > MAX_EXHAUSTIVE_N:
        raise ValueError(f"ground set of size {n} too large for exhaustive check (max {MAX_EXHAUSTIVE_N})")
    return f.table()


def check_submodular(f: SetFunction, n: int | None = None, tol: float = TOL) -> bool:
    """Exhaustive check via the local form f(S+a) + f(S+b) >= f(S+a+b) + f(S).

    The local inequality over all S and a, b outside S is equivalent to the
    pairwise definition over all A, B.
    """
    t = _checked_table(f, n)
    n = f.n
    masks = np.arange(1 << n, dtype=np.int64)
    for a in range(n):
        for b in range(a + 1, n):
            ab = (1 << a) | (1 << b)
            s = masks[(masks & ab) == 0]
            lhs = t[s | (1 << a)] + t[s | (1 << b)]
            rhs = t[s | ab] + t[s]
            if np.any(lhs < rhs - tol):
                return False
    return True


def check_monotone(f: SetFunction, n: int | None = None, tol: float = TOL) -> bool:
    t = _checked_table(f, n)
    masks = np.arange(1 << f.n, dtype=np.int64)
    for v in range(f.n):
        s = masks[(masks >> v) & 1 == 0]
        if np.any(t[s | (1 << v)] < t[s] - tol):
            return False
    return True


def check_symmetric(f: SetFunction, n: int | None = None, tol: float = TOL) -> bool:
    t = _checked_table(f, n)
    return bool(np.all(np.abs(t - t[::-1]) <= tol))
