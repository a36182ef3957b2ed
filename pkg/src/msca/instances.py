"""Instance constructors, special constructions, reductions and serialization."""

from __future__ import annotations

import hashlib
import heapq
import json
import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .core import (
    Complement,
    Contracted,
    Coverage,
    Facility,
    GraphCut,
    HypergraphCut,
    HypergraphSeparation,
    Modular,
    SetFunction,
    SumFunction,
    WeightedHypergraph,
    oracle_from_spec,
)
from .problems import MSCA, GraphMC, HypergraphMC, HypergraphMP, Instance, SubLabel, SubMP

FORMAT_VERSION = "v1"
DISTANCE_TOL = 1e-9


# ---------------------------------------------------------------------------
# node-weighted graphs and distances


@dataclass
class NodeWeightedGraph:
    """Graph with vertex weights; ``undeletable[v]`` marks infinite-weight vertices.

    Terminals are always undeletable.  The weight stored for an undeletable
    vertex is ignored.
    """

    n: int
    edges: list[tuple[int, int]]
    weights: np.ndarray
    undeletable: np.ndarray
    terminals: tuple[int, ...]

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float)
        self.undeletable = np.asarray(self.undeletable, dtype=bool).copy()
        self.edges = [(int(u), int(v)) for u, v in self.edges]
        self.terminals = tuple(int(t) for t in self.terminals)
        if self.weights.shape != (self.n,) or self.undeletable.shape != (self.n,):
            raise ValueError("weights and flags must have one entry per vertex")
        if len(set(self.terminals)) != len(self.terminals):
            raise ValueError("duplicate terminals")
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n) or u == v:
                raise ValueError(f"bad edge ({u}, {v})")
        self.undeletable[list(self.terminals)] = True
        if np.any(self.weights[~self.undeletable] < 0):
            raise ValueError("deletable vertices need non-negative weights")

    def adjacency(self) -> list[list[int]]:
        adj = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def separates(self, deleted: set) -> bool:
        """True when no two terminals share a component after removing ``deleted``."""
        parent = list(range(self.n))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for u, v in self.edges:
            if u not in deleted and v not in deleted:
                parent[find(u)] = find(v)
        roots = [find(t) for t in self.terminals]
        return len(set(roots)) == len(roots)


@dataclass
class DistanceAssignment:
    """Non-negative distance label per vertex of a node-weighted graph (0 on terminals)."""

    d: np.ndarray

    def cost(self, g: NodeWeightedGraph) -> float:
        finite = ~g.undeletable
        return float(np.dot(self.d[finite], g.weights[finite]))


def hmc_to_nwmc(h: WeightedHypergraph, terminals) -> NodeWeightedGraph:
    """Bipartite graph: original vertices (undeletable) plus one vertex of weight w(e) per edge.

    Vertex ``h.n + j`` stands for edge ``j`` and is joined to every vertex of it.
    """
    terminals = tuple(int(t) for t in terminals)
    n = h.n + len(h.edges)
    weights = np.zeros(n)
    undeletable = np.zeros(n, dtype=bool)
    undeletable[: h.n] = True
    edges = []
    for j, e in enumerate(h.edges):
        z = h.n + j
        weights[z] = e.weight
        edges.extend((v, z) for v in e.verts)
    return NodeWeightedGraph(n, edges, weights, undeletable, terminals)


def nwmc_to_hmc(g: NodeWeightedGraph):
    """Hypergraph with one edge per deletable non-terminal vertex.

    Every edge between two non-terminals is subdivided.  Hypergraph vertices
    are the terminals (ids ``0..k-1`` in terminal order) followed by the
    subdivision vertices.  The edge for vertex v collects v's neighbours in the
    subdivided graph and has weight w(v).  Undeletable non-terminals get a
    weight larger than all finite weights combined, so no optimal cut uses
    them.  Returns ``(hypergraph, terminals)``.
    """
    term = set(g.terminals)
    for u, v in g.edges:
        if u in term and v in term:
            raise ValueError(
                f"terminals {u} and {v} are adjacent; subdivide that edge with a "
                "deletable vertex first so that terminals form an independent set"
            )
    ids = {t: i for i, t in enumerate(g.terminals)}
    nbrs = {v: [] for v in range(g.n) if v not in term}
    nxt = len(ids)
    for u, v in g.edges:
        if u in term:
            nbrs[v].append(ids[u])
        elif v in term:
            nbrs[u].append(ids[v])
        else:
            nbrs[u].append(nxt)
            nbrs[v].append(nxt)
            nxt += 1
    big = 1.0 + float(g.weights[~g.undeletable].sum())
    edges = []
    for v, verts in nbrs.items():
        verts = sorted(set(verts))
        if not verts:
            continue
        w = big if g.undeletable[v] else float(g.weights[v])
        edges.append((verts, w))
    return WeightedHypergraph.from_edges(max(nxt, 1), edges), tuple(range(len(ids)))


def map_x_to_distance(h: WeightedHypergraph, terminals, x) -> DistanceAssignment:
    """Distances on ``hmc_to_nwmc(h, terminals)``: 0 on original vertices and
    ``d_z = sum_i x(r(e), i) - min_{v in e} x(v, i)`` on the vertex of edge e."""
    inst = HypergraphMC(h, terminals)
    x = inst.check_allocation(x)
    d = np.zeros(h.n + len(h.edges))
    for j, e in enumerate(h.edges):
        rows = x[list(e.verts)]
        d[h.n + j] = max(0.0, float((x[e.rep] - rows.min(axis=0)).sum()))
    return DistanceAssignment(d)


def terminal_distances(g: NodeWeightedGraph, d: DistanceAssignment) -> np.ndarray:
    """Pairwise shortest terminal-to-terminal path lengths, counting ``d`` on every
    vertex strictly inside the path."""
    d = np.asarray(d.d if isinstance(d, DistanceAssignment) else d, dtype=float)
    adj = g.adjacency()
    term = set(g.terminals)
    k = len(g.terminals)
    out = np.full((k, k), math.inf)
    for a, s in enumerate(g.terminals):
        dist = {s: 0.0}
        heap = [(0.0, s)]
        while heap:
            du, u = heapq.heappop(heap)
            if du > dist.get(u, math.inf):
                continue
            for v in adj[u]:
                # entering v costs d_v unless v is a terminal (an endpoint)
                dv = du + (0.0 if v in term else d[v])
                if dv < dist.get(v, math.inf):
                    dist[v] = dv
                    heapq.heappush(heap, (dv, v))
        for b, t in enumerate(g.terminals):
            out[a, b] = dist.get(t, math.inf)
    return out


def check_distance_feasible(g: NodeWeightedGraph, d: DistanceAssignment, tol: float = DISTANCE_TOL) -> bool:
    """True iff every path between two distinct terminals has interior distance >= 1 - tol."""
    dd = np.asarray(d.d if isinstance(d, DistanceAssignment) else d, dtype=float)
    if dd.shape != (g.n,) or np.any(dd < 0):
        return False
    dist = terminal_distances(g, dd)
    off = ~np.eye(len(g.terminals), dtype=bool)
    return bool(np.all(dist[off] >= 1.0 - tol))


def nwmc_optimum(g: NodeWeightedGraph):
    """Cheapest set of deletable vertices separating all terminals, by enumeration.

    Returns ``(sorted vertex list, weight)``; ties go to the earliest subset in
    size-then-lexicographic order.
    """
    cand = [v for v in range(g.n) if not g.undeletable[v]]
    if len(cand) > 22:
        raise ValueError("too many deletable vertices to enumerate")
    best = None
    for r in range(len(cand) + 1):
        for combo in combinations(cand, r):
            w = float(g.weights[list(combo)].sum()) if combo else 0.0
            if best is not None and w >= best[1] - 1e-12:
                continue
            if g.separates(set(combo)):
                best = (list(combo), w)
    if best is None:
        raise ValueError("terminals cannot be separated by deletable vertices")
    return best


def hmc_optimum_by_edges(h: WeightedHypergraph, terminals) -> float:
    """Cheapest set of hyperedges whose removal leaves every terminal in its own component."""
    m = len(h.edges)
    if m > 20:
        raise ValueError("too many hyperedges to enumerate")
    best = math.inf
    for removed in range(1 << m):
        w = sum(h.edges[j].weight for j in range(m) if removed >> j & 1)
        if w >= best:
            continue
        parent = list(range(h.n))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for j, e in enumerate(h.edges):
            if not removed >> j & 1:
                for v in e.verts[1:]:
                    parent[find(v)] = find(e.verts[0])
        roots = {find(t) for t in terminals}
        if len(roots) == len(terminals):
            best = w
    return float(best)


# ---------------------------------------------------------------------------
# special constructions


def gen_gap_example(k: int, delta: int, cut: str = "separation"):
    """Complete ``delta``-uniform hypergraph on k vertices with k labels; vertex i may not take label i.

    Assignment costs are zero.  ``cut="separation"`` uses the
    representative-based separation function (representative = smallest
    vertex); ``cut="connectivity"`` uses its complement, which charges each
    edge (number of labels on it) - 1.  Both give the same integral optimum.
    Returns the instance and the candidate allocation x(i, j) = 1/(k-1), j != i.
    """
    if not 2 <= delta <= k:
        raise ValueError("need 2 <= delta <= k")
    h = WeightedHypergraph.from_edges(k, [(e, 1.0) for e in combinations(range(k), delta)])
    sep = HypergraphSeparation(h)
    if cut == "separation":
        hf = sep
    elif cut == "connectivity":
        hf = Complement(sep)
    else:
        raise ValueError("cut must be 'separation' or 'connectivity'")
    forbidden = np.eye(k, dtype=bool)
    inst = SubLabel([Modular([0.0] * k) for _ in range(k)], hf, forbidden=forbidden)
    x = (1.0 - np.eye(k)) / (k - 1)
    return inst, x


def gen_ckr_tight_edge(m: int, k: int | None = None, eps: float = 0.1):
    """Single hyperedge of size m whose separation distance is exactly ``eps``.

    Vertex 0 is the representative u with ``x(u, i) = (m - i) eps`` for labels
    i = 2..m (1-based) and the rest on label 1.  Edge vertex ``j`` (j = 1..m-1)
    moves eps from label 1 to label j + 1.  Terminals are separate vertices
    ``m .. m + k - 1``.  Returns ``(instance, x)``.
    """
    if m < 2:
        raise ValueError("edge size must be at least 2")
    k = m if k is None else k
    if k < m:
        raise ValueError("need k >= m")
    u = np.zeros(k)
    for i in range(2, m + 1):
        u[i - 1] = (m - i) * eps
    u[0] = 1.0 - u.sum()
    if not (0 < eps and u[0] - eps >= 0):
        raise ValueError(f"eps = {eps} out of range for m = {m}")
    n = m + k
    x = np.zeros((n, k))
    x[0] = u
    for j in range(1, m):
        x[j] = u
        x[j, 0] -= eps
        x[j, j] += eps
    terminals = tuple(range(m, m + k))
    for i, s in enumerate(terminals):
        x[s, i] = 1.0
    h = WeightedHypergraph.from_edges(n, [(tuple(range(m)), 1.0, 0)])
    return HypergraphMC(h, terminals), x


def star_instance(kind: str = "graph_mc", leaves: int = 3):
    """Star with terminal leaves ``0..leaves-1`` and centre ``leaves``, unit weights."""
    c = leaves
    if kind == "graph_mc":
        return GraphMC(leaves + 1, [(i, c, 1.0) for i in range(leaves)], range(leaves))
    h = WeightedHypergraph.from_graph(leaves + 1, [(i, c, 1.0) for i in range(leaves)])
    if kind == "hypergraph_mp":
        return HypergraphMP(h, range(leaves))
    if kind == "hypergraph_mc":
        return HypergraphMC(h, range(leaves))
    raise ValueError(f"unknown kind {kind!r}")


# ---------------------------------------------------------------------------
# random generators


def _weights(rng, size, weight_range):
    lo, hi = weight_range
    return rng.integers(int(lo), int(hi) + 1, size=size).astype(float)


def _terminals(rng, n, k):
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    return tuple(int(t) for t in sorted(rng.choice(n, size=k, replace=False)))


def random_graph_mc(n: int, k: int, density: float = 0.5, weight_range=(1, 4), seed: int = 0) -> GraphMC:
    """Erdos-Renyi graph with integer weights and k random terminals."""
    rng = np.random.default_rng(seed)
    terminals = _terminals(rng, n, k)
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    keep = rng.random(len(pairs)) < density
    w = _weights(rng, len(pairs), weight_range)
    edges = [(u, v, float(wt)) for (u, v), kp, wt in zip(pairs, keep, w) if kp]
    return GraphMC(n, edges, terminals)


def random_hypergraph(n: int, k: int, m: int, delta: int, seed: int = 0, weight_range=(1, 4)):
    """``m`` random hyperedges of sizes 2..delta with random representatives, plus k terminals.

    Returns ``(hypergraph, terminals)``.
    """
    if delta < 2 or delta > n:
        raise ValueError("need 2 <= delta <= n")
    rng = np.random.default_rng(seed)
    terminals = _terminals(rng, n, k)
    edges = []
    for w in _weights(rng, m, weight_range):
        size = int(rng.integers(2, delta + 1))
        verts = tuple(sorted(int(v) for v in rng.choice(n, size=size, replace=False)))
        rep = int(rng.choice(verts))
        edges.append((verts, float(w), rep))
    return WeightedHypergraph.from_edges(n, edges), terminals


def random_hmc(n, k, m, delta, seed=0, weight_range=(1, 4)) -> HypergraphMC:
    return HypergraphMC(*random_hypergraph(n, k, m, delta, seed, weight_range))


def random_hmp(n, k, m, delta, seed=0, weight_range=(1, 4)) -> HypergraphMP:
    return HypergraphMP(*random_hypergraph(n, k, m, delta, seed, weight_range))


def random_sublabel(n: int, k: int, m: int, delta: int, seed: int = 0, h: str = "separation",
                    g: str = "modular", cost_range=(0, 4), weight_range=(1, 4)) -> SubLabel:
    """Labeling instance on a random hypergraph.

    ``h`` is ``"separation"`` (hypergraph separation) or ``"cut"`` (hypergraph
    cut, symmetric); ``g`` is ``"modular"`` or ``"facility"`` (monotone).
    """
    rng = np.random.default_rng(seed)
    hyper, _ = random_hypergraph(n, 1, m, delta, int(rng.integers(2**31)), weight_range)
    if h == "separation":
        hf = HypergraphSeparation(hyper)
    elif h == "cut":
        hf = HypergraphCut(hyper)
    else:
        raise ValueError("h must be 'separation' or 'cut'")
    if g == "modular":
        gs = [Modular(_weights(rng, n, cost_range)) for _ in range(k)]
    elif g == "facility":
        gs = [Facility(float(rng.integers(0, 4)), _weights(rng, n, cost_range)) for _ in range(k)]
    else:
        raise ValueError("g must be 'modular' or 'facility'")
    return SubLabel(gs, hf)


def random_monotone_msca(n: int, k: int, seed: int = 0, family: str = "mixed") -> MSCA:
    """Allocation instance whose oracles are monotone with f(empty) = 0."""
    rng = np.random.default_rng(seed)
    oracles = []
    for i in range(k):
        fam = family if family != "mixed" else ("modular", "facility", "coverage")[i % 3]
        if fam == "modular":
            oracles.append(Modular(_weights(rng, n, (0, 5))))
        elif fam == "facility":
            oracles.append(Facility(float(rng.integers(1, 6)), _weights(rng, n, (0, 3))))
        elif fam == "coverage":
            items = int(rng.integers(2, n + 2))
            covers = [sorted(int(t) for t in rng.choice(items, size=int(rng.integers(1, min(3, items) + 1)),
                                                        replace=False)) for _ in range(n)]
            oracles.append(Coverage(covers, _weights(rng, items, (1, 4))))
        else:
            raise ValueError(f"unknown family {fam!r}")
    return MSCA(oracles)


def random_symmetric(n: int, seed: int = 0) -> SetFunction:
    """Random symmetric submodular function: a graph cut plus a hypergraph cut."""
    rng = np.random.default_rng(seed)
    g = random_graph_mc(n, 1, 0.5, (0, 3), int(rng.integers(2**31)))
    hyper, _ = random_hypergraph(n, 1, max(1, n // 2), min(4, n), int(rng.integers(2**31)))
    return SumFunction([GraphCut(n, g.edges), HypergraphCut(hyper)])


def random_submp(n: int, k: int, seed: int = 0) -> SubMP:
    """Multiway partition with a random symmetric submodular oracle."""
    rng = np.random.default_rng(seed)
    f = random_symmetric(n, int(rng.integers(2**31)))
    return SubMP(f, _terminals(rng, n, k))


ORACLE_FAMILIES = ("modular", "graph_cut", "hypergraph_cut", "separation", "coverage",
                   "facility", "complement", "contracted", "sum")


def random_oracle(n: int, family: str, seed=0) -> SetFunction:
    """Random member of one built-in oracle family on ``n`` elements."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    sub = lambda: int(rng.integers(2**31))
    if family == "modular":
        return Modular(_weights(rng, n, (0, 5)))
    if family == "graph_cut":
        return GraphCut(n, random_graph_mc(n, 1, 0.5, (1, 4), sub()).edges, float(rng.choice([0.5, 1.0])))
    if family in ("hypergraph_cut", "separation"):
        if n < 2:
            return Modular(np.zeros(n))
        hyper, _ = random_hypergraph(n, 1, max(1, n // 2 + 1), min(4, n), sub())
        return HypergraphCut(hyper) if family == "hypergraph_cut" else HypergraphSeparation(hyper)
    if family == "coverage":
        items = int(rng.integers(1, n + 3))
        covers = [sorted(int(t) for t in rng.choice(items, size=int(rng.integers(0, min(3, items) + 1)),
                                                    replace=False)) for _ in range(n)]
        return Coverage(covers, _weights(rng, items, (1, 4)))
    if family == "facility":
        return Facility(float(rng.integers(0, 4)), _weights(rng, n, (0, 3)))
    if family == "complement":
        return Complement(random_oracle(n, "separation", sub()))
    if family == "contracted":
        base = random_oracle(n + 1, str(rng.choice(["graph_cut", "separation", "coverage"])), sub())
        return Contracted(base, int(rng.integers(n + 1)))
    if family == "sum":
        fams = rng.choice(["modular", "graph_cut", "separation", "facility"], size=2, replace=False)
        return SumFunction([random_oracle(n, str(f), sub()) for f in fams])
    raise ValueError(f"unknown oracle family {family!r}")


def random_nwmc(n: int, k: int, density: float = 0.5, seed: int = 0, weight_range=(1, 4),
                undeletable_prob: float = 0.2) -> NodeWeightedGraph:
    """Random node-weighted graph whose terminals form an independent set."""
    rng = np.random.default_rng(seed)
    terminals = _terminals(rng, n, k)
    term = set(terminals)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n)
             if rng.random() < density and not (u in term and v in term)]
    weights = _weights(rng, n, weight_range)
    undeletable = rng.random(n) < undeletable_prob
    return NodeWeightedGraph(n, edges, weights, undeletable, terminals)


def random_allocation(instance: Instance, seed=0, sparsity: float = 0.0) -> np.ndarray:
    """Random feasible allocation: Dirichlet rows over allowed labels.

    With ``sparsity > 0`` each allowed entry is zeroed with that probability
    (keeping at least one per row), which produces ties and exact zeros.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    x = np.zeros((instance.n, instance.k))
    for v in range(instance.n):
        idx = np.flatnonzero(instance.allowed[v])
        if sparsity > 0 and idx.size > 1:
            keep = rng.random(idx.size) >= sparsity
            if not keep.any():
                keep[rng.integers(idx.size)] = True
            idx = idx[keep]
        x[v, idx] = rng.dirichlet(np.ones(idx.size))
    return x


# ---------------------------------------------------------------------------
# serialization


def _edges_json(h: WeightedHypergraph):
    return [{"verts": list(e.verts), "w": e.weight, "rep": e.rep} for e in h.edges]


def _hyper_from_json(n, edges):
    return WeightedHypergraph.from_edges(n, [(e["verts"], e["w"], e.get("rep")) for e in edges])


def instance_to_dict(instance: Instance) -> dict:
    d = {"format": "msca-instance", "version": FORMAT_VERSION, "type": instance.kind,
         "n": instance.n, "k": instance.k}
    if isinstance(instance, SubMP):
        d["terminals"] = list(instance.terminals)
    if isinstance(instance, GraphMC):
        d["edges"] = [{"verts": [u, v], "w": w} for u, v, w in instance.edges]
    elif isinstance(instance, (HypergraphMP, HypergraphMC)):
        d["edges"] = _edges_json(instance.hypergraph)
    elif isinstance(instance, SubMP):
        d["oracle"] = instance.f.to_spec()
    elif isinstance(instance, SubLabel):
        if all(isinstance(g, Modular) for g in instance.g):
            d["costs"] = [list(g.weights.tolist()) for g in instance.g]
        else:
            d["assignment"] = [g.to_spec() for g in instance.g]
        d["separation"] = instance.h.to_spec()
    elif isinstance(instance, MSCA):
        d["oracles"] = [f.to_spec() for f in instance.oracles]
    else:
        raise TypeError(f"cannot serialize {type(instance).__name__}")
    if instance.forbidden.any():
        d["forbidden"] = [[v, i] for v, i in zip(*np.nonzero(instance.forbidden))]
        d["forbidden"] = [[int(v), int(i)] for v, i in d["forbidden"]]
    return d


def instance_from_dict(d: dict) -> Instance:
    if d.get("version", FORMAT_VERSION) != FORMAT_VERSION:
        raise ValueError(f"unsupported instance format version {d.get('version')!r}")
    kind, n = d["type"], int(d["n"])
    forbidden = None
    if d.get("forbidden"):
        forbidden = np.zeros((n, int(d["k"])), dtype=bool)
        for v, i in d["forbidden"]:
            forbidden[v, i] = True
    if kind == "graph_mc":
        return GraphMC(n, [(e["verts"][0], e["verts"][1], e["w"]) for e in d["edges"]], d["terminals"])
    if kind == "hypergraph_mp":
        return HypergraphMP(_hyper_from_json(n, d["edges"]), d["terminals"])
    if kind == "hypergraph_mc":
        return HypergraphMC(_hyper_from_json(n, d["edges"]), d["terminals"])
    if kind == "submp":
        return SubMP(oracle_from_spec(d["oracle"]), d["terminals"])
    if kind == "sublabel":
        if "costs" in d:
            g = [Modular(c) for c in d["costs"]]
        else:
            g = [oracle_from_spec(s) for s in d["assignment"]]
        return SubLabel(g, oracle_from_spec(d["separation"]), forbidden=forbidden)
    if kind == "msca":
        return MSCA([oracle_from_spec(s) for s in d["oracles"]], forbidden=forbidden)
    raise ValueError(f"unknown instance type {kind!r}")


def dumps_instance(instance: Instance) -> str:
    return json.dumps(instance_to_dict(instance), indent=1)


def loads_instance(text: str) -> Instance:
    return instance_from_dict(json.loads(text))


def instance_hash(instance: Instance) -> str:
    canon = json.dumps(instance_to_dict(instance), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def allocation_to_dict(x, instance: Instance | None = None, **meta) -> dict:
    x = np.asarray(x, dtype=float)
    d = {"format": "msca-allocation", "version": FORMAT_VERSION,
         "n": int(x.shape[0]), "k": int(x.shape[1]), "x": x.ravel().tolist()}
    if instance is not None:
        d["instance_hash"] = instance_hash(instance)
    d.update(meta)
    return d


def allocation_from_dict(d: dict) -> np.ndarray:
    if d.get("version", FORMAT_VERSION) != FORMAT_VERSION:
        raise ValueError(f"unsupported allocation format version {d.get('version')!r}")
    return np.asarray(d["x"], dtype=float).reshape(int(d["n"]), int(d["k"]))


__all__ = [
    "DistanceAssignment", "NodeWeightedGraph", "check_distance_feasible", "gen_ckr_tight_edge",
    "gen_gap_example", "hmc_optimum_by_edges", "hmc_to_nwmc", "map_x_to_distance",
    "nwmc_optimum", "nwmc_to_hmc", "random_allocation", "random_graph_mc", "random_hmc",
    "random_hmp", "random_hypergraph", "random_monotone_msca", "random_sublabel",
    "random_submp", "random_symmetric", "random_oracle", "random_nwmc", "ORACLE_FAMILIES", "star_instance", "terminal_distances",
    "instance_to_dict", "instance_from_dict", "dumps_instance", "loads_instance",
    "instance_hash", "allocation_to_dict", "allocation_from_dict",
]
