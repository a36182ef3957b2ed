"""Generators, special constructions, reductions and JSON serialization."""

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from msca.core import WeightedHypergraph, check_submodular, check_symmetric
from msca.exact import exact_optimum
from msca.instances import (
    DistanceAssignment,
    NodeWeightedGraph,
    allocation_from_dict,
    allocation_to_dict,
    check_distance_feasible,
    dumps_instance,
    gen_ckr_tight_edge,
    gen_gap_example,
    hmc_optimum_by_edges,
    hmc_to_nwmc,
    instance_hash,
    loads_instance,
    map_x_to_distance,
    nwmc_optimum,
    nwmc_to_hmc,
    random_allocation,
    random_graph_mc,
    random_hmc,
    random_hmp,
    random_hypergraph,
    random_monotone_msca,
    random_nwmc,
    random_sublabel,
    random_submp,
    star_instance,
)
from msca.lovasz import objective
from msca.problems import HypergraphMC


# --- special constructions ----------------------------------------------------


@pytest.mark.parametrize("k,delta", [(5, 3), (3, 2), (4, 4), (5, 2)])
def test_gap_candidate_is_feasible_and_forbids_diagonal(k, delta):
    inst, x = gen_gap_example(k, delta)
    inst.check_allocation(x)
    assert np.array_equal(inst.forbidden, np.eye(k, dtype=bool))
    assert len(inst.hypergraph.edges) == math.comb(k, delta)
    assert exact_optimum(inst)[1] == pytest.approx(math.comb(k - 1, delta - 1))


@pytest.mark.parametrize("k,delta", [(5, 3), (3, 2), (4, 4), (5, 2), (6, 3)])
def test_connectivity_variant_candidate_value(k, delta):
    inst, x = gen_gap_example(k, delta, cut="connectivity")
    assert objective(inst, x) == pytest.approx(math.comb(k, delta) / (k - 1))
    assert exact_optimum(inst)[1] == pytest.approx(math.comb(k - 1, delta - 1))


def test_connectivity_variant_ratio():
    inst, x = gen_gap_example(5, 3, cut="connectivity")
    ratio = exact_optimum(inst)[1] / objective(inst, x)
    assert ratio == pytest.approx(3 * (1 - 1 / 5))


def test_gap_rejects_bad_sizes():
    with pytest.raises(ValueError):
        gen_gap_example(3, 4)
    with pytest.raises(ValueError):
        gen_gap_example(4, 2, cut="other")


@pytest.mark.parametrize("m,eps", [(3, 0.1), (4, 0.05), (2, 0.3)])
def test_tight_edge_construction(m, eps):
    inst, x = gen_ckr_tight_edge(m, eps=eps)
    inst.check_allocation(x)
    assert np.allclose(x.sum(axis=1), 1.0)
    assert objective(inst, x) == pytest.approx(eps)
    d = map_x_to_distance(inst.hypergraph, inst.terminals, x)
    assert d.d[-1] == pytest.approx(eps)


def test_tight_edge_needs_room():
    with pytest.raises(ValueError):
        gen_ckr_tight_edge(5, eps=0.3)


def test_star_kinds():
    for kind in ("graph_mc", "hypergraph_mp", "hypergraph_mc"):
        inst = star_instance(kind)
        assert inst.n == 4 and inst.k == 3
    with pytest.raises(ValueError):
        star_instance("tree")


# --- generators ---------------------------------------------------------------


def test_generators_are_reproducible():
    for make in (lambda s: random_graph_mc(8, 3, 0.5, (1, 4), s), lambda s: random_hmp(8, 3, 6, 3, s),
                 lambda s: random_sublabel(6, 3, 5, 3, s), lambda s: random_monotone_msca(5, 3, s),
                 lambda s: random_submp(6, 3, s)):
        assert dumps_instance(make(4)) == dumps_instance(make(4))


@given(n=st.integers(3, 10), k=st.integers(2, 3), m=st.integers(1, 8), delta=st.integers(2, 5),
       seed=st.integers(0, 10**6))
def test_hyperedge_sizes_respect_delta(n, k, m, delta, seed):
    delta = min(delta, n)
    h, terminals = random_hypergraph(n, k, m, delta, seed)
    assert len(terminals) == k
    assert h.max_edge_size <= delta


@given(n=st.integers(2, 10), seed=st.integers(0, 10**6))
@settings(max_examples=20)
def test_graph_instances_have_symmetric_submodular_oracles(n, seed):
    inst = random_graph_mc(n, 2, 0.5, (1, 4), seed)
    assert check_submodular(inst.f)
    assert check_symmetric(inst.f)


@given(seed=st.integers(0, 10**6), sparsity=st.sampled_from([0.0, 0.3, 0.8]))
def test_random_allocations_are_feasible(seed, sparsity):
    inst = random_sublabel(6, 4, 5, 3, seed % 30)
    inst.check_allocation(random_allocation(inst, seed, sparsity))


# --- reductions ---------------------------------------------------------------


def test_single_edge_becomes_one_weighted_vertex():
    h = WeightedHypergraph.from_edges(3, [((0, 1, 2), 4.0)])
    g = hmc_to_nwmc(h, [0, 1])
    assert g.n == 4
    assert g.weights[3] == 4.0
    assert sorted(g.edges) == [(0, 3), (1, 3), (2, 3)]
    assert list(g.undeletable) == [True, True, True, False]


def test_empty_hypergraph_reduction():
    h = WeightedHypergraph(3, ())
    g = hmc_to_nwmc(h, [0, 1])
    assert g.n == 3
    assert nwmc_optimum(g) == ([], 0.0)


def test_star_nwmc_to_hypergraph():
    g = NodeWeightedGraph(4, [(0, 3), (1, 3), (2, 3)], [0, 0, 0, 5.0], [False] * 4, (0, 1, 2))
    h, terminals = nwmc_to_hmc(g)
    assert terminals == (0, 1, 2)
    assert len(h.edges) == 1
    assert h.edges[0].weight == 5.0
    assert hmc_optimum_by_edges(h, terminals) == nwmc_optimum(g)[1] == 5.0


def test_adjacent_terminals_are_rejected():
    g = NodeWeightedGraph(2, [(0, 1)], [0, 0], [False, False], (0, 1))
    with pytest.raises(ValueError):
        nwmc_to_hmc(g)


def test_isolated_terminal_keeps_other_edges():
    g = NodeWeightedGraph(5, [(0, 3), (1, 3), (3, 4)], [0, 0, 0, 2.0, 1.0], [False] * 5, (0, 1, 2))
    h, terminals = nwmc_to_hmc(g)
    assert hmc_optimum_by_edges(h, terminals) == nwmc_optimum(g)[1] == 2.0


@pytest.mark.parametrize("seed", range(8))
def test_round_trip_reductions_preserve_optimum(seed):
    inst = random_hmc(6, 3, 4, 3, seed)
    opt = exact_optimum(inst)[1]
    g = hmc_to_nwmc(inst.hypergraph, inst.terminals)
    assert nwmc_optimum(g)[1] == pytest.approx(opt)
    assert hmc_optimum_by_edges(inst.hypergraph, inst.terminals) == pytest.approx(opt)
    h2, t2 = nwmc_to_hmc(g)
    assert hmc_optimum_by_edges(h2, t2) == pytest.approx(opt)


@pytest.mark.parametrize("seed", range(8))
def test_node_weighted_optimum_survives_conversion(seed):
    g = random_nwmc(6, 2, 0.5, seed)
    if not g.separates({v for v in range(g.n) if not g.undeletable[v]}):
        pytest.skip("terminals cannot be separated")
    h, terminals = nwmc_to_hmc(g)
    assert exact_optimum(HypergraphMC(h, terminals))[1] == pytest.approx(nwmc_optimum(g)[1])


@given(seed=st.integers(0, 10**6))
def test_mapped_distances_are_feasible_and_cost_no_more(seed):
    inst = random_hmc(7, 3, 5, 3, seed % 40)
    x = random_allocation(inst, seed)
    g = hmc_to_nwmc(inst.hypergraph, inst.terminals)
    d = map_x_to_distance(inst.hypergraph, inst.terminals, x)
    assert check_distance_feasible(g, d)
    assert d.cost(g) <= objective(inst, x) + 1e-9


def test_distance_checker_simple_cases():
    g = NodeWeightedGraph(3, [(0, 2), (1, 2)], [0, 0, 1.0], [False] * 3, (0, 1))
    assert not check_distance_feasible(g, DistanceAssignment(np.zeros(3)))
    assert check_distance_feasible(g, DistanceAssignment(np.array([0.0, 0.0, 1.0])))
    assert not check_distance_feasible(g, DistanceAssignment(np.array([0.0, 0.0, -1.0])))


def test_uniform_component_without_terminals_gets_zero_distance():
    h = WeightedHypergraph.from_edges(5, [((0, 2), 1.0), ((1, 2), 1.0), ((3, 4), 2.0)])
    x = np.array([[1, 0], [0, 1], [0.5, 0.5], [0.5, 0.5], [0.5, 0.5]], dtype=float)
    d = map_x_to_distance(h, (0, 1), x)
    assert d.d[5 + 2] == 0.0


# --- serialization ------------------------------------------------------------

MAKERS = [
    lambda s: random_graph_mc(7, 3, 0.5, (1, 4), s),
    lambda s: random_hmp(7, 3, 5, 3, s),
    lambda s: random_hmc(7, 3, 5, 3, s),
    lambda s: random_sublabel(6, 3, 5, 3, s),
    lambda s: random_sublabel(6, 3, 5, 3, s, h="cut", g="facility"),
    lambda s: random_monotone_msca(5, 3, s),
    lambda s: random_submp(6, 3, s),
    lambda s: gen_gap_example(4, 3)[0],
    lambda s: gen_gap_example(4, 3, cut="connectivity")[0],
]


@pytest.mark.parametrize("make", MAKERS)
@pytest.mark.parametrize("seed", range(3))
def test_instance_round_trip(make, seed):
    inst = make(seed)
    back = loads_instance(dumps_instance(inst))
    assert type(back) is type(inst)
    assert (back.n, back.k) == (inst.n, inst.k)
    assert np.array_equal(back.forbidden, inst.forbidden)
    assert back.pins == inst.pins
    for f, g in zip(inst.label_oracles(), back.label_oracles()):
        assert np.array_equal(f.table(), g.table())
    assert instance_hash(back) == instance_hash(inst)


def test_instance_schema_fields():
    d = json.loads(dumps_instance(random_hmc(5, 2, 3, 3, 0)))
    assert d["format"] == "msca-instance"
    assert d["version"] == "v1"
    assert {"type", "n", "k", "terminals", "edges"} <= set(d)
    assert all({"verts", "w", "rep"} <= set(e) for e in d["edges"])


def test_unknown_version_rejected():
    d = json.loads(dumps_instance(star_instance()))
    d["version"] = "v9"
    with pytest.raises(ValueError):
        loads_instance(json.dumps(d))


def test_hash_distinguishes_instances():
    assert instance_hash(random_hmp(6, 2, 4, 3, 0)) != instance_hash(random_hmp(6, 2, 4, 3, 1))


def test_allocation_round_trip_is_bit_exact():
    inst = random_hmp(6, 3, 4, 3, 0)
    x = random_allocation(inst, 0)
    d = json.loads(json.dumps(allocation_to_dict(x, inst, seed=3)))
    assert d["instance_hash"] == instance_hash(inst)
    assert np.array_equal(allocation_from_dict(d), x)
