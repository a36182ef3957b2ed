"""Rounding algorithms: fixed points, hand examples, seed determinism and small Monte-Carlo checks."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from msca.core import Facility, GraphCut, Modular, WeightedHypergraph, check_symmetric, members
from msca.exact import binomial_stderr, exact_optimum, harmonic, mean_stderr, run_trials
from msca.instances import (
    random_allocation,
    random_hmc,
    random_hmp,
    random_monotone_msca,
    random_sublabel,
    random_submp,
    random_symmetric,
    star_instance,
)
from msca.lovasz import lovasz_eval, objective
from msca.problems import MSCA, GraphMC, HypergraphMP, SubLabel
from msca.relax import solve, solve_lp
from msca.rounding import (
    ROUNDERS,
    ckr_round,
    draw_theta,
    half_round,
    iteration_cap,
    kt_round,
    monotone_greedy,
    sym_sublabel_round,
    sym_submp_round,
    theta_round,
    uncross,
)


def instance_for(name, seed):
    if name == "greedy":
        return random_monotone_msca(6, 3, seed)
    if name == "sym-label":
        return random_sublabel(7, 3, 5, 3, seed)
    if name == "kt":
        return random_monotone_msca(6, 3, seed)
    return random_hmp(7, 3, 6, 3, seed)


# --- theta rounding ---------------------------------------------------------


def test_theta_round_on_indicator():
    x = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 0.0]])
    for theta in (1e-9, 0.3, 1.0):
        assert theta_round(x, 0, theta) == 0b101
    assert theta_round(x, 0, 0.0) == 0b111


def test_theta_draws_never_hit_zero():
    rng = np.random.default_rng(0)
    draws = [draw_theta(rng) for _ in range(10000)]
    assert min(draws) > 0.0
    assert max(draws) <= 1.0


def test_theta_rounding_mean_matches_extension():
    f = GraphCut(5, [(0, 1, 1.0), (1, 2, 2.0), (2, 3, 1.0), (3, 4, 3.0), (0, 4, 1.0)])
    x = np.array([[0.9], [0.4], [0.4], [0.1], [0.7]])
    rng = np.random.default_rng(3)
    vals = [f(theta_round(x, 0, draw_theta(rng))) for _ in range(20000)]
    mean, se = mean_stderr(vals)
    assert abs(mean - lovasz_eval(f, x[:, 0])) <= 3 * se


# --- integral fixed points and shared invariants ----------------------------


@pytest.mark.parametrize("name", sorted(ROUNDERS))
@pytest.mark.parametrize("seed", range(3))
def test_integral_allocation_is_a_fixed_point(name, seed):
    inst = instance_for(name, seed)
    rng = np.random.default_rng(seed)
    labels = np.array([inst.pins.get(v, rng.choice(np.flatnonzero(inst.allowed[v])))
                       for v in range(inst.n)])
    x = inst.integral_allocation(labels)
    for t in range(5):
        out = ROUNDERS[name](inst, x, np.random.default_rng(t))
        assert np.array_equal(out.labels, labels)


@pytest.mark.parametrize("name", sorted(ROUNDERS))
@given(seed=st.integers(0, 10**6))
@settings(max_examples=15)
def test_outcomes_are_feasible_and_costed(name, seed):
    inst = instance_for(name, seed % 50)
    x = random_allocation(inst, seed, sparsity=0.3)
    out = ROUNDERS[name](inst, x, seed)
    assert out.labels.shape == (inst.n,)
    assert np.all(inst.allowed[np.arange(inst.n), out.labels])
    assert out.cost == pytest.approx(inst.cost(out.labels), abs=1e-9)


@pytest.mark.parametrize("name", sorted(ROUNDERS))
def test_same_seed_same_outcome(name):
    inst = instance_for(name, 7)
    x = random_allocation(inst, 7)
    a = ROUNDERS[name](inst, x, np.random.default_rng(99))
    b = ROUNDERS[name](inst, x, np.random.default_rng(99))
    assert np.array_equal(a.labels, b.labels)
    assert a.trace == b.trace


def test_integer_seed_and_generator_agree():
    inst = random_hmp(6, 3, 4, 3, 0)
    x = random_allocation(inst, 0)
    assert np.array_equal(kt_round(inst, x, 5).labels, kt_round(inst, x, np.random.default_rng(5)).labels)


# --- KT -----------------------------------------------------------------------


def test_kt_marginal_single_element():
    inst = MSCA([Modular([0.0]), Modular([0.0])])
    x = np.array([[0.7, 0.3]])
    trials = 5000
    outs = run_trials(kt_round, inst, x, trials, seed=0)
    freq = np.mean([o.labels[0] == 0 for o in outs])
    assert abs(freq - 0.7) <= 3 * math.sqrt(0.21 / trials)


def test_kt_modular_costs_are_unbiased():
    w = np.array([[1.0, 4.0, 2.0], [3.0, 0.5, 1.0], [2.0, 2.0, 5.0]])
    inst = MSCA([Modular(w[:, i]) for i in range(3)])
    x = np.array([[0.5, 0.2, 0.3], [0.1, 0.6, 0.3], [0.3, 0.3, 0.4]])
    outs = run_trials(kt_round, inst, x, 4000, seed=1)
    mean, se = mean_stderr([o.cost for o in outs])
    assert abs(mean - objective(inst, x)) <= 3 * se


def test_kt_fallback_after_cap():
    inst = random_monotone_msca(5, 3, 0)
    x = random_allocation(inst, 0)
    out = kt_round(inst, x, 0, max_iter=0)
    assert "fallback" in out.trace[-1]
    assert np.array_equal(out.labels, np.where(inst.allowed, x, -1).argmax(axis=1))
    assert np.all(out.assigned_at == 0)


def test_iteration_cap_formula():
    assert iteration_cap(10, 3) == 64 * 3 * math.ceil(math.log(11))


# --- CKR and half rounding ----------------------------------------------------


def test_ckr_on_terminal_triangle():
    inst = GraphMC(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)], [0, 1, 2])
    x = np.eye(3)
    out = ckr_round(inst, x, 0)
    assert list(out.labels) == [0, 1, 2]
    assert out.cost == pytest.approx(3.0)


def test_ckr_last_label_takes_remainder():
    h = WeightedHypergraph.from_edges(3, [((0, 1, 2), 1.0)])
    inst = HypergraphMP(h, [0, 1])
    x = np.array([[1.0, 0.0], [0.0, 1.0], [0.4, 0.6]])
    assert ckr_round(inst, x, theta=0.5, perm=[0, 1]).labels[2] == 1
    assert ckr_round(inst, x, theta=0.7, perm=[1, 0]).labels[2] == 0
    assert ckr_round(inst, x, theta=0.3, perm=[0, 1]).labels[2] == 0


def test_half_round_threshold_range():
    inst = star_instance("hypergraph_mc")
    x = np.vstack([np.eye(3), [0.2, 0.2, 0.6]])
    assert half_round(inst, x, theta=0.55).labels[3] == 2
    with pytest.raises(ValueError):
        half_round(inst, x, theta=0.5)


@given(seed=st.integers(0, 10**6), theta=st.floats(0.5, 1.0, exclude_min=True))
def test_no_element_clears_two_thresholds_above_one_half(seed, theta):
    inst = random_hmc(8, 4, 5, 3, seed % 20)
    x = random_allocation(inst, seed)
    sets = [theta_round(x, i, theta) for i in range(inst.k)]
    assert all(not (sets[i] & sets[j]) for i in range(inst.k) for j in range(i + 1, inst.k))


def test_partition_rounders_need_partition_instances():
    inst = random_monotone_msca(4, 2, 0)
    x = inst.uniform_allocation()
    for fn in (ckr_round, half_round, sym_submp_round):
        with pytest.raises(TypeError):
            fn(inst, x, 0)
    with pytest.raises(TypeError):
        sym_sublabel_round(random_hmp(5, 2, 3, 3, 0), random_allocation(random_hmp(5, 2, 3, 3, 0), 0), 0)


# --- uncrossing -----------------------------------------------------------------


def test_uncross_path_example():
    f = GraphCut(3, [(0, 1, 1.0), (1, 2, 1.0)])
    stats = {}
    out = uncross(f, [0b011, 0b110], stats)
    assert out == [0b011, 0b100]
    assert sum(f(s) for s in out) <= f(0b011) + f(0b110)
    assert stats["steps"] == 1


def test_uncross_leaves_disjoint_input_alone():
    f = random_symmetric(6, 0)
    sets = [0b000011, 0b001100, 0b110000]
    assert uncross(f, sets) == sets


@given(n=st.integers(2, 8), seed=st.integers(0, 10**6), count=st.integers(1, 5))
def test_uncross_postconditions(n, seed, count):
    f = random_symmetric(n, seed)
    assert check_symmetric(f)
    rng = np.random.default_rng(seed)
    sets = [int(rng.integers(1 << n)) for _ in range(count)]
    stats = {}
    out = uncross(f, sets, stats)
    assert all(o & ~a == 0 for o, a in zip(out, sets))
    assert all(out[i] & out[j] == 0 for i in range(count) for j in range(i + 1, count))
    union_in = union_out = 0
    for a, o in zip(sets, out):
        union_in |= a
        union_out |= o
    assert union_in == union_out
    assert sum(f(o) for o in out) <= sum(f(a) for a in sets) + 1e-9
    assert stats["steps"] <= sum(len(members(a)) for a in sets) ** 2


# --- symmetric partition --------------------------------------------------------


def test_relabel_variant_moves_heaviest_label_last():
    inst = random_submp(7, 3, 4)
    x = random_allocation(inst, 4)
    out = sym_submp_round(inst, x, 0, "relabel")
    order = out.trace[0]["order"]
    ext = [lovasz_eval(inst.f, x[:, i]) for i in range(3)]
    assert order[-1] == int(np.argmax(ext))
    with pytest.raises(ValueError):
        sym_submp_round(inst, x, 0, "fancy")


@pytest.mark.parametrize("kind,frac", [("graph_mc", 2.0), ("hypergraph_mp", 4.0)])
def test_star_mean_cost_within_three_halves(kind, frac):
    inst = star_instance(kind)
    x = solve_lp(inst).x
    assert objective(inst, x) == pytest.approx(frac)
    outs = run_trials(lambda i, y, r: sym_submp_round(i, y, r), inst, x, 3000, seed=0)
    mean, se = mean_stderr([o.cost for o in outs])
    assert mean <= 1.5 * frac + 3 * se


def test_sym_rounding_on_random_partition_is_at_least_optimal():
    inst = random_submp(7, 3, 1)
    opt = exact_optimum(inst)[1]
    x = random_allocation(inst, 1)
    for t in range(30):
        assert sym_submp_round(inst, x, t, "plain").cost >= opt - 1e-9


# --- monotone greedy ----------------------------------------------------------------


def test_greedy_single_element():
    inst = MSCA([Modular([1.0]), Modular([5.0])])
    out = monotone_greedy(inst, np.array([[1.0, 0.0]]))
    assert list(out.labels) == [0]
    assert out.cost == 1.0


@pytest.mark.parametrize("seed", range(6))
def test_greedy_modular_bound(seed):
    rng = np.random.default_rng(seed)
    w = rng.integers(1, 6, size=(6, 3)).astype(float)
    inst = MSCA([Modular(w[:, i]) for i in range(3)])
    x = random_allocation(inst, seed)
    out = monotone_greedy(inst, x)
    assert out.cost <= harmonic(6) * objective(inst, x) + 1e-9
    assert out.cost >= w.min(axis=1).sum() - 1e-9


def test_greedy_facility_toy():
    inst = MSCA([Facility(2.0, [1.0, 1.0]), Facility(1.0, [2.0, 0.5])])
    opt = exact_optimum(inst)[1]
    x = inst.uniform_allocation()
    out = monotone_greedy(inst, x)
    assert out.cost >= opt
    assert out.cost <= harmonic(2) * objective(inst, x) + 1e-9


# --- labeling -----------------------------------------------------------------------


def test_sublabel_toy_between_optimum_and_log_factor():
    inst = random_sublabel(6, 3, 5, 3, 2, h="cut")
    frac = solve(inst).objective
    opt = exact_optimum(inst)[1]
    x = solve(inst).x
    outs = run_trials(sym_sublabel_round, inst, x, 500, seed=0)
    mean = np.mean([o.cost for o in outs])
    assert min(o.cost for o in outs) >= opt - 1e-9
    assert mean <= 10 * math.log(inst.n) * frac + 1e-9


def test_sublabel_with_zero_separation_follows_assignment_marginals():
    n = 2
    h = Modular(np.zeros(n))
    inst = SubLabel([Modular([1.0, 1.0]), Modular([1.0, 1.0])], h)
    x = np.array([[0.8, 0.2], [0.8, 0.2]])
    outs = run_trials(sym_sublabel_round, inst, x, 3000, seed=0)
    freq = np.mean([o.labels[0] == 0 for o in outs])
    # overlapping balls are resolved in label order, so the first label can only gain
    assert freq >= 0.8 - 3 * binomial_stderr(0.8, 3000)


@pytest.mark.parametrize("seed", range(3))
def test_kt_on_labeling_meets_both_component_bounds(seed):
    inst = random_sublabel(8, 3, 6, 3, seed)
    x = random_allocation(inst, seed)
    assign_frac = sum(lovasz_eval(g, x[:, i]) for i, g in enumerate(inst.g))
    sep_frac = sum(lovasz_eval(inst.h, x[:, i]) for i in range(inst.k))
    delta = inst.hypergraph.max_edge_size
    outs = run_trials(kt_round, inst, x, 3000, seed=seed)
    a_mean, a_se = mean_stderr([inst.assignment_cost(o.labels) for o in outs])
    s_mean, s_se = mean_stderr([inst.separation_cost(o.labels) for o in outs])
    # modular assignment costs are reproduced exactly in expectation
    assert abs(a_mean - assign_frac) <= 3 * a_se + 1e-9
    assert s_mean <= delta * sep_frac + 3 * s_se
