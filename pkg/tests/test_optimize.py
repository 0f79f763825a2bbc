import math

import numpy as np
import pytest

from diversified_influence.cascade import RngSpec, SpreadModel
from diversified_influence.exact_oracle import exhaustive_best
from diversified_influence.network import CommunityStructure, Network
from diversified_influence.objectives import (
    AdimObjective,
    CallableObjective,
    ExactSpread,
    GlobalSpreadObjective,
    LinearCommunityObjective,
    ModularObjective,
    MonteCarloSpread,
    SdimObjective,
    propagated_se,
)
from diversified_influence.optimize import (
    GREEDY_FACTOR,
    greedy,
    random_greedy,
    top_k_pool,
    upper_greedy,
)
from diversified_influence.utility import (
    AdimFamily,
    AdimUtilitySpec,
    SdimFamily,
    SdimUtilitySpec,
    SimilarityFunction,
    SimilarityKind,
)

IC = SpreadModel.IC


def random_instance(seed: int, n: int = 7, C: int = 2):
    """A random directed network of ``n`` nodes with few stochastic edges."""
    gen = np.random.default_rng(seed)
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    picked = gen.choice(len(pairs), size=9, replace=False)
    edges = [(*pairs[i], float(gen.choice([0.2, 0.5, 0.8]))) for i in sorted(picked)]
    net = Network.from_edges(n, edges)
    assignments = {u: int(gen.integers(C)) for u in range(n)}
    assignments[0], assignments[1] = 0, 1
    cs = CommunityStructure.from_assignments(n, assignments, C)
    return net, cs


def test_modular_greedy():
    result = greedy(ModularObjective([3, 2, 1]), 2, range(3))
    assert result.seeds == (0, 1)
    assert result.objective == 5.0
    assert [step.gain for step in result.candidate_log] == [3.0, 2.0]


def test_zero_budget():
    f = ModularObjective([3, 2, 1])
    result = greedy(f, 0, range(3))
    assert result.seeds == ()
    assert result.objective == f.value(frozenset())


def test_budget_exceeding_universe():
    with pytest.raises(ValueError):
        greedy(ModularObjective([1, 1]), 3, range(2))
    with pytest.raises(ValueError):
        random_greedy(ModularObjective([1, 1]), 3, range(2), RngSpec(1))


def test_ties_go_to_the_lowest_id():
    result = greedy(CallableObjective(len), 2, [5, 3, 4])
    assert result.seeds == (3, 4)


def test_certain_path_picks_its_head():
    net = Network.from_edges(3, [(0, 1, 1.0), (1, 2, 1.0)])
    result = greedy(GlobalSpreadObjective(ExactSpread(net, IC)), 1, range(3))
    assert result.seeds == (0,)
    assert result.objective == 3.0


def test_lazy_greedy_matches_plain(overlap_dataset):
    source = ExactSpread(overlap_dataset.network, IC, overlap_dataset.communities)
    f = GlobalSpreadObjective(source)
    plain = greedy(f, 3, range(8))
    lazy = greedy(f, 3, range(8), lazy=True)
    assert lazy.algorithm == 'lazy-greedy'
    assert lazy.objective == pytest.approx(plain.objective, abs=1e-12)
    assert lazy.diagnostics['gain_evaluations'] <= 8 + 7 + 6


def test_lazy_greedy_needs_certified_objective(overlap_dataset):
    source = MonteCarloSpread(
        overlap_dataset.network, IC, overlap_dataset.communities, 50, RngSpec(1))
    with pytest.raises(ValueError, match='submodular'):
        greedy(GlobalSpreadObjective(source), 2, range(8), lazy=True)


def test_coupled_monte_carlo_is_certified(overlap_dataset):
    source = MonteCarloSpread(
        overlap_dataset.network, IC, overlap_dataset.communities, 200, RngSpec(1), coupled=True)
    f = GlobalSpreadObjective(source)
    assert f.submodular
    assert greedy(f, 2, range(8), lazy=True).objective == pytest.approx(
        greedy(f, 2, range(8)).objective, abs=1e-12)


def test_gains_never_increase_on_exact_submodular(overlap_dataset):
    source = ExactSpread(overlap_dataset.network, IC, overlap_dataset.communities)
    result = greedy(GlobalSpreadObjective(source), 6, range(8))
    gains = [step.gain for step in result.candidate_log]
    assert all(a >= b - 1e-12 for a, b in zip(gains, gains[1:]))


def test_threads_do_not_change_selection(overlap_dataset):
    source = MonteCarloSpread(
        overlap_dataset.network, IC, overlap_dataset.communities, 100, RngSpec(2))
    f = AdimObjective(source, AdimUtilitySpec(AdimFamily.CES, (1, 1, 1), rho=0.5), power=True)
    assert greedy(f, 3, range(8), threads=4).seeds == greedy(f, 3, range(8)).seeds


@pytest.mark.parametrize('seed', range(50))
@pytest.mark.parametrize('rho', [1.0, 0.5])
def test_greedy_guarantee_for_ces(seed, rho):
    net, cs = random_instance(seed)
    source = ExactSpread(net, IC, cs)
    spec = AdimUtilitySpec(AdimFamily.CES, (1.0, 1.0), rho=rho)
    utility = AdimObjective(source, spec)
    result = greedy(AdimObjective(source, spec, power=True), 3, range(net.node_count))
    _, optimum = exhaustive_best(utility, 3, range(net.node_count))
    assert utility.value(result.seed_set) >= GREEDY_FACTOR ** (1 / rho) * optimum - 1e-9


def test_upper_greedy_without_bounds_is_greedy():
    f = ModularObjective([1, 4, 2])
    plain = greedy(f, 2, range(3))
    sandwich = upper_greedy(f, [], 2, range(3))
    assert sandwich.seeds == plain.seeds
    assert sandwich.objective == plain.objective
    assert sandwich.ratio_bound is None
    assert sandwich.algorithm == 'upper-greedy'


def test_single_community_ratio_is_greedy_factor(overlap_dataset):
    net = overlap_dataset.network
    source = ExactSpread(net, IC, CommunityStructure.single(net.node_count))
    f = AdimObjective(source, AdimUtilitySpec(AdimFamily.COMPLEMENTS, (1.0,)))
    result = upper_greedy(f, LinearCommunityObjective.community_bounds(source, (1.0,)), 2, range(8))
    assert result.ratio_bound == pytest.approx(GREEDY_FACTOR)


def sandwich_instance(seed, family):
    net, cs = random_instance(seed)
    source = ExactSpread(net, IC, cs)
    alpha = (1.0, 1.0)
    f = AdimObjective(source, AdimUtilitySpec(family, alpha))
    if family is AdimFamily.COMPLEMENTS:
        uppers = LinearCommunityObjective.community_bounds(source, alpha)
    else:
        uppers = [LinearCommunityObjective.arithmetic_mean(source, alpha)]
    return net, f, uppers


@pytest.mark.parametrize('seed', range(50))
@pytest.mark.parametrize('family', [AdimFamily.COMPLEMENTS, AdimFamily.COBB_DOUGLAS])
def test_sandwich_certificate(seed, family):
    net, f, uppers = sandwich_instance(seed, family)
    result = upper_greedy(f, uppers, 3, range(net.node_count), check_dominance=20, rng=RngSpec(seed))
    _, optimum = exhaustive_best(f, 3, range(net.node_count))
    assert result.objective >= result.ratio_bound * optimum - 1e-9
    assert result.objective == max(c['value'] for c in result.diagnostics['candidates'])


def test_dominance_check_catches_a_bad_bound(overlap_dataset):
    source = ExactSpread(overlap_dataset.network, IC, overlap_dataset.communities)
    f = GlobalSpreadObjective(source)
    too_small = LinearCommunityObjective(source, (0.01, 0.01, 0.01))
    with pytest.raises(ValueError, match='does not dominate'):
        upper_greedy(f, [too_small], 2, range(8), check_dominance=30, rng=RngSpec(3))


def test_random_greedy_with_one_seed_is_deterministic():
    f = ModularObjective([1.0, 5.0, 2.0, 0.5])
    for run in range(10):
        result = random_greedy(f, 1, range(4), RngSpec(9), run=run)
        assert result.seeds == (1,)


def test_random_greedy_constant_objective():
    f = CallableObjective(lambda S: 7.0)
    result = random_greedy(f, 3, range(6), RngSpec(4))
    assert len(result.seed_set) == 3
    assert result.objective == 7.0


def test_random_greedy_is_reproducible(two_clique_dataset):
    source = ExactSpread(two_clique_dataset.network, IC, two_clique_dataset.communities)
    g = SdimObjective(
        source, SdimUtilitySpec(SdimFamily.SUBSTITUTES, beta=1.0, k=3),
        SimilarityFunction(SimilarityKind.COMMUNITY, two_clique_dataset.communities))
    first = random_greedy(g, 3, range(6), RngSpec(15), run=2)
    again = random_greedy(g, 3, range(6), RngSpec(15), run=2)
    assert first.seeds == again.seeds
    assert first.master_seed == 15


def test_random_greedy_draws_from_the_top_k(two_clique_dataset):
    source = ExactSpread(two_clique_dataset.network, IC, two_clique_dataset.communities)
    g = SdimObjective(
        source, SdimUtilitySpec(SdimFamily.COMPLEMENTS, beta=2.0, k=3),
        SimilarityFunction(SimilarityKind.COMMUNITY, two_clique_dataset.communities))
    for run in range(30):
        result = random_greedy(g, 3, range(6), RngSpec(8), run=run)
        chosen = frozenset()
        for step in result.candidate_log:
            if step.node is None:
                continue
            if step.note != 'fill-in':
                assert step.node in top_k_pool(g, chosen, range(6), 3)
            chosen = chosen | {step.node}
        assert len(result.seed_set) == 3


def test_placeholders_displace_negative_gains():
    f = ModularObjective([2.0, -1.0, -3.0, -4.0])
    assert top_k_pool(f, frozenset(), range(4), 2) == frozenset({0})
    result = random_greedy(f, 2, range(4), RngSpec(1))
    assert len(result.seed_set) == 2
    assert any(step.node is None for step in result.candidate_log)
    assert any(step.note == 'fill-in' for step in result.candidate_log)


def sdim_instance(seed, family):
    net, cs = random_instance(seed, n=7, C=2)
    source = ExactSpread(net, IC, cs)
    spec = SdimUtilitySpec(family, beta=0.05 * net.node_count * 10, k=3)
    return SdimObjective(source, spec, SimilarityFunction(SimilarityKind.COMMUNITY, cs))


@pytest.mark.parametrize('seed', range(20))
@pytest.mark.parametrize('family', list(SdimFamily))
def test_random_greedy_guarantee(seed, family):
    g = sdim_instance(seed, family)
    _, optimum = exhaustive_best(g, 3, range(7))
    values = [random_greedy(g, 3, range(7), RngSpec(seed), run=run).objective for run in range(500)]
    assert float(np.mean(values)) >= optimum / math.e - 1e-9


def test_random_greedy_on_two_cliques(two_clique_dataset):
    source = ExactSpread(two_clique_dataset.network, IC, two_clique_dataset.communities)
    g = SdimObjective(
        source, SdimUtilitySpec(SdimFamily.COMPLEMENTS, beta=0.3 * 6, k=2),
        SimilarityFunction(SimilarityKind.COMMUNITY, two_clique_dataset.communities))
    _, optimum = exhaustive_best(g, 2, range(6))
    values = [random_greedy(g, 2, range(6), RngSpec(0), run=run).objective for run in range(200)]
    assert float(np.mean(values)) >= optimum / math.e


def test_propagated_se_of_linear_and_min():
    assert propagated_se(lambda x: 2 * x[0] + x[1], [3.0, 4.0], [0.1, 0.2]) == pytest.approx(
        math.sqrt(0.2 ** 2 + 0.2 ** 2))
    assert propagated_se(min, [1.0, 5.0], [0.1, 0.1]) == pytest.approx(0.1)
    assert propagated_se(min, [1.0, 5.0], [0.0, 0.0]) == 0.0


@pytest.mark.parametrize('family', list(AdimFamily))
def test_monte_carlo_adim_objective_reports_its_error(overlap_dataset, family):
    net, cs = overlap_dataset.network, overlap_dataset.communities
    alpha = (1.0,) * cs.C
    source = MonteCarloSpread(net, IC, cs, 500, RngSpec(21))
    spec = AdimUtilitySpec(family, alpha, rho=0.5) if family is AdimFamily.CES \
        else AdimUtilitySpec(family, alpha)
    f = AdimObjective(source, spec)
    result = upper_greedy(
        f, LinearCommunityObjective.community_bounds(source, alpha), 2, range(net.node_count))
    assert result.diagnostics['objective_se'] > 0.0
    assert f.standard_error(frozenset({0, 3})) > 0.0
    exact = AdimObjective(ExactSpread(net, IC, cs), spec)
    assert exact.standard_error(frozenset({0, 3})) == 0.0


def test_monte_carlo_sdim_error_follows_the_family(two_clique_dataset):
    net, cs = two_clique_dataset.network, two_clique_dataset.communities
    source = MonteCarloSpread(net, IC, cs, 400, RngSpec(2))
    sim = SimilarityFunction(SimilarityKind.COMMUNITY, cs)
    seeds = frozenset({0, 3})
    total_se = source.spread(seeds).total_se
    assert total_se > 0.0

    substitutes = SdimObjective(source, SdimUtilitySpec(SdimFamily.SUBSTITUTES, beta=1.0, k=2), sim)
    assert substitutes.standard_error(seeds) == pytest.approx(total_se)
    # sigma >= 2 > beta * d~, so the min stays at beta * d~
    capped = SdimObjective(source, SdimUtilitySpec(SdimFamily.COMPLEMENTS, beta=0.5, k=2), sim)
    assert capped.standard_error(seeds) == 0.0
    cobb = SdimObjective(source, SdimUtilitySpec(SdimFamily.COBB_DOUGLAS, beta=1.0, k=2), sim)
    assert 0.0 < cobb.standard_error(seeds) < total_se
