"""
Task orchestration behind the command line: builds utilities, spread
sources and objectives from a ``RunConfig``, resolves the algorithm, and
runs the select / evaluate / simulate / oracle / compare workflows.
"""

import dataclasses
import logging

from .cascade import RngSpec, SpreadModel, estimate_spread, simulate_trials
from .config import RunConfig
from .data_loader import DataLoader, Dataset
from .errors import ConfigError
from .exact_oracle import LiveEdgeOracle, exact_lt_threshold_spread, exhaustive_best
from .metrics import DiagnosticsReport, build_report, comparison_table
from .network import CommunityStructure
from .objectives import (
    AdimObjective,
    ExactSpread,
    GlobalSpreadObjective,
    LinearCommunityObjective,
    MonteCarloSpread,
    SdimObjective,
)
from .optimize import SeedResult, greedy, random_greedy, upper_greedy
from .utility import (
    AdimFamily,
    AdimUtilitySpec,
    SdimFamily,
    SdimUtilitySpec,
    SimilarityFunction,
    SimilarityKind,
    adim_value,
    alpha_from_rule,
    diversity_d,
    diversity_dtilde,
    sdim_value,
)

logger = logging.getLogger(__name__)

# Key of the RngSpec child used for final re-estimates and evaluation.
FINAL_ESTIMATE_KEY = 1
THRESHOLD_CHECK_NODES = 3


def load_dataset(cfg: RunConfig) -> Dataset:
    return DataLoader.from_config(cfg.to_dict()).load()


def final_rng(cfg: RunConfig) -> RngSpec:
    return RngSpec(cfg.master_seed).child(FINAL_ESTIMATE_KEY)


def adim_spec(cfg: RunConfig, cs: CommunityStructure, family: str = None, rho: float = None) -> AdimUtilitySpec:
    family = family or cfg.family
    if cfg.alpha is not None:
        if len(cfg.alpha) != cs.C:
            raise ConfigError('alpha', f"{len(cfg.alpha)} weights for {cs.C} communities")
        alpha = tuple(cfg.alpha)
    else:
        try:
            alpha = alpha_from_rule(cfg.alpha_rule, cs)
        except ValueError as e:
            raise ConfigError('alpha_rule', str(e)) from None
    if family == 'substitutes':
        return AdimUtilitySpec.substitutes(alpha)
    return AdimUtilitySpec(AdimFamily(family), alpha, rho=cfg.rho if rho is None else rho)


def sdim_spec(cfg: RunConfig, node_count: int, family: str = None, k: int = None) -> SdimUtilitySpec:
    return SdimUtilitySpec(
        SdimFamily(family or cfg.family),
        beta=cfg.resolved_beta(node_count),
        k=cfg.k if k is None else k,
        a=cfg.a,
        b=cfg.b,
    )


def similarity_function(cfg: RunConfig, dataset: Dataset) -> SimilarityFunction:
    """The configured similarity, or ``None`` if its data is missing."""
    if cfg.similarity == 'embedding':
        if dataset.embeddings is None:
            return None
        return SimilarityFunction(SimilarityKind.EMBEDDING, dataset.embeddings)
    if dataset.communities is None:
        logger.warning("No communities loaded; every pair of nodes is equally similar")
    return SimilarityFunction(SimilarityKind.COMMUNITY, dataset.community_structure)


def monte_carlo_source(cfg: RunConfig, dataset: Dataset, trials: int = None, rng: RngSpec = None):
    return MonteCarloSpread(
        dataset.network, SpreadModel(cfg.model), dataset.community_structure,
        trials=cfg.trials if trials is None else trials,
        rng=RngSpec(cfg.master_seed) if rng is None else rng,
        coupled=cfg.coupled,
        threads=cfg.threads,
    )


def build_objectives(cfg: RunConfig, dataset: Dataset, source, algorithm: str, family: str = None):
    """
    :return: ``(selection objective, upper bounds, utility)``: the
     optimizers maximize the selection objective (for CES, ``f ** rho``),
     ``utility`` is what the result is reported under.
    """
    family = family or cfg.family
    cs = dataset.community_structure
    if algorithm == 'im':
        spread = GlobalSpreadObjective(source)
        return spread, [], spread
    if cfg.task == 'SDIM':
        sim = similarity_function(cfg, dataset)
        if sim is None:
            raise ConfigError('embeddings', "embedding similarity needs an embeddings file")
        utility = SdimObjective(source, sdim_spec(cfg, dataset.network.node_count, family), sim)
        return utility, [], utility

    spec = adim_spec(cfg, cs, family)
    utility = AdimObjective(source, spec)
    uppers = []
    selection = utility
    if spec.family is AdimFamily.CES:
        selection = AdimObjective(source, spec, power=True)
    elif spec.family is AdimFamily.COMPLEMENTS:
        uppers = LinearCommunityObjective.community_bounds(source, spec.alpha)
    else:
        uppers = [LinearCommunityObjective.arithmetic_mean(source, spec.alpha)]
    return selection, uppers, utility


def run_algorithm(cfg: RunConfig, dataset: Dataset, algorithm: str = None, family: str = None) -> SeedResult:
    """
    Select ``cfg.k`` seeds, then re-estimate the objective with a fresh
    random stream and ``final_trials`` cascades.
    """
    algorithm = algorithm or cfg.resolved_algorithm()
    rng = RngSpec(cfg.master_seed)
    source = monte_carlo_source(cfg, dataset, rng=rng)
    selection, uppers, utility = build_objectives(cfg, dataset, source, algorithm, family)
    universe = range(dataset.network.node_count)
    logger.info(
        "Selecting %d seeds with %s (%s %s, %s)",
        cfg.k, algorithm, cfg.task, family or cfg.family, cfg.model)

    if algorithm in ('greedy', 'im'):
        result = greedy(selection, cfg.k, universe, lazy=cfg.lazy, threads=cfg.threads)
    elif algorithm == 'upper-greedy':
        result = upper_greedy(
            utility, uppers, cfg.k, universe, lazy=cfg.lazy, threads=cfg.threads, rng=rng)
    else:
        result = random_greedy(selection, cfg.k, universe, rng, threads=cfg.threads)

    final_source = monte_carlo_source(
        cfg, dataset, trials=cfg.resolved_final_trials(), rng=final_rng(cfg))
    _, _, final_utility = build_objectives(cfg, dataset, final_source, algorithm, family)
    diagnostics = dict(result.diagnostics)
    diagnostics['final_objective'] = final_utility.value(result.seed_set)
    diagnostics['final_objective_se'] = final_utility.standard_error(result.seed_set)
    diagnostics['final_trials'] = cfg.resolved_final_trials()
    return dataclasses.replace(
        result,
        objective=utility.value(result.seed_set),
        algorithm='im' if algorithm == 'im' else result.algorithm,
        master_seed=cfg.master_seed,
        diagnostics=diagnostics,
    )


def final_spread(cfg: RunConfig, dataset: Dataset, seeds):
    """The spread of ``seeds`` under the final-estimate random stream."""
    return estimate_spread(
        dataset.network, SpreadModel(cfg.model), seeds, dataset.community_structure,
        cfg.resolved_final_trials(), final_rng(cfg), coupled=cfg.coupled, threads=cfg.threads)


def diagnose(cfg: RunConfig, dataset: Dataset, seeds, utilities: dict = None, spread=None) -> DiagnosticsReport:
    """Diagnostics under the final-estimate random stream."""
    if spread is None:
        spread = final_spread(cfg, dataset, seeds)
    return build_report(
        dataset.network, SpreadModel(cfg.model), seeds, dataset.community_structure,
        trials=cfg.resolved_final_trials(),
        rng=final_rng(cfg),
        attributes=dataset.attributes,
        coverage_attributes=cfg.coverage_attributes,
        share_weighting=cfg.share_weighting,
        coupled=cfg.coupled,
        threads=cfg.threads,
        utilities=utilities,
        spread=spread,
    )


def utility_values(cfg: RunConfig, dataset: Dataset, seeds, spread=None) -> dict:
    """
    Every utility of a seed set: the ADIM families over the community
    spreads, and (when a similarity is available and ``k >= 2``) the
    diversity with the SDIM families.

    If ``|S| != k``, ``d`` is undefined for the budget and the
    fixed-denominator ``d~`` is used instead, with a warning.
    """
    seeds = frozenset(int(s) for s in seeds)
    cs = dataset.community_structure
    sv = final_spread(cfg, dataset, seeds) if spread is None else spread
    values = {'spread': sv.total}
    for family in ('ces', 'substitutes', 'complements', 'cobb-douglas'):
        values[family] = adim_value(adim_spec(cfg, cs, family), sv)

    sim = similarity_function(cfg, dataset)
    if sim is None or cfg.k < 2 or len(seeds) > cfg.k:
        logger.warning("Seed diversity not evaluated (no similarity, or |S| > k, or k < 2)")
        return values
    if len(seeds) == cfg.k:
        name, diversity = 'diversity_d', diversity_d(sim, seeds)
    else:
        logger.warning(
            "%d seeds for a budget of k = %d: reporting d~ instead of d", len(seeds), cfg.k)
        name, diversity = 'diversity_dtilde', diversity_dtilde(sim, seeds, cfg.k)
    values[name] = diversity
    for family in ('substitutes', 'complements', 'cobb-douglas'):
        spec = sdim_spec(cfg, dataset.network.node_count, family)
        values[f"g_{family}"] = sdim_value(spec, sv.total, diversity)
    return values


def run_simulation(cfg: RunConfig, dataset: Dataset, seeds):
    """Per-trial cascade table for ``seeds`` under the run's master seed."""
    return simulate_trials(
        dataset.network, SpreadModel(cfg.model), seeds, dataset.community_structure,
        cfg.trials, RngSpec(cfg.master_seed), coupled=cfg.coupled, threads=cfg.threads)


def run_oracle(cfg: RunConfig, dataset: Dataset, seeds=None, exhaustive: bool = False) -> dict:
    """
    Exact results for a tiny instance: the exact spread of ``seeds``
    (with the threshold-integration cross-check under LT for networks of
    at most three nodes), and optionally the exhaustive optimum of the
    configured utility.
    """
    net = dataset.network
    cs = dataset.community_structure
    model = SpreadModel(cfg.model)
    oracle = LiveEdgeOracle(net, model, cs)
    result = {'realizations': oracle.realization_count}
    if seeds is not None:
        sv = oracle.spread(seeds)
        result['seeds'] = [net.id_map.label_of(s) for s in seeds]
        result['spread'] = sv.total
        result['per_community_spread'] = list(sv.per_community)
        result['spread_in_targets'] = sv.in_targets
        if model is SpreadModel.LT and net.node_count <= THRESHOLD_CHECK_NODES:
            check = exact_lt_threshold_spread(net, seeds, cs)
            result['threshold_integration_spread'] = check.total
    if exhaustive:
        source = ExactSpread(net, model, cs)
        algorithm = cfg.resolved_algorithm()
        _, _, utility = build_objectives(cfg, dataset, source, algorithm)
        best, value = exhaustive_best(utility, cfg.k, range(net.node_count))
        result['optimum'] = {
            'objective': utility.name,
            'seeds': [net.id_map.label_of(s) for s in sorted(best)],
            'value': value,
        }
    return result


def compare_methods(cfg: RunConfig, dataset: Dataset):
    """
    Run the plain influence-maximization baseline and each utility family
    of the configured task with its default algorithm.

    :return: ``(results, reports, table)``: dicts keyed by method name,
     and the comparison table against the ``'im'`` baseline.
    """
    if cfg.task == 'ADIM':
        families = ('ces', 'complements', 'cobb-douglas')
    else:
        families = ('substitutes', 'complements', 'cobb-douglas')
    methods = [('im', 'im', None)]
    for family in families:
        family_cfg = dataclasses.replace(cfg, family=family, algorithm='auto')
        methods.append((family, family_cfg.resolved_algorithm(), family))

    results, reports = {}, {}
    for name, algorithm, family in methods:
        result = run_algorithm(cfg, dataset, algorithm=algorithm, family=family)
        results[name] = result
        reports[name] = diagnose(cfg, dataset, result.seeds)
    return results, reports, comparison_table(reports, baseline='im')


__all__ = [
    'FINAL_ESTIMATE_KEY',
    'load_dataset',
    'final_rng',
    'adim_spec',
    'sdim_spec',
    'similarity_function',
    'build_objectives',
    'run_algorithm',
    'final_spread',
    'diagnose',
    'utility_values',
    'run_simulation',
    'run_oracle',
    'compare_methods',
]
