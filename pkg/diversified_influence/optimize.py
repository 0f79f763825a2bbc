"""
Seed selection: greedy (with an optional lazy, priority-queue variant),
the upper-bound sandwich ``upper_greedy`` for non-submodular utilities,
and ``random_greedy`` for non-monotone submodular utilities.

Ties are always broken toward the lowest node id.
"""

import heapq
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .cascade import RngSpec, StreamPurpose
from .objectives import ObjectiveEvaluator

logger = logging.getLogger(__name__)

GREEDY_FACTOR = 1.0 - 1.0 / math.e
DOMINANCE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class SelectionStep:
    """
    One iteration of an optimizer. ``node`` is ``None`` when a
    zero-gain placeholder was drawn (``random_greedy``); ``note`` flags
    ``'fill-in'`` selections that complete such a set.
    """
    node: object
    gain: float
    note: str = ''


@dataclass(frozen=True)
class SeedResult:
    """
    :ivar seeds: Selected node ids, in selection order.
    :ivar objective: ``f(seeds)`` under the evaluator used to select them.
    :ivar algorithm: ``'greedy'``, ``'lazy-greedy'``, ``'upper-greedy'`` or
     ``'random-greedy'``.
    :ivar ratio_bound: (``upper_greedy`` only) The solution-dependent
     approximation ratio.
    :ivar candidate_log: One ``SelectionStep`` per iteration.
    :ivar master_seed: The master seed of the run's ``RngSpec``, if any.
    :ivar diagnostics: Algorithm-specific extras (candidate values,
     standard errors, re-estimates).
    """
    seeds: tuple
    objective: float
    algorithm: str
    ratio_bound: float = None
    candidate_log: tuple = ()
    master_seed: int = None
    diagnostics: dict = field(default_factory=dict, compare=False)

    @property
    def seed_set(self) -> frozenset:
        return frozenset(self.seeds)


def _check_budget(k: int, universe) -> list:
    universe = sorted(set(int(u) for u in universe))
    if k < 0:
        raise ValueError(f"k = {k} must be non-negative")
    if k > len(universe):
        raise ValueError(f"k = {k} exceeds the {len(universe)} candidate nodes")
    return universe


def _scan_gains(f: ObjectiveEvaluator, seeds: frozenset, candidates: list, threads: int = None) -> list:
    """
    INTERNAL USE:
    Marginal gains of ``candidates``, in candidate order.
    """
    if threads is not None and threads > 1 and len(candidates) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda x: f.gain(seeds, x), candidates))
    return [f.gain(seeds, x) for x in candidates]


def _argmax(gains: list) -> int:
    """First index of the maximum (candidates are sorted by node id)."""
    best = 0
    for i, g in enumerate(gains):
        if g > gains[best]:
            best = i
    return best


def greedy(
        f: ObjectiveEvaluator,
        k: int,
        universe,
        lazy: bool = False,
        threads: int = None,
) -> SeedResult:
    """
    Add, ``k`` times, the node of largest marginal gain.

    :param f: The objective.
    :param k: The seed budget.
    :param universe: The candidate nodes.
    :param lazy: Re-evaluate stale gains only when they reach the top of a
     priority queue. Requires ``f.submodular``.
    :param threads: (Optional) Worker threads for the gain scan.
    :return: A ``SeedResult``.
    """
    universe = _check_budget(k, universe)
    if lazy:
        return _lazy_greedy(f, k, universe)
    seeds = []
    chosen = frozenset()
    log = []
    for _ in range(k):
        candidates = [v for v in universe if v not in chosen]
        gains = _scan_gains(f, chosen, candidates, threads)
        best = _argmax(gains)
        node = candidates[best]
        seeds.append(node)
        chosen = chosen | {node}
        log.append(SelectionStep(node, gains[best]))
        logger.debug("greedy(%s): selected %d with gain %r", f.name, node, gains[best])
    objective = f.value(chosen)
    logger.info("greedy(%s): %d seeds, objective %r", f.name, k, objective)
    return SeedResult(
        seeds=tuple(seeds),
        objective=objective,
        algorithm='greedy',
        candidate_log=tuple(log),
        diagnostics={'objective_se': f.standard_error(chosen)},
    )


def _lazy_greedy(f: ObjectiveEvaluator, k: int, universe: list) -> SeedResult:
    """
    INTERNAL USE:
    Lazy evaluation: a gain computed for an earlier, smaller set is an
    upper bound on the current gain.
    """
    if not f.submodular:
        raise ValueError(
            f"lazy greedy needs an objective certified submodular; {f.name!r} is not")
    chosen = frozenset()
    heap = [(-f.gain(chosen, v), v, 0) for v in universe]
    heapq.heapify(heap)
    seeds = []
    log = []
    evaluations = len(universe)
    while len(seeds) < k:
        neg_gain, node, computed_at = heapq.heappop(heap)
        if computed_at == len(seeds):
            seeds.append(node)
            chosen = chosen | {node}
            log.append(SelectionStep(node, -neg_gain))
            logger.debug("lazy greedy(%s): selected %d with gain %r", f.name, node, -neg_gain)
        else:
            heapq.heappush(heap, (-f.gain(chosen, node), node, len(seeds)))
            evaluations += 1
    objective = f.value(chosen)
    logger.info(
        "lazy greedy(%s): %d seeds, objective %r, %d gain evaluations",
        f.name, k, objective, evaluations)
    return SeedResult(
        seeds=tuple(seeds),
        objective=objective,
        algorithm='lazy-greedy',
        candidate_log=tuple(log),
        diagnostics={'objective_se': f.standard_error(chosen), 'gain_evaluations': evaluations},
    )


def _sample_sets(universe: list, k: int, count: int, rng: RngSpec) -> list:
    gen = rng.stream(0, StreamPurpose.DOMINANCE_CHECK)
    sets = []
    for _ in range(count):
        size = int(gen.integers(0, k + 1))
        sets.append(frozenset(gen.choice(universe, size=size, replace=False).tolist()))
    return sets


def _check_dominance(f, uppers, universe, k, count, rng):
    for S in _sample_sets(universe, k, count, rng):
        lower = f.value(S)
        for i, upper in enumerate(uppers):
            if upper.value(S) < lower - DOMINANCE_TOLERANCE:
                raise ValueError(
                    f"upper bound {i} ({upper.name}) does not dominate {f.name} "
                    f"on {sorted(S)}")


def upper_greedy(
        f: ObjectiveEvaluator,
        uppers: list,
        k: int,
        universe,
        lazy: bool = False,
        threads: int = None,
        check_dominance: int = 0,
        rng: RngSpec = None,
) -> SeedResult:
    """
    Sandwich approximation: run greedy on ``f`` and on every upper bound
    ``u_i >= f``, and keep the candidate set that is best under ``f``.

    The returned ``ratio_bound`` is ``max_i f(S_i) / u_i(S_i) * (1 - 1/e)``
    over the upper-bound candidates ``S_i``; when every ``u_i`` is
    monotone and submodular, ``f(S) >= ratio_bound * f(S*)``.

    :param uppers: Upper-bound evaluators. If empty, this is ``greedy``
     and no ``ratio_bound`` is given.
    :param lazy: Use lazy greedy on the upper bounds certified submodular.
    :param check_dominance: (Optional) Number of random sets on which to
     verify ``u_i(S) >= f(S)``; needs ``rng``.
    """
    universe = _check_budget(k, universe)
    if check_dominance:
        if rng is None:
            raise ValueError("a dominance check needs an RngSpec")
        _check_dominance(f, uppers, universe, k, check_dominance, rng)
    base = greedy(f, k, universe, lazy=lazy and f.submodular, threads=threads)
    if not uppers:
        return replace(base, algorithm='upper-greedy')

    candidates = [base]
    ratios = []
    for upper in uppers:
        result = greedy(upper, k, universe, lazy=lazy and upper.submodular, threads=threads)
        candidates.append(result)
        bound_value = upper.value(result.seed_set)
        lower_value = f.value(result.seed_set)
        ratios.append(1.0 if bound_value <= 0.0 else lower_value / bound_value)

    values = [f.value(r.seed_set) for r in candidates]
    best = _argmax(values)
    chosen = candidates[best]
    ratio_bound = max(ratios) * GREEDY_FACTOR
    logger.info(
        "upper-greedy(%s): candidate %d of %d wins with %r, ratio bound %r",
        f.name, best, len(candidates), values[best], ratio_bound)
    return SeedResult(
        seeds=chosen.seeds,
        objective=values[best],
        algorithm='upper-greedy',
        ratio_bound=ratio_bound,
        candidate_log=chosen.candidate_log,
        master_seed=None if rng is None else rng.master_seed,
        diagnostics={
            'candidates': [
                {
                    'source': f.name if i == 0 else uppers[i - 1].name,
                    'seeds': list(r.seeds),
                    'value': values[i],
                    'value_se': f.standard_error(r.seed_set),
                }
                for i, r in enumerate(candidates)
            ],
            'upper_ratios': ratios,
            'selected_candidate': best,
            'objective_se': f.standard_error(chosen.seed_set),
        },
    )


def _ranked_pool(gains: list, candidates: list, k: int) -> list:
    """
    INTERNAL USE:
    The top ``k`` of the candidates and ``k`` zero-gain placeholders, as
    ``(-gain, is_placeholder, id)`` keys: higher gain first, then real
    before placeholder, then lower id.
    """
    ranked = sorted(
        [(-gain, 0, v) for gain, v in zip(gains, candidates)]
        + [(-0.0, 1, i) for i in range(k)])
    return ranked[:k]


def random_greedy(
        g: ObjectiveEvaluator,
        k: int,
        universe,
        rng: RngSpec,
        run: int = 0,
        threads: int = None,
) -> SeedResult:
    """
    Each iteration, rank the remaining nodes by marginal gain and pick
    one of the top ``k`` uniformly at random.

    The pool always holds ``k`` entries: real candidates are padded with
    zero-gain placeholders, which also displace candidates of negative
    gain (placeholders rank after real candidates of equal gain). Drawing
    a placeholder leaves the set unchanged; the set is then completed to
    ``k`` nodes by greedy fill-ins, flagged in the ``candidate_log``.

    :param rng: The run's ``RngSpec``.
    :param run: Index of the random stream, for repeated runs under one
     master seed.
    """
    universe = _check_budget(k, universe)
    gen = rng.stream(run, StreamPurpose.RANDOM_GREEDY)
    seeds = []
    chosen = frozenset()
    log = []
    for _ in range(k):
        candidates = [v for v in universe if v not in chosen]
        gains = _scan_gains(g, chosen, candidates, threads)
        pool = _ranked_pool(gains, candidates, k)
        neg_gain, placeholder, node = pool[int(gen.integers(k))]
        if placeholder:
            log.append(SelectionStep(None, 0.0))
            logger.debug("random greedy(%s): drew a placeholder", g.name)
            continue
        seeds.append(node)
        chosen = chosen | {node}
        log.append(SelectionStep(node, -neg_gain))
        logger.debug("random greedy(%s): selected %d with gain %r", g.name, node, -neg_gain)

    while len(seeds) < k:
        candidates = [v for v in universe if v not in chosen]
        gains = _scan_gains(g, chosen, candidates, threads)
        best = _argmax(gains)
        seeds.append(candidates[best])
        chosen = chosen | {candidates[best]}
        log.append(SelectionStep(candidates[best], gains[best], note='fill-in'))

    objective = g.value(chosen)
    logger.info("random greedy(%s): %d seeds, objective %r", g.name, k, objective)
    return SeedResult(
        seeds=tuple(seeds),
        objective=objective,
        algorithm='random-greedy',
        candidate_log=tuple(log),
        master_seed=rng.master_seed,
        diagnostics={'objective_se': g.standard_error(chosen), 'run': run},
    )


def top_k_pool(g: ObjectiveEvaluator, seeds, universe, k: int) -> frozenset:
    """
    The real candidates ``random_greedy`` may draw from for the current
    ``seeds``: the top ``k`` by marginal gain, excluding those displaced
    by zero-gain placeholders.
    """
    seeds = frozenset(seeds)
    candidates = [v for v in sorted(set(universe)) if v not in seeds]
    gains = [g.gain(seeds, v) for v in candidates]
    pool = _ranked_pool(gains, candidates, k)
    return frozenset(v for _, placeholder, v in pool if not placeholder)


__all__ = [
    'SelectionStep',
    'SeedResult',
    'greedy',
    'upper_greedy',
    'random_greedy',
    'top_k_pool',
    'GREEDY_FACTOR',
]
