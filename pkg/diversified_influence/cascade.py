"""
Independent Cascade (IC) and Linear Threshold (LT) simulation, and
Monte-Carlo estimation of the global and per-community expected spread.

Every trial draws from its own counter-based random stream, derived from
``(master_seed, trial index)``, so trials can run in any order (or
concurrently) and still reproduce bit-for-bit.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from functools import cached_property

import numpy as np
import pandas as pd

from .network import CommunityStructure, Network

logger = logging.getLogger(__name__)

# Trials are executed in fixed-size chunks; the chunk size never affects
# results, only scheduling.
TRIAL_CHUNK = 1024


class SpreadModel(Enum):
    IC = 'IC'
    LT = 'LT'


class StreamPurpose:
    """Independent families of random streams under one master seed."""
    TRIAL = 0
    RANDOM_GREEDY = 1
    DOMINANCE_CHECK = 2


@dataclass(frozen=True)
class RngSpec:
    """
    A master seed from which independent, reproducible streams are
    derived. Stream ``(index, purpose)`` is a Philox generator keyed by
    the master seed, with the counter offset by index and purpose.
    """
    master_seed: int

    def __post_init__(self):
        if not 0 <= self.master_seed < 2 ** 64:
            raise ValueError("master_seed must be a 64-bit unsigned integer")

    @cached_property
    def _key(self) -> np.ndarray:
        return np.random.SeedSequence(self.master_seed).generate_state(2, np.uint64)

    def stream(self, index: int, purpose: int = StreamPurpose.TRIAL) -> np.random.Generator:
        counter = np.array([0, 0, index, purpose], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=self._key, counter=counter))

    def child(self, key: int) -> 'RngSpec':
        """A new, independent ``RngSpec`` derived from this one."""
        state = np.random.SeedSequence([self.master_seed, key]).generate_state(1, np.uint64)
        return RngSpec(int(state[0]))


@dataclass(frozen=True)
class SpreadVector:
    """
    Expected activation counts: ``total`` is sigma, ``per_community[c]``
    is sigma_c and ``in_targets`` counts each activated node belonging to
    at least one community once. Standard errors are of the Monte-Carlo
    mean (zero for exact vectors).
    """
    total: float
    per_community: tuple
    trials: int
    in_targets: float = 0.0
    total_se: float = 0.0
    per_community_se: tuple = ()
    in_targets_se: float = 0.0
    exact: bool = False

    @property
    def C(self) -> int:
        return len(self.per_community)

    @property
    def per_community_array(self) -> np.ndarray:
        return np.array(self.per_community, dtype=np.float64)


def _gather_out_edges(net: Network, nodes: np.ndarray) -> np.ndarray:
    """
    INTERNAL USE:
    Edge indices of all out-edges of ``nodes``, ordered by (source,
    target) when ``nodes`` is sorted.
    """
    starts = net.out_offsets[nodes]
    lengths = net.out_offsets[nodes + 1] - starts
    total = int(lengths.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64)
    offsets = np.cumsum(lengths) - lengths
    return np.repeat(starts - offsets, lengths) + np.arange(total)


def _ic_cascade(net: Network, active: np.ndarray, rng: np.random.Generator, coupled: bool):
    """
    INTERNAL USE:
    Run IC in breadth-first rounds, mutating ``active`` in place. Each
    edge from a newly active node to a node inactive at the start of the
    round is attempted exactly once.
    """
    live = rng.random(net.edge_count) < net.p if coupled else None
    frontier = np.flatnonzero(active)
    while frontier.size:
        candidates = _gather_out_edges(net, frontier)
        candidates = candidates[~active[net.dst[candidates]]]
        if not candidates.size:
            break
        if coupled:
            success = live[candidates]
        else:
            success = rng.random(candidates.size) < net.p[candidates]
        frontier = np.unique(net.dst[candidates[success]])
        active[frontier] = True


def lt_cascade(net: Network, active: np.ndarray, thresholds: np.ndarray) -> np.ndarray:
    """
    Run LT with fixed node thresholds, mutating ``active`` in place. A
    node activates once the ``b`` weights of its active in-neighbors sum
    to at least its threshold.

    :param active: Boolean mask of initially active nodes.
    :param thresholds: One threshold per node.
    :return: The same ``active`` mask, at quiescence.
    """
    weight = np.zeros(net.node_count)
    frontier = np.flatnonzero(active)
    while frontier.size:
        candidates = _gather_out_edges(net, frontier)
        candidates = candidates[~active[net.dst[candidates]]]
        if not candidates.size:
            break
        targets = net.dst[candidates]
        np.add.at(weight, targets, net.b[candidates])
        touched = np.unique(targets)
        frontier = touched[weight[touched] >= thresholds[touched]]
        active[frontier] = True
    return active


def _seed_mask(net: Network, seeds) -> np.ndarray:
    mask = np.zeros(net.node_count, dtype=bool)
    mask[list(net.check_nodes(seeds))] = True
    return mask


def _simulate_mask(net, model, seed_mask, rng, trial, coupled) -> np.ndarray:
    gen = rng.stream(trial)
    active = seed_mask.copy()
    if model is SpreadModel.IC:
        _ic_cascade(net, active, gen, coupled)
    else:
        lt_cascade(net, active, gen.random(net.node_count))
    return active


def simulate_once(
        net: Network,
        model: SpreadModel,
        seeds,
        rng: RngSpec,
        trial: int,
        coupled: bool = False,
) -> frozenset:
    """
    Simulate one cascade.

    :param net: The network.
    :param model: ``SpreadModel.IC`` or ``SpreadModel.LT``.
    :param seeds: The initially active node ids.
    :param rng: The run's ``RngSpec``.
    :param trial: Trial index selecting the random stream.
    :param coupled: (IC only) Draw one live-edge coin per edge up front,
     so that trials with equal index share their live-edge graph across
     seed sets.
    :return: The set of nodes active at quiescence (seeds included).
    """
    model = SpreadModel(model)
    active = _simulate_mask(net, model, _seed_mask(net, seeds), rng, trial, coupled)
    return frozenset(np.flatnonzero(active).tolist())


def _trial_counts(net, model, seed_mask, cs, rng, trials, coupled, threads, weighted=False):
    """
    INTERNAL USE:
    Per-trial counts: cascade size, community counts (a node counts toward
    every community it belongs to, or by its membership weight if
    ``weighted``) and the number of activated nodes in at least one
    community. Counts are integers unless ``weighted``.
    """
    indicator = cs.memberships if weighted else cs.indicator.astype(np.int64)
    covered = cs.covered

    def run_chunk(chunk: range):
        sizes = np.empty(len(chunk), dtype=np.int64)
        counts = np.empty((len(chunk), cs.C), dtype=indicator.dtype)
        in_targets = np.empty(len(chunk), dtype=np.int64)
        for i, trial in enumerate(chunk):
            active = _simulate_mask(net, model, seed_mask, rng, trial, coupled)
            sizes[i] = np.count_nonzero(active)
            counts[i] = active.astype(indicator.dtype) @ indicator
            in_targets[i] = np.count_nonzero(active & covered)
        return sizes, counts, in_targets

    chunks = [range(start, min(start + TRIAL_CHUNK, trials))
              for start in range(0, trials, TRIAL_CHUNK)]
    if threads is not None and threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run_chunk, chunks))
    else:
        results = [run_chunk(chunk) for chunk in chunks]
    sizes = np.concatenate([r[0] for r in results])
    counts = np.concatenate([r[1] for r in results])
    in_targets = np.concatenate([r[2] for r in results])
    return sizes, counts, in_targets


def _check_inputs(net, model, cs, trials):
    model = SpreadModel(model)
    if trials < 1:
        raise ValueError("the number of trials must be at least 1")
    if cs.node_count != net.node_count:
        raise ValueError(
            f"community structure covers {cs.node_count} nodes, "
            f"network has {net.node_count}")
    return model


def _standard_error(values: np.ndarray) -> float:
    if len(values) < 2:
        return 0.0
    return float(np.std(values, ddof=1) / math.sqrt(len(values)))


def estimate_spread(
        net: Network,
        model: SpreadModel,
        seeds,
        cs: CommunityStructure,
        trials: int,
        rng: RngSpec,
        coupled: bool = False,
        threads: int = None,
        weighted: bool = False,
) -> SpreadVector:
    """
    Monte-Carlo estimate of sigma and every sigma_c.

    :param trials: ``M``, the number of simulated cascades.
    :param threads: (Optional) Worker threads. Never changes the result.
    :param weighted: Count an active node toward community ``c`` with its
     membership weight ``F_uc`` rather than once.
    :return: A ``SpreadVector`` (``total`` is the mean cascade size).
    """
    model = _check_inputs(net, model, cs, trials)
    seed_mask = _seed_mask(net, seeds)
    sizes, counts, in_targets = _trial_counts(
        net, model, seed_mask, cs, rng, trials, coupled, threads, weighted)
    return SpreadVector(
        total=int(sizes.sum()) / trials,
        per_community=tuple(float(s) / trials for s in counts.sum(axis=0)),
        trials=trials,
        in_targets=int(in_targets.sum()) / trials,
        total_se=_standard_error(sizes),
        per_community_se=tuple(_standard_error(counts[:, c]) for c in range(cs.C)),
        in_targets_se=_standard_error(in_targets),
    )


def simulate_trials(
        net: Network,
        model: SpreadModel,
        seeds,
        cs: CommunityStructure,
        trials: int,
        rng: RngSpec,
        coupled: bool = False,
        threads: int = None,
) -> pd.DataFrame:
    """
    Per-trial cascade outcomes, from the same streams ``estimate_spread``
    uses: the mean of ``'size'`` equals its ``total`` exactly.

    :return: A ``DataFrame`` with columns ``'trial'``, ``'size'``,
     ``'in_targets'`` and ``'community_0'`` ... ``'community_{C-1}'``.
    """
    model = _check_inputs(net, model, cs, trials)
    seed_mask = _seed_mask(net, seeds)
    sizes, counts, in_targets = _trial_counts(
        net, model, seed_mask, cs, rng, trials, coupled, threads)
    df = pd.DataFrame({
        'trial': np.arange(trials, dtype=np.int64),
        'size': sizes,
        'in_targets': in_targets,
    })
    for c in range(cs.C):
        df[f"community_{c}"] = counts[:, c]
    return df


__all__ = [
    'SpreadModel',
    'StreamPurpose',
    'RngSpec',
    'SpreadVector',
    'simulate_once',
    'lt_cascade',
    'estimate_spread',
    'simulate_trials',
]
