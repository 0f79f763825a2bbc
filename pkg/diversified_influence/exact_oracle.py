"""
Brute-force ground truth for tiny instances: exact expected spreads by
live-edge enumeration, and exact optima by exhaustive seed search.
"""

import itertools
import logging
import math

import numpy as np

from .cascade import SpreadModel, SpreadVector, lt_cascade
from .errors import ResourceBoundError
from .network import CommunityStructure, Network

logger = logging.getLogger(__name__)

MAX_IC_STOCHASTIC_EDGES = 20
MAX_LT_REALIZATIONS = 2_000_000
MAX_THRESHOLD_CELLS = 1_000_000
MAX_COMBINATIONS = 1_000_000
# Reach sets are stored as one uint64 bit mask per node.
MAX_ORACLE_NODES = 64
PROBABILITY_TOLERANCE = 1e-12


class LiveEdgeOracle:
    """
    Enumerates every live-edge realization of a network once, recording
    for each realization the set of nodes reachable from every node. Any
    number of seed sets can then be evaluated exactly.

    Under IC, each edge is live with probability ``p`` (only edges with
    ``0 < p < 1`` are enumerated; ``p = 1`` edges are always live, and
    ``p = 0`` edges never). Under LT, each node picks at most one live
    in-edge ``(u, v)`` with probability ``b_uv``, or none with
    probability ``1 - sum(b_uv)``.
    """

    def __init__(self, net: Network, model: SpreadModel, cs: CommunityStructure = None):
        if net.node_count > MAX_ORACLE_NODES:
            raise ResourceBoundError(
                f"the exact oracle supports at most {MAX_ORACLE_NODES} nodes "
                f"(network has {net.node_count})")
        if cs is None:
            cs = CommunityStructure.single(net.node_count)
        if cs.node_count != net.node_count:
            raise ValueError(
                f"community structure covers {cs.node_count} nodes, "
                f"network has {net.node_count}")
        self.net = net
        self.model = SpreadModel(model)
        self.cs = cs

        if self.model is SpreadModel.IC:
            live, probability = self._enumerate_ic()
        else:
            live, probability = self._enumerate_lt()
        total = math.fsum(probability.tolist())
        if abs(total - 1.0) > PROBABILITY_TOLERANCE:
            raise ArithmeticError(f"realization probabilities sum to {total!r}, not 1")
        self.probability = probability
        self.reach = self._propagate(live)

        bit = np.uint64(1) << np.arange(net.node_count, dtype=np.uint64)
        self._community_masks = [
            np.bitwise_or.reduce(bit[cs.indicator[:, c]], initial=np.uint64(0))
            for c in range(cs.C)
        ]
        self._covered_mask = np.bitwise_or.reduce(bit[cs.covered], initial=np.uint64(0))
        logger.debug(
            "Enumerated %d %s live-edge realizations over %d nodes",
            self.realization_count, self.model.value, net.node_count)

    @property
    def realization_count(self) -> int:
        return len(self.probability)

    def _enumerate_ic(self):
        net = self.net
        stochastic = np.flatnonzero((net.p > 0.0) & (net.p < 1.0))
        m = len(stochastic)
        if m > MAX_IC_STOCHASTIC_EDGES:
            raise ResourceBoundError(
                f"IC enumeration needs at most {MAX_IC_STOCHASTIC_EDGES} edges with "
                f"0 < p < 1 (network has {m})")
        realizations = np.arange(2 ** m, dtype=np.int64)
        probability = np.ones(2 ** m)
        live = {}
        for j, e in enumerate(stochastic):
            on = ((realizations >> j) & 1).astype(bool)
            probability *= np.where(on, net.p[e], 1.0 - net.p[e])
            live[int(e)] = on
        for e in np.flatnonzero(net.p == 1.0):
            live[int(e)] = None
        return live, probability

    def _enumerate_lt(self):
        net = self.net
        degrees = net.in_degree()
        count = math.prod(int(d) + 1 for d in degrees)
        if count > MAX_LT_REALIZATIONS:
            raise ResourceBoundError(
                f"LT enumeration needs at most {MAX_LT_REALIZATIONS} realizations "
                f"(network needs {count})")
        realizations = np.arange(count, dtype=np.int64)
        probability = np.ones(count)
        live = {}
        stride = 1
        for v in range(net.node_count):
            in_edges = net.in_edges(v)
            radix = len(in_edges) + 1
            if radix == 1:
                continue
            choice = (realizations // stride) % radix
            weights = net.b[in_edges]
            none = max(0.0, 1.0 - math.fsum(weights.tolist()))
            probability *= np.append(weights, none)[choice]
            for j, e in enumerate(in_edges):
                live[int(e)] = choice == j
            stride *= radix
        return live, probability

    def _propagate(self, live: dict) -> np.ndarray:
        """
        INTERNAL USE:
        Per-realization reach masks: bit ``v`` of ``reach[r, u]`` is set
        if ``v`` is reachable from ``u`` in realization ``r``.
        """
        net = self.net
        count = len(self.probability)
        reach = np.empty((count, net.node_count), dtype=np.uint64)
        reach[:] = np.uint64(1) << np.arange(net.node_count, dtype=np.uint64)
        changed = True
        while changed:
            changed = False
            for e, on in live.items():
                u, v = int(net.src[e]), int(net.dst[e])
                merged = reach[:, u] | reach[:, v]
                if on is not None:
                    merged = np.where(on, merged, reach[:, u])
                if not np.array_equal(merged, reach[:, u]):
                    reach[:, u] = merged
                    changed = True
        return reach

    def _expected_count(self, masks: np.ndarray) -> float:
        return float(np.dot(self.probability, np.bitwise_count(masks)))

    def spread(self, seeds) -> SpreadVector:
        """The exact ``SpreadVector`` of ``seeds``."""
        union = np.zeros(self.realization_count, dtype=np.uint64)
        for s in sorted(self.net.check_nodes(seeds)):
            union |= self.reach[:, s]
        return SpreadVector(
            total=self._expected_count(union),
            per_community=tuple(self._expected_count(union & m) for m in self._community_masks),
            trials=self.realization_count,
            in_targets=self._expected_count(union & self._covered_mask),
            per_community_se=(0.0,) * self.cs.C,
            exact=True,
        )


def exact_spread(
        net: Network,
        model: SpreadModel,
        seeds,
        cs: CommunityStructure = None,
) -> SpreadVector:
    """
    Exact sigma and sigma_c by live-edge enumeration.

    :raise ResourceBoundError: If the instance exceeds the enumeration
     bound (IC: more than 20 edges with ``0 < p < 1``; LT: more than
     2,000,000 in-edge selections; any model: more than 64 nodes).
    """
    return LiveEdgeOracle(net, model, cs).spread(seeds)


def _threshold_cells(weights: np.ndarray):
    """
    INTERNAL USE:
    Partition ``[0, 1)`` at every subset sum of ``weights``. Within a
    cell, whether a node activates depends only on which in-neighbors are
    active, never on where its threshold lies.
    """
    sums = {0.0, 1.0}
    for r in range(1, len(weights) + 1):
        for combo in itertools.combinations(weights.tolist(), r):
            total = math.fsum(combo)
            if 0.0 < total < 1.0:
                sums.add(total)
    edges = np.array(sorted(sums))
    return (edges[:-1] + edges[1:]) / 2.0, np.diff(edges)


def exact_lt_threshold_spread(
        net: Network,
        seeds,
        cs: CommunityStructure = None,
) -> SpreadVector:
    """
    Exact LT spread by direct integration over the node thresholds: an
    independent check on the live-edge equivalence for very small
    networks.
    """
    seeds = net.check_nodes(seeds)
    if cs is None:
        cs = CommunityStructure.single(net.node_count)
    cells = [_threshold_cells(net.b[net.in_edges(v)]) for v in range(net.node_count)]
    cell_count = math.prod(len(midpoints) for midpoints, _ in cells)
    if cell_count > MAX_THRESHOLD_CELLS:
        raise ResourceBoundError(
            f"threshold integration needs at most {MAX_THRESHOLD_CELLS} cells "
            f"(network needs {cell_count})")

    seed_mask = np.zeros(net.node_count, dtype=bool)
    seed_mask[list(seeds)] = True
    indicator = cs.indicator.astype(np.float64)
    total = 0.0
    per_community = np.zeros(cs.C)
    in_targets = 0.0
    for combo in itertools.product(*(range(len(m)) for m, _ in cells)):
        thresholds = np.array([cells[v][0][i] for v, i in enumerate(combo)])
        weight = math.prod(cells[v][1][i] for v, i in enumerate(combo))
        active = lt_cascade(net, seed_mask.copy(), thresholds)
        total += weight * np.count_nonzero(active)
        per_community += weight * (active.astype(np.float64) @ indicator)
        in_targets += weight * np.count_nonzero(active & cs.covered)
    return SpreadVector(
        total=float(total),
        per_community=tuple(per_community.tolist()),
        trials=cell_count,
        in_targets=float(in_targets),
        per_community_se=(0.0,) * cs.C,
        exact=True,
    )


def exhaustive_best(f, k: int, universe) -> tuple:
    """
    Evaluate ``f`` on every ``k``-subset of ``universe``.

    :param f: An objective evaluator (see ``objectives``).
    :param k: The seed budget.
    :param universe: The candidate nodes.
    :return: ``(seeds, value)``: the lexicographically smallest set
     attaining the maximum, and that maximum.
    """
    universe = sorted(set(int(u) for u in universe))
    if not 0 <= k <= len(universe):
        raise ValueError(f"k = {k} is outside [0, {len(universe)}]")
    combinations = math.comb(len(universe), k)
    if combinations > MAX_COMBINATIONS:
        raise ResourceBoundError(
            f"exhaustive search over {combinations} seed sets exceeds the "
            f"bound of {MAX_COMBINATIONS}")
    best_set, best_value = None, None
    for combo in itertools.combinations(universe, k):
        value = f.value(frozenset(combo))
        if best_value is None or value > best_value:
            best_set, best_value = frozenset(combo), value
    logger.info("Exhaustive search over %d sets: best value %r", combinations, best_value)
    return best_set, best_value


__all__ = [
    'LiveEdgeOracle',
    'exact_spread',
    'exact_lt_threshold_spread',
    'exhaustive_best',
    'MAX_COMBINATIONS',
]
