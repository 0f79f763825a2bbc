"""
Set-function evaluators consumed by the optimizers, and the spread
sources (Monte-Carlo or exact) they are computed from.
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import replace

import numpy as np

from .cascade import RngSpec, SpreadModel, SpreadVector, estimate_spread
from .exact_oracle import LiveEdgeOracle
from .network import CommunityStructure, Network
from .utility import (
    AdimFamily,
    AdimUtilitySpec,
    SdimUtilitySpec,
    SimilarityFunction,
    adim_value,
    sdim_value,
)

logger = logging.getLogger(__name__)


def propagated_se(fn, point, se) -> float:
    """
    Delta-method standard error of ``fn(point)`` when the coordinates of
    ``point`` carry independent standard errors ``se``. Each partial
    derivative is taken as the secant over ``point_c +- se_c`` (clipped at
    0), which also covers kinks such as ``min``.
    """
    point = np.asarray(point, dtype=np.float64)
    se = np.asarray(se, dtype=np.float64)
    variance = 0.0
    for c in np.flatnonzero(se > 0.0):
        hi, lo = point.copy(), point.copy()
        hi[c] += se[c]
        lo[c] = max(point[c] - se[c], 0.0)
        slope = (fn(hi) - fn(lo)) / (hi[c] - lo[c])
        variance += (slope * se[c]) ** 2
    return math.sqrt(variance)


class SpreadSource(ABC):
    """
    Memoised ``SpreadVector`` lookups for seed sets.

    ``certified`` is true when the spreads it returns are exactly
    monotone and submodular in the seed set.
    """
    certified = False

    def __init__(self, net: Network, model: SpreadModel, cs: CommunityStructure):
        self.net = net
        self.model = SpreadModel(model)
        self.cs = cs
        self._cache = {}

    @property
    def C(self) -> int:
        return self.cs.C

    def spread(self, seeds) -> SpreadVector:
        key = frozenset(seeds)
        sv = self._cache.get(key)
        if sv is None:
            sv = self._compute(key)
            self._cache[key] = sv
        return sv

    @abstractmethod
    def _compute(self, seeds: frozenset) -> SpreadVector:
        pass


class MonteCarloSpread(SpreadSource):
    """
    Spreads estimated with a fixed ``RngSpec``, so that one optimization
    run sees a deterministic set function (common random numbers).

    With ``coupled=True`` under IC, every seed set is evaluated on the same
    sampled live-edge graphs, which makes the estimate itself exactly
    monotone and submodular.
    """

    def __init__(
            self,
            net: Network,
            model: SpreadModel,
            cs: CommunityStructure,
            trials: int,
            rng: RngSpec,
            coupled: bool = False,
            threads: int = None,
    ):
        super().__init__(net, model, cs)
        self.trials = trials
        self.rng = rng
        self.coupled = coupled
        self.threads = threads
        self.certified = coupled and self.model is SpreadModel.IC

    def _compute(self, seeds):
        return estimate_spread(
            self.net, self.model, seeds, self.cs, self.trials, self.rng,
            coupled=self.coupled, threads=self.threads)


class ExactSpread(SpreadSource):
    """Spreads from the live-edge oracle."""
    certified = True

    def __init__(self, net: Network, model: SpreadModel, cs: CommunityStructure = None):
        if cs is None:
            cs = CommunityStructure.single(net.node_count)
        super().__init__(net, model, cs)
        self.oracle = LiveEdgeOracle(net, model, cs)

    def _compute(self, seeds):
        return self.oracle.spread(seeds)


class ObjectiveEvaluator(ABC):
    """
    A set function ``value(S)`` to be maximized.

    ``submodular`` certifies that ``value`` is exactly submodular (and
    deterministic), which lazy greedy evaluation relies on.
    """
    name = 'objective'
    submodular = False

    @abstractmethod
    def value(self, seeds: frozenset) -> float:
        pass

    def gain(self, seeds: frozenset, x: int) -> float:
        """The marginal gain ``value(S + x) - value(S)``."""
        return self.value(seeds | {x}) - self.value(seeds)

    def standard_error(self, seeds: frozenset) -> float:
        """Monte-Carlo standard error of ``value(S)`` (0 if exact)."""
        return 0.0


class ModularObjective(ObjectiveEvaluator):
    """``f(S) = sum_v w_v``."""
    name = 'modular'
    submodular = True

    def __init__(self, weights):
        self.weights = tuple(float(w) for w in weights)

    def value(self, seeds):
        return math.fsum(self.weights[v] for v in sorted(seeds))


class CallableObjective(ObjectiveEvaluator):
    """Wraps a plain function of a ``frozenset``."""

    def __init__(self, fn, submodular: bool = False, name: str = 'callable'):
        self.fn = fn
        self.submodular = submodular
        self.name = name

    def value(self, seeds):
        return float(self.fn(frozenset(seeds)))


class GlobalSpreadObjective(ObjectiveEvaluator):
    """``sigma(S)``: plain influence maximization."""
    name = 'spread'

    def __init__(self, source: SpreadSource):
        self.source = source
        self.submodular = source.certified

    def value(self, seeds):
        return self.source.spread(seeds).total

    def standard_error(self, seeds):
        return self.source.spread(seeds).total_se


class LinearCommunityObjective(ObjectiveEvaluator):
    """
    ``sum_c w_c sigma_c(S)``. A single non-zero weight gives one
    community's ``alpha_c sigma_c``; weights ``alpha_c / C`` give the
    arithmetic-mean upper bound of Cobb-Douglas.
    """

    def __init__(self, source: SpreadSource, weights, name: str = 'linear'):
        weights = np.asarray(weights, dtype=np.float64)
        if len(weights) != source.C:
            raise ValueError(f"{len(weights)} weights for {source.C} communities")
        self.source = source
        self.weights = weights
        self.name = name
        self.submodular = source.certified and bool(np.all(weights >= 0))

    def value(self, seeds):
        sv = self.source.spread(seeds)
        return float(np.dot(self.weights, sv.per_community))

    def standard_error(self, seeds):
        sv = self.source.spread(seeds)
        if not sv.per_community_se:
            return 0.0
        return float(np.sqrt(np.dot(self.weights ** 2, np.square(sv.per_community_se))))

    @classmethod
    def community_bounds(cls, source: SpreadSource, alpha) -> list:
        """The ``alpha_c sigma_c`` bounds, one per community."""
        bounds = []
        for c, a in enumerate(alpha):
            weights = np.zeros(source.C)
            weights[c] = a
            bounds.append(cls(source, weights, name=f"alpha_{c} sigma_{c}"))
        return bounds

    @classmethod
    def arithmetic_mean(cls, source: SpreadSource, alpha):
        """``(1/C) sum_c alpha_c sigma_c``, which dominates Cobb-Douglas."""
        weights = np.asarray(alpha, dtype=np.float64) / source.C
        return cls(source, weights, name='mean alpha_c sigma_c')


class AdimObjective(ObjectiveEvaluator):
    """
    An ADIM utility over community spreads. With ``power=True`` (CES
    only), evaluates ``f_CES ** rho``, which is monotone and submodular.
    """

    def __init__(self, source: SpreadSource, spec: AdimUtilitySpec, power: bool = False):
        if spec.C != source.C:
            raise ValueError(f"alpha has {spec.C} weights for {source.C} communities")
        if power and spec.family is not AdimFamily.CES:
            raise ValueError("only the CES family can be optimized through its rho-th power")
        self.source = source
        self.spec = spec
        self.power = power
        self.name = spec.family.value + ('^rho' if power else '')
        self.submodular = source.certified and spec.family is AdimFamily.CES \
            and (power or spec.rho == 1.0)

    def _utility(self, sv: SpreadVector) -> float:
        value = adim_value(self.spec, sv)
        if self.power:
            return value ** self.spec.rho
        return value

    def value(self, seeds):
        return self._utility(self.source.spread(seeds))

    def standard_error(self, seeds):
        """The community spread errors carried through the utility."""
        sv = self.source.spread(seeds)
        if not sv.per_community_se:
            return 0.0
        return propagated_se(
            lambda sigma: self._utility(replace(sv, per_community=tuple(sigma))),
            sv.per_community, sv.per_community_se)


class SdimObjective(ObjectiveEvaluator):
    """
    ``g~(S)``: an SDIM utility of ``sigma(S)`` and the fixed-denominator
    diversity ``d~(S)``. Marginal gains update the diversity pair-sum in
    ``O(|S|)``.
    """

    def __init__(
            self,
            source: SpreadSource,
            spec: SdimUtilitySpec,
            similarity: SimilarityFunction,
            include_beta: bool = False,
    ):
        if similarity.node_count != source.net.node_count:
            raise ValueError(
                f"similarity covers {similarity.node_count} nodes, "
                f"network has {source.net.node_count}")
        self.source = source
        self.spec = spec
        self.similarity = similarity
        self.include_beta = include_beta
        self.name = f"g_{spec.family.value}"
        self.submodular = source.certified
        self._pair_sums = {}

    def pair_sum(self, seeds: frozenset) -> float:
        total = self._pair_sums.get(seeds)
        if total is None:
            total = self.similarity.pair_sum(seeds)
            self._pair_sums[seeds] = total
        return total

    def dtilde(self, seeds: frozenset) -> float:
        if len(seeds) > self.spec.k:
            raise ValueError(f"{len(seeds)} seeds exceed the budget k = {self.spec.k}")
        k = self.spec.k
        return 1.0 - self.pair_sum(frozenset(seeds)) / (k * (k - 1))

    def _combine(self, sigma: float, dtilde: float) -> float:
        return sdim_value(self.spec, sigma, dtilde, include_beta=self.include_beta)

    def value(self, seeds):
        seeds = frozenset(seeds)
        return self._combine(self.source.spread(seeds).total, self.dtilde(seeds))

    def gain(self, seeds, x):
        seeds = frozenset(seeds)
        k = self.spec.k
        increment = 2.0 * float(np.sum(self.similarity.row(x, sorted(seeds)))) if seeds else 0.0
        dtilde = 1.0 - (self.pair_sum(seeds) + increment) / (k * (k - 1))
        grown = self._combine(self.source.spread(seeds | {x}).total, dtilde)
        return grown - self.value(seeds)

    def standard_error(self, seeds):
        """The spread error scaled by the utility's slope in ``sigma``."""
        seeds = frozenset(seeds)
        sv = self.source.spread(seeds)
        dtilde = self.dtilde(seeds)
        return propagated_se(
            lambda sigma: self._combine(float(sigma[0]), dtilde), [sv.total], [sv.total_se])


__all__ = [
    'propagated_se',
    'SpreadSource',
    'MonteCarloSpread',
    'ExactSpread',
    'ObjectiveEvaluator',
    'ModularObjective',
    'CallableObjective',
    'GlobalSpreadObjective',
    'LinearCommunityObjective',
    'AdimObjective',
    'SdimObjective',
]
