"""
Utility functions for audience-diversified (ADIM) and seed-diversified
(SDIM) influence maximization, with the similarity and diversity measures
SDIM is built on.

ADIM utilities combine the per-community spreads ``sigma_c``:

* CES: ``(sum_c (alpha_c sigma_c) ** rho) ** (1 / rho)``; ``rho = 1`` is
  Perfect Substitutes.
* Perfect Complements: ``min_c alpha_c sigma_c``.
* Cobb-Douglas: ``prod_c (alpha_c sigma_c) ** (1 / C)``.

SDIM utilities combine the global spread ``sigma`` with the diversity
``d~`` of the seed set:

* Substitutes: ``sigma + beta d~``
* Complements: ``min(sigma, beta d~)``
* Cobb-Douglas: ``sigma ** a * d~ ** b``
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .network import CommunityStructure, EmbeddingTable

SUM_TOLERANCE = 1e-9


class AdimFamily(Enum):
    CES = 'ces'
    COMPLEMENTS = 'complements'
    COBB_DOUGLAS = 'cobb-douglas'


class SdimFamily(Enum):
    SUBSTITUTES = 'substitutes'
    COMPLEMENTS = 'complements'
    COBB_DOUGLAS = 'cobb-douglas'


class AlphaRule(Enum):
    ONES = 'ones'
    INVERSE_SIZE = 'inverse-size'
    UNIFORM = 'uniform'


def alpha_from_rule(rule: AlphaRule, cs: CommunityStructure) -> tuple:
    """
    Community weights ``alpha_c``:

    * ``'ones'``: 1 for every community
    * ``'inverse-size'``: ``1 / |V_c|``
    * ``'uniform'``: ``1 / C``
    """
    rule = AlphaRule(rule)
    if rule is AlphaRule.ONES:
        return (1.0,) * cs.C
    if rule is AlphaRule.UNIFORM:
        return (1.0 / cs.C,) * cs.C
    sizes = cs.sizes()
    if np.any(sizes == 0):
        empty = int(np.flatnonzero(sizes == 0)[0])
        raise ValueError(f"community {empty} is empty; inverse-size weights are undefined")
    return tuple(1.0 / int(s) for s in sizes)


@dataclass(frozen=True)
class AdimUtilitySpec:
    family: AdimFamily
    alpha: tuple
    rho: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, 'family', AdimFamily(self.family))
        object.__setattr__(self, 'alpha', tuple(float(a) for a in self.alpha))
        if not self.alpha:
            raise ValueError("alpha must have one weight per community")
        if not all(math.isfinite(a) and a > 0 for a in self.alpha):
            raise ValueError("every alpha_c must be positive and finite")
        if self.family is AdimFamily.CES and not 0.0 < self.rho <= 1.0:
            raise ValueError(f"rho = {self.rho!r} is outside (0, 1]")

    @classmethod
    def substitutes(cls, alpha):
        """Perfect Substitutes, i.e. CES with ``rho = 1``."""
        return cls(AdimFamily.CES, alpha, rho=1.0)

    @property
    def C(self) -> int:
        return len(self.alpha)


@dataclass(frozen=True)
class SdimUtilitySpec:
    family: SdimFamily
    beta: float
    k: int
    a: float = 0.5
    b: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, 'family', SdimFamily(self.family))
        if not (math.isfinite(self.beta) and self.beta > 0):
            raise ValueError(f"beta = {self.beta!r} must be positive")
        if self.k < 2:
            raise ValueError(f"k = {self.k} must be at least 2 for seed diversity")
        for name in ('a', 'b'):
            value = getattr(self, name)
            if not 0.0 < value <= 1.0:
                raise ValueError(f"{name} = {value!r} is outside (0, 1]")
        if abs(self.a + self.b - 1.0) > SUM_TOLERANCE:
            raise ValueError(f"a + b = {self.a + self.b!r}, must be 1")


def ces(x, rho: float) -> float:
    """``(sum_c x_c ** rho) ** (1 / rho)`` over non-negative ``x``."""
    x = np.asarray(x, dtype=np.float64)
    return float(np.sum(x ** rho) ** (1.0 / rho))


def complements(x) -> float:
    return float(np.min(x))


def cobb_douglas(x) -> float:
    """Geometric mean of ``x``; 0 if any coordinate is 0."""
    x = np.asarray(x, dtype=np.float64)
    if np.any(x <= 0.0):
        return 0.0
    return float(np.exp(np.mean(np.log(x))))


def adim_value(spec: AdimUtilitySpec, sv) -> float:
    """
    The ADIM utility of a ``SpreadVector``.

    :param spec: The utility family and its parameters.
    :param sv: A ``SpreadVector`` with ``C = spec.C``.
    """
    sigma = np.asarray(sv.per_community, dtype=np.float64)
    if len(sigma) != spec.C:
        raise ValueError(f"alpha has {spec.C} weights for {len(sigma)} communities")
    x = np.asarray(spec.alpha) * sigma
    if spec.family is AdimFamily.CES:
        return ces(x, spec.rho)
    if spec.family is AdimFamily.COMPLEMENTS:
        return complements(x)
    return cobb_douglas(x)


def g_substitutes(x1: float, x2: float) -> float:
    return x1 + x2


def g_complements(x1: float, x2: float) -> float:
    return min(x1, x2)


def g_cobb_douglas(x1: float, x2: float, a: float = 0.5, b: float = 0.5) -> float:
    if x1 <= 0.0 or x2 <= 0.0:
        return 0.0
    return x1 ** a * x2 ** b


def sdim_value(spec: SdimUtilitySpec, sigma: float, dtilde: float, include_beta: bool = False) -> float:
    """
    The SDIM utility for a global spread ``sigma`` and a diversity
    ``dtilde``.

    The Cobb-Douglas family omits ``beta`` (it only rescales the value by
    ``beta ** b``) unless ``include_beta`` is set.
    """
    if spec.family is SdimFamily.SUBSTITUTES:
        return g_substitutes(sigma, spec.beta * dtilde)
    if spec.family is SdimFamily.COMPLEMENTS:
        return g_complements(sigma, spec.beta * dtilde)
    value = g_cobb_douglas(sigma, dtilde, spec.a, spec.b)
    if include_beta:
        value *= spec.beta ** spec.b
    return value


class SimilarityKind(Enum):
    COMMUNITY = 'community'
    EMBEDDING = 'embedding'


class SimilarityFunction:
    """
    Pairwise node similarity in ``[0, 1]``:

    * ``'community'``: ``1 - exp(-F_u . F_v)`` over membership vectors
    * ``'embedding'``: ``sigmoid(e_u . e_v)`` over node embeddings
    """

    def __init__(self, kind: SimilarityKind, data):
        kind = SimilarityKind(kind)
        if kind is SimilarityKind.COMMUNITY:
            if not isinstance(data, CommunityStructure):
                raise TypeError("community similarity needs a CommunityStructure")
            vectors = data.memberships
        else:
            if not isinstance(data, EmbeddingTable):
                raise TypeError("embedding similarity needs an EmbeddingTable")
            vectors = data.vectors
        self.kind = kind
        self.vectors = vectors

    @property
    def node_count(self) -> int:
        return self.vectors.shape[0]

    def _check(self, nodes: np.ndarray):
        if nodes.size and (nodes.min() < 0 or nodes.max() >= self.node_count):
            bad = nodes[(nodes < 0) | (nodes >= self.node_count)][0]
            raise ValueError(f"unknown node id {int(bad)}")

    def _transform(self, dots: np.ndarray) -> np.ndarray:
        if self.kind is SimilarityKind.COMMUNITY:
            return -np.expm1(-dots)
        return np.exp(-np.logaddexp(0.0, -dots))

    def __call__(self, u: int, v: int) -> float:
        return float(self.row(u, [v])[0])

    def row(self, u: int, nodes) -> np.ndarray:
        """Similarities of ``u`` to each of ``nodes``."""
        nodes = np.asarray(list(nodes), dtype=np.int64)
        self._check(np.append(nodes, u))
        return self._transform(self.vectors[nodes] @ self.vectors[u])

    def matrix(self, nodes) -> np.ndarray:
        """Pairwise similarities among ``nodes`` (diagonal included)."""
        nodes = np.asarray(list(nodes), dtype=np.int64)
        self._check(nodes)
        sub = self.vectors[nodes]
        return self._transform(sub @ sub.T)

    def pair_sum(self, S) -> float:
        """``sum over u != v in S of sim(u, v)``, both orders counted."""
        nodes = sorted({int(u) for u in S})
        if len(nodes) < 2:
            return 0.0
        sims = self.matrix(nodes)
        return float(np.sum(sims) - np.trace(sims))


def similarity(f: SimilarityFunction, u: int, v: int) -> float:
    return f(u, v)


def diversity_d(f: SimilarityFunction, S) -> float:
    """Average pairwise dissimilarity of ``S`` (``|S| >= 2``)."""
    n = len(set(S))
    if n < 2:
        raise ValueError("diversity needs at least two seeds")
    return 1.0 - f.pair_sum(S) / (n * (n - 1))


def diversity_dtilde(f: SimilarityFunction, S, k: int) -> float:
    """
    Diversity with the fixed denominator ``k (k - 1)``: equal to
    ``diversity_d`` when ``|S| = k``, and 1 for ``|S| <= 1``.
    """
    if k < 2:
        raise ValueError(f"k = {k} must be at least 2")
    n = len(set(S))
    if n > k:
        raise ValueError(f"{n} seeds exceed the budget k = {k}")
    return 1.0 - f.pair_sum(S) / (k * (k - 1))


class PairSumTracker:
    """
    Running pair-sum of a growing seed set. Adding ``x`` costs
    ``O(|S|)``: the sum grows by ``2 * sum_u sim(u, x)``.
    """

    def __init__(self, f: SimilarityFunction):
        self.f = f
        self.members = []
        self.pair_sum = 0.0

    def increment(self, x: int) -> float:
        """The pair-sum increase if ``x`` were added."""
        if not self.members:
            return 0.0
        return 2.0 * float(np.sum(self.f.row(x, self.members)))

    def add(self, x: int) -> None:
        if x in self.members:
            raise ValueError(f"node {x} is already in the set")
        self.pair_sum += self.increment(x)
        self.members.append(x)

    def dtilde(self, k: int) -> float:
        return 1.0 - self.pair_sum / (k * (k - 1))


__all__ = [
    'AdimFamily',
    'SdimFamily',
    'AlphaRule',
    'alpha_from_rule',
    'AdimUtilitySpec',
    'SdimUtilitySpec',
    'ces',
    'complements',
    'cobb_douglas',
    'adim_value',
    'g_substitutes',
    'g_complements',
    'g_cobb_douglas',
    'sdim_value',
    'SimilarityKind',
    'SimilarityFunction',
    'similarity',
    'diversity_d',
    'diversity_dtilde',
    'PairSumTracker',
]
