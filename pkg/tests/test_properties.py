"""
Exhaustive and randomized checks of the structural properties the
algorithms rely on: monotonicity and submodularity of spreads and
diversity, and the balance properties of the utility families.
"""

import numpy as np
import pytest

from diversified_influence.cascade import SpreadModel
from diversified_influence.objectives import ExactSpread, SdimObjective
from diversified_influence.utility import (
    SdimFamily,
    SdimUtilitySpec,
    SimilarityFunction,
    SimilarityKind,
    cobb_douglas,
    complements,
    ces,
    diversity_dtilde,
    g_cobb_douglas,
    g_complements,
    g_substitutes,
)

TOL = 1e-9
SAMPLES = 10_000


def subset(mask: int) -> frozenset:
    return frozenset(i for i in range(mask.bit_length()) if mask >> i & 1)


def set_function_table(fn, n: int) -> np.ndarray:
    return np.array([fn(subset(mask)) for mask in range(2 ** n)])


def assert_submodular(table: np.ndarray):
    """``g(S) + g(T) >= g(S | T) + g(S & T)`` for every pair of subsets."""
    masks = np.arange(len(table))
    lhs = table[:, None] + table[None, :]
    rhs = table[masks[:, None] | masks[None, :]] + table[masks[:, None] & masks[None, :]]
    worst = float(np.max(rhs - lhs))
    assert worst <= TOL, f"submodularity violated by {worst!r}"


def assert_monotone(table: np.ndarray, increasing: bool = True):
    n = len(table).bit_length() - 1
    for mask in range(len(table)):
        for i in range(n):
            if not mask >> i & 1:
                step = table[mask | 1 << i] - table[mask]
                assert (step >= -TOL) if increasing else (step <= TOL)


# Spreads

@pytest.mark.parametrize('model', [SpreadModel.IC, SpreadModel.LT])
def test_exact_spreads_are_monotone_and_submodular(overlap_dataset, model):
    source = ExactSpread(overlap_dataset.network, model, overlap_dataset.communities)
    totals = set_function_table(lambda S: source.spread(S).total, 8)
    assert_monotone(totals)
    assert_submodular(totals)
    for c in range(source.C):
        table = set_function_table(lambda S: source.spread(S).per_community[c], 8)
        assert_monotone(table)
        assert_submodular(table)


def test_square_of_size_is_not_submodular():
    table = set_function_table(len, 3) ** 2
    with pytest.raises(AssertionError):
        assert_submodular(table)


# Seed diversity

@pytest.mark.parametrize('kind', [SimilarityKind.COMMUNITY, SimilarityKind.EMBEDDING])
def test_dtilde_is_bounded_decreasing_and_submodular(overlap_dataset, kind):
    data = overlap_dataset.communities if kind is SimilarityKind.COMMUNITY \
        else overlap_dataset.embeddings
    f = SimilarityFunction(kind, data)
    table = set_function_table(lambda S: diversity_dtilde(f, S, 8), 8)
    assert np.all(table >= -TOL)
    assert np.all(table <= 1.0 + TOL)
    assert_monotone(table, increasing=False)
    assert_submodular(table)


@pytest.mark.parametrize('family', list(SdimFamily))
@pytest.mark.parametrize('beta', [0.4, 3.0])
@pytest.mark.parametrize('kind', [SimilarityKind.COMMUNITY, SimilarityKind.EMBEDDING])
def test_sdim_objectives_are_submodular(overlap_dataset, family, beta, kind):
    data = overlap_dataset.communities if kind is SimilarityKind.COMMUNITY \
        else overlap_dataset.embeddings
    source = ExactSpread(overlap_dataset.network, SpreadModel.IC, overlap_dataset.communities)
    g = SdimObjective(
        source, SdimUtilitySpec(family, beta=beta, k=8), SimilarityFunction(kind, data))
    table = set_function_table(g.value, 8)
    assert np.all(table >= 0.0)
    assert_submodular(table)


# Utility families

def random_vectors(seed: int, count: int = SAMPLES, dim: int = 4) -> np.ndarray:
    gen = np.random.default_rng(seed)
    return gen.uniform(0.0, 10.0, size=(count, dim))


ADIM_FUNCTIONS = {
    'ces-1': lambda x: ces(x, 1.0),
    'ces-half': lambda x: ces(x, 0.5),
    'ces-quarter': lambda x: ces(x, 0.25),
    'complements': complements,
    'cobb-douglas': cobb_douglas,
}


@pytest.mark.parametrize('name', list(ADIM_FUNCTIONS))
def test_adim_pareto_efficiency(name):
    fn = ADIM_FUNCTIONS[name]
    gen = np.random.default_rng(1)
    for x in random_vectors(2):
        y = x.copy()
        y[gen.integers(len(x))] += gen.uniform(0.0, 5.0)
        assert fn(y) >= fn(x) - TOL * (1.0 + abs(fn(x)))


@pytest.mark.parametrize('name', list(ADIM_FUNCTIONS))
def test_adim_community_balance(name):
    fn = ADIM_FUNCTIONS[name]
    gen = np.random.default_rng(3)
    for x in random_vectors(4):
        size = int(gen.integers(2, len(x) + 1))
        chosen = gen.choice(len(x), size=size, replace=False)
        y = x.copy()
        y[chosen] = np.mean(x[chosen])
        assert fn(y) >= fn(x) - TOL * (1.0 + abs(fn(x)))


def test_lopsided_cobb_douglas_breaks_balance():
    before = g_cobb_douglas(1.0, 0.5, a=0.9, b=0.1)
    after = g_cobb_douglas(0.75, 0.75, a=0.9, b=0.1)
    assert after < before


SDIM_FUNCTIONS = {
    'substitutes': g_substitutes,
    'complements': g_complements,
    'cobb-douglas': g_cobb_douglas,
    'cobb-douglas-lopsided': lambda x1, x2: g_cobb_douglas(x1, x2, a=0.9, b=0.1),
}


@pytest.mark.parametrize('name', list(SDIM_FUNCTIONS))
def test_sdim_pareto_efficiency(name):
    g = SDIM_FUNCTIONS[name]
    gen = np.random.default_rng(5)
    for x1, x2, d1, d2 in gen.uniform(0.0, 5.0, size=(SAMPLES, 4)):
        assert g(x1 + d1, x2) >= g(x1, x2) - TOL
        assert g(x1, x2 + d2) >= g(x1, x2) - TOL


def compensating_shift(g, x1, x2, eps):
    """
    The smallest ``delta >= 0`` with ``g(x1 - eps, x2 + delta) = g(x1, x2)``,
    or ``None`` if no shift below ``1e3`` restores the value.
    """
    target = g(x1, x2)
    low, high = 0.0, 1e3
    if g(x1 - eps, x2 + high) < target:
        return None
    if g(x1 - eps, x2) >= target:
        return 0.0
    for _ in range(100):
        mid = (low + high) / 2.0
        if g(x1 - eps, x2 + mid) >= target:
            high = mid
        else:
            low = mid
    return high


@pytest.mark.parametrize('name', list(SDIM_FUNCTIONS))
def test_sdim_diminishing_substitution(name):
    g = SDIM_FUNCTIONS[name]
    gen = np.random.default_rng(7)
    checked = 0
    for x1, x2, share in gen.uniform(0.1, 2.0, size=(SAMPLES, 3)):
        eps = x1 * share / 4.0
        delta = compensating_shift(g, x1, x2, eps)
        if delta is None:
            continue
        checked += 1
        assert g(x1 - 2 * eps, x2 + 2 * delta) <= g(x1 - eps, x2 + delta) + TOL
    assert checked > SAMPLES // 4
