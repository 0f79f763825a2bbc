import math

import numpy as np
import pytest

from diversified_influence.cascade import SpreadVector
from diversified_influence.network import CommunityStructure, EmbeddingTable
from diversified_influence.utility import (
    AdimFamily,
    AdimUtilitySpec,
    AlphaRule,
    PairSumTracker,
    SdimFamily,
    SdimUtilitySpec,
    SimilarityFunction,
    SimilarityKind,
    adim_value,
    alpha_from_rule,
    diversity_d,
    diversity_dtilde,
    sdim_value,
    similarity,
)


def sv_of(*sigma):
    return SpreadVector(total=float(sum(sigma)), per_community=tuple(sigma), trials=1)


def two_community_similarity():
    cs = CommunityStructure.from_assignments(4, {0: 0, 1: 0, 2: 1, 3: 1}, 2)
    return SimilarityFunction(SimilarityKind.COMMUNITY, cs)


@pytest.mark.parametrize('spec, sigma, expected', [
    (AdimUtilitySpec(AdimFamily.COMPLEMENTS, (1, 1)), (1.0, 0.75), 0.75),
    (AdimUtilitySpec(AdimFamily.COMPLEMENTS, (1, 1)), (3.0, 0.0), 0.0),
    (AdimUtilitySpec(AdimFamily.COBB_DOUGLAS, (1, 1)), (1.0, 0.75), math.sqrt(0.75)),
    (AdimUtilitySpec(AdimFamily.COBB_DOUGLAS, (1, 1)), (2.0, 0.0), 0.0),
    (AdimUtilitySpec(AdimFamily.CES, (0.5, 0.5), rho=0.5), (1.0, 0.75),
     (math.sqrt(0.5) + math.sqrt(0.375)) ** 2),
])
def test_adim_values(spec, sigma, expected):
    assert adim_value(spec, sv_of(*sigma)) == pytest.approx(expected, abs=1e-9)


def test_ces_with_rho_one_is_weighted_sum():
    spec = AdimUtilitySpec.substitutes((0.5, 2.0, 1.0))
    assert adim_value(spec, sv_of(4.0, 1.5, 3.0)) == pytest.approx(2.0 + 3.0 + 3.0, abs=1e-12)


def test_ces_grows_with_rho_decreasing_on_unequal_input():
    sv = sv_of(5.0, 1.0, 2.0)
    alpha = (1.0, 1.0, 1.0)
    values = [adim_value(AdimUtilitySpec(AdimFamily.CES, alpha, rho=rho), sv)
              for rho in (1.0, 0.75, 0.5, 0.25)]
    assert values == sorted(values)


def test_adim_spec_validation():
    with pytest.raises(ValueError):
        AdimUtilitySpec(AdimFamily.CES, (1.0,), rho=0.0)
    with pytest.raises(ValueError):
        AdimUtilitySpec(AdimFamily.CES, (1.0, -1.0))
    with pytest.raises(ValueError):
        adim_value(AdimUtilitySpec(AdimFamily.CES, (1.0, 1.0)), sv_of(1.0))


def test_alpha_rules():
    cs = CommunityStructure.from_assignments(5, {0: 0, 1: 0, 2: 0, 3: 1}, 2)
    assert alpha_from_rule(AlphaRule.ONES, cs) == (1.0, 1.0)
    assert alpha_from_rule('uniform', cs) == (0.5, 0.5)
    assert alpha_from_rule('inverse-size', cs) == pytest.approx((1 / 3, 1.0))
    empty = CommunityStructure.from_assignments(2, {0: 0}, 2)
    with pytest.raises(ValueError, match='empty'):
        alpha_from_rule('inverse-size', empty)


def test_community_similarity():
    f = two_community_similarity()
    assert similarity(f, 0, 1) == pytest.approx(1 - 1 / math.e)
    assert similarity(f, 0, 2) == 0.0
    assert similarity(f, 1, 0) == similarity(f, 0, 1)
    with pytest.raises(ValueError):
        similarity(f, 0, 9)


def test_embedding_similarity():
    table = EmbeddingTable([[0.0, 0.0], [0.0, 0.0], [3.0, 1.0], [-40.0, 0.0]])
    f = SimilarityFunction(SimilarityKind.EMBEDDING, table)
    assert f(0, 1) == pytest.approx(0.5, abs=1e-15)
    assert f(2, 3) == pytest.approx(1 / (1 + math.exp(120.0)))
    assert 0.0 <= f(3, 3) <= 1.0
    with pytest.raises(TypeError):
        SimilarityFunction(SimilarityKind.EMBEDDING, CommunityStructure.single(2))


def test_diversity_d():
    f = two_community_similarity()
    assert diversity_d(f, {0, 1}) == pytest.approx(1 / math.e)
    assert diversity_d(f, {0, 2}) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        diversity_d(f, {0})


def test_duplicate_seeds_count_once():
    f = two_community_similarity()
    assert f.pair_sum([0, 1, 1]) == pytest.approx(f.pair_sum({0, 1}))
    assert diversity_d(f, [0, 1, 1]) == pytest.approx(diversity_d(f, {0, 1}))
    assert diversity_dtilde(f, [0, 0, 1], 2) == pytest.approx(diversity_dtilde(f, {0, 1}, 2))


def test_diversity_dtilde():
    f = two_community_similarity()
    assert diversity_dtilde(f, set(), 3) == 1.0
    assert diversity_dtilde(f, {0}, 3) == 1.0
    assert diversity_dtilde(f, {0, 1}, 2) == pytest.approx(diversity_d(f, {0, 1}))
    assert diversity_dtilde(f, {0, 1, 2}, 3) == pytest.approx(diversity_d(f, {0, 1, 2}))
    with pytest.raises(ValueError):
        diversity_dtilde(f, {0, 1, 2}, 2)


def test_pair_sum_tracker_matches_direct_sum(overlap_dataset):
    f = SimilarityFunction(SimilarityKind.EMBEDDING, overlap_dataset.embeddings)
    tracker = PairSumTracker(f)
    for x in (3, 0, 6, 1):
        tracker.add(x)
    assert tracker.pair_sum == pytest.approx(f.pair_sum({0, 1, 3, 6}), abs=1e-12)
    assert tracker.dtilde(5) == pytest.approx(diversity_dtilde(f, {0, 1, 3, 6}, 5), abs=1e-12)
    with pytest.raises(ValueError):
        tracker.add(3)


@pytest.mark.parametrize('spec, sigma, dtilde, expected', [
    (SdimUtilitySpec(SdimFamily.SUBSTITUTES, beta=5.0, k=2), 1.75, 1.0, 6.75),
    (SdimUtilitySpec(SdimFamily.COMPLEMENTS, beta=5.0, k=2), 0.0, 0.4, 0.0),
    (SdimUtilitySpec(SdimFamily.COMPLEMENTS, beta=5.0, k=2), 9.0, 0.4, 2.0),
    (SdimUtilitySpec(SdimFamily.COBB_DOUGLAS, beta=5.0, k=2), 4.0, 0.25, 1.0),
])
def test_sdim_values(spec, sigma, dtilde, expected):
    assert sdim_value(spec, sigma, dtilde) == pytest.approx(expected, abs=1e-12)


def test_cobb_douglas_beta_factor_is_optional():
    spec = SdimUtilitySpec(SdimFamily.COBB_DOUGLAS, beta=4.0, k=3, a=0.5, b=0.5)
    assert sdim_value(spec, 4.0, 0.25, include_beta=True) == pytest.approx(2.0)


@pytest.mark.parametrize('kw', [
    dict(beta=0.0, k=3),
    dict(beta=1.0, k=1),
    dict(beta=1.0, k=3, a=0.7, b=0.5),
    dict(beta=1.0, k=3, a=0.0, b=1.0),
])
def test_sdim_spec_validation(kw):
    with pytest.raises(ValueError):
        SdimUtilitySpec(SdimFamily.SUBSTITUTES, **kw)


def test_similarity_matrix_is_symmetric_in_unit_interval(overlap_dataset):
    for kind, data in ((SimilarityKind.COMMUNITY, overlap_dataset.communities),
                       (SimilarityKind.EMBEDDING, overlap_dataset.embeddings)):
        m = SimilarityFunction(kind, data).matrix(range(8))
        np.testing.assert_allclose(m, m.T)
        assert np.all((m >= 0.0) & (m <= 1.0))
