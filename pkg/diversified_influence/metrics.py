"""
Diversity diagnostics for a seed set: entropy of the per-community
spread, spread within the target communities, and attribute coverage.
"""

import json
import logging
import math
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from .cascade import RngSpec, SpreadModel, SpreadVector, estimate_spread
from .network import AttributeTable, CommunityMode, CommunityStructure, Network
from .report_generator import (
    KeyValueSection,
    ReportGenerator,
    SeedListSection,
    TableSection,
)

logger = logging.getLogger(__name__)

SHARE_WEIGHTINGS = ('binary', 'weighted')


def community_shares(sv: SpreadVector) -> tuple:
    """``p_c = sigma_c / sum(sigma)``."""
    sigma = sv.per_community_array
    total = float(np.sum(sigma))
    if total <= 0.0:
        raise ValueError("entropy is undefined for an all-zero community spread")
    return tuple((sigma / total).tolist())


def _entropy_bits(shares) -> float:
    return 0.0 - math.fsum(p * math.log2(p) for p in shares if p > 0.0)


def entropy(sv: SpreadVector) -> float:
    """
    Entropy (base 2) of how the spread divides among communities: 0 when
    one community receives everything, ``log2(C)`` when all receive the
    same.
    """
    return _entropy_bits(community_shares(sv))


def spread_in_targets(
        net: Network,
        model: SpreadModel,
        seeds,
        cs: CommunityStructure,
        trials: int,
        rng: RngSpec,
        threads: int = None,
) -> float:
    """
    Expected number of activated nodes that belong to at least one
    community (each node counted once).
    """
    return estimate_spread(net, model, seeds, cs, trials, rng, threads=threads).in_targets


def coverage(at: AttributeTable, S, attribute: str) -> int:
    """Number of distinct ``attribute`` values across the nodes of ``S``."""
    if attribute not in at.attribute_names:
        raise ValueError(f"unknown attribute {attribute!r}")
    values = set()
    for u in S:
        values |= at.values(u, attribute)
    return len(values)


@dataclass(frozen=True)
class DiagnosticsReport:
    """
    Diagnostics for one seed set. ``entropy`` and
    ``per_community_share`` are ``None`` when no community receives any
    spread.
    """
    seeds: tuple
    spread: float
    spread_se: float
    spread_in_targets: float
    spread_in_targets_se: float
    per_community_spread: tuple
    per_community_share: tuple
    entropy: float
    coverage: dict
    trials: int
    master_seed: int
    share_weighting: str = 'binary'
    utilities: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            'seeds': list(self.seeds),
            'spread': self.spread,
            'spread_se': self.spread_se,
            'spread_in_targets': self.spread_in_targets,
            'spread_in_targets_se': self.spread_in_targets_se,
            'per_community_spread': list(self.per_community_spread),
            'per_community_share': None if self.per_community_share is None
            else list(self.per_community_share),
            'share_weighting': self.share_weighting,
            'entropy': self.entropy,
            'coverage': dict(self.coverage),
            'utilities': dict(self.utilities),
            'trials': self.trials,
            'master_seed': self.master_seed,
        }

    def to_json(self, **header) -> str:
        """
        JSON with a fixed field order. Keyword arguments (e.g. the config
        hash) are written first.
        """
        return json.dumps({**header, **self.to_dict()}, indent=2) + '\n'

    def report_sections(self) -> list:
        summary = [
            ('Seeds', len(self.seeds)),
            ('Spread', self.spread),
            ('Spread std. error', self.spread_se),
            ('Spread in targets', self.spread_in_targets),
            ('Spread in targets std. error', self.spread_in_targets_se),
            ('Entropy (bits)', self.entropy),
            ('Share weighting', self.share_weighting),
            ('Trials', self.trials),
            ('Master seed', self.master_seed),
        ]
        summary += [(f"Coverage of {name!r}", count) for name, count in self.coverage.items()]
        summary += [(f"Utility {name}", value) for name, value in self.utilities.items()]
        shares = self.per_community_share
        communities = pd.DataFrame({
            'community': range(len(self.per_community_spread)),
            'spread': list(self.per_community_spread),
            'share': list(shares) if shares is not None else [np.nan] * len(self.per_community_spread),
        })
        return [
            KeyValueSection(summary, header='DIAGNOSTICS'),
            SeedListSection([str(s) for s in self.seeds], subheader='Seeds'),
            TableSection(communities, subheader='Per-community spread'),
        ]

    def to_text(self) -> str:
        return ReportGenerator(self.report_sections()).generate_report_text()


def build_report(
        net: Network,
        model: SpreadModel,
        seeds,
        cs: CommunityStructure,
        trials: int,
        rng: RngSpec,
        attributes: AttributeTable = None,
        coverage_attributes=None,
        share_weighting: str = 'binary',
        coupled: bool = False,
        threads: int = None,
        utilities: dict = None,
        spread: SpreadVector = None,
) -> DiagnosticsReport:
    """
    Diagnose a seed set.

    :param seeds: The seed node ids (reported as labels through
     ``net.id_map``, in the order given).
    :param attributes: (Optional) Node attributes for coverage counts.
    :param coverage_attributes: (Optional) Attribute names to count. If
     omitted, every attribute in ``attributes`` is counted.
    :param share_weighting: ``'binary'`` counts an active node once toward
     every community it belongs to; ``'weighted'`` counts it with its
     membership weight (overlapping communities only).
    :param coupled: Passed through to ``estimate_spread``.
    :param utilities: (Optional) Utility values to carry in the report.
    :param spread: (Optional) A precomputed ``estimate_spread`` result for
     these seeds under the same ``rng`` and ``trials``.
    """
    if share_weighting not in SHARE_WEIGHTINGS:
        raise ValueError(f"share_weighting must be one of {SHARE_WEIGHTINGS}")
    seeds = [int(s) for s in seeds]
    if spread is None:
        spread = estimate_spread(
            net, model, seeds, cs, trials, rng, coupled=coupled, threads=threads)
    share_source = spread
    if share_weighting == 'weighted' and cs.mode is CommunityMode.OVERLAPPING:
        share_source = estimate_spread(
            net, model, seeds, cs, trials, rng, coupled=coupled, threads=threads, weighted=True)

    try:
        shares = community_shares(share_source)
        ent = _entropy_bits(shares)
    except ValueError:
        logger.warning("No community receives any spread; entropy is undefined")
        shares, ent = None, None

    counts = {}
    if attributes is not None:
        names = sorted(attributes.attribute_names) if coverage_attributes is None \
            else list(coverage_attributes)
        counts = {name: coverage(attributes, seeds, name) for name in names}

    return DiagnosticsReport(
        seeds=tuple(net.id_map.label_of(s) for s in seeds),
        spread=spread.total,
        spread_se=spread.total_se,
        spread_in_targets=spread.in_targets,
        spread_in_targets_se=spread.in_targets_se,
        per_community_spread=spread.per_community,
        per_community_share=shares,
        entropy=ent,
        coverage=counts,
        trials=trials,
        master_seed=rng.master_seed,
        share_weighting=share_weighting,
        utilities=dict(utilities or {}),
    )


def _percent_change(value, base) -> float:
    if value is None or base is None or base == 0:
        return np.nan
    return (value - base) / base * 100.0


def comparison_table(reports: dict, baseline: str) -> pd.DataFrame:
    """
    Compare methods against a baseline.

    :param reports: ``{method name: DiagnosticsReport}``, in display order.
    :param baseline: The key of the baseline method.
    :return: One row per method with its entropy and spread in targets,
     and their percentage change relative to the baseline.
    """
    if baseline not in reports:
        raise ValueError(f"baseline {baseline!r} is not among the reports")
    base = reports[baseline]
    rows = []
    for name, report in reports.items():
        rows.append({
            'method': name,
            'entropy': np.nan if report.entropy is None else report.entropy,
            'spread_in_targets': report.spread_in_targets,
            'entropy_change_pct': _percent_change(report.entropy, base.entropy),
            'spread_change_pct': _percent_change(report.spread_in_targets, base.spread_in_targets),
        })
    return pd.DataFrame(
        rows,
        columns=['method', 'entropy', 'spread_in_targets', 'entropy_change_pct', 'spread_change_pct'])


__all__ = [
    'SHARE_WEIGHTINGS',
    'community_shares',
    'entropy',
    'spread_in_targets',
    'coverage',
    'DiagnosticsReport',
    'build_report',
    'comparison_table',
]
