
"""
Influence maximization with diversity: pick seed nodes whose cascades
reach a balanced audience across communities (audience diversity), or
whose members are themselves dissimilar (seed diversity). Includes
cascade simulation, economic utility functions, approximation
algorithms, exact oracles for tiny networks and diversity diagnostics.
"""

from ._constants import (
    __version__,
    __version_date__,
    __license__,
)
from .errors import (
    DiversifiedInfluenceError,
    ConfigError,
    DataError,
    ResourceBoundError,
)
from .network import (
    IdMap,
    Network,
    CommunityMode,
    CommunityStructure,
    EmbeddingTable,
    AttributeTable,
    members,
)
from .data_loader import (
    DataLoader,
    Dataset,
    load_network,
    load_communities,
    load_embeddings,
    load_attributes,
    load_seeds,
    write_edge_list,
)
from .cascade import (
    SpreadModel,
    RngSpec,
    SpreadVector,
    simulate_once,
    estimate_spread,
    simulate_trials,
)
from .exact_oracle import LiveEdgeOracle, exact_spread, exhaustive_best
from .utility import (
    AdimFamily,
    SdimFamily,
    AdimUtilitySpec,
    SdimUtilitySpec,
    adim_value,
    sdim_value,
    SimilarityKind,
    SimilarityFunction,
    similarity,
    diversity_d,
    diversity_dtilde,
)
from .objectives import (
    MonteCarloSpread,
    ExactSpread,
    ObjectiveEvaluator,
    AdimObjective,
    SdimObjective,
)
from .optimize import SeedResult, greedy, upper_greedy, random_greedy
from .metrics import (
    DiagnosticsReport,
    build_report,
    comparison_table,
    coverage,
    entropy,
    spread_in_targets,
)
from .config import RunConfig, load_config_preset, load_config_custom
from .report_generator import ReportGenerator, Style
