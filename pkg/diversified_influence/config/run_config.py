"""
``RunConfig``: every setting of one run, validated field by field.
"""

import dataclasses
import hashlib
import json
import math
from dataclasses import dataclass

from .._constants import BETA_FRACTION, DEFAULT_MASTER_SEED, DEFAULT_TRIALS
from ..errors import ConfigError

MODELS = ('IC', 'LT')
TASKS = ('ADIM', 'SDIM')
ADIM_FAMILIES = ('ces', 'substitutes', 'complements', 'cobb-douglas')
SDIM_FAMILIES = ('substitutes', 'complements', 'cobb-douglas')
ALPHA_RULES = ('ones', 'inverse-size', 'uniform')
SIMILARITIES = ('community', 'embedding')
ALGORITHMS = ('auto', 'greedy', 'upper-greedy', 'random-greedy', 'im')
SHARE_WEIGHTINGS = ('binary', 'weighted')

# Fields that never change results; left out of the config hash.
UNHASHED_FIELDS = ('threads', 'output_dir')

_INT_FIELDS = ('num_communities', 'k', 'trials', 'final_trials', 'master_seed', 'threads')
_FLOAT_FIELDS = ('rho', 'beta', 'beta_fraction', 'a', 'b')
_BOOL_FIELDS = ('directed', 'lazy', 'coupled')
_LIST_FIELDS = ('alpha', 'coverage_attributes')


@dataclass(frozen=True)
class RunConfig:
    network: str = None
    directed: bool = True
    id_map: str = None
    communities: str = None
    num_communities: int = None
    embeddings: str = None
    attributes: str = None
    seeds: str = None
    model: str = 'IC'
    task: str = 'ADIM'
    family: str = 'ces'
    rho: float = 0.5
    alpha: list = None
    alpha_rule: str = 'ones'
    beta: float = None
    beta_fraction: float = BETA_FRACTION
    a: float = 0.5
    b: float = 0.5
    similarity: str = 'community'
    k: int = 10
    trials: int = DEFAULT_TRIALS
    final_trials: int = None
    master_seed: int = DEFAULT_MASTER_SEED
    algorithm: str = 'auto'
    lazy: bool = False
    coupled: bool = False
    share_weighting: str = 'binary'
    coverage_attributes: list = None
    threads: int = None
    output_dir: str = '.'

    @classmethod
    def field_names(cls) -> tuple:
        return tuple(f.name for f in dataclasses.fields(cls))

    @classmethod
    def from_config(cls, config: dict, base: 'RunConfig' = None):
        """
        Build a ``RunConfig`` from a mapping of field names to values,
        on top of ``base`` (default: the built-in defaults). Values are
        type-checked; ``None`` values leave the base value unchanged.

        :raise ConfigError: If a key is not a ``RunConfig`` field, or a
         value has the wrong type.
        """
        relevant_fields = cls.field_names()
        kw = {}
        for key, value in config.items():
            if key not in relevant_fields:
                raise ConfigError(key, "unknown configuration field")
            if value is None:
                continue
            kw[key] = _coerce(key, value)
        if base is None:
            return cls(**kw)
        return dataclasses.replace(base, **kw)

    def validate(self, require_network: bool = True) -> 'RunConfig':
        """
        Check every field.
        :raise ConfigError: Naming the first invalid field.
        :return: ``self``, for chaining.
        """
        if require_network and self.network is None:
            raise ConfigError('network', "a network file is required")
        _choice('model', self.model, MODELS)
        _choice('task', self.task, TASKS)
        _choice('family', self.family, ADIM_FAMILIES if self.task == 'ADIM' else SDIM_FAMILIES)
        _choice('alpha_rule', self.alpha_rule, ALPHA_RULES)
        _choice('similarity', self.similarity, SIMILARITIES)
        _choice('algorithm', self.algorithm, ALGORITHMS)
        _choice('share_weighting', self.share_weighting, SHARE_WEIGHTINGS)
        if not 0.0 < self.rho <= 1.0:
            raise ConfigError('rho', f"{self.rho!r} is outside (0, 1]")
        if self.alpha is not None:
            if not self.alpha or not all(math.isfinite(x) and x > 0 for x in self.alpha):
                raise ConfigError('alpha', "weights must be positive and finite")
            if self.num_communities is not None and len(self.alpha) != self.num_communities:
                raise ConfigError(
                    'alpha', f"{len(self.alpha)} weights for {self.num_communities} communities")
        if self.beta is not None and not (math.isfinite(self.beta) and self.beta > 0):
            raise ConfigError('beta', f"{self.beta!r} must be positive")
        if not (math.isfinite(self.beta_fraction) and self.beta_fraction > 0):
            raise ConfigError('beta_fraction', f"{self.beta_fraction!r} must be positive")
        for name in ('a', 'b'):
            value = getattr(self, name)
            if not 0.0 < value <= 1.0:
                raise ConfigError(name, f"{value!r} is outside (0, 1]")
        if abs(self.a + self.b - 1.0) > 1e-9:
            raise ConfigError('b', f"a + b = {self.a + self.b!r}, must be 1")
        if self.k < 0:
            raise ConfigError('k', "must be non-negative")
        if self.task == 'SDIM' and self.k < 2:
            raise ConfigError('k', "seed diversity needs k >= 2")
        if self.trials < 1:
            raise ConfigError('trials', "must be at least 1")
        if self.final_trials is not None and self.final_trials < 1:
            raise ConfigError('final_trials', "must be at least 1")
        if not 0 <= self.master_seed < 2 ** 64:
            raise ConfigError('master_seed', "must be a 64-bit unsigned integer")
        if self.num_communities is not None and self.num_communities < 1:
            raise ConfigError('num_communities', "must be at least 1")
        if self.threads is not None and self.threads < 1:
            raise ConfigError('threads', "must be at least 1")
        if self.algorithm == 'upper-greedy' and self.task != 'ADIM':
            raise ConfigError('algorithm', "upper-greedy applies to ADIM tasks only")
        if self.task == 'SDIM' and self.similarity == 'embedding' and self.embeddings is None:
            raise ConfigError('embeddings', "embedding similarity needs an embeddings file")
        if self.share_weighting == 'weighted' and self.communities is None:
            raise ConfigError('share_weighting', "weighted shares need a communities file")
        return self

    def resolved_algorithm(self) -> str:
        """
        The algorithm ``'auto'`` stands for: greedy for ADIM with CES (or
        Perfect Substitutes), upper-greedy for ADIM with Perfect
        Complements or Cobb-Douglas, random-greedy for SDIM.
        """
        if self.algorithm != 'auto':
            return self.algorithm
        if self.task == 'SDIM':
            return 'random-greedy'
        if self.family in ('ces', 'substitutes'):
            return 'greedy'
        return 'upper-greedy'

    def resolved_beta(self, node_count: int) -> float:
        if self.beta is not None:
            return self.beta
        return self.beta_fraction * node_count

    def resolved_final_trials(self) -> int:
        if self.final_trials is not None:
            return self.final_trials
        return 2 * self.trials

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def config_hash(self) -> str:
        """
        First 16 hex digits of the SHA-256 of the canonical JSON of every
        result-affecting field.
        """
        data = {k: v for k, v in self.to_dict().items() if k not in UNHASHED_FIELDS}
        canonical = json.dumps(data, sort_keys=True, separators=(',', ':'))
        return hashlib.sha256(canonical.encode('utf-8')).hexdigest()[:16]


def _choice(name, value, options):
    if value not in options:
        raise ConfigError(name, f"{value!r} is not one of {list(options)}")


def _coerce(name: str, value):
    """
    INTERNAL USE:
    Type-check and normalise one field value.
    """
    if name in _BOOL_FIELDS:
        if not isinstance(value, bool):
            raise ConfigError(name, f"expected true or false, got {value!r}")
        return value
    if name in _INT_FIELDS:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(name, f"expected an integer, got {value!r}")
        return value
    if name in _FLOAT_FIELDS:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(name, f"expected a number, got {value!r}")
        return float(value)
    if name in _LIST_FIELDS:
        if isinstance(value, str) or not isinstance(value, (list, tuple)):
            raise ConfigError(name, f"expected a list, got {value!r}")
        if name == 'alpha':
            if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value):
                raise ConfigError(name, "expected a list of numbers")
            return [float(x) for x in value]
        return [str(x) for x in value]
    if not isinstance(value, str):
        raise ConfigError(name, f"expected a string, got {value!r}")
    if name in ('model', 'task'):
        return value.upper()
    return value


__all__ = [
    'RunConfig',
    'MODELS',
    'TASKS',
    'ADIM_FAMILIES',
    'SDIM_FAMILIES',
    'ALPHA_RULES',
    'ALGORITHMS',
]
