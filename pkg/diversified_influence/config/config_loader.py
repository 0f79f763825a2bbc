
"""
Load JSON (or TOML) files of run configuration data: preset experiment
conventions shipped with the package, or custom files.

Config files are flat mappings whose keys are ``RunConfig`` fields, e.g.:

{
  "model": "IC",
  "task": "ADIM",
  "family": "complements",
  "alpha_rule": "ones",
  "k": 10,
  "trials": 10000,
  "algorithm": "auto"
}

Presets carry only the experiment conventions (utility family and its
parameters, spread model, number of trials); the input files and the
budget ``k`` are supplied separately.

Preset names:

* ``'adim_ces'``: CES with ``rho = 1/2`` and uniform ``alpha``
* ``'adim_pc'``: Perfect Complements with ``alpha_c = 1``
* ``'adim_cd'``: Cobb-Douglas with ``alpha_c = 1``
* ``'sdim_ps'``, ``'sdim_pc'``, ``'sdim_cd'``: Substitutes, Complements
  and Cobb-Douglas seed diversity, with ``beta = 0.05 |V|`` and
  ``a = b = 1/2``
"""

import json
import tomllib
from pathlib import Path

from ..errors import ConfigError

CONFIG_DIR = Path(__file__).parent / "presets"
CONFIG_FILENAME_TEMPLATE = "{0}_config.json"


def list_presets() -> list:
    """Names of the presets in ``CONFIG_DIR``."""
    suffix = CONFIG_FILENAME_TEMPLATE.format('')
    return sorted(fp.name[:-len(suffix)] for fp in CONFIG_DIR.glob(f"*{suffix}"))


def load_config_preset(name: str) -> dict:
    """
    Load config data for a preset.

    :param name: The preset to be loaded (e.g. ``'adim_pc'``). (If
     ``CONFIG_DIR`` or ``CONFIG_FILENAME_TEMPLATE`` constants are
     modified, then ``name`` would follow the custom filename schema.)
    :return: Dict containing the config data.
    """
    fp = CONFIG_DIR / CONFIG_FILENAME_TEMPLATE.format(name)
    try:
        with open(fp, 'r') as config_file:
            return json.load(config_file)
    except FileNotFoundError:
        raise ConfigError(
            'preset', f"{name!r} is not a preset (choose from {list_presets()})") from None


def load_config_custom(fp) -> dict:
    """
    Load custom config data.
    :param fp: Path to a ``.json`` or ``.toml`` file containing config
     data.
    :return: Dict containing the config data.
    """
    fp = Path(fp)
    suffix = fp.suffix.lower()
    try:
        if suffix == '.json':
            with open(fp, 'r') as config_file:
                data = json.load(config_file)
        elif suffix == '.toml':
            with open(fp, 'rb') as config_file:
                data = tomllib.load(config_file)
        else:
            raise ConfigError('config', f"{fp} must be a .json or .toml file")
    except FileNotFoundError:
        raise ConfigError('config', f"{fp} does not exist") from None
    except (json.JSONDecodeError, tomllib.TOMLDecodeError) as e:
        raise ConfigError('config', f"{fp} cannot be parsed: {e}") from None
    if not isinstance(data, dict):
        raise ConfigError('config', f"{fp} must contain a mapping of fields")
    return data


__all__ = [
    'CONFIG_DIR',
    'CONFIG_FILENAME_TEMPLATE',
    'list_presets',
    'load_config_preset',
    'load_config_custom',
]
