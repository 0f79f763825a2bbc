
"""
Load run configuration data: presets for the experiment conventions, and
custom JSON/TOML files. ``RunConfig`` validates and holds one run's
settings.
"""

from .config_loader import *
from .run_config import *
