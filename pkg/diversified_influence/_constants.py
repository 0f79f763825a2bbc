__version__ = '0.1.0'
__version_date__ = '10/19/2026'
__license__ = 'MIT'

# Numeric defaults shared by the loaders, the optimizers and the CLI.
DEFAULT_TRIALS = 10000
DEFAULT_MASTER_SEED = 20190101
BETA_FRACTION = 0.05
LT_WEIGHT_TOLERANCE = 1e-9
