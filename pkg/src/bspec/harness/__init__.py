from .generators import SetFamily, generate_set, parse_family
from .sweep import DEFAULT_SWEEP, SweepConfig, SweepSummary, load_config, run_sweep
