from .config import QUANTITIES, SweepConfig, config_from_dict, load_config
from .runner import SweepRow, columns, fig1b_curves, row_to_dict, run_sweep

__all__ = [
    "QUANTITIES",
    "SweepConfig",
    "SweepRow",
    "columns",
    "config_from_dict",
    "fig1b_curves",
    "load_config",
    "row_to_dict",
    "run_sweep",
]
