"""Parameter sweeps over initial states and reservoir couplings."""
from .config import BlpConfig, SweepConfig, load_config, parse_config
from .output import CSV_HEADER, render_svg, write_csv
from .runner import SweepRow, default_configs, run_sweep

__all__ = [
    "BlpConfig", "SweepConfig", "SweepRow", "CSV_HEADER",
    "parse_config", "load_config", "run_sweep", "default_configs",
    "write_csv", "render_svg",
]
