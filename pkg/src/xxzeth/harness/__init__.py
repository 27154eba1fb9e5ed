"""Configuration, sweeps, persistence and the command line."""
from .cache import SpectrumCache
from .config import RunConfig
from .figures import FIGURE_IDS, MissingRecordsError, emit_figure_data, figure_requirements
from .io import ResultRecord, load_records, read_csv, write_csv
from .sweep import SweepGrid, SweepResult, contour_segments, moving_average, run_sweep
from .tasks import run_task

__all__ = [
    "FIGURE_IDS", "MissingRecordsError", "ResultRecord", "RunConfig", "SpectrumCache",
    "SweepGrid", "SweepResult", "contour_segments", "emit_figure_data", "figure_requirements",
    "load_records", "moving_average", "read_csv", "run_sweep", "run_task", "write_csv",
]
