"""Time Bell-like inequality tests on event-time series."""

__version__ = "0.1.0"

from .bell import BellResult, Pair, correlate_pairs, d_statistic, full_sample_bell
from .dichotomizer import TauTriple, UMatrix, Window, third_index, u_matrix, u_value, window_for
from .errors import TimeBellError
from .event_series import (EventSeries, SeriesStats, base_times, parse_event_file,
                           read_event_file, serialize, series_stats)
from .resampler import (MonteCarloSummary, SweepRow, TauGrid, monte_carlo, neighborhood,
                        random_assignment, sweep_grid)
from .stats import KsResult, histogram, ks_normality_test
from .synthgen import ProcessSpec, generate, poisson_expected_bell
from .estimator import TimeBellTest, WindowDichotomizer

__all__ = [
    "BellResult", "EventSeries", "KsResult", "MonteCarloSummary", "Pair",
    "ProcessSpec", "SeriesStats", "SweepRow", "TauGrid", "TauTriple",
    "TimeBellError", "TimeBellTest", "UMatrix", "Window", "WindowDichotomizer",
    "base_times", "correlate_pairs", "d_statistic", "full_sample_bell", "generate",
    "histogram", "ks_normality_test", "monte_carlo", "neighborhood",
    "parse_event_file", "poisson_expected_bell", "random_assignment",
    "read_event_file", "serialize", "series_stats", "sweep_grid", "third_index",
    "u_matrix", "u_value", "window_for",
]
