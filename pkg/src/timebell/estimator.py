"""scikit-learn style front end.

``X`` is always a single event record: a 1-D array of integer millisecond
timestamps (an ``(n, 1)`` column is accepted too), or an :class:`EventSeries`.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .bell import full_sample_bell
from .dichotomizer import TauTriple, u_matrix
from .event_series import EventSeries, base_times, series_stats
from .resampler import (DEFAULT_OFFSETS, DEFAULT_SEED, TauGrid, argmax_row,
                        monte_carlo, sweep_grid)
from .stats import ks_normality_test


def check_event_times(X) -> EventSeries:
    """Validate ``X`` and return it as an :class:`EventSeries`."""
    if isinstance(X, EventSeries):
        return X
    arr = check_array(X, ensure_2d=False, dtype="numeric", ensure_all_finite=True)
    if arr.ndim == 2:
        if arr.shape[1] != 1:
            raise ValueError(f"expected a single column of event times, got shape {arr.shape}")
        arr = arr[:, 0]
    return EventSeries(arr)


class _WindowParams:
    def _fit_scale(self, series):
        self.n_events_ = len(series)
        self.t_M_ = int(self.t_M) if self.t_M is not None else series_stats(series).t_M
        self.base_times_ = base_times(series, self.t_M_, self.multiplier,
                                      self.require_full_cycle)


class WindowDichotomizer(_WindowParams, TransformerMixin, BaseEstimator):
    """Turn an event record into the (N, 3) table of ±1 window indicators.

    ``fit`` learns the mean interval ``t_M_`` and the anchor times;
    ``transform`` evaluates the three windows given by ``offsets`` (relative
    to 0, t_M and 2 t_M) at every anchor.
    """

    def __init__(self, offsets=(800, 600, 300), t_M=None, multiplier=3,
                 require_full_cycle=True):
        self.offsets = offsets
        self.t_M = t_M
        self.multiplier = multiplier
        self.require_full_cycle = require_full_cycle

    def fit(self, X, y=None):
        series = check_event_times(X)
        self._fit_scale(series)
        self.taus_ = TauTriple.from_offsets(*self.offsets, self.t_M_).check(self.t_M_)
        return self

    def transform(self, X):
        check_is_fitted(self, "taus_")
        series = check_event_times(X)
        return np.array(u_matrix(series, self.base_times_, self.taus_, self.t_M_).values)

    def u_matrix(self, X):
        check_is_fitted(self, "taus_")
        return u_matrix(check_event_times(X), self.base_times_, self.taus_, self.t_M_)


class TimeBellTest(_WindowParams, BaseEstimator):
    """Grid sweep plus Monte Carlo replication of the randomized Bell test.

    After ``fit``:

    ``sweep_``        one :class:`SweepRow` per grid combination
    ``best_``         the row with the largest D
    ``monte_carlo_``  :class:`MonteCarloSummary` at ``best_`` (if ``reps``)
    ``ks_``           KS normality result on the Monte Carlo D values
    ``full_sample_``  full-sample :class:`BellResult` at ``best_`` (D <= 1)
    """

    def __init__(self, offsets1=DEFAULT_OFFSETS, offsets2=DEFAULT_OFFSETS,
                 offsets3=DEFAULT_OFFSETS, t_M=None, multiplier=3,
                 require_full_cycle=True, reps=10_000, seed=DEFAULT_SEED,
                 shared_assignment=False, n_jobs=1):
        self.offsets1 = offsets1
        self.offsets2 = offsets2
        self.offsets3 = offsets3
        self.t_M = t_M
        self.multiplier = multiplier
        self.require_full_cycle = require_full_cycle
        self.reps = reps
        self.seed = seed
        self.shared_assignment = shared_assignment
        self.n_jobs = n_jobs

    def fit(self, X, y=None):
        series = check_event_times(X)
        self._fit_scale(series)
        grid = TauGrid(self.offsets1, self.offsets2, self.offsets3)

        def source(taus):
            return u_matrix(series, self.base_times_, taus, self.t_M_)

        self.sweep_ = sweep_grid(source, grid, self.t_M_, self.seed,
                                 shared_assignment=self.shared_assignment,
                                 workers=self.n_jobs)
        self.best_ = argmax_row(self.sweep_)
        self.n_violations_ = sum(r.result.violates for r in self.sweep_)
        u = source(TauTriple.from_offsets(self.best_.off1, self.best_.off2,
                                          self.best_.off3, self.t_M_))
        self.full_sample_ = full_sample_bell(u)
        self.monte_carlo_ = self.ks_ = None
        if self.reps:
            self.monte_carlo_ = monte_carlo(u, self.reps, self.seed, self.n_jobs)
            if self.monte_carlo_.d_values.size >= 8 and self.monte_carlo_.d_sd > 0:
                self.ks_ = ks_normality_test(self.monte_carlo_.d_values)
        return self

    @property
    def d_values_(self):
        return np.array([r.result.d for r in self.sweep_])
