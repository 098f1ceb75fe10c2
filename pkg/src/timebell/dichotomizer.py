"""Three-window dichotomic observables.

Each anchor time ``t_n`` opens a cycle of three consecutive thirds of length
``t_M``. An offset ``tau`` selects the third it falls in and defines the window
``(t_n + (k-1) t_M, t_n + tau]``; ``U = +1`` if an event lies in that window
and ``-1`` otherwise.

Windows are left-open and right-closed. Left-open keeps an event sitting on a
third boundary out of the next third; right-closed makes ``U`` monotone in
``tau``. An offset that lands exactly on ``k * t_M`` belongs to third ``k``
(the lower one).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import OutOfRange
from .event_series import EventSeries


@dataclass(frozen=True)
class TauTriple:
    """Absolute window offsets from ``t_n``, with ``0 < tau1 <= tau2 <= tau3``."""

    tau1: int
    tau2: int
    tau3: int

    def __post_init__(self):
        for name in ("tau1", "tau2", "tau3"):
            v = getattr(self, name)
            if int(v) != v:
                raise OutOfRange(f"{name}={v!r} is not an integer")
            object.__setattr__(self, name, int(v))
        if not 0 < self.tau1 <= self.tau2 <= self.tau3:
            raise OutOfRange(f"need 0 < tau1 <= tau2 <= tau3, got {tuple(self)}")

    def __iter__(self):
        return iter((self.tau1, self.tau2, self.tau3))

    @classmethod
    def from_offsets(cls, off1, off2, off3, t_M):
        """Build from offsets relative to 0, t_M and 2 t_M."""
        return cls(off1, t_M + off2, 2 * t_M + off3)

    def offsets(self, t_M):
        return (self.tau1, self.tau2 - t_M, self.tau3 - 2 * t_M)

    def check(self, t_M):
        if self.tau3 > 3 * t_M:
            raise OutOfRange(f"tau3={self.tau3} exceeds 3*t_M={3 * t_M}")
        return self


@dataclass(frozen=True)
class Window:
    """The interval ``(start, end]`` in ms."""

    start: int
    end: int

    def __post_init__(self):
        if not self.start < self.end:
            raise OutOfRange(f"empty window ({self.start}, {self.end}]")

    def __contains__(self, t):
        return self.start < t <= self.end


@dataclass(frozen=True, eq=False)
class UMatrix:
    values: np.ndarray      # (N, 3) int8 in {-1, +1}
    base_times: np.ndarray  # (N,)
    taus: TauTriple
    t_M: int

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.int8)
        if values.ndim != 2 or values.shape[1] != 3:
            raise ValueError(f"U values must be (N, 3), got {values.shape}")
        if not np.all(np.abs(values) == 1):
            raise ValueError("U values must be -1 or +1")
        if values.shape[0] != len(self.base_times):
            raise ValueError("U rows and base_times differ in length")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.values.shape[0]

    @classmethod
    def from_values(cls, values, t_M=1):
        """Wrap a bare ±1 table, with placeholder anchors and taus."""
        values = np.asarray(values, dtype=np.int8).reshape(-1, 3)
        n = values.shape[0]
        return cls(values, np.arange(n, dtype=np.int64) * 3 * t_M,
                   TauTriple(t_M, 2 * t_M, 3 * t_M), t_M)


def third_index(tau: int, t_M: int) -> int:
    if tau <= 0 or tau > 3 * t_M:
        raise OutOfRange(f"tau={tau} outside (0, {3 * t_M}]")
    return -(-tau // t_M)  # ceil, so tau == k*t_M stays in third k


def window_for(t_n: int, tau: int, t_M: int) -> Window:
    k = third_index(tau, t_M)
    return Window(int(t_n) + (k - 1) * t_M, int(t_n) + tau)


def u_value(series: EventSeries, window: Window) -> int:
    # first event strictly after start; +1 iff it is also <= end
    i = np.searchsorted(series.times, window.start, side="right")
    return 1 if i < len(series) and series.times[i] <= window.end else -1


def u_values(times: np.ndarray, starts, ends) -> np.ndarray:
    """Vectorized :func:`u_value` over arrays of ``(start, end]`` windows."""
    idx = np.searchsorted(times, starts, side="right")
    hit = idx < times.size
    hit[hit] = times[idx[hit]] <= np.asarray(ends)[hit]
    return np.where(hit, 1, -1).astype(np.int8)


def u_matrix(series: EventSeries, base_times, taus: TauTriple, t_M: int) -> UMatrix:
    taus.check(t_M)
    base = np.asarray(base_times, dtype=np.int64)
    cols = []
    for tau in taus:
        k = third_index(tau, t_M)
        cols.append(u_values(series.times, base + (k - 1) * t_M, base + tau))
    return UMatrix(np.column_stack(cols) if base.size else np.empty((0, 3)),
                   base, taus, t_M)
