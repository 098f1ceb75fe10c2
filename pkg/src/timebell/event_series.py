"""Event-timestamp series: parsing, serialization and summary statistics.

Timestamps are integer milliseconds from the start of the record. The three
accepted text layouts are

* ``cumulative``  -- one absolute time per line,
* ``intervals``   -- one inter-event gap per line (cumulatively summed),
* ``two_column``  -- ``<interval> <cumulative>`` per line; the cumulative
  column is authoritative and the interval column is cross-checked.

Blank lines and lines starting with ``#`` are skipped. Tokens may be separated
by whitespace or commas.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (EmptyInput, InconsistentColumns, MalformedLine,
                     NoFullCycle, NonMonotone, TooFewEvents)

FORMATS = ("cumulative", "intervals", "two_column")

_SPLIT = re.compile(r"[\s,]+")


@dataclass(frozen=True, eq=False)
class EventSeries:
    """Strictly increasing, non-negative integer event times in ms."""

    times: np.ndarray
    source_label: str = ""

    def __post_init__(self):
        times = np.asarray(self.times)
        if times.ndim != 1 or times.size == 0:
            raise EmptyInput("an event series needs at least one timestamp")
        if times.dtype.kind == "f":
            if not np.all(np.isfinite(times)) or np.any(times != np.round(times)):
                raise MalformedLine(0, "timestamps must be integer milliseconds")
        elif times.dtype.kind not in "iu":
            raise MalformedLine(0, f"unsupported dtype {times.dtype}")
        times = times.astype(np.int64, copy=True)
        if times[0] < 0:
            raise MalformedLine(1, "negative timestamp")
        bad = np.flatnonzero(np.diff(times) <= 0)
        if bad.size:
            raise NonMonotone(int(bad[0]) + 2)
        times.setflags(write=False)
        object.__setattr__(self, "times", times)

    def __len__(self):
        return self.times.size

    def __eq__(self, other):
        if not isinstance(other, EventSeries):
            return NotImplemented
        return np.array_equal(self.times, other.times)

    def __repr__(self):
        label = f", source_label={self.source_label!r}" if self.source_label else ""
        return f"EventSeries(n={len(self)}, last={int(self.times[-1])}{label})"


@dataclass(frozen=True)
class SeriesStats:
    count: int
    t_M: int
    duration: int


def _tokens(line, line_no):
    toks = [t for t in _SPLIT.split(line.strip()) if t]
    try:
        return [int(t) for t in toks]
    except ValueError:
        raise MalformedLine(line_no, f"non-integer token in {line.strip()!r}") from None


def parse_event_file(content: str, format_hint: str = "cumulative",
                     source_label: str = "") -> EventSeries:
    """Parse event-file text into an :class:`EventSeries`.

    Raises EmptyInput, MalformedLine, NonMonotone or InconsistentColumns;
    line numbers in errors are 1-based physical lines of ``content``.
    """
    fmt = format_hint.replace("-", "_")
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {format_hint!r}; expected one of {FORMATS}")

    times = []
    prev = None
    for line_no, line in enumerate(content.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        vals = _tokens(stripped, line_no)
        width = 2 if fmt == "two_column" else 1
        if len(vals) != width:
            raise MalformedLine(line_no, f"expected {width} value(s), got {len(vals)}")

        if fmt == "cumulative":
            t = vals[0]
        elif fmt == "intervals":
            if vals[0] < 0:
                raise MalformedLine(line_no, "negative interval")
            t = vals[0] if prev is None else prev + vals[0]
        else:
            interval, t = vals
            if prev is not None and t - prev != interval:
                if t <= prev:
                    raise NonMonotone(line_no)
                raise InconsistentColumns(line_no)

        if t < 0:
            raise MalformedLine(line_no, "negative timestamp")
        if prev is not None and t <= prev:
            raise NonMonotone(line_no)
        times.append(t)
        prev = t

    if not times:
        raise EmptyInput("no event times found")
    return EventSeries(np.array(times, dtype=np.int64), source_label)


def read_event_file(path, format_hint: str = "cumulative") -> EventSeries:
    path = Path(path)
    return parse_event_file(path.read_text(encoding="utf-8"), format_hint,
                            source_label=str(path))


def serialize(series: EventSeries) -> str:
    """Cumulative single-column text, newline-terminated."""
    return "".join(f"{int(t)}\n" for t in series.times)


def series_stats(series: EventSeries) -> SeriesStats:
    count = len(series)
    if count < 2:
        raise TooFewEvents(f"need at least 2 events, got {count}")
    duration = int(series.times[-1] - series.times[0])
    # half-up rounding in integer arithmetic
    gaps = count - 1
    t_M = (2 * duration + gaps) // (2 * gaps)
    return SeriesStats(count=count, t_M=t_M, duration=duration)


def base_times(series: EventSeries, t_M: int, multiplier: int = 3,
               require_full_cycle: bool = True) -> np.ndarray:
    """Anchor times ``multiplier * n * t_M`` for n = 0..n_max.

    With ``require_full_cycle`` (the default) the last anchor satisfies
    ``t_n + multiplier * t_M < last event``, so every window closes before the
    record does. Otherwise every anchor ``t_n <= last event`` is kept, and the
    trailing cycle may be cut short by the end of the record.
    """
    if t_M <= 0:
        raise ValueError(f"t_M must be positive, got {t_M}")
    if multiplier < 1:
        raise ValueError(f"multiplier must be >= 1, got {multiplier}")
    stride = multiplier * int(t_M)
    last = int(series.times[-1])
    if require_full_cycle:
        if stride >= last:
            raise NoFullCycle(
                f"record ends at {last} ms; one cycle needs more than {stride} ms")
        n_max = (last - stride - 1) // stride
    else:
        n_max = last // stride
    return np.arange(n_max + 1, dtype=np.int64) * stride
