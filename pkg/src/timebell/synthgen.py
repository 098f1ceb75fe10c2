"""Synthetic event series with known structure, used as controls and oracles."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bell import BellResult, d_statistic
from .dichotomizer import TauTriple
from .errors import EmptyResult
from .event_series import EventSeries

KINDS = ("poisson", "periodic", "jittered_periodic", "gamma_renewal")


@dataclass(frozen=True)
class ProcessSpec:
    """Point-process recipe. Unused parameters for a given ``kind`` are ignored.

    ``rate`` is events per ms; ``period``, ``jitter_sd``, ``scale`` and
    ``duration`` are in ms.
    """

    kind: str
    duration: int
    rate: float | None = None
    period: int | None = None
    jitter_sd: float = 0.0
    shape: float | None = None
    scale: float | None = None
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown process kind {self.kind!r}; expected one of {KINDS}")
        if not self.duration > 0:
            raise ValueError("duration must be positive")
        need = {
            "poisson": ("rate",),
            "periodic": ("period",),
            "jittered_periodic": ("period",),
            "gamma_renewal": ("shape", "scale"),
        }[self.kind]
        for name in need:
            v = getattr(self, name)
            if v is None or not v > 0:
                raise ValueError(f"{self.kind} needs positive {name}, got {v!r}")
        if self.jitter_sd < 0:
            raise ValueError("jitter_sd must be >= 0")


def ecg_like(n_events: int = 4340, mean: float = 829.0, shape: float = 25.0,
             seed: int = 0) -> ProcessSpec:
    """Gamma renewal stand-in for an RR record (CV = 1/sqrt(shape) = 0.2)."""
    return ProcessSpec("gamma_renewal", duration=int(round(n_events * mean)),
                       shape=shape, scale=mean / shape, seed=seed)


def _renewal(draw, mean_gap, duration):
    # draw gaps in blocks until the running sum passes the duration
    chunks, total = [], 0.0
    block = int(duration / mean_gap * 1.05) + 64
    while total <= duration:
        gaps = draw(block)
        t = total + np.cumsum(gaps)
        chunks.append(t)
        total = float(t[-1])
    t = np.concatenate(chunks)
    t = np.rint(t[t <= duration]).astype(np.int64)
    return np.unique(t)


def generate(spec: ProcessSpec) -> EventSeries:
    rng = np.random.default_rng(spec.seed)
    if spec.kind == "poisson":
        mean_gap = 1.0 / spec.rate
        times = _renewal(lambda k: rng.exponential(mean_gap, k), mean_gap, spec.duration)
    elif spec.kind == "gamma_renewal":
        times = _renewal(lambda k: rng.gamma(spec.shape, spec.scale, k),
                         spec.shape * spec.scale, spec.duration)
    else:
        k = np.arange(spec.duration // spec.period + 1, dtype=np.int64)
        times = k * spec.period
        if spec.kind == "jittered_periodic" and spec.jitter_sd > 0:
            jit = np.rint(times + rng.normal(0.0, spec.jitter_sd, times.size))
            jit = np.maximum(jit.astype(np.int64), 0)
            # nudge each event to at least predecessor + 1
            idx = np.arange(jit.size)
            times = np.maximum.accumulate(jit - idx) + idx
    if times.size == 0:
        raise EmptyResult(f"no {spec.kind} event fell within {spec.duration} ms")
    return EventSeries(times, source_label=f"synthetic:{spec.kind}")


def poisson_expected_bell(rate: float, taus: TauTriple, t_M: int) -> BellResult:
    """Closed-form correlations for a homogeneous Poisson process.

    The three windows are disjoint, so their occupancies are independent and
    each expected product factorizes into ``E[U_a] E[U_b]`` with
    ``E[U_a] = 1 - 2 exp(-rate * w_a)``. Counts are reported as 0.
    """
    widths = (taus.tau1, taus.tau2 - t_M, taus.tau3 - 2 * t_M)
    m = [1.0 - 2.0 * math.exp(-rate * w) for w in widths]
    c12, c13, c23 = m[0] * m[1], m[0] * m[2], m[1] * m[2]
    return BellResult(c12, c13, c23, 0, 0, 0, d_statistic(c12, c13, c23))
