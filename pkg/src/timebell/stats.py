"""Kolmogorov-Smirnov normality test and histogram data for the D sample."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .errors import DegenerateSample, TooFewSamples

MIN_KS_SAMPLES = 8
KS_CAVEAT = ("KS p-value uses the asymptotic Kolmogorov distribution with mean/sd "
             "estimated from the same sample (no Lilliefors correction); it is "
             "conservative.")


@dataclass(frozen=True)
class KsResult:
    statistic: float
    p_value: float
    n: int
    fitted_mean: float
    fitted_sd: float


@dataclass(frozen=True, eq=False)
class Histogram:
    bin_edges: np.ndarray
    counts: np.ndarray
    density_overlay: np.ndarray

    def to_csv(self) -> str:
        lines = ["bin_left,bin_right,count,normal_density"]
        for lo, hi, c, dens in zip(self.bin_edges[:-1], self.bin_edges[1:],
                                   self.counts, self.density_overlay):
            lines.append(f"{lo:.6f},{hi:.6f},{int(c)},{dens:.6f}")
        return "\n".join(lines) + "\n"


def kolmogorov_sf(t: float, eps: float = 1e-17) -> float:
    """Q(t) = 2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 t^2), i.e. P(K > t)."""
    if t < 0.2:
        # alternating series converges too slowly below here; Q(0.2) = 1 - 5e-13
        return 1.0
    total, k = 0.0, 1
    while True:
        term = math.exp(-2.0 * k * k * t * t)
        total += term if k % 2 else -term
        if term < eps:
            break
        k += 1
    return min(1.0, max(0.0, 2.0 * total))


def ks_statistic(samples, mean: float, sd: float) -> float:
    """Two-sided sup distance between the ECDF and N(mean, sd^2)."""
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    cdf = ndtr((x - mean) / sd)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - cdf), np.max(cdf - (i - 1) / n)))


def _fit(samples):
    x = np.asarray(samples, dtype=float)
    if x.ndim != 1:
        x = x.ravel()
    if x.size < 2 or x.min() == x.max():
        raise DegenerateSample("sample has zero spread")
    mean = float(x.mean())
    sd = float(x.std(ddof=1))
    if sd == 0.0 or not math.isfinite(sd):
        raise DegenerateSample("sample has zero spread")
    return x, mean, sd


def ks_normality_test(samples) -> KsResult:
    x = np.asarray(samples, dtype=float)
    if x.size < MIN_KS_SAMPLES:
        raise TooFewSamples(f"KS test needs >= {MIN_KS_SAMPLES} samples, got {x.size}")
    x, mean, sd = _fit(x)
    stat = ks_statistic(x, mean, sd)
    p = kolmogorov_sf(math.sqrt(x.size) * stat)
    return KsResult(stat, p, int(x.size), mean, sd)


def normal_pdf(x, mean, sd):
    z = (np.asarray(x, dtype=float) - mean) / sd
    return np.exp(-0.5 * z * z) / (sd * math.sqrt(2 * math.pi))


def histogram(samples, bins: int = 30) -> Histogram:
    if bins < 1:
        raise ValueError(f"bins must be >= 1, got {bins}")
    x, mean, sd = _fit(samples)
    counts, edges = np.histogram(x, bins=bins, range=(x.min(), x.max()))
    mids = 0.5 * (edges[:-1] + edges[1:])
    return Histogram(edges, counts.astype(np.int64), normal_pdf(mids, mean, sd))
