"""Random pair assignment and the experiments built on it.

Every random stream is derived from ``(seed, replicate_index)`` through
:class:`numpy.random.SeedSequence`, so a replicate's assignment does not
depend on which other replicates ran, in what order, or on how many threads.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product

import numpy as np

from .bell import BellResult, correlate_from_products, pair_products
from .dichotomizer import TauTriple, UMatrix
from .errors import EmptySubsample, OutOfRange

log = logging.getLogger(__name__)

DEFAULT_OFFSETS = (300, 400, 500, 600, 700, 800)
DEFAULT_SEED = 12345


def _rng(seed: int, replicate_index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(replicate_index),))
    return np.random.Generator(np.random.PCG64(ss))


def random_assignment(n: int, seed: int, replicate_index: int = 0) -> np.ndarray:
    """Uniform i.i.d. pair labels (0=P12, 1=P13, 2=P23) of length ``n``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return _rng(seed, replicate_index).integers(0, 3, size=n, dtype=np.int8)


def _parallel_map(fn, items, workers):
    if workers is None or workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _chunks(n, k):
    k = max(1, min(k, n))
    step = math.ceil(n / k)
    return [range(i, min(i + step, n)) for i in range(0, n, step)]


@dataclass(frozen=True)
class TauGrid:
    """Window offsets relative to 0, t_M and 2 t_M for the three axes."""

    offsets1: tuple = DEFAULT_OFFSETS
    offsets2: tuple = DEFAULT_OFFSETS
    offsets3: tuple = DEFAULT_OFFSETS

    def __post_init__(self):
        for name in ("offsets1", "offsets2", "offsets3"):
            object.__setattr__(self, name, tuple(int(v) for v in getattr(self, name)))

    def __len__(self):
        return len(self.offsets1) * len(self.offsets2) * len(self.offsets3)

    def combinations(self):
        # off3 varies fastest
        return list(product(self.offsets1, self.offsets2, self.offsets3))

    def check(self, t_M):
        if len(self) == 0:
            raise ValueError("empty tau grid")
        for v in self.offsets1 + self.offsets2 + self.offsets3:
            if not 0 < v <= t_M:
                raise OutOfRange(f"grid offset {v} outside (0, t_M={t_M}]")
        return self


@dataclass(frozen=True)
class SweepRow:
    off1: int
    off2: int
    off3: int
    result: BellResult


def sweep_grid(u_source, grid: TauGrid, t_M: int, seed: int = DEFAULT_SEED,
               shared_assignment: bool = False, workers: int = 1) -> list:
    """Evaluate one random assignment for each grid combination.

    ``u_source`` maps a :class:`TauTriple` to its :class:`UMatrix`.
    Combination ``i`` (in row order) uses replicate index ``i``, or 0 for
    every row when ``shared_assignment`` is set.
    """
    grid.check(t_M)
    combos = grid.combinations()

    def run(i):
        off = combos[i]
        u = u_source(TauTriple.from_offsets(*off, t_M))
        labels = random_assignment(len(u), seed, 0 if shared_assignment else i)
        return SweepRow(*off, correlate_from_products(pair_products(u), labels))

    return _parallel_map(run, list(range(len(combos))), workers)


def argmax_row(rows) -> SweepRow:
    """Row with the largest D; ties go to the earliest row."""
    return max(rows, key=lambda r: r.result.d)


@dataclass(frozen=True, eq=False)
class MonteCarloSummary:
    reps: int
    seed: int
    d_values: np.ndarray
    correlations: np.ndarray   # (k, 3) c12, c13, c23 of successful replicates
    counts: np.ndarray         # (k, 3) n12, n13, n23
    sums: np.ndarray           # (k, 3) integer product sums
    replicates: np.ndarray     # replicate indices that succeeded
    failures: int
    violations: int
    d_min: float
    d_max: float
    d_mean: float
    d_sd: float


def monte_carlo(u: UMatrix, reps: int, seed: int = DEFAULT_SEED,
                workers: int = 1) -> MonteCarloSummary:
    """Replicate the random pair assignment ``reps`` times on one UMatrix.

    A replicate whose assignment leaves some pair empty is counted in
    ``failures`` and left out of every per-replicate array.
    """
    if reps < 1:
        raise ValueError(f"reps must be >= 1, got {reps}")
    products = pair_products(u)
    n = len(u)

    def run(block):
        out = []
        for r in block:
            try:
                res = correlate_from_products(products, random_assignment(n, seed, r))
            except EmptySubsample:
                out.append(None)
            else:
                out.append(res)
        return out

    blocks = _chunks(reps, workers or 1)
    results = [res for part in _parallel_map(run, blocks, workers) for res in part]

    ok = [i for i, res in enumerate(results) if res is not None]
    good = [results[i] for i in ok]
    if not good:
        raise EmptySubsample("every replicate")
    d = np.array([res.d for res in good])
    corr = np.array([res.correlations for res in good])
    counts = np.array([res.counts for res in good], dtype=np.int64)
    sums = np.array([res.sums for res in good], dtype=np.int64)
    return MonteCarloSummary(
        reps=reps, seed=seed, d_values=d, correlations=corr, counts=counts, sums=sums,
        replicates=np.array(ok, dtype=np.int64), failures=reps - len(good),
        violations=sum(res.violates for res in good),
        d_min=float(d.min()), d_max=float(d.max()), d_mean=float(d.mean()),
        d_sd=float(d.std(ddof=1)) if d.size > 1 else 0.0)


def neighborhood(tau: TauTriple, delta: int = 20, t_M: int | None = None,
                 return_dropped: bool = False):
    """All ``±delta`` / ``0`` shifts of ``tau`` except ``tau`` itself.

    Shifted triples breaking the TauTriple ordering (or ``tau3 <= 3 t_M`` when
    ``t_M`` is given) are dropped; their count is logged and optionally
    returned alongside the list.
    """
    out, dropped = [], 0
    if delta != 0:
        for s1, s2, s3 in product((-delta, 0, delta), repeat=3):
            if s1 == s2 == s3 == 0:
                continue
            try:
                cand = TauTriple(tau.tau1 + s1, tau.tau2 + s2, tau.tau3 + s3)
                if t_M is not None:
                    cand.check(t_M)
            except OutOfRange:
                dropped += 1
                continue
            out.append(cand)
    if dropped:
        log.warning("neighborhood: dropped %d invalid triple(s)", dropped)
    return (out, dropped) if return_dropped else out
