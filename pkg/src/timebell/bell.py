"""Pairwise correlations of dichotomic values and the Bell statistic D.

``D = |c12 - c13| + c23``. On a common sample every row contributes
``|u1 u2 - u1 u3| + u2 u3 = 1``, so the full-sample D can never exceed 1;
only subsampled correlations (one random pair per row) can.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .dichotomizer import UMatrix
from .errors import DomainError, EmptySubsample


class Pair(enum.IntEnum):
    P12 = 0
    P13 = 1
    P23 = 2

    @property
    def columns(self):
        return _PAIR_COLUMNS[self]


_PAIR_COLUMNS = {Pair.P12: (0, 1), Pair.P13: (0, 2), Pair.P23: (1, 2)}


@dataclass(frozen=True)
class BellResult:
    c12: float
    c13: float
    c23: float
    n12: int
    n13: int
    n23: int
    d: float
    sums: tuple | None = None  # integer product sums, when known

    @property
    def counts(self):
        return (self.n12, self.n13, self.n23)

    @property
    def correlations(self):
        return (self.c12, self.c13, self.c23)

    @property
    def violates(self):
        """``D > 1``, decided in integer arithmetic when the sums are known."""
        if self.sums is None:
            return self.d > 1
        return exceeds_one(self.sums, self.counts)


def exceeds_one(sums, counts):
    """Exact test of ``|s12/n12 - s13/n13| + s23/n23 > 1``."""
    s12, s13, s23 = (int(v) for v in sums)
    n12, n13, n23 = (int(v) for v in counts)
    return abs(s12 * n13 - s13 * n12) * n23 + s23 * n12 * n13 > n12 * n13 * n23


def d_statistic(c12: float, c13: float, c23: float, tol: float = 1e-12) -> float:
    for name, c in (("c12", c12), ("c13", c13), ("c23", c23)):
        if not -1 - tol <= c <= 1 + tol:
            raise DomainError(f"{name}={c} outside [-1, 1]")
    return abs(c12 - c13) + c23


def pair_products(u: UMatrix) -> np.ndarray:
    """(N, 3) int8 table of u1*u2, u1*u3, u2*u3."""
    v = u.values
    return np.column_stack([v[:, 0] * v[:, 1], v[:, 0] * v[:, 2], v[:, 1] * v[:, 2]])


def _result(sums, counts) -> BellResult:
    sums = tuple(int(s) for s in sums)
    c = [s / int(n) for s, n in zip(sums, counts)]
    return BellResult(c[0], c[1], c[2], int(counts[0]), int(counts[1]),
                      int(counts[2]), d_statistic(*c), sums)


def correlate_from_products(products: np.ndarray, labels: np.ndarray) -> BellResult:
    """Subsample correlations given precomputed :func:`pair_products`."""
    labels = np.asarray(labels)
    picked = products[np.arange(labels.size), labels]
    counts = np.bincount(labels, minlength=3)
    for p in Pair:
        if counts[p] == 0:
            raise EmptySubsample(p.name)
    # sum of ±1 products = 2 * (#positive) - n, kept in integers
    positive = np.bincount(labels[picked > 0], minlength=3)
    return _result(2 * positive - counts, counts)


def correlate_pairs(u: UMatrix, assignment) -> BellResult:
    """Correlations over the rows assigned to each pair.

    ``assignment`` is a length-N sequence of :class:`Pair` labels (or their
    integer codes 0, 1, 2).
    """
    labels = np.asarray(assignment, dtype=np.intp)
    if labels.shape != (len(u),):
        raise ValueError(f"assignment length {labels.size} != N={len(u)}")
    if labels.size and (labels.min() < 0 or labels.max() > 2):
        raise ValueError("assignment labels must be P12, P13 or P23")
    return correlate_from_products(pair_products(u), labels)


def full_sample_bell(u: UMatrix) -> BellResult:
    n = len(u)
    if n < 1:
        raise EmptySubsample("all")
    sums = pair_products(u).astype(np.int64).sum(axis=0)
    return _result(sums, (n, n, n))
