"""Effective rank and related channel-conditioning measures."""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .linalg import svd

__all__ = [
    "RankReport",
    "effective_rank",
    "condition_number",
    "difference_pct",
    "rank_report",
    "mean_effective_rank",
]

# relative to the largest singular value
ZERO_THRESHOLD = 1e-12


def _clean(singular_values):
    q = np.asarray(singular_values, dtype=float).ravel()
    if q.size == 0:
        raise ValueError("at least one singular value is required")
    if not np.all(np.isfinite(q)) or np.any(q < 0):
        raise ValueError("singular values must be finite and non-negative")
    top = q.max()
    if top <= 0:
        raise ValueError("effective rank is undefined for an all-zero spectrum")
    return np.where(q < ZERO_THRESHOLD * top, 0.0, q)


def effective_rank(singular_values: Sequence[float]) -> float:
    """Entropy-based effective rank ``exp(-sum p_i ln p_i)``, ``p_i = q_i / sum q``.

    Values below ``1e-12`` times the largest one are treated as zero, and
    ``0 ln 0`` is taken as 0. The input order is irrelevant.

    >>> round(effective_rank([2, 1, 1]), 6)
    2.828427
    """
    q = _clean(singular_values)
    p = q / q.sum()
    nz = p[p > 0]
    r = float(np.exp(-np.sum(nz * np.log(nz))))
    # round-off can push the entropy marginally outside [0, ln m]
    return min(max(r, 1.0), float(nz.size))


def condition_number(singular_values: Sequence[float]) -> float:
    q = _clean(singular_values)
    if np.any(q == 0):
        return float("inf")
    return float(q.max() / q.min())


def difference_pct(effective: float, baseline: float) -> float:
    """Relative rank change in percent, ``100 (R - R_base) / R_base``."""
    if baseline <= 0:
        raise ValueError("baseline effective rank must be positive")
    return 100.0 * (effective - baseline) / baseline


@dataclass(frozen=True)
class RankReport:
    singular_values: np.ndarray
    effective_rank: float
    condition_number: float
    baseline_effective_rank: Optional[float] = None
    difference_pct: Optional[float] = None


def rank_report(h, baseline: Optional[float] = None) -> RankReport:
    q = svd(h).singular_values
    re = effective_rank(q)
    diff = None if baseline is None else difference_pct(re, baseline)
    return RankReport(q, re, condition_number(q), baseline, diff)


def mean_effective_rank(reports: Sequence[RankReport]) -> float:
    if len(reports) == 0:
        raise ValueError("cannot average an empty list of reports")
    return float(np.mean([r.effective_rank for r in reports]))
