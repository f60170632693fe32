"""Two-sided paired significance tests.

Both tests take paired score sequences and look only at the differences
a - b, so swapping the arguments leaves the p-value unchanged.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np
from scipy.special import betainc
from scipy.stats import norm, rankdata

from core.config import EXACT_WILCOXON_MAX_N

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SignificanceResult:
    statistic: float
    p_value: float
    n: int
    method: str
    defined: bool = True

    def to_dict(self) -> dict[str, Any]:
        return {
            "statistic": self.statistic,
            "p_value": self.p_value,
            "n": self.n,
            "method": self.method,
            "defined": self.defined,
        }


def _differences(a: Sequence[float], b: Sequence[float]) -> np.ndarray:
    x = np.asarray(a, dtype=np.float64)
    y = np.asarray(b, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(f"paired samples must be 1-D and equally long, got {x.shape} and {y.shape}")
    return x - y


def student_t_two_sided(t: float, df: float) -> float:
    """Two-sided tail of Student's t via the regularized incomplete beta."""
    return float(betainc(df / 2.0, 0.5, df / (df + t * t)))


def paired_t_test(a: Sequence[float], b: Sequence[float]) -> SignificanceResult:
    d = _differences(a, b)
    n = d.shape[0]
    if n < 2:
        raise ValueError(f"paired t-test needs at least 2 pairs, got {n}")
    sd = float(d.std(ddof=1))
    if sd == 0.0:
        logger.debug("paired t-test undefined: zero-variance differences")
        return SignificanceResult(statistic=math.nan, p_value=math.nan, n=n, method="paired-t", defined=False)
    t = float(d.mean()) / (sd / math.sqrt(n))
    return SignificanceResult(statistic=t, p_value=student_t_two_sided(t, n - 1), n=n, method="paired-t")


def _exact_rank_sum_counts(doubled_ranks: np.ndarray) -> np.ndarray:
    """Number of sign assignments reaching each doubled positive-rank sum.

    Ranks are doubled so tied (half-integer) ranks stay integral; the table
    equals a full enumeration of the 2^n assignments.
    """
    counts = np.zeros(int(doubled_ranks.sum()) + 1, dtype=np.float64)
    counts[0] = 1.0
    for r in doubled_ranks:
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[: counts.shape[0] - r]
        counts = counts + shifted
    return counts


def wilcoxon_signed_rank(
    a: Sequence[float], b: Sequence[float], method: str = "auto"
) -> SignificanceResult:
    """Exact null distribution up to EXACT_WILCOXON_MAX_N non-zero differences.

    Larger samples use the normal approximation with tie correction;
    `method` ("exact" or "normal") forces one of the two. Zero differences
    are dropped.
    """
    if method not in ("auto", "exact", "normal"):
        raise ValueError(f"unknown Wilcoxon method {method!r}")
    d = _differences(a, b)
    d = d[d != 0.0]
    n = d.shape[0]
    if n == 0:
        raise ValueError("Wilcoxon signed-rank test is undefined when all differences are zero")
    ranks = rankdata(np.abs(d))
    w_plus = float(ranks[d > 0].sum())

    if method == "exact" or (method == "auto" and n <= EXACT_WILCOXON_MAX_N):
        if n < 5:
            logger.debug("exact Wilcoxon with only %d non-zero differences", n)
        doubled = np.rint(ranks * 2).astype(np.int64)
        counts = _exact_rank_sum_counts(doubled)
        total = counts.sum()
        k = int(round(w_plus * 2))
        lower = counts[: k + 1].sum() / total
        upper = counts[k:].sum() / total
        p = min(1.0, 2.0 * min(lower, upper))
        return SignificanceResult(statistic=w_plus, p_value=float(p), n=n, method="wilcoxon-exact")

    mean = n * (n + 1) / 4.0
    var = n * (n + 1) * (2 * n + 1) / 24.0
    _, tie_sizes = np.unique(ranks, return_counts=True)
    var -= float(np.sum(tie_sizes**3 - tie_sizes)) / 48.0
    if var <= 0:
        return SignificanceResult(statistic=w_plus, p_value=1.0, n=n, method="wilcoxon-normal")
    z = (w_plus - mean) / math.sqrt(var)
    p = min(1.0, 2.0 * float(norm.sf(abs(z))))
    return SignificanceResult(statistic=w_plus, p_value=p, n=n, method="wilcoxon-normal")
