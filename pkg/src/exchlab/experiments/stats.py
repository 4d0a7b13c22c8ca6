"""Statistical helpers for scenario reports: chi-square tests and normal
confidence intervals with a fixed, documented z."""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.stats import chi2

Z99 = 2.576  # normal 99% two-sided quantile used for every interval


def proportion_ci(successes: int, total: int) -> tuple[float, float]:
    """Normal-approximation 99% interval for a proportion, clipped to [0,1]."""
    if total <= 0:
        raise ValueError("total must be positive")
    p = successes / total
    half = Z99 * math.sqrt(p * (1.0 - p) / total)
    return max(0.0, p - half), min(1.0, p + half)


def mean_ci(total: float, total_sq: float, count: int) -> tuple[float, float]:
    """Normal-approximation 99% interval for a mean from summed moments."""
    if count <= 0:
        raise ValueError("count must be positive")
    mean = total / count
    variance = max(0.0, total_sq / count - mean * mean)
    half = Z99 * math.sqrt(variance / count)
    return mean - half, mean + half


@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    dof: int
    threshold: float
    passed: bool


def chi_square_uniform(counts: dict, num_cells: int, quantile: float) -> ChiSquareResult:
    """Goodness of fit of observed cell counts against the uniform law."""
    total = sum(counts.values())
    expected = total / num_cells
    statistic = (
        sum((c - expected) ** 2 / expected for c in counts.values())
        + (num_cells - len(counts)) * expected
    )
    dof = num_cells - 1
    threshold = float(chi2.ppf(quantile, dof))
    return ChiSquareResult(statistic, dof, threshold, statistic <= threshold)


def chi_square_goodness(
    counts: dict, expected_probs: dict, total: int, quantile: float, min_expected: float = 5.0
) -> ChiSquareResult:
    """Goodness of fit against a known law; cells with expectation below
    ``min_expected`` are pooled into one tail cell to keep the chi-square
    approximation valid."""
    statistic = 0.0
    cells = 0
    tail_observed = 0.0
    tail_expected = 0.0
    for key in sorted(expected_probs):
        expected = expected_probs[key] * total
        observed = counts.get(key, 0)
        if expected < min_expected:
            tail_observed += observed
            tail_expected += expected
        else:
            statistic += (observed - expected) ** 2 / expected
            cells += 1
    stray = sum(c for key, c in counts.items() if key not in expected_probs)
    tail_observed += stray
    if tail_expected > 0:
        statistic += (tail_observed - tail_expected) ** 2 / tail_expected
        cells += 1
    elif stray:
        raise ValueError("observed cells outside the support of the expected law")
    dof = max(cells - 1, 1)
    threshold = float(chi2.ppf(quantile, dof))
    return ChiSquareResult(statistic, dof, threshold, statistic <= threshold)


def chi_square_two_sample(counts_a: dict, counts_b: dict, quantile: float) -> ChiSquareResult:
    """2xC contingency test that two samples share one law."""
    cells = sorted(set(counts_a) | set(counts_b))
    na = sum(counts_a.values())
    nb = sum(counts_b.values())
    total = na + nb
    statistic = 0.0
    used = 0
    for c in cells:
        col = counts_a.get(c, 0) + counts_b.get(c, 0)
        if col == 0:
            continue
        used += 1
        ea = na * col / total
        eb = nb * col / total
        statistic += (counts_a.get(c, 0) - ea) ** 2 / ea
        statistic += (counts_b.get(c, 0) - eb) ** 2 / eb
    dof = max(used - 1, 1)
    threshold = float(chi2.ppf(quantile, dof))
    return ChiSquareResult(statistic, dof, threshold, statistic <= threshold)
