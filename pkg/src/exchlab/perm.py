"""Permutations of {0..n-1}: sampling, composition and the swallow construction.

A permutation is stored as a forward mapping word: ``mapping[i]`` is the
(0-based) image of position ``i``.  Applied to a sequence it reads
``apply(sigma, x)[i] = x[mapping[i]]``, matching the convention that a
permuted sequence lists entries in the order the permutation visits them.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from scipy.stats import chi2

from .rng import RngStream

MAX_ENUMERABLE_N = 7  # 7! = 5040 cells is the largest chi-square table we allow


@dataclass(frozen=True)
class Permutation:
    """A bijection of {0..n-1} in word form.

    >>> Permutation((1, 2, 0)) * Permutation((1, 0, 2))
    Permutation(mapping=(2, 1, 0))
    """

    mapping: tuple[int, ...]

    def __post_init__(self):
        n = len(self.mapping)
        seen = [False] * n
        for v in self.mapping:
            if not isinstance(v, int) or not 0 <= v < n or seen[v]:
                raise ValueError(f"not a permutation word: {self.mapping!r}")
            seen[v] = True

    @property
    def n(self) -> int:
        return len(self.mapping)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    def __call__(self, i: int) -> int:
        return self.mapping[i]

    def __mul__(self, other: "Permutation") -> "Permutation":
        """Function composition: ``(a * b)(i) = a(b(i))``."""
        if self.n != other.n:
            raise ValueError(f"size mismatch: {self.n} vs {other.n}")
        return Permutation(tuple(self.mapping[j] for j in other.mapping))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, v in enumerate(self.mapping):
            inv[v] = i
        return Permutation(tuple(inv))

    def apply(self, values) -> tuple:
        """Rearrange a sequence: entry ``i`` of the result is ``values[self(i)]``."""
        if len(values) != self.n:
            raise ValueError(f"length mismatch: sequence {len(values)}, permutation {self.n}")
        return tuple(values[v] for v in self.mapping)

    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self.mapping))


def uniform_permutation(n: int, rng: RngStream) -> Permutation:
    """Uniform draw from the n! permutations of {0..n-1}.

    Range-decreasing shuffle; consumes exactly ``max(n - 1, 0)`` bounded
    draws (two rng words each) regardless of outcome.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    word = list(range(n))
    for i in range(n - 1, 0, -1):
        j = rng.below(i + 1)
        word[i], word[j] = word[j], word[i]
    return Permutation(tuple(word))


def sorting_permutation(values, rank=None) -> Permutation:
    """The stable permutation gamma with ``gamma.apply(values)`` non-decreasing.

    Ties keep their original relative order, so the result is deterministic.
    ``rank`` optionally maps a symbol to its sort key (defaults to the
    symbol itself).

    >>> sorting_permutation((1, 0)).mapping
    (1, 0)
    """
    key = (lambda i: values[i]) if rank is None else (lambda i: rank(values[i]))
    return Permutation(tuple(sorted(range(len(values)), key=key)))


def swallow_decompose(gamma: Permutation, rng: RngStream) -> tuple[Permutation, Permutation]:
    """Split gamma into uniform factors: returns (alpha, beta) with alpha*beta = gamma.

    A fresh uniform sigma independent of gamma gives ``alpha = sigma^-1``
    and ``beta = sigma * gamma``; each factor is marginally uniform no
    matter how gamma was produced, while the composition returns gamma
    exactly on every call.
    """
    sigma = uniform_permutation(gamma.n, rng)
    alpha, beta = sigma.inverse(), sigma * gamma
    # exact algebraic identity, verified on every call
    assert (alpha * beta).mapping == gamma.mapping
    return alpha, beta


@dataclass(frozen=True)
class UniformityReport:
    statistic: float
    dof: int
    threshold: float
    quantile: float
    passed: bool


def permutation_uniformity_test(samples, quantile: float = 0.999) -> UniformityReport:
    """Chi-square goodness of fit of permutation samples against uniform.

    Requires n <= 7 (so the n! cells are enumerable) and at least 5 samples
    per cell on average, the usual chi-square validity heuristic.
    """
    samples = list(samples)
    if not samples:
        raise ValueError("no samples")
    n = samples[0].n
    if any(s.n != n for s in samples):
        raise ValueError("samples must share a common size")
    if n > MAX_ENUMERABLE_N:
        raise ValueError(f"alphabet of permutations too large: n={n} > {MAX_ENUMERABLE_N}")
    cells = math.factorial(n)
    if cells * 5 > len(samples):
        raise ValueError(f"need at least {5 * cells} samples for {cells} cells, got {len(samples)}")
    counts = {word: 0 for word in itertools.permutations(range(n))}
    for s in samples:
        counts[s.mapping] += 1
    expected = len(samples) / cells
    statistic = sum((c - expected) ** 2 / expected for c in counts.values())
    dof = cells - 1
    threshold = float(chi2.ppf(quantile, dof)) if dof > 0 else 0.0
    return UniformityReport(
        statistic=statistic,
        dof=dof,
        threshold=threshold,
        quantile=quantile,
        passed=statistic <= threshold,
    )
