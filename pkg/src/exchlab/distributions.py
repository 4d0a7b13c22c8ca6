"""Exact distribution algebra over S^n for a finite alphabet S = {0..m-1}.

Joint laws are dense tables indexed by mixed-radix pattern encoding with
coordinate 0 most significant, so the table is portable across writers.
The engine is meant for desk-scale verification: table sizes are capped
(default one million patterns) and everything is computed exactly up to
double precision.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .rng import RngStream

DEFAULT_MAX_PATTERNS = 10**6
PROB_TOL = 1e-12


class NotExchangeableError(ValueError):
    """Raised when an operation requires an exchangeable law but gets none."""

    def __init__(self, transposition: tuple[int, int], violation: float):
        self.transposition = transposition
        self.violation = violation
        super().__init__(
            f"distribution is not exchangeable: swapping coordinates "
            f"{transposition[0]} and {transposition[1]} changes a pattern "
            f"probability by {violation:.3e}"
        )


def pattern_index(m: int, n: int, pattern) -> int:
    """Mixed-radix encoding of a pattern, coordinate 0 most significant."""
    if len(pattern) != n:
        raise ValueError(f"pattern length {len(pattern)} != {n}")
    idx = 0
    for z in pattern:
        if not 0 <= z < m:
            raise ValueError(f"symbol {z} outside alphabet of size {m}")
        idx = idx * m + z
    return idx


class SequenceDistribution:
    """Explicit pmf over S^n, S = {0..m-1}.

    ``probs[index(z)]`` is Pr(X = z); probabilities must be non-negative
    and sum to 1 within 1e-12.
    """

    def __init__(self, m: int, n: int, probs, max_patterns: int = DEFAULT_MAX_PATTERNS):
        if m < 1:
            raise ValueError("alphabet size m must be >= 1")
        if n < 0:
            raise ValueError("length n must be >= 0")
        size = m**n
        if size > max_patterns:
            raise ValueError(f"m**n = {size} exceeds the pattern cap {max_patterns}")
        table = np.asarray(probs, dtype=np.float64)
        if table.shape != (size,):
            raise ValueError(f"expected {size} probabilities, got shape {table.shape}")
        if table.min(initial=0.0) < 0.0:
            raise ValueError("probabilities must be non-negative")
        total = float(table.sum())
        if abs(total - 1.0) > PROB_TOL:
            raise ValueError(f"probabilities sum to {total!r}, not 1 within {PROB_TOL}")
        table = table.copy()
        table.flags.writeable = False
        self.m = m
        self.n = n
        self.probs = table

    # -- pattern indexing ------------------------------------------------

    def index(self, pattern) -> int:
        return pattern_index(self.m, self.n, pattern)

    def pattern(self, index: int) -> tuple[int, ...]:
        digits = [0] * self.n
        for i in range(self.n - 1, -1, -1):
            index, digits[i] = divmod(index, self.m)
        return tuple(digits)

    def patterns(self):
        return itertools.product(range(self.m), repeat=self.n)

    def prob(self, pattern) -> float:
        return float(self.probs[self.index(pattern)])

    def table(self) -> np.ndarray:
        """The pmf reshaped to one axis per coordinate."""
        return self.probs.reshape((self.m,) * self.n)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SequenceDistribution)
            and self.m == other.m
            and self.n == other.n
            and np.array_equal(self.probs, other.probs)
        )

    def __repr__(self) -> str:
        return f"SequenceDistribution(m={self.m}, n={self.n})"

    # -- constructors ----------------------------------------------------

    @classmethod
    def from_dict(cls, m: int, n: int, entries: dict) -> "SequenceDistribution":
        probs = np.zeros(m**n)
        for pattern, p in entries.items():
            probs[pattern_index(m, n, pattern)] = p
        return cls(m, n, probs)

    @classmethod
    def point_mass(cls, m: int, pattern) -> "SequenceDistribution":
        return cls.from_dict(m, len(pattern), {tuple(pattern): 1.0})

    @classmethod
    def iid(cls, marginal, n: int) -> "SequenceDistribution":
        """Product law with identical single-coordinate marginal."""
        pi = np.asarray(marginal, dtype=np.float64)
        table = np.ones(1)
        for _ in range(n):
            table = np.kron(table, pi)
        return cls(len(pi), n, table)

    # -- serialization ---------------------------------------------------

    def to_text(self) -> str:
        """Header line ``m<TAB>n`` then ``pattern<TAB>probability`` per
        nonzero entry, patterns as digit strings (alphabet size <= 10)."""
        if self.m > 10:
            raise ValueError("digit-string serialization requires m <= 10")
        lines = [f"{self.m}\t{self.n}"]
        for idx in np.flatnonzero(self.probs):
            digits = "".join(str(d) for d in self.pattern(int(idx)))
            lines.append(f"{digits}\t{float(self.probs[idx])!r}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SequenceDistribution":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty distribution file")
        head = lines[0].split()
        if len(head) != 2:
            raise ValueError(f"bad header {lines[0]!r}, expected 'm<TAB>n'")
        m, n = int(head[0]), int(head[1])
        entries = {}
        for ln in lines[1:]:
            digits, value = ln.split("\t")
            if len(digits) != n:
                raise ValueError(f"pattern {digits!r} has length {len(digits)}, expected {n}")
            entries[tuple(int(c) for c in digits)] = float(value)
        return cls.from_dict(m, n, entries)


@dataclass(frozen=True)
class MixingMeasure:
    """Discrete weighted support: the selection law of a mixture.

    Atoms may be reals in [0,1], pattern tuples, or per-symbol probability
    vectors, depending on which mixture the measure drives.  Weights sum
    to 1; negative weights are allowed only when ``signed`` is set.
    """

    support: tuple
    weights: tuple[float, ...]
    signed: bool = False

    def __post_init__(self):
        if len(self.support) != len(self.weights):
            raise ValueError("support and weights must have equal length")
        total = math.fsum(self.weights)
        if abs(total - 1.0) > PROB_TOL:
            raise ValueError(f"weights sum to {total!r}, not 1 within {PROB_TOL}")
        if not self.signed and any(w < 0 for w in self.weights):
            raise ValueError("negative weight in an unsigned mixing measure")

    def __len__(self) -> int:
        return len(self.support)

    def sample_index(self, rng: RngStream) -> int:
        if self.signed:
            raise ValueError("cannot sample from a signed mixing measure")
        return rng.choice(self.weights)


@dataclass(frozen=True)
class CountDistribution:
    """Law of the occurrence-count vector (one count per symbol)."""

    n: int
    m: int
    probs: dict[tuple[int, ...], float] = field(compare=False)

    def binary_law(self) -> np.ndarray:
        """Law of the number of ones, for a binary alphabet."""
        if self.m != 2:
            raise ValueError("binary_law requires alphabet size 2")
        law = np.zeros(self.n + 1)
        for counts, p in self.probs.items():
            law[counts[1]] += p
        return law


# -- operations ----------------------------------------------------------


def tv_distance(p: SequenceDistribution, q: SequenceDistribution) -> float:
    """Total variation distance Sum_z |P(z) - Q(z)|, in [0, 2].

    For discrete laws this equals twice the supremum of |P(A) - Q(A)| over
    events A, which is the normalization used throughout this library.
    """
    if (p.m, p.n) != (q.m, q.n):
        raise ValueError(f"shape mismatch: ({p.m},{p.n}) vs ({q.m},{q.n})")
    return float(np.abs(p.probs - q.probs).sum())


def worst_transposition(p: SequenceDistribution) -> tuple[tuple[int, int], float]:
    """The adjacent transposition that violates exchangeability the most."""
    worst = ((0, 1), 0.0)
    table = p.table()
    for k in range(p.n - 1):
        gap = float(np.abs(table - np.swapaxes(table, k, k + 1)).max())
        if gap > worst[1]:
            worst = ((k, k + 1), gap)
    return worst


def is_exchangeable(p: SequenceDistribution, tol: float = PROB_TOL) -> bool:
    """True iff the law is invariant under adjacent transpositions.

    Adjacent transpositions generate the symmetric group, so invariance
    under them is invariance under every permutation.
    """
    return worst_transposition(p)[1] <= tol


def require_exchangeable(p: SequenceDistribution, tol: float = PROB_TOL) -> None:
    transposition, violation = worst_transposition(p)
    if violation > tol:
        raise NotExchangeableError(transposition, violation)


def hypergeom_pmf(N: int, K: int, n: int, k: int) -> float:
    """Probability of k marked among n draws without replacement from
    N balls with K marked: C(K,k) C(N-K,n-k) / C(N,n)."""
    if not 0 <= K <= N:
        raise ValueError(f"need 0 <= K <= N, got K={K}, N={N}")
    if not 0 <= n <= N:
        raise ValueError(f"need 0 <= n <= N, got n={n}, N={N}")
    if k < 0 or k > n or k > K or n - k > N - K:
        return 0.0
    return float(Fraction(math.comb(K, k) * math.comb(N - K, n - k), math.comb(N, n)))


def binomial_mixture_pattern_prob(mu: MixingMeasure, n: int, s: int) -> float:
    """Probability of one fixed binary pattern with s ones under a mixture
    of Bernoulli product laws: Sum_j w_j p_j^s (1-p_j)^(n-s)."""
    if not 0 <= s <= n:
        raise ValueError(f"need 0 <= s <= n, got s={s}, n={n}")
    total = 0.0
    for p, w in zip(mu.support, mu.weights):
        p = float(p)
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"support point {p!r} outside [0, 1]")
        total += w * p**s * (1.0 - p) ** (n - s)
    return total


def iid_mix_distribution(mu: MixingMeasure, n: int) -> SequenceDistribution:
    """Mixture of product laws: P(z) = Sum_j w_j Prod_i pi_j(z_i).

    Each atom of ``mu`` is a probability vector over the alphabet.  The
    result is always exchangeable.
    """
    if mu.signed:
        raise ValueError("iid mixture requires a non-signed mixing measure")
    components = []
    for pi in mu.support:
        vec = np.asarray(pi, dtype=np.float64)
        if vec.ndim != 1 or vec.min(initial=0.0) < 0 or abs(vec.sum() - 1.0) > PROB_TOL:
            raise ValueError(f"support atom {pi!r} is not a probability vector")
        components.append(vec)
    if not components:
        raise ValueError("empty mixing measure")
    m = len(components[0])
    if any(len(v) != m for v in components):
        raise ValueError("component distributions disagree on alphabet size")
    table = np.zeros(m**n)
    for w, vec in zip(mu.weights, components):
        prod = np.ones(1)
        for _ in range(n):
            prod = np.kron(prod, vec)
        table += w * prod
    return SequenceDistribution(m, n, table)


def condition(p: SequenceDistribution, predicate) -> SequenceDistribution:
    """Renormalized restriction of the law to patterns where predicate holds.

    Raises if the condition has zero probability, mirroring the positive-
    probability hypothesis conditioning always needs.
    """
    mask = np.fromiter(
        (bool(predicate(z)) for z in p.patterns()), dtype=bool, count=len(p.probs)
    )
    mass = float(p.probs[mask].sum())
    if mass <= 0.0:
        raise ValueError("conditioning event has zero probability (need Pr > 0)")
    table = np.where(mask, p.probs, 0.0) / mass
    return SequenceDistribution(p.m, p.n, table)


def marginal(p: SequenceDistribution, indices) -> SequenceDistribution:
    """Exact joint law of the selected coordinates, in the given order.

    Coordinate indices are 0-based.
    """
    indices = list(indices)
    if len(set(indices)) != len(indices):
        raise ValueError("indices must be distinct")
    if any(not 0 <= i < p.n for i in indices):
        raise ValueError(f"indices must lie in [0, {p.n})")
    k = len(indices)
    table = np.moveaxis(p.table(), indices, range(k))
    if p.n > k:
        table = table.sum(axis=tuple(range(k, p.n)))
    return SequenceDistribution(p.m, k, table.reshape(-1))


def count_distribution(p: SequenceDistribution) -> CountDistribution:
    """Law of the occurrence-count vector (F(a, X))_a under P."""
    probs: dict[tuple[int, ...], float] = {}
    for idx in np.flatnonzero(p.probs):
        counts = [0] * p.m
        for sym in p.pattern(int(idx)):
            counts[sym] += 1
        key = tuple(counts)
        probs[key] = probs.get(key, 0.0) + float(p.probs[idx])
    return CountDistribution(n=p.n, m=p.m, probs=probs)


def random_distribution(m: int, n: int, rng: RngStream) -> SequenceDistribution:
    """A random pmf over S^n: independent uniforms, normalized."""
    raw = np.array(rng.uniforms(m**n))
    return SequenceDistribution(m, n, raw / raw.sum())
