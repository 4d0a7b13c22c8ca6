"""Decompositions of finite sequence laws into simple components.

Implements the urn representation of exchangeable laws, the count-law
(hypergeometric) form for binary laws, the general decomposition of an
arbitrary law into elementary components over sorted patterns, a signed
binomial-mixture solver, and the finite total-variation bound checker.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .distributions import (
    PROB_TOL,
    CountDistribution,
    MixingMeasure,
    SequenceDistribution,
    count_distribution,
    hypergeom_pmf,
    require_exchangeable,
)
from .perm import Permutation, swallow_decompose, uniform_permutation
from .rng import RngStream


class SingularSystemError(ValueError):
    """Raised when the signed-mixture linear system cannot be pivoted."""


def sorted_pattern(pattern, symbol_rank=None) -> tuple[int, ...]:
    """Non-decreasing rearrangement of a pattern under the symbol ordering."""
    if symbol_rank is None:
        return tuple(sorted(pattern))
    return tuple(sorted(pattern, key=lambda s: symbol_rank[s]))


def urn_rearrangement_prob(pattern) -> float:
    """Probability of one fixed rearrangement under the urn law of its
    multiset: product of count factorials over n factorial."""
    n = len(pattern)
    num = 1
    for c in Counter(pattern).values():
        num *= math.factorial(c)
    return num / math.factorial(n)


def mixture_of_urns_distribution(mixing: MixingMeasure, m: int) -> SequenceDistribution:
    """The law obtained by drawing a sorted pattern from ``mixing`` and
    applying a uniform random permutation to it."""
    if not mixing.support:
        raise ValueError("empty mixing measure")
    n = len(mixing.support[0])
    entries: dict[tuple[int, ...], float] = defaultdict(float)
    for x_star, w in zip(mixing.support, mixing.weights):
        share = w * urn_rearrangement_prob(x_star)
        for z in _distinct_rearrangements(x_star):
            entries[z] += share
    return SequenceDistribution.from_dict(m, n, dict(entries))


def _distinct_rearrangements(pattern):
    """All distinct rearrangements of a pattern (lexicographic order)."""
    counts = Counter(pattern)
    n = len(pattern)
    out: list[tuple[int, ...]] = []
    prefix: list[int] = []

    def rec():
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        for sym in sorted(counts):
            if counts[sym] > 0:
                counts[sym] -= 1
                prefix.append(sym)
                rec()
                prefix.pop()
                counts[sym] += 1

    rec()
    return out


# -- urn representation ----------------------------------------------------


def urn_representation(p: SequenceDistribution, tol: float = PROB_TOL) -> MixingMeasure:
    """Mixing measure over sorted patterns whose urn mixture reproduces p.

    The weight of a sorted pattern is the probability that the sequence
    sorts to it.  Requires an exchangeable input; the error names the
    worst-violating transposition otherwise.
    """
    require_exchangeable(p, tol)
    weights: dict[tuple[int, ...], float] = defaultdict(float)
    for z, pr in zip(p.patterns(), p.probs):
        if pr > 0.0:
            weights[sorted_pattern(z)] += float(pr)
    support = tuple(sorted(weights))
    return MixingMeasure(support, tuple(weights[x] for x in support))


# -- binary count form -------------------------------------------------------


@dataclass(frozen=True)
class CountLawReport:
    """Verification that prefix counts given the total follow the
    without-replacement (hypergeometric) law."""

    max_abs_error: float
    cells_checked: int
    tol: float
    passed: bool


def eta_mixing_measure(
    p: SequenceDistribution, tol: float = PROB_TOL
) -> tuple[CountDistribution, CountLawReport]:
    """Law of the total count of ones, with a full conditional check.

    For a binary exchangeable law of length N, conditioning on the total
    number of ones K makes every prefix count hypergeometric; this
    computes the count law and verifies that identity for every feasible
    (n, k, K) cell.
    """
    if p.m != 2:
        raise ValueError("count-law form requires a binary alphabet")
    require_exchangeable(p, tol)
    N = p.n
    eta = count_distribution(p)
    eta_law = eta.binary_law()

    # joint[n][k][K] = Pr(prefix count at n is k, total count is K)
    joint = np.zeros((N + 1, N + 1, N + 1))
    for z, pr in zip(p.patterns(), p.probs):
        if pr == 0.0:
            continue
        total = sum(z)
        acc = 0
        for n in range(1, N + 1):
            acc += z[n - 1]
            joint[n, acc, total] += pr

    max_err = 0.0
    cells = 0
    for K in range(N + 1):
        mass = eta_law[K]
        if mass <= 0.0:
            continue
        for n in range(1, N + 1):
            for k in range(n + 1):
                observed = joint[n, k, K] / mass
                expected = hypergeom_pmf(N, K, n, k)
                cells += 1
                max_err = max(max_err, abs(observed - expected))
    report = CountLawReport(
        max_abs_error=max_err, cells_checked=cells, tol=tol, passed=max_err <= tol
    )
    return eta, report


# -- general decomposition ---------------------------------------------------


@dataclass(frozen=True)
class Decomposition:
    """An arbitrary law as a mixture over sorted patterns of conditional
    rearrangement laws.

    ``mixing`` charges only non-decreasing patterns; each component is the
    conditional law of the sequence given its sorted pattern, hence puts
    all its mass on rearrangements of that pattern (an elementary law).
    The mixture reproduces the original law exactly.
    """

    m: int
    n: int
    mixing: MixingMeasure
    components: dict[tuple[int, ...], dict[tuple[int, ...], float]]
    symbol_rank: tuple[int, ...] | None = None

    def __post_init__(self):
        for x_star in self.mixing.support:
            if sorted_pattern(x_star, self.symbol_rank) != x_star:
                raise ValueError(f"mixing support atom {x_star} is not sorted")
            q = self.components[x_star]
            total = math.fsum(q.values())
            if abs(total - 1.0) > PROB_TOL:
                raise ValueError(f"component at {x_star} sums to {total!r}")
            for z in q:
                if sorted_pattern(z, self.symbol_rank) != x_star:
                    raise ValueError(f"component at {x_star} charges foreign pattern {z}")

    def to_distribution(self) -> SequenceDistribution:
        entries: dict[tuple[int, ...], float] = defaultdict(float)
        for x_star, w in zip(self.mixing.support, self.mixing.weights):
            for z, q in self.components[x_star].items():
                entries[z] += w * q
        return SequenceDistribution.from_dict(self.m, self.n, dict(entries))

    def sample(self, rng: RngStream) -> tuple[int, ...]:
        x_star = self.mixing.support[self.mixing.sample_index(rng)]
        return elementary_component_sampler(x_star, self.components[x_star], rng)

    def to_text(self) -> str:
        """Mixing lines ``x*<TAB>weight`` then component lines
        ``x* : pattern<TAB>prob``, patterns as digit strings."""
        if self.m > 10:
            raise ValueError("digit-string serialization requires m <= 10")

        def digits(pattern):
            return "".join(str(s) for s in pattern)

        lines = [
            f"{digits(x_star)}\t{float(w)!r}"
            for x_star, w in zip(self.mixing.support, self.mixing.weights)
        ]
        lines.append("")
        for x_star in self.mixing.support:
            for z in sorted(self.components[x_star]):
                lines.append(f"{digits(x_star)} : {digits(z)}\t{float(self.components[x_star][z])!r}")
        return "\n".join(lines) + "\n"


def general_decomposition(
    p: SequenceDistribution, symbol_rank=None
) -> Decomposition:
    """Decompose an arbitrary law into elementary components.

    No symmetry is required of the input.  The mixing weight of a sorted
    pattern is the probability of sorting to it; the component is the
    renormalized restriction of p to that pattern's rearrangement class.
    """
    rank = tuple(symbol_rank) if symbol_rank is not None else None
    weights: dict[tuple[int, ...], float] = defaultdict(float)
    groups: dict[tuple[int, ...], dict[tuple[int, ...], float]] = defaultdict(dict)
    for z, pr in zip(p.patterns(), p.probs):
        if pr > 0.0:
            x_star = sorted_pattern(z, rank)
            weights[x_star] += float(pr)
            groups[x_star][z] = float(pr)
    support = tuple(sorted(weights))
    components = {
        x_star: {z: q / weights[x_star] for z, q in groups[x_star].items()}
        for x_star in support
    }
    mixing = MixingMeasure(support, tuple(weights[x] for x in support))
    return Decomposition(m=p.m, n=p.n, mixing=mixing, components=components, symbol_rank=rank)


def realizing_permutation(x_star, z, rng: RngStream) -> Permutation:
    """A permutation gamma with ``gamma.apply(x_star) == z``, drawn
    uniformly among all permutations realizing z (ties from repeated
    symbols are matched by an independent uniform bijection per symbol)."""
    x_star, z = tuple(x_star), tuple(z)
    if Counter(x_star) != Counter(z):
        raise ValueError(f"{z} is not a rearrangement of {x_star}")
    sources: dict[int, list[int]] = defaultdict(list)
    for j, sym in enumerate(x_star):
        sources[sym].append(j)
    targets: dict[int, list[int]] = defaultdict(list)
    for i, sym in enumerate(z):
        targets[sym].append(i)
    word = [0] * len(z)
    for sym in sources:
        src, tgt = sources[sym], targets[sym]
        match = uniform_permutation(len(src), rng)
        for t, i in enumerate(tgt):
            word[i] = src[match(t)]
    return Permutation(tuple(word))


def elementary_component_draw(
    x_star, q: dict, rng: RngStream
) -> tuple[tuple[int, ...], Permutation, Permutation]:
    """One draw from a conditional rearrangement law, exposing the two
    marginally uniform permutation factors that produced it."""
    x_star = tuple(x_star)
    patterns = sorted(q)
    total = math.fsum(q.values())
    if abs(total - 1.0) > PROB_TOL or any(q[z] < 0 for z in patterns):
        raise ValueError("component law must be a probability law")
    for z in patterns:
        if Counter(z) != Counter(x_star):
            raise ValueError(f"component charges {z}, not a rearrangement of {x_star}")
    u = rng.uniform()
    acc = 0.0
    target = patterns[-1]
    for z in patterns:
        acc += q[z]
        if u < acc:
            target = z
            break
    gamma = realizing_permutation(x_star, target, rng)
    alpha, beta = swallow_decompose(gamma, rng)
    return (alpha * beta).apply(x_star), alpha, beta


def elementary_component_sampler(x_star, q: dict, rng: RngStream) -> tuple[int, ...]:
    """Sample a rearrangement of ``x_star`` with law ``q`` through the
    two-uniform-permutation construction."""
    seq, _, _ = elementary_component_draw(x_star, q, rng)
    return seq


def is_elementary(p: SequenceDistribution) -> bool:
    """True iff all support patterns share one occurrence-count vector,
    which characterizes laws expressible through coupled permutation
    pairs applied to a fixed sequence."""
    return len(count_distribution(p).probs) == 1


# -- signed binomial mixture -------------------------------------------------


@dataclass(frozen=True)
class SignedSolveResult:
    """Signed mixing weights over Bernoulli parameters reproducing a
    binary exchangeable law."""

    support: tuple[float, ...]
    weights: tuple[float, ...]
    residual: float

    @property
    def weight_sum(self) -> float:
        return math.fsum(self.weights)

    def to_text(self) -> str:
        lines = [f"{p!r}\t{w!r}" for p, w in zip(self.support, self.weights)]
        lines.append(f"# residual\t{self.residual!r}")
        return "\n".join(lines) + "\n"


def signed_mixture_solve(
    p: SequenceDistribution, support=None, tol: float = PROB_TOL
) -> SignedSolveResult:
    """Solve for signed weights w with
    ``sum_j w_j p_j^s (1-p_j)^(n-s) = Pr(fixed pattern with s ones)``.

    Every binary exchangeable law admits such a representation once
    negative weights are allowed; the default support is the equispaced
    grid j/n.  Near-duplicate support points surface as a singular
    system.
    """
    if p.m != 2:
        raise ValueError("signed mixture form requires a binary alphabet")
    if p.n < 1:
        raise ValueError("need length >= 1")
    require_exchangeable(p, tol)
    n = p.n
    if support is None:
        support = tuple(j / n for j in range(n + 1))
    else:
        support = tuple(float(x) for x in support)
    if len(support) != n + 1:
        raise ValueError(f"need {n + 1} support points, got {len(support)}")
    if any(not 0.0 <= x <= 1.0 for x in support):
        raise ValueError("support points must lie in [0, 1]")
    if len(set(support)) != len(support):
        raise SingularSystemError("duplicate support points")

    rhs = [p.prob((1,) * s + (0,) * (n - s)) for s in range(n + 1)]
    matrix = [[pj**s * (1.0 - pj) ** (n - s) for pj in support] for s in range(n + 1)]
    weights = _solve_refined(matrix, rhs)
    residual = max(
        abs(math.fsum(row[j] * weights[j] for j in range(n + 1)) - c)
        for row, c in zip(matrix, rhs)
    )
    return SignedSolveResult(support=support, weights=tuple(weights), residual=residual)


_PIVOT_THRESHOLD = 1e-8


def _gauss_solve(matrix, rhs):
    """Partial-pivot Gaussian elimination; pivots below 1e-8 of the matrix
    scale raise SingularSystemError."""
    k = len(rhs)
    a = [list(row) + [c] for row, c in zip(matrix, rhs)]
    scale = max(abs(v) for row in matrix for v in row) or 1.0
    for col in range(k):
        pivot_row = max(range(col, k), key=lambda r: abs(a[r][col]))
        if abs(a[pivot_row][col]) < _PIVOT_THRESHOLD * scale:
            raise SingularSystemError(
                "linear system is numerically singular (near-duplicate support points)"
            )
        a[col], a[pivot_row] = a[pivot_row], a[col]
        inv = 1.0 / a[col][col]
        for r in range(col + 1, k):
            f = a[r][col] * inv
            if f != 0.0:
                for c in range(col, k + 1):
                    a[r][c] -= f * a[col][c]
    x = [0.0] * k
    for r in range(k - 1, -1, -1):
        x[r] = (a[r][k] - math.fsum(a[r][c] * x[c] for c in range(r + 1, k))) / a[r][r]
    return x


def _solve_refined(matrix, rhs, rounds: int = 3):
    """Gaussian solve plus a few steps of iterative refinement with
    compensated residuals, which keeps the residual near machine level
    even when the system is ill-conditioned."""
    x = _gauss_solve(matrix, rhs)
    k = len(rhs)
    for _ in range(rounds):
        residual = [
            rhs[r] - math.fsum(matrix[r][c] * x[c] for c in range(k)) for r in range(k)
        ]
        if max(abs(v) for v in residual) < 1e-15:
            break
        delta = _gauss_solve(matrix, residual)
        x = [xi + di for xi, di in zip(x, delta)]
    return x


# -- finite approximation bound ----------------------------------------------


@dataclass(frozen=True)
class TvBoundReport:
    """Exact distance of an urn prefix to its product-law witness, against
    the finite-alphabet bound 4k/N (and the infinite-alphabet bound
    k(k-1)/N, reported for reference only)."""

    N: int
    K: int
    k: int
    tv_exact: Fraction
    bound_exact: Fraction
    tv: float
    bound: float
    bound_infinite_alphabet: float
    passed: bool


def df_bound_check(N: int, K: int, k: int) -> TvBoundReport:
    """Total variation between the first k coordinates of the urn(N, K)
    sequence and i.i.d. Bernoulli(K/N), computed exactly in rationals.

    The bound applies to the distance from the closest product mixture;
    the i.i.d. witness used here is one candidate, so its distance
    respecting the bound is a consistency check, not a tight statement.
    """
    if not 0 <= K <= N:
        raise ValueError(f"need 0 <= K <= N, got K={K}, N={N}")
    if not 1 <= k <= N:
        raise ValueError(f"need 1 <= k <= N, got k={k}, N={N}")
    prob = Fraction(K, N)
    tv = Fraction(0)
    for s in range(k + 1):
        urn = _urn_prefix_pattern_prob(N, K, k, s)
        iid = prob**s * (1 - prob) ** (k - s)
        tv += math.comb(k, s) * abs(urn - iid)
    bound = Fraction(4 * k, N)
    return TvBoundReport(
        N=N,
        K=K,
        k=k,
        tv_exact=tv,
        bound_exact=bound,
        tv=float(tv),
        bound=float(bound),
        bound_infinite_alphabet=k * (k - 1) / N,
        passed=tv <= bound,
    )


def _urn_prefix_pattern_prob(N: int, K: int, k: int, s: int) -> Fraction:
    """Probability of one fixed k-prefix with s ones when drawing all N
    balls (K ones) without replacement."""
    if s > K or k - s > N - K:
        return Fraction(0)
    num = 1
    for i in range(s):
        num *= K - i
    for j in range(k - s):
        num *= N - K - j
    den = 1
    for l in range(k):
        den *= N - l
    return Fraction(num, den)
