"""Samplers for the concrete sequence families used across the library.

Sequences are plain tuples of symbols from a dense integer alphabet
{0..m-1}; symbolic labels belong at the boundary, not here.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .distributions import MixingMeasure
from .perm import Permutation, swallow_decompose, uniform_permutation
from .rng import RngStream


@dataclass(frozen=True)
class ElementaryCoupling:
    """How the two uniform permutation factors of an elementary draw relate.

    ``independent`` composes two independent uniforms (which collapses to a
    single uniform permutation); ``swallow_to`` couples them so that their
    composition follows a caller-chosen target law over permutations.
    """

    kind: str
    target: MixingMeasure | None = None

    def __post_init__(self):
        if self.kind not in ("independent", "swallow_to"):
            raise ValueError(f"unknown coupling kind {self.kind!r}")
        if self.kind == "swallow_to":
            if self.target is None:
                raise ValueError("swallow_to coupling needs a target permutation law")
            if self.target.signed:
                raise ValueError("target law must be a probability law (non-negative weights)")
            for atom in self.target.support:
                if not isinstance(atom, Permutation):
                    raise ValueError(f"target support atom {atom!r} is not a Permutation")

    @classmethod
    def independent_pair(cls) -> "ElementaryCoupling":
        return cls(kind="independent")

    @classmethod
    def swallow(cls, permutations, weights) -> "ElementaryCoupling":
        return cls(
            kind="swallow_to",
            target=MixingMeasure(tuple(permutations), tuple(weights)),
        )


@dataclass(frozen=True)
class PolyaSpec:
    """Reinforcement urn: draw a ball, put back two of the drawn color."""

    initial_counts: tuple[int, ...]
    steps: int

    def __post_init__(self):
        if any(c < 0 for c in self.initial_counts):
            raise ValueError("ball counts must be non-negative")
        if sum(self.initial_counts) < 1:
            raise ValueError("at least one ball required")
        if self.steps < 0:
            raise ValueError("steps must be non-negative")


@dataclass(frozen=True)
class RceSpec:
    """Array sampler driven by shared, per-row, per-column and per-cell
    uniform latents through a deterministic cell function."""

    f: Callable[[float, float, float, float], int]
    rows: int
    cols: int
    alphabet_size: int

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("rows and cols must be >= 1")
        if self.alphabet_size < 1:
            raise ValueError("alphabet_size must be >= 1")


def urn_sequence(x, rng: RngStream) -> tuple:
    """A uniformly random rearrangement of the fixed sequence x.

    Occurrence counts are preserved exactly; only the order is random.
    """
    sigma = uniform_permutation(len(x), rng)
    return sigma.apply(tuple(x))


def elementary_sequence(x, coupling: ElementaryCoupling, rng: RngStream) -> tuple:
    """Image of x under the composition of two coupled uniform permutations.

    With the independent coupling the composition is itself uniform and the
    output matches ``urn_sequence``.  With a swallow coupling the
    composition equals a draw from the target law while both factors stay
    marginally uniform.
    """
    x = tuple(x)
    alpha, beta = elementary_pair(len(x), coupling, rng)
    return (alpha * beta).apply(x)


def elementary_pair(
    n: int, coupling: ElementaryCoupling, rng: RngStream
) -> tuple[Permutation, Permutation]:
    """The coupled permutation factors behind ``elementary_sequence``."""
    if coupling.kind == "independent":
        return uniform_permutation(n, rng), uniform_permutation(n, rng)
    target = coupling.target
    gamma = target.support[target.sample_index(rng)]
    if gamma.n != n:
        raise ValueError(f"target permutations act on {gamma.n} items, sequence has {n}")
    return swallow_decompose(gamma, rng)


def polya_urn(spec: PolyaSpec, rng: RngStream) -> tuple[int, ...]:
    """Color sequence of the reinforcement urn.

    Ball counts stay integers and each step costs one bounded integer
    draw, so the tree probabilities are exact.
    """
    counts = list(spec.initial_counts)
    total = sum(counts)
    out = []
    for _ in range(spec.steps):
        ball = rng.below(total)
        acc = 0
        for color, c in enumerate(counts):
            acc += c
            if ball < acc:
                counts[color] += 1
                total += 1
                out.append(color)
                break
    return tuple(out)


def bernoulli_mixture_sequence(mu: MixingMeasure, n: int, rng: RngStream) -> tuple[int, ...]:
    """Draw p from mu once, then emit n independent Bernoulli(p) bits."""
    if mu.signed:
        raise ValueError("cannot sample a signed mixture; signed measures are formal only")
    for p in mu.support:
        if not 0.0 <= float(p) <= 1.0:
            raise ValueError(f"support point {p!r} outside [0, 1]")
    p = float(mu.support[mu.sample_index(rng)])
    return tuple(int(rng.bernoulli(p)) for _ in range(n))


def rce_array(spec: RceSpec, rng: RngStream) -> np.ndarray:
    """Matrix with cells f(shared, row latent, column latent, cell latent).

    All latents are independent uniforms on [0,1]; one shared value, one
    per row, one per column, one per cell.  A single row gives the
    sequence form of the construction.
    """
    shared = rng.uniform()
    row_latents = rng.uniforms(spec.rows)
    col_latents = rng.uniforms(spec.cols)
    out = np.empty((spec.rows, spec.cols), dtype=np.int64)
    for i in range(spec.rows):
        for j in range(spec.cols):
            sym = spec.f(shared, row_latents[i], col_latents[j], rng.uniform())
            if not isinstance(sym, (int, np.integer)) or not 0 <= sym < spec.alphabet_size:
                raise ValueError(
                    f"cell function returned {sym!r}, outside alphabet of size {spec.alphabet_size}"
                )
            out[i, j] = sym
    return out


def markov_equivalent(a, b) -> bool:
    """True iff the sequences start alike and have identical transition counts.

    Two sequences related this way are indistinguishable to any Markov
    chain likelihood.
    """
    a, b = tuple(a), tuple(b)
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    if not a:
        return True
    if a[0] != b[0]:
        return False
    return Counter(zip(a, a[1:])) == Counter(zip(b, b[1:]))


def triangle_mixture_points(n: int, rng: RngStream) -> list[tuple[float, float]]:
    """Pick one triangle of the unit square (split by the diagonal y = x)
    with probability 1/2, then n independent uniform points inside it.

    Points are folded across the diagonal instead of rejected, so each
    point costs exactly two uniforms; the boundary goes to the lower
    triangle.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    lower = rng.bernoulli(0.5)
    points = []
    for _ in range(n):
        x, y = rng.uniform(), rng.uniform()
        if lower:
            if y > x:
                x, y = y, x
        else:
            if y < x:
                x, y = y, x
        points.append((x, y))
    return points
