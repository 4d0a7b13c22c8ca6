from __future__ import annotations

import itertools
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from exchlab.perm import (
    Permutation,
    permutation_uniformity_test,
    sorting_permutation,
    swallow_decompose,
    uniform_permutation,
)
from exchlab.rng import RngStream

from .oracles import chi_square_threshold, chi_square_uniform_stat

perms = st.integers(min_value=0, max_value=6).flatmap(
    lambda n: st.permutations(list(range(n))).map(lambda w: Permutation(tuple(w)))
)


def _perm_triples():
    return st.integers(min_value=0, max_value=6).flatmap(
        lambda n: st.tuples(
            *(
                st.permutations(list(range(n))).map(lambda w: Permutation(tuple(w)))
                for _ in range(3)
            )
        )
    )


def test_word_validation():
    with pytest.raises(ValueError):
        Permutation((0, 0, 1))
    with pytest.raises(ValueError):
        Permutation((0, 3, 1))
    assert Permutation(()).n == 0


def test_compose_hand_example():
    # 1-based words [2,3,1] o [2,1,3] = [3,2,1]
    alpha = Permutation((1, 2, 0))
    beta = Permutation((1, 0, 2))
    assert (alpha * beta).mapping == (2, 1, 0)


def test_compose_identity_and_inverse_laws():
    sigma = Permutation((2, 0, 3, 1))
    ident = Permutation.identity(4)
    assert (ident * sigma).mapping == sigma.mapping
    assert (sigma.inverse() * sigma).mapping == ident.mapping
    assert (sigma * sigma.inverse()).mapping == ident.mapping


def test_compose_size_mismatch():
    with pytest.raises(ValueError):
        Permutation((0, 1)) * Permutation((0,))


def test_invert_hand_example():
    # 1-based invert([2,3,1]) = [3,1,2]
    assert Permutation((1, 2, 0)).inverse().mapping == (2, 0, 1)
    assert Permutation.identity(5).inverse().mapping == (0, 1, 2, 3, 4)


@given(perms)
def test_invert_is_involution(sigma):
    assert sigma.inverse().inverse().mapping == sigma.mapping


@given(_perm_triples())
def test_compose_is_associative(triple):
    a, b, c = triple
    assert ((a * b) * c).mapping == (a * (b * c)).mapping


def test_apply_examples():
    assert Permutation.identity(3).apply(("a", "b", "c")) == ("a", "b", "c")
    assert Permutation((1, 0)).apply((0, 1)) == (1, 0)
    with pytest.raises(ValueError):
        Permutation((0, 1)).apply((1, 2, 3))


@given(perms, st.data())
def test_apply_preserves_multiset(sigma, data):
    values = data.draw(st.lists(st.integers(0, 3), min_size=sigma.n, max_size=sigma.n))
    assert Counter(sigma.apply(values)) == Counter(values)


def test_sorting_permutation_examples():
    assert sorting_permutation((0, 1, 2)).is_identity()
    assert sorting_permutation((1, 0)).mapping == (1, 0)
    # (b, a, a): the two a's keep original relative order
    gamma = sorting_permutation((1, 0, 0))
    assert gamma.mapping == (1, 2, 0)
    assert gamma.apply((1, 0, 0)) == (0, 0, 1)


@given(st.lists(st.integers(0, 3), max_size=8))
def test_sorting_permutation_sorts_stably(values):
    gamma = sorting_permutation(tuple(values))
    assert list(gamma.apply(tuple(values))) == sorted(values)
    # stability: positions of equal symbols appear in increasing order
    for sym in set(values):
        positions = [g for g in gamma.mapping if values[g] == sym]
        assert positions == sorted(positions)


def test_uniform_permutation_trivial_sizes():
    rng = RngStream(1)
    assert uniform_permutation(0, rng).mapping == ()
    assert uniform_permutation(1, rng).mapping == (0,)
    with pytest.raises(ValueError):
        uniform_permutation(-1, rng)


def test_uniform_permutation_draw_count_is_fixed():
    rng = RngStream(4)
    before = rng.counter
    uniform_permutation(5, rng)
    assert rng.counter == before + 2 * 4  # n-1 bounded draws, two words each


def test_uniform_permutation_chi_square_n3():
    rng = RngStream(20260811)
    counts = Counter(uniform_permutation(3, rng).mapping for _ in range(60000))
    stat, dof = chi_square_uniform_stat(counts, itertools.permutations(range(3)))
    assert dof == 5
    assert stat < chi_square_threshold(0.999, dof)


def test_uniform_permutation_determinism():
    a = [uniform_permutation(6, RngStream(9, 2, counter=k)).mapping for k in range(5)]
    b = [uniform_permutation(6, RngStream(9, 2, counter=k)).mapping for k in range(5)]
    assert a == b


def test_swallow_decompose_recomposes_exactly():
    rng = RngStream(77)
    for _ in range(1000):
        gamma = uniform_permutation(5, rng)
        alpha, beta = swallow_decompose(gamma, rng)
        assert (alpha * beta).mapping == gamma.mapping


def test_swallow_alpha_marginal_uniform_for_fixed_gamma():
    rng = RngStream(31337)
    gamma = Permutation.identity(4)
    samples = [swallow_decompose(gamma, rng)[0] for _ in range(100000)]
    report = permutation_uniformity_test(samples, quantile=0.999)
    assert report.dof == 23
    assert report.passed, f"statistic {report.statistic} above {report.threshold}"


def test_swallow_beta_marginal_uniform_for_data_coupled_gamma():
    # gamma is a deterministic function of a random data sequence
    rng = RngStream(424242)
    betas = []
    for _ in range(100000):
        data = tuple(int(rng.bernoulli(0.5)) for _ in range(4))
        gamma = sorting_permutation(data)
        betas.append(swallow_decompose(gamma, rng)[1])
    report = permutation_uniformity_test(betas, quantile=0.999)
    assert report.passed, f"statistic {report.statistic} above {report.threshold}"


def test_swallow_marginals_uniform_at_n5():
    # a skewed random gamma at n=5: both factors still uniform over the 120 cells
    rng = RngStream(90210)
    alphas = []
    betas = []
    for _ in range(30000):
        gamma = (
            Permutation((4, 3, 2, 1, 0)) if rng.bernoulli(0.8) else Permutation.identity(5)
        )
        alpha, beta = swallow_decompose(gamma, rng)
        alphas.append(alpha)
        betas.append(beta)
    assert permutation_uniformity_test(alphas, quantile=0.999).passed
    assert permutation_uniformity_test(betas, quantile=0.999).passed


def test_uniformity_test_rejects_constant_samples():
    samples = [Permutation.identity(3)] * 60000
    report = permutation_uniformity_test(samples)
    assert not report.passed


def test_uniformity_test_guards():
    with pytest.raises(ValueError, match="too large"):
        permutation_uniformity_test([Permutation.identity(8)] * 10)
    with pytest.raises(ValueError, match="at least"):
        permutation_uniformity_test([Permutation.identity(4)] * 10)
    with pytest.raises(ValueError):
        permutation_uniformity_test([])
    with pytest.raises(ValueError, match="common size"):
        permutation_uniformity_test([Permutation.identity(2), Permutation.identity(3)] * 100)
