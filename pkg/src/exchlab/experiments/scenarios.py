"""Scenario registry: each scenario turns module-level guarantees into a
reproducible report.  The harness adds bookkeeping and statistics, never
new mathematics.

Randomness discipline: the stream for cell ``c`` is ``root.substream(c)``
and replica ``r`` inside it uses ``cell_stream.substream(r)``, so replicas
can run in any order (all aggregation is over integer counts) and reruns
with the same seed reproduce reports byte for byte.
"""

from __future__ import annotations

import math
import time
from collections import Counter

from ..decompose import df_bound_check, general_decomposition, is_elementary
from ..distributions import (
    SequenceDistribution,
    condition,
    is_exchangeable,
    random_distribution,
)
from ..graphs import (
    BudgetExhaustedError,
    ConditionSpec,
    ErSpec,
    GeometricSpec,
    connected_condition,
    conditional_sample,
    diameter_at_most,
    edge_connectivity,
    edge_count_at_least,
    is_connected,
    min_degree_at_least,
    sample_er,
    sample_geometric,
    vertex_connectivity,
)
from ..perm import Permutation, sorting_permutation, swallow_decompose
from ..rng import RngStream
from ..sequences import PolyaSpec, polya_urn, triangle_mixture_points, urn_sequence
from .config import ExperimentConfig
from .report import Report, ReportRow
from .stats import (
    chi_square_goodness,
    chi_square_two_sample,
    chi_square_uniform,
    mean_ci,
    proportion_ci,
)


def run_scenario(config: ExperimentConfig) -> Report:
    runner = _SCENARIOS[config.scenario]
    started = time.perf_counter()
    rows = runner(config)
    return Report(
        scenario=config.scenario,
        config_echo=config.echo(),
        rows=rows,
        elapsed_seconds=time.perf_counter() - started,
    )


# -- (a) count-law roundtrip --------------------------------------------------


def _draw_source_sequence(params: dict, rng: RngStream) -> tuple[int, ...]:
    n = params["length"]
    source = params["source"]
    if source == "polya":
        return polya_urn(PolyaSpec(tuple(params["counts"]), n), rng)
    if source == "urn_mixture":
        weights = params["eta_weights"]
        total = sum(weights)
        k = rng.choice([w / total for w in weights])
        return urn_sequence((1,) * k + (0,) * (n - k), rng)
    # triangle: all points share a triangle; the anti-diagonal indicator
    # is i.i.d. given the triangle, so the sequence is a two-component mix
    points = triangle_mixture_points(n, rng)
    return tuple(int(x + y > 1.0) for x, y in points)


def _run_definetti_roundtrip(config: ExperimentConfig) -> list[ReportRow]:
    params = config.params
    n = params["length"]
    replicas = config.replicas
    root = RngStream(config.seed)

    source_rng = root.substream(0)
    source_counts: Counter = Counter()
    eta_counts = [0] * (n + 1)
    for r in range(replicas):
        seq = _draw_source_sequence(params, source_rng.substream(r))
        source_counts[seq] += 1
        eta_counts[sum(seq)] += 1

    regen_rng = root.substream(1)
    eta_freqs = [c / replicas for c in eta_counts]
    regen_counts: Counter = Counter()
    for r in range(replicas):
        rng = regen_rng.substream(r)
        k = rng.choice(eta_freqs)
        regen_counts[urn_sequence((1,) * k + (0,) * (n - k), rng)] += 1

    rows = []
    for k in range(n + 1):
        lo, hi = proportion_ci(eta_counts[k], replicas)
        rows.append(
            ReportRow(
                cell={"K": k},
                metric="eta_weight",
                estimate=eta_counts[k] / replicas,
                ci_lo=lo,
                ci_hi=hi,
                replicas=replicas,
            )
        )
    test = chi_square_two_sample(source_counts, regen_counts, params["quantile"])
    rows.append(
        ReportRow(
            cell={"test": "pattern_two_sample"},
            metric="chi_square",
            estimate=test.statistic,
            replicas=replicas,
            passed=test.passed,
            detail=f"dof={test.dof};threshold={test.threshold!r}",
        )
    )
    return rows


# -- (b) decomposition roundtrip ------------------------------------------------


def _run_decomposition_roundtrip(config: ExperimentConfig) -> list[ReportRow]:
    params = config.params
    m, n = params["m"], params["n"]
    tol = params["reconstruction_tol"]
    root = RngStream(config.seed)
    rows = []
    for d in range(params["num_dists"]):
        cell_rng = root.substream(d)
        p = random_distribution(m, n, cell_rng.substream(0))
        decomposition = general_decomposition(p)

        back = decomposition.to_distribution()
        err = float(max(abs(a - b) for a, b in zip(back.probs, p.probs)))
        elementary = all(
            is_elementary(SequenceDistribution.from_dict(m, n, q))
            for q in decomposition.components.values()
        )
        ordered = all(
            tuple(sorted(x_star)) == x_star for x_star in decomposition.mixing.support
        )

        sample_rng = cell_rng.substream(1)
        counts: Counter = Counter()
        for r in range(config.replicas):
            counts[decomposition.sample(sample_rng.substream(r))] += 1
        expected = {z: float(pr) for z, pr in zip(p.patterns(), p.probs)}
        test = chi_square_goodness(counts, expected, config.replicas, params["quantile"])

        cell = {"dist": d}
        rows.append(
            ReportRow(
                cell=cell,
                metric="max_reconstruction_error",
                estimate=err,
                passed=err <= tol,
                detail=f"tol={tol!r}",
            )
        )
        rows.append(
            ReportRow(
                cell=cell,
                metric="components_elementary",
                estimate=1.0 if elementary else 0.0,
                passed=elementary,
            )
        )
        rows.append(
            ReportRow(
                cell=cell,
                metric="support_order_respecting",
                estimate=1.0 if ordered else 0.0,
                passed=ordered,
            )
        )
        rows.append(
            ReportRow(
                cell=cell,
                metric="sample_chi_square",
                estimate=test.statistic,
                replicas=config.replicas,
                passed=test.passed,
                detail=f"dof={test.dof};threshold={test.threshold!r}",
            )
        )
    return rows


# -- (c) bound sweep --------------------------------------------------------------


def _run_bound_sweep(config: ExperimentConfig) -> list[ReportRow]:
    rows = []
    for N in range(1, config.params["max_N"] + 1):
        for K in range(N + 1):
            for k in range(1, N + 1):
                report = df_bound_check(N, K, k)
                rows.append(
                    ReportRow(
                        cell={"N": N, "K": K, "k": k},
                        metric="tv",
                        estimate=report.tv,
                        passed=report.passed,
                        detail=(
                            f"bound={report.bound!r};"
                            f"bound_infinite={report.bound_infinite_alphabet!r}"
                        ),
                    )
                )
    return rows


# -- (d) swallow uniformity ---------------------------------------------------------


def _coupled_gamma(name: str, n: int, rng: RngStream) -> Permutation:
    if name == "identity":
        return Permutation.identity(n)
    if name == "data_sort":
        # gamma is a deterministic function of fresh random data
        data = tuple(int(rng.bernoulli(0.5)) for _ in range(n))
        return sorting_permutation(data)
    # skewed: strongly non-uniform law over two permutations
    if rng.bernoulli(0.9):
        return Permutation(tuple(range(n - 1, -1, -1)))
    return Permutation.identity(n)


def _run_swallow_uniformity(config: ExperimentConfig) -> list[ReportRow]:
    params = config.params
    n = params["n"]
    quantile = params["quantile"]
    cells = math.factorial(n)
    root = RngStream(config.seed)
    rows = []
    for index, name in enumerate(params["couplings"]):
        rng = root.substream(index)
        alpha_counts: Counter = Counter()
        beta_counts: Counter = Counter()
        exact = 0
        for r in range(config.replicas):
            rep = rng.substream(r)
            gamma = _coupled_gamma(name, n, rep)
            alpha, beta = swallow_decompose(gamma, rep)
            if (alpha * beta).mapping == gamma.mapping:
                exact += 1
            alpha_counts[alpha.mapping] += 1
            beta_counts[beta.mapping] += 1
        cell = {"coupling": name}
        for label, counts in (("alpha", alpha_counts), ("beta", beta_counts)):
            test = chi_square_uniform(counts, cells, quantile)
            rows.append(
                ReportRow(
                    cell=cell,
                    metric=f"{label}_chi_square",
                    estimate=test.statistic,
                    replicas=config.replicas,
                    passed=test.passed,
                    detail=f"dof={test.dof};threshold={test.threshold!r}",
                )
            )
        rows.append(
            ReportRow(
                cell=cell,
                metric="compose_exact_fraction",
                estimate=exact / config.replicas,
                replicas=config.replicas,
                passed=exact == config.replicas,
            )
        )
    return rows


# -- (e) inheritance ------------------------------------------------------------------


def _parse_condition(label: str, max_tries: int) -> ConditionSpec | None:
    if label == "none":
        return None
    if label == "connected":
        return connected_condition(max_tries)
    kind, _, arg = label.partition(":")
    builders = {
        "min_degree_at_least": min_degree_at_least,
        "diameter_at_most": diameter_at_most,
        "edge_count_at_least": edge_count_at_least,
    }
    if kind not in builders or not arg:
        raise ValueError(f"unknown condition {label!r}")
    return builders[kind](int(arg), max_tries)


def _run_inheritance(config: ExperimentConfig) -> list[ReportRow]:
    params = config.params
    n_grid = params["n_grid"]
    conditions = params["conditions"]
    replicas = config.replicas
    root = RngStream(config.seed)
    rows = []
    trend_points: dict[str, list[tuple[float, float, float]]] = {c: [] for c in conditions}

    for i, n in enumerate(n_grid):
        if params["model"] == "er":
            model: ErSpec | GeometricSpec = ErSpec(n, params["p"])
        else:
            radius = params["radii"][i] if "radii" in params else params["radius"]
            model = GeometricSpec(n, radius)
        for j, label in enumerate(conditions):
            cond = _parse_condition(label, params["max_tries"])
            cell_rng = root.substream(i * len(conditions) + j)
            connected_hits = 0
            equal_hits = 0
            whitney_violations = 0
            edge_sum = 0
            edge_sq_sum = 0
            tries_sum = 0
            for r in range(replicas):
                rng = cell_rng.substream(r)
                if cond is None:
                    if isinstance(model, GeometricSpec):
                        _, graph = sample_geometric(model, rng)
                    else:
                        graph = sample_er(model, rng)
                    tries_sum += 1
                else:
                    graph, tries = conditional_sample(model, cond, rng)
                    tries_sum += tries
                delta = min(graph.degrees())
                kappa = vertex_connectivity(graph)
                lam = edge_connectivity(graph)
                if not kappa <= lam <= delta:
                    whitney_violations += 1
                if kappa == lam == delta:
                    equal_hits += 1
                if is_connected(graph):
                    connected_hits += 1
                edge_sum += len(graph.edges)
                edge_sq_sum += len(graph.edges) ** 2

            cell = {"model": params["model"], "n": n, "condition": label}
            for metric, hits in (
                ("connected", connected_hits),
                ("kappa_eq_lambda_eq_delta", equal_hits),
            ):
                lo, hi = proportion_ci(hits, replicas)
                rows.append(
                    ReportRow(
                        cell=cell,
                        metric=metric,
                        estimate=hits / replicas,
                        ci_lo=lo,
                        ci_hi=hi,
                        replicas=replicas,
                    )
                )
                if metric == params["trend_metric"]:
                    trend_points[label].append((hits / replicas, lo, hi))
            deg_lo, deg_hi = mean_ci(
                2 * edge_sum / n, 4 * edge_sq_sum / (n * n), replicas
            )
            rows.append(
                ReportRow(
                    cell=cell,
                    metric="avg_degree",
                    estimate=2 * edge_sum / (n * replicas),
                    ci_lo=deg_lo,
                    ci_hi=deg_hi,
                    replicas=replicas,
                )
            )
            rows.append(
                ReportRow(
                    cell=cell,
                    metric="whitney_violations",
                    estimate=float(whitney_violations),
                    replicas=replicas,
                    passed=whitney_violations == 0,
                )
            )
            rows.append(
                ReportRow(
                    cell=cell,
                    metric="mean_tries",
                    estimate=tries_sum / replicas,
                    replicas=replicas,
                )
            )

    if params["assert_trend"]:
        for label in conditions:
            points = trend_points[label]
            # monotone non-decreasing within intervals: a later estimate may
            # not fall confidently below an earlier one
            ok = all(points[t + 1][2] >= points[t][1] for t in range(len(points) - 1))
            rows.append(
                ReportRow(
                    cell={"model": params["model"], "condition": label, "grid": "n"},
                    metric=f"trend_{params['trend_metric']}",
                    estimate=1.0 if ok else 0.0,
                    passed=ok,
                    detail="estimates=" + "|".join(repr(p[0]) for p in points),
                )
            )
    return rows


# -- (f) exchangeability of conditioning ------------------------------------------------


def _pattern_predicate(kind: str, value):
    if kind == "count_equals":
        return lambda z: sum(z) == value
    if kind == "count_at_least":
        return lambda z: sum(z) >= value
    if kind == "first_symbol_equals":
        return lambda z: z[0] == value
    if kind == "single_pattern":
        target = tuple(int(c) for c in value)
        return lambda z: z == target
    raise ValueError(f"unknown predicate kind {kind!r}")


def _run_exchangeability_of_conditioning(config: ExperimentConfig) -> list[ReportRow]:
    params = config.params
    n = params["n"]
    p = params["p"]
    base = SequenceDistribution.iid((1.0 - p, p), n)
    rows = []
    for pred in params["predicates"]:
        label = pred["kind"] + (f":{pred['value']}" if "value" in pred else "")
        test = _pattern_predicate(pred["kind"], pred.get("value"))
        mass = sum(float(pr) for z, pr in zip(base.patterns(), base.probs) if test(z))
        if mass <= 0.0:
            raise BudgetExhaustedError(label, 0)
        conditional = condition(base, test)
        exchangeable = is_exchangeable(conditional, params["tol"])
        expected = pred["expect_exchangeable"]
        cell = {"predicate": label}
        rows.append(
            ReportRow(
                cell=cell,
                metric="exchangeable",
                estimate=1.0 if exchangeable else 0.0,
                passed=exchangeable == expected,
                detail=f"expected={str(expected).lower()}",
            )
        )
        rows.append(
            ReportRow(cell=cell, metric="condition_probability", estimate=mass)
        )
    return rows


_SCENARIOS = {
    "definetti_roundtrip": _run_definetti_roundtrip,
    "decomposition_roundtrip": _run_decomposition_roundtrip,
    "bound_sweep": _run_bound_sweep,
    "swallow_uniformity": _run_swallow_uniformity,
    "inheritance": _run_inheritance,
    "exchangeability_of_conditioning": _run_exchangeability_of_conditioning,
}
