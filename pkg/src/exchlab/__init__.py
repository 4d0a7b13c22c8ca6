"""Finite exchangeable-sequence decompositions and their random-graph
applications: permutation calculus, exact pmf algebra, representation
algorithms, graph models with conditioning, and a reproducible
experiment harness."""

from .decompose import (
    CountLawReport,
    Decomposition,
    SignedSolveResult,
    SingularSystemError,
    TvBoundReport,
    df_bound_check,
    elementary_component_draw,
    elementary_component_sampler,
    eta_mixing_measure,
    general_decomposition,
    is_elementary,
    mixture_of_urns_distribution,
    realizing_permutation,
    signed_mixture_solve,
    sorted_pattern,
    urn_representation,
)
from .distributions import (
    CountDistribution,
    MixingMeasure,
    NotExchangeableError,
    SequenceDistribution,
    binomial_mixture_pattern_prob,
    condition,
    count_distribution,
    hypergeom_pmf,
    iid_mix_distribution,
    is_exchangeable,
    marginal,
    random_distribution,
    tv_distance,
)
from .graphs import (
    BudgetExhaustedError,
    ConditionSpec,
    ErSpec,
    GeometricSpec,
    Graph,
    MetricsResult,
    brute_force_connectivity,
    build_geometric_from_points,
    conditional_sample,
    connected_condition,
    custom_condition,
    diameter_at_most,
    edge_connectivity,
    edge_count_at_least,
    graph_metrics,
    min_degree_at_least,
    sample_er,
    sample_geometric,
    vertex_connectivity,
)
from .perm import (
    Permutation,
    UniformityReport,
    permutation_uniformity_test,
    sorting_permutation,
    swallow_decompose,
    uniform_permutation,
)
from .rng import RngStream
from .sequences import (
    ElementaryCoupling,
    PolyaSpec,
    RceSpec,
    bernoulli_mixture_sequence,
    elementary_sequence,
    markov_equivalent,
    polya_urn,
    rce_array,
    triangle_mixture_points,
    urn_sequence,
)

__version__ = "0.1.0"
