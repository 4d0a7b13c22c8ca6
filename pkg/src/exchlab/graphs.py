"""Random graph models on the unit square and edge-indicator space, with
exact connectivity metrics.

Graphs are simple and undirected, vertices 0..n-1, edges stored as sorted
pairs.  Connectivity (vertex and edge) is computed through unit-capacity
max-flow on small auxiliary digraphs; a brute-force search over removal
sets provides an independent oracle for small graphs.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numba import njit

from .rng import RngStream


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        seen = set()
        for u, v in self.edges:
            if not (0 <= u < v < self.n):
                raise ValueError(f"bad edge ({u}, {v}) for n={self.n}")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        normalized = sorted((min(u, v), max(u, v)) for u, v in edges)
        return cls(n, tuple(normalized))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, tuple(itertools.combinations(range(n), 2)))

    def adjacency(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def has_edge(self, u: int, v: int) -> bool:
        if u > v:
            u, v = v, u
        return (u, v) in set(self.edges)

    def edge_indicators(self) -> tuple[int, ...]:
        """Edge-indicator sequence in lexicographic pair order
        (0,1), (0,2), ..., (1,2), ...; the underlying i.i.d. sequence of
        the independent-edges model."""
        present = set(self.edges)
        return tuple(
            1 if (u, v) in present else 0 for u, v in itertools.combinations(range(self.n), 2)
        )

    # -- serialization: first line n, then one "i j" edge per line, 1-based

    def to_text(self) -> str:
        lines = [str(self.n)]
        lines.extend(f"{u + 1} {v + 1}" for u, v in sorted(self.edges))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Graph":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty graph file")
        n = int(lines[0])
        edges = []
        for ln in lines[1:]:
            parts = ln.split()
            if len(parts) != 2:
                raise ValueError(f"bad edge line {ln!r}")
            u, v = int(parts[0]) - 1, int(parts[1]) - 1
            edges.append((u, v))
        return cls.from_edges(n, edges)


@dataclass(frozen=True)
class GeometricSpec:
    """Uniform points in the unit square joined within Euclidean radius r."""

    n: int
    r: float

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one vertex")
        if self.r < 0:
            raise ValueError("radius must be non-negative")


@dataclass(frozen=True)
class ErSpec:
    """Independent edge indicators with common probability p."""

    n: int
    p: float

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one vertex")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("edge probability must lie in [0, 1]")


class BudgetExhaustedError(RuntimeError):
    """Rejection sampling ran out of tries; the condition probability is
    zero or too small for the configured budget."""

    def __init__(self, condition: str, tries: int):
        self.condition = condition
        self.tries = tries
        super().__init__(
            f"condition {condition!r} not satisfied after {tries} tries"
        )


@dataclass(frozen=True)
class ConditionSpec:
    """Acceptance predicate for conditional sampling.

    ``test`` receives the graph and the underlying sample (the point list
    for geometric graphs, the edge-indicator tuple for independent-edge
    graphs) and returns acceptance."""

    name: str
    test: Callable[[Graph, object], bool]
    max_tries: int = 1000

    def __post_init__(self):
        if self.max_tries < 1:
            raise ValueError("max_tries must be >= 1")


def connected_condition(max_tries: int = 1000) -> ConditionSpec:
    return ConditionSpec("connected", lambda g, _x: is_connected(g), max_tries)


def min_degree_at_least(d: int, max_tries: int = 1000) -> ConditionSpec:
    return ConditionSpec(
        f"min_degree_at_least:{d}",
        lambda g, _x: (min(g.degrees()) if g.n else 0) >= d,
        max_tries,
    )


def diameter_at_most(limit: int, max_tries: int = 1000) -> ConditionSpec:
    return ConditionSpec(
        f"diameter_at_most:{limit}", lambda g, _x: diameter(g) <= limit, max_tries
    )


def edge_count_at_least(count: int, max_tries: int = 1000) -> ConditionSpec:
    return ConditionSpec(
        f"edge_count_at_least:{count}", lambda g, _x: len(g.edges) >= count, max_tries
    )


def custom_condition(name: str, hook, max_tries: int = 1000) -> ConditionSpec:
    return ConditionSpec(name, hook, max_tries)


# -- generators --------------------------------------------------------------


def build_geometric_from_points(points, r: float) -> Graph:
    """Edges join point pairs at Euclidean distance <= r (closed threshold)."""
    if r < 0:
        raise ValueError("radius must be non-negative")
    pts = list(points)
    r2 = r * r
    edges = []
    for i in range(len(pts)):
        xi, yi = pts[i]
        for j in range(i + 1, len(pts)):
            dx = xi - pts[j][0]
            dy = yi - pts[j][1]
            if dx * dx + dy * dy <= r2:
                edges.append((i, j))
    return Graph(len(pts), tuple(edges))


def sample_geometric(spec: GeometricSpec, rng: RngStream) -> tuple[list, Graph]:
    """Draw n i.i.d. uniform points and the induced radius graph.

    Returns the points too, so conditions can inspect the underlying
    sequence, not just the graph.
    """
    points = [(rng.uniform(), rng.uniform()) for _ in range(spec.n)]
    return points, build_geometric_from_points(points, spec.r)


def sample_er(spec: ErSpec, rng: RngStream) -> Graph:
    """Independent Bernoulli(p) edge indicators in lexicographic pair order."""
    edges = [
        (u, v)
        for u, v in itertools.combinations(range(spec.n), 2)
        if rng.bernoulli(spec.p)
    ]
    return Graph(spec.n, tuple(edges))


def conditional_sample(
    model: GeometricSpec | ErSpec, cond: ConditionSpec, rng: RngStream
) -> tuple[Graph, int]:
    """Rejection sampling: repeat unconditional draws until the predicate
    accepts.  The accepted law is exactly the conditional law.
    """
    for tries in range(1, cond.max_tries + 1):
        if isinstance(model, GeometricSpec):
            points, graph = sample_geometric(model, rng)
            underlying: object = points
        else:
            graph = sample_er(model, rng)
            underlying = graph.edge_indicators()
        if cond.test(graph, underlying):
            return graph, tries
    raise BudgetExhaustedError(cond.name, cond.max_tries)


# -- metrics -----------------------------------------------------------------


@dataclass(frozen=True)
class MetricsResult:
    n: int
    min_degree: int
    avg_degree: float
    connected: bool
    diameter: float  # math.inf when disconnected
    kappa: int
    lambda_: int

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "min_degree": self.min_degree,
            "avg_degree": self.avg_degree,
            "connected": self.connected,
            "diameter": None if math.isinf(self.diameter) else int(self.diameter),
            "kappa": self.kappa,
            "lambda": self.lambda_,
        }


def _bfs_distances(adj: list[set[int]], source: int) -> list[int]:
    dist = [-1] * len(adj)
    dist[source] = 0
    frontier = [source]
    while frontier:
        nxt = []
        for u in frontier:
            for v in adj[u]:
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    nxt.append(v)
        frontier = nxt
    return dist


def is_connected(graph: Graph) -> bool:
    if graph.n == 0:
        return True
    return min(_bfs_distances(graph.adjacency(), 0)) >= 0


def diameter(graph: Graph) -> float:
    """Largest eccentricity; infinite when disconnected."""
    if graph.n < 1:
        raise ValueError("diameter needs at least one vertex")
    adj = graph.adjacency()
    worst = 0.0
    for v in range(graph.n):
        dist = _bfs_distances(adj, v)
        if min(dist) < 0:
            return math.inf
        worst = max(worst, max(dist))
    return worst


def graph_metrics(graph: Graph) -> MetricsResult:
    """Degree statistics, connectivity flag, exact diameter, and the two
    connectivity numbers.  Disconnected graphs report an infinite
    diameter, never a large finite stand-in."""
    if graph.n < 1:
        raise ValueError("metrics need at least one vertex")
    deg = graph.degrees()
    diam = diameter(graph)
    if graph.n == 1:
        kappa = lambda_ = 0  # single vertex: nothing to separate
    else:
        kappa, lambda_ = kappa_lambda(graph)
    result = MetricsResult(
        n=graph.n,
        min_degree=min(deg),
        avg_degree=2 * len(graph.edges) / graph.n,
        connected=not math.isinf(diam),
        diameter=diam,
        kappa=kappa,
        lambda_=lambda_,
    )
    assert result.kappa <= result.lambda_ <= result.min_degree
    return result


# -- flow-based connectivity ---------------------------------------------


@njit(cache=True)
def _max_flow(indptr, heads, caps, rev, tails, source, sink, cutoff):
    """Unit-augmentation max-flow (BFS augmenting paths), stopping at
    ``cutoff``.  Mutates ``caps`` into the residual capacities."""
    num_nodes = indptr.shape[0] - 1
    total = 0
    parent = np.empty(num_nodes, dtype=np.int64)
    queue = np.empty(num_nodes, dtype=np.int64)
    while total < cutoff:
        parent[:] = -1
        parent[source] = -2
        queue[0] = source
        qh, qt = 0, 1
        found = False
        while qh < qt and not found:
            u = queue[qh]
            qh += 1
            for a in range(indptr[u], indptr[u + 1]):
                v = heads[a]
                if caps[a] > 0 and parent[v] == -1:
                    parent[v] = a
                    if v == sink:
                        found = True
                        break
                    queue[qt] = v
                    qt += 1
        if not found:
            break
        v = sink
        while v != source:
            a = parent[v]
            caps[a] -= 1
            caps[rev[a]] += 1
            v = tails[a]
        total += 1
    return total


@njit(cache=True)
def _min_flow_over_pairs(indptr, heads, caps0, rev, tails, sources, sinks, cutoff):
    best = cutoff
    for i in range(sources.shape[0]):
        caps = caps0.copy()
        value = _max_flow(indptr, heads, caps, rev, tails, sources[i], sinks[i], best)
        if value < best:
            best = value
            if best == 0:
                break
    return best


def _build_csr(arc_tails, arc_heads, arc_caps, num_nodes):
    """CSR arc arrays; input arcs 2i and 2i+1 must be mutual reverses."""
    tails = np.asarray(arc_tails, dtype=np.int64)
    heads = np.asarray(arc_heads, dtype=np.int64)
    caps = np.asarray(arc_caps, dtype=np.int64)
    order = np.argsort(tails, kind="stable")
    pos = np.empty(len(order), dtype=np.int64)
    pos[order] = np.arange(len(order), dtype=np.int64)
    rev = np.empty(len(order), dtype=np.int64)
    even = np.arange(0, len(order), 2)
    rev[pos[even]] = pos[even + 1]
    rev[pos[even + 1]] = pos[even]
    counts = np.bincount(tails, minlength=num_nodes)
    indptr = np.concatenate(([0], np.cumsum(counts))).astype(np.int64)
    return indptr, heads[order], caps[order], rev, tails[order]


def _edge_flow_network(graph: Graph):
    # one arc pair per undirected edge; each direction is the other's reverse
    tails, heads, caps = [], [], []
    for u, v in graph.edges:
        tails.extend((u, v))
        heads.extend((v, u))
        caps.extend((1, 1))
    return _build_csr(tails, heads, caps, graph.n)


def _vertex_flow_network(graph: Graph):
    # split v into v (in) and n+v (out); the internal arc carries capacity 1
    n = graph.n
    big = n
    tails, heads, caps = [], [], []
    for v in range(n):
        tails.extend((v, n + v))
        heads.extend((n + v, v))
        caps.extend((1, 0))
    for u, v in graph.edges:
        tails.extend((n + u, v, v + n, u))
        heads.extend((v, n + u, u, v + n))
        caps.extend((big, 0, big, 0))
    return _build_csr(tails, heads, caps, 2 * n)


def edge_connectivity(graph: Graph) -> int:
    """Minimum number of edges whose removal disconnects the graph.

    Max-flow from one fixed minimum-degree vertex to every other vertex;
    the minimum over sinks is exact because a minimum edge cut separates
    the fixed vertex from something.
    """
    if graph.n < 2:
        raise ValueError("edge connectivity needs at least two vertices")
    if not graph.edges:
        return 0
    deg = graph.degrees()
    delta = min(deg)
    if delta == 0:
        return 0
    source = deg.index(delta)
    indptr, heads, caps, rev, tails = _edge_flow_network(graph)
    sinks = np.array([t for t in range(graph.n) if t != source], dtype=np.int64)
    sources = np.full(len(sinks), source, dtype=np.int64)
    # lambda <= delta, so capping every flow at delta preserves the minimum
    return int(_min_flow_over_pairs(indptr, heads, caps, rev, tails, sources, sinks, delta))


def vertex_connectivity(graph: Graph) -> int:
    """Minimum number of vertices whose removal disconnects the graph
    (n - 1 for a complete graph, which has no such set).

    Menger through vertex splitting: the flow between a non-adjacent pair
    counts internally disjoint paths.  Scanning every non-adjacent pair
    whose smaller endpoint lies among the first delta+1 vertices is
    sufficient: a minimum cut has at most delta vertices, so it misses
    one of them, and that vertex forms a scanned separated pair.
    """
    if graph.n < 2:
        raise ValueError("vertex connectivity needs at least two vertices")
    n = graph.n
    adjacent = set(graph.edges)
    delta = min(graph.degrees())
    pairs = [
        (s, t)
        for s in range(min(delta + 1, n))
        for t in range(s + 1, n)
        if (s, t) not in adjacent
    ]
    if not pairs:
        return n - 1
    indptr, heads, caps, rev, tails = _vertex_flow_network(graph)
    sources = np.array([n + s for s, _ in pairs], dtype=np.int64)
    sinks = np.array([t for _, t in pairs], dtype=np.int64)
    # kappa <= delta, so capping at delta preserves the minimum
    return int(_min_flow_over_pairs(indptr, heads, caps, rev, tails, sources, sinks, delta))


def kappa_lambda(graph: Graph) -> tuple[int, int]:
    return vertex_connectivity(graph), edge_connectivity(graph)


# -- brute-force oracle ----------------------------------------------------

MAX_BRUTE_FORCE_N = 7


def brute_force_connectivity(graph: Graph) -> tuple[int, int]:
    """Exhaustive removal search for both connectivity numbers; the
    independent oracle for the flow implementations (n <= 7)."""
    n = graph.n
    if n < 2:
        raise ValueError("connectivity needs at least two vertices")
    if n > MAX_BRUTE_FORCE_N:
        raise ValueError(f"brute force capped at n <= {MAX_BRUTE_FORCE_N}")

    def disconnected(vertices, edges) -> bool:
        vertices = list(vertices)
        if len(vertices) < 2:
            return False
        adj = {v: set() for v in vertices}
        for u, v in edges:
            if u in adj and v in adj:
                adj[u].add(v)
                adj[v].add(u)
        seen = {vertices[0]}
        frontier = [vertices[0]]
        while frontier:
            u = frontier.pop()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    frontier.append(v)
        return len(seen) < len(vertices)

    kappa = n - 1
    for size in range(n - 1):
        hit = False
        for removed in itertools.combinations(range(n), size):
            rest = [v for v in range(n) if v not in removed]
            if disconnected(rest, graph.edges):
                hit = True
                break
        if hit:
            kappa = size
            break

    lambda_ = len(graph.edges)
    vertices = list(range(n))
    for size in range(len(graph.edges) + 1):
        hit = False
        for removed in itertools.combinations(graph.edges, size):
            kept = [e for e in graph.edges if e not in removed]
            if disconnected(vertices, kept):
                hit = True
                break
        if hit:
            lambda_ = size
            break

    return kappa, lambda_
