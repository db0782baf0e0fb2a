"""Random graph families, connectivity, and shift-operator construction.

Three undirected families parameterized the way the synthetic benchmark
uses them: Erdos-Renyi with a flat edge probability, a planted-block model
with within/between probabilities, and a random geometric graph on the
unit square.  Draws go through a caller-supplied ``numpy.random.Generator``
so experiments stay reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .exceptions import (
    ConnectivityExhausted,
    DimensionMismatch,
    InvalidConfig,
    ZeroDegreeVertex,
)
from .validation import check_symmetric

# Connected draws are rejection-sampled; give up after this many misses.
_MAX_REDRAWS = 1000


@dataclass(frozen=True)
class ErdosRenyi:
    """Every vertex pair is an edge independently with probability ``edge_prob``."""

    n_nodes: int
    edge_prob: float

    def __post_init__(self):
        if self.n_nodes < 1:
            raise InvalidConfig(f"n_nodes must be >= 1, got {self.n_nodes}")
        if not 0.0 <= self.edge_prob <= 1.0:
            raise InvalidConfig(f"edge_prob must be in [0, 1], got {self.edge_prob}")

    @property
    def n(self) -> int:
        return self.n_nodes


@dataclass(frozen=True)
class StochasticBlockModel:
    """Planted blocks: probability ``p_in`` within a block, ``p_out`` across."""

    block_sizes: tuple[int, ...]
    p_in: float
    p_out: float

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.block_sizes)
        object.__setattr__(self, "block_sizes", sizes)
        if len(sizes) < 1 or any(s < 1 for s in sizes):
            raise InvalidConfig(f"block sizes must be positive, got {sizes}")
        for name, p in (("p_in", self.p_in), ("p_out", self.p_out)):
            if not 0.0 <= p <= 1.0:
                raise InvalidConfig(f"{name} must be in [0, 1], got {p}")

    @property
    def n(self) -> int:
        return sum(self.block_sizes)


@dataclass(frozen=True)
class RandomGeometric:
    """Vertices drop uniformly on the unit square; edges join pairs within ``radius``."""

    n_nodes: int
    radius: float

    def __post_init__(self):
        if self.n_nodes < 1:
            raise InvalidConfig(f"n_nodes must be >= 1, got {self.n_nodes}")
        if self.radius < 0:
            raise InvalidConfig(f"radius must be >= 0, got {self.radius}")

    @property
    def n(self) -> int:
        return self.n_nodes


Family = ErdosRenyi | StochasticBlockModel | RandomGeometric


@dataclass(frozen=True)
class GraphSpec:
    """A family plus the draw policy (reject disconnected samples or not)."""

    family: Family
    require_connected: bool = True

    @property
    def n(self) -> int:
        return self.family.n


@dataclass(eq=False)
class Graph:
    """Undirected weighted graph held as a dense adjacency matrix.

    The adjacency must be symmetric (within tolerance), hollow, and have
    nonnegative finite weights.
    """

    adjacency: np.ndarray

    def __post_init__(self):
        adj = check_symmetric(self.adjacency, name="adjacency")
        if np.any(np.diag(adj) != 0.0):
            raise InvalidConfig("adjacency must have a zero diagonal")
        if np.any(adj < 0.0):
            raise InvalidConfig("adjacency weights must be nonnegative")
        self.adjacency = adj

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    @property
    def n_edges(self) -> int:
        return int(np.count_nonzero(np.triu(self.adjacency, 1)))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.n_edges})"


def _symmetric_bernoulli(prob, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw a hollow symmetric 0/1 matrix from upper-triangle coin flips."""
    u = rng.random((n, n))
    upper = np.triu(u < prob, k=1).astype(float)
    return upper + upper.T


def _draw_adjacency(family: Family, rng: np.random.Generator) -> np.ndarray:
    if isinstance(family, ErdosRenyi):
        return _symmetric_bernoulli(family.edge_prob, family.n, rng)
    if isinstance(family, StochasticBlockModel):
        labels = np.repeat(np.arange(len(family.block_sizes)), family.block_sizes)
        same = labels[:, None] == labels[None, :]
        prob = np.where(same, family.p_in, family.p_out)
        return _symmetric_bernoulli(prob, family.n, rng)
    if isinstance(family, RandomGeometric):
        pts = rng.random((family.n, 2))
        diff = pts[:, None, :] - pts[None, :, :]
        dist = np.sqrt((diff**2).sum(axis=-1))
        adj = (dist <= family.radius).astype(float)
        np.fill_diagonal(adj, 0.0)
        return adj
    raise InvalidConfig(f"unknown graph family: {family!r}")


def gen_graph(spec: GraphSpec, rng: np.random.Generator) -> Graph:
    """Draw one graph, rejection-sampling until connected when required."""
    for _ in range(_MAX_REDRAWS):
        graph = Graph(_draw_adjacency(spec.family, rng))
        if not spec.require_connected or is_connected(graph):
            return graph
    raise ConnectivityExhausted(
        f"no connected draw in {_MAX_REDRAWS} attempts for {spec.family!r}"
    )


def is_connected(graph: Graph) -> bool:
    """Breadth-first reachability from vertex 0 over nonzero weights."""
    adj = graph.adjacency != 0.0
    visited = np.zeros(graph.n, dtype=bool)
    visited[0] = True
    frontier = visited.copy()
    while frontier.any():
        reached = adj[frontier].any(axis=0) & ~visited
        visited |= reached
        frontier = reached
    return bool(visited.all())


def normalized_adjacency(graph: Graph) -> np.ndarray:
    """Degree-normalized operator D^{-1/2} A D^{-1/2}.

    Its spectrum lies in [-1, 1] for any connected weighted graph, which
    pins the scale of the shift operator independently of graph size.
    """
    degrees = graph.adjacency.sum(axis=1)
    zero = np.flatnonzero(degrees == 0.0)
    if zero.size:
        raise ZeroDegreeVertex(zero[0])
    inv_sqrt = 1.0 / np.sqrt(degrees)
    return graph.adjacency * np.outer(inv_sqrt, inv_sqrt)


def load_matrix_csv(path) -> np.ndarray:
    """Load a symmetric matrix from a headerless CSV of floats."""
    arr = np.loadtxt(Path(path), delimiter=",", dtype=float, ndmin=2)
    if arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"matrix in {path} is {arr.shape}, expected square")
    return check_symmetric(arr, name=f"matrix from {path}")


def save_matrix_csv(path, matrix) -> None:
    """Write a matrix as headerless CSV with full float precision."""
    arr = np.asarray(matrix, dtype=float)
    np.savetxt(Path(path), arr, delimiter=",", fmt="%.17g")
