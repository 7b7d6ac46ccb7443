"""Graph-isomorphism instances and their QUBO encoding.

A mapping is a binary matrix ``x[u, i]`` (vertex ``u`` of graph 2 goes to
vertex ``i`` of graph 1). The penalty function is::

    H(x) = C1 sum_u (1 - sum_i x[u,i])^2 + C1 sum_i (1 - sum_u x[u,i])^2
         + C2 sum_{{i,j} not in E1} sum_{{u,v} in E2} (x[u,i] x[v,j] + x[u,j] x[v,i])
         + C2 sum_{{i,j} in E1} sum_{{u,v} not in E2} (x[u,i] x[v,j] + x[u,j] x[v,i])

Edge sums run over unordered pairs, each counted once, with both
orientations of the pair-to-pair assignment penalized. ``H(x) == 0`` exactly
when ``x`` is a permutation matrix that is an isomorphism. Variable
``x[u, i]`` (1-based vertices) lives at flat index ``(u-1)*n + (i-1)``.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

import numpy as np

from .model import QuboModel, _check_bits

__all__ = [
    "Graph",
    "GiInstance",
    "VertexMapping",
    "Verdict",
    "generate_gi",
    "build_gi_qubo",
    "decode_mapping",
    "verify_mapping",
    "DEFAULT_C1",
    "DEFAULT_C2",
]

# Unit penalties. Larger weights make the parallel engines oscillate
# between the empty assignment and dense garbage states at N >= 100.
DEFAULT_C1 = 1.0
DEFAULT_C2 = 1.0


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``1..n_nodes``."""

    n_nodes: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if self.n_nodes < 1:
            raise ValueError("graph needs at least one node")
        norm = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            if not (1 <= u <= self.n_nodes and 1 <= v <= self.n_nodes):
                raise ValueError(f"edge ({u}, {v}) outside 1..{self.n_nodes}")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(norm))

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n_nodes, self.n_nodes), dtype=bool)
        for u, v in self.edges:
            a[u - 1, v - 1] = a[v - 1, u - 1] = True
        return a

    def relabel(self, perm) -> "Graph":
        """Graph with vertex ``v`` renamed to ``perm[v - 1]``."""
        return Graph(self.n_nodes, frozenset((perm[u - 1], perm[v - 1]) for u, v in self.edges))


@dataclass(frozen=True)
class GiInstance:
    """Pair of graphs plus penalty weights.

    ``truth_perm[u - 1]`` is the graph-1 vertex that graph-2 vertex ``u``
    maps to, when the generator knows it.
    """

    graph1: Graph
    graph2: Graph
    c1: float = DEFAULT_C1
    c2: float = DEFAULT_C2
    truth_perm: tuple | None = None
    seed: int | None = None
    permute: bool = False

    def __post_init__(self) -> None:
        if self.graph1.n_nodes != self.graph2.n_nodes:
            raise ValueError("graphs must have the same number of nodes")
        if not (self.c1 > 0 and self.c2 > 0):
            raise ValueError("penalty weights must be positive")
        if self.truth_perm is not None:
            perm = tuple(int(p) for p in self.truth_perm)
            if sorted(perm) != list(range(1, self.n_nodes + 1)):
                raise ValueError("truth_perm is not a permutation of 1..n")
            if self.graph2.relabel(perm).edges != self.graph1.edges:
                raise ValueError("truth_perm does not map graph2 onto graph1")
            object.__setattr__(self, "truth_perm", perm)

    @property
    def n_nodes(self) -> int:
        return self.graph1.n_nodes

    @property
    def n_vars(self) -> int:
        return self.n_nodes**2

    def truth_bits(self) -> np.ndarray | None:
        """Flat bit vector of the known isomorphism, if any."""
        if self.truth_perm is None:
            return None
        n = self.n_nodes
        x = np.zeros(n * n, dtype=np.int8)
        for u, i in enumerate(self.truth_perm, start=1):
            x[(u - 1) * n + (i - 1)] = 1
        return x


@dataclass(frozen=True, eq=False)
class VertexMapping:
    assign: np.ndarray

    @property
    def n_nodes(self) -> int:
        return self.assign.shape[0]

    def is_valid(self) -> bool:
        a = self.assign
        return bool(np.all(a.sum(axis=0) == 1) and np.all(a.sum(axis=1) == 1))

    def as_permutation(self) -> tuple:
        """1-based target of each graph-2 vertex; only for valid mappings."""
        if not self.is_valid():
            raise ValueError("mapping is not a bijection")
        return tuple(int(i) + 1 for i in np.argmax(self.assign, axis=1))


class Verdict(enum.Enum):
    VALID_ISOMORPHISM = "valid-isomorphism"
    INVALID_ASSIGNMENT = "invalid-assignment"
    EDGE_VIOLATION = "edge-violation"


def generate_gi(
    n_nodes: int,
    edge_prob: float = 0.5,
    seed: int = 0,
    permute: bool = False,
    c1: float = DEFAULT_C1,
    c2: float = DEFAULT_C2,
) -> GiInstance:
    """Random isomorphic pair.

    Graph 1 is Erdos-Renyi with independent edge probability ``edge_prob``.
    Graph 2 is an exact copy, or with ``permute=True`` a uniformly random
    relabeling of it. Deterministic in ``seed``.
    """
    if n_nodes < 1:
        raise ValueError("n_nodes must be at least 1")
    if not 0.0 <= edge_prob <= 1.0:
        raise ValueError("edge_prob must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    pairs = list(itertools.combinations(range(1, n_nodes + 1), 2))
    keep = rng.random(len(pairs)) < edge_prob
    g1 = Graph(n_nodes, frozenset(p for p, k in zip(pairs, keep) if k))
    if permute:
        # sigma relabels graph1 into graph2; its inverse maps graph2 back.
        sigma = rng.permutation(n_nodes) + 1
        g2 = g1.relabel(sigma)
        inv = np.empty(n_nodes, dtype=int)
        inv[sigma - 1] = np.arange(1, n_nodes + 1)
        truth = tuple(int(v) for v in inv)
    else:
        g2 = g1
        truth = tuple(range(1, n_nodes + 1))
    return GiInstance(g1, g2, c1, c2, truth, seed=seed, permute=permute)


def build_gi_qubo(inst: GiInstance) -> QuboModel:
    """Upper-triangular QUBO of the penalty function, offset ``2*C1*n``."""
    n = inst.n_nodes
    N = n * n
    c1, c2 = float(inst.c1), float(inst.c2)
    a1 = inst.graph1.adjacency()
    a2 = inst.graph2.adjacency()
    same_u = np.eye(n, dtype=bool)[:, None, :, None]
    same_i = np.eye(n, dtype=bool)[None, :, None, :]

    # Full symmetric coefficient of x[u,i] x[v,j], axes (u, i, v, j).
    # (1 - sum x)^2 = 1 - sum x + 2 sum_{a<b} x_a x_b, once per row and column.
    pair = 2 * c1 * (same_u ^ same_i)
    mismatch = a1[None, :, None, :] != a2[:, None, :, None]
    pair = pair + c2 * (mismatch & ~same_u & ~same_i)
    Q = np.triu(pair.reshape(N, N), 1)
    Q[np.diag_indices(N)] = -2 * c1
    return QuboModel(Q, offset=2 * c1 * n)


def decode_mapping(x, n_nodes: int) -> VertexMapping:
    x = _check_bits(x)
    if x.shape[0] != n_nodes * n_nodes:
        raise ValueError(f"expected {n_nodes * n_nodes} bits, got {x.shape[0]}")
    return VertexMapping(x.reshape(n_nodes, n_nodes).astype(np.int8))


def verify_mapping(inst: GiInstance, m: VertexMapping) -> Verdict:
    if m.n_nodes != inst.n_nodes or m.assign.shape != (inst.n_nodes, inst.n_nodes):
        raise ValueError("mapping size does not match instance")
    if not m.is_valid():
        return Verdict.INVALID_ASSIGNMENT
    if inst.graph2.relabel(m.as_permutation()).edges != inst.graph1.edges:
        return Verdict.EDGE_VIOLATION
    return Verdict.VALID_ISOMORPHISM
