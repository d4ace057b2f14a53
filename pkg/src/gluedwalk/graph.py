"""Graphs, the glued-trees family and the walk generator matrix.

Vertex labelling of the glued trees G_n (0-indexed, deterministic):

* the left tree in breadth-first order, so level ``l`` occupies
  ``2**l - 1 .. 2**(l+1) - 2``; level ``n`` holds the shared leaves;
* the interior of the right tree, column by column from ``n+1`` to
  ``2n-1``, each column in left-to-right order;
* the right root last.

Right-tree vertex ``i`` at distance ``l`` from the right root has children
``2i`` and ``2i+1`` at distance ``l+1``; at distance ``n`` these are the
shared leaves, so leaf ``i`` is glued to leaf ``i`` of the left tree.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components

__all__ = [
    "Graph",
    "GluedTreesLayout",
    "GeneratorMatrix",
    "GraphFormatError",
    "MAX_DEPTH",
    "glued_trees_vertex_count",
    "column_sizes",
    "build_glued_trees",
    "generator_matrix",
    "parse_graph",
    "write_graph",
    "read_graph_file",
]

# 3 * 2**n - 2 must stay below 2**63 for int64 vertex indices.
MAX_DEPTH = 60


class GraphFormatError(ValueError):
    """Malformed edge-list input; ``lineno`` is 1-based, or None."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices ``0 .. vertex_count-1``.

    Edges keep the orientation and order they were given in, which makes
    the text round trip bit-exact.  Use :meth:`edge_set` to compare graphs
    irrespective of edge order.
    """

    vertex_count: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        v = self.vertex_count
        if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < 1:
            raise ValueError(f"vertex_count must be a positive integer, got {v!r}")
        edges = tuple((int(a), int(b)) for a, b in self.edges)
        seen = set()
        for a, b in edges:
            if a == b:
                raise ValueError(f"self-loop at vertex {a}")
            if not (0 <= a < v and 0 <= b < v):
                raise ValueError(f"edge ({a}, {b}) has an endpoint outside 0..{v - 1}")
            key = (a, b) if a < b else (b, a)
            if key in seen:
                raise ValueError(f"duplicate edge ({a}, {b})")
            seen.add(key)
        object.__setattr__(self, "vertex_count", int(v))
        object.__setattr__(self, "edges", edges)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset((a, b) if a < b else (b, a) for a, b in self.edges)

    @cached_property
    def edge_array(self) -> np.ndarray:
        """Edges as an ``(m, 2)`` int64 array."""
        return np.array(self.edges, dtype=np.int64).reshape(-1, 2)

    @cached_property
    def valence(self) -> np.ndarray:
        """Degree of every vertex."""
        e = self.edge_array
        return np.bincount(e.ravel(), minlength=self.vertex_count).astype(np.int64)

    def adjacency(self) -> sparse.csr_matrix:
        e = self.edge_array
        ones = np.ones(len(e))
        a = sparse.coo_matrix((ones, (e[:, 0], e[:, 1])), shape=(self.vertex_count,) * 2)
        return (a + a.T).tocsr()

    def is_connected(self) -> bool:
        if self.vertex_count == 1:
            return True
        ncomp, _ = connected_components(self.adjacency(), directed=False)
        return ncomp == 1


@dataclass(frozen=True, eq=False)
class GluedTreesLayout:
    """The graph G_n together with the column index of each vertex."""

    n: int
    graph: Graph
    column_of: np.ndarray

    @property
    def column_count(self) -> int:
        return 2 * self.n + 1

    @property
    def left_root(self) -> int:
        return 0

    @property
    def right_root(self) -> int:
        return self.graph.vertex_count - 1

    def columns(self) -> list[np.ndarray]:
        """Vertex indices of each column, ascending."""
        order = np.argsort(self.column_of, kind="stable")
        bounds = np.searchsorted(self.column_of[order], np.arange(self.column_count + 1))
        return [order[bounds[j]:bounds[j + 1]] for j in range(self.column_count)]


def glued_trees_vertex_count(n: int) -> int:
    return 2 ** (n + 1) + 2**n - 2


def column_sizes(n: int) -> np.ndarray:
    """N_j for j = 0..2n: ``2**j`` up to the middle, mirrored after."""
    j = np.arange(2 * n + 1)
    return 2 ** np.minimum(j, 2 * n - j)


def _check_depth(n) -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise TypeError(f"depth must be an integer, got {type(n).__name__}")
    if n < 1:
        raise ValueError(f"depth must be >= 1, got {n}")
    if n > MAX_DEPTH:
        raise ValueError(f"depth {n} overflows the vertex index type (max {MAX_DEPTH})")
    return int(n)


def build_glued_trees(n: int) -> GluedTreesLayout:
    """Construct G_n: two depth-``n`` binary trees with their leaves glued."""
    n = _check_depth(n)
    v = glued_trees_vertex_count(n)
    column_of = np.empty(v, dtype=np.int64)
    edges: list[tuple[int, int]] = []

    # left tree, heap order
    for level in range(n + 1):
        column_of[2**level - 1:2 ** (level + 1) - 1] = level
    for parent in range(2**n - 1):
        edges.append((parent, 2 * parent + 1))
        edges.append((parent, 2 * parent + 2))

    left_count = 2 ** (n + 1) - 1

    def right_index(dist: int, i: int) -> int:
        # dist = distance from the right root
        if dist == 0:
            return v - 1
        if dist == n:
            return 2**n - 1 + i
        return left_count + 2**n - 2 ** (dist + 1) + i

    for dist in range(n):
        for i in range(2**dist):
            parent = right_index(dist, i)
            column_of[parent] = 2 * n - dist
            edges.append((parent, right_index(dist + 1, 2 * i)))
            edges.append((parent, right_index(dist + 1, 2 * i + 1)))

    edges = sorted((min(a, b), max(a, b)) for a, b in edges)
    return GluedTreesLayout(n=n, graph=Graph(v, tuple(edges)), column_of=column_of)


@dataclass(frozen=True, eq=False)
class GeneratorMatrix:
    """Walk generator ``M`` stored as edge list plus diagonal.

    ``M[a, b] = -gamma`` on edges, ``M[a, a] = valence(a) * gamma``.  The same
    matrix serves as the quantum Hamiltonian.
    """

    graph: Graph
    gamma: float

    @property
    def dimension(self) -> int:
        return self.graph.vertex_count

    @cached_property
    def diagonal(self) -> np.ndarray:
        return self.graph.valence * self.gamma

    def to_sparse(self) -> sparse.csr_matrix:
        return (sparse.diags(self.diagonal) - self.gamma * self.graph.adjacency()).tocsr()

    def dense(self) -> np.ndarray:
        m = np.diag(self.diagonal.astype(float))
        e = self.graph.edge_array
        m[e[:, 0], e[:, 1]] = -self.gamma
        m[e[:, 1], e[:, 0]] = -self.gamma
        return m

    def __matmul__(self, x):
        return self.to_sparse() @ x


def generator_matrix(g: Graph, gamma: float = 1.0) -> GeneratorMatrix:
    gamma = float(gamma)
    if not np.isfinite(gamma) or gamma <= 0:
        raise ValueError(f"jump rate gamma must be positive, got {gamma}")
    return GeneratorMatrix(graph=g, gamma=gamma)


def _parse_int(token: str, lineno: int) -> int:
    try:
        return int(token, 10)
    except ValueError:
        raise GraphFormatError(f"expected an integer, got {token!r}", lineno) from None


def parse_graph(text: str) -> Graph:
    """Parse the edge-list format.

    The first non-comment line holds the vertex count; every following
    non-comment line holds one edge ``a b``.  Lines starting with ``#`` and
    blank lines are skipped.
    """
    v = None
    edges: list[tuple[int, int]] = []
    seen: dict[tuple[int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if v is None:
            if len(tokens) != 1:
                raise GraphFormatError("missing header: first line must be the vertex count", lineno)
            v = _parse_int(tokens[0], lineno)
            if v < 1:
                raise GraphFormatError(f"vertex count must be positive, got {v}", lineno)
            continue
        if len(tokens) != 2:
            raise GraphFormatError(f"expected two vertex indices, got {len(tokens)} tokens", lineno)
        a, b = (_parse_int(tok, lineno) for tok in tokens)
        if a == b:
            raise GraphFormatError(f"self-loop at vertex {a}", lineno)
        for x in (a, b):
            if not 0 <= x < v:
                raise GraphFormatError(f"endpoint {x} out of range 0..{v - 1}", lineno)
        key = (min(a, b), max(a, b))
        if key in seen:
            raise GraphFormatError(f"duplicate edge {a} {b} (first on line {seen[key]})", lineno)
        seen[key] = lineno
        edges.append((a, b))
    if v is None:
        raise GraphFormatError("missing header: no vertex count found")
    return Graph(v, tuple(edges))


def write_graph(g: Graph) -> str:
    lines = [str(g.vertex_count)]
    lines.extend(f"{a} {b}" for a, b in g.edges)
    return "\n".join(lines) + "\n"


def read_graph_file(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())
