"""Continuous-time classical walk and its column birth-death reduction.

Probability vectors are plain float arrays.  Evolution solves
``dp/dt = -M p`` through the spectral decomposition of the symmetric ``M``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .graph import GeneratorMatrix, Graph, GluedTreesLayout, generator_matrix
from .spectral import SpectralDecomposition

__all__ = [
    "ColumnChain",
    "check_distribution",
    "evolve_classical",
    "classical_limiting_distribution",
    "spectral_gap",
    "column_chain",
    "glued_trees_column_chain",
    "embedded_jump_chain_distribution",
    "jump_chain_curve",
    "hitting_probability_curve",
    "column_occupation",
]

NEGATIVE_TOL = 1e-12
SUM_TOL = 1e-10


def check_distribution(p, dimension: int | None = None) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1:
        raise ValueError("probability vector must be one-dimensional")
    if dimension is not None and len(p) != dimension:
        raise ValueError(f"probability vector has length {len(p)}, expected {dimension}")
    if not np.all(np.isfinite(p)) or p.min(initial=0.0) < -NEGATIVE_TOL:
        raise ValueError("probability vector has negative or non-finite entries")
    if abs(p.sum() - 1.0) > SUM_TOL:
        raise ValueError(f"probability vector sums to {p.sum()!r}, not 1")
    return p


def _spectrum(m) -> SpectralDecomposition:
    if isinstance(m, SpectralDecomposition):
        return m
    return SpectralDecomposition.from_matrix(m)


def evolve_classical(m, p0, t):
    """Distribution ``exp(-M t) p0`` at time ``t`` (scalar or 1-D array).

    ``m`` is a ``GeneratorMatrix``, a dense symmetric array, or a
    precomputed ``SpectralDecomposition`` of one.
    """
    spec = _spectrum(m)
    p0 = check_distribution(p0, spec.dimension)
    ts = np.asarray(t, dtype=float)
    if np.any(ts < 0) or not np.all(np.isfinite(ts)):
        raise ValueError("classical evolution needs finite t >= 0")
    return spec.relax(p0, ts)


def classical_limiting_distribution(g: Graph) -> np.ndarray:
    """Uniform distribution, the zero mode of ``M`` on a connected graph."""
    if not g.is_connected():
        raise ValueError("graph is disconnected; the limit depends on the start vertex")
    return np.full(g.vertex_count, 1.0 / g.vertex_count)


def spectral_gap(m) -> float:
    """Smallest nonzero eigenvalue of a generator of a connected graph."""
    w = _spectrum(m).eigenvalues
    if len(w) < 2:
        raise ValueError("a single vertex has no spectral gap")
    return float(w[1])


@dataclass(frozen=True, eq=False)
class ColumnChain:
    """Birth-death chain on columns ``0..2n``.

    ``forward[j]`` is the total rate from column ``j`` to ``j+1`` per unit of
    probability in column ``j``; ``backward[j]`` the rate to ``j-1``.
    """

    n: int
    forward: np.ndarray
    backward: np.ndarray
    gamma: float = 1.0

    @property
    def state_count(self) -> int:
        return len(self.forward)

    @property
    def target(self) -> int:
        return self.state_count - 1

    @property
    def exit_rates(self) -> np.ndarray:
        return self.forward + self.backward

    def generator(self) -> np.ndarray:
        """Lumped generator ``L`` with ``dP/dt = -L P``."""
        lm = np.diag(self.exit_rates)
        idx = np.arange(self.state_count - 1)
        lm[idx + 1, idx] = -self.forward[:-1]
        lm[idx, idx + 1] = -self.backward[1:]
        return lm

    def transition_matrix(self) -> np.ndarray:
        """Column-stochastic one-step matrix of the embedded jump chain."""
        out = self.exit_rates
        if np.any(out <= 0):
            raise ValueError("jump chain undefined: a state has no exits")
        pm = np.zeros((self.state_count, self.state_count))
        idx = np.arange(self.state_count - 1)
        pm[idx + 1, idx] = self.forward[:-1] / out[:-1]
        pm[idx, idx + 1] = self.backward[1:] / out[1:]
        return pm

    @cached_property
    def stationary(self) -> np.ndarray:
        """Detailed-balance solution: ``pi[j+1]/pi[j] = forward[j]/backward[j+1]``."""
        log_ratio = np.log(self.forward[:-1]) - np.log(self.backward[1:])
        logpi = np.concatenate([[0.0], np.cumsum(log_ratio)])
        pi = np.exp(logpi - logpi.max())
        return pi / pi.sum()

    @cached_property
    def symmetric_spectrum(self) -> SpectralDecomposition:
        # Pi^{-1/2} L Pi^{1/2} is symmetric tridiagonal.  For G_n it coincides
        # with the reduced quantum Hamiltonian on the column line.
        off = -np.sqrt(self.forward[:-1] * self.backward[1:])
        return SpectralDecomposition.from_tridiagonal(self.exit_rates, off)


def column_chain(layout: GluedTreesLayout, gamma: float = 1.0) -> ColumnChain:
    """Aggregate the walk on G_n over columns.

    Rates are read off the graph; every vertex of a column must have the
    same number of edges into each neighbouring column, otherwise the walk
    is not lumpable and this raises.
    """
    m = generator_matrix(layout.graph, gamma)
    col = layout.column_of
    e = layout.graph.edge_array
    k = layout.column_count
    v = layout.graph.vertex_count
    up = np.zeros(v, dtype=np.int64)
    down = np.zeros(v, dtype=np.int64)
    for a, b in ((e[:, 0], e[:, 1]), (e[:, 1], e[:, 0])):
        step = col[b] - col[a]
        if np.any(np.abs(step) != 1):
            raise ValueError("an edge does not join adjacent columns")
        np.add.at(up, a[step == 1], 1)
        np.add.at(down, a[step == -1], 1)
    forward = np.zeros(k)
    backward = np.zeros(k)
    for j, members in enumerate(layout.columns()):
        for counts, rates in ((up, forward), (down, backward)):
            vals = np.unique(counts[members])
            if len(vals) != 1:
                raise ValueError(f"column {j} is not lumpable")
            rates[j] = vals[0] * m.gamma
    return ColumnChain(n=layout.n, forward=forward, backward=backward, gamma=m.gamma)


def glued_trees_column_chain(n: int, gamma: float = 1.0) -> ColumnChain:
    """Column chain of G_n from its known rates, without building the graph."""
    if n < 1:
        raise ValueError("depth must be >= 1")
    forward = np.array([2.0] * n + [1.0] * n + [0.0]) * gamma
    backward = np.array([0.0] + [1.0] * n + [2.0] * n) * gamma
    return ColumnChain(n=n, forward=forward, backward=backward, gamma=float(gamma))


def embedded_jump_chain_distribution(chain: ColumnChain, start: int, steps: int) -> np.ndarray:
    """Exact distribution over columns after ``steps`` jumps from ``start``."""
    if steps < 0:
        raise ValueError("steps must be >= 0")
    if not 0 <= start < chain.state_count:
        raise ValueError(f"start column {start} out of range")
    pm = chain.transition_matrix()
    p = np.zeros(chain.state_count)
    p[start] = 1.0
    for _ in range(steps):
        p = pm @ p
    return p


def jump_chain_curve(chain: ColumnChain, start: int = 0, steps: int = 10_000,
                     target: int | None = None) -> np.ndarray:
    """``P_k(target)`` for ``k = 0..steps``; target defaults to column 2n."""
    if steps < 0:
        raise ValueError("steps must be >= 0")
    if not 0 <= start < chain.state_count:
        raise ValueError(f"start column {start} out of range")
    target = chain.target if target is None else target
    pm = chain.transition_matrix()
    p = np.zeros(chain.state_count)
    p[start] = 1.0
    out = np.empty(steps + 1)
    out[0] = p[target]
    for k in range(1, steps + 1):
        p = pm @ p
        out[k] = p[target]
    return out


def column_occupation(chain: ColumnChain, t_grid, start: int = 0) -> np.ndarray:
    """Continuous-time column distribution, one row per time."""
    ts = np.atleast_1d(np.asarray(t_grid, dtype=float))
    if np.any(ts < 0) or not np.all(np.isfinite(ts)):
        raise ValueError("times must be finite and >= 0")
    sqrt_pi = np.sqrt(chain.stationary)
    p0 = np.zeros(chain.state_count)
    p0[start] = 1.0
    out = chain.symmetric_spectrum.relax(p0 / sqrt_pi, ts) * sqrt_pi
    return out


def hitting_probability_curve(chain: ColumnChain, t_grid, start: int = 0) -> np.ndarray:
    """Probability of occupying column 2n at each time in ``t_grid``."""
    ts = np.asarray(t_grid, dtype=float)
    if ts.ndim != 1:
        raise ValueError("t_grid must be one-dimensional")
    if np.any(np.diff(ts) < 0):
        raise ValueError("t_grid must be ascending")
    return column_occupation(chain, ts, start)[:, chain.target]
