"""Exact column-subspace reduction of the glued-trees walk.

Starting from a root, the quantum walk on G_n never leaves the span of the
uniform column states |col j>, where it is a tridiagonal walk on a line of
2n+1 sites.  Eigensolving that line is cheap, so n in the hundreds is
routine.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .graph import GluedTreesLayout, _check_depth, build_glued_trees, generator_matrix
from .spectral import SpectralDecomposition

__all__ = [
    "ColumnBasis",
    "ReducedHamiltonian",
    "column_basis",
    "reduced_hamiltonian",
    "project_to_columns",
    "equivalence_check",
    "column_profiles",
    "leading_edge",
    "FULL_SPACE_MAX_DEPTH",
    "LEAKAGE_TOL",
]

# dense eigensolve of 3 * 2**n - 2 vertices stays under a few seconds
FULL_SPACE_MAX_DEPTH = 10
LEAKAGE_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class ColumnBasis:
    n: int
    vertex_count: int
    members: tuple[np.ndarray, ...]

    @property
    def sizes(self) -> np.ndarray:
        return np.array([len(m) for m in self.members], dtype=np.int64)

    @cached_property
    def column_of(self) -> np.ndarray:
        col = np.empty(self.vertex_count, dtype=np.int64)
        for j, m in enumerate(self.members):
            col[m] = j
        return col

    def isometry(self) -> np.ndarray:
        """``(2n+1, v)`` matrix whose rows are the normalized |col j>."""
        p = np.zeros((len(self.members), self.vertex_count))
        for j, m in enumerate(self.members):
            p[j, m] = 1.0 / np.sqrt(len(m))
        return p

    def marginals(self, p) -> np.ndarray:
        """Sum a per-vertex distribution (or stack of them) over columns."""
        p = np.asarray(p)
        return np.stack([p[..., m].sum(axis=-1) for m in self.members], axis=-1)


def column_basis(layout: GluedTreesLayout) -> ColumnBasis:
    return ColumnBasis(n=layout.n, vertex_count=layout.graph.vertex_count,
                       members=tuple(layout.columns()))


@dataclass(frozen=True, eq=False)
class ReducedHamiltonian:
    """Tridiagonal Hamiltonian on the column line, stored as two vectors."""

    n: int
    gamma: float
    diagonal: np.ndarray
    off_diagonal: np.ndarray

    @property
    def dimension(self) -> int:
        return len(self.diagonal)

    def dense(self) -> np.ndarray:
        return (np.diag(self.diagonal) + np.diag(self.off_diagonal, 1)
                + np.diag(self.off_diagonal, -1))

    @cached_property
    def spectrum(self) -> SpectralDecomposition:
        return SpectralDecomposition.from_tridiagonal(self.diagonal, self.off_diagonal)

    def evolve(self, t, start: int = 0):
        """Column amplitudes <col j|psi(t)> from |col start>."""
        psi0 = np.zeros(self.dimension, dtype=complex)
        psi0[start] = 1.0
        return self.spectrum.propagate(psi0, t)


def reduced_hamiltonian(n: int, gamma: float = 1.0) -> ReducedHamiltonian:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError(f"depth must be an integer >= 1, got {n!r}")
    n = int(n)
    gamma = float(gamma)
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    diag = np.full(2 * n + 1, 3.0 * gamma)
    diag[[0, n, 2 * n]] = 2.0 * gamma
    off = np.full(2 * n, -np.sqrt(2.0) * gamma)
    return ReducedHamiltonian(n=n, gamma=gamma, diagonal=diag, off_diagonal=off)


def project_to_columns(psi, basis: ColumnBasis) -> tuple[np.ndarray, float]:
    """Column amplitudes of ``psi`` and the weight left outside the subspace."""
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (basis.vertex_count,):
        raise ValueError(f"state has shape {psi.shape}, expected ({basis.vertex_count},)")
    amps = np.array([psi[m].sum() / np.sqrt(len(m)) for m in basis.members])
    leakage = float(np.vdot(psi, psi).real - np.sum(np.abs(amps) ** 2))
    return amps, leakage


def equivalence_check(n: int, gamma: float = 1.0, t_grid=(0.0,)) -> float:
    """Max over t and j of |full-space column marginal - reduced probability|."""
    n = _check_depth(n)
    if n > FULL_SPACE_MAX_DEPTH:
        raise ValueError(f"full-space simulation capped at n={FULL_SPACE_MAX_DEPTH}")
    ts = np.atleast_1d(np.asarray(t_grid, dtype=float))
    layout = build_glued_trees(n)
    basis = column_basis(layout)
    full = SpectralDecomposition.from_matrix(generator_matrix(layout.graph, gamma))
    psi0 = np.zeros(layout.graph.vertex_count, dtype=complex)
    psi0[layout.left_root] = 1.0
    full_probs = basis.marginals(np.abs(full.propagate(psi0, ts)) ** 2)
    reduced = np.abs(reduced_hamiltonian(n, gamma).evolve(ts)) ** 2
    return float(np.abs(full_probs - reduced).max())


def column_profiles(n: int, t_grid, gamma: float = 1.0) -> np.ndarray:
    """|<col j|psi(t)>|^2 from the left root, one row per time."""
    ts = np.atleast_1d(np.asarray(t_grid, dtype=float))
    return np.abs(reduced_hamiltonian(n, gamma).evolve(ts)) ** 2


def leading_edge(profile, threshold: float = 1e-4) -> int | None:
    """Largest index whose probability exceeds ``threshold``."""
    above = np.flatnonzero(np.asarray(profile) > threshold)
    return int(above[-1]) if len(above) else None
