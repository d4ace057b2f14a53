"""Eigendecomposition of real symmetric generators and propagation with it."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import linalg

__all__ = ["SpectralDecomposition", "as_dense", "DEFAULT_CLUSTER_RTOL"]

DEFAULT_CLUSTER_RTOL = 1e-8


def as_dense(h) -> np.ndarray:
    """Dense float view of a matrix-like (``GeneratorMatrix``, sparse, array)."""
    if hasattr(h, "dense"):
        return h.dense()
    if hasattr(h, "toarray"):
        return h.toarray()
    return np.asarray(h, dtype=float)


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenvalues (ascending) and orthonormal eigenvectors (as columns).

    Eigenvalues closer than ``cluster_tolerance`` to their neighbour are
    grouped into one cluster; projectors onto clusters are what the
    time-averaged distribution needs when the spectrum is degenerate.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    cluster_tolerance: float

    @classmethod
    def from_matrix(cls, h, cluster_tolerance: float | None = None) -> "SpectralDecomposition":
        m = as_dense(h)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {m.shape}")
        scale = max(np.abs(m).max(initial=0.0), 1.0)
        if not np.allclose(m, m.T, rtol=0, atol=1e-12 * scale):
            raise ValueError("matrix is not symmetric")
        w, v = np.linalg.eigh(m)
        return cls._build(w, v, cluster_tolerance)

    @classmethod
    def from_tridiagonal(cls, diagonal, off_diagonal,
                         cluster_tolerance: float | None = None) -> "SpectralDecomposition":
        w, v = linalg.eigh_tridiagonal(np.asarray(diagonal, float), np.asarray(off_diagonal, float))
        return cls._build(w, v, cluster_tolerance)

    @classmethod
    def _build(cls, w, v, cluster_tolerance):
        if cluster_tolerance is None:
            norm = float(np.abs(w).max(initial=0.0))
            cluster_tolerance = DEFAULT_CLUSTER_RTOL * (norm if norm > 0 else 1.0)
        if cluster_tolerance < 0:
            raise ValueError("cluster_tolerance must be nonnegative")
        return cls(eigenvalues=w, eigenvectors=v, cluster_tolerance=float(cluster_tolerance))

    @property
    def dimension(self) -> int:
        return len(self.eigenvalues)

    @property
    def norm(self) -> float:
        return float(np.abs(self.eigenvalues).max(initial=0.0))

    @cached_property
    def clusters(self) -> list[np.ndarray]:
        """Index groups of near-equal eigenvalues, in ascending order."""
        gaps = np.diff(self.eigenvalues)
        cuts = np.flatnonzero(gaps >= self.cluster_tolerance) + 1
        return np.split(np.arange(self.dimension), cuts)

    @property
    def is_simple(self) -> bool:
        return len(self.clusters) == self.dimension

    def residual(self, h) -> float:
        """max_r ||H|E_r> - E_r|E_r>||."""
        m = as_dense(h)
        r = m @ self.eigenvectors - self.eigenvectors * self.eigenvalues
        return float(np.linalg.norm(r, axis=0).max(initial=0.0))

    def _apply(self, phases: np.ndarray, state: np.ndarray, ts: np.ndarray) -> np.ndarray:
        coeffs = self.eigenvectors.T @ state
        # phases: (k, dim) -> result (k, dim)
        out = (phases * coeffs) @ self.eigenvectors.T
        # identity at t = 0 exactly, free of eigenvector round-off
        out[ts == 0] = state
        return out

    def propagate(self, state, t):
        """``exp(-iHt) state``; an array of times gives one row per time."""
        state = np.asarray(state, dtype=complex)
        self._check_dim(state)
        ts = np.asarray(t, dtype=float)
        ts1 = np.atleast_1d(ts)
        out = self._apply(np.exp(-1j * np.outer(ts1, self.eigenvalues)), state, ts1)
        return out[0] if ts.ndim == 0 else out

    def relax(self, state, t):
        """``exp(-Ht) state`` for the classical semigroup."""
        state = np.asarray(state, dtype=float)
        self._check_dim(state)
        ts = np.asarray(t, dtype=float)
        ts1 = np.atleast_1d(ts)
        out = self._apply(np.exp(-np.outer(ts1, self.eigenvalues)), state, ts1)
        return out[0] if ts.ndim == 0 else out

    def _check_dim(self, state):
        if state.shape != (self.dimension,):
            raise ValueError(f"state has shape {state.shape}, expected ({self.dimension},)")
