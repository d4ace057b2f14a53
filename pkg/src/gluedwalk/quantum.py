"""Continuous-time quantum walk with Hamiltonian equal to the walk generator."""

from __future__ import annotations

import numpy as np
from scipy import linalg

from .graph import GeneratorMatrix, Graph, generator_matrix
from .spectral import SpectralDecomposition, as_dense

__all__ = [
    "NORM_TOL",
    "hamiltonian_from_graph",
    "basis_state",
    "evolve_quantum",
    "limiting_distribution_spectral",
    "time_averaged_distribution_numeric",
]

NORM_TOL = 1e-10


def hamiltonian_from_graph(g: Graph, gamma: float = 1.0) -> GeneratorMatrix:
    """Same matrix as the classical generator: nonzero off-diagonals on edges only."""
    return generator_matrix(g, gamma)


def basis_state(dimension: int, index: int) -> np.ndarray:
    if not 0 <= index < dimension:
        raise ValueError(f"vertex {index} out of range 0..{dimension - 1}")
    psi = np.zeros(dimension, dtype=complex)
    psi[index] = 1.0
    return psi


def _spectrum(h, cluster_tolerance=None) -> SpectralDecomposition:
    if isinstance(h, SpectralDecomposition):
        return h
    if hasattr(h, "spectrum") and not isinstance(h, GeneratorMatrix):
        return h.spectrum
    return SpectralDecomposition.from_matrix(h, cluster_tolerance)


def evolve_quantum(h, psi0, t):
    """``exp(-iHt) psi0``; negative ``t`` runs the walk backwards.

    ``h`` may be a ``GeneratorMatrix``, ``ReducedHamiltonian``, dense array
    or a ``SpectralDecomposition``.  An array of times returns one state per
    row.
    """
    spec = _spectrum(h)
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.shape != (spec.dimension,):
        raise ValueError(f"state has shape {psi0.shape}, expected ({spec.dimension},)")
    norm = np.vdot(psi0, psi0).real
    if abs(norm - 1.0) > NORM_TOL:
        raise ValueError(f"initial state has squared norm {norm!r}, not 1")
    return spec.propagate(psi0, t)


def limiting_distribution_spectral(h, a: int, cluster_tolerance: float | None = None) -> np.ndarray:
    """Long-time average of ``|<b|exp(-iHt)|a>|^2`` over ``b``.

    Equals ``sum_c |<b|P_c|a>|^2`` with ``P_c`` the projector onto the
    eigenvalue cluster ``c``; for a simple spectrum this is
    ``sum_r |<a|E_r>|^2 |<b|E_r>|^2``.
    """
    spec = _spectrum(h, cluster_tolerance)
    if cluster_tolerance is not None and spec.cluster_tolerance != cluster_tolerance:
        spec = SpectralDecomposition(spec.eigenvalues, spec.eigenvectors, float(cluster_tolerance))
    if not 0 <= a < spec.dimension:
        raise ValueError(f"start vertex {a} out of range")
    vecs = spec.eigenvectors
    chi = np.zeros(spec.dimension)
    for idx in spec.clusters:
        block = vecs[:, idx]
        column = block @ block[a]  # P_c |a>
        chi += column**2
    return chi


def time_averaged_distribution_numeric(h, a: int, horizon: float, sample_count: int) -> np.ndarray:
    """Trapezoid estimate of ``(1/T) int_0^T |<b|exp(-iHt)|a>|^2 dt``.

    Steps a single matrix-exponential propagator across a uniform grid, so it
    shares nothing with the eigenvector route and serves as its check.
    """
    if not horizon > 0:
        raise ValueError("horizon must be positive")
    if sample_count < 1:
        raise ValueError("sample_count must be >= 1")
    m = as_dense(h)
    psi = basis_state(m.shape[0], a)
    if sample_count == 1:
        return np.abs(psi) ** 2
    dt = horizon / (sample_count - 1)
    step = linalg.expm(-1j * dt * m)
    acc = 0.5 * np.abs(psi) ** 2
    for _ in range(sample_count - 2):
        psi = step @ psi
        acc += np.abs(psi) ** 2
    psi = step @ psi
    acc += 0.5 * np.abs(psi) ** 2
    return acc / (sample_count - 1)
