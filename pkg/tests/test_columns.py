import numpy as np
import pytest

from gluedwalk.columns import (
    LEAKAGE_TOL,
    column_basis,
    column_profiles,
    equivalence_check,
    leading_edge,
    project_to_columns,
    reduced_hamiltonian,
)
from gluedwalk.graph import build_glued_trees, generator_matrix
from gluedwalk.quantum import basis_state, evolve_quantum
from gluedwalk.spectral import SpectralDecomposition


class TestColumnBasis:
    def test_g4_sizes(self):
        basis = column_basis(build_glued_trees(4))
        np.testing.assert_array_equal(basis.sizes, [1, 2, 4, 8, 16, 8, 4, 2, 1])
        assert basis.sizes.sum() == 46

    def test_g1_sizes(self):
        np.testing.assert_array_equal(column_basis(build_glued_trees(1)).sizes, [1, 2, 1])

    @pytest.mark.parametrize("n", range(1, 9))
    def test_partition_and_isometry(self, n):
        basis = column_basis(build_glued_trees(n))
        allv = np.sort(np.concatenate(basis.members))
        np.testing.assert_array_equal(allv, np.arange(basis.vertex_count))
        p = basis.isometry()
        np.testing.assert_allclose(p @ p.T, np.eye(2 * n + 1), atol=1e-14)


class TestReducedHamiltonian:
    def test_g4(self):
        h = reduced_hamiltonian(4)
        np.testing.assert_array_equal(h.diagonal, [2, 3, 3, 3, 2, 3, 3, 3, 2])
        np.testing.assert_allclose(h.off_diagonal, -np.sqrt(2), rtol=0, atol=0)

    def test_g1(self):
        h = reduced_hamiltonian(1)
        s = np.sqrt(2)
        np.testing.assert_array_equal(h.dense(), [[2, -s, 0], [-s, 2, -s], [0, -s, 2]])

    @pytest.mark.parametrize("n", range(1, 9))
    @pytest.mark.parametrize("gamma", [1.0, 0.6])
    def test_projection_of_full_hamiltonian(self, n, gamma):
        # <col j|H|col k> from the full matrix, and invariance of the span
        lay = build_glued_trees(n)
        p = column_basis(lay).isometry()
        full = generator_matrix(lay.graph, gamma).dense()
        red = reduced_hamiltonian(n, gamma).dense()
        np.testing.assert_allclose(p @ full @ p.T, red, atol=1e-13)
        np.testing.assert_allclose(full @ p.T, p.T @ red, atol=1e-13)

    @pytest.mark.parametrize("n", [1, 4, 11, 50])
    def test_reflection_symmetry(self, n):
        h = reduced_hamiltonian(n).dense()
        r = np.eye(2 * n + 1)[::-1]
        np.testing.assert_array_equal(r @ h @ r, h)
        v = reduced_hamiltonian(n).spectrum.eigenvectors
        # every eigenvector is even or odd under j <-> 2n - j
        parity = np.einsum("ij,ij->j", v, v[::-1])
        np.testing.assert_allclose(np.abs(parity), 1.0, atol=1e-10)

    def test_interior_rows_match_infinite_line(self):
        n = 6
        h = reduced_hamiltonian(n).dense()
        for j in range(1, 2 * n):
            if j == n:
                continue
            assert h[j, j] == 3.0
            assert h[j, j - 1] == h[j, j + 1] == -np.sqrt(2)

    def test_spectrum_residual(self):
        h = reduced_hamiltonian(200)
        spec = h.spectrum
        assert spec.residual(h) <= 1e-9 * spec.norm
        v = spec.eigenvectors
        np.testing.assert_allclose(v.T @ v, np.eye(h.dimension), atol=1e-10)
        assert spec.is_simple

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            reduced_hamiltonian(0)
        with pytest.raises(ValueError):
            reduced_hamiltonian(3, 0.0)


class TestProjection:
    def test_left_root(self):
        basis = column_basis(build_glued_trees(3))
        amps, leak = project_to_columns(basis_state(basis.vertex_count, 0), basis)
        np.testing.assert_allclose(amps, np.eye(7)[0])
        assert leak == 0.0

    @pytest.mark.parametrize("n", range(1, 8))
    def test_evolved_state_stays_in_subspace(self, n):
        lay = build_glued_trees(n)
        basis = column_basis(lay)
        h = generator_matrix(lay.graph)
        psi0 = basis_state(h.dimension, lay.left_root)
        for psi in evolve_quantum(h, psi0, np.linspace(0, 30, 13)):
            _, leak = project_to_columns(psi, basis)
            assert abs(leak) <= LEAKAGE_TOL

    def test_nonuniform_phases_leak(self):
        basis = column_basis(build_glued_trees(3))
        psi = np.zeros(basis.vertex_count, dtype=complex)
        col2 = basis.members[2]
        psi[col2] = np.exp(2j * np.pi * np.arange(len(col2)) / len(col2)) / np.sqrt(len(col2))
        amps, leak = project_to_columns(psi, basis)
        assert leak > 0.5
        assert np.abs(amps).max() < 1e-12

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            project_to_columns(np.ones(3), column_basis(build_glued_trees(2)))


class TestEquivalence:
    def test_n2(self):
        assert equivalence_check(2, 1.0, np.arange(1, 11)) <= 1e-8

    def test_n1(self):
        assert equivalence_check(1, 1.0, np.arange(0, 11)) <= 1e-10

    def test_t_zero(self):
        assert equivalence_check(3, 1.0, [0.0]) == 0.0

    def test_full_space_cap(self):
        with pytest.raises(ValueError):
            equivalence_check(11, 1.0, [1.0])


class TestProfiles:
    def test_t_zero_point_mass(self):
        prof = column_profiles(500, [0.0])[0]
        np.testing.assert_array_equal(prof, np.eye(1001)[0])
        assert leading_edge(prof) == 0

    def test_normalized(self):
        prof = column_profiles(500, [100.0, 250.0, 400.0])
        np.testing.assert_allclose(prof.sum(axis=1), 1.0, atol=1e-10)

    def test_leading_edge(self):
        assert leading_edge([0.5, 0.2, 1e-3, 1e-5, 0.0], 1e-4) == 2
        assert leading_edge([0.0, 0.0], 1e-4) is None
