import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gluedwalk.columns import reduced_hamiltonian
from gluedwalk.graph import Graph, build_glued_trees, generator_matrix
from gluedwalk.quantum import (
    basis_state,
    evolve_quantum,
    hamiltonian_from_graph,
    limiting_distribution_spectral,
    time_averaged_distribution_numeric,
)
from gluedwalk.spectral import SpectralDecomposition

from conftest import graphs


def path(v):
    return Graph(v, tuple((i, i + 1) for i in range(v - 1)))


class TestHamiltonian:
    def test_two_vertex(self, two_vertex):
        np.testing.assert_array_equal(hamiltonian_from_graph(two_vertex, 2.0).dense(),
                                      [[2, -2], [-2, 2]])

    def test_three_path(self):
        np.testing.assert_array_equal(hamiltonian_from_graph(path(3)).dense(),
                                      [[1, -1, 0], [-1, 2, -1], [0, -1, 1]])

    @pytest.mark.parametrize("gamma", [1.0, 4.0, 0.25])
    def test_interior_is_discrete_laplacian(self, gamma):
        # H|j> = -(|j-1> - 2|j> + |j+1>) / spacing**2 with spacing = gamma**-0.5
        h = hamiltonian_from_graph(path(9), gamma).dense()
        spacing = gamma**-0.5
        for j in range(1, 8):
            col = np.zeros(9)
            col[[j - 1, j, j + 1]] = np.array([1, -2, 1]) * (-1 / spacing**2)
            np.testing.assert_allclose(h[:, j], col, atol=1e-12)

    @settings(max_examples=200, deadline=None)
    @given(graphs())
    def test_edge_locality(self, g):
        h = hamiltonian_from_graph(g).dense()
        es = g.edge_set()
        for a in range(g.vertex_count):
            for b in range(g.vertex_count):
                if a != b:
                    assert (h[a, b] != 0) == ((min(a, b), max(a, b)) in es)


class TestEvolve:
    def test_t_zero(self):
        h = hamiltonian_from_graph(build_glued_trees(2).graph)
        psi0 = basis_state(h.dimension, 3)
        np.testing.assert_array_equal(evolve_quantum(h, psi0, 0.0), psi0)

    def test_two_level_closed_form(self, two_vertex):
        # eigenvalues {0, 2}: |<2|psi(t)>|^2 = sin(t)^2
        ts = np.linspace(0, 10, 201)
        psi = evolve_quantum(hamiltonian_from_graph(two_vertex), [1, 0], ts)
        np.testing.assert_allclose(np.abs(psi[:, 1]) ** 2, np.sin(ts) ** 2, rtol=0, atol=1e-12)

    def test_time_reversal(self, rng):
        h = hamiltonian_from_graph(build_glued_trees(3).graph)
        psi0 = rng.normal(size=h.dimension) + 1j * rng.normal(size=h.dimension)
        psi0 /= np.linalg.norm(psi0)
        for t in (0.3, 7.0, 55.0):
            back = evolve_quantum(h, evolve_quantum(h, psi0, t), -t)
            np.testing.assert_allclose(back, psi0, atol=1e-9)

    def test_rejects_unnormalized(self, two_vertex):
        with pytest.raises(ValueError):
            evolve_quantum(hamiltonian_from_graph(two_vertex), [1, 1], 1.0)

    def test_rejects_dimension_mismatch(self, two_vertex):
        with pytest.raises(ValueError):
            evolve_quantum(hamiltonian_from_graph(two_vertex), [1, 0, 0], 1.0)

    @settings(max_examples=100, deadline=None)
    @given(graphs(max_vertices=10), st.integers(0, 2**32 - 1))
    def test_unitarity(self, g, seed):
        rng = np.random.default_rng(seed)
        h = hamiltonian_from_graph(g, rng.uniform(0.1, 3.0))
        psi0 = rng.normal(size=g.vertex_count) + 1j * rng.normal(size=g.vertex_count)
        psi0 /= np.linalg.norm(psi0)
        psi = evolve_quantum(h, psi0, rng.uniform(0, 100, size=8))
        np.testing.assert_allclose(np.linalg.norm(psi, axis=1), 1.0, atol=1e-10)

    def test_matches_dense_exponential(self, rng):
        from scipy.linalg import expm
        h = hamiltonian_from_graph(build_glued_trees(2).graph)
        psi0 = basis_state(h.dimension, 0)
        np.testing.assert_allclose(evolve_quantum(h, psi0, 2.7), expm(-2.7j * h.dense()) @ psi0,
                                   atol=1e-12)


class TestLimitingSpectral:
    def test_two_vertex(self, two_vertex):
        # eigenvectors (1, +-1)/sqrt2 give chi = (1/4 + 1/4, 1/4 + 1/4)
        chi = limiting_distribution_spectral(hamiltonian_from_graph(two_vertex), 0)
        np.testing.assert_allclose(chi, [0.5, 0.5], atol=1e-15)

    @pytest.mark.parametrize("n", range(1, 11))
    def test_reduced_right_root_bound(self, n):
        chi = limiting_distribution_spectral(reduced_hamiltonian(n), 0)
        assert chi[-1] >= 1 / (2 * n + 1)
        assert chi.sum() == pytest.approx(1, abs=1e-10)

    def test_reduced_matches_simple_formula(self):
        h = reduced_hamiltonian(6)
        spec = h.spectrum
        assert spec.is_simple
        v = spec.eigenvectors
        naive = (v**2 * v[0] ** 2).sum(axis=1)
        np.testing.assert_allclose(limiting_distribution_spectral(h, 0), naive, atol=1e-15)

    @pytest.mark.parametrize("n", range(1, 7))
    def test_full_space_needs_clusters(self, n):
        # the full G_n spectrum is degenerate; clustered projectors recover
        # the right-root value of the reduced line
        lay = build_glued_trees(n)
        h = hamiltonian_from_graph(lay.graph)
        assert not SpectralDecomposition.from_matrix(h).is_simple
        full = limiting_distribution_spectral(h, lay.left_root)
        red = limiting_distribution_spectral(reduced_hamiltonian(n), 0)
        assert full[lay.right_root] == pytest.approx(red[-1], abs=1e-10)
        assert full.sum() == pytest.approx(1, abs=1e-10)
        assert full.min() >= 0

    def test_simple_formula_wrong_when_degenerate(self):
        lay = build_glued_trees(1)
        h = hamiltonian_from_graph(lay.graph)
        v = SpectralDecomposition.from_matrix(h).eigenvectors
        naive = (v**2 * v[0] ** 2).sum(axis=1)
        chi = limiting_distribution_spectral(h, 0)
        assert chi[3] == pytest.approx(0.375, abs=1e-12)
        assert abs(naive[3] - chi[3]) > 0.05

    @settings(max_examples=100, deadline=None)
    @given(graphs(max_vertices=10), st.data())
    def test_normalized(self, g, data):
        a = data.draw(st.integers(0, g.vertex_count - 1))
        chi = limiting_distribution_spectral(hamiltonian_from_graph(g), a)
        assert chi.sum() == pytest.approx(1, abs=1e-10)
        assert chi.min() >= 0


class TestTimeAverage:
    def test_two_vertex_closed_form(self, two_vertex):
        # (1/T) int cos^2 = 1/2 + sin(2T)/(4T)
        h = hamiltonian_from_graph(two_vertex)
        for horizon in (3.0, 50.0, 400.0):
            est = time_averaged_distribution_numeric(h, 0, horizon, int(horizon * 200) + 1)
            exact = 0.5 + np.sin(2 * horizon) / (4 * horizon)
            np.testing.assert_allclose(est, [exact, 1 - exact], atol=1e-5)
            assert np.abs(est - 0.5).max() <= 1 / horizon

    def test_single_sample_is_point_mass(self):
        h = hamiltonian_from_graph(build_glued_trees(2).graph)
        est = time_averaged_distribution_numeric(h, 4, 1e-9, 1)
        np.testing.assert_array_equal(est, np.eye(h.dimension)[4])

    def test_reduced_g4_agrees_with_spectral(self):
        h = reduced_hamiltonian(4)
        chi = limiting_distribution_spectral(h, 0)
        est = time_averaged_distribution_numeric(h.dense(), 0, 1e4, 200_001)
        assert np.abs(est - chi).max() < 0.01

    def test_rate(self):
        # leading error ~ 1/T: doubling T roughly halves the discrepancy
        h = reduced_hamiltonian(3)
        chi = limiting_distribution_spectral(h, 0)
        errs = [np.abs(time_averaged_distribution_numeric(h.dense(), 0, T, int(T * 20) + 1) - chi).max()
                for T in (250.0, 500.0, 1000.0, 2000.0)]
        assert all(e2 < e1 for e1, e2 in zip(errs, errs[1:]))
        assert errs[-1] * 2000.0 < 3.0

    def test_rejects_bad_args(self, two_vertex):
        h = hamiltonian_from_graph(two_vertex)
        with pytest.raises(ValueError):
            time_averaged_distribution_numeric(h, 0, 0.0, 10)
        with pytest.raises(ValueError):
            time_averaged_distribution_numeric(h, 0, 1.0, 0)


@pytest.mark.parametrize("n", [2, 5, 8])
def test_spectral_decomposition_invariants(n):
    h = hamiltonian_from_graph(build_glued_trees(n).graph)
    spec = SpectralDecomposition.from_matrix(h)
    assert np.all(np.diff(spec.eigenvalues) >= 0)
    assert spec.residual(h) <= 1e-9 * spec.norm
    v = spec.eigenvectors
    np.testing.assert_allclose(v.T @ v, np.eye(h.dimension), atol=1e-10)
    for idx in spec.clusters:
        assert np.ptp(spec.eigenvalues[idx]) < spec.cluster_tolerance * len(idx)
    assert spec.eigenvalues[0] == pytest.approx(0.0, abs=1e-12)


def test_rejects_asymmetric():
    with pytest.raises(ValueError):
        SpectralDecomposition.from_matrix([[1.0, 2.0], [0.0, 1.0]])
