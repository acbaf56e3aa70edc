import numpy as np
import pytest

from avgmix.errors import DimensionError, SymmetryError
from avgmix.graphs import (Graph, HamiltonianKind, VertexPartition, cartesian_product, clique_partition_graph, coarsest_equitable_partition,
                           complement, complete_graph, connected_components, cycle_graph, disjoint_union,
                           hamiltonian, path_graph, petersen_graph)
from avgmix.spectral import (SpectralDecomposition, cluster_eigenvalues, jacobi_eigh, kron_projectors, refines,
                             spectral_decomposition, sym_eigendecomposition, validate_decomposition)

A, L = HamiltonianKind.ADJACENCY, HamiltonianKind.LAPLACIAN


@pytest.mark.parametrize("method", ["lapack", "jacobi"])
def test_eigen_examples(method):
    w, _ = sym_eigendecomposition([[0, 1], [1, 0]], method=method)
    assert np.allclose(w, [-1, 1], atol=1e-12)
    w, _ = sym_eigendecomposition(hamiltonian(complete_graph(3), L), method=method)
    assert np.allclose(w, [0, 3, 3], atol=1e-12)
    # characteristic polynomial of A(P3) is t^3 - 2t
    w, _ = sym_eigendecomposition(hamiltonian(path_graph(3), A), method=method)
    assert np.allclose(w, [-np.sqrt(2), 0, np.sqrt(2)], atol=1e-12)


@pytest.mark.parametrize("method", ["lapack", "jacobi"])
def test_eigen_contract(method, rng):
    for n in (1, 2, 5, 9, 16):
        x = rng.normal(size=(n, n))
        m = x + x.T
        w, v = sym_eigendecomposition(m, method=method)
        assert np.all(np.diff(w) >= 0)
        scale = max(1.0, np.linalg.norm(m, 2))
        for k in range(n):
            assert np.linalg.norm(m @ v[:, k] - w[k] * v[:, k]) <= 1e-10 * scale
        assert np.max(np.abs(v.T @ v - np.eye(n))) <= 1e-10


def test_jacobi_agrees_with_lapack(rng):
    x = rng.normal(size=(12, 12))
    m = x + x.T
    assert np.allclose(jacobi_eigh(m)[0], np.linalg.eigvalsh(m), atol=1e-11)


def test_asymmetric_rejected():
    with pytest.raises(SymmetryError):
        sym_eigendecomposition([[0, 1], [1 + 1e-9, 0]])
    with pytest.raises(DimensionError):
        sym_eigendecomposition(np.zeros((2, 3)))


def test_cluster_examples():
    assert cluster_eigenvalues([0, 3, 3], 1e-8) == [[0], [1, 2]]
    r2 = np.sqrt(2)
    assert cluster_eigenvalues([-r2, 0, r2], 1e-8) == [[0], [1], [2]]
    assert list(map(len, cluster_eigenvalues([1.0, 1.0 + 1e-12, 2.0], 1e-8))) == [2, 1]
    # chaining: 0 ~ 0.6e-8 ~ 1.2e-8 although the ends are farther apart than the threshold
    assert cluster_eigenvalues([0, 0.6e-8, 1.2e-8], 1e-8) == [[0, 1, 2]]


def test_kn_idempotents():
    for n in range(2, 8):
        d = spectral_decomposition(complete_graph(n), A)
        assert np.allclose(d.thetas, [-1, n - 1])
        assert np.allclose(d.idempotents[1], np.ones((n, n)) / n, atol=1e-12)
        assert np.allclose(d.idempotents[0], np.eye(n) - np.ones((n, n)) / n, atol=1e-12)
        assert d.mults == (n - 1, 1)


def test_laplacian_zero_idempotent(small_graphs):
    for g in small_graphs[5]:
        d = spectral_decomposition(g, L)
        comps = connected_components(g)
        assert abs(d.thetas[0]) < 1e-10
        assert d.mults[0] == len(comps)
        want = np.zeros((g.n, g.n))
        for c in comps:
            want[np.ix_(c, c)] = 1 / len(c)
        assert np.allclose(d.idempotents[0], want, atol=1e-10)


def test_laplacian_multiplicity_of_n(small_graphs):
    for n in range(1, 7):
        for g in small_graphs[n]:
            d = spectral_decomposition(g, L)
            mult_n = sum(m for t, m in zip(d.thetas, d.mults) if abs(t - n) < 1e-8)
            assert mult_n == len(connected_components(complement(g))) - 1


def test_validate_examples():
    c5 = cycle_graph(5)
    d = spectral_decomposition(c5, A)
    assert validate_decomposition(d, hamiltonian(c5, A), 1e-8).passed

    broken = SpectralDecomposition(d.kind, d.thetas, (np.zeros_like(d.idempotents[0]),) + d.idempotents[1:], d.mults)
    rep = validate_decomposition(broken, hamiltonian(c5, A), 1e-8)
    assert not rep.passed and rep.resolution > 0.1

    g = disjoint_union(complete_graph(2), complete_graph(2))
    d = spectral_decomposition(g, L)
    assert validate_decomposition(d, hamiltonian(g, L), 1e-8).passed
    assert np.allclose(d.thetas, [0, 2]) and d.mults == (2, 2)


def test_validate_all_small(small_graphs):
    for n in range(1, 7):
        for g in small_graphs[n]:
            for kind in (A, L):
                rep = validate_decomposition(spectral_decomposition(g, kind), hamiltonian(g, kind), 1e-8)
                assert rep.passed, (g, kind, rep)


def test_refines_examples():
    c4 = spectral_decomposition(cycle_graph(4), A)
    assert refines(c4, c4)
    assert refines(c4, spectral_decomposition(complete_graph(4), A))
    p3 = spectral_decomposition(path_graph(3), A)
    k1k2 = spectral_decomposition(disjoint_union(complete_graph(1), complete_graph(2)), A)
    assert not refines(p3, k1k2)
    with pytest.raises(DimensionError):
        refines(c4, p3)


def test_product_eigenspaces_are_tensor_sums():
    pieces = [complete_graph(2), path_graph(3), cycle_graph(4), cycle_graph(5)]
    for g in pieces:
        for h in pieces:
            dg, dh = spectral_decomposition(g, A), spectral_decomposition(h, A)
            prod = spectral_decomposition(cartesian_product(g, h), A)
            assert refines(kron_projectors(dg, dh), prod)


def test_regular_connected_refines_complete_graph(small_graphs):
    # the degree eigenvalue is simple with eigenvector 1, so every eigenspace lies in span(1) or its complement
    for n in range(1, 7):
        for g in small_graphs[n]:
            if g.is_connected() and g.is_regular():
                assert coarsest_equitable_partition(g).sizes == [n]
                assert refines(spectral_decomposition(g, A), spectral_decomposition(complete_graph(n), A))


@pytest.mark.parametrize("g,cells", [
    (Graph(2), ((0, 1),)),
    (path_graph(3), ((0, 2), (1,))),
])
def test_equitable_clique_union_not_always_refined(g, cells):
    # edgeless: eigenvalue 0 mixes 1 with its complement; P3: cells of unequal size split span of indicators
    p = VertexPartition(cells)
    assert coarsest_equitable_partition(g).cells == cells
    y = clique_partition_graph(g.n, p)
    assert not refines(spectral_decomposition(g, A), spectral_decomposition(y, A))


def test_petersen_spectrum():
    d = spectral_decomposition(petersen_graph(), A)
    assert np.allclose(d.thetas, [-2, 1, 3])
    assert d.mults == (4, 5, 1)
