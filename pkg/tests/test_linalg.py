import numpy as np
import pytest

from speclat.errors import DimensionMismatchError, NonHermitianError
from speclat.linalg import eigh, is_psd, orthonormal_range, range_basis, reconstruct
from speclat.sampling import random_hermitian, random_projection
from speclat.tolerances import ToleranceConfig
from speclat.validation import max_abs

E1 = np.array([1.0, 0.0], dtype=complex)
E2 = np.array([0.0, 1.0], dtype=complex)


def test_eigh_diagonal_sorts_ascending():
    es = eigh(np.diag([2.0, 1.0]).astype(complex))
    np.testing.assert_allclose(es.values, [1.0, 2.0])
    np.testing.assert_allclose(np.abs(es.vectors[:, 0]), np.abs(E2))
    np.testing.assert_allclose(np.abs(es.vectors[:, 1]), np.abs(E1))


def test_eigh_symmetric_offdiagonal():
    es = eigh(np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex))
    np.testing.assert_allclose(es.values, [-1.0, 1.0])
    np.testing.assert_allclose(es.vectors[:, 0], np.array([1.0, -1.0]) / np.sqrt(2))
    np.testing.assert_allclose(es.vectors[:, 1], np.array([1.0, 1.0]) / np.sqrt(2))


def test_eigh_reconstruction_random(rng):
    for _ in range(50):
        x = random_hermitian(rng, 4)
        es = eigh(x)
        assert max_abs(reconstruct(es) - x) <= 1e-10


def test_eigh_orthonormal_and_deterministic(rng):
    x = random_hermitian(rng, 5)
    a, b = eigh(x), eigh(x)
    np.testing.assert_array_equal(a.values, b.values)
    np.testing.assert_array_equal(a.vectors, b.vectors)
    assert max_abs(a.vectors.conj().T @ a.vectors - np.eye(5)) <= 1e-12


def test_eigh_clusters_group_repeated_eigenvalues():
    es = eigh(np.diag([1.0, 1.0, 2.0]).astype(complex))
    assert es.clusters == ((0, 1), (2,))


def test_eigh_rejects_non_hermitian():
    with pytest.raises(NonHermitianError):
        eigh(np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex))


def test_eigh_involutive_many(rng):
    for _ in range(1000):
        n = int(rng.integers(1, 9))
        x = random_hermitian(rng, n)
        assert max_abs(reconstruct(eigh(x)) - x) <= 1e-8


def test_orthonormal_range_single_vector():
    np.testing.assert_allclose(orthonormal_range([E1]), np.diag([1.0, 0.0]), atol=1e-12)


def test_orthonormal_range_dependent_vectors():
    p = orthonormal_range([E1, E1])
    np.testing.assert_allclose(p, np.diag([1.0, 0.0]), atol=1e-12)
    assert round(np.real(np.trace(p))) == 1


def test_orthonormal_range_spanning_pair():
    p = orthonormal_range([np.array([1.0, 1.0]), np.array([1.0, -1.0])])
    np.testing.assert_allclose(p, np.eye(2), atol=1e-12)


def test_orthonormal_range_empty_dimension():
    with pytest.raises(DimensionMismatchError):
        orthonormal_range(np.zeros((0, 1)))


def test_orthonormal_range_is_projection(rng):
    for _ in range(100):
        n = int(rng.integers(1, 6))
        k = int(rng.integers(1, 4))
        cols = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
        p = orthonormal_range(cols)
        assert max_abs(p - p.conj().T) <= 1e-12
        assert max_abs(p @ p - p) <= 1e-12


def test_range_basis_roundtrip(rng):
    p = random_projection(rng, 5, rank=2)
    basis = range_basis(p)
    assert basis.shape == (5, 2)
    np.testing.assert_allclose(basis @ basis.conj().T, p, atol=1e-10)


def test_is_psd_examples():
    assert is_psd(np.diag([0.0, 3.0]).astype(complex))
    assert not is_psd(np.array([[1.0, 2.0], [2.0, 1.0]], dtype=complex))


def test_is_psd_constructed(rng):
    for _ in range(50):
        b = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        assert is_psd(b.conj().T @ b)


def test_is_psd_matches_min_eigenvalue(rng):
    tol = ToleranceConfig()
    for _ in range(100):
        x = random_hermitian(rng, 4)
        assert is_psd(x) == (eigh(x).values[0] >= -tol.eps_proj)


def test_tolerance_validation():
    with pytest.raises(ValueError):
        ToleranceConfig(eps_eig=-1.0)
    with pytest.raises(ValueError):
        ToleranceConfig(eps_eig=1e-12, eps_proj=1e-9)
