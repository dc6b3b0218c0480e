import numpy as np
import pytest

from blockgossip import complete, incidence, lambda_min_plus, pinv_psd, sym_eigen

from helpers import graph_pool


def random_symmetric(rng, n):
    B = rng.normal(size=(n, n))
    return (B + B.T) / 2.0


def random_psd(rng, n, rank):
    B = rng.normal(size=(n, rank))
    return B @ B.T


class TestSymEigen:
    def test_identity(self):
        dec = sym_eigen(np.eye(3))
        assert np.allclose(dec.eigenvalues, [1.0, 1.0, 1.0], atol=1e-12)

    def test_diagonal(self):
        dec = sym_eigen(np.diag([2.0, 5.0]))
        assert np.allclose(dec.eigenvalues, [2.0, 5.0], atol=1e-12)

    def test_triangle_edge_laplacian_spectrum(self):
        # the 3-node complete graph has node Laplacian eigenvalues (0, 3, 3)
        sys = incidence(complete(3))
        dec = sym_eigen(sys.A.T @ sys.A)
        assert np.allclose(dec.eigenvalues, [0.0, 3.0, 3.0], atol=1e-8)

    def test_reconstruction_and_orthonormality(self):
        rng = np.random.default_rng(11)
        for n in (2, 5, 9):
            M = random_symmetric(rng, n)
            dec = sym_eigen(M)
            Q, lam = dec.eigenvectors, dec.eigenvalues
            assert np.max(np.abs(Q @ np.diag(lam) @ Q.T - M)) < 1e-8
            assert np.max(np.abs(Q.T @ Q - np.eye(n))) < 1e-8
            assert np.all(np.diff(lam) >= -1e-12)

    def test_rejects_non_symmetric(self):
        with pytest.raises(ValueError, match="symmetric"):
            sym_eigen(np.array([[1.0, 2.0], [0.0, 1.0]]))

    def test_rejects_non_square(self):
        with pytest.raises(ValueError, match="square"):
            sym_eigen(np.ones((2, 3)))


class TestPinvPsd:
    def test_diagonal_with_zero(self):
        out = pinv_psd(np.diag([2.0, 0.0]))
        assert np.allclose(out, np.diag([0.5, 0.0]), atol=1e-12)

    def test_single_entry(self):
        # any incidence row has two nonzeros +-1, so its edge Laplacian is [2]
        assert np.allclose(pinv_psd(np.array([[2.0]])), [[0.5]], atol=1e-15)

    def test_invertible_gives_ordinary_inverse(self):
        rng = np.random.default_rng(7)
        M = random_psd(rng, 5, 5) + np.eye(5)
        out = pinv_psd(M)
        assert np.max(np.abs(M @ out - np.eye(5))) < 1e-8

    def test_moore_penrose_conditions_on_rank_deficient_input(self):
        rng = np.random.default_rng(13)
        for n, rank in [(4, 2), (6, 3), (8, 5)]:
            M = random_psd(rng, n, rank)
            P = pinv_psd(M)
            assert np.max(np.abs(M @ P @ M - M)) < 1e-8
            assert np.max(np.abs(P @ M @ P - P)) < 1e-8
            assert np.max(np.abs((M @ P) - (M @ P).T)) < 1e-8
            assert np.max(np.abs((P @ M) - (P @ M).T)) < 1e-8

    def test_matches_svd_pseudoinverse(self):
        rng = np.random.default_rng(17)
        for n, rank in [(5, 2), (7, 7)]:
            M = random_psd(rng, n, rank)
            assert np.max(np.abs(pinv_psd(M) - np.linalg.pinv(M))) < 1e-8

    def test_rejects_indefinite_matrix(self):
        with pytest.raises(ValueError, match="not PSD"):
            pinv_psd(np.diag([1.0, -1.0]))


class TestLambdaMinPlus:
    def test_skips_zero_eigenvalues(self):
        assert lambda_min_plus(np.diag([0.0, 0.5, 2.0])) == pytest.approx(0.5)

    def test_full_rank(self):
        assert lambda_min_plus(np.diag([1.0, 1.0])) == pytest.approx(1.0)

    def test_zero_matrix_rejected(self):
        with pytest.raises(ValueError, match="all eigenvalues are zero"):
            lambda_min_plus(np.zeros((3, 3)))

    def test_triangle_uniform_single_edge_projection(self):
        # oracle: enumerate the three single-edge projections by hand; each
        # R_e = e_e (1/2) e_e^T because every diagonal entry of A A^T is 2
        sys = incidence(complete(3))
        H = np.zeros((3, 3))
        for e in range(3):
            basis = np.zeros((3, 1))
            basis[e, 0] = 1.0
            H += basis @ (0.5 * basis.T)
        H /= 3.0
        assert np.allclose(H, np.eye(3) / 6.0, atol=1e-15)
        assert lambda_min_plus(sys.A.T @ H @ sys.A) == pytest.approx(0.5, abs=1e-12)

    def test_exactly_one_zero_eigenvalue_for_connected_graphs(self):
        from blockgossip.linalg import zero_cutoff

        for g in graph_pool():
            sys = incidence(g)
            dec = sym_eigen(sys.A.T @ sys.A)
            assert int(np.sum(dec.eigenvalues <= zero_cutoff(dec.eigenvalues))) == 1
