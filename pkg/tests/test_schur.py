import numpy as np
import pytest

from riccati_pinv.linalg import pinv, svd
from riccati_pinv.riccati import (
    SolutionParams,
    cluster_singular_values,
    construct_solution,
    random_involution,
)
from riccati_pinv.schur import (
    build_m,
    eigenstructure_report,
    embedding_scale,
    extract_solution_from_basis,
    invariant_embedding_check,
    solution_basis,
)

from conftest import random_matrix


class TestBuildM:
    def test_scalar(self):
        assert np.allclose(build_m([[2]]).m_matrix, [[0, 8], [2, 0]])

    def test_zero(self):
        e = build_m(np.zeros((2, 3)))
        assert e.m_matrix.shape == (5, 5) and not e.m_matrix.any()
        assert e.source_dims == (2, 3)

    def test_identity(self):
        I = np.eye(2)
        Z = np.zeros((2, 2))
        assert np.allclose(build_m(I).m_matrix, np.block([[Z, I], [I, Z]]))

    def test_blocks(self, rng):
        W = random_matrix(rng, 3, 5, complex_=True)
        M = build_m(W).m_matrix
        assert np.allclose(M[:3, 3:], W @ W.conj().T @ W)
        assert np.allclose(M[3:, :3], W.conj().T)
        assert not M[:3, :3].any() and not M[3:, 3:].any()


class TestEigenstructure:
    def test_scalar(self):
        M = build_m([[2]]).m_matrix
        for sign in (1, -1):
            w = np.array([1, sign * 0.5])
            assert np.allclose(M @ w, sign * 4 * w)
        rep = eigenstructure_report([[2]])
        assert rep.passed and rep.eigenvalues == pytest.approx([4, -4])

    def test_zero(self):
        rep = eigenstructure_report(np.zeros((2, 2)))
        assert rep.kernel_dim == 4 and rep.eigenvalues == [0, 0, 0, 0]
        assert rep.diagonalizable

    def test_diagonal(self):
        rep = eigenstructure_report(np.diag([2.0, 3.0]))
        assert rep.eigenvalues == pytest.approx([9, 4, -4, -9])
        assert rep.kernel_dim == 0 and rep.eigenvector_count == 4

    def test_random_against_numpy(self, rng):
        for _ in range(10):
            m, n = (int(x) for x in rng.integers(1, 8, size=2))
            W = random_matrix(rng, m, n, int(rng.integers(0, min(m, n) + 1)), True)
            rep = eigenstructure_report(W)
            assert rep.passed and rep.diagonalizable
            ref = np.sort(np.linalg.eigvals(build_m(W).m_matrix).real)
            scale = 1 + np.linalg.norm(W) ** 2
            assert np.allclose(np.sort(rep.eigenvalues), ref, atol=1e-8 * scale)

    def test_to_dict(self):
        d = eigenstructure_report([[1, 2], [3, 4]]).to_dict()
        assert d["pass"] and d["diagonalizable"] and d["kernel_dim"] == 0


class TestInvariantEmbedding:
    def test_pinv(self):
        W = np.diag([2.0, 3.0])
        assert invariant_embedding_check(W, pinv(W)) <= 1e-12

    def test_sign_solution(self):
        assert invariant_embedding_check(np.diag([2.0, 3.0]), np.diag([0.5, -1 / 3])) <= 1e-12

    def test_zero_is_not_solution(self):
        res = invariant_embedding_check([[2]], [[0]])
        assert res == pytest.approx(2)
        assert res > 1e-8 * embedding_scale([[2]], [[0]])

    def test_shape(self):
        with pytest.raises(ValueError):
            invariant_embedding_check(np.eye(2), np.eye(3))


class TestExtract:
    def test_normalized(self, rng):
        W = random_matrix(rng, 3, 4, 2, True)
        Z = np.vstack([np.eye(3), pinv(W)])
        assert np.allclose(extract_solution_from_basis(Z, W), pinv(W))

    def test_basis_invariance(self, rng):
        for _ in range(15):
            m, n = (int(x) for x in rng.integers(1, 7, size=2))
            W = random_matrix(rng, m, n, int(rng.integers(0, min(m, n) + 1)), True)
            f = svd(W)
            c = cluster_singular_values(f)
            blocks = [random_involution(s, int(rng.integers(1000))) for s in c.multiplicities]
            X0 = construct_solution(f, c, SolutionParams(blocks, rng.standard_normal((n, m))))
            C = random_matrix(rng, m, m, complex_=True)
            Z = np.vstack([np.eye(m), X0]) @ C
            X = extract_solution_from_basis(Z, W)
            assert np.linalg.norm(X - X0) <= 1e-8 * (1 + np.linalg.norm(X0)) * np.linalg.cond(C)

    def test_singular_top(self):
        W = np.eye(2)
        Z = np.vstack([np.zeros((2, 2)), np.eye(2)])
        with pytest.raises(ValueError, match="not invariant|projection not surjective"):
            extract_solution_from_basis(Z, W)

    def test_singular_top_on_invariant_subspace(self):
        # the kernel of M for W = 0 is everything, so only surjectivity can fail
        Z = np.vstack([np.zeros((2, 2)), np.eye(2)])
        with pytest.raises(ValueError, match="projection not surjective"):
            extract_solution_from_basis(Z, np.zeros((2, 2)))

    def test_not_invariant(self):
        Z = np.vstack([np.eye(1), [[0.0]]])
        with pytest.raises(ValueError, match="not invariant"):
            extract_solution_from_basis(Z, [[2]])


class TestSolutionBasis:
    def test_composition(self, rng):
        for _ in range(15):
            m, n = (int(x) for x in rng.integers(1, 7, size=2))
            W = random_matrix(rng, m, n, int(rng.integers(0, min(m, n) + 1)), True)
            f = svd(W)
            c = cluster_singular_values(f)
            r = c.r
            Cs = [random_matrix(rng, s, s, complex_=True) for s in c.multiplicities]
            Ds = [rng.choice([-1.0, 1.0], size=s) for s in c.multiplicities]
            C0 = random_matrix(rng, m - r, m - r, complex_=True) if m > r else np.zeros((0, 0))
            Y0 = rng.standard_normal((n - r, m - r))
            Z = solution_basis(f, c, Cs, Ds, C0, Y0)
            X = extract_solution_from_basis(Z, W)

            blocks = [C @ np.diag(D) @ np.linalg.inv(C) for C, D in zip(Cs, Ds)]
            Y = np.zeros((n, m), dtype=complex)
            Y[r:, r:] = Y0
            Y = f.V @ Y @ f.U.conj().T
            expected = construct_solution(f, c, SolutionParams(blocks, Y))
            assert np.allclose(X, expected, atol=1e-6 * (1 + np.linalg.norm(expected)))
