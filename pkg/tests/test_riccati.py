import numpy as np
import pytest

from riccati_pinv.identities import riccati_residual
from riccati_pinv.linalg import null_projector, pinv, svd
from riccati_pinv.riccati import (
    SingularClusters,
    SolutionParams,
    canonical_solution,
    cluster_singular_values,
    construct_solution,
    decompose_solution,
    decomposition_residuals,
    enumerate_sign_solutions,
    family_dimension,
    quoted_family_dimension,
    random_involution,
)

from conftest import random_matrix


class _FakeSvd:
    """Only ``sigma`` and ``r`` are read by the clustering."""

    def __init__(self, sigma, r):
        self.sigma = np.asarray(sigma, dtype=float)
        self.r = r


def setup(W):
    f = svd(W)
    return f, cluster_singular_values(f)


def random_params(rng, f, clusters, y=True, seed=None):
    m, n = f.shape
    blocks = [
        random_involution(s, seed=int(rng.integers(2**32)), complex_=bool(rng.integers(2)))
        for s in clusters.multiplicities
    ]
    Y = rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m)) if y else np.zeros((n, m))
    return SolutionParams(blocks, Y)


def with_repeated_sigma(rng, m, n, sigmas, complex_=True):
    """``U diag(sigmas) V^*`` with random unitary factors."""
    def unitary(k):
        A = rng.standard_normal((k, k)) + (1j * rng.standard_normal((k, k)) if complex_ else 0)
        q, _ = np.linalg.qr(A)
        return q

    S = np.zeros((m, n))
    S[np.arange(len(sigmas)), np.arange(len(sigmas))] = sigmas
    return unitary(m) @ S @ unitary(n).conj().T


class TestClusters:
    def test_exact_repetition(self):
        c = cluster_singular_values(_FakeSvd([3, 3, 1], 3), 1e-8)
        assert c.values == (3, 1) and c.multiplicities == (2, 1)

    def test_relative_gap_merges(self):
        c = cluster_singular_values(_FakeSvd([2, 2 * (1 - 1e-12), 1], 3), 1e-8)
        assert c.values == (2, 1) and c.multiplicities == (2, 1)

    def test_rank_zero(self):
        c = cluster_singular_values(_FakeSvd([0, 0], 0))
        assert c.t == 0 and c.r == 0

    def test_real_factorization(self, rng):
        W = with_repeated_sigma(rng, 5, 4, [4, 4, 4, 1])
        f, c = setup(W)
        assert c.multiplicities == (3, 1)
        assert c.r == f.r == 4


class TestConstruct:
    def test_diagonal_signs(self):
        # singular values are ordered 3 > 2, so blocks go (sigma=3, sigma=2)
        f, c = setup(np.diag([2.0, 3.0]))
        X = construct_solution(f, c, SolutionParams([[[1]], [[-1]]], np.zeros((2, 2))))
        assert np.allclose(X, np.diag([-1 / 2, 1 / 3]))
        X = construct_solution(f, c, SolutionParams([[[-1]], [[1]]], np.zeros((2, 2))))
        assert np.allclose(X, np.diag([1 / 2, -1 / 3]))
        # each diagonal entry solves the scalar equation 8 x^2 = 2 resp. 27 x^2 = 3
        assert riccati_residual(np.diag([2.0, 3.0]), X) < 1e-14

    def test_nilpotent_with_free_part(self):
        W = np.array([[0, 2], [0, 0]])
        f, c = setup(W)
        X = construct_solution(f, c, SolutionParams([[[1]]], [[0, 1], [0, 0]]))
        assert np.allclose(X, [[0, 1], [0.5, 0]])
        assert np.allclose(X @ W @ W.T @ W @ X, [[0, 0], [2, 0]])

    def test_identity_with_swap_block(self):
        f, c = setup(np.eye(2))
        assert c.multiplicities == (2,)
        X = construct_solution(f, c, SolutionParams([[[0, 1], [1, 0]]], np.zeros((2, 2))))
        assert np.allclose(X, [[0, 1], [1, 0]])

    def test_block_validation(self):
        f, c = setup(np.diag([2.0, 3.0]))
        with pytest.raises(ValueError, match="expected 2"):
            construct_solution(f, c, SolutionParams([[[1]]], np.zeros((2, 2))))
        with pytest.raises(ValueError, match="not involutory"):
            construct_solution(f, c, SolutionParams([[[1]], [[2]]], np.zeros((2, 2))))
        with pytest.raises(ValueError, match="shape"):
            construct_solution(f, c, SolutionParams([np.eye(2), [[1]]], np.zeros((2, 2))))
        with pytest.raises(ValueError, match="Y must be"):
            construct_solution(f, c, SolutionParams([[[1]], [[1]]], np.zeros((3, 2))))

    def test_soundness_randomized(self, rng):
        cases = 0
        while cases < 220:
            m, n = (int(x) for x in rng.integers(1, 13, size=2))
            k = int(rng.integers(0, min(m, n) + 1))
            if rng.integers(3) == 0 and k >= 2:
                sig = np.sort(rng.uniform(0.5, 3, size=k))[::-1]
                sig[1] = sig[0]
                W = with_repeated_sigma(rng, m, n, sig)
            else:
                W = random_matrix(rng, m, n, k, complex_=bool(rng.integers(2)))
            f, c = setup(W)
            X = construct_solution(f, c, random_params(rng, f, c))
            bound = 1e-8 * (1 + np.linalg.norm(W)) ** 3 * (1 + np.linalg.norm(X)) ** 2
            assert riccati_residual(W, X) <= bound
            cases += 1

    def test_null_part_uses_projectors(self, rng):
        W = random_matrix(rng, 4, 6, 2, True)
        f, c = setup(W)
        Y = rng.standard_normal((6, 4))
        X = construct_solution(f, c, SolutionParams([[[1]], [[1]]], Y))
        expected = pinv(W) + null_projector(W, "domain") @ Y @ null_projector(W, "codomain")
        assert np.allclose(X, expected)


class TestCanonical:
    @pytest.mark.parametrize(
        "W, X",
        [
            ([[2]], [[0.5]]),
            (np.diag([2.0, 3.0]), np.diag([0.5, 1 / 3])),
            ([[0, 2], [0, 0]], [[0, 0], [0.5, 0]]),
        ],
    )
    def test_examples(self, W, X):
        f, c = setup(W)
        assert np.allclose(canonical_solution(f), X)
        blocks = [np.eye(s) for s in c.multiplicities]
        Xc = construct_solution(f, c, SolutionParams(blocks, np.zeros(np.shape(X))))
        assert np.allclose(Xc, X)


class TestRandomInvolution:
    def test_one_by_one(self):
        for seed in range(10):
            X = random_involution(1, seed)
            assert X.shape == (1, 1) and abs(abs(X[0, 0]) - 1) < 1e-14

    def test_squares_to_identity(self):
        X = random_involution(2, 42)
        assert np.linalg.norm(X @ X - np.eye(2)) <= 1e-12

    def test_forced_identity(self):
        X = random_involution(3, 7, signs=[1, 1, 1])
        assert np.allclose(X, np.eye(3))

    def test_condition_cap(self):
        with pytest.raises(ValueError):
            random_involution(2, 0, cond_cap=0.5)
        for size in range(1, 8):
            X = random_involution(size, size, complex_=True)
            assert np.linalg.norm(X @ X - np.eye(size)) <= 1e-10 * size

    def test_deterministic(self):
        assert np.array_equal(random_involution(4, 3), random_involution(4, 3))


class TestEnumerate:
    def test_diagonal(self):
        W = np.diag([2.0, 3.0])
        f, c = setup(W)
        sols = enumerate_sign_solutions(f, c)
        expected = [np.diag([a / 2, b / 3]) for b in (1, -1) for a in (1, -1)]
        assert len(sols) == 4
        for X, E in zip(sols, expected):
            assert np.allclose(X, E)
            assert riccati_residual(W, X) < 1e-14

    def test_single_cluster(self, rng):
        W = with_repeated_sigma(rng, 2, 2, [5, 5])
        f, c = setup(W)
        sols = enumerate_sign_solutions(f, c)
        assert len(sols) == 2
        assert np.allclose(sols[0], np.linalg.pinv(W))
        assert np.allclose(sols[1], -np.linalg.pinv(W))

    def test_zero(self):
        f, c = setup(np.zeros((2, 3)))
        sols = enumerate_sign_solutions(f, c)
        assert len(sols) == 1 and not sols[0].any()

    def test_too_large(self):
        f = svd(np.eye(1))
        big = SingularClusters(tuple(range(21, 0, -1)), (1,) * 21, 1e-8)
        with pytest.raises(ValueError, match="enumeration too large"):
            enumerate_sign_solutions(f, big)

    def test_distinctness(self, rng):
        for _ in range(20):
            m, n = (int(x) for x in rng.integers(1, 7, size=2))
            W = random_matrix(rng, m, n, int(rng.integers(1, min(m, n) + 1)), True)
            f, c = setup(W)
            sols = enumerate_sign_solutions(f, c)
            for i in range(len(sols)):
                for j in range(i + 1, len(sols)):
                    assert np.linalg.norm(sols[i] - sols[j]) >= 2 / c.values[0] - 1e-8


class TestDecompose:
    def test_canonical(self, rng):
        W = random_matrix(rng, 4, 5, 3)
        f, c = setup(W)
        params, res = decompose_solution(canonical_solution(f), f, c)
        assert res <= 1e-10
        for b in params.blocks:
            assert np.allclose(b, np.eye(b.shape[0]))
        assert np.linalg.norm(params.y_free) <= 1e-10

    def test_round_trip(self, rng):
        for _ in range(40):
            m, n = (int(x) for x in rng.integers(1, 10, size=2))
            k = int(rng.integers(0, min(m, n) + 1))
            if k >= 2 and rng.integers(2):
                sig = np.sort(rng.uniform(0.5, 3, size=k))[::-1]
                sig[-1] = sig[-2]
                W = with_repeated_sigma(rng, m, n, sig)
            else:
                W = random_matrix(rng, m, n, k, True)
            f, c = setup(W)
            params = random_params(rng, f, c)
            X = construct_solution(f, c, params)
            back, res = decompose_solution(X, f, c)
            assert res <= 1e-8
            for b0, b1 in zip(params.blocks, back.blocks):
                assert np.linalg.norm(b0 - b1) <= 1e-10 * (1 + np.linalg.norm(b0))
            PN = null_projector(f, "domain")
            PNs = null_projector(f, "codomain")
            assert np.allclose(back.y_free, PN @ params.y_free @ PNs, atol=1e-10)
            assert np.allclose(construct_solution(f, c, back), X, atol=1e-10)

    def test_perturbation_detected(self, rng):
        for _ in range(10):
            W = random_matrix(rng, 3, 4, 3)
            f, c = setup(W)
            E = rng.standard_normal((4, 3))
            E /= np.linalg.norm(E)
            _, res = decompose_solution(canonical_solution(f) + 1e-3 * E, f, c)
            assert res > 1e-4

    def test_residual_parts(self, rng):
        W = random_matrix(rng, 3, 3, 2)
        f, c = setup(W)
        _, parts = decomposition_residuals(np.ones((3, 3)), f, c)
        assert set(parts) == {"leakage", "involution", "null"}


class TestFamilyDimension:
    def test_invertible(self):
        assert family_dimension(svd([[1, 2], [3, 4]])) == 0

    def test_nilpotent(self):
        assert family_dimension(svd([[0, 2], [0, 0]])) == 1

    def test_zero(self):
        assert family_dimension(svd(np.zeros((2, 3)))) == 6

    def test_matches_formula(self, rng):
        for _ in range(25):
            m, n = (int(x) for x in rng.integers(1, 7, size=2))
            r = int(rng.integers(0, min(m, n) + 1))
            f = svd(random_matrix(rng, m, n, r, True))
            assert family_dimension(f) == (n - f.r) * (m - f.r)

    def test_stated_count_differs(self):
        # the count r(m+n-r) equals mn minus the image dimension
        f = svd([[0, 2], [0, 0]])
        assert quoted_family_dimension(2, 2, 1) == 3
        assert quoted_family_dimension(2, 2, 1) + family_dimension(f) == 4
