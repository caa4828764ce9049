"""Block matrix ``M = [[0, W W^* W], [W^*, 0]]`` and its invariant subspaces.

A matrix ``X`` solves the Riccati equation exactly when the column space of
``[I; X]`` is ``M``-invariant.  The helpers here check that correspondence
and the eigenstructure of ``M`` built from singular pairs of ``W``.
"""

from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from .linalg import as_matrix, fro, pinv, svd as _svd
from .riccati import SingularClusters, cluster_singular_values

__all__ = [
    "SchurEmbedding",
    "EigenstructureReport",
    "build_m",
    "eigenstructure_report",
    "embedding_scale",
    "invariant_embedding_check",
    "extract_solution_from_basis",
    "solution_basis",
]


@dataclass(frozen=True)
class SchurEmbedding:
    m_matrix: np.ndarray
    source_dims: Tuple[int, int]


def build_m(W):
    W = as_matrix(W, "W")
    m, n = W.shape
    M = np.zeros((m + n, m + n), dtype=np.complex128)
    Ws = W.conj().T
    M[:m, m:] = W @ Ws @ W
    M[m:, :m] = Ws
    M.flags.writeable = False
    return SchurEmbedding(M, (m, n))


@dataclass
class EigenstructureReport:
    eigenvalues: List[float]
    pair_residuals: List[dict]
    cluster_residuals: List[dict]
    kernel_dim: int
    kernel_residual: float
    eigenvector_count: int
    tol: float
    scale: float
    passed: bool = field(default=False)

    @property
    def diagonalizable(self):
        m_plus_n = len(self.eigenvalues)
        return self.passed and self.eigenvector_count == m_plus_n

    def to_dict(self):
        return {
            "eigenvalues": self.eigenvalues,
            "pair_residuals": self.pair_residuals,
            "cluster_residuals": self.cluster_residuals,
            "kernel_dim": self.kernel_dim,
            "kernel_residual": self.kernel_residual,
            "eigenvector_count": self.eigenvector_count,
            "diagonalizable": self.diagonalizable,
            "tol": self.tol,
            "scale": self.scale,
            "pass": self.passed,
        }


def eigenstructure_report(W, tol=1e-8, gap_tol=1e-8):
    """Check the predicted eigenvectors of ``M`` one by one.

    For each singular triple ``(sigma, u, v)`` the vectors ``[u; +/-v/sigma]``
    must satisfy ``M w = +/-sigma^2 w``; ``N(W^*) x N(W)`` must be annihilated.
    Clusters of equal singular values are additionally checked as
    subspaces.  The eigenvector count is the numerical rank of all verified
    vectors stacked together; ``m + n`` witnesses diagonalizability.
    """
    W = as_matrix(W, "W")
    m, n = W.shape
    f = _svd(W)
    r = f.r
    M = build_m(W).m_matrix
    scale = (1 + fro(W)) ** 3
    bound = tol * scale

    vectors, eigenvalues, pairs = [], [], []
    ok = True
    for i in range(r):
        s = f.sigma[i]
        u, v = f.U[:, i], f.V[:, i]
        for sign in (1, -1):
            w = np.concatenate([u, sign * v / s])
            lam = sign * s * s
            res = fro(M @ w - lam * w) / fro(w)
            ok &= res <= bound
            pairs.append({"index": i, "eigenvalue": lam, "residual": res})
            vectors.append(w)
            eigenvalues.append(lam)

    clusters = cluster_singular_values(f, gap_tol)
    cluster_res = []
    for sl, value in zip(clusters.slices(), clusters.values):
        Uc, Vc = f.U[:, sl], f.V[:, sl]
        sig = f.sigma[sl]
        for sign in (1, -1):
            Z = np.vstack([Uc, sign * Vc / sig])
            # M maps span(Z) to itself iff the projection residual vanishes
            coeff = pinv(Z) @ (M @ Z)
            res = fro(M @ Z - Z @ coeff) / fro(Z)
            ok &= res <= bound
            cluster_res.append(
                {"value": value, "sign": sign, "multiplicity": Uc.shape[1], "residual": res}
            )

    K = np.zeros((m + n, (m - r) + (n - r)), dtype=np.complex128)
    K[:m, : m - r] = f.U[:, r:]
    K[m:, m - r :] = f.V[:, r:]
    kernel_res = fro(M @ K) if K.shape[1] else 0.0
    ok &= kernel_res <= bound
    vectors.extend(K.T)
    eigenvalues.extend([0.0] * K.shape[1])

    E = np.array(vectors).T
    count = _svd(E).r if E.size else 0
    order = np.argsort(-np.asarray(eigenvalues), kind="stable")
    return EigenstructureReport(
        eigenvalues=[float(eigenvalues[i]) for i in order],
        pair_residuals=pairs,
        cluster_residuals=cluster_res,
        kernel_dim=K.shape[1],
        kernel_residual=kernel_res,
        eigenvector_count=int(count),
        tol=tol,
        scale=scale,
        passed=bool(ok),
    )


def embedding_scale(W, X):
    return (1 + fro(W) ** 3) * (1 + fro(X))


def invariant_embedding_check(W, X):
    """``|M [I; X] - [I; X] (W W^* W X)|_F``; zero exactly for solutions."""
    W = as_matrix(W, "W")
    X = as_matrix(X, "X")
    m, n = W.shape
    if X.shape != (n, m):
        raise ValueError(f"X must be {n}x{m}, got {X.shape}")
    M = build_m(W).m_matrix
    G = np.vstack([np.eye(m), X])
    WWW = M[:m, m:]
    return fro(M @ G - G @ (WWW @ X))


def extract_solution_from_basis(Z, W, tol=1e-8):
    """Recover ``X = Z_2 Z_1^{-1}`` from a basis ``Z = [Z_1; Z_2]`` of an invariant subspace.

    Raises ``ValueError("not invariant")`` when ``span(Z)`` is not mapped
    into itself by ``M``, and ``ValueError("projection not surjective")``
    when the top block is numerically singular.
    """
    W = as_matrix(W, "W")
    Z = as_matrix(Z, "Z")
    m, n = W.shape
    if Z.shape != (m + n, m):
        raise ValueError(f"Z must be {m + n}x{m}, got {Z.shape}")
    M = build_m(W).m_matrix
    fz = _svd(Z)
    MZ = M @ Z
    if fro(MZ - Z @ (pinv(fz) @ MZ)) > tol * (1 + fro(M)) * (1 + fro(Z)):
        raise ValueError("not invariant")
    Z1, Z2 = Z[:m], Z[m:]
    f1 = _svd(Z1)
    if f1.r < m or f1.sigma[-1] <= tol * fz.sigma[0]:
        raise ValueError("projection not surjective")
    return Z2 @ pinv(f1)


def solution_basis(svd, clusters: SingularClusters, C_blocks, sign_blocks, C0, Y0):
    """Basis of the invariant subspace belonging to a solution.

    Columns ``[U_i C_i; V_i C_i D_i / sigma_i]`` for each cluster and
    ``[U_0 C_0; V_0 Y0 C_0]`` for the kernel part, where ``D_i`` are +/-1
    diagonals and ``Y0`` is ``(n-r) x (m-r)``.  The corresponding solution
    has blocks ``C_i D_i C_i^{-1}`` and null part ``V_0 Y0 U_0^*``.
    """
    m, n = svd.shape
    r = clusters.r
    top, bottom = [], []
    for sl, C, Dg in zip(clusters.slices(), C_blocks, sign_blocks):
        C = np.asarray(C, dtype=np.complex128)
        Dg = np.diag(np.asarray(Dg, dtype=float))
        top.append(svd.U[:, sl] @ C)
        bottom.append((svd.V[:, sl] / svd.sigma[sl]) @ C @ Dg)
    C0 = np.asarray(C0, dtype=np.complex128).reshape(m - r, m - r)
    Y0 = np.asarray(Y0, dtype=np.complex128).reshape(n - r, m - r)
    top.append(svd.U[:, r:] @ C0)
    bottom.append(svd.V[:, r:] @ Y0 @ C0)
    return np.vstack([np.hstack(top), np.hstack(bottom)])
