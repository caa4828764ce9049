"""Solutions of ``X W W^* W X = W^*`` in SVD coordinates.

Every solution has the form

    X = V diag(X_1/s_1, ..., X_t/s_t, 0) U^* + P_N(W) Y P_N(W^*)

where ``W = U Sigma V^*``, ``s_i`` are the distinct nonzero singular values,
each block ``X_i`` is an involution (``X_i^2 = I``) sized by the multiplicity
of ``s_i``, and ``Y`` is arbitrary.  This module builds, enumerates and
decomposes solutions in those coordinates.
"""

import itertools
from dataclasses import dataclass, field
from typing import List

import numpy as np

from .linalg import (
    as_matrix,
    fro,
    pinv,
    svd as _svd,
)

__all__ = [
    "SingularClusters",
    "SolutionParams",
    "cluster_singular_values",
    "construct_solution",
    "canonical_solution",
    "random_involution",
    "enumerate_sign_solutions",
    "sign_patterns",
    "decompose_solution",
    "decomposition_residuals",
    "family_dimension",
    "quoted_family_dimension",
    "MAX_ENUMERATION_CLUSTERS",
]

MAX_ENUMERATION_CLUSTERS = 20


@dataclass(frozen=True)
class SingularClusters:
    """Distinct nonzero singular values and their multiplicities."""

    values: tuple
    multiplicities: tuple
    gap_tol: float

    @property
    def t(self):
        return len(self.values)

    @property
    def r(self):
        return int(sum(self.multiplicities))

    def slices(self):
        """Index ranges of each cluster inside the first ``r`` positions."""
        out = []
        start = 0
        for s in self.multiplicities:
            out.append(slice(start, start + s))
            start += s
        return out


@dataclass
class SolutionParams:
    """The ``(D, Y)`` coordinates of a solution: involutory blocks plus free ``Y``."""

    blocks: List[np.ndarray]
    y_free: np.ndarray = field(repr=False)

    def block_diagonal(self):
        r = sum(b.shape[0] for b in self.blocks)
        D = np.zeros((r, r), dtype=np.complex128)
        i = 0
        for b in self.blocks:
            s = b.shape[0]
            D[i : i + s, i : i + s] = b
            i += s
        return D


def cluster_singular_values(svd, gap_tol=1e-8):
    """Group the ``r`` nonzero singular values into clusters of equal value.

    Greedy: a new cluster starts when ``sigma_j < head * (1 - gap_tol)``,
    where ``head`` is the first (largest) value of the current cluster.
    """
    if gap_tol < 0:
        raise ValueError("gap_tol must be nonnegative")
    values, mults = [], []
    for s in svd.sigma[: svd.r]:
        if values and s >= values[-1] * (1.0 - gap_tol):
            mults[-1] += 1
        else:
            values.append(float(s))
            mults.append(1)
    return SingularClusters(tuple(values), tuple(mults), float(gap_tol))


def _check_blocks(blocks, clusters, tol):
    if len(blocks) != clusters.t:
        raise ValueError(
            f"expected {clusters.t} involutory blocks, got {len(blocks)}"
        )
    out = []
    for i, (b, s) in enumerate(zip(blocks, clusters.multiplicities)):
        b = np.array(b, dtype=np.complex128, ndmin=2)
        if b.shape != (s, s):
            raise ValueError(
                f"block {i} has shape {b.shape}, cluster multiplicity is {s}"
            )
        defect = fro(b @ b - np.eye(s))
        if defect > tol * s:
            raise ValueError(f"block {i} is not involutory (|B^2 - I| = {defect:.3g})")
        out.append(b)
    return out


def construct_solution(svd, clusters, params, tol=1e-8):
    """Assemble ``X = V Sigma^+ D U^* + P_N(W) Y P_N(W^*)``.

    ``D`` carries the involutory blocks at the positions of their clusters
    and zeros beyond the rank.  ``params.y_free`` is a full ``n x m`` matrix;
    only its projection onto ``N(W) x N(W^*)`` matters.
    """
    m, n = svd.shape
    blocks = _check_blocks(params.blocks, clusters, tol)
    Y = as_matrix(params.y_free, "Y")
    if Y.shape != (n, m):
        raise ValueError(f"Y must be {n}x{m}, got {Y.shape}")
    r = clusters.r
    D = SolutionParams(blocks, Y).block_diagonal()
    Vr, Ur = svd.V[:, :r], svd.U[:, :r]
    X = (Vr / svd.sigma[:r]) @ D @ Ur.conj().T
    V0, U0 = svd.V[:, r:], svd.U[:, r:]
    X = X + V0 @ (V0.conj().T @ Y @ U0) @ U0.conj().T
    return X


def canonical_solution(svd):
    """``W^+``, the solution with every block equal to ``I`` and ``Y = 0``."""
    return pinv(svd)


def random_involution(size, seed=None, cond_cap=100.0, signs=None, complex_=False):
    """Random ``C S C^{-1}`` with ``S`` a random +/-1 diagonal.

    ``C`` is resampled until its 2-norm condition number is at most
    ``cond_cap``.  ``signs`` forces the diagonal of ``S``.
    """
    if size < 1:
        raise ValueError("size must be positive")
    if not cond_cap >= 1:
        raise ValueError("cond_cap must be at least 1")
    rng = np.random.default_rng(seed)
    if signs is None:
        S = rng.choice([1.0, -1.0], size=size)
    else:
        S = np.asarray(signs, dtype=float)
        if S.shape != (size,) or not np.all(np.abs(S) == 1):
            raise ValueError("signs must be a length-size vector of +/-1")
    for _ in range(10_000):
        C = rng.standard_normal((size, size))
        if complex_:
            C = C + 1j * rng.standard_normal((size, size))
        f = _svd(C)
        if f.r == size and f.sigma[0] <= cond_cap * f.sigma[-1]:
            break
    else:
        raise RuntimeError("could not draw a well-conditioned similarity")
    return (C * S) @ pinv(f)


def sign_patterns(t):
    """All ``+1/-1`` vectors of length ``t``, lexicographic with ``+`` first."""
    return list(itertools.product((1, -1), repeat=t))


def enumerate_sign_solutions(svd, clusters):
    """The ``2^t`` solutions with blocks ``+/-I`` and ``Y = 0``."""
    if clusters.t > MAX_ENUMERATION_CLUSTERS:
        raise ValueError("enumeration too large")
    m, n = svd.shape
    zero = np.zeros((n, m))
    out = []
    for pattern in sign_patterns(clusters.t):
        blocks = [sgn * np.eye(s) for sgn, s in zip(pattern, clusters.multiplicities)]
        out.append(construct_solution(svd, clusters, SolutionParams(blocks, zero)))
    return out


def decomposition_residuals(X, svd, clusters):
    """Recover ``(D, null part)`` from ``X`` and the three defects.

    Returns ``(params, parts)``; ``parts`` has ``leakage`` (energy of
    ``Sigma V^* X U`` outside the cluster blocks of the leading ``r x r``
    corner), ``involution`` (largest ``|B_i^2 - I|_F``) and ``null`` (how far
    the remainder is from being sandwiched by the null projectors).
    """
    m, n = svd.shape
    X = as_matrix(X, "X")
    if X.shape != (n, m):
        raise ValueError(f"X must be {n}x{m}, got {X.shape}")
    r = clusters.r
    Ur, Vr = svd.U[:, :r], svd.V[:, :r]
    core = svd.sigma[:r, None] * (Vr.conj().T @ X @ Ur)

    blocks = [core[sl, sl].copy() for sl in clusters.slices()]
    D = SolutionParams(blocks, None).block_diagonal()
    leakage = fro(core - D)
    involution = max(
        (fro(b @ b - np.eye(b.shape[0])) for b in blocks), default=0.0
    )
    null_part = X - (Vr / svd.sigma[:r]) @ D @ Ur.conj().T
    V0, U0 = svd.V[:, r:], svd.U[:, r:]
    sandwiched = V0 @ (V0.conj().T @ null_part @ U0) @ U0.conj().T
    null = fro(sandwiched - null_part)
    params = SolutionParams(blocks, null_part)
    return params, {"leakage": leakage, "involution": involution, "null": null}


def decompose_solution(X, svd, clusters, tol=1e-8):
    """Split a candidate solution into blocks and null-space part.

    Returns ``(params, residual)``; ``params.y_free`` is the projected part
    ``P_N(W) Y P_N(W^*)`` (``Y`` itself is not identifiable).  ``residual``
    is the largest of the three defects from :func:`decomposition_residuals`;
    for a genuine solution it is at roundoff level.  ``tol`` is accepted for
    interface symmetry; callers compare ``residual`` against it.
    """
    params, parts = decomposition_residuals(X, svd, clusters)
    return params, max(parts.values())


def family_dimension(svd):
    """Dimension of ``{P_N(W) Y P_N(W^*)}`` over all ``Y``.

    Computed as the rank of the linear map ``Y -> P_N(W) Y P_N(W^*)`` on
    the elementary-matrix basis of ``K^{n x m}``.
    """
    m, n = svd.shape
    r = svd.r
    PN = svd.V[:, r:] @ svd.V[:, r:].conj().T
    PNs = svd.U[:, r:] @ svd.U[:, r:].conj().T
    if r == m or r == n:
        return 0
    columns = []
    for i in range(n):
        for j in range(m):
            # P E_ij Q = (column i of P)(row j of Q)
            columns.append(np.outer(PN[:, i], PNs[j, :]).ravel())
    return _svd(np.array(columns).T).r


def quoted_family_dimension(m, n, r):
    """The count ``mn - (m-r)(n-r) = r(m+n-r)`` as stated alongside the families."""
    return r * (m + n - r)
