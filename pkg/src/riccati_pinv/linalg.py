"""Dense complex linear algebra: Jacobi SVD, pseudoinverse, projectors.

Everything here works on complex128 ``numpy`` arrays.  Factorizations are
computed with Jacobi rotations only; ``numpy`` supplies storage and matrix
products, never a LAPACK decomposition.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

__all__ = [
    "EPS",
    "MAX_DIM",
    "TolerancePolicy",
    "SvdFactorization",
    "as_matrix",
    "is_real",
    "fro",
    "svd",
    "rank",
    "pinv",
    "null_projector",
    "range_basis",
    "hermitian_eig",
    "penrose_check",
]

EPS = np.finfo(np.float64).eps
MAX_DIM = 2048
_MAX_SWEEPS = 80


def as_matrix(a, name="matrix"):
    """Convert ``a`` to a read-only complex128 2-D array.

    Raises ``ValueError`` for non-2-D input, non-finite entries, or any
    dimension above :data:`MAX_DIM`.
    """
    arr = np.array(a, dtype=np.complex128, ndmin=2, copy=True)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be two-dimensional, got ndim={arr.ndim}")
    if max(arr.shape) > MAX_DIM:
        raise ValueError(
            f"{name} dimensions {arr.shape} exceed the desk-scale limit {MAX_DIM}"
        )
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    arr.flags.writeable = False
    return arr


def is_real(a, tol=0.0):
    """True when every imaginary part of ``a`` is at most ``tol`` in magnitude."""
    a = np.asarray(a)
    if not np.iscomplexobj(a):
        return True
    return bool(np.all(np.abs(a.imag) <= tol))


def fro(a):
    return float(np.linalg.norm(a))


def _frozen(a):
    a = np.ascontiguousarray(a, dtype=np.complex128)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class TolerancePolicy:
    """Rule for turning the largest singular value into a rank cutoff.

    ``atol`` wins over ``rtol``; with neither set the cutoff is
    ``sigma_max * max(m, n) * eps``.
    """

    rtol: Optional[float] = None
    atol: Optional[float] = None

    def __post_init__(self):
        for v in (self.rtol, self.atol):
            if v is not None and not v >= 0:
                raise ValueError("tolerances must be nonnegative")

    def cutoff(self, sigma_max, shape):
        if self.atol is not None:
            return float(self.atol)
        rtol = self.rtol if self.rtol is not None else max(shape) * EPS
        return float(rtol * sigma_max)


DEFAULT_POLICY = TolerancePolicy()


@dataclass(frozen=True)
class SvdFactorization:
    """Full SVD ``A = U diag(sigma) V^*`` with the rank cutoff that was applied."""

    U: np.ndarray
    sigma: np.ndarray
    V: np.ndarray
    r: int
    tol: float

    @property
    def shape(self):
        return (self.U.shape[0], self.V.shape[0])

    @property
    def Sigma(self):
        m, n = self.shape
        S = np.zeros((m, n), dtype=np.complex128)
        k = len(self.sigma)
        S[np.arange(k), np.arange(k)] = self.sigma
        return S

    @property
    def U_range(self):
        return self.U[:, : self.r]

    @property
    def U_null(self):
        return self.U[:, self.r :]

    @property
    def V_range(self):
        return self.V[:, : self.r]

    @property
    def V_null(self):
        return self.V[:, self.r :]

    def reconstruct(self):
        return self.U @ self.Sigma @ self.V.conj().T


def _jacobi_rotation(alpha, beta, gamma):
    """Rotation parameters diagonalizing ``[[alpha, gamma], [conj(gamma), beta]]``.

    Vectorized over numpy arrays.  Returns ``(c, s, phase)`` such that the
    unitary ``J = [[c, s], [-s*conj(phase), c*conj(phase)]]`` gives a
    diagonal ``J^* H J``; here ``phase = gamma / |gamma|``.
    """
    g = np.abs(gamma)
    safe_g = np.where(g > 0, g, 1.0)
    phase = np.where(g > 0, gamma / safe_g, 1.0)
    zeta = (beta - alpha) / (2.0 * safe_g)
    t = np.where(zeta >= 0, 1.0, -1.0) / (np.abs(zeta) + np.hypot(1.0, zeta))
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = c * t
    return c, s, phase


def _apply_right(A, P, Q, c, s, phase):
    """In place: columns ``P``/``Q`` of ``A`` times the rotation ``J``."""
    ap = A[:, P]
    aq = A[:, Q] * np.conj(phase)
    A[:, P] = c * ap - s * aq
    A[:, Q] = s * ap + c * aq


def _round_robin(n):
    """Pair schedule covering every (p, q) once per sweep, disjoint per step."""
    players = list(range(n)) + ([-1] if n % 2 else [])
    k = len(players)
    rounds = []
    for _ in range(k - 1):
        pairs = [
            (players[i], players[k - 1 - i])
            for i in range(k // 2)
            if players[i] >= 0 and players[k - 1 - i] >= 0
        ]
        if pairs:
            P, Q = zip(*[(min(a, b), max(a, b)) for a, b in pairs])
            rounds.append((np.array(P), np.array(Q)))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def _one_sided_jacobi(B):
    """Orthogonalize the columns of tall ``B``; returns ``(B @ J, J)``."""
    B = np.array(B, dtype=np.complex128, copy=True)
    q = B.shape[1]
    J = np.eye(q, dtype=np.complex128)
    schedule = _round_robin(q)
    # Inner products below (eps |B|_F)^2 are backward-error noise.
    floor = (EPS * np.linalg.norm(B)) ** 2
    for _ in range(_MAX_SWEEPS):
        rotated = False
        for P, Q in schedule:
            bp, bq = B[:, P], B[:, Q]
            alpha = np.einsum("ij,ij->j", bp.conj(), bp).real
            beta = np.einsum("ij,ij->j", bq.conj(), bq).real
            gamma = np.einsum("ij,ij->j", bp.conj(), bq)
            g = np.abs(gamma)
            active = (g > EPS * np.sqrt(alpha * beta)) & (g > floor)
            if not active.any():
                continue
            rotated = True
            P, Q = P[active], Q[active]
            c, s, ph = _jacobi_rotation(alpha[active], beta[active], gamma[active])
            _apply_right(B, P, Q, c, s, ph)
            _apply_right(J, P, Q, c, s, ph)
        if not rotated:
            return B, J
    raise ArithmeticError("one-sided Jacobi did not converge")


def _complete_basis(Q, p):
    """Extend orthonormal columns ``Q`` (p x k) to a p x p unitary matrix."""
    cols = [Q[:, j] for j in range(Q.shape[1])]
    basis = np.array(cols).T if cols else np.zeros((p, 0), dtype=np.complex128)
    candidates = np.eye(p, dtype=np.complex128)
    while basis.shape[1] < p:
        # Gram-Schmidt twice on every unit vector; keep the most independent.
        R = candidates - basis @ (basis.conj().T @ candidates)
        R = R - basis @ (basis.conj().T @ R)
        norms = np.linalg.norm(R, axis=0)
        j = int(np.argmax(norms))
        basis = np.column_stack([basis, R[:, j] / norms[j]])
    return basis


def _normalize_phase(U, V, k):
    """Make the largest-magnitude entry of each column of ``U`` real positive.

    The first ``k`` columns of ``V`` are paired with those of ``U`` and get
    the same phase; the remaining columns of ``V`` are normalized on their own.
    """
    U = U.copy()
    V = V.copy()
    for j in range(U.shape[1]):
        i = int(np.argmax(np.abs(U[:, j])))
        ph = U[i, j] / abs(U[i, j])
        U[:, j] /= ph
        U[i, j] = abs(U[i, j])
        if j < k:
            V[:, j] /= ph
    for j in range(k, V.shape[1]):
        i = int(np.argmax(np.abs(V[:, j])))
        ph = V[i, j] / abs(V[i, j])
        V[:, j] /= ph
        V[i, j] = abs(V[i, j])
    return U, V


def svd(A, tol_policy=None):
    """Full singular value decomposition by one-sided Jacobi rotations.

    Parameters
    ----------
    A : array_like
        ``m x n`` real or complex matrix.
    tol_policy : TolerancePolicy, optional
        Rank cutoff rule; defaults to ``sigma_max * max(m, n) * eps``.

    Returns
    -------
    SvdFactorization
        ``U`` (m x m), ``sigma`` (length ``min(m, n)``, non-increasing),
        ``V`` (n x n), numerical rank ``r`` and the cutoff ``tol``.
    """
    A = as_matrix(A)
    m, n = A.shape
    if m == 0 or n == 0:
        raise ValueError("empty matrix")
    policy = tol_policy or DEFAULT_POLICY

    transposed = m < n
    B = A.conj().T if transposed else A
    p, q = B.shape
    C, J = _one_sided_jacobi(B)
    sigma = np.linalg.norm(C, axis=0)
    order = np.argsort(-sigma, kind="stable")
    sigma, C, J = sigma[order], C[:, order], J[:, order]

    # Columns with negligible norm carry no usable direction; complete instead.
    floor = sigma[0] * max(p, q) * EPS if sigma[0] > 0 else 0.0
    keep = int(np.sum(sigma > floor)) if sigma[0] > 0 else 0
    left = _complete_basis(C[:, :keep] / sigma[:keep], p)

    if transposed:
        U, V = J, left
    else:
        U, V = left, J
    k = min(m, n)
    U, V = _normalize_phase(U, V, k)

    cutoff = policy.cutoff(sigma[0], (m, n))
    r = int(np.sum(sigma > cutoff))
    return SvdFactorization(_frozen(U), _frozen_real(sigma), _frozen(V), r, cutoff)


def _frozen_real(a):
    a = np.array(a, dtype=np.float64)
    a.flags.writeable = False
    return a


def rank(A, tol_policy=None):
    return svd(A, tol_policy).r


def pinv(A, tol_policy=None):
    """Moore-Penrose pseudoinverse ``V Sigma^+ U^*``."""
    f = A if isinstance(A, SvdFactorization) else svd(A, tol_policy)
    r = f.r
    G = (f.V[:, :r] / f.sigma[:r]) @ f.U[:, :r].conj().T
    return _frozen(G)


def null_projector(A, side="domain", tol_policy=None):
    """Orthogonal projector onto ``N(A)`` (``side='domain'``) or ``N(A^*)``.

    Equal to ``I - A^+ A`` and ``I - A A^+`` respectively; built from the
    null-space singular vectors so the result is exactly Hermitian.
    """
    f = A if isinstance(A, SvdFactorization) else svd(A, tol_policy)
    if side == "domain":
        B = f.V_null
    elif side == "codomain":
        B = f.U_null
    else:
        raise ValueError("side must be 'domain' or 'codomain'")
    return _frozen(B @ B.conj().T)


def range_basis(A, tol_policy=None):
    """Orthonormal basis of the column space of ``A``."""
    f = A if isinstance(A, SvdFactorization) else svd(A, tol_policy)
    return f.U_range


def hermitian_eig(A, tol=1e-8):
    """Eigendecomposition of a Hermitian matrix by cyclic two-sided Jacobi.

    Returns ``(U, lam)`` with ``A = U diag(lam) U^*``.  Eigenvalues are
    ordered by descending magnitude, ties broken by descending sign.
    """
    A = as_matrix(A)
    n = A.shape[0]
    if A.shape[1] != n:
        raise ValueError("hermitian required: matrix is not square")
    scale = fro(A)
    if fro(A - A.conj().T) > tol * scale:
        raise ValueError("hermitian required")
    H = np.array((A + A.conj().T) / 2)
    U = np.eye(n, dtype=np.complex128)
    # rotations leave off-diagonal roundoff of order EPS * |H|; below that
    # an entry cannot be reduced further and is treated as zero
    tiny = EPS * max(scale, np.finfo(np.float64).tiny)
    for _ in range(_MAX_SWEEPS):
        rotated = False
        for P, Q in _round_robin(n):
            alpha = H[P, P].real
            beta = H[Q, Q].real
            gamma = H[P, Q]
            g = np.abs(gamma)
            active = (g > EPS * np.sqrt(np.abs(alpha * beta))) & (g > tiny)
            if not active.any():
                continue
            rotated = True
            P, Q = P[active], Q[active]
            c, s, ph = _jacobi_rotation(alpha[active], beta[active], gamma[active])
            _apply_right(H, P, Q, c, s, ph)
            # rows: H <- J^* H, i.e. the same rotation applied to columns of H^*
            Ht = H.conj().T
            _apply_right(Ht, P, Q, c, s, ph)
            H = Ht.conj().T
            _apply_right(U, P, Q, c, s, ph)
        if not rotated:
            break
    else:
        raise ArithmeticError("Jacobi eigensolver did not converge")
    lam = H.diagonal().real.copy()
    order = np.lexsort((-lam, -np.abs(lam)))
    return _frozen(U[:, order]), _frozen_real(lam[order])


def penrose_check(A, G, tol=1e-8):
    """The four Penrose conditions for ``G`` as a pseudoinverse of ``A``.

    Returns a tuple of booleans for ``AGA = A``, ``GAG = G``,
    ``(AG)^* = AG`` and ``(GA)^* = GA``; each residual is compared with
    ``tol * (1 + |A|_F) * (1 + |G|_F)``.
    """
    A = as_matrix(A, "A")
    G = as_matrix(G, "G")
    if G.shape != A.shape[::-1]:
        raise ValueError(f"shape mismatch: A is {A.shape}, G is {G.shape}")
    bound = tol * (1 + fro(A)) * (1 + fro(G))
    AG = A @ G
    GA = G @ A
    return (
        fro(AG @ A - A) <= bound,
        fro(GA @ G - G) <= bound,
        fro(AG.conj().T - AG) <= bound,
        fro(GA.conj().T - GA) <= bound,
    )
