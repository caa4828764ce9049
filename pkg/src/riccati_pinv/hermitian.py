"""Hermitian solutions for Hermitian ``W``: maximal and stabilizing ones.

With ``W = U diag(lam) U^*`` the sign solutions are
``X = U diag(lam)^{-1} D U^*`` with ``D = +/-I`` on each cluster of equal
``|lam|``.  ``X = W^{-1}`` is the all-plus member.  For indefinite ``W`` the
Loewner-maximal member of that family is ``|W|^{-1}`` rather than
``W^{-1}``; both are reported and the mismatch is flagged.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .identities import riccati_residual, riccati_scale
from .linalg import as_matrix, fro, hermitian_eig
from .riccati import MAX_ENUMERATION_CLUSTERS, sign_patterns

__all__ = [
    "HermitianSolutionSet",
    "HermitianParamCheck",
    "hermitian_solutions",
    "loewner_leq",
    "stabilizing_check",
    "hermitian_param_check",
]

log = logging.getLogger(__name__)


def _require_hermitian(A, tol, name="matrix"):
    A = as_matrix(A, name)
    if A.shape[0] != A.shape[1] or fro(A - A.conj().T) > tol * max(fro(A), 1e-300):
        raise ValueError(f"hermitian required: {name}")
    return A


def _abs_clusters(lam, gap_tol):
    """Group eigenvalue indices (already sorted by descending ``|lam|``)."""
    groups = []
    head = None
    for i, x in enumerate(np.abs(lam)):
        if head is not None and x >= head * (1 - gap_tol):
            groups[-1].append(i)
        else:
            head = x
            groups.append([i])
    return groups


@dataclass
class HermitianSolutionSet:
    eig_u: np.ndarray
    eig_lambda: np.ndarray
    clusters: List[List[int]]
    patterns: List[tuple]
    sign_solutions: List[np.ndarray]
    maximal: Optional[np.ndarray]
    maximal_index: Optional[int]
    loewner_certificates: List[float]
    inverse: np.ndarray
    stabilizing: List[bool]
    mixed_sign_clusters: bool
    tol: float
    notes: List[str] = field(default_factory=list)

    @property
    def inverse_is_maximal(self):
        if self.maximal is None:
            return False
        return fro(self.maximal - self.inverse) <= self.tol * (1 + fro(self.inverse))

    @property
    def convention_discrepancy(self):
        """The Loewner-maximal sign solution is not ``W^{-1}``."""
        return not self.inverse_is_maximal

    def to_dict(self):
        def mat(A):
            return None if A is None else _matrix_json(A)

        return {
            "schema": 1,
            "eigenvalues": [float(x) for x in self.eig_lambda],
            "clusters": self.clusters,
            "solutions": [
                {
                    "pattern": "".join("+" if s > 0 else "-" for s in p),
                    "X": mat(X),
                    "stabilizing": bool(st),
                    "loewner_certificate": float(c),
                }
                for p, X, st, c in zip(
                    self.patterns,
                    self.sign_solutions,
                    self.stabilizing,
                    self.loewner_certificates,
                )
            ],
            "maximal": mat(self.maximal),
            "maximal_pattern": (
                None
                if self.maximal_index is None
                else "".join("+" if s > 0 else "-" for s in self.patterns[self.maximal_index])
            ),
            "inverse": mat(self.inverse),
            "inverse_is_maximal": self.inverse_is_maximal,
            "convention_discrepancy": self.convention_discrepancy,
            "mixed_sign_clusters": self.mixed_sign_clusters,
            "notes": list(self.notes),
        }


def _matrix_json(A):
    return [[{"re": float(z.real), "im": float(z.imag)} for z in row] for row in A]


def loewner_leq(A, B, tol=1e-8):
    """``A <= B`` in the Loewner order: ``B - A`` is positive semidefinite."""
    A = _require_hermitian(A, tol, "A")
    B = _require_hermitian(B, tol, "B")
    if A.shape != B.shape:
        raise ValueError("shape mismatch")
    _, lam = hermitian_eig(B - A, tol=max(tol, 1e-12))
    return bool(lam.min() >= -tol * (1 + fro(A) + fro(B)))


def _min_eig(A):
    _, lam = hermitian_eig((A + A.conj().T) / 2)
    return float(lam.min())


def hermitian_solutions(W, tol=1e-8, gap_tol=1e-8):
    """Enumerate the Hermitian sign solutions of invertible Hermitian ``W``.

    Also finds the Loewner-maximal member by pairwise comparison and checks
    each member for the stabilizing property.
    """
    W = _require_hermitian(W, tol, "W")
    U, lam = hermitian_eig(W, tol)
    if abs(lam[-1]) <= tol * abs(lam[0]):
        raise ValueError("invertible required")
    groups = _abs_clusters(lam, gap_tol)
    if len(groups) > MAX_ENUMERATION_CLUSTERS:
        raise ValueError("enumeration too large")
    mixed = any(len({np.sign(lam[i]) for i in g}) > 1 for g in groups)
    notes = []
    if mixed:
        msg = "cluster of equal |lambda| contains both signs; only +/-I blocks enumerated"
        log.warning(msg)
        notes.append(msg)

    patterns = sign_patterns(len(groups))
    sols = []
    for p in patterns:
        d = np.empty(len(lam))
        for sgn, g in zip(p, groups):
            d[g] = sgn
        X = (U * (d / lam)) @ U.conj().T
        sols.append((X + X.conj().T) / 2)

    # All members share the eigenbasis of W, so the entrywise largest d / lam
    # is the only possible maximum.  Try it first, then certify it against
    # every member with a genuine eigenvalue computation.
    guess = max(
        range(len(patterns)),
        key=lambda i: tuple(sgn / abs(lam[g[0]]) * np.sign(lam[g[0]]) for sgn, g in zip(patterns[i], groups)),
    )
    order = [guess] + [i for i in range(len(sols)) if i != guess]
    maximal_index = None
    certs = []
    for i in order:
        c = [_min_eig(sols[i] - Xj) for Xj in sols]
        if min(c) >= -tol * (1 + fro(sols[i])):
            maximal_index = i
            certs = c
            break
    maximal = None if maximal_index is None else sols[maximal_index]
    if maximal is None:
        notes.append("no Loewner-maximal sign solution")
        certs = [float("nan")] * len(sols)

    inverse = (U / lam) @ U.conj().T
    stab = [stabilizing_check(W, X, tol, _eig=(U, lam))[0] for X in sols]
    return HermitianSolutionSet(
        eig_u=U,
        eig_lambda=lam,
        clusters=groups,
        patterns=patterns,
        sign_solutions=sols,
        maximal=maximal,
        maximal_index=maximal_index,
        loewner_certificates=certs,
        inverse=(inverse + inverse.conj().T) / 2,
        stabilizing=stab,
        mixed_sign_clusters=mixed,
        tol=tol,
        notes=notes,
    )


def stabilizing_check(W, X, tol=1e-8, gap_tol=1e-8, _eig=None):
    """Is ``-W^3 X`` asymptotically stable?

    Uses ``X = U lam^{-1} D U^* -> -W^3 X = -U lam^2 D U^*``: the spectrum is
    ``-lam_c^2`` times the eigenvalues of each cluster block of ``D``.  An
    eigenvalue counts as negative when below ``-tol * lam_c^2``.

    Returns ``(stable, eigenvalues)``.
    """
    W = _require_hermitian(W, tol, "W")
    X = as_matrix(X, "X")
    if X.shape != W.shape:
        raise ValueError("shape mismatch")
    if fro(X - X.conj().T) > tol * (1 + fro(X)) or riccati_residual(
        W, X
    ) > tol * riccati_scale(W, X):
        raise ValueError("not a hermitian solution")
    U, lam = _eig if _eig is not None else hermitian_eig(W, tol)
    if abs(lam[-1]) <= tol * abs(lam[0]):
        raise ValueError("invertible required")
    D = lam[:, None] * (U.conj().T @ X @ U)
    eigs = []
    stable = True
    for g in _abs_clusters(lam, gap_tol):
        block = D[np.ix_(g, g)]
        _, d = hermitian_eig((block + block.conj().T) / 2, tol=max(tol, 1e-6))
        lam2 = float(np.mean(lam[g] ** 2))
        for x in d:
            e = -lam2 * x
            eigs.append(e)
            stable &= e < -tol * lam2
    return bool(stable), sorted(eigs)


@dataclass
class HermitianParamCheck:
    """``X = X^*`` versus ``D = D^*`` plus a Hermitian null-space part."""

    x_hermitian: bool
    d_hermitian: bool
    null_hermitian: bool

    @property
    def holds(self):
        return self.x_hermitian == (self.d_hermitian and self.null_hermitian)

    def __bool__(self):
        return self.holds


def hermitian_param_check(X, W, tol=1e-8):
    """Check ``X = X^*  <=>  D = D^*  and  P (Y - Y^*) P = 0`` for Hermitian ``W``.

    ``W`` may be singular.  ``D`` is read off in the eigenbasis of ``W``:
    ``D = lam U^* X U`` on the nonzero eigenvalues.
    """
    W = _require_hermitian(W, tol, "W")
    X = as_matrix(X, "X")
    if X.shape != W.shape:
        raise ValueError("shape mismatch")
    U, lam = hermitian_eig(W, tol)
    cutoff = abs(lam[0]) * W.shape[0] * np.finfo(float).eps
    r = int(np.sum(np.abs(lam) > cutoff))
    Ur, U0 = U[:, :r], U[:, r:]
    D = lam[:r, None] * (Ur.conj().T @ X @ Ur)
    null = X - (Ur / lam[:r]) @ D @ Ur.conj().T
    null = U0 @ (U0.conj().T @ null @ U0) @ U0.conj().T
    scale = 1 + fro(X)
    return HermitianParamCheck(
        x_hermitian=fro(X - X.conj().T) <= tol * scale,
        d_hermitian=fro(D - D.conj().T) <= tol * (1 + fro(D)),
        null_hermitian=fro(null - null.conj().T) <= tol * scale,
    )
