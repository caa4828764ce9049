"""Reverse order law ``(AB)^+ = B^+ A^+`` and its equivalent criteria.

Four conditions are checked independently and must agree:

* the law itself;
* Greville's condition ``A^+ A B B^* A^* A B B^+ = B B^* A^* A``;
* ``AB (B^+ A^+) AB = (B^+ A^+)^+``;
* ``X = B^+ A^+`` solving ``X W W^* W X = W^*`` for ``W = AB``.

A check whose residual lands within a factor 10 of its threshold is
reported as indeterminate (``holds is None``).
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .identities import riccati_residual, riccati_scale
from .linalg import as_matrix, fro, pinv, svd as _svd
from .riccati import cluster_singular_values, decomposition_residuals

__all__ = [
    "CheckResult",
    "RolReport",
    "rol_holds",
    "greville_check",
    "tian37_check",
    "riccati_bplus_aplus_check",
    "range_equality_check",
    "full_column_rank",
    "rol_report",
]

INDETERMINATE_BAND = 10.0


@dataclass
class CheckResult:
    name: str
    residual: float
    scale: float
    tol: float

    @property
    def holds(self) -> Optional[bool]:
        bound = self.tol * self.scale
        if self.residual <= bound / INDETERMINATE_BAND:
            return True
        if self.residual > bound * INDETERMINATE_BAND:
            return False
        return None

    def to_dict(self):
        return {
            "residual": self.residual,
            "scale": self.scale,
            "tol": self.tol,
            "holds": self.holds,
        }


def _pair(A, B):
    A = as_matrix(A, "A")
    B = as_matrix(B, "B")
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"inner dimensions differ: A is {A.shape}, B is {B.shape}")
    return A, B


def _n(M):
    return 1 + fro(M)


def rol_holds(A, B, tol=1e-8):
    A, B = _pair(A, B)
    Ap, Bp = pinv(A), pinv(B)
    ABp = pinv(A @ B)
    scale = max(_n(ABp), _n(Ap) * _n(Bp))
    return CheckResult("rol", fro(ABp - Bp @ Ap), scale, tol)


def greville_check(A, B, tol=1e-8):
    A, B = _pair(A, B)
    Ap, Bp = pinv(A), pinv(B)
    As, Bs = A.conj().T, B.conj().T
    lhs = Ap @ A @ B @ Bs @ As @ A @ B @ Bp
    rhs = B @ Bs @ As @ A
    scale = _n(A) ** 3 * _n(B) ** 3 * _n(Ap) * _n(Bp)
    return CheckResult("greville", fro(lhs - rhs), scale, tol)


def tian37_check(A, B, tol=1e-8):
    A, B = _pair(A, B)
    AB = A @ B
    X = pinv(B) @ pinv(A)
    Xp = pinv(X)
    scale = _n(AB) ** 2 * _n(X) + _n(Xp)
    return CheckResult("tian37", fro(AB @ X @ AB - Xp), scale, tol)


def riccati_bplus_aplus_check(A, B, tol=1e-8, gap_tol=1e-8):
    """Does ``X = B^+ A^+`` solve the Riccati equation for ``W = AB``?

    Returns ``(result, extras)``.  When the equation holds, ``extras`` also
    records identity ``X W X = (AB)^+`` and whether the decomposition of
    ``X`` has identity blocks and a vanishing null part.
    """
    A, B = _pair(A, B)
    W = A @ B
    X = pinv(B) @ pinv(A)
    result = CheckResult(
        "riccati_bplus_aplus", riccati_residual(W, X), riccati_scale(W, X), tol
    )
    extras = {}
    if result.holds:
        Wp = pinv(W)
        extras["identity_ii"] = CheckResult(
            "identity_ii", fro(X @ W @ X - Wp), _n(X) ** 2 * _n(W) + _n(Wp), tol
        )
        fw = _svd(W)
        clusters = cluster_singular_values(fw, gap_tol)
        params, parts = decomposition_residuals(X, fw, clusters)
        D = params.block_diagonal()
        extras["d_is_identity"] = fro(D - np.eye(D.shape[0])) <= tol * _n(D)
        extras["null_part_zero"] = fro(params.y_free) <= tol * _n(X)
        extras["decomposition_residual"] = max(parts.values())
    return result, extras


def range_equality_check(A, B, tol=1e-8):
    """Do ``B^+ A^+`` and ``(AB)^+`` have the same column space?

    Compares the largest principal angle (in radians) with ``tol``.
    Returns ``(equal, largest_angle)``.
    """
    A, B = _pair(A, B)
    X = pinv(B) @ pinv(A)
    Y = pinv(A @ B)
    fx, fy = _svd(X), _svd(Y)
    if fx.r != fy.r:
        return False, float(np.pi / 2)
    if fx.r == 0:
        return True, 0.0
    Q1, Q2 = fx.U[:, : fx.r], fy.U[:, : fy.r]
    # sine of the largest angle is the norm of Q2 projected off span(Q1)
    resid = Q2 - Q1 @ (Q1.conj().T @ Q2)
    s = _svd(resid).sigma[0]
    angle = float(np.arcsin(min(1.0, s)))
    return angle <= tol, angle


def full_column_rank(A):
    """``A^+ A = I``, i.e. ``A`` injective and ``A^*`` surjective."""
    A = as_matrix(A, "A")
    return _svd(A).r == A.shape[1]


@dataclass
class RolReport:
    rol: CheckResult
    greville: CheckResult
    tian37: CheckResult
    riccati_bplus_aplus: CheckResult
    identity_i: CheckResult
    identity_ii: Optional[CheckResult]
    range_equal: bool
    largest_angle: float
    a_full_column_rank: bool
    extras: dict = field(default_factory=dict)

    @property
    def verdicts(self):
        return {
            "rol": self.rol.holds,
            "greville": self.greville.holds,
            "tian37": self.tian37.holds,
            "riccati_bplus_aplus": self.riccati_bplus_aplus.holds,
        }

    @property
    def indeterminate(self):
        return any(v is None for v in self.verdicts.values())

    @property
    def consistent(self):
        """The four decided verdicts agree (indeterminate ones are skipped)."""
        decided = {v for v in self.verdicts.values() if v is not None}
        return len(decided) <= 1

    @property
    def rol_holds(self):
        return self.rol.holds

    def to_dict(self):
        out = {
            "schema": 1,
            "rol": self.rol.to_dict(),
            "greville": self.greville.to_dict(),
            "tian37": self.tian37.to_dict(),
            "riccati_bplus_aplus": self.riccati_bplus_aplus.to_dict(),
            "identity_i": self.identity_i.to_dict(),
            "identity_ii": self.identity_ii.to_dict() if self.identity_ii else None,
            "range_equal": self.range_equal,
            "largest_principal_angle": self.largest_angle,
            "a_full_column_rank": self.a_full_column_rank,
            "consistent": self.consistent,
            "indeterminate": self.indeterminate,
        }
        out.update(self.extras)
        return out


def rol_report(A, B, tol=1e-8, gap_tol=1e-8):
    A, B = _pair(A, B)
    ric, extras = riccati_bplus_aplus_check(A, B, tol, gap_tol)
    t37 = tian37_check(A, B, tol)
    identity_i = CheckResult("identity_i", t37.residual, t37.scale, tol)
    equal, angle = range_equality_check(A, B, tol)
    return RolReport(
        rol=rol_holds(A, B, tol),
        greville=greville_check(A, B, tol),
        tian37=t37,
        riccati_bplus_aplus=ric,
        identity_i=identity_i,
        identity_ii=extras.pop("identity_ii", None),
        range_equal=equal,
        largest_angle=angle,
        a_full_column_rank=full_column_rank(A),
        extras=extras,
    )
