"""Residual checks for the identities every Riccati solution satisfies."""

from dataclasses import dataclass, field
from typing import Dict, List

from .linalg import as_matrix, fro, penrose_check, pinv, svd as _svd
from .riccati import cluster_singular_values, decomposition_residuals

__all__ = [
    "ReportEntry",
    "VerificationReport",
    "VerdictDisagreement",
    "riccati_residual",
    "riccati_scale",
    "verify_solution",
    "classify_lowest_rank",
    "equivalence_check",
    "rank_chain_check",
]

SCHEMA_VERSION = 1


class VerdictDisagreement(ArithmeticError):
    """Conditions that must be equivalent came out different."""


@dataclass
class ReportEntry:
    name: str
    residual: float
    scale: float
    tol: float

    @property
    def passed(self):
        return self.residual <= self.tol * self.scale

    def to_dict(self):
        return {
            "residual": self.residual,
            "scale": self.scale,
            "tol": self.tol,
            "pass": self.passed,
        }


@dataclass
class VerificationReport:
    entries: List[ReportEntry] = field(default_factory=list)
    info: Dict[str, float] = field(default_factory=dict)

    def add(self, name, residual, scale, tol):
        self.entries.append(ReportEntry(name, float(residual), float(scale), tol))

    def __getitem__(self, name):
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    @property
    def passed(self):
        return all(e.passed for e in self.entries)

    def to_dict(self):
        out = {"schema": SCHEMA_VERSION}
        for e in self.entries:
            out[e.name] = e.to_dict()
        if self.info:
            out["info"] = dict(self.info)
        out["pass"] = self.passed
        return out


def _pair(W, X):
    W = as_matrix(W, "W")
    X = as_matrix(X, "X")
    if X.shape != W.shape[::-1]:
        raise ValueError(f"shape mismatch: W is {W.shape}, X is {X.shape}")
    return W, X


def riccati_residual(W, X):
    """``|X W W^* W X - W^*|_F``."""
    W, X = _pair(W, X)
    Ws = W.conj().T
    return fro(X @ W @ Ws @ W @ X - Ws)


def riccati_scale(W, X):
    return (1 + fro(W)) ** 3 * (1 + fro(X)) ** 2


def verify_solution(W, X, tol=1e-8):
    """Residuals of the Riccati equation and its five corollaries.

    Entries: ``riccati``, ``xwx_pinv`` (``XWX = W^+``), ``wx_squared_projector``
    (``(WX)^2 = W W^+``), ``xw_squared_projector`` (``(XW)^2 = W^+ W``),
    ``wx_tripotent`` and ``xw_tripotent``.  ``info`` carries the
    idempotency defects ``|(WX)^2 - WX|`` and ``|(XW)^2 - XW|``, which are
    informational only.
    """
    W, X = _pair(W, X)
    Wp = pinv(W)
    WX = W @ X
    XW = X @ W
    nw, nx = 1 + fro(W), 1 + fro(X)
    WX2, XW2 = WX @ WX, XW @ XW

    rep = VerificationReport()
    rep.add("riccati", riccati_residual(W, X), riccati_scale(W, X), tol)
    rep.add("xwx_pinv", fro(X @ W @ X - Wp), nx * nx * nw + (1 + fro(Wp)), tol)
    rep.add("wx_squared_projector", fro(WX2 - W @ Wp), (nw * nx) ** 2, tol)
    rep.add("xw_squared_projector", fro(XW2 - Wp @ W), (nw * nx) ** 2, tol)
    rep.add("wx_tripotent", fro(WX2 @ WX - WX), (nw * nx) ** 3, tol)
    rep.add("xw_tripotent", fro(XW2 @ XW - XW), (nw * nx) ** 3, tol)
    rep.info["wx_idempotency_defect"] = fro(WX2 - WX)
    rep.info["xw_idempotency_defect"] = fro(XW2 - XW)
    return rep


def classify_lowest_rank(W, X, tol=1e-8, gap_tol=1e-8):
    """Decide whether a solution has the lowest possible rank, three ways.

    (a) ``WXW`` passes the Penrose conditions as a pseudoinverse of ``X``;
    (b) ``rank X = rank W`` and ``R(X) = R(W^*)``;
    (c) the null-space part of the decomposition vanishes.

    Returns ``(verdict, details)``.  Raises ``ValueError("not a solution")``
    if ``X`` fails the Riccati check and :class:`VerdictDisagreement` if the
    three conditions disagree.
    """
    W, X = _pair(W, X)
    if not verify_solution(W, X, tol)["riccati"].passed:
        raise ValueError("not a solution")
    fw = _svd(W)
    scale = (1 + fro(W)) * (1 + fro(X))

    penrose = penrose_check(X, W @ X @ W, tol)
    cond_a = all(penrose)

    range_proj = fw.V[:, : fw.r] @ fw.V[:, : fw.r].conj().T
    range_res = fro(range_proj @ X - X)
    cond_b = _svd(X).r == fw.r and range_res <= tol * scale

    clusters = cluster_singular_values(fw, gap_tol)
    params, _ = decomposition_residuals(X, fw, clusters)
    null_norm = fro(params.y_free)
    cond_c = null_norm <= tol * scale

    details = {
        "penrose": penrose,
        "wxw_is_pinv_of_x": cond_a,
        "range_equal": cond_b,
        "range_residual": range_res,
        "null_part_zero": cond_c,
        "null_part_norm": null_norm,
    }
    if not cond_a == cond_b == cond_c:
        raise VerdictDisagreement(f"lowest-rank conditions disagree: {details}")
    return cond_a, details


def equivalence_check(W, X, tol=1e-8):
    """``(riccati holds, XWX = W^+ holds)``, each judged independently."""
    W, X = _pair(W, X)
    ric = riccati_residual(W, X) <= tol * riccati_scale(W, X)
    Wp = pinv(W)
    fixed = fro(X @ W @ X - Wp) <= tol * ((1 + fro(X)) ** 2 * (1 + fro(W)) + 1 + fro(Wp))
    return ric, fixed


def rank_chain_check(A, B, tol_policy=None):
    """``rank(B^+ A^+) = rank(AB) = rank((AB)^*) = rank((AB)^+)``."""
    A = as_matrix(A, "A")
    B = as_matrix(B, "B")
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"inner dimensions differ: A is {A.shape}, B is {B.shape}")
    AB = A @ B
    ranks = {
        "bplus_aplus": _svd(pinv(B, tol_policy) @ pinv(A, tol_policy), tol_policy).r,
        "ab": _svd(AB, tol_policy).r,
        "ab_adjoint": _svd(AB.conj().T, tol_policy).r,
        "ab_pinv": _svd(pinv(AB, tol_policy), tol_policy).r,
    }
    ranks["pass"] = len(set(ranks.values())) == 1
    return ranks
