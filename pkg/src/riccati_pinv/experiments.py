"""Three seeded random scenarios ("listings") used for replication runs.

Entries are uniform on ``[0, 1)``; low-rank factors are built as products
``rand(m, k) @ rand(k, n)``.  Only the distribution matters, not any
particular random stream.
"""

import numpy as np

from .identities import verify_solution
from .linalg import svd as _svd
from .reverse_order import rol_report
from .riccati import SolutionParams, cluster_singular_values, construct_solution

__all__ = ["rng_for", "listing1", "listing2_pair", "listing3_pair"]


def rng_for(seed):
    return np.random.default_rng(np.random.SeedSequence(seed))


def listing1(seed, m=10, n=15, k=7, tol=1e-8, gap_tol=1e-8):
    """Random rank-``k`` ``W``, random sign pattern and random ``Y``.

    Returns a dict with ``W``, ``X``, ``signs``, the verification report and
    the summed residual of the four main identities.
    """
    rng = rng_for(seed)
    W = rng.random((m, k)) @ rng.random((k, n))
    f = _svd(W)
    clusters = cluster_singular_values(f, gap_tol)
    signs = 2 * rng.integers(0, 2, size=clusters.t) - 1
    Y = rng.random((n, m))
    blocks = [s * np.eye(mult) for s, mult in zip(signs, clusters.multiplicities)]
    X = construct_solution(f, clusters, SolutionParams(blocks, Y), tol)
    rep = verify_solution(W, X, tol)
    summed = sum(
        rep[name].residual
        for name in ("riccati", "xwx_pinv", "xw_tripotent", "wx_tripotent")
    )
    negatives = int(sum(mult for s, mult in zip(signs, clusters.multiplicities) if s < 0))
    return {
        "W": W,
        "X": X,
        "signs": [int(s) for s in signs],
        "negatives": negatives,
        "rank": f.r,
        "report": rep,
        "summed_residual": summed,
    }


def listing2_pair(seed):
    """``A = rand(5,2) rand(2,9)``, ``B = rand(9,3) rand(3,8)``."""
    rng = rng_for(seed)
    A = rng.random((5, 2)) @ rng.random((2, 9))
    B = rng.random((9, 3)) @ rng.random((3, 8))
    return A, B


def listing3_pair(seed):
    """``A = rand(10,9)``, ``B = rand(9,2) rand(2,5)``."""
    rng = rng_for(seed)
    A = rng.random((10, 9))
    B = rng.random((9, 2)) @ rng.random((2, 5))
    return A, B


def run_listing(which, seed, tol=1e-8, gap_tol=1e-8):
    if which == 1:
        return listing1(seed, tol=tol, gap_tol=gap_tol)
    pair = {2: listing2_pair, 3: listing3_pair}[which](seed)
    return {"A": pair[0], "B": pair[1], "report": rol_report(*pair, tol=tol, gap_tol=gap_tol)}
