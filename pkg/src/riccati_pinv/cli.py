"""Command-line interface.

Exit codes: 0 success, 1 an identity failed, 2 usage or validation error,
3 file could not be read or parsed.
"""

import argparse
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import experiments
from .hermitian import hermitian_solutions
from .identities import verify_solution
from .linalg import fro, svd as _svd
from .matrix_io import FORMATS, MatrixParseError, dumps, guess_format, read_matrix, write_matrix
from .reverse_order import rol_report
from .riccati import (
    SolutionParams,
    MAX_ENUMERATION_CLUSTERS,
    cluster_singular_values,
    construct_solution,
    enumerate_sign_solutions,
    family_dimension,
    quoted_family_dimension,
    random_involution,
    sign_patterns,
)
from .schur import eigenstructure_report

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
TOL_ENV = "RICCATI_PINV_TOL"


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    tol: float = 1e-8
    seed: int = 0
    gap_tol: float = 1e-8
    output: str = "human"
    fmt: str = None

    def __post_init__(self):
        if not self.tol > 0:
            raise UsageError("--tol must be positive")
        if not self.gap_tol >= 0:
            raise UsageError("--gap-tol must be nonnegative")
        if not 0 <= self.seed < 2**64:
            raise UsageError("--seed must be an unsigned 64-bit integer")


def _default_tol():
    raw = os.environ.get(TOL_ENV)
    if raw is None:
        return 1e-8
    try:
        return float(raw)
    except ValueError:
        raise UsageError(f"{TOL_ENV}={raw!r} is not a number") from None


def _load(path, cfg, name):
    try:
        return read_matrix(path, guess_format(path, cfg.fmt))
    except (OSError, MatrixParseError) as exc:
        raise _IOFailure(f"cannot read {name} from {path}: {exc}") from exc


class _IOFailure(Exception):
    pass


def _emit(payload, cfg, human_lines, out=None):
    out = out or sys.stdout
    if cfg.output == "json":
        out.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        out.write("\n".join(human_lines) + "\n")


def _report_lines(rep):
    lines = []
    for e in rep.entries:
        flag = "PASS" if e.passed else "FAIL"
        lines.append(f"{e.name:24s} residual={e.residual:.3e} scale={e.scale:.3e} {flag}")
    for k, v in rep.info.items():
        lines.append(f"{k:24s} {v:.6g}")
    lines.append("overall " + ("PASS" if rep.passed else "FAIL"))
    return lines


def _parse_pattern(text, t):
    table = {"+": 1, "p": 1, "-": -1, "m": -1}
    try:
        signs = [table[c] for c in text.strip()]
    except KeyError:
        raise UsageError(f"sign pattern {text!r} may only contain + - p m") from None
    if len(signs) != t:
        raise UsageError(f"sign pattern has length {len(signs)}, W has t={t} clusters")
    return signs


def _matrix_payload(A):
    return json.loads(dumps(A, "json-complex"))


# commands --------------------------------------------------------------------


def cmd_solve(args, cfg):
    W = _load(args.W, cfg, "W")
    m, n = W.shape
    f = _svd(W)
    clusters = cluster_singular_values(f, cfg.gap_tol)
    mode, *rest = args.mode
    if mode == "pinv":
        blocks = [np.eye(s) for s in clusters.multiplicities]
    elif mode == "signs":
        if len(rest) != 1:
            raise UsageError("--mode signs needs one pattern, e.g. --mode signs +-")
        signs = _parse_pattern(rest[0], clusters.t)
        blocks = [sg * np.eye(s) for sg, s in zip(signs, clusters.multiplicities)]
    elif mode == "random":
        rng = experiments.rng_for(cfg.seed)
        seeds = rng.integers(0, 2**63, size=max(clusters.t, 1))
        blocks = [
            random_involution(s, seed=int(sd))
            for s, sd in zip(clusters.multiplicities, seeds)
        ]
    else:
        raise UsageError(f"unknown mode {mode!r}; use pinv, signs or random")
    if mode != "signs" and rest:
        raise UsageError(f"mode {mode} takes no pattern")

    if args.Y:
        Y = _load(args.Y, cfg, "Y")
        if Y.shape != (n, m):
            raise UsageError(f"Y must be {n}x{m}, got {Y.shape[0]}x{Y.shape[1]}")
    elif mode == "random":
        Y = experiments.rng_for(cfg.seed + 1).random((n, m))
    else:
        Y = np.zeros((n, m))

    X = construct_solution(f, clusters, SolutionParams(blocks, Y), cfg.tol)
    rep = verify_solution(W, X, cfg.tol)
    if args.out:
        write_matrix(args.out, X, guess_format(args.out, cfg.fmt))
    payload = {"report": rep.to_dict(), "X": _matrix_payload(X)}
    lines = _report_lines(rep)
    if not args.out:
        lines = ["X ="] + [np.array2string(np.real_if_close(X), precision=6)] + lines
    _emit(payload, cfg, lines)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_verify(args, cfg):
    W = _load(args.W, cfg, "W")
    X = _load(args.X, cfg, "X")
    if X.shape != W.shape[::-1]:
        raise UsageError(f"shape mismatch: W is {W.shape}, X is {X.shape}")
    rep = verify_solution(W, X, cfg.tol)
    _emit(rep.to_dict(), cfg, _report_lines(rep))
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_enumerate(args, cfg):
    W = _load(args.W, cfg, "W")
    m, n = W.shape
    f = _svd(W)
    clusters = cluster_singular_values(f, cfg.gap_tol)
    if clusters.t > MAX_ENUMERATION_CLUSTERS:
        raise UsageError(f"enumeration too large: t={clusters.t} > {MAX_ENUMERATION_CLUSTERS}")
    sols = enumerate_sign_solutions(f, clusters)
    patterns = ["".join("+" if s > 0 else "-" for s in p) for p in sign_patterns(clusters.t)]
    fmt = cfg.fmt or "json-complex"
    ext = {"json-complex": ".json", "csv-real": ".csv", "matrix-market-array": ".mtx"}[fmt]
    outdir = args.out or "."
    os.makedirs(outdir, exist_ok=True)
    files = {}
    for i, (p, X) in enumerate(zip(patterns, sols)):
        name = f"X_{i:04d}_{p.replace('+', 'p').replace('-', 'm') or 'empty'}{ext}"
        write_matrix(os.path.join(outdir, name), X, fmt)
        files[p] = name
    dists = [fro(a - b) for i, a in enumerate(sols) for b in sols[i + 1 :]]
    manifest = {
        "schema": 1,
        "shape": [m, n],
        "rank": f.r,
        "clusters": {"values": list(clusters.values), "multiplicities": list(clusters.multiplicities)},
        "count": len(sols),
        "files": files,
        "min_pairwise_distance": min(dists) if dists else None,
        "family_dimension": family_dimension(f),
        "quoted_family_dimension": quoted_family_dimension(m, n, f.r),
    }
    with open(os.path.join(outdir, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    lines = [f"{len(sols)} sign solutions written to {outdir}"]
    lines += [f"  {p or '(none)'} -> {name}" for p, name in files.items()]
    lines.append(
        f"family dimension (image of Y -> P Y P): {manifest['family_dimension']}; "
        f"stated count r(m+n-r): {manifest['quoted_family_dimension']}"
    )
    _emit(manifest, cfg, lines)
    return EXIT_OK


def _rol_lines(rep):
    lines = []
    for name, v in rep.verdicts.items():
        res = getattr(rep, name)
        word = {True: "holds", False: "fails", None: "indeterminate"}[v]
        lines.append(f"{name:22s} residual={res.residual:.3e} {word}")
    lines.append(f"range_equal            {rep.range_equal} (largest angle {rep.largest_angle:.3e} rad)")
    lines.append(f"A full column rank     {rep.a_full_column_rank}")
    lines.append("four-way consistent    " + str(rep.consistent))
    return lines


def cmd_rol(args, cfg):
    A = _load(args.A, cfg, "A")
    B = _load(args.B, cfg, "B")
    if A.shape[1] != B.shape[0]:
        raise UsageError(f"inner dimensions differ: A is {A.shape}, B is {B.shape}")
    rep = rol_report(A, B, cfg.tol, cfg.gap_tol)
    _emit(rep.to_dict(), cfg, _rol_lines(rep))
    return EXIT_OK if rep.consistent else EXIT_FAIL


def cmd_spectrum(args, cfg):
    W = _load(args.W, cfg, "W")
    rep = eigenstructure_report(W, cfg.tol, cfg.gap_tol)
    d = rep.to_dict()
    d["schema"] = 1
    lines = ["eigenvalues of M: " + ", ".join(f"{x:.6g}" for x in rep.eigenvalues)]
    lines.append(f"kernel dimension {rep.kernel_dim}, verified eigenvectors {rep.eigenvector_count}")
    lines.append("diagonalizable: " + str(rep.diagonalizable))
    _emit(d, cfg, lines)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_hermitian(args, cfg):
    W = _load(args.W, cfg, "W")
    try:
        hs = hermitian_solutions(W, cfg.tol, cfg.gap_tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    d = hs.to_dict()
    lines = [f"eigenvalues: {', '.join(f'{x:.6g}' for x in hs.eig_lambda)}"]
    for sol in d["solutions"]:
        lines.append(
            f"  {sol['pattern']:>8s} stabilizing={sol['stabilizing']} "
            f"min eig(maximal - X)={sol['loewner_certificate']:.3e}"
        )
    lines.append(f"maximal pattern: {d['maximal_pattern']}")
    lines.append(f"W^-1 is maximal: {hs.inverse_is_maximal}")
    if hs.convention_discrepancy:
        lines.append("convention discrepancy: Loewner-maximal solution differs from W^-1")
    lines.extend(hs.notes)
    _emit(d, cfg, lines)
    return EXIT_OK


def cmd_replicate(args, cfg):
    res = experiments.run_listing(args.listing, cfg.seed, cfg.tol, cfg.gap_tol)
    if args.listing == 1:
        rep = res["report"]
        payload = {
            "schema": 1,
            "listing": 1,
            "seed": cfg.seed,
            "signs": res["signs"],
            "summed_residual": res["summed_residual"],
            "report": rep.to_dict(),
        }
        lines = [f"signs {res['signs']}", f"summed residual {res['summed_residual']:.3e}"]
        lines += _report_lines(rep)
        ok = rep.passed
        mats = {"W": res["W"], "X": res["X"]}
    else:
        rep = res["report"]
        payload = {"schema": 1, "listing": args.listing, "seed": cfg.seed, "report": rep.to_dict()}
        lines = _rol_lines(rep)
        ok = rep.consistent
        mats = {"A": res["A"], "B": res["B"]}
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        fmt = cfg.fmt or "json-complex"
        ext = {"json-complex": ".json", "csv-real": ".csv", "matrix-market-array": ".mtx"}[fmt]
        for k, v in mats.items():
            write_matrix(os.path.join(args.out, k + ext), v, fmt)
    _emit(payload, cfg, lines)
    return EXIT_OK if ok else EXIT_FAIL


# parser ----------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="identity tolerance (default 1e-8)")
    common.add_argument("--gap-tol", type=float, default=1e-8, help="singular value cluster gap")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", dest="fmt", choices=FORMATS, default=None)
    common.add_argument("--output", choices=("human", "json"), default="human")
    common.add_argument("--out", default=None, help="output file or directory")

    p = argparse.ArgumentParser(
        prog="riccati-pinv",
        description="Solve and verify X W W* W X = W* and related pseudoinverse identities.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", parents=[common], help="build a solution X")
    s.add_argument("W")
    s.add_argument("--mode", nargs="+", default=["pinv"], metavar="MODE",
                   help="pinv | signs PATTERN | random")
    s.add_argument("--Y", default=None, help="free n x m matrix for the null-space part")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("verify", parents=[common], help="check a candidate X")
    s.add_argument("W")
    s.add_argument("X")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("enumerate", parents=[common], help="write all sign solutions")
    s.add_argument("W")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("rol", parents=[common], help="reverse order law report for A, B")
    s.add_argument("A")
    s.add_argument("B")
    s.set_defaults(func=cmd_rol)

    s = sub.add_parser("spectrum", parents=[common], help="eigenstructure of the block matrix M")
    s.add_argument("W")
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("hermitian", parents=[common], help="Hermitian, maximal, stabilizing solutions")
    s.add_argument("W")
    s.set_defaults(func=cmd_hermitian)

    s = sub.add_parser("replicate", parents=[common], help="seeded replication of a listing")
    s.add_argument("listing", type=int, choices=(1, 2, 3))
    s.set_defaults(func=cmd_replicate)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        tol = args.tol if args.tol is not None else _default_tol()
        cfg = RunConfig(tol=tol, seed=args.seed, gap_tol=args.gap_tol,
                        output=args.output, fmt=args.fmt)
        return args.func(args, cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _IOFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
