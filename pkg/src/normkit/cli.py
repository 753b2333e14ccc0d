"""Command line front end: ``normkit <command> ...``.

Reports are JSON on stdout. Matrices are read from MatrixFile JSON or
Matrix Market array files and written as MatrixFile JSON.

Exit codes: 0 ok, 1 numerical failure, 2 I/O or parse error, 3 shape or
precondition error, 4 infeasible construction, 5 failed check.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import illustrations
from .augment import augment1, block_identity_residuals, predict_augment1_spectrum, quad_augment
from .core import (
    InfeasibleError,
    NumericalError,
    PreconditionError,
    ShapeError,
    Tolerance,
    as_cmatrix,
    is_normal,
    normality_defect,
)
from .curve import (
    PolyCurve,
    RealPolynomial,
    curve_identity_residual,
    interpolation_nodes,
    krylov_pi,
    lagrange_pi,
)
from .io import (
    MatrixFormatError,
    complex_pair,
    loads_matrix,
    parse_complex,
    parse_reals,
    read_matrix,
    trajectory_csv,
    write_matrix,
)
from .perturb import (
    Rank1Perturbation,
    build_rank1,
    combined_perturbation,
    decompose_rank_k,
    path_deviation,
    predict_rank1_spectrum,
    trajectory,
    validate_rank1,
)
from .spectral import feasible_theta, group_on_line, match_spectra, normal_eig
from .toeplitz import canonical_direction, essentially_hermitian, unimodular

EXIT_NUMERICAL = 1
EXIT_IO = 2
EXIT_PRECONDITION = 3
EXIT_INFEASIBLE = 4
EXIT_CHECK = 5


def _pairs(values) -> list[list[float]]:
    return [complex_pair(z) for z in np.asarray(values).reshape(-1)]


def _emit(report: dict) -> None:
    print(json.dumps(report, indent=2, sort_keys=True))


def _warn(msg: str) -> None:
    print(f"normkit: {msg}", file=sys.stderr)


def _tolerance(args) -> Tolerance:
    if args.tol:
        parts = parse_reals(args.tol)
        if len(parts) == 1:
            parts *= 3
        if len(parts) != 3:
            raise ValueError("--tol takes 1 or 3 comma separated numbers")
        return Tolerance(*parts)
    return Tolerance.from_env()


def _read_vector(path) -> np.ndarray:
    """A JSON list of ``[re, im]`` pairs (or plain numbers), or a one-column MatrixFile."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise MatrixFormatError(f"cannot read {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(f"invalid JSON in {path}: {exc}") from None
    if isinstance(doc, dict):
        return loads_matrix(text).reshape(-1)
    if not isinstance(doc, list):
        raise MatrixFormatError(f"{path}: expected a list of [re, im] pairs")
    vals = []
    for item in doc:
        if isinstance(item, list) and len(item) == 2:
            vals.append(complex(float(item[0]), float(item[1])))
        elif isinstance(item, (int, float)) and not isinstance(item, bool):
            vals.append(complex(item))
        else:
            raise MatrixFormatError(f"{path}: bad vector entry {item!r}")
    return np.array(vals, dtype=np.complex128)


def _theta_arg(text: str) -> complex:
    return unimodular(parse_complex(text))


def _coeffs(args) -> np.ndarray:
    vals = [parse_complex(c) for c in (args.coeff or [])]
    if args.coeffs:
        vals.extend(_read_vector(args.coeffs))
    return np.array(vals, dtype=np.complex128)


def _plot_path(out: str | None, plot: str | None, suffix: str) -> str | None:
    if plot:
        return plot
    return None if out is None else str(Path(out).with_suffix(suffix))


def cmd_inspect(args, tol: Tolerance) -> int:
    a = read_matrix(args.path)
    a = as_cmatrix(a, square=True)
    d = normality_defect(a)
    report = {"rows": a.shape[0], "normality_defect": d, "normal": bool(is_normal(a, tol))}
    if report["normal"]:
        dec = normal_eig(a, tol, seed=args.seed)
        report["eigenvalues"] = _pairs(dec.lam)
        cert = essentially_hermitian(a, tol)
        report["essentially_hermitian"] = None if cert is None else {
            "theta": complex_pair(cert.theta),
            "alpha": complex_pair(cert.alpha),
        }
        theta = _theta_arg(args.theta) if args.theta else None
        if theta is None:
            theta = 1.0 + 0j
            try:
                interpolation_nodes(dec.lam, theta)
            except InfeasibleError:
                theta = feasible_theta(dec.lam, np.random.default_rng(args.seed))
        pi = lagrange_pi(dec, theta)
        report["theta"] = complex_pair(theta)
        report["pi"] = list(pi.coeffs)
        report["pi_degree"] = pi.degree
        report["curve_identity_residual"] = curve_identity_residual(a, theta, pi)
        try:
            kp = krylov_pi(a, theta, rng=args.seed)
            report["pi_krylov"] = list(kp.coeffs)
        except NumericalError as exc:
            report["pi_krylov"] = None
            report["pi_krylov_error"] = str(exc)
        if args.plot:
            from .plotting import plot_spectrum

            plot_spectrum(args.plot, dec.lam, curve=PolyCurve(theta, pi), title="spectrum and curve")
            report["plot"] = args.plot
    _emit(report)
    return 0


def cmd_augment1(args, tol: Tolerance) -> int:
    a = read_matrix(args.path)
    a = as_cmatrix(a, square=True)
    y = parse_complex(args.y)
    theta = _theta_arg(args.theta)
    if canonical_direction(theta) != theta:
        _warn(f"theta {theta:.6g} replaced by {-theta:.6g} (argument in [0, pi)); coefficients change sign")
    dec = normal_eig(a, tol, seed=args.seed)
    line = group_on_line(dec, y, theta, tol)
    coeffs = _coeffs(args)
    if line.p == 0:
        _warn("no eigenvalue on this line; the augmentation is block diagonal")
        if coeffs.size and np.any(coeffs != 0):
            raise ShapeError(f"line holds no eigenvalues but {coeffs.size} coefficient(s) were given")
        coeffs = np.zeros(0, dtype=np.complex128)
    aug, a_plus = augment1(a, line, coeffs, tol)
    pred = predict_augment1_spectrum(a, line, coeffs)
    computed = normal_eig(a_plus, tol, seed=args.seed).lam
    report = {
        "p": line.p,
        "y": complex_pair(aug.y),
        "theta": complex_pair(aug.theta),
        "members": [complex_pair(dec.lam[j]) for j in line.members],
        "inherited": _pairs([z for _, z in pred.inherited]),
        "new": _pairs(pred.perturbed_new),
        "interlacing_ok": pred.interlacing_ok,
        "normality_defect": normality_defect(a_plus),
        "prediction_error": match_spectra(pred.eigenvalues(), computed),
    }
    if args.out:
        write_matrix(args.out, a_plus)
        report["out"] = args.out
    _emit(report)
    return 0


def cmd_augment_quad(args, tol: Tolerance) -> int:
    a = read_matrix(args.path)
    a = as_cmatrix(a, square=True)
    coeffs = parse_reals(args.pi)
    if len(coeffs) != 3:
        raise ShapeError("--pi takes three coefficients r0,r1,r2")
    curve = PolyCurve(_theta_arg(args.theta), RealPolynomial(coeffs))
    m = read_matrix(args.M) if args.M else None
    q = read_matrix(args.Q) if args.Q else None
    z = read_matrix(args.Z) if args.Z else None
    aug = quad_augment(a, curve, m, q, tol, z=z)
    lam = normal_eig(aug.a_plus, tol, seed=args.seed).lam
    lead, trail = block_identity_residuals(aug.a_plus, a.shape[0], curve)
    report = {
        "m": aug.m,
        "theta": complex_pair(curve.theta),
        "pi": list(curve.pi.coeffs),
        "normality_defect": normality_defect(aug.a_plus),
        "eigenvalues": _pairs(lam),
        "max_curve_gap": float(np.max(np.abs(curve.gap(lam)))),
        "leading_block_error": float(np.max(np.abs(aug.a_plus[: a.shape[0], : a.shape[0]] - a))),
        "block_identity_residuals": [lead, trail],
    }
    if args.out:
        write_matrix(args.out, aug.a_plus)
        report["out"] = args.out
    png = _plot_path(args.out, args.plot, ".png")
    if png:
        from .plotting import plot_spectrum

        plot_spectrum(png, np.linalg.eigvals(a), lam, curve, title="augmentation onto a parabola")
        report["plot"] = png
    _emit(report)
    return 0


def cmd_perturb(args, tol: Tolerance) -> int:
    a = read_matrix(args.path)
    a = as_cmatrix(a, square=True)
    report: dict = {}
    if args.kind == "rank1":
        theta = _theta_arg(args.theta)
        if args.u:
            pert = Rank1Perturbation(theta, _read_vector(args.u))
            if pert.u.size != a.shape[0]:
                raise ShapeError(f"u has length {pert.u.size}, A is {a.shape[0]} x {a.shape[0]}")
            if not validate_rank1(a, pert, tol):
                raise InfeasibleError("u is not an eigenvector of the theta-skew part of A; A + theta uu^* is not normal")
            a_plus = a + pert.matrix
            report["valid"] = True
        else:
            if args.y is None:
                raise PreconditionError("rank1 needs either --u or --y with coefficients")
            dec = normal_eig(a, tol, seed=args.seed)
            line = group_on_line(dec, parse_complex(args.y), theta, tol)
            coeffs = _coeffs(args)
            pert, a_plus = build_rank1(a, line, coeffs, tol)
            if line.p:
                pred = predict_rank1_spectrum(a, line, coeffs)
                computed = normal_eig(a_plus, tol, seed=args.seed).lam
                report.update(
                    p=line.p,
                    inherited=_pairs([z for _, z in pred.inherited]),
                    old=_pairs(pred.perturbed_old),
                    new=_pairs(pred.perturbed_new),
                    interlacing_ok=pred.interlacing_ok,
                    prediction_error=match_spectra(pred.eigenvalues(), computed),
                )
            else:
                report["p"] = 0
        report["u"] = _pairs(pert.u)
    elif args.kind == "rankk":
        h = read_matrix(args.H)
        dec = decompose_rank_k(a, _theta_arg(args.theta), h, tol)
        a_plus = a + dec.matrix
        report["terms"] = [{"delta": d, "u": _pairs(u)} for d, u in dec.terms]
        report["theta"] = complex_pair(dec.theta)
    else:
        parts = [(_theta_arg(t), read_matrix(p)) for t, p in args.part]
        a_plus = combined_perturbation(a, parts, tol)
    report["normality_defect"] = normality_defect(a_plus)
    report["eigenvalues"] = _pairs(normal_eig(a_plus, tol, seed=args.seed).lam)
    if args.out:
        write_matrix(args.out, a_plus)
        report["out"] = args.out
    _emit(report)
    return 0


def cmd_trajectory(args, tol: Tolerance) -> int:
    a = as_cmatrix(read_matrix(args.path_a), square=True)
    e = as_cmatrix(read_matrix(args.path_e), square=True)
    if args.steps < 1:
        raise ShapeError("--steps must be at least 1")
    tgrid = np.linspace(args.tmin, args.tmax, args.steps)
    traj = trajectory(a, e, tgrid, tol)
    text = trajectory_csv(traj)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    png = _plot_path(args.out, args.plot, ".png")
    if png:
        from .plotting import plot_trajectory

        plot_trajectory(traj, png, title="eigenvalue paths")
    if args.theta:
        dev = path_deviation(traj, _theta_arg(args.theta))
        print(json.dumps({"path_deviation": dev.tolist()}), file=sys.stderr)
    return 0


def cmd_examples(args, tol: Tolerance) -> int:
    results = illustrations.run(args.which)
    failed = 0
    report = {}
    for name, checks in results.items():
        report[name] = [{"check": c.name, "passed": c.passed, "detail": c.detail} for c in checks]
        failed += sum(not c.passed for c in checks)
    if args.plot_dir:
        report["figures"] = _example_figures(Path(args.plot_dir), results)
    report["failed"] = failed
    _emit(report)
    return EXIT_CHECK if failed else 0


def _example_figures(outdir: Path, results) -> list[str]:
    from .plotting import plot_spectrum, plot_trajectory

    outdir.mkdir(parents=True, exist_ok=True)
    files = []
    if "rank-two" in results:
        tgrid = np.linspace(0, 4, 81)
        a, e = illustrations.RANK2_A, illustrations.RANK2_E
        e1 = np.outer(illustrations.RANK2_U1, illustrations.RANK2_U1.conj())
        for tag, traj in (("preserving", trajectory(a, e, tgrid)), ("split", trajectory(a, e1, tgrid))):
            path = outdir / f"rank_two_{tag}.png"
            plot_trajectory(traj, path, title=f"A + tE ({tag})")
            files.append(str(path))
    if "parabola" in results:
        a = illustrations.PARABOLA_A
        aug = quad_augment(a, illustrations.PARABOLA_CURVE, illustrations.PARABOLA_M, illustrations.PARABOLA_Q)
        path = outdir / "parabola.png"
        plot_spectrum(path, np.diag(a), np.linalg.eigvals(aug.a_plus), illustrations.PARABOLA_CURVE, title="parabola")
        files.append(str(path))
    if "line-of-normals" in results:
        traj = trajectory(illustrations.LINE_A, illustrations.LINE_B - illustrations.LINE_A, np.linspace(0, 1, 41))
        path = outdir / "line_of_normals.png"
        plot_trajectory(traj, path, title="A + tE, eigenvalues +-sqrt(1-2t)")
        files.append(str(path))
    return files


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="normkit", description="Normality preserving perturbations and augmentations.")
    parser.add_argument("--seed", type=int, default=42, help="seed for randomized internals (default 42)")
    parser.add_argument("--tol", help="tolerance: one number or rel_normality,collinearity,eig_residual")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("inspect", help="normality, essential Hermicity and spectral curve of a matrix")
    p.add_argument("path")
    p.add_argument("--theta", help="direction re,im (default: 1 if feasible, else random)")
    p.add_argument("--plot", help="write a PNG of the spectrum and curve")
    p.set_defaults(func=cmd_inspect)

    def coeff_flags(q):
        q.add_argument("--coeff", action="append", help="one coefficient re,im (repeatable)")
        q.add_argument("--coeffs", help="JSON file with a list of [re, im] coefficients")

    p = sub.add_parser("augment1", help="normal 1-augmentation along a line")
    p.add_argument("path")
    p.add_argument("--y", required=True, help="corner entry re,im")
    p.add_argument("--theta", required=True, help="line direction re,im")
    coeff_flags(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_augment1)

    p = sub.add_parser("augment-quad", help="augmentation with all eigenvalues on a parabola")
    p.add_argument("path")
    p.add_argument("--theta", default="1,0")
    p.add_argument("--pi", required=True, help="r0,r1,r2 with r2 > 0")
    p.add_argument("--M", help="Hermitian m x m block (default identity)")
    p.add_argument("--Q", help="unitary m x m block (default identity)")
    p.add_argument("--Z", help="explicit n x m factor (checked)")
    p.add_argument("--out")
    p.add_argument("--plot", help="PNG path (default: next to --out)")
    p.set_defaults(func=cmd_augment_quad)

    p = sub.add_parser("perturb", help="normality preserving perturbations")
    psub = p.add_subparsers(dest="kind", required=True)
    q = psub.add_parser("rank1")
    q.add_argument("path")
    q.add_argument("--theta", required=True)
    q.add_argument("--u", help="vector file; validated against A")
    q.add_argument("--y", help="base point of the line re,im (with coefficients)")
    coeff_flags(q)
    q.add_argument("--out")
    q = psub.add_parser("rankk")
    q.add_argument("path")
    q.add_argument("--theta", required=True)
    q.add_argument("--H", required=True)
    q.add_argument("--out")
    q = psub.add_parser("combined")
    q.add_argument("path")
    q.add_argument("--part", nargs=2, action="append", required=True, metavar=("THETA", "HFILE"))
    q.add_argument("--out")
    p.set_defaults(func=cmd_perturb)

    p = sub.add_parser("trajectory", help="eigenvalues of A + tE as CSV")
    p.add_argument("path_a")
    p.add_argument("path_e")
    p.add_argument("--tmin", type=float, default=0.0)
    p.add_argument("--tmax", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=41)
    p.add_argument("--out", help="CSV path (default stdout)")
    p.add_argument("--plot", help="PNG path (default: next to --out)")
    p.add_argument("--theta", help="report per-path deviation from this direction on stderr")
    p.set_defaults(func=cmd_trajectory)

    p = sub.add_parser("examples", help="reproduce the worked illustrations")
    p.add_argument("--which", default="all", choices=["all", *illustrations.ILLUSTRATIONS, *illustrations.ALIASES])
    p.add_argument("--plot-dir", help="directory for PNG figures")
    p.set_defaults(func=cmd_examples)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        tol = _tolerance(args)
        return args.func(args, tol)
    except (MatrixFormatError, OSError) as exc:
        _warn(str(exc))
        return EXIT_IO
    except (ShapeError, PreconditionError) as exc:
        _warn(str(exc))
        return EXIT_PRECONDITION
    except InfeasibleError as exc:
        _warn(str(exc))
        return EXIT_INFEASIBLE
    except NumericalError as exc:
        _warn(str(exc))
        return EXIT_NUMERICAL
    except ValueError as exc:
        _warn(str(exc))
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
