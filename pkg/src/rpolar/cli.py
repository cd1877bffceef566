"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .energy import Regime, Weights, energy_batch, mmp
from .mat3 import DegenerateSpectrumError, NotInGLPlusError, geodesic_distance, polar_batch, singular_values
from .nanoindent import GridSpec, evaluate_section
from .oracle import min_energy_so3, random_deformations
from .psd import is_definiteness_guaranteed, project_psd
from .relaxed import relaxed_polar_batch
from .render import DEFAULT_CLAMP_DEG, field_image, render_section_figure, write_field_csv, write_ppm

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_IO = 3

VERIFY_ENERGY_TOL = 1e-6
VERIFY_ANGLE_TOL = 1e-3

ROTATION_CHOICES = {
    "polar": "polar",
    "rpolar+": "rpolar_plus",
    "rpolar-": "rpolar_minus",
    "collage": "collage",
}


class UsageError(Exception):
    pass


def _fmt(v) -> str:
    return "%.17g" % v


def _matrix_text(M: np.ndarray) -> str:
    return " ".join(_fmt(v) for v in np.asarray(M).ravel())


def read_matrix(path) -> np.ndarray:
    """Nine reals, row-major, separated by whitespace or commas."""
    tokens = Path(path).read_text().replace(",", " ").split()
    if len(tokens) != 9:
        raise UsageError(f"expected 9 reals in {path}, found {len(tokens)} tokens")
    try:
        vals = [float(t) for t in tokens]
    except ValueError as exc:
        raise UsageError(f"malformed number in {path}: {exc}") from exc
    M = np.array(vals).reshape(3, 3)
    if not np.all(np.isfinite(M)):
        raise UsageError(f"non-finite entry in {path}")
    return M


def parse_section(text: str) -> tuple[int, float]:
    """``'y=0.5'`` -> ``(1, 0.5)``."""
    try:
        name, value = text.split("=")
        axis = "xyz".index(name.strip().lower())
        return axis, float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"section must look like y=0.5, got {text!r}") from None


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be > 0")
    return v


def _weights(args) -> Weights:
    try:
        return Weights(args.mu, args.mu_c)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def decompose_report(F: np.ndarray, w: Weights) -> list[tuple[str, str]]:
    """Key/value pairs describing every factor of ``F``."""
    R, U = polar_batch(F)
    sigma = singular_values(F)
    u, s = mmp(F)
    rows = [
        ("F", _matrix_text(F)),
        ("polar", _matrix_text(R)),
        ("U", _matrix_text(U)),
        ("sigma", _matrix_text(sigma)),
        ("u_mmp", _fmt(u)),
        ("s_mmp", _fmt(s)),
        ("energy_polar", _fmt(energy_batch(R, F, w.mu, w.mu_c))),
    ]
    if not w.non_classical:
        rows.append(("regime", "classical-range"))
        rows.append(("note", "mu_c >= mu: the polar factor is the unique minimizer"))
        return rows
    b = relaxed_polar_batch(F, w)
    rows += [
        ("regime", Regime(b.regime.item()).value),
        ("beta_hat", _fmt(b.beta_hat)),
        ("rpolar_plus", _matrix_text(b.plus)),
        ("rpolar_minus", _matrix_text(b.minus)),
        ("energy_plus", _fmt(energy_batch(b.plus, F, w.mu, w.mu_c))),
        ("energy_minus", _fmt(energy_batch(b.minus, F, w.mu, w.mu_c))),
    ]
    if b.degenerate and b.regime.item() == Regime.NON_CLASSICAL.value:
        rows.append(("note", "repeated singular values: rpolar branches depend on the chosen frame"))
    return rows


def _write_kv_csv(path, rows) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write("key,value\n")
        for k, v in rows:
            fh.write(f"{k},{v}\n")


def cmd_decompose(args) -> int:
    F = read_matrix(args.matrix)
    if not np.linalg.det(F) > 0:
        raise UsageError("matrix must have positive determinant")
    rows = decompose_report(F, _weights(args))
    for k, v in rows:
        print(f"{k}: {v}")
    if args.csv:
        _write_kv_csv(args.csv, rows)
    return EXIT_OK


def cmd_project(args) -> int:
    X = read_matrix(args.matrix)
    res = project_psd(X)
    rows = [
        ("X", _matrix_text(X)),
        ("projection", _matrix_text(res.projection)),
        ("residual", _fmt(res.residual)),
        ("definiteness_guaranteed", str(is_definiteness_guaranteed(X)).lower()),
    ]
    for k, v in rows:
        print(f"{k}: {v}")
    if args.csv:
        _write_kv_csv(args.csv, rows)
    return EXIT_OK


def verify_oracle(count: int, seed: int, w: Weights, coarse_n: int = 48) -> dict:
    """Compare the closed form (or the polar factor for mu_c >= mu) against the oracle."""
    rng = np.random.default_rng(seed)
    Fs = random_deformations(rng, count)
    if w.non_classical:
        b = relaxed_polar_batch(Fs, w)
        plus, minus = b.plus, b.minus
    else:
        plus, _ = polar_batch(Fs)
        minus = plus
    closed = energy_batch(plus, Fs, w.mu, w.mu_c)
    gaps = np.empty(count)
    angles = np.empty(count)
    for k, F in enumerate(Fs):
        res = min_energy_so3(F, w, coarse_n=coarse_n)
        gaps[k] = abs(res.value - closed[k])
        angles[k] = min(geodesic_distance(res.minimizer, plus[k]), geodesic_distance(res.minimizer, minus[k]))
    tiny = np.finfo(float).tiny
    score = np.maximum(gaps / max(VERIFY_ENERGY_TOL, tiny), angles / max(VERIFY_ANGLE_TOL, tiny))
    max_gap, max_angle = float(gaps.max()), float(angles.max())
    return {
        "count": count,
        "max_energy_gap": max_gap,
        "max_angle": max_angle,
        "ok": max_gap <= VERIFY_ENERGY_TOL and max_angle <= VERIFY_ANGLE_TOL,
        "worst_F": Fs[int(np.argmax(score))],
    }


def cmd_verify(args) -> int:
    if args.count < 1:
        raise UsageError("--count must be >= 1")
    w = _weights(args)
    rep = verify_oracle(args.count, args.seed, w)
    target = "rpolar" if w.non_classical else "polar"
    print(f"samples: {rep['count']}  reference: {target}")
    print(f"max_energy_gap: {rep['max_energy_gap']:.3e} (tol {VERIFY_ENERGY_TOL:g})")
    print(f"max_angle_rad: {rep['max_angle']:.3e} (tol {VERIFY_ANGLE_TOL:g})")
    if rep["ok"]:
        print("verify: ok")
        return EXIT_OK
    print("verify: FAILED")
    print(f"worst_F: {_matrix_text(rep['worst_F'])}")
    return EXIT_VERIFY


def cmd_field(args) -> int:
    w = _weights(args)
    if not w.non_classical:
        raise UsageError("field sweeps need mu > mu_c; for mu_c >= mu every rotation field is the polar one")
    axis, offset = args.section
    try:
        spec = GridSpec(axis=axis, offset=offset, resolution=(args.res, args.res))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rotation = ROTATION_CHOICES[args.rotation]
    fld = evaluate_section(spec, w, patch_x=args.patch_x)
    try:
        n = write_field_csv(args.csv, fld, rotation)
        if args.ppm:
            write_ppm(args.ppm, field_image(fld, rotation, args.clamp_deg))
        if args.figure:
            render_section_figure(fld, rotation, args.figure, args.clamp_deg)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    flagged = int(fld.spin_degenerate[rotation].sum())
    print(f"rows: {n}  degenerate: {flagged}  rotation: {rotation}")
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_weights(p) -> None:
    p.add_argument("--mu", type=float, default=1.0, help="shear modulus (> 0)")
    p.add_argument("--mu-c", type=float, default=0.0, help="Cosserat couple modulus (>= 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rpolar", description="Relaxed polar decomposition toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("decompose", help="polar and relaxed polar factors of one matrix")
    p.add_argument("--matrix", required=True, help="file with 9 reals, row-major")
    p.add_argument("--csv", help="also write key,value CSV here")
    _add_weights(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("field", help="planar spin on a section of the indentation field")
    p.add_argument("--section", type=parse_section, default=(1, 0.5), help="e.g. y=0.5")
    p.add_argument("--res", type=int, default=201, help="samples per in-plane axis")
    p.add_argument("--rotation", choices=list(ROTATION_CHOICES), default="polar")
    p.add_argument("--patch-x", type=float, default=0.0, help="collage seam: rpolar+ left of it")
    p.add_argument("--clamp-deg", type=_positive_float, default=DEFAULT_CLAMP_DEG)
    p.add_argument("--csv", required=True)
    p.add_argument("--ppm")
    p.add_argument("--figure", help="matplotlib rendering (format from suffix)")
    _add_weights(p)
    p.set_defaults(func=cmd_field)

    p = sub.add_parser("verify", help="closed form against the brute-force oracle")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    _add_weights(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("project", help="nearest symmetric PSD matrix")
    p.add_argument("--matrix", required=True)
    p.add_argument("--csv")
    p.set_defaults(func=cmd_project)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NotInGLPlusError, DegenerateSpectrumError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
