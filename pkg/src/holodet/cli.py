"""Command-line surface.

Subcommands
-----------
eta         Dedekind eta (or its canonical log) at a point of H
torus-det   determinant of the flat-torus Laplacian, closed form and/or
            spectral zeta oracle with its diagnostics
potential   cone potential of a catalog form, with optional verification
            and CSV grid sweeps
extend      the genus-1 holomorphic extension (or a recipe file), with
            diagonal / invariance / holomorphy checks
polarize    fit diagonal CSV samples to a polarized polynomial (JSON out)
verify-all  the full verification suite

Conventions: complex numbers on the command line are ``re,im``; product
points are ``z;w``.  Exit codes: 0 success, 1 verification failure,
2 input/configuration error.  Reports are byte-deterministic for fixed
inputs; wall-clock timing goes to stderr only.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

import numpy as np

from .catalog import builtin_catalog, load_catalog
from .errors import DomainError, FitRankError, HolodetError
from .extension import (
    ProductPoint,
    assemble_extension,
    genus1_extension,
    genus1_recipe,
    modular_invariance_check,
)
from .polarization import load_diagonal_csv, polarize_fit
from .potential_builder import (
    ConeQuadrature,
    check_closed_and_holomorphic,
    cone_potential,
    verify_boundary_vanishing,
    verify_mixed_derivative,
)
from .report import CheckResult
from .special_functions import eta, log_eta
from .torus_spectral import closed_form_log_det, zeta_log_det
from .verify import run_all
from .wirtinger import wirtinger_dzbar

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_BAD_INPUT = 2


def parse_complex(text: str) -> complex:
    try:
        re_s, im_s = text.split(",")
        return complex(float(re_s), float(im_s))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}") from exc


def parse_point_pair(text: str) -> tuple[tuple[complex, ...], tuple[complex, ...]]:
    """Parse 'z;w' where each block is coordinates 're,im' joined by ':'."""
    try:
        z_s, w_s = text.split(";")
        z = tuple(parse_complex(c) for c in z_s.split(":"))
        w = tuple(parse_complex(c) for c in w_s.split(":"))
        if len(z) != len(w):
            raise ValueError("z and w blocks have different lengths")
        return z, w
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            f"expected 'z;w' as 're,im[:re,im...];re,im[:re,im...]', got {text!r}"
        ) from exc


def fmt(value) -> str:
    """15 significant digits; imaginary part only when nonzero."""
    value = complex(value)
    if value.imag == 0.0:
        return f"{value.real:.15g}"
    return f"{value.real:.15g}{value.imag:+.15g}i"


def _print_checks(checks) -> bool:
    ok = True
    for c in checks:
        print(c.line())
        ok &= c.passed
    return ok


# --- eta ---------------------------------------------------------------------


def cmd_eta(args) -> int:
    try:
        value = log_eta(args.z) if args.log else eta(args.z, args.terms)
    except HolodetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    print(fmt(value))
    return EXIT_OK


# --- torus-det ---------------------------------------------------------------


def cmd_torus_det(args) -> int:
    if args.method in ("closed-form", "both"):
        print(f"closed_form_log_det={fmt(closed_form_log_det(args.z))}")
    if args.method in ("spectral", "both"):
        r = zeta_log_det(args.z)
        print(f"spectral_log_det={fmt(r.log_det)}")
        print(f"tail_bound={r.tail_bound:.6e}")
        check = CheckResult("zeta0_diagnostic", abs(r.zeta_zero + 1.0), args.tol,
                            abs(r.zeta_zero + 1.0) <= args.tol,
                            f"zeta(0)={r.zeta_zero:.12f}")
        print(check.line())
        if args.method == "both":
            y = r.modulus.imag
            ea = abs(eta(r.modulus))
            det = math.exp(r.log_det)
            print(f"ratio_to_y2_eta4={fmt(det / (y ** 2 * ea ** 4))}")
            print(f"ratio_to_2pi_sqrty_eta2={fmt(det / (2 * math.pi * math.sqrt(y) * ea ** 2))}")
        if not check.passed:
            return EXIT_CHECK_FAILED
    return EXIT_OK


# --- potential ---------------------------------------------------------------


def _load_entry(args):
    catalog = builtin_catalog()
    if args.catalog:
        catalog.update(load_catalog(args.catalog))
    if args.form not in catalog:
        raise KeyError(f"unknown form {args.form!r}; available: {', '.join(sorted(catalog))}")
    return catalog[args.form]


def cmd_potential(args) -> int:
    try:
        entry = _load_entry(args)
    except (KeyError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    quad = ConeQuadrature(nodes_per_axis=args.nodes)
    z, w = np.asarray(args.at[0], complex), np.asarray(args.at[1], complex)
    if z.size != entry.dim:
        print(f"error: form {entry.name!r} needs points in C^{entry.dim}, "
              f"got {z.size} coordinate(s)", file=sys.stderr)
        return EXIT_BAD_INPUT
    form = entry.build(validate=False)

    if args.verify:
        samples = [(z, w)] + list(entry.validation_samples())
        contract = check_closed_and_holomorphic(form, samples)
        checks = [
            CheckResult("form_closedness", contract.closedness_residual, 1e-8,
                        contract.closedness_residual <= 1e-8),
            CheckResult("form_antiholomorphic", contract.antiholomorphic_residual, 1e-8,
                        contract.antiholomorphic_residual <= 1e-8),
        ]
        boundary = verify_boundary_vanishing(form, samples, quad)
        checks.append(CheckResult("boundary_vanishing", boundary.max_residual, 1e-10,
                                  boundary.passed))
        try:
            mixed = float(np.max(verify_mixed_derivative(form, z, w, quad)))
            checks.append(CheckResult("mixed_derivative", mixed, 1e-7, mixed <= 1e-7))
        except HolodetError as exc:
            checks.append(CheckResult("mixed_derivative", math.inf, 1e-7, False, str(exc)))
        ok = _print_checks(checks)
        if not ok:
            return EXIT_CHECK_FAILED
    elif entry.kind == "polynomial":
        # polynomial entries must pass the contract check before use
        contract = check_closed_and_holomorphic(form, entry.validation_samples())
        if not contract.passed:
            print(f"error: form {entry.name!r} fails closedness/holomorphy "
                  f"(residual {contract.max_residual:.3e})", file=sys.stderr)
            return EXIT_CHECK_FAILED

    try:
        if args.grid:
            return _emit_grid(args, form, quad, z, w)
        q = cone_potential(form, z, w, quad)
    except HolodetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    print(f"q={fmt(q)}")
    return EXIT_OK


def _emit_grid(args, form, quad, z0, w) -> int:
    if form.dim != 1:
        print("error: --grid sweeps are supported for one-variable forms only", file=sys.stderr)
        return EXIT_BAD_INPUT
    try:
        a_s, b_s, n_s = args.grid.split(":")
        a, b, n = parse_complex(a_s), parse_complex(b_s), int(n_s)
    except (ValueError, argparse.ArgumentTypeError) as exc:
        print(f"error: --grid expects 're,im:re,im:N', got {args.grid!r} ({exc})", file=sys.stderr)
        return EXIT_BAD_INPUT
    wc = complex(w[0])
    rows = ["re_z,im_z,re_w,im_w,re_q,im_q"]
    for k in range(n):
        s = k / max(n - 1, 1)
        z = a + s * (b - a)
        q = cone_potential(form, z, wc, quad)
        rows.append(",".join(repr(v) for v in (z.real, z.imag, wc.real, wc.imag, q.real, q.imag)))
    text = "\n".join(rows) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# --- extend ------------------------------------------------------------------


def _parse_recipe_file(path):
    opts = {"constant": 0.0, "f_mode": "zero"}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, *rest = line.split()
            if key == "constant":
                opts["constant"] = float(rest[0])
            elif key == "f_mode":
                opts["f_mode"] = rest[0]
            else:
                raise ValueError(f"unknown recipe directive {key!r}")
    return genus1_recipe(opts["constant"], f_mode=opts["f_mode"])


def cmd_extend(args) -> int:
    zb, wb = args.point
    if len(zb) != 1:
        print("error: extend works on the genus-1 model; give scalar z;w", file=sys.stderr)
        return EXIT_BAD_INPUT
    z, w = zb[0], wb[0]
    try:
        point = ProductPoint(z, w)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT

    if args.recipe:
        try:
            recipe = _parse_recipe_file(args.recipe)
        except (OSError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_BAD_INPUT
        evaluate = lambda p: assemble_extension(recipe, p)
    else:
        evaluate = genus1_extension

    if not args.check:
        print(fmt(evaluate(point)))
        return EXIT_OK

    checks = []
    if args.check == "diagonal":
        worst = 0.0
        for x in np.linspace(-0.4, 0.4, 5):
            for y in np.linspace(0.8, 2.0, 5):
                worst = max(worst, abs(evaluate(ProductPoint.diagonal(complex(x, y))).imag))
        checks.append(CheckResult("diagonal_imag", worst, 1e-12, worst <= 1e-12))
    elif args.check == "invariance":
        for word in ("T", "S", "STS", "TTST", "STT"):
            r = modular_invariance_check(point, word)
            checks.append(CheckResult(f"invariance[{word}]", r.relative_residual, 1e-9,
                                      r.relative_residual <= 1e-9,
                                      f"raw diff mod 2pi i/24: {abs(r.l_difference_mod):.3e}"))
    elif args.check == "holomorphy":
        worst = 0.0
        for dz in (0.1, -0.15 + 0.2j):
            fz = lambda p: evaluate(ProductPoint(p, w))
            fw = lambda p: evaluate(ProductPoint(z + dz, p))
            worst = max(worst, abs(wirtinger_dzbar(fz, z + dz, 1e-4)))
            worst = max(worst, abs(wirtinger_dzbar(fw, w - 0.1j, 1e-4)))
        checks.append(CheckResult("antiholomorphic_residual", worst, 1e-7, worst <= 1e-7))
    print(f"value={fmt(evaluate(point))}")
    return EXIT_OK if _print_checks(checks) else EXIT_CHECK_FAILED


# --- polarize ----------------------------------------------------------------


def cmd_polarize(args) -> int:
    try:
        samples = load_diagonal_csv(args.samples)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: malformed samples CSV: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    try:
        fit = polarize_fit(samples, args.degree, args.svd_cutoff)
    except FitRankError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    payload = {
        "degree": fit.degree,
        "center": [fit.center.real, fit.center.imag],
        "radius": fit.radius,
        "conditioning": fit.conditioning,
        "residual": fit.residual,
        "coefficients": [
            [[c.real, c.imag] for c in row] for row in fit.coefficients
        ],
    }
    text = json.dumps(payload, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    print(f"residual={fit.residual:.6e} conditioning={fit.conditioning:.6e}", file=sys.stderr)
    return EXIT_OK


# --- verify-all --------------------------------------------------------------


def cmd_verify_all(args) -> int:
    t0 = time.perf_counter()
    report = run_all(fast=args.fast)
    report.wall_time_s = time.perf_counter() - t0
    for line in report.summary_lines():
        print(line)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(report.to_json() + "\n")
    print(f"wall time: {report.wall_time_s:.2f}s", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


# --- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="holodet", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("eta", help="Dedekind eta at a point of the upper half plane")
    q.add_argument("--z", type=parse_complex, required=True, metavar="re,im")
    q.add_argument("--log", action="store_true", help="canonical log(eta) branch instead")
    q.add_argument("--terms", type=int, default=None, help="explicit q-product truncation")
    q.set_defaults(func=cmd_eta)

    q = sub.add_parser("torus-det", help="flat-torus determinant (closed form / spectral)")
    q.add_argument("--z", type=parse_complex, required=True, metavar="re,im")
    q.add_argument("--method", choices=("closed-form", "spectral", "both"), default="both")
    q.add_argument("--tol", type=float, default=1e-9, help="zeta(0) diagnostic tolerance")
    q.set_defaults(func=cmd_torus_det)

    q = sub.add_parser("potential", help="cone potential of a catalog form")
    q.add_argument("--form", required=True)
    q.add_argument("--at", type=parse_point_pair, required=True, metavar="z;w")
    q.add_argument("--verify", action="store_true",
                   help="run boundary/closedness/mixed-derivative checks")
    q.add_argument("--grid", default=None, metavar="re,im:re,im:N",
                   help="sweep z along a segment (w fixed) and emit CSV")
    q.add_argument("--out", default=None, help="CSV output path (default stdout)")
    q.add_argument("--catalog", default=None, help="extra catalog file")
    q.add_argument("--nodes", type=int, default=64, help="quadrature nodes per axis")
    q.set_defaults(func=cmd_potential)

    q = sub.add_parser("extend", help="holomorphic extension at a point of H x Hbar")
    q.add_argument("--point", type=parse_point_pair, required=True, metavar="z;w")
    q.add_argument("--recipe", default=None, help="recipe file (constant / f_mode lines)")
    q.add_argument("--check", choices=("diagonal", "invariance", "holomorphy"), default=None)
    q.set_defaults(func=cmd_extend)

    q = sub.add_parser("polarize", help="fit diagonal CSV samples (re_z,im_z,re_val,im_val)")
    q.add_argument("--samples", required=True)
    q.add_argument("--degree", type=int, required=True)
    q.add_argument("--out", default=None, help="JSON output path (default stdout)")
    q.add_argument("--svd-cutoff", type=float, default=1e-10)
    q.set_defaults(func=cmd_polarize)

    q = sub.add_parser("verify-all", help="run the full verification suite")
    q.add_argument("--fast", action="store_true", help="trim grids (same tolerances)")
    q.add_argument("--json", default=None, help="also write the JSON report here")
    q.set_defaults(func=cmd_verify_all)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
