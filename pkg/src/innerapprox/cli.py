"""Command-line front end.

Every verb reads JSON inputs, runs one pipeline and writes its artifact
atomically.  Exit status: 0 success, 2 unparsable input or flags, 3 invariant
violation (including non-contractive input), 4 numerical failure.
``INNERAPPROX_THREADS`` caps the BLAS thread pool.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io as _stdio
import os
import sys
from typing import Sequence

import numpy as np
from threadpoolctl import threadpool_limits

from . import io
from .core import (
    BidiscSplit,
    CircleGrid,
    Colligation,
    MatrixPolynomial,
    TorusGrid,
    evaluate_on,
    operator_norm,
    transfer_on_points,
)
from .dilation import (
    bidisc_transfer,
    circle_unitarity_defect,
    grid_error,
    inner_approximant_bidisc,
    tail_bound,
    unitarity_defect,
    unitary_dilation,
)
from .domains import (
    GammaPoint,
    TetraPoint,
    gamma_coordinates,
    gamma_inner_approximate,
    in_gamma,
    in_tetra,
    on_bgamma,
    on_btetra,
    tetra_coordinates,
    tetra_inner_approximate,
)
from .errors import (
    BudgetExhausted,
    DepthTooSmall,
    DimensionMismatch,
    InvalidRadius,
    InvariantViolation,
    NotContractive,
    NotInner,
    NotUnitary,
    NumericalFailure,
    ParseError,
)
from .hull import fisher_pipeline
from .indefinite import (
    KreinLangerPair,
    PGTransformed,
    SignatureSpace,
    j_inner_approximate,
    j_unitarity_defects,
    krein_langer_approximate,
    pg_form_defects,
    pg_inverse_values,
    pg_roundtrip_defect,
    pg_values,
    verify_pg_kernel_identity,
)
from .potapov import BlaschkePotapovProduct, is_inner_on_circle, random_inner
from .realization import contractive_realization, realize_contractive

EXIT_OK, EXIT_PARSE, EXIT_INVARIANT, EXIT_NUMERICAL = 0, 2, 3, 4
BOUND_SLACK = 1e-12


# ---------------------------------------------------------------------------
# Flag parsing
# ---------------------------------------------------------------------------


def parse_depths(text: str) -> list[int]:
    """``"8"``, ``"3..10"`` or ``"4,6,8"``."""
    try:
        if ".." in text:
            lo, hi = text.split("..")
            out = list(range(int(lo), int(hi) + 1))
        else:
            out = [int(t) for t in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad depth list {text!r}") from exc
    if not out:
        raise argparse.ArgumentTypeError(f"empty depth list {text!r}")
    return out


def parse_complex(text: str) -> complex:
    try:
        re_, im_ = (float(t) for t in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected re,im, got {text!r}") from exc
    return complex(re_, im_)


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _positive_float(text: str) -> float:
    v = float(text)
    if not (v > 0 and np.isfinite(v)):
        raise argparse.ArgumentTypeError("must be a positive number")
    return v


def _radius(text: str) -> float:
    v = float(text)
    if not 0 <= v < 1:
        raise argparse.ArgumentTypeError("radius must lie in [0, 1)")
    return v


# ---------------------------------------------------------------------------
# Output helpers
# ---------------------------------------------------------------------------


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, str):
        return v
    # 12 significant digits keep reports identical across BLAS thread counts
    return format(float(v), ".12g")


def _emit_text(text: str, path: str | None) -> None:
    if path:
        io.write_atomic(path, text)
    else:
        sys.stdout.write(text)


def _emit_json(obj, path: str | None) -> None:
    _emit_text(io.dumps(obj), path)


def _emit_rows(columns: Sequence[str], rows: list[dict], path: str | None, fmt: str) -> None:
    if fmt == "json":
        _emit_json([{c: (_json_value(r[c])) for c in columns} for r in rows], path)
        return
    buf = _stdio.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r[c]) for c in columns])
    _emit_text(buf.getvalue(), path)


def _json_value(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, str):
        return v
    return float(_fmt(v))


def _load(path: str, *types):
    obj = io.load(path)
    if types and not isinstance(obj, types):
        names = " or ".join(t.__name__ for t in types)
        raise ParseError(f"{path}: expected {names}, found {type(obj).__name__}")
    return obj


def _to_colligation(f) -> Colligation:
    if isinstance(f, Colligation):
        if operator_norm(f.system_matrix) > 1 + 1e-10:
            raise NotContractive("colligation system matrix has norm above 1")
        return f
    if isinstance(f, BlaschkePotapovProduct):
        return f.as_colligation()
    if isinstance(f, MatrixPolynomial):
        return realize_contractive(f)
    raise ParseError(f"cannot realize a {type(f).__name__}")


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise InvariantViolation(message)


# ---------------------------------------------------------------------------
# Verbs
# ---------------------------------------------------------------------------


def cmd_realize(args) -> None:
    p = _load(args.poly, MatrixPolynomial)
    col = contractive_realization(p, args.samples, args.rank_tol)
    _require(operator_norm(col.system_matrix) <= 1 + 1e-9, "realization is not contractive")
    _emit_json(io.colligation_to_json(col), args.out)


def cmd_dilate(args) -> None:
    col = _to_colligation(_load(args.col))
    dil = unitary_dilation(col, args.m)
    _require(unitarity_defect(dil) <= 1e-10, "dilation is not unitary to 1e-10")
    _emit_json(io.dilation_to_json(dil), args.out)


def cmd_approx_disc(args) -> None:
    col = _to_colligation(_load(args.col))
    rows = []
    for m in args.m:
        fm = unitary_dilation(col, m).unitary
        err = grid_error(col, fm, args.rho, args.grid)
        tb = tail_bound(args.rho, m).bound
        ud = circle_unitarity_defect(fm, args.grid)
        _require(err <= tb + BOUND_SLACK, f"m={m}: grid error {err:.3e} exceeds tail bound {tb:.3e}")
        _require(ud <= 1e-8, f"m={m}: approximant is not inner (defect {ud:.3e})")
        rows.append(dict(m=m, rho=args.rho, grid_error=err, tail_bound=tb, unitarity_defect=ud))
    _emit_rows(["m", "rho", "grid_error", "tail_bound", "unitarity_defect"], rows, args.report, args.format)


def cmd_approx_bidisc(args) -> None:
    col = _to_colligation(_load(args.col))
    split = BidiscSplit(args.d1, args.d2)
    split.check(col)
    base = bidisc_transfer(col, split)
    torus = TorusGrid(args.grid, args.grid).points
    inside = args.rho * torus
    base_vals = base.evaluate_many(inside)
    rows = []
    for m in args.m:
        fm = inner_approximant_bidisc(col, split, m)
        err = float(np.linalg.norm(fm.evaluate_many(inside) - base_vals, 2, axis=(1, 2)).max())
        # half-step offset keeps the check grid off removable singularities at roots of unity
        vals = fm.evaluate_many(TorusGrid(args.grid, args.grid, 0.5).points)
        eye = np.eye(vals.shape[1])
        ud = float(np.linalg.norm(np.conj(np.swapaxes(vals, 1, 2)) @ vals - eye, 2, axis=(1, 2)).max())
        tb = tail_bound(args.rho, m).bound
        _require(err <= tb + BOUND_SLACK, f"m={m}: grid error {err:.3e} exceeds tail bound {tb:.3e}")
        _require(ud <= 1e-8, f"m={m}: approximant is not inner on the torus (defect {ud:.3e})")
        rows.append(dict(m=m, rho=args.rho, grid_error=err, tail_bound=tb, unitarity_defect=ud))
    _emit_rows(["m", "rho", "grid_error", "tail_bound", "unitarity_defect"], rows, args.report, args.format)


def cmd_check_inner(args) -> int:
    f = _load(args.fn)
    chk = is_inner_on_circle(f, CircleGrid(args.grid), args.tol)
    _emit_json({"inner": chk.ok, "defect": float(_fmt(chk.defect)), "grid": args.grid}, args.out)
    return EXIT_OK if chk.ok else EXIT_INVARIANT


def cmd_random_inner(args) -> None:
    prod = random_inner(args.n, args.m, args.seed, args.alpha_bound)
    _emit_json(io.product_to_json(prod), args.out)


def cmd_fisher(args) -> None:
    f = _load(args.fn, Colligation, MatrixPolynomial, BlaschkePotapovProduct)
    comb = fisher_pipeline(f, args.eps, budget=args.budget, seed=args.seed)
    _require(comb.residual <= args.eps, f"residual {comb.residual:.3e} above eps")
    _emit_json(io.combination_to_json(comb), args.out)


def _pg_points(args) -> np.ndarray:
    if args.points:
        return np.array([parse_complex(t) for t in args.points.split(";")], dtype=np.complex128)
    return args.radius * CircleGrid(args.grid).points


def cmd_pg(args) -> int:
    f = _load(args.fn)
    sig = SignatureSpace(args.p, args.q)
    if args.mode in ("forward", "inverse"):
        zs = _pg_points(args)
        vals = evaluate_on(f, zs)
        out = pg_values(vals, sig) if args.mode == "forward" else pg_inverse_values(vals, sig)
        _emit_json({"points": [io.complex_to_json(z) for z in zs], "values": [io.matrix_to_json(v) for v in out]}, args.out)
        return EXIT_OK
    if args.seed is None:
        raise ParseError("--seed is required for --mode verify")
    rng = np.random.default_rng(args.seed)

    def draw(k):
        return 0.9 * np.sqrt(rng.uniform(size=k)) * np.exp(2j * np.pi * rng.uniform(size=k))

    zs, ws = draw(args.pairs), draw(args.pairs)
    kernel = max(verify_pg_kernel_identity(f, sig, z, w) for z, w in zip(zs, ws))
    pts = draw(20)
    roundtrip = pg_roundtrip_defect(f, sig, pts)
    forms = max(pg_form_defects(f, sig, pts))
    report = {"kernel_defect": kernel, "roundtrip_defect": roundtrip, "form_defect": forms, "pairs": args.pairs}
    _emit_json({k: _json_value(v) for k, v in report.items()}, args.out)
    ok = kernel <= 1e-9 and roundtrip <= 1e-10 and forms <= 1e-10
    return EXIT_OK if ok else EXIT_INVARIANT


def cmd_j_approx(args) -> None:
    f = _load(args.fn)
    sig = SignatureSpace(args.p, args.q)
    if args.from_transform:
        # the file holds the Schur-class transform; its preimage may have poles
        f = PGTransformed(f, sig, inverse=True)
    zs = args.rho * CircleGrid(args.grid).points
    circle = CircleGrid(args.grid, 0.5).points
    apps = j_inner_approximate(f, sig, args.m, args.degree)
    target = evaluate_on(f, zs)
    rows = []
    for app in apps:
        err = float(np.linalg.norm(app.evaluate_many(zs) - target, 2, axis=(1, 2)).max())
        gate = app.gate(circle)
        jd = float(j_unitarity_defects(app, sig, circle[gate]).max()) if gate.any() else 0.0
        _require(jd <= 1e-6, f"m={app.m}: J0-unitarity defect {jd:.3e} above 1e-6")
        rows.append(dict(m=app.m, rho=args.rho, grid_error=err, j_unitarity_defect=jd, gated_points=int(gate.sum())))
    _emit_rows(["m", "rho", "grid_error", "j_unitarity_defect", "gated_points"], rows, args.report, args.format)


def kl_region(b: BlaschkePotapovProduct, rho: float, gap: float, grid: int) -> np.ndarray:
    """Points of ``|z| <= rho`` at distance at least ``gap`` from every zero of ``det B``."""
    circle = CircleGrid(grid).points
    pts = np.concatenate([r * circle for r in np.linspace(0.0, rho, 19)[1:]] + [np.zeros(1)])
    zeros = np.array([f.alpha for f in b.factors], dtype=np.complex128)
    if zeros.size:
        pts = pts[np.min(np.abs(pts[:, None] - zeros[None]), axis=1) >= gap]
    return pts


def cmd_kl_approx(args) -> None:
    b = _load(args.b, BlaschkePotapovProduct)
    l = _load(args.l, Colligation, MatrixPolynomial, BlaschkePotapovProduct)
    pair = KreinLangerPair(b, l, args.side)
    if args.mode == "compact":
        region = kl_region(b, args.rho, args.pole_gap, args.grid)
        truth = pair.evaluate_many(region)
        rows = []
        for app in krein_langer_approximate(pair, args.m, "compact"):
            err = float(np.linalg.norm(app.evaluate_many(region) - truth, 2, axis=(1, 2)).max())
            bound = float(app.inverse_factor_norms(region).max()) * tail_bound(args.rho, app.m).bound
            _require(err <= bound + BOUND_SLACK, f"m={app.m}: error {err:.3e} exceeds {bound:.3e}")
            rows.append(dict(m=app.m, rho=args.rho, region_error=err, bound=bound))
        _emit_rows(["m", "rho", "region_error", "bound"], rows, args.report, args.format)
        return
    circle = CircleGrid(512).points
    app = krein_langer_approximate(pair, mode="circle", eps=args.eps, budget=args.budget)[0]
    err = float(np.linalg.norm(app.evaluate_many(circle) - pair.evaluate_many(circle), 2, axis=(1, 2)).max())
    bound = float(app.inverse_factor_norms(circle).max()) * app.l_m.residual
    _require(err <= bound + BOUND_SLACK, f"boundary error {err:.3e} exceeds {bound:.3e}")
    rows = [dict(mode="circle", boundary_error=err, residual=app.l_m.residual, atoms=len(app.l_m), bound=bound)]
    _emit_rows(["mode", "boundary_error", "residual", "atoms", "bound"], rows, args.report, args.format)


def _domain_rows(args, kind: str) -> None:
    f = _load(args.fn, Colligation, MatrixPolynomial, BlaschkePotapovProduct)
    col = _to_colligation(f)
    if col.n_out != 2:
        raise DimensionMismatch("domain pipelines need a 2x2 function")
    zs = args.rho * CircleGrid(args.grid).points
    fv = transfer_on_points(col, zs)
    fnorm = float(np.linalg.norm(fv, 2, axis=(1, 2)).max())
    rows = []
    if kind == "gamma":
        s0, p0 = gamma_coordinates(fv)
        for h in gamma_inner_approximate(col, args.m):
            v = h.evaluate_many(zs)
            tb = tail_bound(args.rho, h.m).bound
            te, de = float(np.abs(v[:, 0] - s0).max()), float(np.abs(v[:, 1] - p0).max())
            bd = h.boundary_defect(args.grid)
            _require(bd <= 1e-7, f"m={h.m}: boundary defect {bd:.3e} above 1e-7")
            _require(te <= 2 * tb + BOUND_SLACK and de <= (2 + 2 * fnorm) * tb + BOUND_SLACK,
                     f"m={h.m}: componentwise error exceeds the tail bound")
            rows.append(dict(m=h.m, rho=args.rho, trace_error=te, det_error=de, tail_bound=tb, boundary_defect=bd))
        cols = ["m", "rho", "trace_error", "det_error", "tail_bound", "boundary_defect"]
    else:
        x0 = np.stack(tetra_coordinates(fv), axis=1)
        for h in tetra_inner_approximate(col, args.m):
            e = np.abs(h.evaluate_many(zs) - x0).max(axis=0)
            tb = tail_bound(args.rho, h.m).bound
            bd = h.boundary_defect(args.grid)
            _require(bd <= 1e-7, f"m={h.m}: boundary defect {bd:.3e} above 1e-7")
            _require(max(e[0], e[1]) <= tb + BOUND_SLACK and e[2] <= (2 + 2 * fnorm) * tb + BOUND_SLACK,
                     f"m={h.m}: componentwise error exceeds the tail bound")
            rows.append(dict(m=h.m, rho=args.rho, x1_error=e[0], x2_error=e[1], det_error=e[2], tail_bound=tb,
                             boundary_defect=bd))
        cols = ["m", "rho", "x1_error", "x2_error", "det_error", "tail_bound", "boundary_defect"]
    _emit_rows(cols, rows, args.report, args.format)


def cmd_gamma_approx(args) -> None:
    _domain_rows(args, "gamma")


def cmd_tetra_approx(args) -> None:
    _domain_rows(args, "tetra")


def cmd_gamma_check(args) -> int:
    pt = GammaPoint(args.s, args.p)
    ok = on_bgamma(pt, args.tol) if args.boundary else in_gamma(pt, not args.open, args.tol)
    _emit_json({"member": ok}, None)
    return EXIT_OK if ok else EXIT_INVARIANT


def cmd_tetra_check(args) -> int:
    pt = TetraPoint(args.x1, args.x2, args.x3)
    ok = on_btetra(pt, args.tol) if args.boundary else in_tetra(pt, not args.open, args.tol)
    _emit_json({"member": ok}, None)
    return EXIT_OK if ok else EXIT_INVARIANT


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ParseError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="innerapprox", description="Rational inner approximation of contractive matrix functions.")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def report_flags(p):
        p.add_argument("--report", help="output file (stdout when omitted)")
        p.add_argument("--format", choices=["csv", "json"], default="csv")

    p = sub.add_parser("realize", help="contractive colligation of a matrix polynomial")
    p.add_argument("--poly", required=True)
    p.add_argument("--out")
    p.add_argument("--samples", type=_positive_int)
    p.add_argument("--rank-tol", type=_positive_float, default=1e-10)
    p.set_defaults(run=cmd_realize)

    p = sub.add_parser("dilate", help="depth-m unitary dilation")
    p.add_argument("--col", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(run=cmd_dilate)

    p = sub.add_parser("approx-disc", help="convergence report on the disc")
    p.add_argument("--col", required=True)
    p.add_argument("--m", type=parse_depths, default=[8])
    p.add_argument("--rho", type=_radius, default=0.8)
    p.add_argument("--grid", type=_positive_int, default=256)
    report_flags(p)
    p.set_defaults(run=cmd_approx_disc)

    p = sub.add_parser("approx-bidisc", help="convergence report on the bidisc")
    p.add_argument("--col", required=True)
    p.add_argument("--d1", type=int, required=True)
    p.add_argument("--d2", type=int, required=True)
    p.add_argument("--m", type=parse_depths, default=[6])
    p.add_argument("--rho", type=_radius, default=0.8)
    p.add_argument("--grid", type=_positive_int, default=64)
    report_flags(p)
    p.set_defaults(run=cmd_approx_bidisc)

    p = sub.add_parser("check-inner", help="boundary unitarity check")
    p.add_argument("--fn", required=True)
    p.add_argument("--grid", type=_positive_int, default=256)
    p.add_argument("--tol", type=_positive_float, default=1e-8)
    p.add_argument("--out")
    p.set_defaults(run=cmd_check_inner)

    p = sub.add_parser("random-inner", help="seeded Blaschke-Potapov product")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--alpha-bound", type=_radius, default=0.8)
    p.add_argument("--out")
    p.set_defaults(run=cmd_random_inner)

    p = sub.add_parser("fisher", help="convex combination of rational inner functions")
    p.add_argument("--fn", required=True)
    p.add_argument("--eps", type=_positive_float, required=True)
    p.add_argument("--budget", type=_positive_int, default=256)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(run=cmd_fisher)

    p = sub.add_parser("pg", help="Potapov-Ginzburg transform")
    p.add_argument("--fn", required=True)
    p.add_argument("--p", type=_positive_int, required=True)
    p.add_argument("--q", type=_positive_int, required=True)
    p.add_argument("--mode", choices=["forward", "inverse", "verify"], default="forward")
    p.add_argument("--points", help="semicolon-separated re,im pairs")
    p.add_argument("--grid", type=_positive_int, default=16)
    p.add_argument("--radius", type=_radius, default=0.5)
    p.add_argument("--pairs", type=_positive_int, default=10)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(run=cmd_pg)

    p = sub.add_parser("j-approx", help="rational J0-inner approximants")
    p.add_argument("--fn", required=True)
    p.add_argument("--p", type=_positive_int, required=True)
    p.add_argument("--q", type=_positive_int, required=True)
    p.add_argument("--m", type=parse_depths, default=[8])
    p.add_argument("--degree", type=_positive_int, default=12)
    p.add_argument("--from-transform", action="store_true",
                   help="--fn holds the Potapov-Ginzburg transform of the function")
    p.add_argument("--rho", type=_radius, default=0.7)
    p.add_argument("--grid", type=_positive_int, default=256)
    report_flags(p)
    p.set_defaults(run=cmd_j_approx)

    p = sub.add_parser("kl-approx", help="Krein-Langer approximants B^-1 L_m")
    p.add_argument("--b", required=True)
    p.add_argument("--l", required=True)
    p.add_argument("--m", type=parse_depths, default=[8])
    p.add_argument("--mode", choices=["compact", "circle"], default="compact")
    p.add_argument("--side", choices=["left", "right"], default="left")
    p.add_argument("--rho", type=_radius, default=0.9)
    p.add_argument("--pole-gap", type=_positive_float, default=0.1)
    p.add_argument("--eps", type=_positive_float, default=0.05)
    p.add_argument("--budget", type=_positive_int, default=256)
    p.add_argument("--grid", type=_positive_int, default=256)
    report_flags(p)
    p.set_defaults(run=cmd_kl_approx)

    for verb, fn in (("gamma-approx", cmd_gamma_approx), ("tetra-approx", cmd_tetra_approx)):
        p = sub.add_parser(verb, help="symmetrized bidisc / tetrablock approximants")
        p.add_argument("--fn", required=True)
        p.add_argument("--m", type=parse_depths, default=[8])
        p.add_argument("--rho", type=_radius, default=0.7)
        p.add_argument("--grid", type=_positive_int, default=256)
        report_flags(p)
        p.set_defaults(run=fn)

    p = sub.add_parser("gamma-check", help="membership in the symmetrized bidisc")
    p.add_argument("--s", type=parse_complex, required=True)
    p.add_argument("--p", type=parse_complex, required=True)
    p.add_argument("--boundary", action="store_true")
    p.add_argument("--open", action="store_true")
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(run=cmd_gamma_check)

    p = sub.add_parser("tetra-check", help="membership in the tetrablock")
    for name in ("--x1", "--x2", "--x3"):
        p.add_argument(name, type=parse_complex, required=True)
    p.add_argument("--boundary", action="store_true")
    p.add_argument("--open", action="store_true")
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(run=cmd_tetra_check)
    return parser


def _thread_limit():
    raw = os.environ.get("INNERAPPROX_THREADS")
    if not raw:
        return contextlib.nullcontext()
    try:
        n = int(raw)
    except ValueError as exc:
        raise ParseError(f"INNERAPPROX_THREADS must be an integer, got {raw!r}") from exc
    if n < 1:
        raise ParseError("INNERAPPROX_THREADS must be positive")
    return threadpool_limits(limits=n)


def run(argv: Sequence[str] | None = None) -> int:
    """Parse ``argv`` and execute the verb, returning the exit status."""
    try:
        args = build_parser().parse_args(argv)
        with _thread_limit():
            status = args.run(args)
        return EXIT_OK if status is None else status
    except (NotContractive, NotInner, NotUnitary, InvariantViolation) as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (NumericalFailure, BudgetExhausted, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ParseError, DepthTooSmall, InvalidRadius, DimensionMismatch, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
