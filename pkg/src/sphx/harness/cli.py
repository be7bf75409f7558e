"""The ``sphx`` command line.

Exit codes: 0 when every check passes, 1 when a check fails, 2 for
configuration or usage errors.  ``SPHX_OUT`` overrides the output directory.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

import numpy as np

from .. import asymptotics as asy
from .. import exponents as ex
from .. import kernels as kn
from ..rootsys import catalog_json, get_space
from ..spherical import beams as bm
from ..spherical.compact import phi_compact
from ..spherical.noncompact import phi_noncompact
from ..spherical.quadrature import QuadratureSpec
from ..spherical.realization import coords_from_diag
from . import checks
from .config import DEFAULT_SPACES, ConfigError, RunConfig, load_config
from .golden import bless, emit_exponent_graph, golden_compare
from .suite import exit_status, render_csv, run_suite, write_csv

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

EXPONENT_COLUMNS = ("space", "p", "inv_p", "delta0", "delta", "L_v0", "L_v1", "maximizer", "kink_p")
EVAL_COLUMNS = ("space", "t", "lambda", "H", "re_phi", "im_phi", "err_est", "nodes")
VERIFY_COLUMNS = ("t", "H", "phi_re", "phi_im", "model_re", "model_im", "rel_err", "envelope", "ratio")


class UsageError(ConfigError):
    pass


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.replace(";", ",").split(",") if x.strip())
    except ValueError as exc:
        raise UsageError(f"expected a comma-separated list of numbers, got {text!r}") from exc


def _vec(v) -> str:
    return " ".join(repr(float(x)) for x in np.atleast_1d(v))


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _out_dir(args) -> Path:
    if os.environ.get("SPHX_OUT"):
        return Path(os.environ["SPHX_OUT"])
    return Path(getattr(args, "output_dir", None) or RunConfig().output_dir)


def _report_path(args, attr: str, default_name: str) -> Path:
    given = getattr(args, attr, None)
    return Path(given) if given else _out_dir(args) / default_name


def _space(sid: str):
    try:
        return get_space(sid)
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc)) from exc


# ---------------------------------------------------------------------------
# subcommands


def cmd_catalog(args) -> int:
    spaces = [_space(s) for s in args.space] if args.space else None
    _emit(catalog_json(spaces) + "\n", args.out)
    return EXIT_OK


def _p_label(s) -> str:
    return "inf" if s == 0 else checks._fmt_frac(1 / s)


def cmd_exponent(args) -> int:
    if args.graph:
        sp = _space(args.space[0] if args.space else "SL3R")
        p_grid = args.p.split(",") if args.p else None
        _emit(emit_exponent_graph(sp, p_grid, npts=args.npts), args.out)
        return EXIT_OK
    rows, fails = [], 0
    for sid in args.space or DEFAULT_SPACES:
        sp = _space(sid)
        kink = ex.kink_inv_p(sp.n, sp.r)
        if args.p:
            try:
                grid = sorted({ex.inv_p(p) for p in args.p.split(",")})
            except (ValueError, ZeroDivisionError) as exc:
                raise UsageError(str(exc)) from exc
        else:
            grid = ex.default_s_grid(args.npts, [kink, ex.kink_inv_p(sp.n, 1)])
        for s in grid:
            v0, v1 = (0,) * sp.r, (1,) * sp.r
            p = checks._p_of(s)
            fails += not ex.delta_relation_check(sp, p)
            locus = "|".join("".join(map(str, v)) for v in sorted(ex.maximizer_locus(sp, p)))
            rows.append((sp.id, _p_label(s), s, ex.delta_s(s, sp.n, 1), ex.delta_s(s, sp.n, sp.r),
                         ex.L_of_s(v0, s, sp), ex.L_of_s(v1, s, sp), locus, _p_label(kink)))
    _emit(render_csv(EXPONENT_COLUMNS, rows), args.out)
    return EXIT_FAIL if fails else EXIT_OK


def cmd_eval(args) -> int:
    sp = _space(args.space)
    lam = np.array(_floats(args.lam))
    H = np.array(_floats(args.H))
    if lam.shape != (sp.r,) or H.shape != (sp.r,):
        raise UsageError(f"{sp.id} has rank {sp.r}; --lambda and --H need {sp.r} coordinates")
    q = QuadratureSpec(points_per_dim=args.quad_points, refinement=args.tol)
    rows = []
    for t in _floats(args.t):
        try:
            if sp.is_compact:
                res = phi_compact(sp, t * lam, H, q)
            else:
                res = phi_noncompact(sp, t * lam, H, q)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        rows.append((sp.id, t, _vec(lam), _vec(H), res.value.real, res.value.imag, res.abs_error_est,
                     res.nodes_used))
    _emit(render_csv(EVAL_COLUMNS, rows), args.out)
    return EXIT_OK


def _path_points(sp, t: float, which: str) -> np.ndarray:
    if which == "wall-crossing":
        return asy.wall_crossing_path(sp, t)
    return asy.regular_path(sp)


def _verify_asymptotic(args, sp, ladder, tols) -> tuple[list, dict, bool]:
    if sp.is_compact:
        raise UsageError("verify asymptotic needs a noncompact space")
    lam = asy.sl3_direction() if sp.id == "SL3R" else sp.roots.simple_roots[0].vector
    rows, per_t = [], {}
    ok = True
    for t in ladder:
        errs = []
        for H in _path_points(sp, t, args.H_path):
            gap = min(abs(a(H)) for a in sp.roots.positive_roots)
            if gap == 0.0:
                continue
            res = asy.asymptotic_error(sp, lam, t, H)
            env = asy.envelope_noncompact(sp, t, H)
            rows.append((t, _vec(H), res["phi"].real, res["phi"].imag, res["model"].real, res["model"].imag,
                         res["rel_err"], env, abs(res["phi"]) / env))
            errs.append(res["amp_err"])
            if sp.r == 1 and args.H_path == "regular":
                ok &= res["amp_err"] <= tols["c4_h2_bound_factor"] / (t * gap)
        per_t[t] = float(np.sqrt(np.mean(np.square(errs)))) if errs else float("nan")
    meta = {f"rms_amp_err.t={t:g}": v for t, v in per_t.items()}
    if sp.r > 1 or args.H_path != "regular":
        # normalized error must shrink as t doubles
        vals = [per_t[t] for t in ladder]
        ok = all(b < a for a, b in zip(vals, vals[1:]))
    return rows, meta, ok


def _verify_envelope(args, sp, ladder, tols) -> tuple[list, dict, bool]:
    if sp.is_compact:
        mu = sp.weight_lattice_basis[0] if sp.r == 1 else sp.weight_lattice_basis.sum(axis=0)
        rep, raw = asy.envelope_sweep_compact(sp, mu, [int(t) for t in ladder])
        key = "c5_envelope_drift"
    else:
        lam = asy.sl3_direction() if sp.id == "SL3R" else sp.roots.simple_roots[0].vector
        rep, raw = asy.envelope_sweep_noncompact(sp, lam, ladder, args.H_path)
        key = "c3_envelope_drift"
    rows = [(t, _vec(H), complex(phi).real, complex(phi).imag, math.nan, math.nan, math.nan, env, ratio)
            for t, H, phi, env, ratio in raw]
    drift = rep.drift()
    meta = {"drift": drift, "max_ratio": rep.max_ratio, "bound": tols[key]}
    return rows, meta, drift <= tols[key]


def _verify_hessian(args, sp, ladder, tols) -> tuple[list, dict, bool]:
    """One row per diagonal entry: FD in ``phi_re``, formula in ``model_re``."""
    rows, worst = [], 0.0
    if sp.id == "SU2group":
        for th1, th in checks.SU2_HESS:
            for w in (0, 1):
                fd = float(asy.hessian_compact_fd(sp, checks.SU2_MU, th1, th, w)[0, 0])
                model = float(asy.hessian_compact(sp, checks.SU2_MU, th1, th, w)[0, 0])
                worst = max(worst, abs(fd - model))
                rows.append((w, f"{th1!r} {th!r}", fd, 0.0, model, 0.0, abs(fd - model), math.nan, math.nan))
    elif sp.id in ("H2", "SL3R"):
        if sp.id == "H2":
            Lam, H, nw = np.array(checks.H2_HESS[0]), np.array(checks.H2_HESS[1]), 2
        else:
            Lam = coords_from_diag(sp, checks.SL3_HESS_LAM)
            H = coords_from_diag(sp, checks.SL3_HESS_H)
            nw = 6
        for w in range(nw):
            fd = np.diag(asy.hessian_noncompact_fd(sp, Lam, H, w))
            model = np.diag(asy.hessian_noncompact(sp, Lam, H, w))
            for a, b in zip(fd, model):
                worst = max(worst, abs(a - b))
                rows.append((w, _vec(H), a, 0.0, b, 0.0, abs(a - b), math.nan, math.nan))
    else:
        raise UsageError("verify hessian supports H2, SL3R and SU2group")
    meta = {"t_column": "Weyl element index", "rel_err_column": "absolute difference", "max_abs_diff": worst, "bound": tols["c8_hessian"]}
    return rows, meta, worst <= tols["c8_hessian"]


def cmd_verify(args) -> int:
    cfg = load_config(args.config)
    sp = _space(args.space)
    ladder = _floats(args.t_ladder) if args.t_ladder else (
        cfg.compact_t_ladder if sp.is_compact else cfg.t_ladder)
    if not ladder or any(b <= a for a, b in zip(ladder, ladder[1:])):
        raise UsageError("--t-ladder must be non-empty and strictly increasing")
    fn = {"asymptotic": _verify_asymptotic, "envelope": _verify_envelope, "hessian": _verify_hessian}[args.what]
    rows, meta, ok = fn(args, sp, ladder, cfg.tolerances)
    meta = {"space": sp.id, "check": args.what, "H_path": args.H_path, "passed": ok, **meta}
    path = write_csv(_report_path(args, "report", f"verify_{args.what}_{sp.id}.csv"), VERIFY_COLUMNS, rows, meta)
    print(f"{'PASS' if ok else 'FAIL'} verify {args.what} {sp.id} -> {path}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_kernel(args) -> int:
    cfg = load_config(args.config)
    space = args.space.lower()
    if space not in ("h2", "s2"):
        raise UsageError("--space must be h2 or s2")
    t = float(args.t)
    out = _report_path(args, "out", f"kernel_{args.action}_{space}_t{t:g}.csv")
    out.parent.mkdir(parents=True, exist_ok=True)
    if args.action == "dyadic":
        if space != "h2":
            raise UsageError("kernel dyadic is defined on h2 only")
        ds = kn.dyadic_scaling(t, radius=cfg.dyadic_radius)
        meta = {"space": "H2", "t": t, "radius": ds.radius, "sup_slope": ds.sup_slope,
                "transform_slope": ds.transform_slope, "fit_ms": " ".join(map(str, ds.fit_ms))}
        rows = [(m, int(m in ds.fit_ms), s, ts, am)
                for m, s, ts, am in zip(ds.ms, ds.sup, ds.transform_sup, ds.transform_argmax)]
        write_csv(out, ("m", "fitted", "sup_norm", "transform_sup", "transform_argmax"), rows, meta)
        ok = (abs(ds.sup_slope + 0.5) <= cfg.tol("c7_sup_slope")
              and abs(ds.transform_slope - 1.0) <= cfg.tol("c7_transform_slope"))
        print(f"{'PASS' if ok else 'FAIL'} kernel dyadic sup_slope={ds.sup_slope:.4f} "
              f"transform_slope={ds.transform_slope:.4f} -> {out}")
        return EXIT_OK if ok else EXIT_FAIL
    if space == "h2":
        table = kn.kernel_table(t, cfg.kernel_radius, args.grid_points, args.Lambda)
        rep = kn.kernel_envelope_check(table)
        kn.table_to_csv(table, out, {"envelope_ratio": rep.ratios})
        ok = bool(table.metadata.get("converged", True))
        summary = f"max_ratio={rep.max_ratio:.4g} ratio_r<1/t={rep.ratio_small_r:.4g}"
        if args.action == "check":
            rt = kn.round_trip(kn.build_bump(cfg.kernel_radius), t)
            ok &= rt["max_rel_err"] <= cfg.tol("c6_round_trip") and math.isfinite(rep.max_ratio)
            summary += f" round_trip={rt['max_rel_err']:.3g}"
    else:
        if not float(t).is_integer():
            raise UsageError("s2 projector needs an integer degree --t")
        P = kn.compact_projector(int(t))
        n = args.grid_points or 2001
        thetas = np.linspace(0.0, math.pi, n)
        table = P.table(thetas)
        ratio = kn.compact_pointwise_ratio(P, thetas)
        kn.table_to_csv(table, out, {"pointwise_ratio": ratio})
        ok = P.residual_ok
        summary = f"outside_mass={P.outside_mass:.3g} max_pointwise_ratio={float(np.max(ratio)):.4g}"
        if args.action == "check":
            ok &= P.outside_mass <= cfg.tol("c10_localization")
    if args.action == "build":
        print(f"wrote {out} ({summary})")
        return EXIT_OK
    print(f"{'PASS' if ok else 'FAIL'} kernel check {space} t={t:g} {summary} -> {out}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_beam(args) -> int:
    cfg = load_config(args.config)
    sp = _space(args.space)
    if sp.id not in checks.BEAM_SPACES:
        raise UsageError(f"beam supports {checks.BEAM_SPACES}")
    ladder = [int(t) for t in (_floats(args.t_ladder) if args.t_ladder else cfg.compact_t_ladder)]
    ps = args.p.split(",") if args.p else ["2", "4", "8", "64"]
    rows, ok = [], True
    l2 = bm.beam_l2_lower(sp, ladder, cfg.tol("c9_l2_slope"))
    ok &= l2.passed
    rows.append(("beam_l2", 2, l2.slope, l2.expected, int(l2.passed)))
    for p in ps:
        pv = math.inf if p == "inf" else float(p)
        if math.isinf(pv):
            pv = 64.0  # L^inf proxy
        fit = bm.beam_lp_scaling(sp, pv, ladder, cfg.tol("c9_lp_slope"))
        ok &= fit.passed
        rows.append(("beam_lp", pv, fit.slope, fit.expected, int(fit.passed)))
        if pv > 1 / float(ex.kink_inv_p(sp.n, sp.r)):
            z = bm.zonal_lp_scaling(sp, pv, ladder, cfg.tol("c9_lp_slope"))
            ok &= z.passed
            rows.append(("zonal_lp", pv, z.slope, z.expected, int(z.passed)))
    out = _report_path(args, "report", f"beam_{sp.id}.csv")
    write_csv(out, ("quantity", "p", "slope", "expected", "passed"), rows,
              {"space": sp.id, "t_ladder": " ".join(map(str, ladder))})
    print(f"{'PASS' if ok else 'FAIL'} beam {sp.id} -> {out}")
    return EXIT_OK if ok else EXIT_FAIL


def _suite_overrides(args) -> dict:
    ov = {"suite": args.suite, "spaces": args.spaces, "t_ladder": args.t_ladder,
          "compact_t_ladder": args.compact_t_ladder, "seed": args.seed, "output_dir": args.output_dir,
          "workers": args.workers}
    if args.no_literal:
        ov["include_literal"] = False
    if args.tol:
        tols = {}
        for item in args.tol:
            k, _, v = item.partition("=")
            try:
                tols[k] = float(v)
            except ValueError as exc:
                raise UsageError(f"bad --tol {item!r}; expected name=value") from exc
        ov["tolerances"] = tols
    return ov


def cmd_suite(args) -> int:
    cfg = load_config(args.config, _suite_overrides(args))
    results = run_suite(cfg)
    for r in results:
        tag = " [literal]" if r.literal else ""
        print(f"{r.status.upper():4s} {r.name}{tag}  measured={r.measured:.6g} bound={r.bound:.6g}")
    n_fail = sum(r.failed for r in results)
    print(f"{len(results) - n_fail}/{len(results)} checks without failure; output in {cfg.output_dir}")
    return exit_status(results)


def cmd_golden(args) -> int:
    cfg = load_config(args.config)
    if args.bless:
        paths = bless(args.run_dir, args.golden_dir)
        print(f"blessed {len(paths)} files into {args.golden_dir}")
        return EXIT_OK
    if not Path(args.golden_dir).is_dir():
        raise UsageError(f"golden directory not found: {args.golden_dir}")
    res = golden_compare(args.run_dir, args.golden_dir, cfg.tolerances)
    for line in res.detail["schema_errors"] + res.detail["drifts"]:
        print(line)
    print(f"{res.status.upper()} golden compare: {res.detail['files_compared']} files, "
          f"{len(res.detail['schema_errors'])} schema errors, {len(res.detail['drifts'])} drifts")
    return EXIT_OK if res.status == "pass" else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors are configuration errors
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sphx", description="Spherical functions, exponents and projector kernels.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, out_flag="--out"):
        sp.add_argument("--config", help="JSON run configuration")
        sp.add_argument("--output-dir", help="output directory (SPHX_OUT wins)")
        if out_flag:
            sp.add_argument(out_flag, dest=out_flag.lstrip("-"), help="output file")

    c = sub.add_parser("catalog", help="print the space catalog as JSON")
    c.add_argument("--space", action="append", help="restrict to these ids (repeatable)")
    c.add_argument("--out")
    c.set_defaults(fn=cmd_catalog)

    e = sub.add_parser("exponent", help="exponent table or exponent graph as CSV")
    e.add_argument("--space", action="append")
    e.add_argument("--p", help="comma-separated p values (2..inf)")
    e.add_argument("--npts", type=int, default=50)
    e.add_argument("--graph", action="store_true", help="emit columns inv_p,delta0,delta")
    e.add_argument("--out")
    e.set_defaults(fn=cmd_exponent)

    v = sub.add_parser("eval", help="evaluate a spherical function")
    v.add_argument("--space", required=True)
    v.add_argument("--t", required=True, help="scale(s), comma-separated")
    v.add_argument("--lambda", dest="lam", required=True, help="direction in flat coordinates")
    v.add_argument("--H", required=True, help="point in flat coordinates")
    v.add_argument("--quad-points", type=int, default=None)
    v.add_argument("--tol", type=float, default=1e-10)
    v.add_argument("--out")
    v.set_defaults(fn=cmd_eval)

    r = sub.add_parser("verify", help="asymptotic, envelope or Hessian verification")
    r.add_argument("what", choices=("asymptotic", "envelope", "hessian"))
    r.add_argument("--space", required=True)
    r.add_argument("--t-ladder")
    r.add_argument("--H-path", choices=("wall-crossing", "regular"), default="regular")
    r.add_argument("--report")
    common(r, None)
    r.set_defaults(fn=cmd_verify)

    k = sub.add_parser("kernel", help="projector kernel tables and checks")
    k.add_argument("action", choices=("build", "check", "dyadic"))
    k.add_argument("--space", default="h2")
    k.add_argument("--t", type=float, default=20.0)
    k.add_argument("--Lambda", type=float, default=1.0)
    k.add_argument("--grid-points", type=int, default=None)
    common(k)
    k.set_defaults(fn=cmd_kernel)

    b = sub.add_parser("beam", help="Gaussian beam and zonal L^p scalings")
    b.add_argument("--space", default="S2")
    b.add_argument("--t-ladder")
    b.add_argument("--p", help="comma-separated p values; inf means the p=64 proxy")
    b.add_argument("--report")
    common(b, None)
    b.set_defaults(fn=cmd_beam)

    s = sub.add_parser("suite", help="run verification suites")
    s.add_argument("--config")
    s.add_argument("--suite")
    s.add_argument("--spaces")
    s.add_argument("--t-ladder")
    s.add_argument("--compact-t-ladder")
    s.add_argument("--seed", type=int)
    s.add_argument("--workers", type=int)
    s.add_argument("--output-dir")
    s.add_argument("--tol", action="append", help="override a tolerance, name=value (repeatable)")
    s.add_argument("--no-literal", action="store_true", help="skip the literal-reading checks")
    s.set_defaults(fn=cmd_suite)

    g = sub.add_parser("golden", help="compare a run directory with golden CSVs")
    g.add_argument("run_dir")
    g.add_argument("golden_dir")
    g.add_argument("--config")
    g.add_argument("--bless", action="store_true", help="copy run_dir CSVs into golden_dir instead")
    g.set_defaults(fn=cmd_golden)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return int(args.fn(args))
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
