"""Command-line entry point: ``dunkldisk <command> ...``.

Commands
--------
verify      run a verification sweep and write a report
basis       evaluate phi_n or a coefficient series at points
kernel      evaluate a reproducing kernel at (z, w) pairs
project     apply a projection or boundary transform to a series
norms       p-means and normalised growth ratios of a series
plot-data   CSV grids for plotting |phi_n|, |kernel| or mean profiles
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys

import numpy as np

from . import analysis, basis, harness, kernels, operators
from .quadrature import build_circle_rule, build_disk_rule, DEFAULT_N_ANGULAR, DEFAULT_N_RADIAL

log = logging.getLogger("dunkldisk")

PROJECT_VARIANTS = ("bergman", "w1", "w2", "tilde-w1", "tilde-w2", "szego", "poisson")


class UsageError(ValueError):
    pass


# -- argument helpers ---------------------------------------------------------

def parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise UsageError(f"cannot parse complex number {text!r}") from exc


def parse_points(items) -> np.ndarray:
    """Points from literals ("0.3+0.2j", comma lists) or @file.json holding [[re, im], ...] or strings."""
    out = []
    for item in items:
        if item.startswith("@"):
            with open(item[1:], encoding="utf-8") as fh:
                data = json.load(fh)
            for v in data:
                out.append(complex(*v) if isinstance(v, (list, tuple)) else parse_complex(str(v)))
        else:
            out.extend(parse_complex(s) for s in item.split(",") if s)
    return np.array(out, dtype=complex)


def parse_rule_size(text: str | None) -> tuple[int, int]:
    """"N" gives N angular and 3N/4 radial nodes; "NR,NA" sets both."""
    if text is None:
        return DEFAULT_N_RADIAL, DEFAULT_N_ANGULAR
    parts = text.split(",")
    try:
        if len(parts) == 1:
            na = int(parts[0])
            nr = max(2, 3 * na // 4)
        elif len(parts) == 2:
            nr, na = int(parts[0]), int(parts[1])
        else:
            raise ValueError
    except ValueError as exc:
        raise UsageError(f"--rule-size wants N or NR,NA; got {text!r}") from exc
    if nr < 1 or na < 1:
        raise UsageError("rule sizes must be positive")
    return nr, na


def load_series(path: str, lam: float | None) -> basis.CoeffSeries:
    with open(path, encoding="utf-8") as fh:
        f = basis.CoeffSeries.from_dict(json.load(fh))
    if lam is not None and lam != f.lam:
        raise basis.LambdaMismatch(f"--lambda {lam} disagrees with lambda {f.lam} in {path}")
    return f


def _lam(args, default=None):
    if args.lam is None:
        if default is None:
            raise UsageError("--lambda is required for this command")
        return default
    if not args.lam >= 0:
        raise UsageError("--lambda must be >= 0")
    return args.lam


def _writer(args):
    fh = open(args.out, "w", encoding="utf-8", newline="") if args.out else sys.stdout
    return fh, csv.writer(fh, lineterminator="\n")


def _fmt(x: float) -> str:
    return repr(float(x))


# -- commands -----------------------------------------------------------------

def cmd_verify(args) -> int:
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            cfg = harness.SweepConfig.from_json(fh.read())
    else:
        cfg = harness.SweepConfig()
    over = {}
    if args.lam is not None:
        over["lambdas"] = [args.lam]
    if args.seed is not None:
        over["seed"] = args.seed
    if args.rule_size is not None:
        over["n_radial"], over["n_angular"] = parse_rule_size(args.rule_size)
    if over:
        cfg = harness.SweepConfig.from_dict({**cfg.to_dict(), **over})
    reports = harness.run_sweep(cfg)
    if args.out:
        harness.emit_report(reports, args.out, args.format, cfg)
    else:
        sys.stdout.write(harness.render_report(reports, args.format, cfg))
    counts = {s: sum(r.status == s for r in reports) for s in harness.STATUSES}
    log.info("verify: %s", ", ".join(f"{k} {v}" for k, v in counts.items()))
    return 1 if harness.has_failures(reports) else 0


def cmd_basis(args) -> int:
    z = parse_points(args.points)
    fh, w = _writer(args)
    try:
        if args.input:
            f = load_series(args.input, args.lam)
            w.writerow(["lambda", "re_z", "im_z", "re_val", "im_val"])
            for zi, v in zip(z, np.atleast_1d(f(z))):
                w.writerow([_fmt(f.lam), _fmt(zi.real), _fmt(zi.imag), _fmt(v.real), _fmt(v.imag)])
        else:
            lam = _lam(args, 0.0)
            w.writerow(["lambda", "n", "re_z", "im_z", "re_val", "im_val"])
            for n in args.n:
                for zi, v in zip(z, np.atleast_1d(basis.phi(n, lam, z))):
                    w.writerow([_fmt(lam), n, _fmt(zi.real), _fmt(zi.imag), _fmt(v.real), _fmt(v.imag)])
    finally:
        if fh is not sys.stdout:
            fh.close()
    return 0


def cmd_kernel(args) -> int:
    lam = _lam(args, 0.0)
    if args.random:
        rng = np.random.default_rng(args.seed or 0)
        r = args.max_radius * np.sqrt(rng.random((2, args.random)))
        ang = (2 * rng.random((2, args.random)) - 1) * np.pi
        z, wp = r * np.exp(1j * ang)
    else:
        z, wp = parse_points(args.z), parse_points(args.w)
        if z.size != wp.size:
            if z.size == 1 or wp.size == 1:
                z, wp = np.broadcast_arrays(z, wp)
            else:
                raise UsageError("--z and --w must have equal length (or one of them a single point)")
    ev = kernels.KernelEval(args.kind, lam, args.strategy, kernels.Adaptive(args.tolerance or 1e-12))
    res = kernels.evaluate(ev, z, wp, full_output=True)
    vals = np.atleast_1d(res.value)
    terms = np.broadcast_to(np.atleast_1d(res.terms_used), vals.shape)
    fh, w = _writer(args)
    try:
        w.writerow(["kind", "lambda", "re_z", "im_z", "re_w", "im_w", "re_val", "im_val", "strategy", "terms_used"])
        for zi, wi, v, t in zip(z, wp, vals, terms):
            w.writerow([ev.kind.value, _fmt(lam), _fmt(zi.real), _fmt(zi.imag), _fmt(wi.real), _fmt(wi.imag),
                        _fmt(v.real), _fmt(v.imag), kernels.Strategy(res.strategy).value, int(t)])
    finally:
        if fh is not sys.stdout:
            fh.close()
    return 0


def cmd_project(args) -> int:
    f = load_series(args.input, args.lam)
    z = parse_points(args.grid)
    nr, na = parse_rule_size(args.rule_size)
    tol = args.tolerance or 1e-12
    if args.variant in ("szego", "poisson"):
        rule = build_circle_rule(f.lam, na)
        op = operators.szego_transform if args.variant == "szego" else operators.poisson_integral
        vals = op(f, z, rule, tol=tol)
    else:
        rule = build_disk_rule(f.lam, nr, na)
        vals = operators.weighted_project(f, z, rule, args.variant, tol=tol)
    fh, w = _writer(args)
    try:
        w.writerow(["re_z", "im_z", "re_val", "im_val"])
        for zi, v in zip(z, np.atleast_1d(vals)):
            w.writerow([_fmt(zi.real), _fmt(zi.imag), _fmt(v.real), _fmt(v.imag)])
    finally:
        if fh is not sys.stdout:
            fh.close()
    return 0


def cmd_norms(args) -> int:
    f = load_series(args.input, args.lam)
    nr, na = parse_rule_size(args.rule_size)
    rule = build_circle_rule(f.lam, na)
    disk = build_disk_rule(f.lam, nr, na) if args.space == "bergman" else None
    radii = np.array(args.radii) if args.radii else np.array(analysis.GEOMETRIC_RADII)
    fh, w = _writer(args)
    try:
        w.writerow(["lambda", "p", "r", "M_p", "normalized_ratio"])
        for p in args.p:
            ell = args.ell if args.ell is not None else p
            rep = analysis.growth_exponent_check(f, p, ell, radii, args.space, rule, disk)
            prof = analysis.mean_profile(f, ell, radii, rule)
            for r, m, q in zip(radii, prof.means, rep.ratios):
                w.writerow([_fmt(f.lam), _fmt(p), _fmt(r), _fmt(m), _fmt(q)])
    finally:
        if fh is not sys.stdout:
            fh.close()
    return 0


def cmd_plot_data(args) -> int:
    lam = _lam(args, 0.0)
    m = args.resolution
    fh, w = _writer(args)
    try:
        if args.what == "mean-profile":
            f = load_series(args.input, args.lam) if args.input else basis.CoeffSeries.unit(lam, args.n)
            rule = build_circle_rule(f.lam, parse_rule_size(args.rule_size)[1])
            radii = np.linspace(0.0, 1.0, m)
            w.writerow(["lambda", "p", "r", "M_p"])
            for p in args.p:
                for r, v in zip(radii, analysis.mean_profile(f, p, radii, rule).means):
                    w.writerow([_fmt(f.lam), _fmt(p), _fmt(r), _fmt(v)])
            return 0
        # polar grid inside the disk, radius up to max_radius
        r = np.linspace(0.0, args.max_radius, m)
        th = np.linspace(-np.pi, np.pi, 2 * m, endpoint=False)
        z = (r[:, None] * np.exp(1j * th)[None, :]).ravel()
        if args.what == "phi":
            vals = basis.phi(args.n, lam, z)
        else:
            wpt = parse_complex(args.w)
            vals = kernels.evaluate(kernels.KernelEval(args.kind, lam), z, np.full_like(z, wpt))
        w.writerow(["re_z", "im_z", "abs_val", "arg_val"])
        for zi, v in zip(z, np.atleast_1d(vals)):
            w.writerow([_fmt(zi.real), _fmt(zi.imag), _fmt(abs(v)), _fmt(np.angle(v))])
    finally:
        if fh is not sys.stdout:
            fh.close()
    return 0


# -- parser -------------------------------------------------------------------

def _global_flags(ap, suppress: bool):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    ap.add_argument("--lambda", dest="lam", type=float, default=d(None), help="deformation parameter lambda >= 0")
    ap.add_argument("--rule-size", default=d(None), help="quadrature size: N (angular) or NR,NA")
    ap.add_argument("--tolerance", type=float, default=d(None), help="adaptive kernel truncation tolerance")
    ap.add_argument("--seed", type=int, default=d(None), help="random seed")
    ap.add_argument("--dump-rule", metavar="PATH", default=d(None),
                    help="write the circle and disk rules for --lambda/--rule-size as JSON")
    ap.add_argument("-v", "--verbose", action="store_true", default=d(False))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dunkldisk", description=__doc__.splitlines()[0])
    _global_flags(ap, suppress=False)
    # the same flags are accepted after the subcommand; SUPPRESS keeps earlier values
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = ap.add_subparsers(dest="command")

    p = sub.add_parser("verify", parents=[common], help="run a verification sweep")
    p.add_argument("--config", default=None, help="sweep configuration JSON")
    p.add_argument("--out", default=None, help="report path (stdout if omitted)")
    p.add_argument("--format", choices=("json", "csv", "md"), default="json")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("basis", parents=[common], help="evaluate phi_n or a series")
    p.add_argument("--n", type=int, nargs="+", default=[0])
    p.add_argument("--points", nargs="+", required=True, help="complex points or @file.json")
    p.add_argument("--input", default=None, help="coefficient JSON instead of --n")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("kernel", parents=[common], help="evaluate a kernel")
    p.add_argument("--kind", choices=[k.value for k in kernels.KernelKind], default="cauchy")
    p.add_argument("--strategy", choices=[s.value for s in kernels.Strategy], default="series")
    p.add_argument("--z", nargs="+", default=None)
    p.add_argument("--w", nargs="+", default=None)
    p.add_argument("--random", type=int, default=0, help="sample this many (z, w) pairs instead")
    p.add_argument("--max-radius", type=float, default=0.95)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("project", parents=[common], help="apply a projection or boundary transform")
    p.add_argument("--variant", choices=PROJECT_VARIANTS, required=True)
    p.add_argument("--input", required=True, help="coefficient JSON")
    p.add_argument("--grid", nargs="+", required=True, help="complex points or @file.json")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("norms", parents=[common], help="p-means and normalised growth ratios")
    p.add_argument("--input", required=True, help="coefficient JSON")
    p.add_argument("--p", type=float, nargs="+", default=[2.0])
    p.add_argument("--ell", type=float, default=None, help="mean exponent (defaults to p)")
    p.add_argument("--space", choices=("hardy", "bergman"), default="hardy")
    p.add_argument("--radii", type=float, nargs="+", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_norms)

    p = sub.add_parser("plot-data", parents=[common], help="CSV grids for plotting")
    p.add_argument("--what", choices=("phi", "kernel", "mean-profile"), default="phi")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--kind", choices=[k.value for k in kernels.KernelKind], default="bergman")
    p.add_argument("--w", default="0.5")
    p.add_argument("--p", type=float, nargs="+", default=[2.0])
    p.add_argument("--input", default=None)
    p.add_argument("--resolution", type=int, default=32)
    p.add_argument("--max-radius", type=float, default=0.95)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_plot_data)
    return ap


def dump_rules(path: str, lam: float, rule_size: str | None):
    nr, na = parse_rule_size(rule_size)
    doc = {"circle": build_circle_rule(lam, na).to_dict(), "disk": build_disk_rule(lam, nr, na).to_dict()}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.dump_rule:
            dump_rules(args.dump_rule, _lam(args, 0.0), args.rule_size)
        if args.command is None:
            if args.dump_rule:
                return 0
            ap.print_help()
            return 2
        return args.func(args)
    except (UsageError, harness.ConfigInvalid, basis.LambdaMismatch, basis.DomainError,
            operators.RadiusCapExceeded, ValueError, OSError) as exc:
        print(f"dunkldisk: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
