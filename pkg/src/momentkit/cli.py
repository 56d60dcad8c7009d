"""Command-line front end.

Every subcommand builds a JSON-ready report, prints it in the requested
format and maps its status to an exit code::

    0  everything passed
    2  a definite failure (swapped with 0 by --expect-fail)
    3  inconclusive
    4  disagreement between a computation and a theorem
    1  usage or domain error
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from typing import Optional

from . import ball as B
from . import differences as D
from . import measures as M
from . import scenarios as S
from .errors import DisagreementError, MomentkitError, NonConvergence
from .expr import as_scalar, render
from .kernels import kernel_sum, parse_kernel, product
from .parser import parse
from .shifts import analyze

SCHEMA_ID = "momentkit/report-v1"
EXIT = {"pass": 0, "fail": 2, "inconclusive": 3, "disagreement": 4, "error": 1}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass(frozen=True)
class RunConfig:
    order: int = 30
    precision: Optional[int] = None
    rel_tol: float = 1e-10
    fmt: str = "json"
    jobs: int = 1

    def __post_init__(self):
        if self.order < 1:
            raise UsageError("--order must be at least 1")
        if self.precision is not None and self.precision < 64:
            raise UsageError("--precision must be at least 64 bits")
        if not 0 < self.rel_tol <= 1e-4:
            raise UsageError("--tol must lie in (0, 1e-4]")
        if self.jobs < 1:
            raise UsageError("--jobs must be at least 1")


def _env_precision() -> Optional[int]:
    raw = os.environ.get("MOMENTKIT_PRECISION")
    if not raw:
        return None
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"MOMENTKIT_PRECISION must be an integer, got {raw!r}") from None


def _status_of(verdict: D.Verdict) -> str:
    if isinstance(verdict, D.Fail):
        return "fail"
    if isinstance(verdict, D.Indeterminate):
        return "inconclusive"
    return "pass"


def _worst(*statuses: str) -> str:
    for s in ("fail", "inconclusive"):
        if s in statuses:
            return s
    return "pass"


# --------------------------------------------------------------------------
# subcommands; each returns (status, report)
# --------------------------------------------------------------------------


def _analysis_status(rep: dict) -> str:
    # the headline claim is subnormality; other verdicts are reported but informative
    sub = rep["subnormal"]
    if sub["result"] == "not-applicable":
        return "fail"
    return {"pass": "pass", "fail": "fail"}.get(sub["result"], "inconclusive")


def cmd_analyze(args, cfg: RunConfig):
    ks = parse_kernel(args.kernel)
    rep = analyze(ks.shift, cfg.order, cfg.precision)
    rep["kernel"] = ks.label()
    rep["precision"] = cfg.precision
    return _analysis_status(rep), rep


def cmd_sum(args, cfg: RunConfig):
    a, b = (parse_kernel(k) for k in args.kernel)
    ks = kernel_sum(a, b)
    rep = analyze(ks.shift, cfg.order, cfg.precision)
    rep["kernel"] = ks.label()
    rep["precision"] = cfg.precision
    return _analysis_status(rep), rep


def cmd_product(args, cfg: RunConfig):
    a, b = (parse_kernel(k) for k in args.kernel)
    k_max = args.kmax if args.kmax is not None else cfg.order + 3
    if k_max < cfg.order + 2:
        raise UsageError("--kmax must be at least order + 2 for the product")
    ks = product(a, b, k_max, cfg.precision)
    # the product is materialized, so the analysis must stay inside its prefix
    rep = analyze(ks.shift, min(cfg.order, k_max - 2), cfg.precision)
    rep["kernel"] = ks.label()
    rep["kmax"] = k_max
    rep["precision"] = cfg.precision
    return _analysis_status(rep), rep


def cmd_measure_verify(args, cfg: RunConfig):
    ks = parse_kernel(args.kernel)
    if ks.name is None:
        raise UsageError("measure verify needs a catalog kernel")
    name, _, rest = ks.name.partition("(")
    params = [as_scalar(p) for p in rest.rstrip(")").split(",") if p]
    dens = M.density_for_kernel(name, *params)
    rep = M.verify_moments(dens, ks.coeffs, args.kmax, cfg.rel_tol)
    out = rep.to_json()
    out["kernel"] = ks.label()
    out["ok"] = rep.ok(cfg.rel_tol)
    return ("pass" if out["ok"] else "fail"), out, rep


def cmd_decide(args, cfg: RunConfig):
    try:
        coeffs = [as_scalar(c) for c in args.poly.split(",")]
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"cannot read polynomial coefficients {args.poly!r}") from None
    dec = M.decide_reciprocal_polynomial(coeffs)
    out = dec.to_json()
    out["poly"] = [str(c) for c in coeffs]
    status = {"moment": "pass", "never-moment": "fail"}.get(dec.kind, "inconclusive")
    return status, out


def cmd_lommel(args, cfg: RunConfig):
    scan = M.lommel_sign_scan(as_scalar(args.p), args.xmax, args.samples)
    return ("fail" if scan.negative_found else "pass"), scan.to_json()


def _scenario_report(rep: S.ScenarioReport):
    return rep.outcome, rep.to_json()


def cmd_scenario(args, cfg: RunConfig):
    name = args.scenario
    if name == "thm22":
        rep = S.thm22(args.r, args.s, args.t, cfg.order, args.budget)
    elif name == "prop29":
        rep = S.prop29(parse(args.a), cfg.order, args.companion)
    elif name == "prop211":
        if args.scan:
            lams = [as_scalar(x) for x in args.scan.split(",")]
            out = S.prop211_lambda_scan(lams, args.lambdap, args.mu, cfg.order)
            out["scenario"] = "prop211-scan"
            return "pass", out
        rep = S.prop211(args.lam, args.lambdap, args.mu, cfg.order)
    elif name == "prop214":
        rep = S.prop214(parse(args.base), args.p, args.q, cfg.order)
    elif name == "thm216":
        rep = S.thm216(args.p, cfg.order, args.xmax, args.max_order)
    else:
        rep = S.conjecture_screen(parse_kernel(args.A), parse_kernel(args.B), cfg.order,
                                  args.tail, args.budget)
    return _scenario_report(rep)


def _slice(args, gamma: str) -> B.SliceRep:
    if args.norms:
        with open(args.norms, encoding="utf-8") as fh:
            norms = B.ReinhardtNorms.from_json(args.dim, fh.read())
    else:
        norms = B.ReinhardtNorms(args.dim)
    return B.SliceRep(norms, parse(gamma))


def cmd_ball(args, cfg: RunConfig):
    action = args.action
    if action == "analyze":
        if args.gamma and len(args.gamma) == 1:
            s = _slice(args, args.gamma[0])
        elif not args.gamma and args.lam is not None:
            s = B.pochhammer_slice(args.dim, args.lam)
        else:
            raise UsageError("ball analyze takes one --gamma or --lambda")
        mem = B.class_Knu_membership(s, cfg.order)
        cm = D.check_cm(s.gamma_sq, cfg.order, cfg.precision)
        contraction = B.is_spherical_contraction(s, cfg.order)
        out = {"dim": args.dim, "gamma_sq": render(s.gamma_sq), "norms": s.norms.provenance,
               "subnormal": cm.to_json(), "spherical_contraction": contraction.to_json(),
               "class_Knu": mem.to_json(), "caveat": D.FINITE_ORDER_CAVEAT}
        return _worst(_status_of(cm), _status_of(contraction)), out
    if action == "combine":
        if not args.gamma or len(args.gamma) != 2:
            raise UsageError("ball combine takes exactly two --gamma")
        comb = B.combine_slices(_slice(args, args.gamma[0]), _slice(args, args.gamma[1]))
        cm = D.check_cm(comb.gamma_sq, cfg.order, cfg.precision)
        out = {"dim": args.dim, "combined_gamma_sq": render(comb.gamma_sq),
               "combined_scale": str(comb.scale), "subnormal": cm.to_json(),
               "caveat": D.FINITE_ORDER_CAVEAT}
        return _status_of(cm), out
    if action == "thm37":
        if args.gamma:
            if len(args.gamma) != 2:
                raise UsageError("ball thm37 takes two --gamma or --lambda/--lambdap")
            s1, s2 = _slice(args, args.gamma[0]), _slice(args, args.gamma[1])
        elif args.lam is not None and args.lambdap is not None:
            s1 = B.pochhammer_slice(args.dim, args.lam)
            s2 = B.pochhammer_slice(args.dim, args.lambdap)
        else:
            raise UsageError("ball thm37 needs --lambda and --lambdap, or two --gamma")
        res = B.thm37_check(s1, s2, cfg.order)
    else:
        if not args.gamma or len(args.gamma) != 1:
            raise UsageError("ball thm39 takes exactly one --gamma")
        res = B.thm39_check(parse(args.gamma[0]), cfg.order, args.dim)
    out = res.to_json()
    out["dim"] = args.dim
    out["check"] = action
    return _status_of(res.verdict), out


def cmd_experiment(args, cfg: RunConfig):
    if args.experiment == "thm22-grid":
        grid = [as_scalar(x) for x in args.grid.split(",")]
        rows = S.thm22_grid(grid, cfg.order, args.budget, cfg.jobs)
        out = {"experiment": "thm22-grid", "grid": [str(g) for g in grid],
               "rows": [{"r": r, "s": s, "t": t, "outcome": o, "message": m}
                        for r, s, t, o, m in rows]}
        return ("disagreement" if any(o == "disagreement" for *_, o, _m in rows)
                else "pass"), out
    ps = [as_scalar(x) for x in args.grid.split(",")]
    rows = []
    for p in ps:
        for q in ps:
            if q < p:
                continue
            seq = S.recip(S.add(S.pow_k1(p), S.pow_k1(q)))
            prec = cfg.precision or max(192, cfg.order + 128)
            v = D.check_cm(seq, cfg.order, prec, sign_tolerance=0)
            rows.append({"p": str(p), "q": str(q), **v.to_json()})
    return "pass", {"experiment": "pq-scan", "order": cfg.order, "rows": rows}


# --------------------------------------------------------------------------
# output
# --------------------------------------------------------------------------


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, obj


def render_report(report: dict, fmt: str, extra=None) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if fmt == "csv":
        if extra is not None and hasattr(extra, "to_csv"):
            return extra.to_csv()
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        for k, v in _flatten(report):
            w.writerow([k, "" if v is None else v])
        return buf.getvalue()
    lines = [f"{report['command']}: {report['status']}"]
    if "claims" in report:
        for c in report["claims"]:
            lines.append(f"  {c['name']}: {c['observed']} (expected {c['expected']})")
    for k, v in _flatten({k: v for k, v in report.items()
                          if k not in ("claims", "verdicts", "command", "status", "schema")}):
        lines.append(f"  {k} = {v}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.add_argument("--expect-fail", action="store_true",
                   help="treat a definite failure as success and a pass as failure")
    p.add_argument("--order", type=int, default=None, help="difference order N")
    p.add_argument("--precision", type=int, default=None, help="working precision in bits")
    p.add_argument("--tol", type=float, default=1e-10, help="relative tolerance")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for grid scans")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    root = _Parser(prog="momentkit", description=__doc__.splitlines()[0])
    sub = root.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", parents=[common], help="shift analysis of one kernel")
    p.add_argument("--kernel", required=True)
    p.set_defaults(func=cmd_analyze, default_order=30)

    for name, func in (("sum", cmd_sum), ("product", cmd_product)):
        p = sub.add_parser(name, parents=[common], help=f"kernel {name} then analysis")
        p.add_argument("--kernel", action="append", required=True)
        p.add_argument("--kmax", type=int, default=None)
        p.set_defaults(func=func, default_order=30)

    p = sub.add_parser("measure", help="representing measures")
    msub = p.add_subparsers(dest="measure_cmd", required=True, parser_class=_Parser)
    v = msub.add_parser("verify", parents=[common], help="moment verification by quadrature")
    v.add_argument("--kernel", required=True)
    v.add_argument("--kmax", type=int, default=30)
    v.set_defaults(func=cmd_measure_verify, default_order=30)

    p = sub.add_parser("decide", parents=[common], help="reciprocal-polynomial decision")
    p.add_argument("--poly", required=True, help="comma-separated coefficients c0,c1,...")
    p.set_defaults(func=cmd_decide, default_order=30)

    p = sub.add_parser("lommel", parents=[common], help="sign scan of h on (0, xmax]")
    p.add_argument("--p", required=True)
    p.add_argument("--xmax", type=float, default=50.0)
    p.add_argument("--samples", type=int, default=1000)
    p.set_defaults(func=cmd_lommel, default_order=30)

    p = sub.add_parser("scenario", help="named reproductions")
    ssub = p.add_subparsers(dest="scenario", required=True, parser_class=_Parser)
    s = ssub.add_parser("thm22", parents=[common])
    for n in ("r", "s", "t"):
        s.add_argument(f"--{n}", required=True, type=as_scalar)
    s.add_argument("--budget", type=int, default=200)
    s.set_defaults(default_order=30)
    s = ssub.add_parser("prop29", parents=[common])
    s.add_argument("--a", required=True, help="coefficient expression")
    s.add_argument("--companion", choices=("szego", "bergman"), default="szego")
    s.set_defaults(default_order=30)
    s = ssub.add_parser("prop211", parents=[common])
    s.add_argument("--lambda", dest="lam", type=as_scalar)
    s.add_argument("--lambdap", required=True, type=as_scalar)
    s.add_argument("--mu", required=True, type=as_scalar)
    s.add_argument("--scan", default=None, help="comma-separated lambda values to scan")
    s.set_defaults(default_order=25)
    s = ssub.add_parser("prop214", parents=[common])
    s.add_argument("--base", default="k+1")
    s.add_argument("--p", required=True, type=as_scalar)
    s.add_argument("--q", required=True, type=as_scalar)
    s.set_defaults(default_order=30)
    s = ssub.add_parser("thm216", parents=[common])
    s.add_argument("--p", required=True, type=as_scalar)
    s.add_argument("--xmax", type=float, default=50.0)
    s.add_argument("--max-order", type=int, default=S.THM216_MAX_ORDER)
    s.set_defaults(default_order=25)
    s = ssub.add_parser("conjecture", parents=[common])
    s.add_argument("--A", required=True)
    s.add_argument("--B", required=True)
    s.add_argument("--tail", type=int, default=200)
    s.add_argument("--budget", type=int, default=200)
    s.set_defaults(default_order=30)
    for s in ssub.choices.values():
        s.set_defaults(func=cmd_scenario)

    p = sub.add_parser("ball", parents=[common], help="spherically balanced kernels")
    p.add_argument("action", choices=("analyze", "combine", "thm37", "thm39"))
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--gamma", action="append", default=None)
    p.add_argument("--lambda", dest="lam", type=as_scalar, default=None)
    p.add_argument("--lambdap", type=as_scalar, default=None)
    p.add_argument("--norms", default=None, help="JSON table of monomial norms")
    p.set_defaults(func=cmd_ball, default_order=25)

    p = sub.add_parser("experiment", parents=[common], help="parameter scans")
    p.add_argument("experiment", choices=("thm22-grid", "pq-scan"))
    p.add_argument("--grid", required=True, help="comma-separated parameter values")
    p.add_argument("--budget", type=int, default=200)
    p.set_defaults(func=cmd_experiment, default_order=30)
    return root


def _command_name(args) -> str:
    if args.command == "scenario":
        return f"scenario {args.scenario}"
    if args.command == "measure":
        return "measure verify"
    if args.command in ("ball", "experiment"):
        return f"{args.command} {getattr(args, 'action', None) or args.experiment}"
    return args.command


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(argv)
        if args.command == "scenario" and args.scenario == "prop211" \
                and args.lam is None and not args.scan:
            raise UsageError("prop211 needs --lambda or --scan")
        precision = args.precision if args.precision is not None else _env_precision()
        order = args.order if args.order is not None else args.default_order
        cfg = RunConfig(order, precision, args.tol, args.format, args.jobs)
        result = args.func(args, cfg)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT["error"]
    except DisagreementError as exc:
        print(f"disagreement: {exc}", file=sys.stderr)
        return EXIT["disagreement"]
    except NonConvergence as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT["inconclusive"]
    except (MomentkitError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT["error"]
    status, report = result[0], result[1]
    extra = result[2] if len(result) > 2 else None
    report = {"schema": SCHEMA_ID, "command": _command_name(args), "status": status, **report}
    sys.stdout.write(render_report(report, cfg.fmt, extra))
    code = EXIT[status]
    if args.expect_fail and code in (0, 2):
        code = 2 - code
    return code


if __name__ == "__main__":
    sys.exit(main())
