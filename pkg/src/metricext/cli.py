"""Batch front end: ``metricext <subcommand> SPACE.json [flags]``.

Reports go to stdout as JSON; diagnostics go to stderr. Exit status is 0 on
success, 1 when an oracle finds a contract violation and 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction

from ._rational import Q
from .combinator import check_isosceles, proper_ultrametric, properize, properize_ult, quantize_metric
from .errors import MetricExtError
from .extension import (
    extend_metric_proper, extend_metric_proper_dense, extend_ultrametric_proper,
    extend_ultrametric_proper_dense,
)
from .metric import Flag, MetricTable, Report, ball, certify_proper, dist_to_set, proper_function_into, verify_axioms
from .retraction import BandedOrder, bdhm_retract, lipschitz_ratio, proper_retract
from .space import Subset
from .serialize import encode, parse_space, point_key, valueset_from_json
from .valueset import Geometric, HalfLine, sporadic_subset

DEFAULT_DEPTH = 64


class UsageError(Exception):
    pass


def _rational_arg(text):
    try:
        return Q(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None


def _depth_default():
    raw = os.environ.get("METRICEXT_DEPTH")
    if raw is None:
        return DEFAULT_DEPTH
    try:
        v = int(raw)
    except ValueError:
        raise UsageError(f"METRICEXT_DEPTH must be an integer, got {raw!r}") from None
    if v < 1:
        raise UsageError("METRICEXT_DEPTH must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="metricext", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("space", help="space JSON file ('-' for stdin)")
    common.add_argument("--depth", type=int, default=None,
                        help="lazy scan depth in blocks (default: $METRICEXT_DEPTH or 64)")
    common.add_argument("--prefix", type=int, default=12,
                        help="blocks of a lazy space shown in matrices and maps")
    common.add_argument("--no-verify", action="store_true", help="skip the axiom cross-check on load")
    common.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="verify the metric axioms")
    p.add_argument("--claim", choices=[f.value for f in Flag] + ["pseudo-metric"])

    p = sub.add_parser("ball", parents=[common], help="closed ball query")
    p.add_argument("--center", required=True)
    p.add_argument("--radius", type=_rational_arg, required=True)

    p = sub.add_parser("retract", parents=[common], help="well-order retraction onto the subset")
    p.add_argument("--tau", type=_rational_arg, default=Fraction(2))
    p.add_argument("--order", choices=["auto", "descending", "ascending"], default="auto",
                   help="band direction; auto is ascending for finite subsets, descending otherwise")
    p.add_argument("--permutations", type=int, default=0,
                   help="replay with this many random roster permutations (finite spaces)")

    p = sub.add_parser("extend", parents=[common], help="proper extension of the subset metric")
    p.add_argument("--mode", choices=["metric", "ultrametric"], default="metric")
    p.add_argument("--dense", action="store_true")
    p.add_argument("--eta", type=_rational_arg)
    p.add_argument("--tau", type=_rational_arg, default=Fraction(2))
    p.add_argument("--valueset")

    p = sub.add_parser("quantize", parents=[common], help="round an ultrametric into a sporadic set")
    p.add_argument("--valueset")

    p = sub.add_parser("properize", parents=[common], help="join with a generated proper function")
    p.add_argument("--mode", choices=["metric", "ultrametric"], default="metric")
    p.add_argument("--valueset")

    sub.add_parser("isosceles", parents=[common], help="check the isosceles property")
    return parser


def _validate(args):
    if args.depth is None:
        args.depth = _depth_default()
    if args.depth < 1:
        raise UsageError("--depth must be >= 1")
    if args.prefix < 1:
        raise UsageError("--prefix must be >= 1")
    tau = getattr(args, "tau", None)
    if tau is not None and tau <= 1:
        raise UsageError("--tau must exceed 1")
    if getattr(args, "dense", False):
        if args.eta is None:
            raise UsageError("--dense needs --eta")
    eta = getattr(args, "eta", None)
    if eta is not None and eta <= 0:
        raise UsageError("--eta must be positive")


def _points(sf, args):
    return sf.space.points(None if sf.space.is_finite else args.prefix)


def _matrix_json(M: MetricTable, pts):
    return {"points": [point_key(p) for p in pts], "matrix": [[str(M(x, y)) for y in pts] for x in pts]}


def _witness_json(M, args):
    W = M.witness
    if W is None:
        return None
    n = args.depth if not M.space.is_finite else min(args.depth, M.space.n_blocks)
    return {"rule": W.rule, "table": [str(W(k)) for k in range(n)]}


def _check_depth(sf, args):
    return None if sf.space.is_finite else args.prefix


def _valueset(args, sf, default):
    if getattr(args, "valueset", None):
        return valueset_from_json(args.valueset, "--valueset")
    return sf.valueset or default


def _parse_center(sf, raw):
    if sf.space.is_finite:
        if raw not in sf.space:
            raise UsageError(f"--center {raw!r} is not a point")
        return raw
    try:
        c = json.loads(raw)
    except json.JSONDecodeError:
        raise UsageError(f"--center {raw!r} is not a point of the lazy space") from None
    c = tuple(c) if isinstance(c, list) else c
    if c not in sf.space:
        raise UsageError(f"--center {raw!r} is not a point of the lazy space")
    return c


def cmd_check(sf, args):
    claim = args.claim or sf.metric.flag
    rep = verify_axioms(sf.metric, claim, _check_depth(sf, args))
    return {"claim": Flag.parse(claim).value}, {"axioms": rep}


def cmd_ball(sf, args):
    q = _parse_center(sf, args.center)
    pts = ball(sf.metric, q, args.radius)
    return {"center": point_key(q), "radius": str(args.radius), "ball": [point_key(p) for p in pts]}, {}


def _require_subset(sf):
    if sf.subset is None:
        raise UsageError("this subcommand needs a 'subset' in the space file")
    return sf.subset


def cmd_retract(sf, args):
    A = _require_subset(sf)
    tau = args.tau
    descending = not A.is_finite if args.order == "auto" else args.order == "descending"
    if sf.space.is_finite:
        r = bdhm_retract(sf.space, sf.metric, A, tau, BandedOrder(sf.metric, descending=descending))
        d = sf.metric
    else:
        if not descending:
            raise UsageError("lazy retractions onto infinite subsets use the descending order")
        r = proper_retract(sf.space, A, tau)
        d = r.metric
    pts = _points(sf, args)
    ratio = lipschitz_ratio(r, d, None if sf.space.is_finite else args.prefix)
    bad = [(x, r(x)) for x in pts if d(x, r(x)) > tau * dist_to_set(d, x, A)]
    moved = [(a, r(a)) for a in pts if a in A and r(a) != a]
    checks = {
        "lipschitz": Report(ratio <= tau**2, [] if ratio <= tau**2 else [("ratio", ratio)],
                            {"ratio": ratio, "bound": tau**2}),
        "radius": Report(not bad, bad),
        "fixes_subset": Report(not moved, moved),
    }
    result = {"map": {point_key(x): point_key(r(x)) for x in pts}, "ratio": str(ratio),
              "bound": str(tau**2), "tau": str(tau), "order": args.order}
    if args.permutations and sf.space.is_finite:
        rng = random.Random(args.seed)
        worst = Fraction(0)
        for _ in range(args.permutations):
            order_pts = list(sf.space.points())
            rng.shuffle(order_pts)
            Xp = sf.space.permuted(order_pts)
            Mp = MetricTable(Xp, sf.metric, sf.metric.flag, valueset=sf.metric.valueset)
            Ap = Subset(Xp, A.members())
            rp = bdhm_retract(Xp, Mp, Ap, tau, BandedOrder(Mp, descending=descending))
            worst = max(worst, lipschitz_ratio(rp, Mp))
        result["permutations"] = {"count": args.permutations, "seed": args.seed, "worst_ratio": str(worst)}
        checks["permuted_lipschitz"] = Report(worst <= tau**2, [], {"worst": worst})
    return result, checks


def cmd_extend(sf, args):
    A = _require_subset(sf)
    X, M = sf.space, sf.metric
    d = M.restrict(A)
    reference = M if (X.is_finite and M.flag.positive) else None
    if args.mode == "metric":
        if args.dense:
            if X.is_finite:
                ult = M if M.flag.strong and M.flag.positive else proper_ultrametric(X)
                r = bdhm_retract(X, ult, A, args.tau)
            else:
                r = proper_retract(X, A, args.tau)
            res = extend_metric_proper_dense(X, A, d, args.eta, r, reference)
        else:
            res = extend_metric_proper(X, A, d, reference)
    else:
        S = _valueset(args, sf, HalfLine())
        if d.valueset is None:
            d = d.with_(valueset=S)
        if args.dense:
            res = extend_ultrametric_proper_dense(X, A, d, S, args.eta, args.tau, reference)
        else:
            res = extend_ultrametric_proper(X, A, d, S, reference, args.tau)
    pts = _points(sf, args)
    D = res.metric
    trace = {f"{point_key(x)},{point_key(y)}": res.provenance(x, y)
             for i, x in enumerate(pts) for y in pts[i + 1:]}
    result = {
        "mode": args.mode,
        "dense": args.dense,
        "metric": _matrix_json(D, pts),
        "witness": _witness_json(D, args),
        "trace": trace,
    }
    if res.eta is not None:
        result["eta"] = str(res.eta)
    if res.theta is not None:
        result["theta"] = str(res.theta)
    checks = res.checks(args.prefix)
    if not X.is_finite:
        checks["witness"] = certify_proper(X, D, D.witness, args.depth)
    return result, checks


def cmd_quantize(sf, args):
    S = _valueset(args, sf, Geometric(2, 1))
    T = sporadic_subset(S)
    w = quantize_metric(sf.metric, T)
    pts = _points(sf, args)
    depth = _check_depth(sf, args)
    dominated = [(x, y) for x in pts for y in pts if w(x, y) > sf.metric(x, y)]
    idem = [(x, y) for x in pts for y in pts if T.floor(w(x, y)) != w(x, y)]
    checks = {
        "axioms": verify_axioms(w, w.flag, depth),
        "dominated": Report(not dominated, dominated),
        "idempotent": Report(not idem, idem),
        "isosceles": check_isosceles(w, depth),
    }
    return {"valueset": encode(T), "metric": _matrix_json(w, pts), "witness": _witness_json(w, args)}, checks


def cmd_properize(sf, args):
    X, M = sf.space, sf.metric
    if args.mode == "metric":
        D = properize(M, proper_function_into(X, HalfLine()))
    else:
        S = _valueset(args, sf, HalfLine())
        T = sporadic_subset(S)
        if M.valueset is None:
            M = M.with_(valueset=S)
        D = properize_ult(M, proper_function_into(X, T), T, S)
    pts = _points(sf, args)
    checks = {"axioms": verify_axioms(D, D.flag, _check_depth(sf, args)),
              "witness": certify_proper(X, D, D.witness, args.depth)}
    return {"metric": _matrix_json(D, pts), "witness": _witness_json(D, args)}, checks


def cmd_isosceles(sf, args):
    return {}, {"isosceles": check_isosceles(sf.metric, _check_depth(sf, args))}


COMMANDS = {
    "check": cmd_check, "ball": cmd_ball, "retract": cmd_retract, "extend": cmd_extend,
    "quantize": cmd_quantize, "properize": cmd_properize, "isosceles": cmd_isosceles,
}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _validate(args)
        if args.space == "-":
            data = sys.stdin.buffer.read()
        else:
            with open(args.space, "rb") as fh:
                data = fh.read()
        verify = not args.no_verify and args.command != "check"
        sf = parse_space(data, verify=verify, depth=args.prefix)
        checks = {}
        if sf.report is not None:
            checks["load"] = sf.report
            if not sf.report.ok:
                print(f"metric fails its '{sf.metric.flag.value}' claim: {sf.report.violations[0]}",
                      file=stderr)
        result, more = COMMANDS[args.command](sf, args)
        checks.update(more)
    except (UsageError, MetricExtError, OSError) as exc:
        print(f"metricext: error: {exc}", file=stderr)
        return 2
    ok = all(rep.ok for rep in checks.values())
    report = {"command": args.command, "ok": ok, "result": encode(result),
              "checks": {k: v.to_json() for k, v in checks.items()}}
    json.dump(report, stdout, indent=2)
    stdout.write("\n")
    if not ok:
        failed = [k for k, v in checks.items() if not v.ok]
        print(f"metricext: contract violation in {', '.join(failed)}", file=stderr)
    return 0 if ok else 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
