"""Command-line front end: eval, fit, policy, verify.

Results go to standard output in json, csv, or table form; diagnostics
go to standard error. Numbers in json and csv are printed with 17
significant digits so a parse of the output reproduces the exact values.
Exit statuses: 0 success, 1 verification failure, 2 usage or domain
error, 3 internal numeric failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys

from .distributions import FAMILIES, Moments, canonical_family, classify_dispersion, fit_from_moments
from .errors import ConvergenceError, DomainError, InfeasibleMomentsError, ParameterError
from .loss import LossKind, evaluate_loss
from .policy import PolicyParams, evaluate_policy, min_reorder_point
from .verification import run_grid

_FORMATS = ("table", "json", "csv")

_PARAM_NAMES = {
    "negative_binomial": ("n", "p"),
    "geometric": ("p",),
    "logarithmic": ("p",),
    "poisson": ("lambda",),
    "normal": ("mu", "sigma"),
    "gamma": ("alpha", "beta"),
    "log_normal": ("mu", "sigma"),
    "exponential": ("beta",),
}

# families whose fit consumes the variance as well as the mean
_TWO_MOMENT = frozenset({"negative_binomial", "normal", "gamma", "log_normal"})


def _num(x: float) -> str:
    return format(float(x), ".17g")


def _json_value(obj) -> str:
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, float):
        return _num(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_json_value(v)}"
                               for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_json_value(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _flat(value) -> str:
    if isinstance(value, dict):
        return ";".join(f"{k}={_num(v)}" for k, v in value.items())
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return _num(value)
    return str(value)


def _emit_record(record: dict, fmt: str) -> None:
    if fmt == "json":
        print(_json_value(record))
    elif fmt == "csv":
        writer = csv.writer(sys.stdout)
        writer.writerow(record.keys())
        writer.writerow(_flat(v) for v in record.values())
    else:
        width = max(len(k) for k in record)
        for k, v in record.items():
            print(f"{k:<{width}}  {_flat(v)}")


_VERIFY_COLUMNS = ("family", "parameters", "check", "r",
                   "analytic", "oracle", "abs_err", "rel_err", "passed")


def _emit_verify(rows, summary, fmt: str) -> None:
    if fmt == "json":
        print(_json_value({"summary": summary, "cases": rows}))
    elif fmt == "csv":
        writer = csv.writer(sys.stdout)
        writer.writerow(_VERIFY_COLUMNS)
        for row in rows:
            writer.writerow(_flat(row[c]) for c in _VERIFY_COLUMNS)
    else:
        failing = [row for row in rows if not row["passed"]]
        for row in failing[:20]:
            print(f"FAIL {row['family']} {_flat(row['parameters'])} "
                  f"{row['check']} r={_flat(row['r'])} "
                  f"analytic={_flat(row['analytic'])} oracle={_flat(row['oracle'])} "
                  f"abs_err={_flat(row['abs_err'])} rel_err={_flat(row['rel_err'])}")
        if len(failing) > 20:
            print(f"... and {len(failing) - 20} more failing cases")
        print(f"cases {summary['cases']}  passed {summary['passed']}  "
              f"failures {summary['failures']}")
    print(f"verify: {summary['failures']} of {summary['cases']} cases failed"
          if summary["failures"] else
          f"verify: all {summary['cases']} cases passed", file=sys.stderr)


def _parse_params(family: str, text: str) -> dict[str, float]:
    given: dict[str, float] = {}
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        name, sep, value = chunk.partition("=")
        name = name.strip()
        if not sep or not name:
            raise DomainError(f"bad parameter {chunk!r}; expected name=value")
        try:
            given[name] = float(value)
        except ValueError:
            raise DomainError(f"parameter {name} has non-numeric value {value.strip()!r}") from None
    expected = _PARAM_NAMES[family]
    unknown = sorted(set(given) - set(expected))
    if unknown:
        raise DomainError(f"unknown parameter {unknown[0]!r} for {family}; "
                          f"expected {', '.join(expected)}")
    missing = sorted(set(expected) - set(given))
    if missing:
        raise DomainError(f"missing parameter {missing[0]!r} for {family}")
    return given


def _build_dist(family: str, params_text: str | None):
    if params_text is None:
        raise DomainError(f"--params is required for {family}")
    given = _parse_params(family, params_text)
    kwargs = {("lam" if k == "lambda" else k): v for k, v in given.items()}
    return FAMILIES[family](**kwargs)


def _cmd_eval(args) -> int:
    family = canonical_family(args.dist)
    dist = _build_dist(family, args.params)
    value = evaluate_loss(args.loss, dist, args.r)
    _emit_record({"distribution": family, "parameters": dist.params(),
                  "loss_kind": args.loss, "r": args.r, "value": value}, args.format)
    return 0


def _cmd_fit(args) -> int:
    if args.dist is None:
        if args.variance is None:
            raise DomainError("classification requires both --mean and --var")
        cls = classify_dispersion(Moments(args.mean, args.variance))
        _emit_record({"mean": args.mean, "variance": args.variance,
                      "cd": cls.cd, "recommendation": cls.recommendation.value},
                     args.format)
        return 0
    family = canonical_family(args.dist)
    if family in _TWO_MOMENT and args.variance is None:
        raise DomainError(f"{family} fit requires --var")
    m = Moments(args.mean, args.variance if args.variance is not None else 0.0)
    dist = fit_from_moments(family, m)
    achieved = dist.moments()
    _emit_record({"distribution": family, "parameters": dist.params(),
                  "mean": achieved.mean, "variance": achieved.variance}, args.format)
    return 0


def _cmd_policy(args) -> int:
    family = canonical_family(args.dist)
    dist = _build_dist(family, args.params)
    if args.target is not None:
        r = min_reorder_point(dist, args.q, args.target)
        measures = evaluate_policy(dist, PolicyParams(r, args.q))
        _emit_record({"distribution": family, "parameters": dist.params(),
                      "q": args.q, "target": args.target, "r": r,
                      "stockout_frequency": measures.stockout_frequency,
                      "expected_backorders": measures.expected_backorders}, args.format)
        return 0
    if args.r is None:
        raise DomainError("policy requires --r or --target")
    measures = evaluate_policy(dist, PolicyParams(args.r, args.q))
    _emit_record({"distribution": family, "parameters": dist.params(),
                  "r": args.r, "q": args.q,
                  "stockout_frequency": measures.stockout_frequency,
                  "expected_backorders": measures.expected_backorders}, args.format)
    return 0


def _cmd_verify(args) -> int:
    kwargs = {}
    if args.tol is not None:
        if not args.tol > 0.0:
            raise DomainError(f"--tol must be positive, got {args.tol!r}")
        kwargs = {"continuous_rel": args.tol, "discrete_abs": args.tol,
                  "identity_scale": args.tol}
    families = [canonical_family(args.dist)] if args.dist else None
    rows, summary = run_grid(families=families, **kwargs)
    _emit_verify(rows, summary, args.format)
    return 0 if summary["failures"] == 0 else 1


def _add_format(sub) -> None:
    env = os.environ.get("INVLOSS_FORMAT", "table")
    sub.add_argument("--format", choices=_FORMATS,
                     default=env if env in _FORMATS else "table",
                     help="output format (default table, or $INVLOSS_FORMAT)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="invloss",
        description="Analytic loss functions, distribution fitting, (r,Q) "
                    "policy measures, and the oracle verification suite.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate one loss function value")
    p_eval.add_argument("--dist", required=True, help="distribution family")
    p_eval.add_argument("--params", required=True,
                        help="comma-separated name=value pairs, e.g. mu=0,sigma=1")
    p_eval.add_argument("--loss", required=True, choices=[k.value for k in LossKind])
    p_eval.add_argument("--r", required=True, type=float, help="reorder point argument")
    _add_format(p_eval)
    p_eval.set_defaults(func=_cmd_eval)

    p_fit = sub.add_parser("fit", help="method-of-moments fit or dispersion check")
    p_fit.add_argument("--dist", help="family to fit; omit to classify dispersion")
    p_fit.add_argument("--mean", required=True, type=float)
    p_fit.add_argument("--var", dest="variance", type=float)
    _add_format(p_fit)
    p_fit.set_defaults(func=_cmd_fit)

    p_policy = sub.add_parser("policy", help="(r,Q) performance measures")
    p_policy.add_argument("--dist", required=True)
    p_policy.add_argument("--params", required=True)
    p_policy.add_argument("--r", type=float, help="reorder point")
    p_policy.add_argument("--q", required=True, type=float, help="order quantity")
    p_policy.add_argument("--target", type=float,
                          help="max stock-out frequency; searches the smallest r")
    _add_format(p_policy)
    p_policy.set_defaults(func=_cmd_policy)

    p_verify = sub.add_parser("verify", help="run the analytic-vs-oracle grid")
    p_verify.add_argument("--dist", help="restrict to one family")
    p_verify.add_argument("--tol", type=float,
                          help="override all pass tolerances with one value")
    _add_format(p_verify)
    p_verify.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParameterError, DomainError, InfeasibleMomentsError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
