"""Command-line interface.

Subcommands
-----------
``dist``      evaluate one transformed chi-squared law (cdf/pdf/qf/cf/cumulants)
``table1``    quantile table of the standard law over a probability/dof grid
``conv``      evaluate a linear combination defined in a JSON file
``lrt``       exact likelihood-ratio analyses (variance/regression/canonical)
``mc``        seeded Monte Carlo summaries

Tabular results go to standard output as CSV with a header row; ``lrt`` and
``mc`` emit JSON.  Exit codes: 0 success, 2 usage/domain/schema errors,
3 numerical non-convergence.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys

import numpy as np

from .convolve import (
    LinearCombination,
    QuadratureSettings,
    Term,
    combo_cdf,
    combo_cumulants,
    combo_pdf,
    combo_quantile,
)
from .errors import ConvergenceError, DomainError, SchemaError
from .inference import (
    VarCompModel,
    canonical_lrt_distribution,
    canonical_lrt_statistic,
    regression_lrt_null,
    regression_lrt_statistic,
    variance_ci_lrt,
    variance_ci_minlength,
    variance_lrt_null,
    variance_lrt_statistic,
)
from .lwdist import (
    LWChiSquared,
    Theta,
    chi2_base,
    chi2_quantile,
    lw_cdf,
    lw_chi2_cf,
    lw_chi2_cumulants,
    lw_pdf,
    lw_quantile,
    standard_lw_chi2,
)
from .oracle import SampleSpec, ks_statistic, sample_chi2, sample_combination, sample_lw

__all__ = ["main"]

_TABLE1_P = (0.70, 0.75, 0.80, 0.85, 0.90, 0.95, 0.975, 0.99, 0.999, 0.9999)
_TABLE1_NU = ("1", "2", "3", "5", "10", "20", "30", "100", "inf")


def _fmt(value, digits):
    return format(float(value), f".{digits}g")


def _jnum(value, digits):
    """Float rounded to the requested significant digits for JSON output."""
    v = float(value)
    if not math.isfinite(v):
        return v
    return float(format(v, f".{digits}g"))


def _add_digits(parser):
    parser.add_argument(
        "--digits", type=int, default=6, metavar="N",
        help="significant digits in the output (default 6, max 15)",
    )


def _check_digits(args):
    if not 1 <= args.digits <= 15:
        raise DomainError(f"--digits must be in [1, 15], got {args.digits}")


def _dist_from_args(args):
    if args.standard and args.theta is not None:
        raise DomainError("--standard and --theta are mutually exclusive")
    if args.standard:
        return standard_lw_chi2(args.nu)
    if args.theta is None:
        raise DomainError("a law needs either --standard or --theta T1 T2 T3")
    return LWChiSquared(nu=args.nu, theta=Theta(*args.theta))


def _write_csv(header, rows):
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)


# ---------------------------------------------------------------------------
# dist
# ---------------------------------------------------------------------------

def cmd_dist(args):
    _check_digits(args)
    d = _dist_from_args(args)
    dg = args.digits
    sub = args.dist_cmd
    if sub == "cumulants":
        ks = lw_chi2_cumulants(d, args.max_order)
        rows = [(f"kappa{j + 1}", _fmt(v, dg)) for j, v in enumerate(ks.kappa)]
        rows += [
            ("mean", _fmt(ks.mean, dg)),
            ("variance", _fmt(ks.variance, dg)),
            ("skewness", _fmt(ks.skewness, dg)),
            ("kurtosis_excess_ratio", _fmt(ks.kurtosis_excess_ratio, dg)),
        ]
        _write_csv(("name", "value"), rows)
        return 0
    if sub == "cf":
        pts = args.t
        vals = [lw_chi2_cf(d, t) for t in pts]
        _write_csv(
            ("point", "re", "im"),
            [(_fmt(t, dg), _fmt(v.real, dg), _fmt(v.imag, dg))
             for t, v in zip(pts, vals)],
        )
        return 0
    if sub == "cdf":
        pts, fn = args.y, lambda y: lw_cdf(d, y)
    elif sub == "pdf":
        pts, fn = args.y, lambda y: lw_pdf(d, y)
    else:  # qf
        pts, fn = args.p, lambda p: lw_quantile(d, p)
    _write_csv(
        ("point", "value"),
        [(_fmt(x, dg), _fmt(fn(x), dg)) for x in pts],
    )
    return 0


# ---------------------------------------------------------------------------
# table1
# ---------------------------------------------------------------------------

def _parse_nu_token(tok):
    if tok.strip().lower() in ("inf", "infinity"):
        return math.inf
    try:
        v = float(tok)
    except ValueError:
        raise DomainError(f"invalid degrees of freedom {tok!r}") from None
    return v


def cmd_table1(args):
    _check_digits(args)
    dg = args.digits
    ps = args.p
    if any(not 0.0 < p < 1.0 for p in ps):
        raise DomainError("table probabilities must lie in (0, 1)")
    nus = [_parse_nu_token(t) for t in args.nu]
    labels = [t.strip() for t in args.nu]
    rows = []
    for p in ps:
        row = [_fmt(p, dg)]
        for nu in nus:
            if math.isinf(nu):
                row.append(_fmt(chi2_quantile(1.0, p), dg))
            else:
                row.append(_fmt(lw_quantile(standard_lw_chi2(nu), p), dg))
        rows.append(row)
    _write_csv(["p"] + labels, rows)
    return 0


# ---------------------------------------------------------------------------
# conv
# ---------------------------------------------------------------------------

def _load_combo(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise SchemaError(f"cannot read combination file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise SchemaError(f"combination file is not valid JSON: {exc}") from None
    if not isinstance(doc, list) or not doc:
        raise SchemaError("combination file must be a nonempty JSON list of terms")
    terms = []
    for i, entry in enumerate(doc):
        if not isinstance(entry, dict):
            raise SchemaError(f"term {i}: expected a JSON object")
        allowed = {"kind", "nu", "theta", "lambda"}
        unknown = set(entry) - allowed
        if unknown:
            raise SchemaError(f"term {i}: unknown keys {sorted(unknown)}")
        kind = entry.get("kind")
        if kind not in ("lw_chi2", "chi2"):
            raise SchemaError(
                f"term {i}: kind must be 'lw_chi2' or 'chi2', got {kind!r}"
            )
        nu = entry.get("nu")
        if not isinstance(nu, (int, float)) or isinstance(nu, bool) or nu <= 0:
            raise SchemaError(f"term {i}: nu must be a positive number, got {nu!r}")
        lam = entry.get("lambda", 1.0)
        if not isinstance(lam, (int, float)) or isinstance(lam, bool) or lam == 0:
            raise SchemaError(
                f"term {i}: lambda must be a nonzero number, got {lam!r}"
            )
        try:
            if kind == "chi2":
                if "theta" in entry:
                    raise SchemaError(f"term {i}: chi2 terms take no theta")
                terms.append(Term("chi2", float(nu), float(lam)))
                continue
            theta = entry.get("theta")
            if theta == "standard":
                dist = standard_lw_chi2(float(nu))
            elif (isinstance(theta, list) and len(theta) == 3
                    and all(isinstance(v, (int, float)) and not isinstance(v, bool)
                            for v in theta)):
                dist = LWChiSquared(nu=float(nu), theta=Theta(*map(float, theta)))
            else:
                raise SchemaError(
                    f"term {i}: theta must be 'standard' or a list of three "
                    f"numbers, got {theta!r}"
                )
            terms.append(Term("lw_chi2", dist, float(lam)))
        except DomainError as exc:
            raise SchemaError(f"term {i}: {exc}") from None
    return LinearCombination(tuple(terms))


def cmd_conv(args):
    _check_digits(args)
    dg = args.digits
    combo = _load_combo(args.combo)
    settings = QuadratureSettings(
        abs_tol=args.abs_tol, max_nodes=args.max_nodes,
    )
    sub = args.conv_cmd
    if sub == "cdf":
        pts = args.y
        vals = combo_cdf(combo, np.asarray(pts, dtype=np.float64), settings)
    elif sub == "pdf":
        pts = args.y
        vals = combo_pdf(combo, np.asarray(pts, dtype=np.float64), settings)
    else:
        pts = args.p
        vals = [combo_quantile(combo, p, settings) for p in pts]
    _write_csv(
        ("point", "value"),
        [(_fmt(x, dg), _fmt(v, dg)) for x, v in zip(pts, np.atleast_1d(vals))],
    )
    return 0


# ---------------------------------------------------------------------------
# lrt
# ---------------------------------------------------------------------------

def _decision(stat, q):
    return "reject" if stat > q else "accept"


def cmd_lrt_variance(args):
    _check_digits(args)
    dg = args.digits
    stat = variance_lrt_statistic(args.s2, args.sigma0_sq, args.nu)
    null = variance_lrt_null(args.nu)
    q = lw_quantile(null, 1.0 - args.alpha)
    p_value = 1.0 - lw_cdf(null, stat)
    ci1 = variance_ci_lrt(args.s2, args.nu, args.alpha)
    ci2 = variance_ci_minlength(args.s2, args.nu, args.alpha)
    report = {
        "test": "variance",
        "statistic": _jnum(stat, dg),
        "alpha": _jnum(args.alpha, dg),
        "null_quantile": _jnum(q, dg),
        "p_value": _jnum(p_value, dg),
        "decision": _decision(stat, q),
        "ci_lrt": [_jnum(ci1.lower, dg), _jnum(ci1.upper, dg)],
        "ci_minlength": [_jnum(ci2.lower, dg), _jnum(ci2.upper, dg)],
        "level": _jnum(ci1.level, dg),
    }
    print(json.dumps(report, indent=2))
    return 0


def _read_regression_csv(path):
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            rows = [r for r in reader if r]
    except OSError as exc:
        raise SchemaError(f"cannot read data file: {exc}") from None
    if not rows:
        raise SchemaError("regression data file is empty")
    header = [h.strip() for h in rows[0]]
    if not header or header[0] != "y":
        raise SchemaError(
            "regression data must start with a header row 'y,x1,...,xk'"
        )
    k = len(header) - 1
    if k < 1 or header[1:] != [f"x{j}" for j in range(1, k + 1)]:
        raise SchemaError(
            "regression data must start with a header row 'y,x1,...,xk'"
        )
    try:
        data = np.array([[float(v) for v in r] for r in rows[1:]])
    except ValueError as exc:
        raise SchemaError(f"non-numeric entry in regression data: {exc}") from None
    if data.ndim != 2 or data.shape[1] != k + 1 or data.shape[0] < 1:
        raise SchemaError("regression data rows must match the header")
    return data[:, 0], data[:, 1:]


def cmd_lrt_regression(args):
    _check_digits(args)
    dg = args.digits
    y, X = _read_regression_csv(args.data)
    beta0 = np.asarray(args.beta0, dtype=np.float64)
    stat = regression_lrt_statistic(y, X, beta0, args.sigma0_sq)
    n, k = X.shape
    null = regression_lrt_null(n, k)
    settings = QuadratureSettings()
    q = combo_quantile(null, 1.0 - args.alpha, settings)
    p_value = 1.0 - combo_cdf(null, stat, settings)
    report = {
        "test": "regression",
        "n": n,
        "k": k,
        "statistic": _jnum(stat, dg),
        "alpha": _jnum(args.alpha, dg),
        "null_quantile": _jnum(q, dg),
        "p_value": _jnum(p_value, dg),
        "decision": _decision(stat, q),
    }
    print(json.dumps(report, indent=2))
    return 0


def _read_varcomp_csv(path):
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            rows = [r for r in reader if r]
    except OSError as exc:
        raise SchemaError(f"cannot read data file: {exc}") from None
    if not rows:
        raise SchemaError("variance-components data file is empty")
    header = [h.strip() for h in rows[0]]
    if header == ["rho", "nu", "U", "theta0"]:
        has_true = False
    elif header == ["rho", "nu", "U", "theta0", "theta_true"]:
        has_true = True
    else:
        raise SchemaError(
            "variance-components data needs the exact header "
            "'rho,nu,U,theta0' or 'rho,nu,U,theta0,theta_true', got "
            f"{','.join(header)!r}"
        )
    body = rows[1:]
    if not body:
        raise SchemaError("variance-components data has no rows")
    try:
        rho = [float(r[0]) for r in body]
        nu = [int(r[1]) for r in body]
        U = [float(r[2]) for r in body]
        th0 = [float(r[3]) for r in body]
        th_true = [float(r[4]) for r in body] if has_true else None
    except (ValueError, IndexError) as exc:
        raise SchemaError(f"malformed variance-components row: {exc}") from None
    try:
        model = VarCompModel(tuple(rho), tuple(nu), tuple(U))
    except DomainError as exc:
        raise SchemaError(str(exc)) from None
    return model, th0, th_true


def cmd_lrt_canonical(args):
    _check_digits(args)
    dg = args.digits
    model, theta0, theta_true = _read_varcomp_csv(args.data)
    stat = canonical_lrt_statistic(model, theta0)
    null = canonical_lrt_distribution(model, theta0)
    settings = QuadratureSettings()
    q = combo_quantile(null, 1.0 - args.alpha, settings)
    p_value = 1.0 - combo_cdf(null, stat, settings)
    r = model.n_components
    q_asym = chi2_quantile(float(r), 1.0 - args.alpha)
    p_asym = 1.0 - chi2_base(float(r)).cdf(stat)
    report = {
        "test": "canonical",
        "n_components": r,
        "statistic": _jnum(stat, dg),
        "alpha": _jnum(args.alpha, dg),
        "null_quantile": _jnum(q, dg),
        "p_value": _jnum(p_value, dg),
        "decision": _decision(stat, q),
        "asymptotic_null_quantile": _jnum(q_asym, dg),
        "asymptotic_p_value": _jnum(p_asym, dg),
        "asymptotic_decision": _decision(stat, q_asym),
    }
    if theta_true is not None:
        alt = canonical_lrt_distribution(model, theta0, theta_true)
        power = 1.0 - combo_cdf(alt, q, settings)
        report["power_at_theta_true"] = _jnum(power, dg)
    print(json.dumps(report, indent=2))
    return 0


# ---------------------------------------------------------------------------
# mc
# ---------------------------------------------------------------------------

def cmd_mc(args):
    _check_digits(args)
    dg = args.digits
    picked = [
        args.chi2_nu is not None,
        args.nu is not None,
        args.combo is not None,
    ]
    if sum(picked) != 1:
        raise DomainError(
            "pick exactly one target: --chi2-nu NU, --nu NU with "
            "--standard/--theta, or --combo FILE"
        )
    spec = SampleSpec(count=args.count, seed=args.seed)
    analytic_cdf = None
    if args.chi2_nu is not None:
        target = f"chi2(nu={args.chi2_nu:g})"
        summary = sample_chi2(args.chi2_nu, spec)
        analytic_cdf = chi2_base(args.chi2_nu).cdf
    elif args.nu is not None:
        d = _dist_from_args(args)
        target = (f"lw_chi2(nu={d.nu:g}, theta=({d.theta.theta1:g}, "
                  f"{d.theta.theta2:g}, {d.theta.theta3:g}))")
        summary = sample_lw(d, spec)
        analytic_cdf = lambda x: lw_cdf(d, x)  # noqa: E731
    else:
        combo = _load_combo(args.combo)
        target = f"combination({len(combo.terms)} terms)"
        summary = sample_combination(combo, spec)
    qs = {}
    for p in args.quantiles:
        if not 0.0 < p < 1.0:
            raise DomainError(f"quantile levels must lie in (0, 1), got {p}")
        qs[_fmt(p, dg)] = _jnum(np.quantile(summary.sorted_samples, p), dg)
    report = {
        "target": target,
        "count": summary.count,
        "seed": args.seed,
        "mean": _jnum(summary.mean, dg),
        "variance": _jnum(summary.variance, dg),
        "quantiles": qs,
        "ks_vs_analytic": (
            _jnum(ks_statistic(summary, analytic_cdf), dg)
            if analytic_cdf is not None else None
        ),
    }
    print(json.dumps(report, indent=2))
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _float_list(parser, flag, **kw):
    parser.add_argument(flag, type=float, nargs="+", **kw)


def _add_theta_flags(parser):
    parser.add_argument("--nu", type=float, help="degrees of freedom")
    parser.add_argument(
        "--standard", action="store_true",
        help="use theta = (nu (log nu - 1), nu, 1)",
    )
    parser.add_argument(
        "--theta", type=float, nargs=3, metavar=("T1", "T2", "T3"),
        help="transform parameters theta1 theta2 theta3",
    )


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="lwchi2",
        description=(
            "Distributions of log-Lambert-W transformed chi-squared "
            "variables, their linear combinations, and exact "
            "likelihood-ratio tests built on them."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_dist = sub.add_parser("dist", help="evaluate one transformed law")
    dsub = p_dist.add_subparsers(dest="dist_cmd", required=True)
    for name, points in (
        ("cdf", "--y"), ("pdf", "--y"), ("qf", "--p"), ("cf", "--t"),
    ):
        sp = dsub.add_parser(name)
        _add_theta_flags(sp)
        _float_list(sp, points, required=True,
                    help="evaluation points", metavar="V")
        _add_digits(sp)
        sp.set_defaults(func=cmd_dist)
    sp = dsub.add_parser("cumulants")
    _add_theta_flags(sp)
    sp.add_argument("--max-order", type=int, default=4, metavar="J",
                    help="highest cumulant order (default 4)")
    _add_digits(sp)
    sp.set_defaults(func=cmd_dist)

    p_t1 = sub.add_parser(
        "table1", help="quantiles of the standard law over a p/nu grid"
    )
    _float_list(p_t1, "--p", default=list(_TABLE1_P), metavar="P",
                help="probabilities (default: the ten tabled values)")
    p_t1.add_argument(
        "--nu", nargs="+", default=list(_TABLE1_NU), metavar="NU",
        help="degrees of freedom, 'inf' for the chi-squared(1) limit",
    )
    _add_digits(p_t1)
    p_t1.set_defaults(func=cmd_table1)

    p_conv = sub.add_parser(
        "conv", help="evaluate a linear combination from a JSON file"
    )
    csub = p_conv.add_subparsers(dest="conv_cmd", required=True)
    for name, points in (("cdf", "--y"), ("pdf", "--y"), ("qf", "--p")):
        sp = csub.add_parser(name)
        sp.add_argument("--combo", required=True, metavar="FILE",
                        help="JSON file with the term list")
        _float_list(sp, points, required=True,
                    help="evaluation points", metavar="V")
        sp.add_argument("--abs-tol", type=float, default=1e-10)
        sp.add_argument("--max-nodes", type=int, default=1_000_000)
        _add_digits(sp)
        sp.set_defaults(func=cmd_conv)

    p_lrt = sub.add_parser("lrt", help="exact likelihood-ratio tests")
    lsub = p_lrt.add_subparsers(dest="lrt_cmd", required=True)
    sp = lsub.add_parser("variance")
    sp.add_argument("--s2", type=float, required=True, help="sample variance")
    sp.add_argument("--sigma0-sq", type=float, required=True,
                    help="null variance value")
    sp.add_argument("--nu", type=float, required=True,
                    help="degrees of freedom of S^2")
    sp.add_argument("--alpha", type=float, default=0.05)
    _add_digits(sp)
    sp.set_defaults(func=cmd_lrt_variance)
    sp = lsub.add_parser("regression")
    sp.add_argument("--data", required=True, metavar="FILE",
                    help="CSV with header y,x1,...,xk")
    sp.add_argument("--beta0", type=float, nargs="+", required=True,
                    metavar="B", help="null coefficient vector")
    sp.add_argument("--sigma0-sq", type=float, required=True)
    sp.add_argument("--alpha", type=float, default=0.05)
    _add_digits(sp)
    sp.set_defaults(func=cmd_lrt_regression)
    sp = lsub.add_parser("canonical")
    sp.add_argument("--data", required=True, metavar="FILE",
                    help="CSV with header rho,nu,U,theta0[,theta_true]")
    sp.add_argument("--alpha", type=float, default=0.05)
    _add_digits(sp)
    sp.set_defaults(func=cmd_lrt_canonical)

    p_mc = sub.add_parser("mc", help="seeded Monte Carlo summary")
    p_mc.add_argument("--chi2-nu", type=float, help="sample chi-squared(NU)")
    _add_theta_flags(p_mc)
    p_mc.add_argument("--combo", metavar="FILE",
                      help="sample the combination in this JSON file")
    p_mc.add_argument("--count", type=int, required=True)
    p_mc.add_argument("--seed", type=int, required=True)
    p_mc.add_argument("--quantiles", type=float, nargs="+",
                      default=[0.05, 0.25, 0.5, 0.75, 0.95], metavar="P")
    _add_digits(p_mc)
    p_mc.set_defaults(func=cmd_mc)

    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SchemaError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
