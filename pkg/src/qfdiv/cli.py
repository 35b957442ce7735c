"""Command-line front end.

    qfdiv divergence --pair A.json B.json --measure chernoff --measure renyi:alpha=0.5
    qfdiv check --channel C.json --pair A.json B.json
    qfdiv check --channel C.json --states r1.json r2.json --sigma S.json
    qfdiv experiment tomiyama_sweep --kind psi --d 2 --out sweep.csv

Exit codes for ``check``: 0 reversible / correctable, 1 not, 2 inconclusive
or a violated hypothesis.
"""
import argparse
import csv
import io as _io
import math
import os
import sys

import numpy as np

from . import __version__, config
from .errors import InputFormatError, QfdivError, SupportError, TracePreservationError
from .io import dumps, load_channel, load_matrix, write_atomic
from .xreal import to_json

EXIT = {"reversible": 0, "correctable": 0, "not reversible": 1, "not correctable": 1, "inconclusive": 2}


def parse_spec(text):
    """'name:k=v,k=v' -> (name, {k: v}); values become floats when possible."""
    name, _, rest = text.partition(":")
    params = {}
    if rest:
        for item in rest.split(","):
            k, eq, v = item.partition("=")
            if not eq:
                raise InputFormatError(f"parameter '{item}' in '{text}' is not key=value")
            try:
                params[k.strip()] = float(v)
            except ValueError:
                params[k.strip()] = v.strip()
    return name.strip(), params


def _header(args, command):
    return {"command": command, "seed": args.seed, "tol": args.tol, "version": __version__}


def _fmt(v):
    if isinstance(v, float):
        j = to_json(v)
        return j if isinstance(j, str) else repr(j)
    return "" if v is None else str(v)


def _csv_text(header, rows):
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def _emit(args, text):
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)


def _figure_path(args):
    if args.no_plot:
        return None
    if args.plot:
        return args.plot
    if args.out and args.format == "csv":
        return os.path.splitext(args.out)[0] + ".png"
    return None


# --- divergence ---------------------------------------------------------------

def _measure(name, params, A, B):
    from . import discrimination as disc
    from . import fdiv
    rec = {"measure": name, "params": params}
    if name == "f_divergence":
        p = dict(params)
        kind = p.pop("kind", "x_log_x")
        rec["value"] = fdiv.f_divergence(A, B, fdiv.build_function(kind, p))
    elif name == "renyi":
        rec["value"] = fdiv.renyi(A, B, params.get("alpha", 0.5))
    elif name == "relative_entropy":
        rec["value"] = fdiv.relative_entropy(A, B)
        if rec["value"] == math.inf:
            rec["note"] = "supp A is not inside supp B"
    elif name == "chernoff":
        res = disc.chernoff_distance(A, B)
        rec.update(value=res.value, alpha_star=res.alpha_star, location=res.location)
    elif name == "hoeffding":
        res = disc.hoeffding_distance(A, B, params.get("r", 0.1))
        rec.update(value=res.value, alpha_star=res.alpha_star, regime=res.regime)
    elif name == "t_p":
        rec["value"] = disc.bayes_measure_tp(A, B, params.get("p", 0.5))
    elif name == "fidelity":
        rec["value"] = fdiv.fidelity(A, B)
    else:
        raise InputFormatError(f"unknown measure '{name}'")
    return rec


def cmd_divergence(args):
    from .discrimination import PsiCurve, chernoff_distance
    from .matcore import as_psd
    A = as_psd(load_matrix(args.pair[0]))
    B = as_psd(load_matrix(args.pair[1]))
    measures = args.measure or ["relative_entropy"]
    if any(parse_spec(m)[0] == "psi_curve" for m in measures):
        c = PsiCurve(A, B)
        alphas = np.linspace(0.0, 1.0, 101)
        vals = [c(float(a)) for a in alphas]
        _emit(args, _csv_text(["alpha", "psi"], zip(map(float, alphas), vals)))
        fig = _figure_path(args)
        if fig:
            from .plotting import psi_curve_figure
            psi_curve_figure(fig, alphas, vals, chernoff_distance(A, B).alpha_star)
        return 0
    results = []
    for m in measures:
        name, params = parse_spec(m)
        try:
            results.append(_measure(name, params, A, B))
        except (SupportError, QfdivError) as exc:
            if isinstance(exc, InputFormatError):
                raise
            results.append({"measure": name, "params": params, "value": None, "note": str(exc)})
    if args.format == "csv":
        rows = [(r["measure"], ";".join(f"{k}={v}" for k, v in sorted(r["params"].items())),
                 r.get("value"), r.get("alpha_star"), r.get("note", "")) for r in results]
        _emit(args, _csv_text(["measure", "params", "value", "alpha_star", "note"], rows))
    else:
        _emit(args, dumps({"header": _header(args, "divergence"), "results": results}))
    return 0


# --- check ------------------------------------------------------------------------

def cmd_check(args):
    from . import reversibility as rev
    from .fdiv import build_function
    phi = load_channel(args.channel)
    f = None
    if args.function:
        kind, params = parse_spec(args.function)
        f = build_function(kind, params)
    head = _header(args, "check")
    try:
        if args.states:
            C = [load_matrix(p) for p in args.states]
            if not args.sigma:
                raise InputFormatError("--states needs --sigma")
            rep = rev.error_correction_check(phi, C, load_matrix(args.sigma), f=f, tol=args.tol,
                                             seed=args.seed)
            body = rep.to_dict()
            verdict = rep.verdict
        else:
            if not args.pair:
                raise InputFormatError("check needs --pair or --states")
            A, B = (load_matrix(p) for p in args.pair)
            rep = rev.equality_report(phi, A, B, f=f, alpha=args.alpha, tol=args.tol)
            body = rep.to_dict()
            verdict = rep.verdict
    except (SupportError, TracePreservationError) as exc:
        body = {"verdict": "inconclusive", "reason": str(exc)}
        verdict = "inconclusive"
    _emit(args, dumps({"header": head, "report": body}))
    return EXIT[verdict]


# --- experiments -------------------------------------------------------------------

def _tomiyama_sweep(args):
    from .channels import tomiyama_map
    n = int(round((args.eps_max - args.eps_min) / args.step))
    eps = [round(args.eps_min + k * args.step, 12) for k in range(n + 1)]
    rows = []
    for e in eps:
        ch = tomiyama_map(args.kind, e, args.d)
        m = ch.choi_min_eigenvalue()
        rows.append((e, m, int(m >= -1e-12)))
    text = _csv_text(["eps", "choi_min_eigenvalue", "cp"], rows)
    fig = _figure_path(args)
    if fig:
        from .plotting import tomiyama_figure
        tomiyama_figure(fig, eps, [r[1] for r in rows], args.kind, args.d)
    return text


def _exponent_trend(args):
    from .discrimination import chernoff_distance, exponent_trend
    if not args.pair:
        raise InputFormatError("exponent_trend needs --pair")
    rho, sigma = (load_matrix(p) for p in args.pair)
    try:
        rows = exponent_trend(rho, sigma, args.p, args.n_max)
    except QfdivError as exc:
        return _csv_text(["n", "rate", "gap", "error"], [(args.n_max, None, None, str(exc))])
    fig = _figure_path(args)
    if fig:
        from .plotting import exponent_figure
        exponent_figure(fig, [r[0] for r in rows], [r[1] for r in rows], chernoff_distance(rho, sigma).value)
    return _csv_text(["n", "rate", "gap"], rows)


def _quadrature_conformance(args):
    from .opconvex import canonical_representation, closed_form, eval_representation
    name, params = parse_spec(args.function or "x_log_x")
    alpha = params.get("alpha")
    rep = canonical_representation(name, alpha)
    exact = closed_form(name, alpha)
    xs = np.logspace(-3, 3, args.points)
    rows = []
    for x in xs:
        q = eval_representation(rep, float(x))
        e = float(exact(float(x)))
        rows.append((float(x), q, e, abs(q - e), abs(q - e) / max(abs(e), 1e-300)))
    fig = _figure_path(args)
    if fig:
        from .plotting import quadrature_figure
        quadrature_figure(fig, xs, [r[4] for r in rows], args.function or "x_log_x")
    return _csv_text(["x", "quadrature", "closed_form", "abs_error", "rel_error"], rows)


EXPERIMENTS = {
    "tomiyama_sweep": _tomiyama_sweep,
    "exponent_trend": _exponent_trend,
    "quadrature_conformance": _quadrature_conformance,
}


def cmd_experiment(args):
    np.random.seed(args.seed)  # nothing here is random today; recorded for reproducibility
    text = EXPERIMENTS[args.name](args)
    header = f"# experiment={args.name} seed={args.seed} version={__version__}\n"
    _emit(args, header + text)
    return 0


# --- parser --------------------------------------------------------------------------

def _common(p, fmt):
    # added per subparser: parents=[...] would share Action objects and their defaults
    p.add_argument("--tol", type=float, default=config.VERDICT_TOL)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="output path (stdout if omitted)")
    p.add_argument("--format", choices=["json", "csv"], default=fmt)
    p.add_argument("--plot", default=None, help="PNG path for the figure (CSV reports)")
    p.add_argument("--no-plot", action="store_true", help="do not render a figure")


def build_parser():
    p = argparse.ArgumentParser(prog="qfdiv", description="Quantum f-divergences and channel reversibility.")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("divergence", help="divergences and discrimination measures")
    _common(d, "json")
    d.add_argument("--pair", nargs=2, required=True, metavar=("A.json", "B.json"))
    d.add_argument("--measure", action="append",
                   help="f_divergence:kind=..., renyi:alpha=..., relative_entropy, chernoff, "
                        "hoeffding:r=..., t_p:p=..., fidelity, psi_curve")
    d.set_defaults(func=cmd_divergence)

    c = sub.add_parser("check", help="reversibility / error-correction check")
    _common(c, "json")
    c.add_argument("--channel", required=True)
    c.add_argument("--pair", nargs=2, metavar=("A.json", "B.json"))
    c.add_argument("--states", nargs="+")
    c.add_argument("--sigma")
    c.add_argument("--function", default=None, help="kind[:params] for the f-divergence gap")
    c.add_argument("--alpha", type=float, default=0.5)
    c.set_defaults(func=cmd_check)

    e = sub.add_parser("experiment", help="CSV experiments")
    _common(e, "csv")
    e.add_argument("name", choices=sorted(EXPERIMENTS))
    e.add_argument("--kind", default="phi", choices=["phi", "psi", "lambda"])
    e.add_argument("--d", type=int, default=2)
    e.add_argument("--eps-min", type=float, default=-0.25)
    e.add_argument("--eps-max", type=float, default=2.0)
    e.add_argument("--step", type=float, default=1e-3)
    e.add_argument("--pair", nargs=2, metavar=("RHO.json", "SIGMA.json"))
    e.add_argument("--p", type=float, default=0.5)
    e.add_argument("--n-max", type=int, default=5)
    e.add_argument("--function", default=None, help="x_log_x, neg_power:alpha=0.5, power:alpha=1.5")
    e.add_argument("--points", type=int, default=61)
    e.set_defaults(func=cmd_experiment)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputFormatError as exc:
        print(f"qfdiv: input error: {exc}", file=sys.stderr)
        return 2
    except QfdivError as exc:
        print(f"qfdiv: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
