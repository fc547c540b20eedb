"""Command-line front end.

Every table is written as CSV (or JSON with ``--format json``) preceded by a
comment line ``# spectral-mdp v<version> config=<canonical JSON>`` that
records the arguments needed to reproduce it.  Exit status is 0 on
success, 2 on usage errors and 1 on domain or numerical failures.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .combinatorics import Ensemble, dk_matrix, gen_catalan
from .ensembles import (
    EnsembleSpec,
    default_workers,
    estimate_moment_covariance,
    sample_moments,
    sample_tridiagonal,
    spectral_measure,
)
from .errors import ConvergenceError, DomainError
from .mdp import (
    ScalarRateSpec,
    SpeedSchedule,
    measure_rate,
    moment_rate,
    scalar_mdp_table,
    scalar_rate,
)
from .measures import Reference, moment_metric, reference_recursion, signed_measure_from_json
from .orthopoly import (
    RecursionCoefficients,
    canonical_from_z,
    coeffs_from_moments,
    coeffs_from_z,
    gauss_quadrature,
    moments_from_coeffs,
    z_from_canonical,
    z_from_coeffs,
)
from .rng import RngState

_NOT_CONFIG = {"out", "workers", "func", "format"}


def fmt(v) -> str:
    """17 significant digits for floats, ``p/q`` for rationals, ``inf`` for infinity."""
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, str):
        return v
    v = float(v)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if math.isnan(v):
        return "nan"
    return f"{v:.17g}"


def _jsonable(v):
    if isinstance(v, (Fraction, str)) or (isinstance(v, float) and not math.isfinite(v)):
        return fmt(v)
    if isinstance(v, (np.integer, np.floating)):
        return _jsonable(v.item())
    return v


def config_line(args) -> str:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in _NOT_CONFIG and v is not None}
    return f"# spectral-mdp v{__version__} config=" + json.dumps(
        cfg, sort_keys=True, separators=(",", ":")
    )


def render(args, columns, rows) -> str:
    if getattr(args, "format", "csv") == "json":
        doc = {
            "version": __version__,
            "config": json.loads(config_line(args).split("config=", 1)[1]),
            "columns": list(columns),
            "rows": [[_jsonable(v) for v in r] for r in rows],
        }
        return json.dumps(doc, sort_keys=True) + "\n"
    buf = io.StringIO()
    buf.write(config_line(args) + "\n")
    buf.write(",".join(columns) + "\n")
    for r in rows:
        buf.write(",".join(fmt(v) for v in r) + "\n")
    return buf.getvalue()


def emit(args, text: str):
    out = getattr(args, "out", None)
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _spec(args) -> EnsembleSpec:
    return EnsembleSpec(args.ensemble, args.n, args.beta, args.gamma, args.delta)


def _workers(args) -> int:
    return args.workers if args.workers is not None else default_workers()


def _values(text: str, exact: bool):
    parts = [p for p in text.replace(";", ",").split(",") if p.strip()]
    if exact:
        return [Fraction(p.strip()) for p in parts]
    return [float(Fraction(p.strip())) if "/" in p else float(p) for p in parts]


# -- subcommands ---------------------------------------------------------------


def cmd_catalan(args):
    emit(args, f"{gen_catalan(args.i, args.j)}\n")


def cmd_dk(args):
    D = dk_matrix(args.ensemble, args.k)
    if args.float:
        full = D.to_float()
        rows = [[i + 1, *full[i]] for i in range(D.k)]
    else:
        rows = [[i + 1, *[D.entry(i + 1, j + 1) for j in range(D.k)]] for i in range(D.k)]
    text = render(args, ["i", *[f"d{j}" for j in range(1, D.k + 1)]], rows)
    if D.sqrt2_scaled and not args.float and args.format == "csv":
        text = text.replace("\ni,", "\n# scale=2^-1/2\ni,", 1)
    emit(args, text)


def cmd_sample(args):
    spec, rng = _spec(args), RngState(args.seed, args.stream)
    if args.k is not None:
        return _write_moments(args, spec, rng)
    rows = []
    for r in range(args.reps):
        mu = spectral_measure(sample_tridiagonal(spec, rng, lane=r))
        rows.extend([r, x, w] for x, w in zip(mu.atoms, mu.weights))
    if args.per_replicate and args.out not in (None, "-"):
        base = Path(args.out)
        for r in range(args.reps):
            sub = [row[1:] for row in rows if row[0] == r]
            target = base.with_name(f"{base.stem}_rep{r:05d}{base.suffix or '.csv'}")
            target.write_text(render(args, ["atom", "weight"], sub))
        return
    emit(args, render(args, ["rep", "atom", "weight"], rows))


def _write_moments(args, spec, rng):
    m = sample_moments(spec, args.k, args.reps, rng, workers=_workers(args))
    cols = ["rep", *[f"m{j}" for j in range(1, args.k + 1)]]
    emit(args, render(args, cols, [[r, *row] for r, row in enumerate(m)]))


def cmd_moments(args):
    _write_moments(args, _spec(args), RngState(args.seed, args.stream))


def cmd_clt_cov(args):
    spec = _spec(args)
    est = estimate_moment_covariance(
        spec, args.k, args.reps, RngState(args.seed, args.stream), workers=_workers(args)
    )
    D = dk_matrix(spec.kind, args.k).to_float()
    theory = D @ D.T
    rows = []
    for i in range(args.k):
        for j in range(args.k):
            z = (est.cov[i, j] - theory[i, j]) / est.se[i, j] if est.se[i, j] > 0 else math.nan
            rows.append([i + 1, j + 1, est.cov[i, j], est.se[i, j], theory[i, j], z])
    emit(args, render(args, ["i", "j", "empirical", "se", "theoretical", "z"], rows))


_KINDS = ("moments", "coeffs", "z", "p")


def _to_coeffs(kind, values, exact):
    if kind == "moments":
        return coeffs_from_moments(values, allow_ill_conditioned=exact)
    if kind == "coeffs":
        return RecursionCoefficients.from_interleaved(values)
    if kind == "z":
        return coeffs_from_z(values)
    return coeffs_from_z(z_from_canonical(values))


def _from_coeffs(kind, c: RecursionCoefficients, length: int):
    if kind == "moments":
        return list(moments_from_coeffs(c, length))
    if kind == "coeffs":
        return list(c.interleaved())
    z = z_from_coeffs(c)
    return list(z) if kind == "z" else list(canonical_from_z(z))


def cmd_transform(args):
    values = _values(args.values, args.exact)
    c = _to_coeffs(args.source, values, args.exact)
    out = _from_coeffs(args.target, c, len(values))
    emit(args, render(args, ["index", args.target], [[i + 1, v] for i, v in enumerate(out)]))


def cmd_quadrature(args):
    if args.coeffs:
        c = RecursionCoefficients.from_interleaved(_values(args.coeffs, False))
    else:
        c = reference_recursion(args.reference, args.K)
    nodes, weights = gauss_quadrature(c, args.K)
    emit(args, render(args, ["node", "weight"], list(zip(nodes, weights))))


def cmd_rate(args):
    text = sys.stdin.read() if args.input == "-" else Path(args.input).read_text()
    doc = json.loads(text)
    level = doc.get("level")
    if level == "scalar":
        spec = ScalarRateSpec(doc["kind"], doc["alpha"])
        value = scalar_rate(spec, doc["x"])
    elif level == "moment":
        value = moment_rate(doc["ensemble"], doc["beta"], doc["moments"])
    elif level == "measure":
        value = measure_rate(doc["beta"], signed_measure_from_json(doc["measure"]))
    else:
        raise DomainError(f"rate input needs level scalar|moment|measure, got {level!r}")
    emit(args, json.dumps({"level": level, "rate": _jsonable(float(value))}, sort_keys=True) + "\n")


def cmd_mdp_table(args):
    spec = ScalarRateSpec(args.kind, args.alpha, args.shift1, args.shift2)
    schedule = SpeedSchedule.parse(args.speed)
    n_list = [float(v) for v in args.n.split(",")]
    rows = scalar_mdp_table(spec, args.x, schedule, n_list, two_sided=args.two_sided)
    cols = ["n", "a_n", "x_n", "log_tail", "normalized_rate", "target_rate", "flagged"]
    emit(
        args,
        render(
            args,
            cols,
            [[r.n, r.a_n, r.x_n, r.log_tail, r.normalized_rate, r.target_rate, r.flagged] for r in rows],
        ),
    )


def cmd_metric(args):
    a = _values(args.a, False)
    b = _values(args.b, False)
    K = args.K if args.K is not None else min(len(a), len(b))
    res = moment_metric(a, b, K)
    emit(args, render(args, ["value", "truncation", "tail_bound"], [[res.value, res.truncation, res.tail_bound]]))


# -- parser --------------------------------------------------------------------


def _add_ensemble(p, seed=True):
    p.add_argument("--ensemble", required=True, choices=[e.value for e in Ensemble])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--delta", type=float, default=0.0)
    if seed:
        p.add_argument("--seed", type=int, required=True)
        p.add_argument("--stream", type=int, default=0)
        p.add_argument("--workers", type=int, default=None)


def _add_output(p, formats=True):
    p.add_argument("--out", default=None)
    if formats:
        p.add_argument("--format", choices=["csv", "json"], default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spectral-mdp", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"spectral-mdp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="sample spectral measures (or moment vectors with --k)")
    _add_ensemble(p)
    p.add_argument("--reps", type=int, required=True)
    p.add_argument("--k", type=int, default=None, help="write moments m1..mk instead of measures")
    p.add_argument("--per-replicate", action="store_true", help="one atom,weight CSV per replicate")
    _add_output(p)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("moments", help="moment vectors of replicated samples")
    _add_ensemble(p)
    p.add_argument("--reps", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    _add_output(p)
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("clt-cov", help="empirical vs limiting moment covariance")
    _add_ensemble(p)
    p.add_argument("--reps", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    _add_output(p)
    p.set_defaults(func=cmd_clt_cov)

    p = sub.add_parser("dk", help="covariance factor D_k")
    p.add_argument("--ensemble", required=True, choices=[e.value for e in Ensemble])
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--float", action="store_true", help="print floating-point entries")
    _add_output(p)
    p.set_defaults(func=cmd_dk)

    p = sub.add_parser("catalan", help="generalised Catalan number d_{i,j}")
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--j", type=int, required=True)
    _add_output(p, formats=False)
    p.set_defaults(func=cmd_catalan)

    p = sub.add_parser("transform", help="convert between moments, coefficients, z and p")
    p.add_argument("--from", dest="source", choices=_KINDS, required=True)
    p.add_argument("--to", dest="target", choices=_KINDS, required=True)
    p.add_argument("--values", required=True, help="comma-separated; coefficients interleaved b1,a1,b2,...")
    p.add_argument("--exact", action="store_true", help="rational arithmetic (values like 1/2)")
    _add_output(p)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("quadrature", help="Gauss rule from recursion coefficients")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--reference", choices=[r.value for r in Reference])
    g.add_argument("--coeffs", help="interleaved b1,a1,b2,...")
    p.add_argument("--K", type=int, required=True)
    _add_output(p)
    p.set_defaults(func=cmd_quadrature)

    p = sub.add_parser("rate", help="evaluate a rate function from JSON input")
    p.add_argument("--input", required=True, help="JSON file or - for stdin")
    _add_output(p, formats=False)
    p.set_defaults(func=cmd_rate)

    p = sub.add_parser("mdp-table", help="exact-tail MDP convergence table")
    p.add_argument("--kind", required=True, choices=["normal_var", "gamma_mean", "beta_half"])
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--shift1", type=float, default=1.0)
    p.add_argument("--shift2", type=float, default=1.0)
    p.add_argument("--speed", default="0.5", help="theta for a_n = n^theta, or 'log'")
    p.add_argument("--n", default="10000,100000,1000000")
    p.add_argument("--two-sided", action="store_true")
    _add_output(p)
    p.set_defaults(func=cmd_mdp_table)

    p = sub.add_parser("metric", help="truncated moment metric between two moment vectors")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--K", type=int, default=None)
    _add_output(p)
    p.set_defaults(func=cmd_metric)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except (DomainError, ConvergenceError, ValueError, ArithmeticError, OSError, KeyError) as exc:
        msg = str(exc).replace("\n", " ")
        sys.stderr.write(f"error: {type(exc).__name__}: {msg}\n")
        return 1
    return 0


def main():
    sys.exit(run())
