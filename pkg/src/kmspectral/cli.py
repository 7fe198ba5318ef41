"""Command-line front end: machine-readable tables for every library capability.

Data goes to stdout and diagnostics to stderr.  Exit codes are 0 on success,
2 for invalid flags or parameters, 3 when quadrature or the oracle cannot
reach its accuracy, and 4 when ``verify`` finds a residual above tolerance.
"""
from __future__ import annotations

import csv
import json
import math
import sys
from typing import Iterable, Sequence

import click

from . import __version__
from .classify import classify, invariant_distribution, potential_sum, potential_tail
from .errors import KMSpectralError, NonConvergedQuadrature, WindowTooLarge
from .km import current_row, transition_row
from .model import FAMILY_DOC, FIGURE_PARAMS, PARAM_NAMES, CatalogModel, Family, Kind, build_model
from .oracle import oracle_row
from .quadrature import QuadratureConfig, default_config
from .spectral import spectral_measure, to_json_dict, total_mass, verify_coupling

EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_VERIFY = 4

#: flag name -> model parameter name
_FLAG_PARAM = {
    "lambda_": "lam",
    "mu": "mu",
    "lambda0": "lam0",
    "mu0": "mu0",
    "alpha": "alpha",
    "beta": "beta",
}

FIGURE_HELP = """\b
Figure data (probability current, j=0, t in {3,6,9}):
  Fig. 1  kmspectral current --family mm1 --lambda 1 --mu 2 --j 0 --n-range 0 30 --t 3 --t 6 --t 9
  Fig. 2  kmspectral current --family symmetric-bilateral --lambda 1 --mu 2 --j 0 --n-range -30 30 --t 3 --t 6 --t 9
  Fig. 3  kmspectral current --family alternating-case1 --lambda 1 --mu 2 --j 0 --n-range -30 30 --t 3 --t 6 --t 9
  Fig. 4  kmspectral current --family defect-case1 --lambda 1 --mu 2 --lambda0 1 --mu0 5 --j 0 --n-range -30 30 --t 3 --t 6 --t 9
  Fig. 6  kmspectral current --family defect-case2 --lambda 1 --mu 2 --lambda0 1 --mu0 5 --j 0 --n-range -30 30 --t 3 --t 6 --t 9
  Fig. 7  kmspectral current --family split-queues --lambda 1 --mu 2 --alpha 3 --beta 4 --j 0 --n-range -30 30 --t 3 --t 6 --t 9
Other caption parameter sets are listed by `kmspectral catalog`.
"""


def _num(x: float) -> str:
    """17 significant digits, so a value round-trips exactly."""
    return format(float(x), ".17g")


def _jsonable(obj):
    if isinstance(obj, float):
        if math.isfinite(obj):
            return float(_num(obj))
        return str(obj)
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _emit(header: Sequence[str], rows: Iterable[Sequence], fmt: str) -> None:
    rows = [list(r) for r in rows]
    if fmt == "json":
        records = [
            {h: (_jsonable(float(v)) if isinstance(v, float) else v) for h, v in zip(header, r)} for r in rows
        ]
        click.echo(json.dumps(records, indent=2))
        return
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(header)
    for r in rows:
        writer.writerow([_num(v) if isinstance(v, float) else v for v in r])


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _run(fn):
    """Call ``fn`` translating library errors into exit codes."""
    try:
        return fn()
    except (NonConvergedQuadrature, WindowTooLarge) as exc:
        _fail(EXIT_NUMERICAL, str(exc))
    except (KMSpectralError, TypeError, ValueError) as exc:
        _fail(EXIT_USAGE, str(exc))


def model_options(fn):
    """Attach the family and rate flags."""
    opts = [
        click.option(
            "--family",
            required=True,
            type=click.Choice([f.value for f in Family]),
            help="catalog family",
        ),
        click.option("--lambda", "lambda_", type=float, help="birth rate lam"),
        click.option("--mu", type=float, help="death rate mu"),
        click.option("--lambda0", type=float, help="birth rate at state 0 (defect families)"),
        click.option("--mu0", type=float, help="death rate at state 0 (defect families)"),
        click.option("--alpha", type=float, help="split-queues: death rate below 0 (towards -inf)"),
        click.option("--beta", type=float, help="split-queues: birth rate below 0 (towards -inf)"),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


def _model(family: str, **flags) -> CatalogModel:
    fam = Family(family)
    given = {_FLAG_PARAM[k]: v for k, v in flags.items() if v is not None}
    names = PARAM_NAMES[fam]
    extra = sorted(set(given) - set(names))
    if extra:
        _fail(EXIT_USAGE, f"{fam.value} does not take {extra}; parameters are {list(names)}")
    missing = [n for n in names if n not in given]
    if missing:
        _fail(EXIT_USAGE, f"{fam.value} needs {list(names)}; missing {missing}")
    return _run(lambda: build_model(fam, **given))


def _model_flags(kwargs: dict) -> tuple[CatalogModel, dict]:
    flags = {k: kwargs.pop(k) for k in list(_FLAG_PARAM)}
    return _model(kwargs.pop("family"), **flags), kwargs


format_option = click.option(
    "--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True
)


@click.group(epilog=FIGURE_HELP)
@click.version_option(__version__)
def main():
    """Karlin-McGregor transition probabilities of bilateral birth-death processes.

    Set KM_SPECTRAL_NODES to change the quadrature nodes per spectral piece.
    """


@main.command()
@click.option("--family", type=click.Choice([f.value for f in Family]), help="show one family only")
@format_option
def catalog(family, fmt):
    """List families, their parameters and the figure parameter sets."""
    fams = [Family(family)] if family else list(Family)
    records = [
        {
            "family": f.value,
            "kind": (Kind.HALF_LINE if f is Family.MM1 else Kind.BILATERAL).value,
            "parameters": list(PARAM_NAMES[f]),
            "description": FAMILY_DOC[f],
            "figure_parameters": [list(p) for p in FIGURE_PARAMS[f]],
        }
        for f in fams
    ]
    if fmt == "json":
        click.echo(json.dumps(_jsonable(records), indent=2))
        return
    rows = [
        (
            r["family"],
            r["kind"],
            " ".join(r["parameters"]),
            ";".join(" ".join(format(v, "g") for v in p) for p in r["figure_parameters"]),
            r["description"],
        )
        for r in records
    ]
    _emit(("family", "kind", "parameters", "figure_parameters", "description"), rows, fmt)


@main.command()
@model_options
@click.option("--i", "i", type=int, required=True, help="initial state")
@click.option("--j", "j", type=int, help="final state")
@click.option("--row", nargs=2, type=int, help="final states from LO to HI")
@click.option("--t", "times", type=float, multiple=True, required=True, help="time (repeatable)")
@click.option("--nodes", type=int, help="quadrature nodes per piece (overrides KM_SPECTRAL_NODES)")
@click.option("--check-oracle", is_flag=True, help="append the uniformization value and |delta|")
@format_option
def transition(i, j, row, times, nodes, check_oracle, fmt, **kwargs):
    """Transition probabilities P_ij(t)."""
    model, _ = _model_flags(kwargs)
    if (j is None) == (row is None):
        _fail(EXIT_USAGE, "give exactly one of --j and --row")
    lo, hi = (j, j) if row is None else row
    config = _config(nodes)
    header = ["i", "j", "t", "p", "err", "method"]
    if check_oracle:
        header += ["oracle", "abs_delta"]
    out = []
    for t in times:
        res = _run(lambda: transition_row(model, i, t, lo, hi, config))
        ref = _run(lambda: oracle_row(model, i, t, lo, hi)) if check_oracle else None
        for k, r in enumerate(res):
            line = [i, lo + k, float(t), r.value, r.err_estimate, r.method.value]
            if ref is not None:
                line += [ref[k].value, abs(r.value - ref[k].value)]
            out.append(line)
    _emit(header, out, fmt)


@main.command()
@model_options
@click.option("--j", "j", type=int, required=True, help="initial state")
@click.option("--n-range", nargs=2, type=int, required=True, help="states N_LO N_HI of the flux n-1 -> n")
@click.option("--t", "times", type=float, multiple=True, required=True, help="time (repeatable)")
@click.option("--method", type=click.Choice(["dual", "direct"]), default="dual", show_default=True)
@click.option("--nodes", type=int, help="quadrature nodes per piece")
@format_option
def current(j, n_range, times, method, nodes, fmt, **kwargs):
    """Probability current Omega_{j,n}(t): net flux from n-1 to n."""
    model, _ = _model_flags(kwargs)
    lo, hi = n_range
    config = _config(nodes)
    out = []
    for t in times:
        vals = _run(lambda: current_row(model, j, t, lo, hi, method, config))
        out += [[n, float(t), float(v)] for n, v in zip(range(lo, hi + 1), vals)]
    _emit(["n", "t", "omega"], out, fmt)


@main.command()
@model_options
@click.option("--grid", type=int, default=33, show_default=True, help="density samples per piece")
def spectral(grid, **kwargs):
    """Spectral measure as JSON: sampled densities and atoms."""
    model, _ = _model_flags(kwargs)
    if grid < 1:
        _fail(EXIT_USAGE, "--grid must be positive")
    doc = _run(lambda: to_json_dict(spectral_measure(model), grid))
    doc = {"model": model.describe(), **doc}
    click.echo(json.dumps(_jsonable(doc), indent=2))


@main.command(name="classify")
@model_options
@format_option
def classify_cmd(fmt, **kwargs):
    """Transient, null recurrent or positive recurrent, with both lines of evidence."""
    model, _ = _model_flags(kwargs)
    c = _run(lambda: classify(model))
    _emit(["verdict", "spectral", "ratesum", "agree"], [[c.verdict.value, c.spectral.value, c.ratesum.value, c.agree]], fmt)


@main.command()
@model_options
@click.option("--window", nargs=2, type=int, default=(-5, 5), show_default=True, help="states LO HI")
@format_option
def invariant(window, fmt, **kwargs):
    """Invariant distribution over a window, or "none" unless positive recurrent."""
    model, _ = _model_flags(kwargs)
    lo, hi = window
    if model.kind is Kind.HALF_LINE:
        lo = max(lo, 0)
    pi = _run(lambda: invariant_distribution(model, lo, hi))
    if pi is None:
        click.echo("none")
        return
    _emit(["n", "pi"], [[n, float(v)] for n, v in zip(range(lo, hi + 1), pi)], fmt)
    outside = potential_tail(model, lo, hi) / potential_sum(model)
    click.echo(f"mass outside window: {_num(outside)}", err=True)


def _config(nodes: int | None):
    if nodes is None:
        return default_config()
    if nodes < 16:
        _fail(EXIT_USAGE, "--nodes must be >= 16")
    return QuadratureConfig(nodes_per_piece=nodes)


_VERIFY_Z = (-0.25, -1.0, -5.0, -50.0)
_VERIFY_STATES = range(-3, 4)
_VERIFY_TIMES = (0.5, 3.0)


def _verify_rows(model: CatalogModel, config) -> list[list]:
    rows = []
    measure = spectral_measure(model)
    if model.kind is Kind.HALF_LINE:
        rows.append([model.describe(), "mass", "psi", abs(total_mass(measure, None, config) - 1.0)])
    else:
        target = {"11": 1.0, "12": 0.0, "22": 1.0 / measure.pi_minus1}
        for comp, want in target.items():
            rows.append([model.describe(), "mass", comp, abs(float(total_mass(measure, comp, config)) - want)])
        for z in _VERIFY_Z:
            res = verify_coupling(model, z, config)
            for comp, r in zip(("11", "22", "12"), res):
                rows.append([model.describe(), "coupling", f"{comp}@z={_num(z)}", float(r)])
    states = [n for n in _VERIFY_STATES if model.kind is Kind.BILATERAL or n >= 0]
    lo, hi = states[0], states[-1]
    for t in _VERIFY_TIMES:
        worst = 0.0
        for i in states:
            km = transition_row(model, i, t, lo, hi, config)
            ref = oracle_row(model, i, t, lo, hi)
            worst = max(worst, max(abs(a.value - b.value) for a, b in zip(km, ref)))
        rows.append([model.describe(), "oracle", f"t={_num(t)}", worst])
    return rows


@main.command()
@click.option("--all", "all_", is_flag=True, help="every family at every figure parameter set")
@click.option("--family", type=click.Choice([f.value for f in Family]), help="catalog family")
@click.option("--lambda", "lambda_", type=float)
@click.option("--mu", type=float)
@click.option("--lambda0", type=float)
@click.option("--mu0", type=float)
@click.option("--alpha", type=float)
@click.option("--beta", type=float)
@click.option("--tol", type=float, default=1e-6, show_default=True, help="largest acceptable residual")
@format_option
def verify(all_, tol, fmt, **kwargs):
    """Mass identities, coupling residuals and oracle deltas; exit 4 above --tol."""
    if all_:
        if kwargs["family"] is not None:
            _fail(EXIT_USAGE, "--all and --family are exclusive")
        models = [build_model(f, *p) for f in Family for p in FIGURE_PARAMS[f]]
    else:
        if kwargs["family"] is None:
            _fail(EXIT_USAGE, "give --family with its rates, or --all")
        models = [_model_flags(kwargs)[0]]
    config = default_config()
    rows = []
    for m in models:
        rows += _run(lambda: _verify_rows(m, config))
    out = [r + [r[3] <= tol] for r in rows]
    _emit(["model", "check", "component", "residual", "ok"], out, fmt)
    bad = [r for r in out if not r[4]]
    if bad:
        click.echo(f"{len(bad)} check(s) above tolerance {_num(tol)}", err=True)
        sys.exit(EXIT_VERIFY)


if __name__ == "__main__":  # pragma: no cover
    main()
