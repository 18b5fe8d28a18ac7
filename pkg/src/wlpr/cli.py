"""Command line interface: ``wlpr mask|refine|certify|metrics|pareto|experiment``.

Every command accepts ``--config FILE`` with a JSON object whose keys mirror
the long option names (``"lambda"``, ``"n-max"`` or ``"n_max"``, ...);
explicit flags win over the file.  Exit status is 0 on success, 2 for
invalid input and 3 when a numerical procedure fails.
"""
from __future__ import annotations

import sys
from fractions import Fraction
from pathlib import Path

import click
import numpy as np

from . import datasets, experiments
from . import io as wio
from .convergence import (SchemeFamily, certify_family, difference_mask, positive_mask_verdict)
from .engine import Boundary, RefinableData, refine_k
from .errors import ConfigError, NumericalError, ValidationError
from .kernels import parse_kernel
from .masks import SchemeSpec, build_mask, build_mask_closed_form, odd_symmetry_defect
from .metrics import (capability_scores, exp_points, is_dominated_by_any, pareto_front,
                      relative_to_rect)

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 2, 3


def _load_config(ctx, param, value):
    if value is None:
        return None
    data = wio.load_config(value)
    renamed = {"lambda": "lam", "json": "as_json"}
    mapped = {}
    for key, val in data.items():
        key = str(key).replace("-", "_")
        mapped[renamed.get(key, key)] = val
    ctx.default_map = {**(ctx.default_map or {}), **mapped}
    return data


def config_option(func):
    return click.option("--config", type=click.Path(exists=True, dir_okay=False),
                        callback=_load_config, is_eager=True, expose_value=False,
                        help="JSON file whose keys mirror the long options.")(func)


def scheme_options(func):
    func = click.option("--degree", "-d", type=int, default=0, show_default=True)(func)
    func = click.option("--lambda", "lam", type=float, default=None,
                        help="Bandwidth (non-integer, > 1).")(func)
    func = click.option("--kernel", "-k", default="rect", show_default=True,
                        help="rect|tria|epan|bisq|tcub|trwt|exp:<xi>|pq:<p>:<q>")(func)
    return func


def _spec(kernel, lam, degree):
    if lam is None:
        raise ConfigError("--lambda is required")
    return SchemeSpec(parse_kernel(kernel), lam, degree)


def _mask(spec, exact=None):
    if spec.degree <= 3:
        return build_mask_closed_form(spec, exact=exact)
    return build_mask(spec, exact=bool(exact) if exact is not None else spec.kernel.is_rational)


def _fmt_coeff(value):
    if isinstance(value, Fraction):
        return str(value)
    return f"{value:.12g}"


def _emit(text, out=None):
    if out:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")
    else:
        click.echo(text)


@click.group()
@click.version_option(package_name="artifact", prog_name="wlpr")
def cli():
    """Subdivision schemes from weighted local polynomial regression."""


# -- mask ------------------------------------------------------------------------

@cli.command()
@config_option
@scheme_options
@click.option("--exact/--float", "exact", default=None,
              help="Rational or floating path (default: rational when the kernel allows).")
@click.option("--out", "-o", type=click.Path(dir_okay=False), help="Write mask JSON here.")
@click.option("--json", "as_json", is_flag=True, help="Print mask JSON instead of the report.")
def mask(kernel, lam, degree, exact, out, as_json):
    """Build a mask and print it with its basic properties."""
    spec = _spec(kernel, lam, degree)
    m = _mask(spec, exact)
    if out:
        wio.save_mask(m, out)
    if as_json:
        click.echo(wio.mask_to_json(m))
        return
    use_exact = m.is_exact
    full, first = m.full(exact=use_exact)
    even = m.exact_even if use_exact else m.even
    odd = m.exact_odd if use_exact else m.odd
    sums = (sum(even), sum(odd))
    try:
        q_norms = difference_mask(m).norms
    except ValidationError:
        q_norms = None
    lines = [
        f"scheme: {spec.label()}",
        f"situation: {m.situation.value} (n = {m.n})",
        f"mask (a_{first}..a_{first + len(full) - 1}): [" + ", ".join(map(_fmt_coeff, full)) + "]",
        f"even sub-mask (from {m.even_first}): " + " ".join(map(_fmt_coeff, even)),
        f"odd sub-mask (from {m.odd_first}): " + " ".join(map(_fmt_coeff, odd)),
        f"sums: {_fmt_coeff(sums[0])}, {_fmt_coeff(sums[1])}",
        f"odd symmetry defect: {odd_symmetry_defect(m):.3g}",
        f"positive: {m.is_positive()}",
        f"positive-mask convergence: {positive_mask_verdict(m)}",
        f"Deslauriers-Dubuc: {spec.is_deslauriers_dubuc}",
        f"exact: {use_exact}",
    ]
    if q_norms is not None:
        lines.append("difference norms: " + ", ".join(f"{float(v):.6f}" for v in q_norms))
    click.echo("\n".join(lines))


# -- refine ------------------------------------------------------------------------

@cli.command()
@config_option
@click.argument("input_file", type=click.Path(exists=True, dir_okay=False))
@scheme_options
@click.option("--levels", "-l", type=int, default=1, show_default=True)
@click.option("--boundary", "-b", type=click.Choice([b.value for b in Boundary]),
              default=None, help="Default: file metadata, else constant.")
@click.option("--h", "h", type=float, default=None, help="Coarse sample spacing.")
@click.option("--x0", type=float, default=None, help="Abscissa of the first sample.")
@click.option("--noise-sigma", type=float, default=None,
              help="Add N(0, sigma^2) noise before refining.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "-o", type=click.Path(dir_okay=False), help="Output CSV (default stdout).")
@click.option("--no-timestamp", is_flag=True, help="Omit the created line.")
def refine(input_file, kernel, lam, degree, levels, boundary, h, x0, noise_sigma, seed, out,
           no_timestamp):
    """Refine the samples in INPUT_FILE (CSV, one sample per row)."""
    spec = _spec(kernel, lam, degree)
    data = wio.read_data(input_file, boundary, h, x0)
    extra = {"scheme": spec.label()}
    if noise_sigma:
        rng = datasets.make_rng(seed)
        data = RefinableData(data.values + rng.normal(0.0, noise_sigma, data.values.shape),
                             data.boundary, data.level, data.h, data.x0)
        extra.update({"rng": datasets.RNG_NAME, "seed": seed, "noise_sigma": noise_sigma})
    result = refine_k(data, _mask(spec, exact=False), levels)
    _emit(wio.format_csv(result, extra, timestamp=not no_timestamp), out)


# -- certify ------------------------------------------------------------------------

@cli.command()
@config_option
@click.option("--kernel", "-k", default="rect", show_default=True)
@click.option("--degree", "-d", type=int, default=3, show_default=True)
@click.option("--n-max", type=int, default=50, show_default=True)
@click.option("--n-min", type=int, default=2, show_default=True)
@click.option("--offset", type=float, default=0.5, show_default=True,
              help="Family lambda = 2n - 1 + offset.")
@click.option("--mu", type=float, default=None, help="Error constant for the large-n bound.")
@click.option("--exact/--float", "exact", default=None)
@click.option("--norms", is_flag=True, help="Include the per-n norm table.")
@click.option("--out", "-o", type=click.Path(dir_okay=False), help="Write the JSON report here.")
def certify(kernel, degree, n_max, n_min, offset, mu, exact, norms, out):
    """Certify uniform convergence of a family lambda_n = 2n - 1 + offset."""
    family = SchemeFamily(parse_kernel(kernel), degree, offset)
    report = certify_family(family, n_max, n_min, mu=mu, exact=exact)
    if out:
        wio.write_report(report.to_dict(include_norms=True), out)
    text = report.summary()
    if norms:
        text += "\n" + "\n".join(f"  n={n}: {v:.9f}" for n, v in sorted(report.norms.items()))
    click.echo(text)


# -- metrics ------------------------------------------------------------------------

@cli.command()
@config_option
@scheme_options
@click.option("--out", "-o", type=click.Path(dir_okay=False), help="Write the JSON scores here.")
def metrics(kernel, lam, degree, out):
    """Approximation and noise-reduction scores of one scheme."""
    spec = _spec(kernel, lam, degree)
    m = _mask(spec)
    scores = capability_scores(m, spec.kernel, degree).to_dict()
    if degree <= 3:
        ra, rb = relative_to_rect(spec.kernel, degree)
        scores.update({"approx_vs_rect": ra, "noise_vs_rect": rb})
    scores.update({"kernel": str(spec.kernel), "lambda": spec.lam, "degree": degree})
    if out:
        wio.write_report(scores, out)
    for key in ("eta", "approx_const", "denoise_factor", "h_l2sq", "approx_vs_rect",
                "noise_vs_rect"):
        if key in scores:
            click.echo(f"{key}: {scores[key]:.10g}")


# -- pareto ------------------------------------------------------------------------

@cli.command()
@config_option
@click.option("--degree", "-d", type=int, default=2, show_default=True)
@click.option("--grid-steps", type=int, default=60, show_default=True)
@click.option("--p-range", nargs=2, type=float, default=(1.0, 20.0), show_default=True)
@click.option("--q-range", nargs=2, type=float, default=(0.5, 20.0), show_default=True)
@click.option("--extra", multiple=True, help="Additional kernel, e.g. epan or pq:4:5.")
@click.option("--out", "-o", type=click.Path(dir_okay=False), help="CSV of all points.")
def pareto(degree, grid_steps, p_range, q_range, extra, out):
    """PowerPQ Pareto front with Exp samples checked for domination."""
    extras = []
    for text in extra or ("epan", "pq:4:5"):
        k = parse_kernel(text)
        if not k.is_power:
            raise ConfigError(f"--extra expects a power kernel, got {text!r}")
        extras.append((k.p, k.q))
    points = pareto_front(degree, tuple(p_range), tuple(q_range), grid_steps, extras)
    if out:
        rows = [{"p": pt.p, "q": pt.q, "approx_const": pt.approx, "h_l2sq": pt.l2sq,
                 "dominated": int(pt.dominated), "label": pt.label} for pt in points]
        rows += [{"p": "", "q": "", "approx_const": e.approx, "h_l2sq": e.l2sq,
                  "dominated": int(is_dominated_by_any(e, points)), "label": e.label}
                 for e in exp_points(degree)]
        wio.write_table(rows, ["p", "q", "approx_const", "h_l2sq", "dominated", "label"], out)
    front = [pt for pt in points if not pt.dominated]
    click.echo(f"points: {len(points)}, non-dominated: {len(front)}")
    for pt in points:
        if pt.label:
            click.echo(f"{pt.label}: approx {pt.approx:.6g}, noise {pt.l2sq:.6g}, "
                       f"{'dominated' if pt.dominated else 'non-dominated'}")
    for e in exp_points(degree):
        state = "dominated" if is_dominated_by_any(e, points) else "NOT dominated"
        click.echo(f"{e.label}: approx {e.approx:.6g}, noise {e.l2sq:.6g}, {state}")


# -- experiment ----------------------------------------------------------------------

@cli.command()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              help="Experiment config JSON.")
@click.option("--name", type=click.Choice(
    ["StarCurve", "LambdaScaling", "Gibbs", "Staircase", "BasicLimits"], case_sensitive=False),
    default=None)
@click.option("--kernel", "-k", default=None)
@click.option("--lambda", "lam", type=float, default=None)
@click.option("--degree", "-d", type=int, default=None)
@click.option("--levels", "-l", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--out", "-o", type=click.Path(file_okay=False), help="Output directory.")
def experiment(config_path, name, kernel, lam, degree, levels, seed, out):
    """Run a built-in experiment; flags override the config file."""
    config = wio.load_config(config_path) if config_path else {}
    for key, value in (("name", name), ("kernel", kernel), ("lambda", lam),
                       ("degree", degree), ("levels", levels), ("seed", seed)):
        if value is not None:
            config[key] = value
    if "name" not in config:
        raise ConfigError("experiment name is required (--name or config)")
    summary = experiments.run_experiment(config)
    text = wio.report_to_json({"config": config, "summary": summary})
    if out:
        target = Path(out)
        target.mkdir(parents=True, exist_ok=True)
        (target / "summary.json").write_text(text + "\n")
        _write_experiment_data(config, target)
        click.echo(f"wrote {target / 'summary.json'}")
    else:
        click.echo(text)


def _write_experiment_data(config, target: Path):
    """Refined data for the curve and step experiments."""
    name = str(config["name"]).lower().replace("_", "")
    kernel = config.get("kernel", "rect")
    degree = int(config.get("degree", 0))
    if name in ("star", "starcurve"):
        out = experiments.star_refined(kernel, float(config.get("lambda", 3.7)), degree,
                                       int(config.get("levels", 5)))
        out = RefinableData(out.values, out.boundary, out.level, 2 * np.pi / datasets.STAR_SAMPLES)
        wio.write_data(out, target / "refined.csv", {"parameter": "t"}, timestamp=False)
    elif name == "gibbs":
        x, f = datasets.sine_step_samples()
        spec = SchemeSpec(parse_kernel(kernel), float(config.get("lambda", 4.5)), degree)
        data = RefinableData(f, Boundary.CONSTANT, h=x[1] - x[0])
        wio.write_data(refine_k(data, _mask(spec, exact=False), int(config.get("levels", 8))),
                       target / "refined.csv", timestamp=False)
    elif name == "staircase":
        x, f = datasets.staircase()
        spec = SchemeSpec(parse_kernel(kernel), float(config.get("lambda", 4.5)), degree)
        data = RefinableData(f, Boundary.CONSTANT, h=1.0, x0=1.0)
        wio.write_data(refine_k(data, _mask(spec, exact=False), int(config.get("levels", 6))),
                       target / "refined.csv", timestamp=False)


# -- entry point ----------------------------------------------------------------------

def main(argv=None):
    """Console entry point mapping package errors to exit codes."""
    try:
        cli.main(args=argv, prog_name="wlpr", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return EXIT_VALIDATION
    except click.Abort:
        click.echo("aborted", err=True)
        return 1
    except ValidationError as exc:
        click.echo(f"error ({type(exc).__name__}): {exc}", err=True)
        return EXIT_VALIDATION
    except NumericalError as exc:
        click.echo(f"numerical failure ({type(exc).__name__}): {exc}", err=True)
        return EXIT_NUMERICAL
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_VALIDATION
    return EXIT_OK


def run():
    sys.exit(main())
