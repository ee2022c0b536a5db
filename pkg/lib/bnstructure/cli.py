"""
Command-line interface for bnstructure

Exit codes: 0 success, 2 input error, 3 computation error.
"""

import logging
import math
import sys
from functools import wraps
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Sequence

import click

from ._version import __version__
from .config_manager import ConfigManager
from .core import BNStructureCore
from .errors import BNStructureError
from .io.bif import write_bif
from .io.tables import write_csv_dataset, write_structure, write_trace
from .search import LearnConfig
from .utils import (
    ensure_parent,
    format_error,
    format_info,
    format_significant,
    format_success,
    format_warning,
)

logger = logging.getLogger(__name__)

CONTEXT_SETTINGS = dict(help_option_names=["-h", "--help"], max_content_width=120)


def _setup_logging(debug: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if debug else logging.INFO,
        format="%(message)s",
        stream=sys.stderr,
    )


def handle_errors(command: Callable) -> Callable:
    """Turn bnstructure errors into a message on stderr and their exit code"""

    @wraps(command)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        try:
            return command(*args, **kwargs)
        except BNStructureError as e:
            click.echo(click.style(format_error(str(e)), fg="red"), err=True)
            if ctx.obj and ctx.obj.get("debug"):
                import traceback

                traceback.print_exc()
            ctx.exit(e.exit_code)

    return wrapper


def _emit(text: str, out: Optional[Path]) -> None:
    """Write to ``out`` when given, otherwise to standard output"""
    if out is None:
        click.echo(text, nl=False)
    else:
        ensure_parent(out).write_text(text, encoding="utf-8")
        logger.info(f"Wrote {out}")


def _parse_floats(value: Optional[str], label: str) -> Optional[list]:
    if value is None:
        return None
    try:
        return [float(x) for x in value.split(",") if x.strip()]
    except ValueError:
        raise click.BadParameter(f"{label} must be comma-separated numbers, got {value!r}")


def _core(ctx: click.Context) -> BNStructureCore:
    return ctx.obj["core"]


score_option = click.option(
    "--score", "score_token", default="bdeu:1", show_default=True,
    help="Score kind: bdeu:ALPHA, bds:ALPHA, k2, jeffreys, bic, loglik",
)
prior_option = click.option(
    "--prior", "prior_token", default="u", show_default=True,
    help="Graph prior: u, mu:BETA, mu-sparse:C",
)
schema_option = click.option(
    "--schema", type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Level declarations, one name:level1,level2 per line",
)
out_option = click.option(
    "--out", type=click.Path(dir_okay=False, path_type=Path),
    help="Output file (standard output when omitted)",
)
existing_file = click.Path(exists=True, dir_okay=False, path_type=Path)


@click.group(context_settings=CONTEXT_SETTINGS)
@click.version_option(__version__, "-v", "--version", prog_name="bnstructure")
@click.option("--debug", is_flag=True, help="Enable debug logging")
@click.pass_context
def cli(ctx: click.Context, debug: bool) -> None:
    """
    bnstructure - score-based structure learning for discrete Bayesian networks

    Examples:
        bnstructure score data.csv structure.csv --score bds:1 --prior mu:0.5
        bnstructure learn data.csv --score bdeu:10 --out learned.csv
        bnstructure simulate sim.yaml --out results.csv
    """
    _setup_logging(debug)
    ctx.ensure_object(dict)
    ctx.obj["debug"] = debug
    ctx.obj.setdefault("core", BNStructureCore())


@cli.command()
@click.argument("data_path", type=existing_file)
@click.argument("structure", type=existing_file, required=False)
@score_option
@prior_option
@schema_option
@out_option
@click.pass_context
@handle_errors
def score(ctx, data_path, structure, score_token, prior_token, schema, out):
    """Print the log score of STRUCTURE (no arcs when omitted), node by node."""
    core = _core(ctx)
    data = core.load_dataset(data_path, schema)
    dag = core.load_structure(structure, data)
    report = core.score(data, dag, score_token, prior_token)

    click.echo(f"strategy: {report.strategy}")
    for row in report.breakdown.itertuples(index=False):
        parents = row.parents or "-"
        click.echo(f"  {row.node} | {parents}: {row.local_score:.6f}")
    click.echo(f"log score: {report.total:.6f}")
    click.echo(f"score: {format_significant(math.exp(report.total))}")
    click.echo(f"log prior: {report.log_prior:.6f}")
    click.echo(f"log posterior: {report.log_posterior:.6f}")
    if out is not None:
        report.breakdown.to_csv(ensure_parent(out), index=False, lineterminator="\n")
        logger.info(f"Wrote score breakdown to {out}")


@cli.command()
@click.argument("data_path", type=existing_file)
@score_option
@prior_option
@schema_option
@out_option
@click.option("--max-parents", type=click.IntRange(min=1), help="Maximum parents per node")
@click.option("--max-iterations", type=click.IntRange(min=1), default=10000, show_default=True)
@click.option("--start", type=existing_file, help="Starting structure (arc CSV or BIF)")
@click.option("--trace", type=click.Path(dir_okay=False, path_type=Path), help="Write the search trace CSV")
@click.option(
    "--fitted-bif", type=click.Path(dir_okay=False, path_type=Path),
    help="Fit the learned structure and write it as BIF",
)
@click.option("--fit-alpha", type=float, default=1.0, show_default=True, help="Imaginary sample size of the fit")
@click.option("--strict", is_flag=True, help="Fail when the iteration limit is reached")
@click.pass_context
@handle_errors
def learn(
    ctx, data_path, score_token, prior_token, schema, out, max_parents, max_iterations,
    start, trace, fitted_bif, fit_alpha, strict,
):
    """Learn a structure from DATA_PATH by greedy hill climbing."""
    core = _core(ctx)
    data = core.load_dataset(data_path, schema)
    config = LearnConfig(
        max_parents=max_parents,
        max_iterations=max_iterations,
        start=core.load_structure(start, data) if start else None,
        fail_on_iteration_limit=strict,
    )
    result = core.learn(
        data, score_token, prior_token, config,
        fit_alpha=fit_alpha if fitted_bif else None,
    )
    _emit(write_structure(result.dag, result.names), out)
    if trace is not None:
        write_trace(result.trace, result.names, ensure_parent(trace))
    if result.fitted is not None:
        write_bif(ensure_parent(fitted_bif), result.fitted)
    click.echo(
        format_info(
            f"{result.strategy}: {result.dag.arc_count} arcs after {len(result.trace)} moves, "
            f"log posterior {result.trace.final_log_posterior:.6f}"
        ),
        err=True,
    )
    if result.trace.iteration_limit_reached:
        click.echo(format_warning(f"stopped at {max_iterations} iterations, not a local optimum"), err=True)


@cli.command()
@click.argument("config_file", type=existing_file, required=False)
@click.option("--reference", help="Reference BIF or synthetic:N:ARCS[:SEED]")
@click.option("--ratios", help="Comma-separated n/p ratios")
@click.option("--replicates", type=int)
@click.option("--strategy", "strategies", multiple=True, help="score+prior, e.g. bds:1+mu:0.5 (repeatable)")
@click.option("--test-set-size", type=int)
@click.option("--seed", type=int)
@click.option("--threads", type=int)
@click.option("--max-parents", type=int)
@click.option("--no-timing", is_flag=True, help="Write seconds = 0 so reruns are byte-identical")
@click.option("--dag-level-shd", is_flag=True, help="Compare DAGs instead of CPDAGs")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), required=True, help="Results CSV")
@click.option("--summary", type=click.Path(dir_okay=False, path_type=Path), help="Also write a summary CSV")
@click.option("--save-config", type=click.Path(dir_okay=False, path_type=Path), help="Write the effective config")
@click.pass_context
@handle_errors
def simulate(
    ctx, config_file, reference, ratios, replicates, strategies, test_set_size, seed,
    threads, max_parents, no_timing, dag_level_shd, out, summary, save_config,
):
    """Run the sample-learn-evaluate grid against a reference network."""
    overrides: Dict[str, Any] = {
        "reference": reference,
        "ratios": _parse_floats(ratios, "--ratios"),
        "replicates": replicates,
        "strategies": list(strategies) or None,
        "test_set_size": test_set_size,
        "seed": seed,
        "threads": threads,
        "max_parents": max_parents,
        "record_timing": False if no_timing else None,
        "dag_level_shd": True if dag_level_shd else None,
    }
    manager = ConfigManager(config_file)
    config = manager.build(overrides)
    if save_config is not None:
        ConfigManager.save(config, ensure_parent(save_config))

    core = _core(ctx)
    table = core.simulate(config)
    table.to_csv(ensure_parent(out))
    if summary is not None:
        core.summarize(out).to_csv(ensure_parent(summary), index=False, lineterminator="\n")
    failed = sum(1 for row in table.rows if row["error"])
    message = f"{len(table)} runs written to {out}"
    if failed:
        message += f" ({failed} failed)"
    click.echo(format_success(message), err=True)


@cli.command()
@click.argument("data_path", type=existing_file)
@click.argument("g_plus", type=existing_file)
@click.argument("g_minus", type=existing_file)
@click.option("--alpha", "alphas", multiple=True, type=click.FloatRange(min=0, min_open=True),
              help="Imaginary sample size (repeatable; default grid 1e-6..1e8)")
@schema_option
@out_option
@click.pass_context
@handle_errors
def bfcurve(ctx, data_path, g_plus, g_minus, alphas, schema, out):
    """Bayes factors of G_PLUS against G_MINUS under BDeu and BDs over alpha."""
    core = _core(ctx)
    data = core.load_dataset(data_path, schema)
    frame = core.bayes_factors(data, g_plus, g_minus, sorted(alphas) or None)
    _emit(frame.to_csv(index=False, lineterminator="\n", float_format="%.10g"), out)


@cli.command()
@click.argument("first", type=existing_file)
@click.argument("second", type=existing_file)
@click.option("--nodes", help="Comma-separated isolated node names missing from both arc lists")
@click.option("--dag-level", is_flag=True, help="Compare DAGs instead of CPDAGs")
@click.pass_context
@handle_errors
def shd(ctx, first, second, nodes, dag_level):
    """Structural Hamming distance between two structures."""
    extra = [n.strip() for n in nodes.split(",") if n.strip()] if nodes else []
    click.echo(_core(ctx).shd(first, second, extra, dag_level))


@cli.command()
@click.argument("bif_path", type=existing_file)
@click.option("-n", "--rows", type=click.IntRange(min=0), required=True, help="Number of rows")
@click.option("--seed", type=click.IntRange(min=0, max=2**64 - 1), default=0, show_default=True)
@out_option
@click.pass_context
@handle_errors
def sample(ctx, bif_path, rows, seed, out):
    """Draw rows from the network in BIF_PATH by ancestral sampling."""
    data = _core(ctx).sample(bif_path, rows, seed)
    _emit(write_csv_dataset(data), out)


@cli.command()
@click.argument("bif_path", type=existing_file)
@click.argument("test_path", type=existing_file)
@click.pass_context
@handle_errors
def predict(ctx, bif_path, test_path):
    """Log-likelihood of TEST_PATH under the network in BIF_PATH."""
    total, rows = _core(ctx).predict(bif_path, test_path)
    click.echo(f"loglik: {total:.4f}")
    if rows:
        click.echo(f"per row: {total / rows:.6f}")


@cli.command()
@click.argument("nodes", type=int)
@out_option
@click.option("--correlations", type=click.Path(dir_okay=False, path_type=Path),
              help="Write arc-pair correlations CSV")
@click.pass_context
@handle_errors
def census(ctx, nodes, out, correlations):
    """Arc probabilities of the uniform prior over all DAGs on NODES nodes."""
    report = _core(ctx).census(nodes)
    click.echo(f"DAGs: {report.census.n_dags}")
    if nodes > 1:
        first = report.arcs.iloc[0]
        click.echo(
            f"arc forward/absent: {first['forward']:.4f} / {first['absent']:.4f} "
            f"(approx {report.approx_forward:.4f} / {report.approx_absent:.4f})"
        )
    if nodes > 2:
        click.echo(
            f"incident correlation: {report.mean_incident_correlation:.4f} "
            f"(large-N approx {report.approx_incident_correlation:.4f})"
        )
        click.echo(f"max disjoint |correlation|: {report.max_disjoint_correlation:.3g}")
    if out is not None:
        report.arcs.to_csv(ensure_parent(out), index=False, lineterminator="\n")
    if correlations is not None:
        report.correlations.to_csv(ensure_parent(correlations), index=False, lineterminator="\n")


@cli.command()
@click.argument("results", type=existing_file)
@out_option
@click.pass_context
@handle_errors
def summarize(ctx, results, out):
    """Mean SHD, arc ratio and log-likelihood per ratio and strategy."""
    frame = _core(ctx).summarize(results)
    _emit(frame.to_csv(index=False, lineterminator="\n", float_format="%.6g"), out)


@cli.command("strategies")
@click.pass_context
def list_strategies(ctx):
    """List the available score kinds and graph priors."""
    for entry in _core(ctx).registry.list_strategies():
        click.echo(f"{entry['token']:12} {entry['description']}")


def main(argv: Optional[Sequence[str]] = None) -> None:
    """Main entry point for the CLI"""
    cli(args=argv, prog_name="bnstructure")


if __name__ == "__main__":
    main()
