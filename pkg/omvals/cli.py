"""
omvals command line interface.

Commands: pdisc, pres, omrep, different and bench. Polynomials are given in
the text grammar ("x^2 + 3*x - 1"), as a JSON coefficient file, or as one of
the example families with --example.
"""

import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Tuple

import click
from loguru import logger
from pydantic import TypeAdapter

from omvals import __version__, config
from omvals.bench import run_bench, write_csv
from omvals.diffdisc import local_discriminants, normalize_nonmonic_disc, p_discriminant
from omvals.examples import generate_example, is_pair
from omvals.exceptions import InvariantViolation, ParamOutOfRange, cli_command
from omvals.models import DifferentModel, DiscModel, FactorizationModel, ResultantModel
from omvals.montes import NodeTrace, montes_factorize
from omvals.oracle import naive_disc_valuation, naive_res_valuation
from omvals.polyz import (
    INF,
    PIntPoly,
    Val,
    load_rational_coefficients,
    parse_rational_polynomial,
    to_integers,
)
from omvals.presultant import normalize_nonmonic_res, resultant_run

DIFFERENT_LIST = TypeAdapter(List[DifferentModel])


class InterceptHandler(logging.Handler):
    """Forward standard library log records to loguru."""

    def emit(self, record: logging.LogRecord) -> None:
        try:
            level = logger.level(record.levelname).name
        except ValueError:
            level = record.levelno
        frame, depth = logging.currentframe(), 2
        while frame is not None and frame.f_code.co_filename == logging.__file__:
            frame = frame.f_back
            depth += 1
        logger.opt(depth=depth, exception=record.exc_info).log(level, record.getMessage())


def setup_logging(debug: bool = False) -> None:
    level = "DEBUG" if debug else config.log_level()
    logger.remove()
    logger.add(sys.stderr, level=level)
    std_level = logging.DEBUG if debug else getattr(logging, level.upper(), logging.INFO)
    logging.basicConfig(handlers=[InterceptHandler()], level=std_level, force=True)


# ============================================================================
# Input helpers
# ============================================================================

def _read_rational(text: Optional[str], path: Optional[str], what: str) -> List[Fraction]:
    """Text expression, "@file" / file path JSON coefficients, in that order."""
    if text is not None and text.startswith("@"):
        text, path = None, text[1:]
    if path is not None:
        return load_rational_coefficients(path)
    if text is None:
        raise click.UsageError(f"{what} is missing")
    return parse_rational_polynomial(text)


def _example(
    example: str, p: int, n: Optional[int], m: Optional[int], i: Optional[int], j: Optional[int]
):
    return generate_example(example, p=p, n=n, m=m, i=i, j=j)


def _log_polygons(trace: Tuple[NodeTrace, ...]) -> None:
    for node in trace:
        logger.info(
            f"level {node.level} deg {node.degree} cs {node.cs}: "
            f"{node.polygon} -> +{node.contribution}"
        )


def _text(v: Optional[Val]) -> str:
    return "infinity" if v == INF else str(v)


def _check_oracle(engine: Val, oracle: Optional[Val]) -> None:
    if oracle is not None and oracle != engine:
        raise InvariantViolation(f"engine value {_text(engine)}, oracle {_text(oracle)}")


def example_options(func):
    """--example with the family parameters --n, --m, --i and --j."""
    options = [
        click.option(
            "--example", type=click.Choice(config.Suite.ALL), default=None,
            help="Use an example family instead of an explicit polynomial",
        ),
        click.option("--n", "n", type=int, default=None, help="Degree parameter of ex1"),
        click.option("--m", "m", type=int, default=None, help="Parameter m of ex2 and ex4"),
        click.option("--i", "i", type=int, default=None, help="First index of ex5"),
        click.option("--j", "j", type=int, default=None, help="Ladder index of ex3 and ex5"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


prime_option = click.option("-p", "p", type=int, required=True, help="Prime number p")
json_option = click.option("--json", "as_json", is_flag=True, help="Print JSON instead of text")


def _single(
    poly: Optional[str],
    poly_file: Optional[str],
    example: Optional[str],
    p: int,
    params: Tuple,
    normalize: bool = False,
) -> Tuple[PIntPoly, int]:
    """The polynomial of a single-input command and its normalization offset."""
    if example is not None:
        if is_pair(example):
            raise ParamOutOfRange(f"{example} is a pair of polynomials; use pres")
        return _example(example, p, *params), 0
    dense = _read_rational(poly, poly_file, "--poly")
    if normalize:
        return normalize_nonmonic_disc(dense, p)
    return PIntPoly(to_integers(dense, poly or str(poly_file))), 0


# ============================================================================
# Commands
# ============================================================================

@click.group()
@click.version_option(__version__, prog_name="omvals")
@click.option("--debug", is_flag=True, help="Enable debug logging")
@click.option("--debug-polygons", is_flag=True, help="Dump every visited polygon to stderr")
@click.pass_context
def cli(ctx: click.Context, debug: bool, debug_polygons: bool) -> None:
    """p-adic valuations of discriminants and resultants via OM representations."""
    setup_logging(debug)
    ctx.ensure_object(dict)
    ctx.obj["debug_polygons"] = debug_polygons


@cli.command()
@prime_option
@click.option("--poly", "--f", "poly", default=None, help="Polynomial expression (or @file)")
@click.option("-f", "--file", "poly_file", default=None, help="JSON coefficient file")
@example_options
@json_option
@click.option("--oracle", is_flag=True, help="Cross-check with the exact discriminant")
@click.option(
    "--paper-guard", "guard_only", is_flag=True,
    help="Skip the squarefree pre-check and rely on the index bound",
)
@click.option("--normalize", is_flag=True, help="Accept non-monic or rational input")
@click.pass_context
@cli_command(error_prefix="pdisc")
def pdisc(
    ctx: click.Context,
    p: int,
    poly: Optional[str],
    poly_file: Optional[str],
    example: Optional[str],
    n: Optional[int],
    m: Optional[int],
    i: Optional[int],
    j: Optional[int],
    as_json: bool,
    oracle: bool,
    guard_only: bool,
    normalize: bool,
) -> int:
    """v_p of the discriminant of a monic integer polynomial."""
    g, offset = _single(poly, poly_file, example, p, (n, m, i, j), normalize)
    trace = ctx.obj["debug_polygons"]
    result = p_discriminant(g, p, guard_only=guard_only, trace=trace)
    if trace and result.factorization is not None:
        _log_polygons(result.factorization.trace)
    naive = None
    if oracle:
        naive = naive_disc_valuation(g, p)
        if naive != INF:
            naive -= offset
    model = DiscModel.from_result(result, p, g.degree, offset, naive)
    _check_oracle(model.v_disc, naive)

    if as_json:
        click.echo(model.model_dump_json(indent=2))
    elif model.v_disc == INF:
        click.echo("infinity")
    else:
        click.echo(f"sum_local_disc = {_text(model.sum_local_disc)}")
        click.echo(f"ind_p = {_text(model.ind)}")
        click.echo(f"v_disc = {_text(model.v_disc)}")
        if naive is not None:
            click.echo(f"oracle = {_text(naive)}")
    return config.ExitCode.INFINITY if model.v_disc == INF else config.ExitCode.OK


@cli.command()
@prime_option
@click.option("--f", "f_text", default=None, help="First polynomial (expression or @file)")
@click.option("--g", "g_text", default=None, help="Second polynomial (expression or @file)")
@example_options
@json_option
@click.option("--oracle", is_flag=True, help="Cross-check with the exact resultant")
@click.option("--normalize", is_flag=True, help="Accept non-monic or rational input")
@click.pass_context
@cli_command(error_prefix="pres")
def pres(
    ctx: click.Context,
    p: int,
    f_text: Optional[str],
    g_text: Optional[str],
    example: Optional[str],
    n: Optional[int],
    m: Optional[int],
    i: Optional[int],
    j: Optional[int],
    as_json: bool,
    oracle: bool,
    normalize: bool,
) -> int:
    """v_p of the resultant of two monic integer polynomials."""
    offset = 0
    if example is not None:
        if not is_pair(example):
            raise ParamOutOfRange(f"{example} is a single polynomial; use pdisc")
        f, g = _example(example, p, n, m, i, j)
    else:
        df = _read_rational(f_text, None, "--f")
        dg = _read_rational(g_text, None, "--g")
        if normalize:
            f, g, offset = normalize_nonmonic_res(df, dg, p)
        else:
            f, g = PIntPoly(to_integers(df, "--f")), PIntPoly(to_integers(dg, "--g"))

    trace = ctx.obj["debug_polygons"]
    run = resultant_run(f, g, p, trace=trace)
    if trace:
        _log_polygons(run.trace)
    naive = None
    if oracle:
        naive = naive_res_valuation(f, g, p)
        if naive != INF:
            naive -= offset
    model = ResultantModel.from_run(run, p, f.degree, g.degree, offset, naive)
    _check_oracle(model.value, naive)

    if as_json:
        click.echo(model.model_dump_json(indent=2))
    elif model.value == INF:
        click.echo("infinity")
    else:
        click.echo(f"v_p(Res) = {model.value}")
        if naive is not None:
            click.echo(f"oracle = {_text(naive)}")
    return config.ExitCode.INFINITY if model.value == INF else config.ExitCode.OK


@cli.command()
@prime_option
@click.option("--f", "--poly", "poly", default=None, help="Polynomial expression (or @file)")
@click.option("-f", "--file", "poly_file", default=None, help="JSON coefficient file")
@example_options
@json_option
@click.pass_context
@cli_command(error_prefix="omrep")
def omrep(
    ctx: click.Context,
    p: int,
    poly: Optional[str],
    poly_file: Optional[str],
    example: Optional[str],
    n: Optional[int],
    m: Optional[int],
    i: Optional[int],
    j: Optional[int],
    as_json: bool,
) -> int:
    """OM representations of the p-adic factors and the p-index."""
    f, _ = _single(poly, poly_file, example, p, (n, m, i, j))
    trace = ctx.obj["debug_polygons"]
    fact = montes_factorize(f, p, trace=trace)
    if trace:
        _log_polygons(fact.trace)
    model = FactorizationModel.from_factorization(fact)
    if as_json:
        click.echo(model.model_dump_json(indent=2))
        return config.ExitCode.OK

    click.echo(f"ind_p = {_text(model.ind)}, {len(model.reps)} factor(s)")
    for rep in model.reps:
        inv = rep.invariants
        click.echo(f"rep {rep.index}: degree {rep.degree}, depth {inv.depth}, psi0 = {rep.psi0}")
        for k, lvl in enumerate(rep.levels, 1):
            click.echo(
                f"  level {k}: deg phi {lvl.deg_phi}, lambda {lvl.slope}, f {lvl.f}, "
                f"psi {lvl.psi}"
            )
        click.echo(f"  phi = {rep.phi_text}, h = {_text(rep.h)}")
        click.echo(
            f"  e = {inv.e}, f = {inv.f}, mu = {inv.mu}, ind = {inv.ind}, "
            f"conductor = {inv.conductor}, exp = {inv.exp}"
        )
    return config.ExitCode.OK


@cli.command()
@prime_option
@click.option("--f", "--poly", "poly", default=None, help="Polynomial expression (or @file)")
@click.option("-f", "--file", "poly_file", default=None, help="JSON coefficient file")
@example_options
@click.option("--rep", "rep_index", default="0", help="Factor index, or 'all'")
@json_option
@cli_command(error_prefix="different")
def different(
    p: int,
    poly: Optional[str],
    poly_file: Optional[str],
    example: Optional[str],
    n: Optional[int],
    m: Optional[int],
    i: Optional[int],
    j: Optional[int],
    rep_index: str,
    as_json: bool,
) -> int:
    """Exponent of the local different of one or every p-adic factor."""
    f, _ = _single(poly, poly_file, example, p, (n, m, i, j))
    local = local_discriminants(f, p)
    if rep_index == "all":
        chosen = list(range(len(local)))
    else:
        try:
            index = int(rep_index)
        except ValueError:
            raise click.BadParameter(f"expected an index or 'all', got {rep_index!r}")
        if not 0 <= index < len(local):
            raise click.BadParameter(f"{len(local)} factor(s); index {index} out of range")
        chosen = [index]

    models = [DifferentModel.from_result(local[k][1], k) for k in chosen]
    if as_json:
        click.echo(DIFFERENT_LIST.dump_json(models, indent=2).decode())
        return config.ExitCode.OK
    for d in models:
        click.echo(
            f"rep {d.index}: e = {d.e}, f = {d.f}, rho = {d.rho}, "
            f"diff exponent = {d.diff_exponent}"
        )
    return config.ExitCode.OK


@cli.command()
@click.option("--suite", type=click.Choice(config.Suite.ALL), required=True)
@click.option("-p", "p", type=int, default=None, help="Prime (with parameters: one row only)")
@click.option("--n", "n", type=int, default=None)
@click.option("--m", "m", type=int, default=None)
@click.option("--i", "i", type=int, default=None)
@click.option("--j", "j", type=int, default=None)
@click.option("--csv", "csv_path", default="-", help="Output CSV path ('-' for stdout)")
@click.option("--with-naive", is_flag=True, help="Also time the exact oracle")
@click.option("--repeat", type=click.IntRange(min=1), default=1, help="Engine runs per row")
@cli_command(error_prefix="bench")
def bench(
    suite: str,
    p: Optional[int],
    n: Optional[int],
    m: Optional[int],
    i: Optional[int],
    j: Optional[int],
    csv_path: str,
    with_naive: bool,
    repeat: int,
) -> int:
    """Run an example suite and write one CSV row per configuration."""
    params = None
    if p is not None:
        given = {"n": n, "m": m, "i": i, "j": j}
        params = [{"p": p, **{k: v for k, v in given.items() if v is not None}}]
    rows = run_bench(suite, params, with_naive=with_naive, repeat=repeat)
    if csv_path == "-":
        write_csv(rows, sys.stdout)
    else:
        write_csv(rows, Path(csv_path))
        logger.info(f"wrote {len(rows)} row(s) to {csv_path}")
    return config.ExitCode.OK


def main() -> None:
    """Run the omvals command line."""
    cli(obj={})


if __name__ == "__main__":
    main()
