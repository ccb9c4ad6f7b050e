"""Command-line interface for specpred."""

from __future__ import annotations

import functools
import os
import sys
from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Callable, Optional

import click
import mpmath
from rich.console import Console
from rich.markup import escape
from rich.panel import Panel
from rich.table import Table

from specpred import __version__
from specpred.asymptotics import (
    TABLE_A_VALUES,
    TABLE_COLUMNS,
    RatioDiagnostics,
    common_zero_comparison,
    fit_power_law,
    ratio_limit,
    separation_check,
    table1,
    weak_variation,
)
from specpred.ast.visitors import ASTPrinter
from specpred.config import OUTPUT_DIR_ENV, RunConfig, load_config_file, merge_config
from specpred.errors import (
    ExpressionError,
    IllConditionedError,
    NotApplicableError,
    PreconditionError,
    SpecpredError,
    UndecidableDivergenceError,
)
from specpred.grammar import Parser
from specpred.integrate import Verdict, geometric_mean
from specpred.log import configure_logging
from specpred.output import (
    format_number,
    read_series_values,
    render_plot_data,
    render_series,
    render_table,
    render_trace,
    sample_density,
    write_text,
)
from specpred.predict import PredictionConfig, PredictionErrorSeries, prediction_errors
from specpred.runtime import build_density
from specpred.semantic import SemanticAnalyzer
from specpred.spectra import SpectralDensity

console = Console()
error_console = Console(stderr=True)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INAPPLICABLE = 2
EXIT_BREAKDOWN = 3

PRESETS = {
    "fig1": ("pollaczek(a={a})", "hat(a={a})"),
    "fig2": ("hat1(a={a})", "hat2(a={a})"),
}


def _fail(message: str, code: int) -> None:
    error_console.print(f"[red]Error:[/red] {escape(message)}")
    sys.exit(code)


@contextmanager
def _exit_codes(on_breakdown: Optional[Callable[[IllConditionedError], None]] = None) -> Iterator[None]:
    """Map failures to exit codes: 1 input, 2 inapplicable, 3 numerical breakdown."""
    try:
        yield
    except ExpressionError as e:
        error_console.print(str(e), markup=False, highlight=False)
        sys.exit(EXIT_INPUT)
    except (NotApplicableError, UndecidableDivergenceError, PreconditionError) as e:
        _fail(e.message, EXIT_INAPPLICABLE)
    except IllConditionedError as e:
        if on_breakdown is not None:
            on_breakdown(e)
        _fail(e.message, EXIT_BREAKDOWN)
    except SpecpredError as e:
        _fail(e.message, EXIT_INPUT)
    except FileNotFoundError as e:
        _fail(f"File not found: {e.filename}", EXIT_INPUT)


def common_options(fn: Callable[..., Any]) -> Callable[..., Any]:
    """Flags shared by every verb; unset flags fall back to the config file, then defaults."""
    options = [
        click.option("--n", "n", type=int, default=None, help="Largest prediction order N."),
        click.option("--precision", "precision_bits", type=int, default=None,
                     help="Starting precision in bits (64, 128, 256, 512, 1024)."),
        click.option("--max-precision", "max_precision", type=int, default=None,
                     help="Last rung of the precision ladder."),
        click.option("--format", "output_format", type=click.Choice(["csv", "json"]),
                     default=None, help="Output format."),
        click.option("--out", "output_path", type=click.Path(path_type=Path), default=None,
                     help="Output file (directory for plotdata); stdout when omitted."),
        click.option("--window", "window", type=int, default=None,
                     help="Trailing window length."),
        click.option("--grid", "grid", type=int, default=None, help="Plot grid size."),
        click.option("--config", "config_path", type=click.Path(exists=True, path_type=Path),
                     default=None, help="key = value config file."),
        click.option("-v", "--verbose", count=True, help="More logging (-v info, -vv debug)."),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def _run_config(command: str, expressions: tuple[str, ...], flags: dict[str, Any]) -> RunConfig:
    config_path = flags.pop("config_path", None)
    configure_logging(flags.pop("verbose", 0), error_console)
    file_values = load_config_file(config_path) if config_path is not None else {}
    return merge_config(command, expressions, file_values, flags)


def _prediction_config(config: RunConfig, normalize: bool = False) -> PredictionConfig:
    return PredictionConfig(
        precision_bits=config.precision_bits,
        max_precision=config.max_precision,
        normalize=normalize,
    )


def _density(source: str) -> SpectralDensity:
    return build_density(source, file_path="<expr>")


def _with_config(command: str) -> Callable[[Callable[..., None]], Callable[..., None]]:
    """Turn the common flags into a RunConfig, inside the exit-code mapping."""

    def decorate(fn: Callable[..., None]) -> Callable[..., None]:
        @functools.wraps(fn)
        def wrapper(*args: Any, **kwargs: Any) -> None:
            flag_names = ("n", "precision_bits", "max_precision", "output_format",
                          "output_path", "window", "grid", "config_path", "verbose")
            flags = {name: kwargs.pop(name) for name in flag_names}
            expressions = tuple(
                v for v in kwargs.values() if isinstance(v, str)
            )
            with _exit_codes():
                config = _run_config(command, expressions, flags)
            fn(config, *args, **kwargs)

        return wrapper

    return decorate


@click.group()
@click.version_option(version=__version__, prog_name="specpred")
def main() -> None:
    """specpred: finite prediction errors of stationary sequences from spectral densities.

    Densities are written as expressions such as "pollaczek(a=1)",
    "pollaczek(a=1) * abs_sin(alpha=2)" or "shift(ma1(theta=0.5), pi/3)".

    Exit codes: 0 success, 1 bad input, 2 inapplicable or undecidable,
    3 numerical breakdown.
    """


@main.command()
@click.argument("expression")
def parse(expression: str) -> None:
    """Parse a density expression and show its AST and singularities."""
    with _exit_codes():
        ast = Parser().parse(expression, file_path="<expr>")
        SemanticAnalyzer(expression, "<expr>").analyze(ast)
        f = _density(expression)
    printer = ASTPrinter()
    printer.visit(ast)
    console.print(Panel(printer.get_output(), title="[bold green]AST[/bold green]",
                        border_style="green"))
    lines = [escape(s.describe()) for s in f.singularities] or ["none"]
    console.print(Panel("\n".join(lines), title=f"[bold blue]{escape(f.label)}[/bold blue]",
                        border_style="blue"))


@main.command()
@click.argument("expression")
@common_options
@_with_config("gm")
def gm(config: RunConfig, expression: str) -> None:
    """Geometric mean G(f) and the Szego verdict."""
    with _exit_codes():
        f = _density(expression)
        result = geometric_mean(f, config.precision_bits)
        verdict = (
            Verdict.DETERMINISTIC if result.divergent or result.value == 0 else Verdict.NONDETERMINISTIC
        )
    facts = {
        "density": f.label,
        "geometric_mean": mpmath.nstr(result.value, 15),
        "divergent": str(result.divergent).lower(),
        "error_bound": f"{result.est_error:.3e}",
        "verdict": verdict.value,
    }
    if config.output_format == "json" or config.output_path is not None:
        write_text(render_table([facts], list(facts), config.output_format), config.output_path)
        return
    for key, value in facts.items():
        console.print(f"{key}: {escape(value)}", highlight=False)


@main.command()
@click.argument("expression")
@click.option("--normalize", is_flag=True, help="Scale the density so that r(0) = 1.")
@common_options
@_with_config("predict")
def predict(config: RunConfig, expression: str, normalize: bool) -> None:
    """sigma_n^2 and reflection coefficients for n = 1..N."""

    def write_partial(e: IllConditionedError) -> None:
        if isinstance(e.partial, PredictionErrorSeries) and len(e.partial):
            write_text(render_series(e.partial, config.output_format), config.output_path)

    with _exit_codes(on_breakdown=write_partial):
        f = _density(expression)
        series = prediction_errors(f, config.n, _prediction_config(config, normalize))
        write_text(render_series(series, config.output_format), config.output_path)


def _ratio_meta(diagnostics: RatioDiagnostics) -> dict[str, str]:
    return {
        "target": f"{diagnostics.target:.12g}",
        "trailing_mean": f"{diagnostics.trailing_mean:.12g}",
        "trailing_slope": f"{diagnostics.trailing_slope:.6g}",
        "relative_gap": f"{diagnostics.relative_gap:.6g}",
        "membership_basis": diagnostics.membership_basis,
    }


@main.command()
@click.argument("f_expression")
@click.argument("g_expression")
@click.option("--common-zero", is_flag=True,
              help="Treat G as f_hat sharing the zeros of F: trace sigma(f_hat)/sigma(f).")
@common_options
@_with_config("ratio")
def ratio(config: RunConfig, f_expression: str, g_expression: str, common_zero: bool) -> None:
    """Trace sigma_n^2(fg)/sigma_n^2(f) against its limit G(g)."""
    with _exit_codes():
        f, g = _density(f_expression), _density(g_expression)
        pipeline = _prediction_config(config)
        if common_zero:
            diagnostics = common_zero_comparison(f, g, config.n, pipeline)
        else:
            diagnostics = ratio_limit(f, g, config.n, pipeline)
    rows = [{"n": n, "ratio": f"{q:.15g}"} for n, q in zip(diagnostics.grid, diagnostics.ratios)]
    text = render_trace(_ratio_meta(diagnostics), rows, ["n", "ratio"], config.output_format)
    write_text(text, config.output_path)


@main.command()
@click.argument("f_small")
@click.argument("f_big")
@common_options
@_with_config("separation")
def separation(config: RunConfig, f_small: str, f_big: str) -> None:
    """Trace sigma_n^2(f_small)/sigma_n^2(f_big), expected to fall to 0."""
    with _exit_codes():
        trace = separation_check(
            _density(f_small), _density(f_big), config.n, _prediction_config(config)
        )
    meta = {
        "trailing_slope": f"{trace.trailing_slope:.6g}",
        "decreasing": str(trace.decreasing).lower(),
        "contraction": f"{trace.contraction:.6g}",
    }
    rows = [{"n": n, "ratio": f"{q:.15g}"} for n, q in zip(trace.grid, trace.ratios)]
    write_text(render_trace(meta, rows, ["n", "ratio"], config.output_format), config.output_path)


@main.command(name="table1")
@click.argument("a_values", nargs=-1, type=float)
@common_options
@_with_config("table1")
def table1_command(config: RunConfig, a_values: tuple[float, ...]) -> None:
    """Rosenblatt factor, C_hat(a) and C(a) for each a (3 decimals)."""
    with _exit_codes():
        rows = table1(a_values or TABLE_A_VALUES, config.precision_bits)
    table = Table(title="Constants of sigma_n^2 ~ C n^-a")
    for heading in ("a", "Gamma^2((a+1)/2)/(pi 2^(2-a))", "C_hat(a)", "C(a)"):
        table.add_column(heading, justify="right")
    for row in rows:
        table.add_row(*row.formatted())
    console.print(table)
    if config.output_path is not None or config.output_format == "json":
        records = [
            {
                "a": row.a,
                "rosenblatt": format_number(row.rosenblatt, 15),
                "c_hat": format_number(row.c_hat, 15),
                "c": format_number(row.c, 15),
            }
            for row in rows
        ]
        text = render_table(records, list(TABLE_COLUMNS), "json")
        write_text(text, config.output_path)


@main.command()
@click.argument("expressions", nargs=-1)
@click.option("--preset", type=click.Choice(sorted(PRESETS)), default=None,
              help="Densities of a named figure.")
@click.option("--a", "a", type=float, default=1.0, show_default=True,
              help="Parameter a for presets.")
@common_options
@_with_config("plotdata")
def plotdata(
    config: RunConfig, expressions: tuple[str, ...], preset: Optional[str], a: float
) -> None:
    """Two-column (lambda, f(lambda)) samples for each density."""
    named: list[tuple[str, str]] = []
    if preset is not None:
        named += [
            (f"{preset}_{template.split('(')[0]}", template.format(a=a))
            for template in PRESETS[preset]
        ]
    named += [(f"density_{i}", source) for i, source in enumerate(expressions, start=1)]
    if not named:
        _fail("Give density expressions or --preset", EXIT_INPUT)
    with _exit_codes():
        rendered = [
            (stem, render_plot_data(f, sample_density(f, config.grid)))
            for stem, f in ((stem, _density(source)) for stem, source in named)
        ]
    if config.output_path is None and len(rendered) == 1:
        write_text(rendered[0][1], None)
        return
    directory = config.output_path or Path(os.environ.get(OUTPUT_DIR_ENV, "."))
    for stem, text in rendered:
        target = directory / f"{stem}.dat"
        write_text(text, target)
        console.print(f"wrote {escape(str(target))}", highlight=False)


def _series_values(source: str, config: RunConfig) -> list[Any]:
    """Values from a series file, or computed from a density expression."""
    if Path(source).exists():
        return read_series_values(source)
    series = prediction_errors(_density(source), config.n, _prediction_config(config))
    return list(series.sigma2)


@main.command()
@click.argument("source")
@click.option("--tol", type=float, default=None, help="Tolerance on |a_{n+1}/a_n - 1|.")
@common_options
@_with_config("weakvar")
def weakvar(config: RunConfig, source: str, tol: Optional[float]) -> None:
    """Weak-variation verdict for a series file or a density expression."""
    with _exit_codes():
        values = _series_values(source, config)
        result = weak_variation(values, config.trailing_window, tol if tol is not None else config.tol)
    meta = {
        "passed": str(result.passed).lower(),
        "window": str(result.window),
        "tol": f"{result.tol:g}",
        "max_deviation": f"{result.max_deviation:.6g}",
        **{f"stride_{nu}": str(ok).lower() for nu, ok in result.stride_passed.items()},
    }
    first = len(values) - result.window
    rows = [{"n": first + i, "ratio": f"{q:.15g}"} for i, q in enumerate(result.ratios)]
    write_text(render_trace(meta, rows, ["n", "ratio"], config.output_format), config.output_path)


@main.command()
@click.argument("source")
@common_options
@_with_config("fit")
def fit(config: RunConfig, source: str) -> None:
    """Least-squares fit sigma_n^2 ~ C n^-a on [N/4, N], or on the last --window orders."""
    with _exit_codes():
        values = _series_values(source, config)
        window = None
        if config.window is not None:
            window = (max(1, len(values) - config.window + 1), len(values))
        result = fit_power_law(values, window)
    facts = {
        "exponent": f"{result.exponent:.10g}",
        "constant": f"{result.constant:.10g}",
        "window": f"{result.window[0]}:{result.window[1]}",
        "residual": f"{result.residual:.3e}",
        "accepted": str(result.accepted).lower(),
        "degenerate": str(result.degenerate).lower(),
    }
    write_text(render_table([facts], list(facts), config.output_format), config.output_path)


if __name__ == "__main__":
    main()
