"""Series, table and plot-data files.

All writers render to text first; ``write_text`` then replaces the target
atomically (temporary file in the same directory, then rename). Numbers are
printed with enough digits to read back bit-for-bit at their precision.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from collections.abc import Iterable, Mapping, Sequence
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Union

import click
import mpmath

from specpred.errors import InvalidSeriesError
from specpred.predict import PredictionErrorSeries
from specpred.spectra import Angle, SpectralDensity

SERIES_FORMAT_VERSION = 1
PLOT_DIGITS = 15


def digits_for(precision_bits: int) -> int:
    """Decimal digits that round-trip a mantissa of the given width."""
    return math.ceil(precision_bits * math.log10(2)) + 2


def format_number(value: Any, digits: int) -> str:
    """Fixed-width decimal text of a real mpf."""
    number = value if isinstance(value, mpmath.mpf) else mpmath.mpf(value)
    return str(mpmath.nstr(number, digits, strip_zeros=False))


def _format_scalar(value: Any, digits: int) -> Union[str, list[str]]:
    if isinstance(value, mpmath.mpc):
        return [format_number(value.real, digits), format_number(value.imag, digits)]
    return format_number(value, digits)


def write_text(text: str, path: Optional[Path]) -> None:
    """Write to ``path`` atomically, or to stdout when ``path`` is None."""
    if path is None:
        click.echo(text, nl=False)
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, temp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(temp_name, path)
    except BaseException:
        Path(temp_name).unlink(missing_ok=True)
        raise


def _provenance(series: PredictionErrorSeries) -> dict[str, str]:
    facts = {
        "label": series.label,
        "precision_bits": str(series.precision_bits),
        "r0": format_number(series.r0, digits_for(series.precision_bits)),
    }
    if series.degraded_from is not None:
        facts["degraded_from"] = str(series.degraded_from)
    facts.update(series.provenance)
    return facts


def render_series_csv(series: PredictionErrorSeries) -> str:
    """Comment header with provenance, then ``n,sigma2,alpha`` rows.

    Complex reflections (shifted densities) get ``alpha_re,alpha_im`` columns.
    """
    digits = digits_for(series.precision_bits)
    complex_alpha = any(isinstance(a, mpmath.mpc) for a in series.reflection)
    buffer = io.StringIO()
    for key, value in _provenance(series).items():
        buffer.write(f"# {key}: {value}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["n", "sigma2", *(["alpha_re", "alpha_im"] if complex_alpha else ["alpha"])])
    for n, (sigma2, alpha) in enumerate(zip(series.sigma2, series.reflection), start=1):
        cells = _format_scalar(mpmath.mpc(alpha) if complex_alpha else alpha, digits)
        writer.writerow([n, format_number(sigma2, digits), *([cells] if isinstance(cells, str) else cells)])
    return buffer.getvalue()


def series_to_json(series: PredictionErrorSeries) -> dict[str, Any]:
    """JSON-ready mapping of a series."""
    digits = digits_for(series.precision_bits)
    return {
        "version": SERIES_FORMAT_VERSION,
        "label": series.label,
        "precision_bits": series.precision_bits,
        "r0": format_number(series.r0, digits),
        "degraded_from": series.degraded_from,
        "provenance": dict(series.provenance),
        "rows": [
            {"n": n, "sigma2": format_number(s, digits), "alpha": _format_scalar(a, digits)}
            for n, (s, a) in enumerate(zip(series.sigma2, series.reflection), start=1)
        ],
    }


def render_series_json(series: PredictionErrorSeries) -> str:
    """Indented JSON text of a series."""
    return json.dumps(series_to_json(series), indent=2) + "\n"


def render_series(series: PredictionErrorSeries, output_format: str) -> str:
    """CSV or JSON text of a series."""
    if output_format == "json":
        return render_series_json(series)
    return render_series_csv(series)


def _parse_scalar(value: Union[str, list[str]]) -> Union[mpmath.mpf, mpmath.mpc]:
    if isinstance(value, list):
        return mpmath.mpc(mpmath.mpf(value[0]), mpmath.mpf(value[1]))
    return mpmath.mpf(value)


def series_from_json(data: Mapping[str, Any]) -> PredictionErrorSeries:
    """Rebuild a series, parsing every number at its stored precision.

    Raises:
        InvalidSeriesError: Unknown version or missing fields.
    """
    if data.get("version") != SERIES_FORMAT_VERSION:
        raise InvalidSeriesError(f"Unsupported series format version {data.get('version')!r}")
    try:
        bits = int(data["precision_bits"])
        rows = data["rows"]
        with mpmath.workprec(bits):
            return PredictionErrorSeries(
                sigma2=tuple(mpmath.mpf(row["sigma2"]) for row in rows),
                reflection=tuple(_parse_scalar(row["alpha"]) for row in rows),
                r0=mpmath.mpf(data["r0"]),
                precision_bits=bits,
                degraded_from=data.get("degraded_from"),
                provenance=dict(data.get("provenance", {})),
                label=data.get("label", ""),
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidSeriesError(f"Malformed series file: {exc}") from exc


def read_series_json(path: Union[str, Path]) -> PredictionErrorSeries:
    """Load a series written by ``render_series_json``."""
    with open(path, encoding="utf-8") as handle:
        return series_from_json(json.load(handle))


def read_series_values(path: Union[str, Path]) -> list[mpmath.mpf]:
    """sigma_n^2 values from a JSON series file, or a CSV with a ``sigma2`` column
    (a single unnamed column also works)."""
    path = Path(path)
    if path.suffix == ".json":
        return list(read_series_json(path).sigma2)
    lines = [ln for ln in path.read_text(encoding="utf-8").splitlines() if not ln.startswith("#")]
    reader = csv.reader(lines)
    rows = [row for row in reader if row]
    if not rows:
        raise InvalidSeriesError(f"{path} holds no values")
    header = [cell.strip() for cell in rows[0]]
    if "sigma2" in header:
        column = header.index("sigma2")
        body = rows[1:]
    else:
        column, body = 0, rows
    try:
        return [mpmath.mpf(row[column]) for row in body]
    except (IndexError, ValueError) as exc:
        raise InvalidSeriesError(f"{path}: {exc}") from exc


def render_table(
    rows: Sequence[Mapping[str, Any]], columns: Sequence[str], output_format: str
) -> str:
    """CSV or JSON text of a list of records."""
    if output_format == "json":
        return json.dumps([{c: row[c] for c in columns} for row in rows], indent=2) + "\n"
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(columns), extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buffer.getvalue()


def plot_grid(count: int) -> list[Angle]:
    """``count`` exact angles from -pi to pi inclusive."""
    if count < 2:
        raise ValueError(f"A plot grid needs at least 2 points, got {count}")
    return [Angle(Fraction(2 * j, count - 1) - 1, 0.0) for j in range(count)]


def sample_density(f: SpectralDensity, count: int) -> list[tuple[float, mpmath.mpf]]:
    """(lambda, f(lambda)) on the plot grid; zeros and poles come out exactly."""
    return [(float(angle), f.eval(angle)) for angle in plot_grid(count)]


def render_plot_data(f: SpectralDensity, samples: Iterable[tuple[float, mpmath.mpf]]) -> str:
    """Two whitespace-separated columns with a comment header."""
    lines = [f"# {f.label}", "# lambda f(lambda)"]
    for x, y in samples:
        value = "inf" if mpmath.isinf(y) else format_number(y, PLOT_DIGITS)
        lines.append(f"{x:.{PLOT_DIGITS}g} {value}")
    return "\n".join(lines) + "\n"


def render_trace(
    meta: Mapping[str, str],
    rows: Sequence[Mapping[str, Any]],
    columns: Sequence[str],
    output_format: str,
) -> str:
    """A trace with summary facts: ``# key: value`` comments before CSV, or a
    ``{"meta": ..., "rows": ...}`` JSON object."""
    if output_format == "json":
        body = {"meta": dict(meta), "rows": [{c: row[c] for c in columns} for row in rows]}
        return json.dumps(body, indent=2) + "\n"
    header = "".join(f"# {key}: {value}\n" for key, value in meta.items())
    return header + render_table(rows, columns, "csv")
