"""Run configuration: defaults, key = value config files and command-line overrides."""

from __future__ import annotations

import os
from collections.abc import Mapping
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Optional, Union

from specpred.errors import InvalidParameterError

OUTPUT_DIR_ENV = "SPECPRED_OUTPUT_DIR"
PRECISIONS = (64, 128, 256, 512, 1024)
FORMATS = ("csv", "json")
DEFAULT_WINDOW = 50

# Config-file keys and the RunConfig field each one sets.
_KEYS = {
    "n": "n",
    "precision": "precision_bits",
    "max_precision": "max_precision",
    "format": "output_format",
    "out": "output_path",
    "window": "window",
    "grid": "grid",
    "tol": "tol",
}


@dataclass(frozen=True)
class RunConfig:
    """Settings of one CLI command.

    Attributes:
        command: The verb being run.
        expressions: Density expressions, in argument order.
        n: Largest prediction order N.
        precision_bits: Starting mantissa width.
        max_precision: Last rung of the precision ladder.
        output_format: csv or json.
        output_path: Where to write; None means stdout.
        window: Trailing window length; None means the verb default.
        grid: Number of samples for plot data.
        tol: Weak-variation tolerance.
    """

    command: str = ""
    expressions: tuple[str, ...] = ()
    n: int = 64
    precision_bits: int = 128
    max_precision: int = 1024
    output_format: str = "csv"
    output_path: Optional[Path] = None
    window: Optional[int] = None
    grid: int = 801
    tol: float = 0.05

    def __post_init__(self) -> None:
        """Validate ranges and enumerations."""
        if self.n < 1:
            raise InvalidParameterError(f"n must be at least 1, got {self.n}")
        if self.precision_bits not in PRECISIONS:
            raise InvalidParameterError(
                f"precision must be one of {', '.join(map(str, PRECISIONS))}; "
                f"got {self.precision_bits}"
            )
        if self.max_precision < self.precision_bits:
            raise InvalidParameterError("max_precision must not be below precision")
        if self.output_format not in FORMATS:
            raise InvalidParameterError(
                f"format must be one of {', '.join(FORMATS)}; got {self.output_format!r}"
            )
        if self.window is not None and self.window < 1:
            raise InvalidParameterError(f"window must be positive, got {self.window}")
        if self.grid < 2:
            raise InvalidParameterError(f"grid must be at least 2, got {self.grid}")
        if not self.tol > 0:
            raise InvalidParameterError(f"tol must be positive, got {self.tol}")

    @property
    def trailing_window(self) -> int:
        """Weak-variation window, DEFAULT_WINDOW unless set."""
        return self.window if self.window is not None else DEFAULT_WINDOW


def _coerce(field_name: str, raw: str) -> Any:
    types = {f.name: f.type for f in fields(RunConfig)}
    declared = str(types[field_name])
    if "Path" in declared:
        return Path(raw)
    try:
        if "int" in declared:
            return int(raw)
        if "float" in declared:
            return float(raw)
    except ValueError as exc:
        raise InvalidParameterError(f"Bad value {raw!r} for '{field_name}'") from exc
    return raw


def parse_config_text(text: str, source: str = "<config>") -> dict[str, Any]:
    """Parse ``key = value`` lines; ``#`` starts a comment.

    Raises:
        InvalidParameterError: Malformed line or unknown key.
    """
    values: dict[str, Any] = {}
    for number, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key or not value:
            raise InvalidParameterError(f"{source}:{number}: expected 'key = value'")
        if key not in _KEYS:
            raise InvalidParameterError(
                f"{source}:{number}: unknown key '{key}' (known: {', '.join(sorted(_KEYS))})"
            )
        values[_KEYS[key]] = _coerce(_KEYS[key], value)
    return values


def load_config_file(path: Union[str, Path]) -> dict[str, Any]:
    """Read and parse a config file."""
    path = Path(path)
    return parse_config_text(path.read_text(encoding="utf-8"), source=str(path))


def resolve_output_path(
    path: Optional[Path], environ: Optional[Mapping[str, str]] = None
) -> Optional[Path]:
    """Place a bare file name under $SPECPRED_OUTPUT_DIR when it is set."""
    environ = os.environ if environ is None else environ
    directory = environ.get(OUTPUT_DIR_ENV)
    if path is None or not directory or path.is_absolute() or path.parent != Path("."):
        return path
    return Path(directory) / path


def merge_config(
    command: str,
    expressions: tuple[str, ...],
    file_values: Mapping[str, Any],
    flag_values: Mapping[str, Any],
    environ: Optional[Mapping[str, str]] = None,
) -> RunConfig:
    """Defaults < config file < explicit flags.

    ``flag_values`` holds only the flags the user actually passed.
    """
    config = RunConfig(command=command, expressions=expressions)
    merged = {**file_values, **{k: v for k, v in flag_values.items() if v is not None}}
    config = replace(config, **merged)
    return replace(config, output_path=resolve_output_path(config.output_path, environ))
