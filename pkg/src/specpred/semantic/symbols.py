"""Constructor signatures and named constants of the expression language."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

from specpred.ast.nodes import Argument, Call, Expression

Default = Union[float, tuple[float, ...], None]


class ValueKind(Enum):
    """What an expression evaluates to."""

    SCALAR = "scalar"
    LIST = "list"
    DENSITY = "density"


class _Required:
    def __repr__(self) -> str:
        return "REQUIRED"


REQUIRED = _Required()


@dataclass(frozen=True)
class Parameter:
    """A constructor parameter.

    Attributes:
        name: Keyword name.
        kind: Kind of value accepted.
        default: Default value, or REQUIRED.
    """

    name: str
    kind: ValueKind
    default: Union[Default, _Required] = REQUIRED

    @property
    def required(self) -> bool:
        """Whether the argument must be given."""
        return self.default is REQUIRED


class BindingError(Exception):
    """An argument list does not fit a signature.

    Attributes:
        message: What is wrong.
        argument: The offending argument, or None when one is missing.
    """

    def __init__(self, message: str, argument: Optional[Argument] = None) -> None:
        """Initialize with message and offending argument."""
        self.message = message
        self.argument = argument
        super().__init__(message)


@dataclass(frozen=True)
class Signature:
    """A constructor signature.

    Attributes:
        name: Constructor name as written in expressions.
        parameters: Parameters in positional order.
        summary: One-line description for help output.
    """

    name: str
    parameters: tuple[Parameter, ...]
    summary: str = ""

    def parameter(self, name: str) -> Optional[Parameter]:
        """Look up a parameter by keyword."""
        return next((p for p in self.parameters if p.name == name), None)

    def bind(self, call: Call) -> dict[str, Expression]:
        """Match the call's arguments to parameters.

        Returns:
            Argument expressions keyed by parameter name; defaults are not filled in.

        Raises:
            BindingError: Too many positionals, unknown or repeated keywords,
                a positional after a keyword, or a missing required argument.
        """
        bound: dict[str, Expression] = {}
        seen_keyword = False
        for index, argument in enumerate(call.arguments):
            if argument.name is None:
                if seen_keyword:
                    raise BindingError("Positional argument follows a keyword argument", argument)
                if index >= len(self.parameters):
                    raise BindingError(
                        f"{self.name}() takes at most {len(self.parameters)} arguments", argument
                    )
                name = self.parameters[index].name
            else:
                seen_keyword = True
                name = argument.name.name
                if self.parameter(name) is None:
                    raise BindingError(f"{self.name}() has no parameter '{name}'", argument)
            if name in bound:
                raise BindingError(f"Argument '{name}' given more than once", argument)
            bound[name] = argument.value
        for parameter in self.parameters:
            if parameter.required and parameter.name not in bound:
                raise BindingError(f"{self.name}() is missing required argument '{parameter.name}'")
        return bound

    def __str__(self) -> str:
        """Render as ``name(p1, p2=default)``."""

        def show(p: Parameter) -> str:
            if p.required:
                return p.name
            default = p.default
            if isinstance(default, tuple):
                return f"{p.name}=[{', '.join(f'{v:g}' for v in default)}]"
            return f"{p.name}={default:g}" if isinstance(default, float) else p.name

        return f"{self.name}({', '.join(show(p) for p in self.parameters)})"


def _scalar(name: str, default: Union[float, _Required] = REQUIRED) -> Parameter:
    return Parameter(name, ValueKind.SCALAR, default)


def _density(name: str) -> Parameter:
    return Parameter(name, ValueKind.DENSITY)


def _parameter_a() -> tuple[Parameter, ...]:
    return (_scalar("a"),)


SIGNATURES: Mapping[str, Signature] = {
    s.name: s
    for s in (
        Signature("const", (_scalar("c"),), "constant density c"),
        Signature("white", (_scalar("variance", 1.0),), "white noise, variance/(2 pi)"),
        Signature("pollaczek", _parameter_a(), "Pollaczek density with zeros at 0 and +-pi"),
        Signature("hat", _parameter_a(), "companion density with the same zeros"),
        Signature("hat1", _parameter_a(), "companion with an essential zero at 0 only"),
        Signature("hat2", _parameter_a(), "companion with an essential zero at +-pi only"),
        Signature("ratio", _parameter_a(), "hat(a)/pollaczek(a) in closed form"),
        Signature("ma1", (_scalar("theta"), _scalar("variance", 1.0)), "MA(1) density"),
        Signature("ar1", (_scalar("phi"), _scalar("variance", 1.0)), "AR(1) density"),
        Signature(
            "abs_sin",
            (_scalar("center", 0.0), _scalar("alpha", 1.0)),
            "|sin(x - center)|^alpha",
        ),
        Signature(
            "trig_pow",
            (
                Parameter("cos", ValueKind.LIST),
                Parameter("sin", ValueKind.LIST, ()),
                _scalar("alpha", 1.0),
                _scalar("phase", 0.0),
            ),
            "|c0 + sum c_k cos k(x-phase) + s_k sin k(x-phase)|^alpha",
        ),
        Signature(
            "abs_poly",
            (Parameter("coeffs", ValueKind.LIST), _scalar("alpha", 1.0)),
            "|c0 + c1 x + ... |^alpha on [-pi, pi]",
        ),
        Signature("shift", (_density("f"), _scalar("by")), "f(x - by)"),
        Signature("power", (_density("f"), _scalar("alpha")), "f^alpha"),
        Signature("scale", (_density("f"), _scalar("c")), "c f"),
        Signature("quotient", (_density("f_hat"), _density("f")), "f_hat/f with common zeros filled"),
    )
}

CONSTANTS: Mapping[str, str] = {"pi": "pi", "e": "e"}


@dataclass
class SymbolTable:
    """Names visible to an expression: constructors and named constants.

    Attributes:
        signatures: Constructor signatures by name.
        constants: Named scalar constants.
    """

    signatures: Mapping[str, Signature] = field(default_factory=lambda: dict(SIGNATURES))
    constants: Mapping[str, str] = field(default_factory=lambda: dict(CONSTANTS))

    def lookup(self, name: str) -> Optional[Signature]:
        """The constructor called ``name``, if any."""
        return self.signatures.get(name)

    def is_constant(self, name: str) -> bool:
        """Whether ``name`` is a named scalar constant."""
        return name in self.constants

    def names(self) -> list[str]:
        """All names, for suggestions."""
        return sorted({*self.signatures, *self.constants})
