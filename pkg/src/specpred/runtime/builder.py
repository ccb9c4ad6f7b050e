"""Turns a checked expression AST into a SpectralDensity."""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Mapping
from typing import Any, Optional, Union

from specpred.ast.nodes import (
    ASTNode,
    BinaryOp,
    Call,
    Expression,
    Identifier,
    ListLiteral,
    Number,
    UnaryOp,
)
from specpred.ast.visitors import ASTVisitor
from specpred.errors import (
    ExpressionError,
    InvalidConstructionError,
    InvalidParameterError,
    PreconditionError,
    SpecpredError,
)
from specpred.grammar import Parser
from specpred.semantic import REQUIRED, SemanticAnalyzer, SymbolTable
from specpred.spectra import (
    AlgebraicPolynomial,
    Angle,
    PollaczekParams,
    SpectralDensity,
    TrigPolynomial,
    algebraic_power_factor,
    ar1,
    companion_hat,
    companion_hat1,
    companion_hat2,
    constant,
    ma1,
    pollaczek,
    pollaczek_companion_ratio,
    power,
    product,
    quotient,
    scale,
    shift,
    trig_power_factor,
    white_noise,
)

logger = logging.getLogger(__name__)

Value = Union[float, tuple[float, ...], SpectralDensity]

_CONSTANT_VALUES: Mapping[str, float] = {"pi": math.pi, "e": math.e}

_UNIT = constant(1.0)


def _real_power(x: float, y: float) -> float:
    result = x**y
    if isinstance(result, complex):
        raise InvalidParameterError(f"{x:g}^{y:g} is not a real number")
    return float(result)


def _abs_sin(center: float, alpha: float) -> SpectralDensity:
    return trig_power_factor(_UNIT, TrigPolynomial.sine(Angle.snapped(center)), alpha)


def _trig_pow(
    cos: tuple[float, ...], sin: tuple[float, ...], alpha: float, phase: float
) -> SpectralDensity:
    t = TrigPolynomial(
        cos_coeffs=cos,
        sin_coeffs=sin,
        phase=Angle.snapped(phase),
        nonnegative=alpha < 0,
    )
    return trig_power_factor(_UNIT, t, alpha)


def _abs_poly(coeffs: tuple[float, ...], alpha: float) -> SpectralDensity:
    return algebraic_power_factor(_UNIT, AlgebraicPolynomial(coeffs), alpha)


CONSTRUCTORS: Mapping[str, Callable[..., SpectralDensity]] = {
    "const": constant,
    "white": white_noise,
    "pollaczek": lambda a: pollaczek(PollaczekParams(a)),
    "hat": companion_hat,
    "hat1": companion_hat1,
    "hat2": companion_hat2,
    "ratio": pollaczek_companion_ratio,
    "ma1": ma1,
    "ar1": ar1,
    "abs_sin": _abs_sin,
    "trig_pow": _trig_pow,
    "abs_poly": _abs_poly,
    "shift": lambda f, by: shift(f, Angle.snapped(by)),
    "power": power,
    "scale": scale,
    "quotient": quotient,
}


class DensityBuilder(ASTVisitor):
    """Evaluates an analyzed expression.

    Construction failures surface as expression errors pointing at the
    offending subexpression:

        E201: a parameter is out of range.
        E202: the operands cannot be combined.
    """

    def __init__(
        self,
        source: Optional[str] = None,
        file_path: Optional[str] = None,
        symbol_table: Optional[SymbolTable] = None,
    ) -> None:
        """Initialize with the source text used for error context."""
        self._lines = source.splitlines() if source is not None else []
        self._file_path = file_path
        self._symbol_table = symbol_table or SymbolTable()

    def build(self, expression: Expression) -> SpectralDensity:
        """Evaluate an expression that the analyzer accepted as a density."""
        value = self.visit(expression)
        if not isinstance(value, SpectralDensity):
            raise TypeError("build() needs an analyzed density expression")
        return value

    def _error(self, node: ASTNode, exc: SpecpredError) -> ExpressionError:
        loc = node.source_location
        code = "E201" if isinstance(exc, InvalidParameterError) else "E202"
        return ExpressionError(
            line=loc.line,
            column=loc.column,
            message=exc.message,
            source_line=self._lines[loc.line - 1] if 0 < loc.line <= len(self._lines) else None,
            file_path=self._file_path,
            error_code=code,
        )

    def _guarded(self, node: ASTNode, fn: Callable[..., Any], *args: Any, **kwargs: Any) -> Any:
        try:
            return fn(*args, **kwargs)
        except (InvalidParameterError, InvalidConstructionError, PreconditionError) as exc:
            raise self._error(node, exc) from exc
        except ZeroDivisionError as exc:
            raise self._error(node, InvalidParameterError("Division by zero")) from exc

    def visit_Number(self, node: Number) -> float:
        """A literal."""
        return node.value

    def visit_Identifier(self, node: Identifier) -> float:
        """A named constant."""
        return _CONSTANT_VALUES[node.name]

    def visit_ListLiteral(self, node: ListLiteral) -> tuple[float, ...]:
        """A tuple of scalars."""
        return tuple(float(self.visit(item)) for item in node.items)

    def visit_UnaryOp(self, node: UnaryOp) -> float:
        """Negation."""
        return -float(self.visit(node.operand))

    def visit_BinaryOp(self, node: BinaryOp) -> Value:
        """Scalar arithmetic, or the density algebra."""
        left, right = self.visit(node.left), self.visit(node.right)
        op = node.operator
        if not isinstance(left, SpectralDensity) and not isinstance(right, SpectralDensity):
            scalar_ops: Mapping[str, Callable[[float, float], float]] = {
                "+": lambda x, y: x + y,
                "-": lambda x, y: x - y,
                "*": lambda x, y: x * y,
                "/": lambda x, y: x / y,
                "^": _real_power,
            }
            return self._guarded(node, scalar_ops[op], left, right)  # type: ignore[no-any-return]
        if op == "*":
            if isinstance(left, SpectralDensity) and isinstance(right, SpectralDensity):
                return self._guarded(node, product, left, right)  # type: ignore[no-any-return]
            f, c = (left, right) if isinstance(left, SpectralDensity) else (right, left)
            return self._guarded(node, scale, f, c)  # type: ignore[no-any-return]
        if op == "/" and isinstance(right, SpectralDensity):
            return self._guarded(node, quotient, left, right)  # type: ignore[no-any-return]
        if op == "/":
            return self._guarded(node, lambda: scale(left, 1 / right))  # type: ignore[no-any-return]
        return self._guarded(node, power, left, right)  # type: ignore[no-any-return]

    def visit_Call(self, node: Call) -> SpectralDensity:
        """Run a catalog constructor with bound arguments and defaults."""
        signature = self._symbol_table.lookup(node.function.name)
        assert signature is not None
        bound = signature.bind(node)
        kwargs: dict[str, Any] = {}
        for parameter in signature.parameters:
            if parameter.name in bound:
                kwargs[parameter.name] = self.visit(bound[parameter.name])
            elif parameter.default is not REQUIRED:
                kwargs[parameter.name] = parameter.default
        f = self._guarded(node, CONSTRUCTORS[signature.name], **kwargs)
        logger.debug("built %s", f.label)
        return f  # type: ignore[no-any-return]


def build_density(source: str, file_path: Optional[str] = None) -> SpectralDensity:
    """Parse, check and build a density expression.

    Raises:
        ExpressionError: Syntax (E0xx), semantic (E1xx) or construction (E2xx) errors.
    """
    expression = Parser().parse(source, file_path=file_path)
    SemanticAnalyzer(source, file_path).analyze(expression)
    return DensityBuilder(source, file_path).build(expression)
