"""Density-expression parser - transforms source text into an AST."""

from pathlib import Path
from typing import Any, Optional, Union

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken

from specpred.ast.nodes import (
    Argument,
    BinaryOp,
    Call,
    Expression,
    Identifier,
    ListLiteral,
    Number,
    SourceLocation,
    UnaryOp,
)
from specpred.errors import ExpressionError

GRAMMAR_PATH = Path(__file__).parent / "density.lark"


def _make_location(token: Token) -> SourceLocation:
    """Create a SourceLocation from a Lark token."""
    return SourceLocation(
        line=token.line or 1,
        column=token.column or 1,
    )


def _make_location_from_meta(meta: Any) -> SourceLocation:
    """Create a SourceLocation from Lark tree metadata."""
    return SourceLocation(
        line=getattr(meta, "line", 1),
        column=getattr(meta, "column", 1),
        end_line=getattr(meta, "end_line", None),
        end_column=getattr(meta, "end_column", None),
    )


def _identifier(token: Token) -> Identifier:
    return Identifier(source_location=_make_location(token), name=str(token))


@v_args(meta=True)
class DensityTransformer(Transformer[Token, Expression]):
    """Transform a Lark parse tree into expression AST nodes."""

    def number(self, _meta: Any, children: list[Any]) -> Number:
        """Transform a numeric literal."""
        token = children[0]
        return Number(source_location=_make_location(token), value=float(token))

    def name(self, _meta: Any, children: list[Any]) -> Identifier:
        """Transform a bare name."""
        return _identifier(children[0])

    def _binary(self, meta: Any, operator: str, children: list[Any]) -> BinaryOp:
        left, right = children
        return BinaryOp(
            source_location=_make_location_from_meta(meta),
            operator=operator,
            left=left,
            right=right,
        )

    def add(self, meta: Any, children: list[Any]) -> BinaryOp:
        """Transform addition."""
        return self._binary(meta, "+", children)

    def sub(self, meta: Any, children: list[Any]) -> BinaryOp:
        """Transform subtraction."""
        return self._binary(meta, "-", children)

    def mul(self, meta: Any, children: list[Any]) -> BinaryOp:
        """Transform multiplication."""
        return self._binary(meta, "*", children)

    def div(self, meta: Any, children: list[Any]) -> BinaryOp:
        """Transform division."""
        return self._binary(meta, "/", children)

    def pow(self, meta: Any, children: list[Any]) -> BinaryOp:
        """Transform exponentiation."""
        return self._binary(meta, "^", children)

    def neg(self, meta: Any, children: list[Any]) -> UnaryOp:
        """Transform negation."""
        return UnaryOp(
            source_location=_make_location_from_meta(meta),
            operator="-",
            operand=children[0],
        )

    def list_literal(self, meta: Any, children: list[Any]) -> ListLiteral:
        """Transform a bracketed list."""
        return ListLiteral(
            source_location=_make_location_from_meta(meta),
            items=tuple(children),
        )

    def keyword_argument(self, meta: Any, children: list[Any]) -> Argument:
        """Transform ``name = value``."""
        name, value = children
        return Argument(
            source_location=_make_location_from_meta(meta),
            value=value,
            name=_identifier(name),
        )

    def positional_argument(self, meta: Any, children: list[Any]) -> Argument:
        """Transform a positional argument."""
        return Argument(source_location=_make_location_from_meta(meta), value=children[0])

    def arguments(self, _meta: Any, children: list[Any]) -> tuple[Argument, ...]:
        """Collect call arguments."""
        return tuple(children)

    def call(self, meta: Any, children: list[Any]) -> Call:
        """Transform a constructor call."""
        function, *rest = children
        arguments = rest[0] if rest else ()
        return Call(
            source_location=_make_location_from_meta(meta),
            function=_identifier(function),
            arguments=arguments,
        )

    def start(self, _meta: Any, children: list[Any]) -> Expression:
        """Transform the start rule."""
        return children[0]  # type: ignore[no-any-return]


def _describe_expected(expected: set[str]) -> Optional[str]:
    shown = sorted(e for e in expected if not e.startswith("__"))
    if not shown:
        return None
    return "Expected one of: " + ", ".join(shown)


def _syntax_error(exc: UnexpectedInput, source: str, file_path: Optional[str]) -> ExpressionError:
    line = getattr(exc, "line", None) or 1
    column = getattr(exc, "column", None) or 1
    lines = source.splitlines() or [""]
    if isinstance(exc, UnexpectedEOF) or line < 1:
        line = len(lines)
        column = len(lines[-1]) + 1
    source_line = lines[line - 1] if line <= len(lines) else None
    if isinstance(exc, UnexpectedCharacters):
        char = source_line[column - 1] if source_line and column <= len(source_line) else "?"
        return ExpressionError(
            line=line,
            column=column,
            message=f"Unexpected character '{char}'",
            suggestion="Expressions use names, numbers, ( ) [ ] , = + - * / ^ only",
            source_line=source_line,
            file_path=file_path,
            error_code="E001",
        )
    if isinstance(exc, UnexpectedToken) and exc.token.type != "$END":
        message = f"Unexpected '{exc.token}'"
    else:
        message = "Unexpected end of expression"
    return ExpressionError(
        line=line,
        column=column,
        message=message,
        suggestion=_describe_expected(set(getattr(exc, "expected", ()) or ())),
        source_line=source_line,
        file_path=file_path,
        error_code="E002",
    )


class Parser:
    """Density-expression parser.

    Parses expression text into an AST.
    """

    def __init__(self) -> None:
        """Initialize the parser with the expression grammar."""
        grammar_text = GRAMMAR_PATH.read_text()
        self._parser = Lark(
            grammar_text,
            start="start",
            parser="lalr",
            propagate_positions=True,
        )
        self._transformer = DensityTransformer()

    def parse(self, source: str, file_path: Optional[str] = None) -> Expression:
        """Parse a density expression into an AST.

        Args:
            source: The expression text.
            file_path: Where the text came from, for error messages.

        Returns:
            The root expression node.

        Raises:
            ExpressionError: If the text is not a well-formed expression (E001, E002).
        """
        try:
            tree = self._parser.parse(source)
        except UnexpectedInput as exc:
            raise _syntax_error(exc, source, file_path) from exc
        return self._transformer.transform(tree)

    def parse_file(self, path: Union[str, Path]) -> Expression:
        """Parse a file holding one density expression.

        Args:
            path: Path to the expression file.

        Returns:
            The root expression node.

        Raises:
            FileNotFoundError: If the file doesn't exist.
            ExpressionError: If parsing fails.
        """
        source = Path(path).read_text()
        return self.parse(source, file_path=str(path))
