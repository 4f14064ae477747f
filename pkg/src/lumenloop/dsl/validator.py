"""Static checks over parsed programs.

validate() returns diagnostics instead of raising so callers (the repair
loop, the CLI) can report every problem at once. validate_strict() raises
ValidationError on the first error-severity diagnostic.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ValidationError
from .formatter import format_program
from .nodes import (
    ACTUATOR_NAMES,
    READ_ONLY_NAMES,
    SENSOR_NAMES,
    Assignment,
    BinOp,
    BoolOp,
    Comparison,
    Cond,
    Expr,
    If,
    MemRef,
    MotionCond,
    Neg,
    Not,
    Number,
    Program,
    Ref,
    Statement,
)
from .tokens import tokenize

MAX_EXPR_DEPTH = 64
MAX_PROGRAM_TOKENS = 10_000

_SENSOR_SET = frozenset(SENSOR_NAMES)
_ACTUATOR_SET = frozenset(ACTUATOR_NAMES)


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    message: str
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.severity}: {self.message}"


def _expr_depth(node: Expr) -> int:
    if isinstance(node, Neg):
        return 1 + _expr_depth(node.operand)
    if isinstance(node, BinOp):
        return 1 + max(_expr_depth(node.left), _expr_depth(node.right))
    return 1


def _literal_value(node: Expr) -> float | None:
    if isinstance(node, Number):
        return node.value
    if isinstance(node, Neg) and isinstance(node.operand, Number):
        return -node.operand.value
    return None


class _Checker:
    def __init__(self) -> None:
        self.diagnostics: list[Diagnostic] = []

    def report(self, severity: str, message: str, node) -> None:
        self.diagnostics.append(
            Diagnostic(severity, message, node.pos.line, node.pos.column)
        )

    def check_root_expr(self, node: Expr) -> None:
        self.check_expr(node)
        if _expr_depth(node) > MAX_EXPR_DEPTH:
            self.report(
                "error",
                f"expression nesting exceeds {MAX_EXPR_DEPTH} levels",
                node,
            )

    def check_expr(self, node: Expr) -> None:
        if isinstance(node, Ref):
            if node.name not in _SENSOR_SET:
                self.report("error", f"unknown identifier '{node.name}'", node)
        elif isinstance(node, Neg):
            self.check_expr(node.operand)
        elif isinstance(node, BinOp):
            self.check_expr(node.left)
            self.check_expr(node.right)
            if node.op == "/" and _literal_value(node.right) == 0:
                self.report(
                    "warning", "division by the constant 0 always yields 0", node
                )

    def check_cond(self, node: Cond) -> None:
        if isinstance(node, Comparison):
            self.check_root_expr(node.left)
            self.check_root_expr(node.right)
        elif isinstance(node, BoolOp):
            self.check_cond(node.left)
            self.check_cond(node.right)
        elif isinstance(node, Not):
            self.check_cond(node.operand)
        # MotionCond needs no checks.

    def check_statement(self, node: Statement) -> None:
        if isinstance(node, Assignment):
            target = node.target
            if target.startswith("mem."):
                pass
            elif target in READ_ONLY_NAMES:
                self.report("error", f"cannot assign to sensor '{target}'", node)
            elif target not in _ACTUATOR_SET:
                self.report("error", f"unknown identifier '{target}'", node)
            else:
                literal = _literal_value(node.value)
                if literal is not None and not 0.0 <= literal <= 1.0:
                    self.report(
                        "warning",
                        f"constant {literal:g} assigned to '{target}' "
                        "will be clamped to [0, 1]",
                        node,
                    )
            self.check_root_expr(node.value)
        elif isinstance(node, If):
            self.check_cond(node.condition)
            for stmt in node.then_body:
                self.check_statement(stmt)
            for stmt in node.else_body or ():
                self.check_statement(stmt)


def validate(program: Program) -> list[Diagnostic]:
    """Return all diagnostics for a program, errors and warnings mixed,
    in source order."""
    checker = _Checker()
    for stmt in program.statements:
        checker.check_statement(stmt)
    # Size limit is measured over the canonical rendering so it cannot be
    # gamed with comments or whitespace.
    token_count = len(tokenize(format_program(program)))
    if token_count > MAX_PROGRAM_TOKENS:
        checker.diagnostics.append(
            Diagnostic(
                "error",
                f"program has {token_count} tokens "
                f"(limit {MAX_PROGRAM_TOKENS})",
                1,
                1,
            )
        )
    checker.diagnostics.sort(key=lambda d: (d.line, d.column))
    return checker.diagnostics


def errors_only(diagnostics: list[Diagnostic]) -> list[Diagnostic]:
    return [d for d in diagnostics if d.severity == "error"]


def validate_strict(program: Program) -> Program:
    """Raise ValidationError on the first error diagnostic; warnings pass."""
    problems = errors_only(validate(program))
    if problems:
        first = problems[0]
        raise ValidationError(str(first))
    return program
