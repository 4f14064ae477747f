"""Canonical pretty-printer.

format_program is the inverse of parse up to positions: parsing the output
of format_program yields a structurally equal AST. Parentheses are emitted
only where precedence or associativity requires them.
"""

from __future__ import annotations

from .nodes import (
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

_INDENT = "  "

_EXPR_ATOM = 4
_EXPR_NEG = 3
_EXPR_PREC = {"*": 2, "/": 2, "+": 1, "-": 1}

_COND_ATOM = 4
_COND_NOT = 3
_COND_PREC = {"and": 2, "or": 1}


def _format_number(value: float) -> str:
    s = repr(value)
    if "e" in s or "E" in s:
        # repr switches to scientific notation outside ~[1e-4, 1e16); the
        # language has no exponent literals, so expand to fixed point with
        # however many digits it takes to parse back to the same float
        # (tiny magnitudes need far more than 17 fractional digits).
        for precision in range(17, 1080, 8):
            s = f"{value:.{precision}f}"
            if float(s) == value:
                break
        s = s.rstrip("0").rstrip(".")
        if s in ("", "-"):
            s = s + "0"
    return s


def _expr_prec(node: Expr) -> int:
    if isinstance(node, BinOp):
        return _EXPR_PREC[node.op]
    if isinstance(node, Neg):
        return _EXPR_NEG
    return _EXPR_ATOM


def format_expr(node: Expr) -> str:
    if isinstance(node, Number):
        return _format_number(node.value)
    if isinstance(node, Ref):
        return node.name
    if isinstance(node, MemRef):
        return f"mem.{node.name}"
    if isinstance(node, Neg):
        inner = format_expr(node.operand)
        if _expr_prec(node.operand) < _EXPR_NEG:
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(node, BinOp):
        prec = _EXPR_PREC[node.op]
        left = format_expr(node.left)
        if _expr_prec(node.left) < prec:
            left = f"({left})"
        right = format_expr(node.right)
        # Same-precedence right children need parens to survive
        # left-associative reparsing: a - (b - c).
        if _expr_prec(node.right) <= prec:
            right = f"({right})"
        return f"{left} {node.op} {right}"
    raise TypeError(f"not an expression node: {node!r}")


def _cond_prec(node: Cond) -> int:
    if isinstance(node, BoolOp):
        return _COND_PREC[node.op]
    if isinstance(node, Not):
        return _COND_NOT
    return _COND_ATOM


def format_cond(node: Cond) -> str:
    if isinstance(node, MotionCond):
        return "motion"
    if isinstance(node, Comparison):
        return f"{format_expr(node.left)} {node.op} {format_expr(node.right)}"
    if isinstance(node, Not):
        inner = format_cond(node.operand)
        if _cond_prec(node.operand) < _COND_ATOM:
            # The grammar allows "not" only before an atom.
            inner = f"({inner})"
        return f"not {inner}"
    if isinstance(node, BoolOp):
        prec = _COND_PREC[node.op]
        left = format_cond(node.left)
        if _cond_prec(node.left) < prec:
            left = f"({left})"
        right = format_cond(node.right)
        if _cond_prec(node.right) <= prec:
            right = f"({right})"
        return f"{left} {node.op} {right}"
    raise TypeError(f"not a condition node: {node!r}")


def _format_statement(node: Statement, depth: int, out: list[str]) -> None:
    pad = _INDENT * depth
    if isinstance(node, Assignment):
        out.append(f"{pad}{node.target} = {format_expr(node.value)}")
        return
    if isinstance(node, If):
        out.append(f"{pad}if {format_cond(node.condition)} then")
        for stmt in node.then_body:
            _format_statement(stmt, depth + 1, out)
        if node.else_body:
            out.append(f"{pad}else")
            for stmt in node.else_body:
                _format_statement(stmt, depth + 1, out)
        out.append(f"{pad}end")
        return
    raise TypeError(f"not a statement node: {node!r}")


def format_program(program: Program) -> str:
    """Render a program as canonical source text (no trailing newline)."""
    out: list[str] = []
    for stmt in program.statements:
        _format_statement(stmt, 0, out)
    return "\n".join(out)
