"""Tiny arithmetic parser for angle expressions like "pi/2" or "-3*pi/4".

Accepted grammar: numbers, the name ``pi``, unary +/-, and the binary
operators + - * /. Nothing else — in particular no function calls, so the
parser is safe on untrusted command lines and config files.
"""

from __future__ import annotations

import ast

from .errors import ConfigError

PI = 3.141592653589793


def parse_angle(text: str) -> float:
    """Evaluate an angle expression in radians."""
    if not isinstance(text, str):
        return float(text)
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError:
        raise ConfigError(f"cannot parse angle expression {text!r}") from None
    return _eval(tree.body, text)


def _eval(node: ast.AST, src: str) -> float:
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return float(node.value)
    if isinstance(node, ast.Name):
        if node.id == "pi":
            return PI
        raise ConfigError(f"unknown name {node.id!r} in angle expression {src!r} "
                          f"(only 'pi' is allowed)")
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.UAdd, ast.USub)):
        value = _eval(node.operand, src)
        return value if isinstance(node.op, ast.UAdd) else -value
    if isinstance(node, ast.BinOp) and isinstance(node.op, (ast.Add, ast.Sub, ast.Mult, ast.Div)):
        left = _eval(node.left, src)
        right = _eval(node.right, src)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if right == 0.0:
            raise ConfigError(f"division by zero in angle expression {src!r}")
        return left / right
    raise ConfigError(f"unsupported syntax in angle expression {src!r} "
                      f"(allowed: numbers, pi, + - * /)")
