"""Parser for small polynomial expressions such as ``"x1*x3/4"``.

Grammar: ``+``, ``-``, ``*``, division by a nonzero rational constant,
non-negative integer powers (``^`` or ``**``), integer or rational
literals and the variables ``x1`` .. ``xN``.  Anything else is rejected.
"""

from __future__ import annotations

import ast
import re
from fractions import Fraction

from .jets import Jet


class PolynomialSyntaxError(ValueError):
    pass


_VAR = re.compile(r"x([1-9][0-9]*)\Z")


def parse_polynomial(text: str, nvars: int = 4, order: int = 4) -> Jet:
    src = text.replace("^", "**").replace("−", "-").replace("·", "*")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise PolynomialSyntaxError(f"cannot parse {text!r}: {exc.msg}") from None
    return _eval(tree.body, nvars, order, text)


def _eval(node, n: int, order: int, text: str) -> Jet:
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return Jet.constant(n, order, node.value)
    if isinstance(node, ast.Name):
        m = _VAR.match(node.id)
        if not m or int(m.group(1)) > n:
            raise PolynomialSyntaxError(f"unknown variable {node.id!r} (allowed: x1..x{n})")
        return Jet.variable(n, order, int(m.group(1)) - 1)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval(node.operand, n, order, text)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        left = _eval(node.left, n, order, text)
        if isinstance(node.op, ast.Pow):
            k = _constant(node.right, n, order, text)
            if k.denominator != 1 or k < 0:
                raise PolynomialSyntaxError("exponents must be non-negative integers")
            return left ** int(k)
        right = _eval(node.right, n, order, text)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            c = _constant(node.right, n, order, text)
            if c == 0:
                raise PolynomialSyntaxError("division by zero")
            return left / c
    raise PolynomialSyntaxError(f"unsupported syntax in {text!r}")


def _constant(node, n, order, text) -> Fraction:
    v = _eval(node, n, order, text)
    if any(sum(e) for e in v.coeffs):
        raise PolynomialSyntaxError("only constants may appear as divisors or exponents")
    return Fraction(v.constant_term())
