"""Tiny arithmetic grammar for curvature profiles such as ``-1/(1+r^2)^2``.

Accepted: numbers, the variable ``r``, constants ``pi`` and ``e``, the
operators ``+ - * / ^`` (``**`` also works), parentheses and the functions
``exp sinh cosh sqrt``.  Anything else is rejected before evaluation.
"""

from __future__ import annotations

import ast
import csv
from pathlib import Path

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import ConfigurationError

_FUNCS = {"exp": np.exp, "sinh": np.sinh, "cosh": np.cosh, "sqrt": np.sqrt}
_CONSTS = {"pi": np.pi, "e": np.e}
_BINOPS = {
    ast.Add: np.add,
    ast.Sub: np.subtract,
    ast.Mult: np.multiply,
    ast.Div: np.divide,
    ast.Pow: np.power,
}


def _compile(node):
    if isinstance(node, ast.Expression):
        return _compile(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        value = float(node.value)
        return lambda r: value
    if isinstance(node, ast.Name):
        if node.id == "r":
            return lambda r: r
        if node.id in _CONSTS:
            value = _CONSTS[node.id]
            return lambda r: value
        raise ConfigurationError(f"unknown name {node.id!r} in curvature expression")
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        inner = _compile(node.operand)
        if isinstance(node.op, ast.USub):
            return lambda r: -inner(r)
        return inner
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        op = _BINOPS[type(node.op)]
        left, right = _compile(node.left), _compile(node.right)
        return lambda r: op(left(r), right(r))
    if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
            and node.func.id in _FUNCS and len(node.args) == 1 and not node.keywords):
        fn, arg = _FUNCS[node.func.id], _compile(node.args[0])
        return lambda r: fn(arg(r))
    raise ConfigurationError(f"unsupported syntax in curvature expression: {ast.dump(node)}")


def parse_expression(text: str):
    """Compile ``text`` into a vectorised callable of ``r``."""
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ConfigurationError(f"cannot parse curvature expression {text!r}: {exc.msg}") from exc
    fn = _compile(tree)

    def curvature(r):
        out = fn(np.asarray(r, dtype=float))
        return np.broadcast_to(out, np.shape(r)).astype(float) if np.ndim(r) else float(out)

    curvature.source = text
    return curvature


def load_table(path) -> CubicSpline:
    """Read a CSV with columns ``r,K`` into a cubic spline."""
    rows = []
    with Path(path).open(newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"r", "K"} <= set(reader.fieldnames):
            raise ConfigurationError(f"{path}: curvature table needs columns r,K")
        for lineno, row in enumerate(reader, start=2):
            try:
                rows.append((float(row["r"]), float(row["K"])))
            except (TypeError, ValueError) as exc:
                raise ConfigurationError(f"{path}:{lineno}: not a number") from exc
    if len(rows) < 4:
        raise ConfigurationError(f"{path}: curvature table needs at least 4 rows")
    data = np.array(sorted(rows))
    if np.any(np.diff(data[:, 0]) <= 0):
        raise ConfigurationError(f"{path}: duplicate radii in curvature table")
    return CubicSpline(data[:, 0], data[:, 1])
