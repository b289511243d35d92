"""Scalar arithmetic aggregates ``h(x1, ..., xd)`` evaluated over exact rationals."""

from __future__ import annotations

import ast
import operator
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

_VAR = re.compile(r"x([1-9][0-9]*)\Z")
_OPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
}


class AggregateError(ValueError):
    pass


class _Undefined(Exception):
    pass


def _check(node: ast.AST, arity: int) -> None:
    if isinstance(node, ast.BinOp):
        if type(node.op) not in _OPS:
            raise AggregateError(f"unsupported operator {type(node.op).__name__}")
        _check(node.left, arity)
        _check(node.right, arity)
    elif isinstance(node, ast.Name):
        m = _VAR.match(node.id)
        if not m:
            raise AggregateError(f"unknown variable {node.id}")
        if int(m.group(1)) > arity:
            raise AggregateError(f"unknown variable {node.id}")
    elif isinstance(node, ast.Constant):
        if type(node.value) is not int or node.value < 0:
            raise AggregateError(f"only non-negative integer literals are allowed, got {node.value!r}")
    else:
        raise AggregateError(f"unsupported syntax: {ast.unparse(node)}")


def _eval(node: ast.AST, env: Sequence[Fraction]) -> Fraction:
    if isinstance(node, ast.BinOp):
        left = _eval(node.left, env)
        right = _eval(node.right, env)
        if isinstance(node.op, ast.Div) and right == 0:
            raise _Undefined
        return _OPS[type(node.op)](left, right)
    if isinstance(node, ast.Name):
        return env[int(node.id[1:]) - 1]
    return Fraction(node.value)


@dataclass(frozen=True)
class AggregateExpr:
    """Parsed ``h``: ``d`` inputs ``x1..xd`` and ``d'`` output expressions."""

    arity: int
    sources: tuple[str, ...]
    _trees: tuple[ast.AST, ...]

    @classmethod
    def parse(cls, text: str, arity: int) -> "AggregateExpr":
        if arity < 1:
            raise AggregateError("aggregate arity must be at least 1")
        try:
            tree = ast.parse(text.strip(), mode="eval").body
        except SyntaxError as exc:
            raise AggregateError(f"cannot parse aggregate {text!r}: {exc.msg}") from None
        parts = tree.elts if isinstance(tree, ast.Tuple) else [tree]
        if not parts:
            raise AggregateError("aggregate has no expressions")
        for p in parts:
            _check(p, arity)
        return cls(arity, tuple(ast.unparse(p) for p in parts), tuple(parts))

    @property
    def out_arity(self) -> int:
        return len(self._trees)

    def evaluate(self, inputs: Sequence[int | Fraction]) -> list[Fraction | None]:
        """Exact value per output; ``None`` marks a component hit by division by zero."""
        if len(inputs) != self.arity:
            raise AggregateError(f"expected {self.arity} inputs, got {len(inputs)}")
        env = [Fraction(x) for x in inputs]
        out: list[Fraction | None] = []
        for t in self._trees:
            try:
                out.append(_eval(t, env))
            except _Undefined:
                out.append(None)
        return out

    def __str__(self) -> str:
        if len(self.sources) == 1:
            return self.sources[0]
        return "(" + ", ".join(self.sources) + ")"


def evaluate_aggregate(h: AggregateExpr, inputs: Sequence[int]) -> list[Fraction | None]:
    return h.evaluate(inputs)
