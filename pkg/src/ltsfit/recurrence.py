"""Recurrence matrix and initial vector of a product automaton.

For a product with ``N`` states, ``beta[n][q]`` counts the ``n``-step paths
ending in ``q`` and ``alpha[n][q]`` counts the accepting-state visits along
them.  Stacking ``(alpha_total, alpha, beta)`` gives a linear recurrence of
dimension ``2N + 1`` whose first coordinate after ``n + 1`` steps is the
total visit count over all ``n``-step paths.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import ProductAutomaton

Matrix = list[list[int]]


def zeros(n: int, m: int | None = None) -> Matrix:
    return [[0] * (n if m is None else m) for _ in range(n)]


def predecessor_matrix(p: ProductAutomaton) -> Matrix:
    """``D[i][j]`` is the number of transitions from state ``j`` to state ``i``."""
    d = zeros(len(p))
    for src, _, dst in p.transitions:
        d[dst][src] += 1
    return d


def accepting_matrix(p: ProductAutomaton, d: Matrix) -> Matrix:
    return [list(row) if i in p.accepting else [0] * len(row) for i, row in enumerate(d)]


def recurrence_matrix(d: Matrix, a: Matrix) -> Matrix:
    n = len(d)
    if len(a) != n or any(len(r) != n for r in d) or any(len(r) != n for r in a):
        raise ValueError("D and A must be square matrices of the same dimension")
    xi = zeros(2 * n + 1)
    for j in range(n):
        xi[0][1 + j] = 1
    for i in range(n):
        for j in range(n):
            xi[1 + i][1 + j] = d[i][j]
            xi[1 + i][1 + n + j] = a[i][j]
            xi[1 + n + i][1 + n + j] = d[i][j]
    return xi


def initial_vector(p: ProductAutomaton) -> list[int]:
    n = len(p)
    alpha0 = [1 if (i in p.initial and i in p.accepting) else 0 for i in range(n)]
    beta0 = [1 if i in p.initial else 0 for i in range(n)]
    return [0] + alpha0 + beta0


@dataclass(frozen=True)
class RecurrenceSystem:
    xi: Matrix
    v: list[int]
    state_index: dict[str, int]
    d: Matrix
    a: Matrix

    @property
    def dim(self) -> int:
        return len(self.v)

    @property
    def n_states(self) -> int:
        return (len(self.v) - 1) // 2


def recurrence_system(p: ProductAutomaton) -> RecurrenceSystem:
    d = predecessor_matrix(p)
    a = accepting_matrix(p, d)
    legend = {name: i + 1 for i, name in enumerate(p.names())}
    return RecurrenceSystem(recurrence_matrix(d, a), initial_vector(p), legend, d, a)


def format_matrix(m: Matrix) -> str:
    if not m:
        return ""
    width = max(len(str(x)) for row in m for x in row)
    return "\n".join(" ".join(str(x).rjust(width) for x in row) for row in m)


def dump(sys: RecurrenceSystem, accepting=(), initial=()) -> str:
    """Human-readable legend, D, A, xi and v, one integer row per line."""
    lines = ["states:"]
    for name, i in sys.state_index.items():
        marks = ("i" if i - 1 in initial else "") + ("*" if i - 1 in accepting else "")
        lines.append(f"  {i}: {name}" + (f" [{marks}]" if marks else ""))
    lines += ["D:", format_matrix(sys.d), "A:", format_matrix(sys.a)]
    lines += ["xi:", format_matrix(sys.xi), "v:", " ".join(map(str, sys.v))]
    return "\n".join(lines)
