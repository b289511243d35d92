"""K-approximations of fitness scores from recurrence matrix powers.

Two backends compute ``(xi^K v)_0`` for each fitness component:

* ``exact`` works over Python integers and never rounds.  Small systems use
  exponentiation by squaring; larger ones step ``u <- xi u`` with the sparse
  structure of ``xi``, which gives the same integers with far fewer
  big-number products.
* ``scaled`` steps in float64 and renormalizes by a power of two after every
  step, keeping the binary exponent on the side.  It trades exactness for
  speed on products with hundreds of states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .aggregate import AggregateExpr
from .model import FitnessTuple, Lts, ModelError, build_product
from .recurrence import Matrix, RecurrenceSystem, recurrence_system

BACKENDS = ("exact", "scaled")
SQUARING_MAX_DIM = 32
CONVERGED_DIGITS = 3
DEFAULT_K = 9000
DEFAULT_CHECK_K = 8192
_DIGIT_LIMIT = 50


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    width = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [0] * width
        for k, x in enumerate(row):
            if not x:
                continue
            bk = b[k]
            if x == 1:
                acc = [s + y for s, y in zip(acc, bk)]
            else:
                acc = [s + x * y for s, y in zip(acc, bk)]
        out.append(acc)
    return out


def mat_vec(m: Matrix, v: Sequence[int]) -> list[int]:
    return [sum(x * y for x, y in zip(row, v) if x) for row in m]


def mat_pow(m: Matrix, e: int) -> Matrix:
    """Exact ``m**e`` by repeated squaring over the bits of ``e``."""
    if e < 0:
        raise ValueError("negative exponent")
    if any(len(row) != len(m) for row in m):
        raise ValueError("mat_pow needs a square matrix")
    result = None
    base = m
    while e:
        if e & 1:
            result = base if result is None else mat_mul(result, base)
        e >>= 1
        if e:
            base = mat_mul(base, base)
    return identity(len(m)) if result is None else result


def _sparse_rows(m: Matrix) -> list[list[tuple[int, int]]]:
    return [[(j, x) for j, x in enumerate(row) if x] for row in m]


def _exact_power_values(sys: RecurrenceSystem, ks: Sequence[int]) -> dict[int, int]:
    """``(xi^k v)_0`` for every ``k`` in ``ks``, sharing work across checkpoints."""
    wanted = sorted(set(ks))
    out: dict[int, int] = {}
    u = list(sys.v)
    done = 0
    if sys.dim <= SQUARING_MAX_DIM:
        for k in wanted:
            if k > done:
                u = mat_vec(mat_pow(sys.xi, k - done), u)
                done = k
            out[k] = u[0]
        return out
    rows = _sparse_rows(sys.xi)
    for k in wanted:
        while done < k:
            u = [sum(x * u[j] for j, x in r) for r in rows]
            done += 1
        out[k] = u[0]
    return out


def _scaled_power_values(sys: RecurrenceSystem, ks: Sequence[int]) -> dict[int, Fraction]:
    wanted = set(ks)
    xi = np.array(sys.xi, dtype=np.float64)
    u = np.array(sys.v, dtype=np.float64)
    exponent = 0
    out: dict[int, Fraction] = {}
    if 0 in wanted:
        out[0] = Fraction(int(sys.v[0]))
    for step in range(1, max(wanted) + 1):
        u = xi @ u
        top = float(u.max())
        if top > 0.0:
            shift = math.frexp(top)[1]
            u = np.ldexp(u, -shift)
            exponent += shift
        if step in wanted:
            out[step] = Fraction(float(u[0])) * Fraction(2) ** exponent
    return out


def power_values(sys: RecurrenceSystem, ks: Sequence[int], backend: str = "exact") -> dict:
    if backend == "exact":
        return _exact_power_values(sys, ks)
    if backend == "scaled":
        return _scaled_power_values(sys, ks)
    raise ValueError(f"unknown backend {backend!r}")


def g_value(sys: RecurrenceSystem, n: int) -> int:
    """Total accepting-state visits over all ``n``-step paths: ``(xi^(n+1) v)_0``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return _exact_power_values(sys, [n + 1])[n + 1]


def shifted_ratio_score(sys: RecurrenceSystem, k: int) -> Fraction | None:
    """``g(k) / g(k+1)``; ``None`` when the denominator vanishes."""
    vals = _exact_power_values(sys, [k + 1, k + 2])
    if vals[k + 2] == 0:
        return None
    return Fraction(vals[k + 1], vals[k + 2])


# --- scores -----------------------------------------------------------------


class Status(Enum):
    CONVERGED = "converged"
    UNSTABLE = "unstable"
    UNDEFINED = "undefined"


class Verdict(Enum):
    PREFERRED_A = "Preferred(A)"
    PREFERRED_B = "Preferred(B)"
    EQUAL = "Equal"
    INCOMPARABLE = "Incomparable"


COMPARATORS = ("geq", "leq", "lex")


@dataclass(frozen=True)
class Score:
    """A K-approximation: one exact rational per aggregate output.

    ``components`` holds ``None`` where the aggregate divided by zero; the
    whole score is then ``UNDEFINED`` and ``values`` is ``None``.  ``digits``
    is the number of agreed leading decimals when a second checkpoint was
    compared, else ``None``.
    """

    components: tuple[Fraction | None, ...]
    status: Status = Status.CONVERGED
    digits: int | None = None

    @property
    def values(self) -> tuple[Fraction, ...] | None:
        if any(c is None for c in self.components):
            return None
        return self.components  # type: ignore[return-value]

    @property
    def undefined(self) -> tuple[int, ...]:
        return tuple(i + 1 for i, c in enumerate(self.components) if c is None)

    def render(self, places: int = 6) -> list[str]:
        return ["undefined" if c is None else format_decimal(c, places) for c in self.components]


def make_score(components: Iterable[Fraction | None]) -> Score:
    comps = tuple(components)
    status = Status.UNDEFINED if any(c is None for c in comps) else Status.CONVERGED
    return Score(comps, status)


def format_decimal(x: Fraction, places: int) -> str:
    """Round-half-even decimal rendering of an exact rational."""
    scaled = round(Fraction(x) * 10**places)
    sign = "-" if scaled < 0 else ""
    scaled = abs(scaled)
    if places == 0:
        return f"{sign}{scaled}"
    whole, frac = divmod(scaled, 10**places)
    return f"{sign}{whole}.{frac:0{places}d}"


def agreed_digits(x: Fraction, y: Fraction, limit: int = _DIGIT_LIMIT) -> int:
    """Number of leading decimals after the point on which ``x`` and ``y`` agree."""
    if x == y:
        return limit
    if math.floor(x) != math.floor(y):
        return 0
    scale = 10**limit
    a = str(math.floor(abs(x - math.floor(x)) * scale)).zfill(limit)
    b = str(math.floor(abs(y - math.floor(y)) * scale)).zfill(limit)
    n = 0
    for ca, cb in zip(a, b):
        if ca != cb:
            break
        n += 1
    return n


def agree_significant(a: Fraction, b: Fraction, digits: int = 6) -> bool:
    """True when ``a`` and ``b`` agree to ``digits`` significant digits."""
    if a == b:
        return True
    ref = max(abs(a), abs(b))
    return abs(a - b) <= Fraction(5, 10**digits) * ref


@dataclass(frozen=True)
class ConvergenceReport:
    k1: int
    k2: int
    score1: Score
    score2: Score
    digits: tuple[int, ...] = field(default=())

    @property
    def status(self) -> Status:
        return self.score2.status


def _checked_report(k1: int, s1: Score, k2: int, s2: Score) -> ConvergenceReport:
    if s1.values is None or s2.values is None:
        undefined = tuple(
            None if (a is None or b is None) else b for a, b in zip(s1.components, s2.components)
        )
        return ConvergenceReport(k1, k2, s1, Score(undefined, Status.UNDEFINED), ())
    digits = tuple(agreed_digits(a, b) for a, b in zip(s1.values, s2.values))
    least = min(digits)
    status = Status.CONVERGED if least >= CONVERGED_DIGITS else Status.UNSTABLE
    return ConvergenceReport(k1, k2, s1, Score(s2.components, status, least), digits)


class FitnessEvaluator:
    """Products and recurrence systems of one ``(M, f, h)`` instance, built once."""

    def __init__(self, m: Lts, f: FitnessTuple, h: AggregateExpr, backend: str = "exact"):
        if m.alphabet != f.alphabet:
            raise ModelError("model and fitness function use different alphabets")
        if h.arity != len(f):
            raise ModelError(f"aggregate expects {h.arity} inputs but the fitness tuple has {len(f)}")
        if backend not in BACKENDS:
            raise ValueError(f"unknown backend {backend!r}")
        self.model = m
        self.fitness = f
        self.aggregate = h
        self.backend = backend
        self.products = [build_product(m, c) for c in f]
        self.systems = [recurrence_system(p) for p in self.products]

    def component_values(self, ks: Sequence[int]) -> dict[int, list]:
        """``(xi_i^K v_i)_0`` per component, keyed by ``K``."""
        for k in ks:
            if k < 1:
                raise ValueError("K must be at least 1")
        per_comp = [power_values(s, ks, self.backend) for s in self.systems]
        return {k: [vals[k] for vals in per_comp] for k in ks}

    def scores(self, ks: Sequence[int]) -> dict[int, Score]:
        values = self.component_values(ks)
        return {k: make_score(self.aggregate.evaluate(values[k])) for k in ks}

    def score(self, k: int) -> Score:
        return self.scores([k])[k]

    def report(self, k1: int, k2: int) -> ConvergenceReport:
        if not k1 < k2:
            raise ValueError("checkpoints must satisfy k1 < k2")
        s = self.scores([k1, k2])
        return _checked_report(k1, s[k1], k2, s[k2])

    def series(self, ks: Sequence[int]) -> list[tuple[int, Score]]:
        ks = list(ks)
        if not ks:
            raise ValueError("empty K list")
        if ks != sorted(ks):
            raise ValueError("K values must be ascending")
        s = self.scores(ks)
        return [(k, s[k]) for k in ks]


def k_approximation(m: Lts, f: FitnessTuple, h: AggregateExpr, k: int, backend: str = "exact") -> Score:
    """``h`` applied to ``(xi_i^K v_i)_0`` for every fitness component."""
    return FitnessEvaluator(m, f, h, backend).score(k)


def convergence_report(
    m: Lts, f: FitnessTuple, h: AggregateExpr, k1: int, k2: int, backend: str = "exact"
) -> ConvergenceReport:
    return FitnessEvaluator(m, f, h, backend).report(k1, k2)


def series(
    m: Lts, f: FitnessTuple, h: AggregateExpr, ks: Sequence[int], backend: str = "exact"
) -> list[tuple[int, Score]]:
    return FitnessEvaluator(m, f, h, backend).series(ks)


def _prefers(a: Sequence[Fraction], b: Sequence[Fraction], comparator: str) -> bool:
    """``a`` is at least as good as ``b`` under ``comparator``."""
    if comparator == "geq":
        return all(x >= y for x, y in zip(a, b))
    if comparator == "leq":
        return all(x <= y for x, y in zip(a, b))
    for x, y in zip(a, b):
        if x != y:
            return x > y
    return True


def compare_scores(a: Score, b: Score, comparator: str = "geq") -> Verdict:
    if comparator not in COMPARATORS:
        raise ValueError(f"unknown comparator {comparator!r}")
    if len(a.components) != len(b.components):
        raise ValueError("scores have different arity")
    if a.values is None or b.values is None:
        return Verdict.INCOMPARABLE
    if Status.UNSTABLE in (a.status, b.status):
        return Verdict.INCOMPARABLE
    ab = _prefers(a.values, b.values, comparator)
    ba = _prefers(b.values, a.values, comparator)
    if ab and ba:
        return Verdict.EQUAL
    if ab:
        return Verdict.PREFERRED_A
    if ba:
        return Verdict.PREFERRED_B
    return Verdict.INCOMPARABLE
