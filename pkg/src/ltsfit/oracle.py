"""Brute-force reference semantics.

Everything here works from paths and words directly and never touches
recurrence matrices, so it can serve as ground truth for them.  Costs grow
exponentially with the depth, hence the depth cap.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from typing import Callable, Hashable, Mapping

from .model import Dfa, FitnessTuple, Lts, ProductAutomaton

DEPTH_CAP = 14

Word = tuple[str, ...]
TraceMultiset = Counter  # Word -> multiplicity
FitnessImage = Counter  # tuple[int, ...] -> multiplicity


class DepthCapExceeded(ValueError):
    pass


def _check_depth(n: int, cap: int) -> None:
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > cap:
        raise DepthCapExceeded(f"depth {n} exceeds the enumeration cap {cap}")


def unfold_paths(m: Lts, n: int, cap: int = DEPTH_CAP) -> TraceMultiset:
    """The multiset ``M_n``: every length-``n`` word weighted by its number of paths."""
    _check_depth(n, cap)
    frontier: Counter = Counter({((), q): 1 for q in m.initial})
    for _ in range(n):
        nxt: Counter = Counter()
        for (word, q), c in frontier.items():
            for a, q2 in m.successors(q):
                nxt[(word + (a,), q2)] += c
        frontier = nxt
    traces: TraceMultiset = Counter()
    for (word, _), c in frontier.items():
        traces[word] += c
    return traces


def apply_fitness(f: FitnessTuple | Dfa, word: Word) -> tuple[int, ...]:
    if isinstance(f, Dfa):
        f = FitnessTuple((f,))
    for a in word:
        if a not in f.alphabet:
            raise ValueError(f"symbol {a!r} is not in the alphabet")
    return f(word)


def image(fn: Callable[[Hashable], Hashable], xs: Mapping) -> Counter:
    """Push a multiset forward through ``fn``; colliding multiplicities add."""
    out: Counter = Counter()
    for x, c in xs.items():
        if c:
            out[fn(x)] += c
    return out


def image_fitness(f: FitnessTuple | Dfa, traces: Mapping) -> FitnessImage:
    return image(lambda w: apply_fitness(f, w), traces)


def cardinality(xs: Mapping) -> int:
    return sum(xs.values())


def xsum(x: Mapping, i: int) -> int:
    """Multiplicity-weighted sum of the ``i``-th (1-based) component."""
    total = 0
    for vec, c in x.items():
        if not 1 <= i <= len(vec):
            raise IndexError(f"component {i} out of range for {vec!r}")
        total += c * vec[i - 1]
    return total


def _rate_pairs(x: Mapping) -> list[tuple[tuple[int, int], int]]:
    pairs = [(v, c) for v, c in x.items() if c]
    if not pairs:
        raise ValueError("empty multiset")
    for (p, q), _ in pairs:
        if q == 0:
            raise ZeroDivisionError("rate with zero denominator")
    return pairs


def avgrate_direct(x: Mapping) -> Fraction:
    pairs = _rate_pairs(x)
    total = sum(c * Fraction(p, q) for (p, q), c in pairs)
    return total / sum(c for _, c in pairs)


def maxrate_direct(x: Mapping) -> Fraction:
    return max(Fraction(p, q) for (p, q), _ in _rate_pairs(x))


def minrate_direct(x: Mapping) -> Fraction:
    return min(Fraction(p, q) for (p, q), _ in _rate_pairs(x))


def psi_rate_check(x: Mapping) -> bool:
    """All second components equal."""
    return len({v[1] for v, c in x.items() if c}) <= 1


def alpha_beta_bruteforce(p: ProductAutomaton, n: int, cap: int = DEPTH_CAP):
    """Walk every ``n``-step path of ``p`` from its initial states.

    Returns ``(alpha_total, alpha, beta)`` where ``beta[q]`` counts the paths
    ending in ``q`` and ``alpha[q]`` the accepting visits along them (an
    initial accepting state counts as a visit).  Paths that share their
    current state and visit count are carried as one weighted entry, which
    keeps the walk cheap when the number of paths is large.
    """
    _check_depth(n, cap)
    size = len(p)
    succ: list[list[int]] = [[] for _ in range(size)]
    for src, _, dst in p.transitions:
        succ[src].append(dst)
    frontier: Counter = Counter()
    for q in p.initial:
        frontier[(q, 1 if q in p.accepting else 0)] += 1
    for _ in range(n):
        nxt: Counter = Counter()
        for (q, visits), c in frontier.items():
            for r in succ[q]:
                nxt[(r, visits + (r in p.accepting))] += c
        frontier = nxt
    alpha = [0] * size
    beta = [0] * size
    for (q, visits), c in frontier.items():
        beta[q] += c
        alpha[q] += c * visits
    return sum(alpha), alpha, beta


def fitness_image(m: Lts, f: FitnessTuple, n: int) -> FitnessImage:
    """``img_f(M_n)`` by running every DFA alongside the LTS while unfolding.

    Paths that reach the same LTS state with the same DFA states are merged
    (keeping a histogram of their fitness vectors), which keeps the cost
    polynomial in ``n`` without building any product automaton.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    comps = f.components
    start = tuple(c.initial for c in comps)
    zero = tuple(1 if c.initial in c.accepting else 0 for c in comps)
    frontier: dict = {}
    for q in m.initial:
        frontier.setdefault((q, start), Counter())[zero] += 1
    for _ in range(n):
        nxt: dict = {}
        for (q, states), hist in frontier.items():
            for a, q2 in m.successors(q):
                s2 = tuple(c.step(s, a) for c, s in zip(comps, states))
                bump = tuple(1 if s in c.accepting else 0 for c, s in zip(comps, s2))
                bucket = nxt.setdefault((q2, s2), Counter())
                for vec, cnt in hist.items():
                    bucket[tuple(x + b for x, b in zip(vec, bump))] += cnt
        frontier = nxt
    out: FitnessImage = Counter()
    for hist in frontier.values():
        out.update(hist)
    return out
