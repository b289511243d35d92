"""Labeled transition systems, fitness DFAs and their compositions."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import product as cartesian
from typing import Iterable, Mapping, Sequence

PLAIN = ""
SEND = "!"
RECEIVE = "?"
_TAGS = (SEND, RECEIVE)

Transition = tuple[str, str, str]


class ModelError(ValueError):
    """Raised when a model violates a structural invariant."""


def split_label(tagged: str) -> tuple[str, str]:
    """Split ``"a!"`` into ``("a", "!")``; plain labels get the empty tag."""
    if tagged and tagged[-1] in _TAGS:
        return tagged[:-1], tagged[-1]
    return tagged, PLAIN


def _unique(items: Iterable[str], what: str) -> tuple[str, ...]:
    out = tuple(items)
    seen = set()
    for x in out:
        if x in seen:
            raise ModelError(f"duplicate {what} {x!r}")
        seen.add(x)
    return out


@dataclass(frozen=True)
class Alphabet:
    labels: tuple[str, ...]

    def __post_init__(self):
        labels = _unique(self.labels, "label")
        if not labels:
            raise ModelError("empty alphabet")
        for a in labels:
            if not isinstance(a, str) or not a:
                raise ModelError(f"invalid label {a!r}")
            if a[-1] in _TAGS:
                raise ModelError(f"label {a!r} carries a reserved '!'/'?' suffix")
        object.__setattr__(self, "labels", labels)

    def __contains__(self, label) -> bool:
        return label in self.labels

    def __iter__(self):
        return iter(self.labels)

    def __len__(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class Lts:
    """A finite LTS ``<alphabet, states, initial, transitions>``.

    ``transitions`` is a relation: the same ``(q, a, q')`` triple may appear
    only once.  Several paths between two states come from distinct labels.
    """

    alphabet: Alphabet
    states: tuple[str, ...]
    initial: tuple[str, ...]
    transitions: tuple[Transition, ...]
    _succ: Mapping[str, tuple[tuple[str, str], ...]] = field(
        init=False, repr=False, compare=False
    )

    def __post_init__(self):
        states = _unique(self.states, "state")
        declared = set(states)
        initial = _unique(self.initial, "initial state")
        for q in initial:
            if q not in declared:
                raise ModelError(f"initial state {q!r} is not declared")
        seen = set()
        succ: dict[str, list[tuple[str, str]]] = {q: [] for q in states}
        for t in self.transitions:
            src, label, dst = t
            if src not in declared:
                raise ModelError(f"transition source {src!r} is not declared")
            if dst not in declared:
                raise ModelError(f"transition target {dst!r} is not declared")
            if label not in self.alphabet:
                raise ModelError(f"label {label!r} is not in the alphabet")
            if t in seen:
                raise ModelError(f"duplicate transition {t!r}")
            seen.add(t)
            succ[src].append((label, dst))
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "initial", initial)
        object.__setattr__(self, "transitions", tuple(tuple(t) for t in self.transitions))
        object.__setattr__(self, "_succ", {q: tuple(v) for q, v in succ.items()})

    def successors(self, state: str) -> tuple[tuple[str, str], ...]:
        """``(label, target)`` pairs leaving ``state`` in declaration order."""
        return self._succ[state]

    def out_degree(self, state: str) -> int:
        return len(self._succ[state])


@dataclass(frozen=True)
class ProcessLts:
    """One process of a distributed system; labels may carry ``!``/``?`` tags."""

    name: str
    alphabet: Alphabet
    states: tuple[str, ...]
    initial: tuple[str, ...]
    transitions: tuple[Transition, ...]

    def __post_init__(self):
        states = _unique(self.states, f"state in process {self.name}")
        declared = set(states)
        for q in self.initial:
            if q not in declared:
                raise ModelError(f"{self.name}: initial state {q!r} is not declared")
        seen = set()
        for t in self.transitions:
            src, tagged, dst = t
            base, _ = split_label(tagged)
            if src not in declared or dst not in declared:
                bad = src if src not in declared else dst
                raise ModelError(f"{self.name}: unknown state {bad!r}")
            if base not in self.alphabet:
                raise ModelError(f"{self.name}: label {base!r} is not in the alphabet")
            if t in seen:
                raise ModelError(f"{self.name}: duplicate transition {t!r}")
            seen.add(t)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "initial", tuple(self.initial))
        object.__setattr__(self, "transitions", tuple(tuple(t) for t in self.transitions))

    def as_open_lts(self) -> Lts:
        """View the process on its own, letting every tagged action fire freely."""
        rel = []
        seen = set()
        for src, tagged, dst in self.transitions:
            t = (src, split_label(tagged)[0], dst)
            if t not in seen:
                seen.add(t)
                rel.append(t)
        return Lts(self.alphabet, self.states, self.initial, tuple(rel))


def compose(processes: Sequence[ProcessLts]) -> Lts:
    """Reachable rendezvous composition of ``processes``.

    A plain label moves one process alone.  A send ``a!`` in one process fires
    together with a receive ``a?`` in exactly one other process, producing
    ``a``; every enabled sender/receiver pairing is a separate move.
    Unmatched sends and receives are blocked.  Composite state names join
    the component names with ``"."`` in process order.
    """
    if not processes:
        raise ModelError("no processes to compose")
    alphabet = processes[0].alphabet
    for p in processes[1:]:
        if p.alphabet != alphabet:
            raise ModelError(f"process {p.name} uses a different alphabet")

    # per process: state -> list of (base, tag, target)
    moves = []
    for p in processes:
        table: dict[str, list[tuple[str, str, str]]] = {q: [] for q in p.states}
        for src, tagged, dst in p.transitions:
            base, tag = split_label(tagged)
            table[src].append((base, tag, dst))
        moves.append(table)

    def name(config: tuple[str, ...]) -> str:
        return ".".join(config)

    starts = [tuple(c) for c in cartesian(*(p.initial for p in processes))]
    index = {c: None for c in starts}
    order = list(starts)
    queue = deque(starts)
    rel: list[Transition] = []
    seen_rel: set[Transition] = set()

    def emit(src, label, dst):
        t = (name(src), label, name(dst))
        if t not in seen_rel:
            seen_rel.add(t)
            rel.append(t)
        if dst not in index:
            index[dst] = None
            order.append(dst)
            queue.append(dst)

    while queue:
        config = queue.popleft()
        for i, table in enumerate(moves):
            for base, tag, dst in table[config[i]]:
                if tag == PLAIN:
                    nxt = list(config)
                    nxt[i] = dst
                    emit(config, base, tuple(nxt))
                elif tag == SEND:
                    for j, other in enumerate(moves):
                        if j == i:
                            continue
                        for base2, tag2, dst2 in other[config[j]]:
                            if tag2 == RECEIVE and base2 == base:
                                nxt = list(config)
                                nxt[i] = dst
                                nxt[j] = dst2
                                emit(config, base, tuple(nxt))

    return Lts(
        alphabet,
        tuple(name(c) for c in order),
        tuple(name(c) for c in starts),
        tuple(rel),
    )


@dataclass(frozen=True, eq=False)
class Dfa:
    """Total DFA whose value on a word counts visits to accepting states."""

    alphabet: Alphabet
    states: tuple[str, ...]
    initial: str
    accepting: frozenset[str]
    delta: Mapping[tuple[str, str], str]

    def __post_init__(self):
        states = _unique(self.states, "DFA state")
        declared = set(states)
        if self.initial not in declared:
            raise ModelError(f"DFA initial state {self.initial!r} is not declared")
        for q in self.accepting:
            if q not in declared:
                raise ModelError(f"DFA accepting state {q!r} is not declared")
        for (q, a), r in self.delta.items():
            if q not in declared or r not in declared:
                raise ModelError(f"DFA transition ({q!r}, {a!r}) uses an undeclared state")
            if a not in self.alphabet:
                raise ModelError(f"DFA label {a!r} is not in the alphabet")
        missing = [(q, a) for q in states for a in self.alphabet if (q, a) not in self.delta]
        if missing:
            q, a = missing[0]
            raise ModelError(f"non-total DFA: no transition from {q!r} on {a!r}")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        object.__setattr__(self, "delta", dict(self.delta))

    def step(self, state: str, label: str) -> str:
        return self.delta[(state, label)]

    def count(self, word: Iterable[str]) -> int:
        """Accepting states in the visited sequence ``q0, q1, ..., qm``.

        The start state is part of the sequence, so an accepting initial
        state contributes one visit even on the empty word.
        """
        q = self.initial
        n = 1 if q in self.accepting else 0
        for a in word:
            q = self.delta[(q, a)]
            if q in self.accepting:
                n += 1
        return n


@dataclass(frozen=True)
class FitnessTuple:
    components: tuple[Dfa, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise ModelError("a fitness tuple needs at least one component")
        for c in comps[1:]:
            if c.alphabet != comps[0].alphabet:
                raise ModelError("fitness components must share one alphabet")
        object.__setattr__(self, "components", comps)

    @property
    def alphabet(self) -> Alphabet:
        return self.components[0].alphabet

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __call__(self, word: Sequence[str]) -> tuple[int, ...]:
        return tuple(c.count(word) for c in self.components)


@dataclass(frozen=True)
class ProductAutomaton:
    """Reachable part of ``M || f``; states are indexed in BFS discovery order."""

    states: tuple[tuple[str, str], ...]
    initial: frozenset[int]
    accepting: frozenset[int]
    transitions: tuple[tuple[int, str, int], ...]

    def __len__(self) -> int:
        return len(self.states)

    def names(self) -> list[str]:
        return [f"{q}.{s}" for q, s in self.states]


def build_product(m: Lts, f: Dfa) -> ProductAutomaton:
    if m.alphabet != f.alphabet:
        raise ModelError("LTS and DFA alphabets differ")
    start = [(q, f.initial) for q in m.initial]
    index: dict[tuple[str, str], int] = {}
    order: list[tuple[str, str]] = []
    for pair in start:
        index[pair] = len(order)
        order.append(pair)
    queue = deque(start)
    edges = []
    while queue:
        q, s = queue.popleft()
        i = index[(q, s)]
        for a, q2 in m.successors(q):
            nxt = (q2, f.step(s, a))
            if nxt not in index:
                index[nxt] = len(order)
                order.append(nxt)
                queue.append(nxt)
            edges.append((i, a, index[nxt]))
    initial = frozenset(index[p] for p in start)
    accepting = frozenset(i for i, (_, s) in enumerate(order) if s in f.accepting)
    return ProductAutomaton(tuple(order), initial, accepting, tuple(edges))


def _label_set(alphabet: Alphabet, labels: Iterable[str], what: str) -> frozenset[str]:
    chosen = frozenset(labels)
    if not chosen:
        raise ModelError(f"{what} label set is empty")
    for a in chosen:
        if a not in alphabet:
            raise ModelError(f"{what} label {a!r} is not in the alphabet")
    return chosen


def make_sequence_counter(alphabet: Alphabet, left: Iterable[str], right: Iterable[str]) -> Dfa:
    """Counts completed sequences that open with a ``left`` label and close with a ``right`` one.

    State ``1`` waits for an opener, ``2`` waits for a closer, and ``3``
    (accepting) is entered on every completed sequence.
    """
    L = _label_set(alphabet, left, "left")
    R = _label_set(alphabet, right, "right")
    delta = {}
    for a in alphabet:
        delta[("1", a)] = "2" if a in L else "1"
        delta[("2", a)] = "3" if a in R else "2"
        delta[("3", a)] = "2" if a in L else "1"
    return Dfa(alphabet, ("1", "2", "3"), "1", frozenset({"3"}), delta)


def make_length_counter(alphabet: Alphabet) -> Dfa:
    delta = {}
    for a in alphabet:
        delta[("1", a)] = "2"
        delta[("2", a)] = "2"
    return Dfa(alphabet, ("1", "2"), "1", frozenset({"2"}), delta)


def make_label_counter(alphabet: Alphabet, labels: Iterable[str]) -> Dfa:
    """Counts occurrences of ``labels``: the accepting state is entered on each one."""
    chosen = _label_set(alphabet, labels, "counted")
    delta = {}
    for q in ("0", "1"):
        for a in alphabet:
            delta[(q, a)] = "1" if a in chosen else "0"
    return Dfa(alphabet, ("0", "1"), "0", frozenset({"1"}), delta)
