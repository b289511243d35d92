"""Built-in models and fitness functions shipped with the package.

Each fixture pairs a model file with a fitness file from ``ltsfit/data``.
The two-phase-commit managers and the alternating-bit sender/receiver
machines are stored in ``open`` mode: without their environments there is
nobody to synchronize with, so they are exercised as standalone systems.
"""

from __future__ import annotations

from dataclasses import dataclass

from .aggregate import AggregateExpr
from .model import Alphabet, Dfa, FitnessTuple, Lts, ProductAutomaton, build_product
from .modelio import FitnessFile, ModelFile, builtin_text, parse_fitness, parse_model


@dataclass(frozen=True)
class Fixture:
    name: str
    model_file: str
    fitness_file: str

    def model(self) -> ModelFile:
        return parse_model(builtin_text(self.model_file))

    def lts(self) -> Lts:
        return self.model().lts()

    def fitness(self) -> FitnessFile:
        return parse_fitness(builtin_text(self.fitness_file), self.model().alphabet)


_TABLE = [
    ("toy", "toy.json", "toy_fitness.json"),
    ("good", "simple_comm_good.json", "rate_fitness.json"),
    ("bad", "simple_comm_bad.json", "rate_fitness.json"),
    ("2pc-H", "tpc_H.json", "tpc_fitness.json"),
    ("2pc-A1", "tpc_A1.json", "tpc_fitness.json"),
    ("2pc-A2", "tpc_A2.json", "tpc_fitness.json"),
    ("abp-rec-H", "abp_rec_H.json", "abp_fitness.json"),
    ("abp-rec-A", "abp_rec_A.json", "abp_fitness.json"),
    ("abp-sndr-H", "abp_sndr_H.json", "abp_fitness.json"),
    ("abp-sndr-A", "abp_sndr_A.json", "abp_fitness.json"),
]

FIXTURES: dict[str, Fixture] = {name: Fixture(name, m, f) for name, m, f in _TABLE}


def fixture(name: str) -> Fixture:
    try:
        return FIXTURES[name]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(FIXTURES)}") from None


def simple_comm() -> ModelFile:
    """The three processes E, G and B in one file."""
    return parse_model(builtin_text("simple_comm.json"))


def good_system() -> Lts:
    return fixture("good").lts()


def bad_system() -> Lts:
    return fixture("bad").lts()


def rate_fitness(alphabet: Alphabet) -> FitnessFile:
    return parse_fitness(builtin_text("rate_fitness.json"), alphabet)


def toy_system() -> tuple[Lts, Dfa]:
    """An LTS and DFA whose product is the two-state toy automaton."""
    fx = fixture("toy")
    return fx.lts(), fx.fitness().fitness.components[0]


def toy_product() -> ProductAutomaton:
    """States ``s0`` (initial) and ``s1`` (accepting); edges s0->s0, s0->s1, s1->s0."""
    m, f = toy_system()
    return build_product(m, f)


def constant_one_system() -> tuple[Lts, FitnessTuple, AggregateExpr]:
    """One state with a ``$`` self-loop, counted by a ``$`` counter over the length."""
    from .model import make_label_counter, make_length_counter

    sigma = Alphabet(("$",))
    m = Lts(sigma, ("q",), ("q",), (("q", "$", "q"),))
    f = FitnessTuple((make_label_counter(sigma, ["$"]), make_length_counter(sigma)))
    return m, f, AggregateExpr.parse("x1 / x2", 2)
