"""Reading model and fitness files (UTF-8 JSON)."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .aggregate import AggregateError, AggregateExpr
from .analysis import COMPARATORS
from .model import (
    Alphabet,
    Dfa,
    FitnessTuple,
    Lts,
    ModelError,
    ProcessLts,
    compose,
    make_label_counter,
    make_length_counter,
    make_sequence_counter,
    split_label,
)

BUILTIN_PREFIX = "builtin:"
MODES = ("rendezvous", "open")


class FileFormatError(ValueError):
    """A model or fitness file could not be read."""


@dataclass(frozen=True)
class ModelFile:
    alphabet: Alphabet
    processes: tuple[ProcessLts, ...]
    mode: str = "rendezvous"

    def lts(self) -> Lts:
        """The system the file describes.

        In ``open`` mode each process is taken on its own terms: send and
        receive tags are dropped so the actions fire without a partner.
        """
        procs = self.processes
        if self.mode == "open":
            procs = tuple(_strip_tags(p) for p in procs)
        return compose(procs)


@dataclass(frozen=True)
class FitnessFile:
    fitness: FitnessTuple
    aggregate: AggregateExpr
    comparator: str = "geq"


def _strip_tags(p: ProcessLts) -> ProcessLts:
    rel = []
    seen = set()
    for src, tagged, dst in p.transitions:
        t = (src, split_label(tagged)[0], dst)
        if t not in seen:
            seen.add(t)
            rel.append(t)
    return ProcessLts(p.name, p.alphabet, p.states, p.initial, tuple(rel))


def _load_json(text: str, what: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{what}: syntax error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise FileFormatError(f"{what}: top level must be a JSON object")
    return doc


def _str_list(value, where: str) -> list[str]:
    if not isinstance(value, list) or not all(isinstance(x, str) for x in value):
        raise FileFormatError(f"{where} must be a list of strings")
    return value


def _triples(value, where: str) -> list[tuple[str, str, str]]:
    if not isinstance(value, list):
        raise FileFormatError(f"{where} must be a list")
    out = []
    for t in value:
        if not (isinstance(t, list) and len(t) == 3 and all(isinstance(x, str) for x in t)):
            raise FileFormatError(f"{where}: expected [source, label, target], got {t!r}")
        out.append(tuple(t))
    return out


def _alphabet(doc: dict, what: str) -> Alphabet:
    if "alphabet" not in doc:
        raise FileFormatError(f"{what}: missing 'alphabet'")
    try:
        return Alphabet(tuple(_str_list(doc["alphabet"], "alphabet")))
    except ModelError as exc:
        raise FileFormatError(f"{what}: {exc}") from None


def parse_model(text: str) -> ModelFile:
    doc = _load_json(text, "model file")
    alphabet = _alphabet(doc, "model file")
    mode = doc.get("mode", "rendezvous")
    if mode not in MODES:
        raise FileFormatError(f"model file: unknown mode {mode!r}")
    raw = doc.get("processes")
    if not raw:
        raise FileFormatError("model file: no processes")
    if not isinstance(raw, list):
        raise FileFormatError("model file: 'processes' must be a list")
    procs = []
    names = set()
    for i, p in enumerate(raw):
        if not isinstance(p, dict):
            raise FileFormatError(f"process #{i + 1} must be an object")
        name = p.get("name", f"P{i + 1}")
        if name in names:
            raise FileFormatError(f"duplicate process name {name!r}")
        names.add(name)
        where = f"process {name}"
        try:
            procs.append(
                ProcessLts(
                    name,
                    alphabet,
                    tuple(_str_list(p.get("states"), f"{where}: states")),
                    tuple(_str_list(p.get("initial", []), f"{where}: initial")),
                    tuple(_triples(p.get("transitions", []), f"{where}: transitions")),
                )
            )
        except ModelError as exc:
            raise FileFormatError(str(exc)) from None
    return ModelFile(alphabet, tuple(procs), mode)


def parse_model_file(text: str) -> tuple[Alphabet, list[ProcessLts]]:
    m = parse_model(text)
    return m.alphabet, list(m.processes)


def _component(entry, alphabet: Alphabet, index: int) -> Dfa:
    where = f"fitness component {index}"
    if not isinstance(entry, dict) or "type" not in entry:
        raise FileFormatError(f"{where}: expected an object with a 'type'")
    kind = entry["type"]
    try:
        if kind == "sequence_counter":
            left = _str_list(entry.get("left"), f"{where}: left")
            right = _str_list(entry.get("right"), f"{where}: right")
            return make_sequence_counter(alphabet, left, right)
        if kind == "length_counter":
            return make_length_counter(alphabet)
        if kind == "label_counter":
            return make_label_counter(alphabet, _str_list(entry.get("labels"), f"{where}: labels"))
        if kind == "dfa":
            states = tuple(_str_list(entry.get("states"), f"{where}: states"))
            delta = {}
            for q, a, r in _triples(entry.get("delta", []), f"{where}: delta"):
                if (q, a) in delta:
                    raise FileFormatError(f"{where}: two transitions from {q!r} on {a!r}")
                delta[(q, a)] = r
            return Dfa(
                alphabet,
                states,
                entry.get("initial"),
                frozenset(_str_list(entry.get("accepting", []), f"{where}: accepting")),
                delta,
            )
    except ModelError as exc:
        raise FileFormatError(f"{where}: {exc}") from None
    raise FileFormatError(f"{where}: unknown type {kind!r}")


def parse_fitness(text: str, alphabet: Alphabet | None = None) -> FitnessFile:
    """Parse a fitness file against the model's alphabet.

    A fitness file may carry its own ``alphabet``; it is used only when no
    model alphabet is given, and must otherwise match it.
    """
    doc = _load_json(text, "fitness file")
    if "alphabet" in doc:
        own = _alphabet(doc, "fitness file")
        if alphabet is not None and set(own) != set(alphabet):
            raise FileFormatError("fitness file: alphabet differs from the model's")
        alphabet = alphabet or own
    if alphabet is None:
        raise FileFormatError("fitness file: no alphabet available")
    raw = doc.get("fitness")
    if not raw or not isinstance(raw, list):
        raise FileFormatError("fitness file: 'fitness' must be a non-empty list")
    comps = tuple(_component(c, alphabet, i + 1) for i, c in enumerate(raw))
    text_h = doc.get("aggregate", "x1")
    if not isinstance(text_h, str):
        raise FileFormatError("fitness file: 'aggregate' must be a string")
    try:
        h = AggregateExpr.parse(text_h, len(comps))
    except AggregateError as exc:
        raise FileFormatError(f"fitness file: {exc}") from None
    comparator = doc.get("compare", "geq")
    if comparator not in COMPARATORS:
        raise FileFormatError(f"fitness file: unknown comparator {comparator!r}")
    return FitnessFile(FitnessTuple(comps), h, comparator)


def parse_fitness_file(text: str, alphabet: Alphabet | None = None):
    f = parse_fitness(text, alphabet)
    return f.fitness, f.aggregate, f.comparator


def builtin_text(name: str) -> str:
    """Contents of a bundled data file, e.g. ``simple_comm_good.json``."""
    try:
        return resources.files("ltsfit.data").joinpath(name).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise FileFormatError(f"no built-in file {name!r}") from None


def read_source(ref: str) -> str:
    """Text of a path, or of a bundled file when ``ref`` is ``builtin:NAME``."""
    if ref.startswith(BUILTIN_PREFIX):
        name = ref[len(BUILTIN_PREFIX):]
        if not name.endswith(".json"):
            name += ".json"
        return builtin_text(name)
    try:
        return Path(ref).read_text(encoding="utf-8")
    except OSError as exc:
        raise FileFormatError(f"cannot read {ref}: {exc.strerror}") from None


def load_model(ref: str) -> ModelFile:
    return parse_model(read_source(ref))


def load_fitness(ref: str, alphabet: Alphabet | None = None) -> FitnessFile:
    return parse_fitness(read_source(ref), alphabet)
