"""Command-line front end: ``ltsfit evaluate|compare|validate|inspect|series``."""

from __future__ import annotations

import argparse
import sys
import time
from typing import Sequence

from .analysis import (
    BACKENDS,
    COMPARATORS,
    DEFAULT_CHECK_K,
    DEFAULT_K,
    FitnessEvaluator,
    Status,
    Verdict,
    compare_scores,
    format_decimal,
    power_values,
)
from .fixtures import FIXTURES
from .model import ModelError
from .modelio import BUILTIN_PREFIX, FileFormatError, FitnessFile, ModelFile, load_fitness, load_model
from .oracle import fitness_image, xsum
from .recurrence import dump, recurrence_system

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_UNSETTLED = 2

SERIES_PRECISION = 7
DEFAULT_KS = [2**i for i in range(4, 14)]


class UsageError(Exception):
    pass


def _resolve(ref: str) -> tuple[ModelFile, str | None]:
    """Load a model; ``builtin:NAME`` may name a fixture, which brings its fitness file."""
    if ref.startswith(BUILTIN_PREFIX) and ref[len(BUILTIN_PREFIX):] in FIXTURES:
        fx = FIXTURES[ref[len(BUILTIN_PREFIX):]]
        return fx.model(), BUILTIN_PREFIX + fx.fitness_file
    return load_model(ref), None


def _load_pair(ref: str, fitness_ref: str | None) -> tuple[ModelFile, FitnessFile]:
    model, default_fitness = _resolve(ref)
    fitness_ref = fitness_ref or default_fitness
    if fitness_ref is None:
        raise UsageError(f"no --fitness given for model {ref}")
    return model, load_fitness(fitness_ref, model.alphabet)


def _checkpoints(args) -> tuple[int, int]:
    if args.k < 1 or args.check_k < 1:
        raise UsageError("K values must be at least 1")
    if args.check_k >= args.k:
        raise UsageError(f"--check-k ({args.check_k}) must be smaller than --k ({args.k})")
    return args.check_k, args.k


def _status_text(score) -> str:
    if score.status is Status.CONVERGED:
        return f"converged ({score.digits} agreed digits)"
    if score.status is Status.UNSTABLE:
        return f"unstable ({score.digits} agreed digits)"
    comps = ", ".join(f"h{i}" for i in score.undefined)
    return f"undefined ({comps})"


def _evaluate_one(label: str, model: ModelFile, ff: FitnessFile, args, out) -> tuple:
    k1, k2 = _checkpoints(args)
    lts = model.lts()
    ev = FitnessEvaluator(lts, ff.fitness, ff.aggregate, args.backend)
    report = ev.report(k1, k2)
    print(f"model: {label}", file=out)
    print(f"|M| = {len(lts.states)}", file=out)
    print(f"h = {ff.aggregate}", file=out)
    for k, s in ((k1, report.score1), (k2, report.score2)):
        print(f"K={k}: " + ", ".join(s.render(args.precision)), file=out)
    print(f"status: {_status_text(report.score2)}", file=out)
    return report


def cmd_evaluate(args, out) -> int:
    if len(args.model) != 1:
        raise UsageError("evaluate takes exactly one --model")
    model, ff = _load_pair(args.model[0], args.fitness)
    start = time.perf_counter()
    report = _evaluate_one(args.model[0], model, ff, args, out)
    if not args.no_timing:
        print(f"time: {time.perf_counter() - start:.3f} s", file=out)
    return EXIT_OK if report.status is Status.CONVERGED else EXIT_UNSETTLED


def cmd_compare(args, out) -> int:
    if len(args.model) != 2:
        raise UsageError("compare takes exactly two --model options")
    start = time.perf_counter()
    pair_a = _load_pair(args.model[0], args.fitness)
    # the second model is scored with the same fitness file as the first
    fitness_ref = args.fitness or _resolve(args.model[0])[1]
    model_b, _ = _resolve(args.model[1])
    pair_b = (model_b, load_fitness(fitness_ref, model_b.alphabet))
    comparator = args.compare or pair_a[1].comparator
    reports = []
    for tag, ref, (model, ff) in (("A", args.model[0], pair_a), ("B", args.model[1], pair_b)):
        print(f"[{tag}]", file=out)
        reports.append(_evaluate_one(ref, model, ff, args, out))
    verdict = compare_scores(reports[0].score2, reports[1].score2, comparator)
    print(f"comparator: {comparator}", file=out)
    print(f"verdict: {verdict.value}", file=out)
    if not args.no_timing:
        print(f"time: {time.perf_counter() - start:.3f} s", file=out)
    return EXIT_UNSETTLED if verdict is Verdict.INCOMPARABLE else EXIT_OK


def _corrupt(sys_):
    xi = [row[:] for row in sys_.xi]
    xi[0][0] += 1
    return type(sys_)(xi, sys_.v, sys_.state_index, sys_.d, sys_.a)


def cmd_validate(args, out) -> int:
    if args.max_n < 0:
        raise UsageError("--max-n must be non-negative")
    if args.model:
        targets = [(ref, *_load_pair(ref, args.fitness)) for ref in args.model]
    else:
        targets = [(name, fx.model(), fx.fitness()) for name, fx in FIXTURES.items()]
    ns = list(range(args.max_n + 1))
    all_ok = True
    print(f"{'model':<14} {'comp':<5} {'n':<7} result", file=out)
    for label, model, ff in targets:
        lts = model.lts()
        ev = FitnessEvaluator(lts, ff.fitness, ff.aggregate)
        oracle = [fitness_image(lts, ff.fitness, n) for n in ns]
        for i, s in enumerate(ev.systems, start=1):
            if args.corrupt_xi:
                s = _corrupt(s)
            got = power_values(s, [n + 1 for n in ns])
            verdict = "PASS"
            for n in ns:
                want = xsum(oracle[n], i)
                if got[n + 1] != want:
                    verdict = f"FAIL at n={n} (recurrence {got[n + 1]}, oracle {want})"
                    all_ok = False
                    break
            print(f"{label:<14} f{i:<4} 0..{args.max_n:<4} {verdict}", file=out)
    print("all checks passed" if all_ok else "some checks FAILED", file=out)
    return EXIT_OK if all_ok else EXIT_UNSETTLED


def cmd_inspect(args, out) -> int:
    if len(args.model) != 1:
        raise UsageError("inspect takes exactly one --model")
    model, ff = _load_pair(args.model[0], args.fitness)
    lts = model.lts()
    print(f"composed LTS: {len(lts.states)} states, {len(lts.transitions)} transitions", file=out)
    print("initial: " + " ".join(lts.initial), file=out)
    for src, a, dst in lts.transitions:
        print(f"  {src} -{a}-> {dst}", file=out)
    ev = FitnessEvaluator(lts, ff.fitness, ff.aggregate)
    for i, (p, s) in enumerate(zip(ev.products, ev.systems), start=1):
        print(f"== product with f{i}: {len(p)} states", file=out)
        print(dump(s, p.accepting, p.initial), file=out)
    return EXIT_OK


def _parse_ks(text: str) -> list[int]:
    try:
        ks = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad --ks list {text!r}") from None
    if not ks or min(ks) < 1:
        raise UsageError("--ks needs positive integers")
    return sorted(set(ks))


def cmd_series(args, out) -> int:
    if len(args.model) != 1:
        raise UsageError("series takes exactly one --model")
    ks = _parse_ks(args.ks) if args.ks else DEFAULT_KS
    places = SERIES_PRECISION if args.precision is None else args.precision
    model, ff = _load_pair(args.model[0], args.fitness)
    ev = FitnessEvaluator(model.lts(), ff.fitness, ff.aggregate, args.backend)
    rows = ev.series(ks)
    width = ff.aggregate.out_arity
    lines = ["K," + ",".join(f"comp{i}" for i in range(1, width + 1))]
    for k, score in rows:
        lines.append(f"{k}," + ",".join(score.render(places)))
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {len(rows)} rows to {args.out}", file=out)
    else:
        out.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ltsfit", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", action="append", default=[], metavar="PATH",
                        help="model file, or builtin:NAME for a bundled fixture (repeatable)")
    common.add_argument("--fitness", metavar="PATH", help="fitness file (defaults to the fixture's own)")
    common.add_argument("--k", type=int, default=DEFAULT_K)
    common.add_argument("--check-k", type=int, default=DEFAULT_CHECK_K)
    common.add_argument("--backend", choices=BACKENDS, default="exact")
    common.add_argument("--precision", type=int, default=None, help="decimal places (default 6; 7 for series)")
    common.add_argument("--no-timing", action="store_true", help="omit the wall-clock line")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("evaluate", parents=[common], help="K-approximation with a convergence check")
    p = sub.add_parser("compare", parents=[common], help="score two models and compare")
    p.add_argument("--compare", choices=COMPARATORS, help="override the fitness file's comparator")
    p = sub.add_parser("validate", parents=[common], help="check the recurrence against path enumeration")
    p.add_argument("--max-n", type=int, default=12)
    p.add_argument("--corrupt-xi", action="store_true", help=argparse.SUPPRESS)
    sub.add_parser("inspect", parents=[common], help="print products and recurrence matrices")
    p = sub.add_parser("series", parents=[common], help="CSV of K-approximations over a list of K")
    p.add_argument("--ks", metavar="CSV-LIST")
    p.add_argument("--out", metavar="PATH")
    return parser


COMMANDS = {
    "evaluate": cmd_evaluate,
    "compare": cmd_compare,
    "validate": cmd_validate,
    "inspect": cmd_inspect,
    "series": cmd_series,
}


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    if args.command != "series" and args.precision is None:
        args.precision = 6
    if args.precision is not None and args.precision < 0:
        print("error: --precision must be non-negative", file=sys.stderr)
        return EXIT_INPUT
    try:
        return COMMANDS[args.command](args, out)
    except (UsageError, FileFormatError, ModelError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
